"""The archive: task instances, activity instances, information elements,
and the episodic DS/RS graph between elements.

All state derives from an append-only journal (see journal.py); every
mutating method validates preconditions, appends exactly one record, then
applies it. Replaying the same journal therefore always reconstructs the
same state, byte-for-byte in canonical export form.

Edge direction convention: a DS edge points from the satisfying element to
the demanding one (the source was created to satisfy a need arising in the
target); an RS edge points from the referrer to the referee. DS edges stay
within one task instance and their subgraph is acyclic; RS edges may cross
instances.

Concurrency: single writer, any number of readers. Mutations must be
serialized by the owner (the service wraps them in a lock); reads touch
only immutable records and plain dicts.
"""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from .canonical import canonical_document, format_timestamp, parse_timestamp
from .errors import ConflictError, InvalidInputError, JournalError, NotFoundError, ValidationReport
from .journal import JournalRecord, JournalWriter, read_journal
from .schema import TaskTypeSchema, parse_schema, schema_to_dict, serialize_schema

EDGE_KINDS = ("DS", "RS")

# Direction labels on context-subgraph nodes, read from the discovering node:
# the discoverer supports / is supported by / refers to / is referred to by it.
_LABEL_OUT = {"DS": "supports", "RS": "refers"}
_LABEL_IN = {"DS": "supported-by", "RS": "referred-by"}

_SNAPSHOT_RE = re.compile(r"snapshot-(\d+)\.json$")


def wall_clock() -> int:
    return int(time.time() * 1000)


class LogicalClock:
    """Deterministic clock for seeded runs: fixed epoch, fixed step per append."""

    def __init__(self, start_ms: int = 1735689600000, step_ms: int = 1000):
        self._next = start_ms
        self._step = step_ms

    def __call__(self) -> int:
        value = self._next
        self._next += self._step
        return value

    def advance_past(self, epoch_ms: int) -> None:
        self._next = max(self._next, epoch_ms + self._step)


@dataclass
class TaskInstance:
    id: str
    schema_id: str
    schema_version: int
    title: str
    actor: str
    status: str  # "open" | "closed"
    started_at: str
    closed_at: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "schema_id": self.schema_id,
            "schema_version": self.schema_version,
            "title": self.title,
            "actor": self.actor,
            "status": self.status,
            "started_at": self.started_at,
            "closed_at": self.closed_at,
        }


@dataclass
class ActivityInstance:
    id: str
    instance: str
    category: str
    status: str  # "active" | "ended"
    started_at: str
    ended_at: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "instance": self.instance,
            "category": self.category,
            "status": self.status,
            "started_at": self.started_at,
            "ended_at": self.ended_at,
        }


@dataclass
class InformationElement:
    id: str
    instance: str
    activity: str
    category: str
    author: str
    created_at: str
    body: str
    attachments: tuple[str, ...] = ()
    override: bool = False  # set when the produces check was bypassed
    retracted: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "instance": self.instance,
            "activity": self.activity,
            "category": self.category,
            "author": self.author,
            "created_at": self.created_at,
            "body": self.body,
            "attachments": list(self.attachments),
            "override": self.override,
            "retracted": self.retracted,
        }


@dataclass(frozen=True)
class EpisodicEdge:
    from_element: str
    to_element: str
    kind: str  # "DS" | "RS"
    created_at: str
    note: str | None = None

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.from_element, self.to_element, self.kind)

    def to_dict(self) -> dict:
        return {
            "from": self.from_element,
            "to": self.to_element,
            "kind": self.kind,
            "created_at": self.created_at,
            "note": self.note,
        }


@dataclass
class SubgraphNode:
    id: str
    category: str
    activity: str
    instance: str
    external: bool = False
    distance: int | None = None
    direction: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "category": self.category,
            "activity": self.activity,
            "instance": self.instance,
            "external": self.external,
            "distance": self.distance,
            "direction": self.direction,
        }


@dataclass
class ContextSubgraph:
    focus: str | None
    nodes: list[SubgraphNode]
    edges: list[EpisodicEdge]

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}

    def node(self, node_id: str) -> SubgraphNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def to_dict(self) -> dict:
        return {
            "focus": self.focus,
            "nodes": [n.to_dict() for n in sorted(self.nodes, key=lambda n: n.id)],
            "edges": [e.to_dict() for e in sorted(self.edges, key=lambda e: e.key)],
        }


@dataclass
class ProfileRow:
    schema_id: str
    schema_version: int
    activity_category: str
    content_category: str
    count: int
    evidence: list[str]

    def to_dict(self) -> dict:
        return {
            "schema_id": self.schema_id,
            "schema_version": self.schema_version,
            "activity_category": self.activity_category,
            "content_category": self.content_category,
            "count": self.count,
            "evidence": self.evidence,
        }


@dataclass
class ProfileReport:
    actor: str
    rows: list[ProfileRow] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(r.count for r in self.rows)

    def to_dict(self) -> dict:
        return {"actor": self.actor, "rows": [r.to_dict() for r in self.rows], "total": self.total}


class Archive:
    """Open with :meth:`Archive.open`; a directory of None keeps everything in memory."""

    def __init__(self, directory: Path | None, seed: int | None = None, clock=None):
        self._directory = directory
        self._rng = random.Random(seed)
        if clock is None:
            clock = LogicalClock() if seed is not None else wall_clock
        self._clock = clock
        self._schemas: dict[tuple[str, int], TaskTypeSchema] = {}
        self._instances: dict[str, TaskInstance] = {}
        self._activities: dict[str, ActivityInstance] = {}
        self._elements: dict[str, InformationElement] = {}
        self._edges: list[EpisodicEdge] = []
        self._edge_keys: set[tuple[str, str, str]] = set()
        self._out: dict[str, list[EpisodicEdge]] = {}
        self._in: dict[str, list[EpisodicEdge]] = {}
        self._active: dict[str, str] = {}  # instance id -> active activity id
        self._seq = 0
        self._writer = JournalWriter(directory)

    # -- lifecycle ----------------------------------------------------------

    @classmethod
    def open(cls, path: str | Path | None, *, seed: int | None = None, clock=None) -> "Archive":
        """Open (or create) an archive; state equals replay of its journal."""
        if path is None:
            return cls(None, seed=seed, clock=clock)
        directory = Path(path)
        directory.mkdir(parents=True, exist_ok=True)

        snapshot_seq = 0
        snapshot_path: Path | None = None
        for candidate in directory.iterdir():
            match = _SNAPSHOT_RE.match(candidate.name)
            if match and int(match.group(1)) > snapshot_seq:
                snapshot_seq = int(match.group(1))
                snapshot_path = candidate

        records = read_journal(directory)
        last_seq = records[-1].seq if records else 0
        if snapshot_seq > last_seq:
            raise JournalError(
                "journal_gap",
                f"journal ends at seq {last_seq} but snapshot-{snapshot_seq}.json exists",
                seq=last_seq + 1,
            )

        archive = cls(directory, seed=seed, clock=clock)
        if snapshot_path is not None:
            archive._load_snapshot(snapshot_path, snapshot_seq)
        for record in records:
            if record.seq > snapshot_seq:
                archive._apply(record)
        if archive._seq and isinstance(archive._clock, LogicalClock):
            archive._clock.advance_past(archive._last_ts_ms())
        return archive

    def close(self) -> None:
        self._writer.close()

    def _last_ts_ms(self) -> int:
        stamps = (
            [parse_timestamp(i.started_at) for i in self._instances.values()]
            + [parse_timestamp(e.created_at) for e in self._elements.values()]
        )
        return max(stamps, default=0)

    @property
    def seq(self) -> int:
        return self._seq

    @property
    def directory(self) -> Path | None:
        return self._directory

    # -- id and record plumbing ---------------------------------------------

    def _new_id(self, kind: str, epoch_ms: int) -> str:
        while True:
            candidate = f"{kind}-{epoch_ms:013d}-{self._rng.getrandbits(32):08x}"
            if candidate not in self._instances and candidate not in self._activities and candidate not in self._elements:
                return candidate

    def _commit(self, op: str, payload: dict, epoch_ms: int) -> JournalRecord:
        record = JournalRecord(seq=self._seq + 1, ts=format_timestamp(epoch_ms), op=op, payload=payload)
        self._writer.append(record)
        self._apply(record)
        return record

    def _apply(self, record: JournalRecord) -> None:
        handler = getattr(self, f"_apply_{record.op}", None)
        if handler is None:
            raise JournalError("journal_corrupt", f"unknown operation {record.op!r} at seq {record.seq}", seq=record.seq)
        handler(record.ts, record.payload)
        self._seq = record.seq

    # -- schema registry -----------------------------------------------------

    def add_schema(self, schema: TaskTypeSchema) -> TaskTypeSchema:
        key = (schema.id, schema.version)
        if key in self._schemas:
            raise ConflictError("schema_exists", f"schema {schema.id!r} version {schema.version} already loaded")
        self._commit("add_schema", {"schema": schema_to_dict(schema)}, self._clock())
        return schema

    def _apply_add_schema(self, ts: str, payload: dict) -> None:
        schema = parse_schema(serialize_schema_payload(payload["schema"]))
        self._schemas[(schema.id, schema.version)] = schema

    def get_schema(self, schema_id: str, version: int) -> TaskTypeSchema:
        try:
            return self._schemas[(schema_id, version)]
        except KeyError:
            raise NotFoundError("unknown_schema", f"schema {schema_id!r} version {version} not loaded") from None

    def schemas(self) -> list[TaskTypeSchema]:
        return [self._schemas[k] for k in sorted(self._schemas)]

    def schema_for_instance(self, instance_id: str) -> TaskTypeSchema:
        instance = self.instance(instance_id)
        return self.get_schema(instance.schema_id, instance.schema_version)

    # -- task lifecycle -------------------------------------------------------

    def begin_instance(self, schema_id: str, schema_version: int, title: str, actor: str) -> TaskInstance:
        self.get_schema(schema_id, schema_version)
        if not title.strip():
            raise InvalidInputError("invalid_field", "title must be non-empty")
        if not actor.strip():
            raise InvalidInputError("invalid_field", "actor must be non-empty")
        epoch_ms = self._clock()
        payload = {
            "id": self._new_id("ti", epoch_ms),
            "schema_id": schema_id,
            "schema_version": schema_version,
            "title": title,
            "actor": actor,
        }
        record = self._commit("begin_instance", payload, epoch_ms)
        return self._instances[record.payload["id"]]

    def _apply_begin_instance(self, ts: str, payload: dict) -> None:
        instance = TaskInstance(
            id=payload["id"],
            schema_id=payload["schema_id"],
            schema_version=payload["schema_version"],
            title=payload["title"],
            actor=payload["actor"],
            status="open",
            started_at=ts,
        )
        self._instances[instance.id] = instance

    def close_instance(self, instance_id: str) -> TaskInstance:
        instance = self.instance(instance_id)
        if instance.status != "open":
            raise ConflictError("instance_closed", f"instance {instance_id!r} is already closed")
        if instance_id in self._active:
            raise ConflictError(
                "instance_has_active_activity",
                f"instance {instance_id!r} still has active activity {self._active[instance_id]!r}",
            )
        self._commit("close_instance", {"id": instance_id}, self._clock())
        return instance

    def _apply_close_instance(self, ts: str, payload: dict) -> None:
        instance = self._instances[payload["id"]]
        instance.status = "closed"
        instance.closed_at = ts

    def begin_activity(self, instance_id: str, category: str) -> ActivityInstance:
        instance = self.instance(instance_id)
        if instance.status != "open":
            raise ConflictError("instance_closed", f"instance {instance_id!r} is closed")
        if instance_id in self._active:
            raise ConflictError(
                "activity_already_active",
                f"instance {instance_id!r} already has active activity {self._active[instance_id]!r}",
            )
        schema = self.schema_for_instance(instance_id)
        if category not in schema.activity_ids():
            raise NotFoundError("unknown_activity_category", f"no activity category {category!r} in schema {schema.id}")
        epoch_ms = self._clock()
        payload = {"id": self._new_id("ai", epoch_ms), "instance": instance_id, "category": category}
        record = self._commit("begin_activity", payload, epoch_ms)
        return self._activities[record.payload["id"]]

    def _apply_begin_activity(self, ts: str, payload: dict) -> None:
        activity = ActivityInstance(
            id=payload["id"],
            instance=payload["instance"],
            category=payload["category"],
            status="active",
            started_at=ts,
        )
        self._activities[activity.id] = activity
        self._active[activity.instance] = activity.id

    def end_activity(self, activity_id: str) -> ActivityInstance:
        activity = self.activity(activity_id)
        if activity.status != "active":
            raise ConflictError("activity_not_active", f"activity {activity_id!r} already ended")
        self._commit("end_activity", {"id": activity_id}, self._clock())
        return activity

    def _apply_end_activity(self, ts: str, payload: dict) -> None:
        activity = self._activities[payload["id"]]
        activity.status = "ended"
        activity.ended_at = ts
        if self._active.get(activity.instance) == activity.id:
            del self._active[activity.instance]

    # -- elements and edges ----------------------------------------------------

    def record_element(
        self,
        instance_id: str,
        activity_id: str,
        category: str,
        body: str,
        *,
        author: str,
        ds_targets: tuple[str, ...] | list[str] = (),
        rs_targets: tuple[str, ...] | list[str] = (),
        attachments: tuple[str, ...] | list[str] = (),
        override: bool = False,
    ) -> InformationElement:
        """Persist one element plus its DS/RS edges atomically (one journal record)."""
        self.instance(instance_id)
        activity = self.activity(activity_id)
        if activity.instance != instance_id:
            raise InvalidInputError(
                "activity_not_in_instance",
                f"activity {activity_id!r} belongs to instance {activity.instance!r}, not {instance_id!r}",
            )
        if activity.status != "active":
            raise ConflictError("activity_not_active", f"activity {activity_id!r} is not active")
        schema = self.schema_for_instance(instance_id)
        if category not in schema.content_ids():
            raise NotFoundError("unknown_content_category", f"no content category {category!r} in schema {schema.id}")
        if not body.strip():
            raise InvalidInputError("empty_body", "element body must be non-empty")
        if not author.strip():
            raise InvalidInputError("invalid_field", "author must be non-empty")

        mismatch = category not in schema.produces(activity.category)
        if mismatch and not override:
            raise InvalidInputError(
                "produces_mismatch",
                f"activity category {activity.category!r} does not produce {category!r} (set override to record anyway)",
            )

        seen: set[tuple[str, str]] = set()
        for kind, targets in (("DS", ds_targets), ("RS", rs_targets)):
            for target in targets:
                if target not in self._elements:
                    raise NotFoundError("unknown_element", f"{kind} target {target!r} does not exist")
                if (kind, target) in seen:
                    raise ConflictError("duplicate_edge", f"duplicate {kind} target {target!r}")
                seen.add((kind, target))
                if kind == "DS" and self._elements[target].instance != instance_id:
                    raise InvalidInputError(
                        "ds_cross_instance",
                        f"DS target {target!r} is in another task instance",
                    )

        epoch_ms = self._clock()
        payload = {
            "id": self._new_id("ie", epoch_ms),
            "instance": instance_id,
            "activity": activity_id,
            "category": category,
            "author": author,
            "body": body,
            "attachments": list(attachments),
            "override": mismatch and override,
            "ds_targets": list(ds_targets),
            "rs_targets": list(rs_targets),
        }
        record = self._commit("record_element", payload, epoch_ms)
        return self._elements[record.payload["id"]]

    def _apply_record_element(self, ts: str, payload: dict) -> None:
        element = InformationElement(
            id=payload["id"],
            instance=payload["instance"],
            activity=payload["activity"],
            category=payload["category"],
            author=payload["author"],
            created_at=ts,
            body=payload["body"],
            attachments=tuple(payload["attachments"]),
            override=payload["override"],
        )
        self._elements[element.id] = element
        for target in payload["ds_targets"]:
            self._add_edge(EpisodicEdge(element.id, target, "DS", ts))
        for target in payload["rs_targets"]:
            self._add_edge(EpisodicEdge(element.id, target, "RS", ts))

    def link_elements(self, from_id: str, to_id: str, kind: str, note: str | None = None) -> EpisodicEdge:
        if kind not in EDGE_KINDS:
            raise InvalidInputError("invalid_kind", f"edge kind must be DS or RS, got {kind!r}")
        if from_id == to_id:
            raise InvalidInputError("self_link", f"element {from_id!r} may not link to itself")
        source = self.element(from_id)
        target = self.element(to_id)
        if (from_id, to_id, kind) in self._edge_keys:
            raise ConflictError("duplicate_edge", f"edge ({from_id!r}, {to_id!r}, {kind}) already exists")
        if kind == "DS":
            if source.instance != target.instance:
                raise InvalidInputError("ds_cross_instance", "DS edges must stay within one task instance")
            if self._ds_reaches(to_id, from_id):
                raise InvalidInputError("ds_cycle", f"DS edge {from_id!r} -> {to_id!r} would close a cycle")
        epoch_ms = self._clock()
        payload = {"from": from_id, "to": to_id, "kind": kind, "note": note}
        self._commit("link_elements", payload, epoch_ms)
        return self._edges[-1]

    def _apply_link_elements(self, ts: str, payload: dict) -> None:
        self._add_edge(EpisodicEdge(payload["from"], payload["to"], payload["kind"], ts, payload["note"]))

    def _add_edge(self, edge: EpisodicEdge) -> None:
        self._edges.append(edge)
        self._edge_keys.add(edge.key)
        self._out.setdefault(edge.from_element, []).append(edge)
        self._in.setdefault(edge.to_element, []).append(edge)

    def _ds_reaches(self, start: str, goal: str) -> bool:
        """True if a DS path start -> ... -> goal already exists."""
        frontier = [start]
        seen = {start}
        while frontier:
            node = frontier.pop()
            if node == goal:
                return True
            for edge in self._out.get(node, ()):
                if edge.kind == "DS" and edge.to_element not in seen:
                    seen.add(edge.to_element)
                    frontier.append(edge.to_element)
        return False

    def retract_element(self, element_id: str, reason: str | None = None) -> InformationElement:
        """Mark an element superseded; it stays in the store and keeps its edges."""
        element = self.element(element_id)
        if element.retracted:
            raise ConflictError("already_retracted", f"element {element_id!r} is already retracted")
        self._commit("retract_element", {"id": element_id, "reason": reason}, self._clock())
        return element

    def _apply_retract_element(self, ts: str, payload: dict) -> None:
        self._elements[payload["id"]].retracted = True

    # -- lookups -----------------------------------------------------------------

    def instance(self, instance_id: str) -> TaskInstance:
        try:
            return self._instances[instance_id]
        except KeyError:
            raise NotFoundError("unknown_instance", f"no task instance {instance_id!r}") from None

    def activity(self, activity_id: str) -> ActivityInstance:
        try:
            return self._activities[activity_id]
        except KeyError:
            raise NotFoundError("unknown_activity", f"no activity instance {activity_id!r}") from None

    def element(self, element_id: str) -> InformationElement:
        try:
            return self._elements[element_id]
        except KeyError:
            raise NotFoundError("unknown_element", f"no information element {element_id!r}") from None

    def has_element(self, element_id: str) -> bool:
        return element_id in self._elements

    def instances(self) -> list[TaskInstance]:
        return [self._instances[k] for k in sorted(self._instances)]

    def activities(self) -> list[ActivityInstance]:
        return [self._activities[k] for k in sorted(self._activities)]

    def elements(self) -> list[InformationElement]:
        return [self._elements[k] for k in sorted(self._elements)]

    def edges(self) -> list[EpisodicEdge]:
        return sorted(self._edges, key=lambda e: e.key)

    def active_activity(self, instance_id: str) -> ActivityInstance | None:
        active_id = self._active.get(instance_id)
        return self._activities[active_id] if active_id else None

    def edges_of(self, element_id: str) -> tuple[list[EpisodicEdge], list[EpisodicEdge]]:
        """(outgoing, incoming) edges of an element, deterministically ordered."""
        self.element(element_id)
        outgoing = sorted(self._out.get(element_id, []), key=lambda e: e.key)
        incoming = sorted(self._in.get(element_id, []), key=lambda e: e.key)
        return outgoing, incoming

    # -- context queries -----------------------------------------------------------

    def episodic_context(self, element_id: str, depth: int) -> ContextSubgraph:
        """All elements within ``depth`` hops of the focus, traversing DS and RS
        edges in both directions; each node labeled with the direction of the
        edge by which it was first reached."""
        if depth < 1:
            raise InvalidInputError("invalid_depth", f"depth must be >= 1, got {depth}")
        focus = self.element(element_id)

        reached: dict[str, tuple[int, str]] = {element_id: (0, "self")}
        frontier = [element_id]
        for hop in range(1, depth + 1):
            next_frontier: list[str] = []
            for node in sorted(frontier):
                neighbors: list[tuple[str, str]] = []
                for edge in self._out.get(node, ()):
                    neighbors.append((edge.to_element, _LABEL_OUT[edge.kind]))
                for edge in self._in.get(node, ()):
                    neighbors.append((edge.from_element, _LABEL_IN[edge.kind]))
                for neighbor, label in sorted(neighbors):
                    if neighbor not in reached and neighbor in self._elements:
                        reached[neighbor] = (hop, label)
                        next_frontier.append(neighbor)
            frontier = next_frontier
            if not frontier:
                break

        nodes = []
        for node_id in sorted(reached):
            element = self._elements[node_id]
            distance, direction = reached[node_id]
            nodes.append(SubgraphNode(
                id=node_id,
                category=element.category,
                activity=element.activity,
                instance=element.instance,
                external=element.instance != focus.instance,
                distance=distance,
                direction=direction,
            ))
        node_ids = set(reached)
        edges = [e for e in self._edges if e.from_element in node_ids and e.to_element in node_ids]
        return ContextSubgraph(focus=element_id, nodes=nodes, edges=sorted(edges, key=lambda e: e.key))

    def instance_graph(self, instance_id: str) -> ContextSubgraph:
        """Every element of the instance plus all incident edges; endpoints in
        other instances are included and marked external."""
        self.instance(instance_id)
        member_ids = {e.id for e in self._elements.values() if e.instance == instance_id}
        edges = [
            e for e in self._edges
            if (e.from_element in member_ids or e.to_element in member_ids)
            and e.from_element in self._elements and e.to_element in self._elements
        ]
        node_ids = set(member_ids)
        for edge in edges:
            node_ids.add(edge.from_element)
            node_ids.add(edge.to_element)
        nodes = []
        for node_id in sorted(node_ids):
            element = self._elements[node_id]
            nodes.append(SubgraphNode(
                id=node_id,
                category=element.category,
                activity=element.activity,
                instance=element.instance,
                external=element.instance != instance_id,
            ))
        return ContextSubgraph(focus=None, nodes=nodes, edges=sorted(edges, key=lambda e: e.key))

    def expertise_profile(self, actor: str) -> ProfileReport:
        """Evidence-backed authorship counts per (schema, activity category,
        content category). Unknown actors yield an empty report."""
        groups: dict[tuple[str, int, str, str], list[str]] = {}
        for element in self._elements.values():
            if element.author != actor:
                continue
            activity = self._activities.get(element.activity)
            instance = self._instances.get(element.instance)
            if activity is None or instance is None:
                continue
            key = (instance.schema_id, instance.schema_version, activity.category, element.category)
            groups.setdefault(key, []).append(element.id)
        rows = [
            ProfileRow(
                schema_id=key[0],
                schema_version=key[1],
                activity_category=key[2],
                content_category=key[3],
                count=len(ids),
                evidence=sorted(ids),
            )
            for key, ids in sorted(groups.items())
        ]
        return ProfileReport(actor=actor, rows=rows)

    # -- consistency ------------------------------------------------------------------

    def integrity_check(self) -> ValidationReport:
        """Verify every type invariant over the whole store."""
        report = ValidationReport()

        for instance in self._instances.values():
            if (instance.schema_id, instance.schema_version) not in self._schemas:
                report.error("unknown_schema", f"instance {instance.id} pins missing schema", instance.id)
            if instance.closed_at is not None and instance.closed_at < instance.started_at:
                report.error("timestamp_order", f"instance {instance.id} closed before it started", instance.id)

        active_per_instance: dict[str, list[str]] = {}
        for activity in self._activities.values():
            if activity.instance not in self._instances:
                report.error("dangling_ref", f"activity {activity.id} references missing instance", activity.id)
            else:
                instance = self._instances[activity.instance]
                schema = self._schemas.get((instance.schema_id, instance.schema_version))
                if schema is not None and activity.category not in schema.activity_ids():
                    report.error(
                        "unknown_activity_category",
                        f"activity {activity.id} has category {activity.category!r} outside its schema",
                        activity.id,
                    )
            if activity.status == "active":
                active_per_instance.setdefault(activity.instance, []).append(activity.id)
            if activity.ended_at is not None and activity.ended_at < activity.started_at:
                report.error("timestamp_order", f"activity {activity.id} ended before it started", activity.id)
        for instance_id, ids in active_per_instance.items():
            if len(ids) > 1:
                report.error(
                    "multiple_active_activities",
                    f"instance {instance_id} has {len(ids)} active activities",
                    instance_id,
                )

        for element in self._elements.values():
            activity = self._activities.get(element.activity)
            if activity is None:
                report.error("dangling_ref", f"element {element.id} references missing activity", element.id)
                continue
            if activity.instance != element.instance:
                report.error("dangling_ref", f"element {element.id} disagrees with its activity about the instance", element.id)
            instance = self._instances.get(element.instance)
            schema = self._schemas.get((instance.schema_id, instance.schema_version)) if instance else None
            if schema is not None:
                if element.category not in schema.content_ids():
                    report.error("unknown_content_category", f"element {element.id} has category outside its schema", element.id)
                elif element.category not in schema.produces(activity.category) and not element.override:
                    report.error(
                        "produces_mismatch",
                        f"element {element.id} category {element.category!r} not produced by {activity.category!r} and not overridden",
                        element.id,
                    )
            if not element.body.strip():
                report.error("empty_body", f"element {element.id} has an empty body", element.id)

        seen_edges: set[tuple[str, str, str]] = set()
        for edge in self._edges:
            if edge.key in seen_edges:
                report.error("duplicate_edge", f"duplicate edge {edge.key}", edge.from_element)
            seen_edges.add(edge.key)
            if edge.from_element == edge.to_element:
                report.error("self_link", f"edge loops on {edge.from_element}", edge.from_element)
            missing = [x for x in (edge.from_element, edge.to_element) if x not in self._elements]
            for node in missing:
                report.error("dangling_edge", f"edge {edge.key} references missing element {node!r}", node)
            if edge.kind == "DS" and not missing:
                src, dst = self._elements[edge.from_element], self._elements[edge.to_element]
                if src.instance != dst.instance:
                    report.error("ds_cross_instance", f"DS edge {edge.key} crosses task instances", edge.from_element)

        if self._ds_has_cycle():
            report.error("ds_cycle", "DS subgraph contains a cycle")
        return report

    def _ds_has_cycle(self) -> bool:
        adjacency: dict[str, list[str]] = {}
        indegree: dict[str, int] = {}
        for edge in self._edges:
            if edge.kind != "DS":
                continue
            adjacency.setdefault(edge.from_element, []).append(edge.to_element)
            indegree[edge.to_element] = indegree.get(edge.to_element, 0) + 1
            indegree.setdefault(edge.from_element, 0)
        queue = [n for n, d in indegree.items() if d == 0]
        visited = 0
        while queue:
            node = queue.pop()
            visited += 1
            for nxt in adjacency.get(node, ()):
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    queue.append(nxt)
        return visited != len(indegree)

    # -- export / snapshot ----------------------------------------------------------

    def export_state(self) -> dict:
        return {
            "seq": self._seq,
            "schemas": [schema_to_dict(s) for s in self.schemas()],
            "instances": [i.to_dict() for i in self.instances()],
            "activities": [a.to_dict() for a in self.activities()],
            "elements": [e.to_dict() for e in self.elements()],
            "edges": [e.to_dict() for e in self.edges()],
        }

    def canonical_export(self) -> str:
        """Full state as one canonical JSON document; byte-stable for equal state."""
        return canonical_document(self.export_state())

    def write_snapshot(self) -> Path:
        if self._directory is None:
            raise InvalidInputError("no_directory", "in-memory archives cannot snapshot")
        path = self._directory / f"snapshot-{self._seq}.json"
        path.write_text(self.canonical_export(), encoding="utf-8")
        return path

    def _load_snapshot(self, path: Path, seq: int) -> None:
        import json as _json

        state = _json.loads(path.read_text(encoding="utf-8"))
        for schema_doc in state["schemas"]:
            schema = parse_schema(serialize_schema_payload(schema_doc))
            self._schemas[(schema.id, schema.version)] = schema
        for obj in state["instances"]:
            self._instances[obj["id"]] = TaskInstance(
                id=obj["id"], schema_id=obj["schema_id"], schema_version=obj["schema_version"],
                title=obj["title"], actor=obj["actor"], status=obj["status"],
                started_at=obj["started_at"], closed_at=obj["closed_at"],
            )
        for obj in state["activities"]:
            activity = ActivityInstance(
                id=obj["id"], instance=obj["instance"], category=obj["category"],
                status=obj["status"], started_at=obj["started_at"], ended_at=obj["ended_at"],
            )
            self._activities[activity.id] = activity
            if activity.status == "active":
                self._active[activity.instance] = activity.id
        for obj in state["elements"]:
            self._elements[obj["id"]] = InformationElement(
                id=obj["id"], instance=obj["instance"], activity=obj["activity"],
                category=obj["category"], author=obj["author"], created_at=obj["created_at"],
                body=obj["body"], attachments=tuple(obj["attachments"]),
                override=obj["override"], retracted=obj["retracted"],
            )
        for obj in state["edges"]:
            self._add_edge(EpisodicEdge(obj["from"], obj["to"], obj["kind"], obj["created_at"], obj["note"]))
        self._seq = state["seq"]
        if seq != state["seq"]:
            raise JournalError("journal_corrupt", f"snapshot file seq {seq} disagrees with content {state['seq']}")


def serialize_schema_payload(doc: dict) -> str:
    """Round a schema dict through its canonical text form."""
    from .canonical import canonical_document as _cd

    return _cd(doc)


def open_archive(path: str | Path | None, *, seed: int | None = None, clock=None) -> Archive:
    """Module-level convenience mirroring Archive.open."""
    return Archive.open(path, seed=seed, clock=clock)
