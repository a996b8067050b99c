"""Task-type schemas: the instance-independent categorical context.

A task-type schema is a small typed graph: activity categories joined by
flow edges (precedes / iterates-to / decomposes-into), content categories
attached to activities with produces/consumes roles, category-level DS/RS
templates, and a concept graph carrying domain semantics. Schemas are
immutable after load and safe for unrestricted concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .canonical import canonical_document
from .errors import NotFoundError, SchemaFormatError, ValidationReport

FLOW_KINDS = ("precedes", "iterates-to", "decomposes-into")
ASSOC_ROLES = ("produces", "consumes")
TEMPLATE_KINDS = ("DS", "RS")
CONCEPT_RELATIONS = ("broader", "narrower", "related")


@dataclass(frozen=True)
class ActivityCategory:
    id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class ContentCategory:
    id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class SemanticConcept:
    id: str
    label: str
    definition: str = ""
    related: tuple[tuple[str, str], ...] = ()  # (concept id, relation kind)


@dataclass(frozen=True)
class FlowEdge:
    from_activity: str
    to_activity: str
    kind: str  # one of FLOW_KINDS


@dataclass(frozen=True)
class AssocEdge:
    activity: str
    content: str
    role: str  # one of ASSOC_ROLES


@dataclass(frozen=True)
class TemplateEdge:
    from_content: str
    to_content: str
    kind: str  # one of TEMPLATE_KINDS


@dataclass(frozen=True)
class TaskTypeSchema:
    id: str
    name: str
    version: int
    activities: tuple[ActivityCategory, ...] = ()
    contents: tuple[ContentCategory, ...] = ()
    concepts: tuple[SemanticConcept, ...] = ()
    flow_edges: tuple[FlowEdge, ...] = ()
    assoc_edges: tuple[AssocEdge, ...] = ()
    template_edges: tuple[TemplateEdge, ...] = ()
    semantic_links: tuple[tuple[str, str], ...] = ()  # (category id, concept id)

    def activity_ids(self) -> set[str]:
        return {a.id for a in self.activities}

    def content_ids(self) -> set[str]:
        return {c.id for c in self.contents}

    def concept_ids(self) -> set[str]:
        return {c.id for c in self.concepts}

    def activity(self, activity_id: str) -> ActivityCategory:
        for a in self.activities:
            if a.id == activity_id:
                return a
        raise NotFoundError("unknown_activity_category", f"no activity category {activity_id!r} in schema {self.id}")

    def content(self, content_id: str) -> ContentCategory:
        for c in self.contents:
            if c.id == content_id:
                return c
        raise NotFoundError("unknown_content_category", f"no content category {content_id!r} in schema {self.id}")

    def concept(self, concept_id: str) -> SemanticConcept:
        for c in self.concepts:
            if c.id == concept_id:
                return c
        raise NotFoundError("unknown_concept", f"no concept {concept_id!r} in schema {self.id}")

    def produces(self, activity_id: str) -> set[str]:
        return {e.content for e in self.assoc_edges if e.activity == activity_id and e.role == "produces"}

    def consumes(self, activity_id: str) -> set[str]:
        return {e.content for e in self.assoc_edges if e.activity == activity_id and e.role == "consumes"}

    def associated_contents(self, activity_id: str) -> set[str]:
        """Content categories linked to the activity in either role."""
        return {e.content for e in self.assoc_edges if e.activity == activity_id}

    def concepts_for_category(self, category_id: str) -> list[str]:
        """Concept ids semantically linked to an activity or content category."""
        return sorted(c for cat, c in self.semantic_links if cat == category_id)


@dataclass
class ContextActivity:
    """One activity in a categorical context: where it sits relative to the focus."""

    id: str
    direction: str  # "self" | "before" | "after" | "both"
    distance: int

    def to_dict(self) -> dict:
        return {"id": self.id, "direction": self.direction, "distance": self.distance}


@dataclass
class CategoricalContext:
    """Neighborhood of an activity in the flow graph plus its informational surroundings."""

    focus: str
    radius: int
    activities: list[ContextActivity]
    contents: dict[str, list[tuple[str, str]]]  # activity id -> [(content id, role)]
    template_edges: list[TemplateEdge]
    concepts: dict[str, list[str]]  # category id -> concept ids

    def activity_ids(self) -> set[str]:
        return {a.id for a in self.activities}

    def to_dict(self) -> dict:
        return {
            "focus": self.focus,
            "radius": self.radius,
            "activities": [a.to_dict() for a in sorted(self.activities, key=lambda a: (a.distance, a.id))],
            "contents": {
                act: [{"content": c, "role": r} for c, r in pairs]
                for act, pairs in sorted(self.contents.items())
            },
            "template_edges": [
                {"from": t.from_content, "to": t.to_content, "kind": t.kind} for t in self.template_edges
            ],
            "concepts": {cat: ids for cat, ids in sorted(self.concepts.items())},
        }


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _fail(code: str, message: str) -> SchemaFormatError:
    return SchemaFormatError(code, message)


def _require_object(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise _fail("schema_bad_value", f"{where} must be an object, got {type(value).__name__}")
    return value


def _require_list(value, where: str) -> list:
    if not isinstance(value, list):
        raise _fail("schema_bad_value", f"{where} must be an array, got {type(value).__name__}")
    return value


def _take_fields(obj: dict, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise _fail("schema_unknown_field", f"{where}: unknown field(s) {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise _fail("schema_missing_field", f"{where}: missing field(s) {missing}")
    return obj


def _string(obj: dict, key: str, where: str, allow_empty: bool = False) -> str:
    value = obj.get(key, "")
    if not isinstance(value, str):
        raise _fail("schema_bad_value", f"{where}.{key} must be a string")
    if not allow_empty and not value:
        raise _fail("schema_bad_value", f"{where}.{key} must be non-empty")
    return value


def _enum(obj: dict, key: str, where: str, allowed: tuple[str, ...]) -> str:
    value = _string(obj, key, where)
    if value not in allowed:
        raise _fail("schema_bad_value", f"{where}.{key} must be one of {list(allowed)}, got {value!r}")
    return value


def parse_schema(text: str) -> TaskTypeSchema:
    """Parse and fully validate a schema document.

    Rejects unknown fields, duplicate ids, dangling edge references and
    structural violations; syntax errors report line/column.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaFormatError(
            "schema_syntax",
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc

    doc = _require_object(raw, "schema document")
    _take_fields(
        doc,
        "schema document",
        required=(
            "id", "name", "version", "activities", "contents", "concepts",
            "flow_edges", "assoc_edges", "template_edges", "semantic_links",
        ),
    )
    if not isinstance(doc["version"], int) or isinstance(doc["version"], bool) or doc["version"] < 1:
        raise _fail("schema_bad_value", "version must be a positive integer")

    activities = []
    for i, entry in enumerate(_require_list(doc["activities"], "activities")):
        obj = _take_fields(_require_object(entry, f"activities[{i}]"), f"activities[{i}]",
                           required=("id", "name"), optional=("description",))
        activities.append(ActivityCategory(
            id=_string(obj, "id", f"activities[{i}]"),
            name=_string(obj, "name", f"activities[{i}]"),
            description=_string(obj, "description", f"activities[{i}]", allow_empty=True),
        ))

    contents = []
    for i, entry in enumerate(_require_list(doc["contents"], "contents")):
        obj = _take_fields(_require_object(entry, f"contents[{i}]"), f"contents[{i}]",
                           required=("id", "name"), optional=("description",))
        contents.append(ContentCategory(
            id=_string(obj, "id", f"contents[{i}]"),
            name=_string(obj, "name", f"contents[{i}]"),
            description=_string(obj, "description", f"contents[{i}]", allow_empty=True),
        ))

    concepts = []
    for i, entry in enumerate(_require_list(doc["concepts"], "concepts")):
        obj = _take_fields(_require_object(entry, f"concepts[{i}]"), f"concepts[{i}]",
                           required=("id", "label"), optional=("definition", "related"))
        related = []
        for j, rel in enumerate(_require_list(obj.get("related", []), f"concepts[{i}].related")):
            rel_obj = _take_fields(_require_object(rel, f"concepts[{i}].related[{j}]"),
                                   f"concepts[{i}].related[{j}]", required=("concept", "kind"))
            related.append((
                _string(rel_obj, "concept", f"concepts[{i}].related[{j}]"),
                _enum(rel_obj, "kind", f"concepts[{i}].related[{j}]", CONCEPT_RELATIONS),
            ))
        concepts.append(SemanticConcept(
            id=_string(obj, "id", f"concepts[{i}]"),
            label=_string(obj, "label", f"concepts[{i}]"),
            definition=_string(obj, "definition", f"concepts[{i}]", allow_empty=True),
            related=tuple(related),
        ))

    flow_edges = []
    for i, entry in enumerate(_require_list(doc["flow_edges"], "flow_edges")):
        obj = _take_fields(_require_object(entry, f"flow_edges[{i}]"), f"flow_edges[{i}]",
                           required=("from", "to", "kind"))
        flow_edges.append(FlowEdge(
            from_activity=_string(obj, "from", f"flow_edges[{i}]"),
            to_activity=_string(obj, "to", f"flow_edges[{i}]"),
            kind=_enum(obj, "kind", f"flow_edges[{i}]", FLOW_KINDS),
        ))

    assoc_edges = []
    for i, entry in enumerate(_require_list(doc["assoc_edges"], "assoc_edges")):
        obj = _take_fields(_require_object(entry, f"assoc_edges[{i}]"), f"assoc_edges[{i}]",
                           required=("activity", "content", "role"))
        assoc_edges.append(AssocEdge(
            activity=_string(obj, "activity", f"assoc_edges[{i}]"),
            content=_string(obj, "content", f"assoc_edges[{i}]"),
            role=_enum(obj, "role", f"assoc_edges[{i}]", ASSOC_ROLES),
        ))

    template_edges = []
    for i, entry in enumerate(_require_list(doc["template_edges"], "template_edges")):
        obj = _take_fields(_require_object(entry, f"template_edges[{i}]"), f"template_edges[{i}]",
                           required=("from", "to", "kind"))
        template_edges.append(TemplateEdge(
            from_content=_string(obj, "from", f"template_edges[{i}]"),
            to_content=_string(obj, "to", f"template_edges[{i}]"),
            kind=_enum(obj, "kind", f"template_edges[{i}]", TEMPLATE_KINDS),
        ))

    semantic_links = []
    for i, entry in enumerate(_require_list(doc["semantic_links"], "semantic_links")):
        obj = _take_fields(_require_object(entry, f"semantic_links[{i}]"), f"semantic_links[{i}]",
                           required=("category", "concept"))
        semantic_links.append((
            _string(obj, "category", f"semantic_links[{i}]"),
            _string(obj, "concept", f"semantic_links[{i}]"),
        ))

    schema = TaskTypeSchema(
        id=_string(doc, "id", "schema document"),
        name=_string(doc, "name", "schema document"),
        version=doc["version"],
        activities=tuple(activities),
        contents=tuple(contents),
        concepts=tuple(concepts),
        flow_edges=tuple(flow_edges),
        assoc_edges=tuple(assoc_edges),
        template_edges=tuple(template_edges),
        semantic_links=tuple(semantic_links),
    )

    report = validate_schema(schema)
    if not report.ok:
        first = report.errors[0]
        raise SchemaFormatError(first.code, first.message)
    return schema


def schema_to_dict(schema: TaskTypeSchema) -> dict:
    """Canonical dictionary form: every array sorted by its natural key."""
    return {
        "id": schema.id,
        "name": schema.name,
        "version": schema.version,
        "activities": [
            {"id": a.id, "name": a.name, "description": a.description}
            for a in sorted(schema.activities, key=lambda a: a.id)
        ],
        "contents": [
            {"id": c.id, "name": c.name, "description": c.description}
            for c in sorted(schema.contents, key=lambda c: c.id)
        ],
        "concepts": [
            {
                "id": c.id,
                "label": c.label,
                "definition": c.definition,
                "related": [
                    {"concept": t, "kind": k} for t, k in sorted(c.related)
                ],
            }
            for c in sorted(schema.concepts, key=lambda c: c.id)
        ],
        "flow_edges": [
            {"from": e.from_activity, "to": e.to_activity, "kind": e.kind}
            for e in sorted(schema.flow_edges, key=lambda e: (e.from_activity, e.to_activity, e.kind))
        ],
        "assoc_edges": [
            {"activity": e.activity, "content": e.content, "role": e.role}
            for e in sorted(schema.assoc_edges, key=lambda e: (e.activity, e.content, e.role))
        ],
        "template_edges": [
            {"from": e.from_content, "to": e.to_content, "kind": e.kind}
            for e in sorted(schema.template_edges, key=lambda e: (e.from_content, e.to_content, e.kind))
        ],
        "semantic_links": [
            {"category": cat, "concept": con} for cat, con in sorted(schema.semantic_links)
        ],
    }


def serialize_schema(schema: TaskTypeSchema) -> str:
    """Canonical UTF-8 document; parse_schema(serialize_schema(s)) == s."""
    return canonical_document(schema_to_dict(schema))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _has_cycle(nodes: set[str], edges: list[tuple[str, str]]) -> list[str]:
    """Return one cycle (as a node list) in the directed graph, or []."""
    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for src, dst in edges:
        adjacency.setdefault(src, []).append(dst)
    color: dict[str, int] = {}
    stack_path: list[str] = []

    def visit(node: str) -> list[str]:
        color[node] = 1
        stack_path.append(node)
        for nxt in adjacency.get(node, ()):
            if color.get(nxt, 0) == 1:
                return stack_path[stack_path.index(nxt):] + [nxt]
            if color.get(nxt, 0) == 0:
                found = visit(nxt)
                if found:
                    return found
        stack_path.pop()
        color[node] = 2
        return []

    for start in sorted(adjacency):
        if color.get(start, 0) == 0:
            found = visit(start)
            if found:
                return found
    return []


def validate_schema(schema: TaskTypeSchema) -> ValidationReport:
    """Check all structural invariants; findings land in the report, nothing raises."""
    report = ValidationReport()

    for label, items in (("activity", schema.activities), ("content", schema.contents), ("concept", schema.concepts)):
        seen: set[str] = set()
        for item in items:
            if item.id in seen:
                report.error("schema_duplicate_id", f"duplicate {label} id {item.id!r}", item.id)
            seen.add(item.id)

    if schema.version < 1:
        report.error("schema_bad_value", f"version must be positive, got {schema.version}")

    act_ids = schema.activity_ids()
    content_ids = schema.content_ids()
    concept_ids = schema.concept_ids()

    seen_flow: set[tuple[str, str, str]] = set()
    for edge in schema.flow_edges:
        key = (edge.from_activity, edge.to_activity, edge.kind)
        if key in seen_flow:
            report.error("schema_duplicate_edge", f"duplicate flow edge {key}")
        seen_flow.add(key)
        for endpoint in (edge.from_activity, edge.to_activity):
            if endpoint not in act_ids:
                report.error("schema_dangling_ref", f"flow edge references unknown activity {endpoint!r}", endpoint)
        if edge.from_activity == edge.to_activity and edge.kind in ("precedes", "decomposes-into"):
            report.error("schema_self_loop", f"{edge.kind} edge may not loop on {edge.from_activity!r}", edge.from_activity)

    seen_assoc: set[tuple[str, str, str]] = set()
    for assoc in schema.assoc_edges:
        key = (assoc.activity, assoc.content, assoc.role)
        if key in seen_assoc:
            report.error("schema_duplicate_edge", f"duplicate association {key}")
        seen_assoc.add(key)
        if assoc.activity not in act_ids:
            report.error("schema_dangling_ref", f"association references unknown activity {assoc.activity!r}", assoc.activity)
        if assoc.content not in content_ids:
            report.error("schema_dangling_ref", f"association references unknown content category {assoc.content!r}", assoc.content)

    seen_template: set[tuple[str, str, str]] = set()
    for tmpl in schema.template_edges:
        key = (tmpl.from_content, tmpl.to_content, tmpl.kind)
        if key in seen_template:
            report.error("schema_duplicate_edge", f"duplicate template edge {key}")
        seen_template.add(key)
        for endpoint in (tmpl.from_content, tmpl.to_content):
            if endpoint not in content_ids:
                report.error("schema_dangling_ref", f"template edge references unknown content category {endpoint!r}", endpoint)

    for concept in schema.concepts:
        for target, _kind in concept.related:
            if target == concept.id:
                report.error("schema_self_loop", f"concept {concept.id!r} relates to itself", concept.id)
            elif target not in concept_ids:
                report.error("schema_dangling_ref", f"concept {concept.id!r} relates to unknown concept {target!r}", target)

    seen_links: set[tuple[str, str]] = set()
    for category, concept in schema.semantic_links:
        if (category, concept) in seen_links:
            report.error("schema_duplicate_edge", f"duplicate semantic link ({category!r}, {concept!r})")
        seen_links.add((category, concept))
        if category not in act_ids and category not in content_ids:
            report.error("schema_dangling_ref", f"semantic link references unknown category {category!r}", category)
        if concept not in concept_ids:
            report.error("schema_dangling_ref", f"semantic link references unknown concept {concept!r}", concept)

    # Iteration may cycle; sequencing and decomposition must not.
    for kind, label in (("decomposes-into", "decomposition"), ("precedes", "precedence")):
        edges = [
            (e.from_activity, e.to_activity)
            for e in schema.flow_edges
            if e.kind == kind and e.from_activity in act_ids and e.to_activity in act_ids
        ]
        cycle = _has_cycle(act_ids, edges)
        if cycle:
            report.error("schema_cycle", f"{label} cycle: {' -> '.join(cycle)}")

    produced = {e.content for e in schema.assoc_edges if e.role == "produces"}
    for content in schema.contents:
        if content.id not in produced:
            report.warning("content_never_produced", f"content category {content.id!r} is produced by no activity", content.id)

    return report


# ---------------------------------------------------------------------------
# Traversal
# ---------------------------------------------------------------------------

def _directional_bfs(schema: TaskTypeSchema, start: str, radius: int, forward: bool) -> dict[str, int]:
    """Hop distances from start following flow edges in one direction."""
    adjacency: dict[str, set[str]] = {}
    for edge in schema.flow_edges:
        src, dst = (edge.from_activity, edge.to_activity) if forward else (edge.to_activity, edge.from_activity)
        adjacency.setdefault(src, set()).add(dst)
    dist = {start: 0}
    frontier = [start]
    depth = 0
    while frontier and depth < radius:
        depth += 1
        next_frontier = []
        for node in frontier:
            for neighbor in sorted(adjacency.get(node, ())):
                if neighbor not in dist:
                    dist[neighbor] = depth
                    next_frontier.append(neighbor)
        frontier = next_frontier
    dist.pop(start, None)
    return dist


def categorical_context(schema: TaskTypeSchema, activity_id: str, radius: int) -> CategoricalContext:
    """Flow-graph neighborhood of an activity within ``radius`` hops.

    Activities upstream of the focus (those that can reach it) are labeled
    ``before``; downstream ones ``after``; both if reachable both ways. Each
    included activity carries its associated content categories with roles,
    the template edges applicable among those categories, and the concepts
    linked to any included category.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    schema.activity(activity_id)  # raises NotFoundError if unknown

    after = _directional_bfs(schema, activity_id, radius, forward=True)
    before = _directional_bfs(schema, activity_id, radius, forward=False)

    activities = [ContextActivity(activity_id, "self", 0)]
    for node in sorted(set(after) | set(before)):
        if node in after and node in before:
            activities.append(ContextActivity(node, "both", min(after[node], before[node])))
        elif node in after:
            activities.append(ContextActivity(node, "after", after[node]))
        else:
            activities.append(ContextActivity(node, "before", before[node]))

    contents: dict[str, list[tuple[str, str]]] = {}
    content_set: set[str] = set()
    for entry in activities:
        pairs = expected_contents(schema, entry.id)
        contents[entry.id] = pairs
        content_set.update(c for c, _ in pairs)

    templates = [
        t for t in sorted(schema.template_edges, key=lambda t: (t.from_content, t.to_content, t.kind))
        if t.from_content in content_set and t.to_content in content_set
    ]

    concepts: dict[str, list[str]] = {}
    for category in sorted({a.id for a in activities} | content_set):
        linked = schema.concepts_for_category(category)
        if linked:
            concepts[category] = linked

    return CategoricalContext(
        focus=activity_id,
        radius=radius,
        activities=activities,
        contents=contents,
        template_edges=templates,
        concepts=concepts,
    )


def expected_contents(schema: TaskTypeSchema, activity_id: str) -> list[tuple[str, str]]:
    """Content categories associated with an activity, ordered by (category, role)."""
    schema.activity(activity_id)
    pairs = [(e.content, e.role) for e in schema.assoc_edges if e.activity == activity_id]
    return sorted(pairs)
