"""Scenario scripts: replayable walkthroughs with human-written symbolic ids.

A script is a JSON document {"name": ..., "steps": [...]}; each step is one
lifecycle/capture/link command. Steps that create entities declare a ``ref``
(a symbolic id); later steps refer to entities by those symbols, and the
replayer resolves them to the archive-assigned ids, returning the mapping.
"""

from __future__ import annotations

import json
from pathlib import Path

from .archive import Archive
from .errors import InvalidInputError
from .schema import parse_schema

_STEP_FIELDS = {
    "load_schema": ({"op"}, {"file", "document"}),
    "begin_instance": ({"op", "ref", "schema_id", "schema_version", "title", "actor"}, set()),
    "begin_activity": ({"op", "ref", "instance", "category"}, set()),
    "end_activity": ({"op", "activity"}, set()),
    "close_instance": ({"op", "instance"}, set()),
    "record_element": (
        {"op", "ref", "instance", "activity", "category", "author", "body"},
        {"ds", "rs", "attachments", "override"},
    ),
    "link_elements": ({"op", "from", "to", "kind"}, {"note"}),
    "retract_element": ({"op", "element"}, {"reason"}),
}


def load_script(path: str | Path) -> dict:
    path = Path(path)
    try:
        script = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError("scenario_syntax", f"{path.name}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(script, dict) or not isinstance(script.get("steps"), list):
        raise InvalidInputError("scenario_syntax", f"{path.name}: expected an object with a steps array")
    for i, step in enumerate(script["steps"]):
        _check_step(step, i)
    return script


def _check_step(step, index: int) -> None:
    if not isinstance(step, dict) or "op" not in step:
        raise InvalidInputError("scenario_bad_op", f"steps[{index}] must be an object with an op")
    op = step["op"]
    if op not in _STEP_FIELDS:
        raise InvalidInputError("scenario_bad_op", f"steps[{index}]: unknown op {op!r}")
    required, optional = _STEP_FIELDS[op]
    missing = required - set(step)
    unknown = set(step) - required - optional
    if missing:
        raise InvalidInputError("scenario_missing_field", f"steps[{index}] ({op}): missing {sorted(missing)}")
    if unknown:
        raise InvalidInputError("scenario_unknown_field", f"steps[{index}] ({op}): unknown {sorted(unknown)}")


class _Refs:
    def __init__(self):
        self.mapping: dict[str, str] = {}

    def define(self, symbol: str, real_id: str) -> None:
        if symbol in self.mapping:
            raise InvalidInputError("duplicate_ref", f"symbolic id {symbol!r} defined twice")
        self.mapping[symbol] = real_id

    def resolve(self, symbol: str) -> str:
        try:
            return self.mapping[symbol]
        except KeyError:
            raise InvalidInputError("undefined_ref", f"symbolic id {symbol!r} used before definition") from None


def replay(archive: Archive, script: dict, base_dir: str | Path = ".") -> dict[str, str]:
    """Run every step against the archive; returns symbol -> archive id."""
    base = Path(base_dir)
    refs = _Refs()
    for i, step in enumerate(script["steps"]):
        _check_step(step, i)
        op = step["op"]
        if op == "load_schema":
            if "file" in step:
                text = (base / step["file"]).read_text(encoding="utf-8")
            elif "document" in step:
                text = json.dumps(step["document"])
            else:
                raise InvalidInputError("scenario_missing_field", f"steps[{i}]: load_schema needs file or document")
            archive.add_schema(parse_schema(text))
        elif op == "begin_instance":
            instance = archive.begin_instance(step["schema_id"], step["schema_version"], step["title"], step["actor"])
            refs.define(step["ref"], instance.id)
        elif op == "begin_activity":
            activity = archive.begin_activity(refs.resolve(step["instance"]), step["category"])
            refs.define(step["ref"], activity.id)
        elif op == "end_activity":
            archive.end_activity(refs.resolve(step["activity"]))
        elif op == "close_instance":
            archive.close_instance(refs.resolve(step["instance"]))
        elif op == "record_element":
            element = archive.record_element(
                refs.resolve(step["instance"]),
                refs.resolve(step["activity"]),
                step["category"],
                step["body"],
                author=step["author"],
                ds_targets=[refs.resolve(s) for s in step.get("ds", [])],
                rs_targets=[refs.resolve(s) for s in step.get("rs", [])],
                attachments=step.get("attachments", []),
                override=step.get("override", False),
            )
            refs.define(step["ref"], element.id)
        elif op == "link_elements":
            archive.link_elements(
                refs.resolve(step["from"]),
                refs.resolve(step["to"]),
                step["kind"],
                step.get("note"),
            )
        elif op == "retract_element":
            archive.retract_element(refs.resolve(step["element"]), step.get("reason"))
    return dict(refs.mapping)


def replay_file(archive: Archive, path: str | Path) -> dict[str, str]:
    path = Path(path)
    return replay(archive, load_script(path), base_dir=path.parent)
