import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from infowarehouse.archive import Archive
from infowarehouse.scenario import load_script, replay
from infowarehouse.schema import parse_schema

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
GOLDEN = FIXTURES / "golden"


@pytest.fixture(scope="session")
def patient_schema():
    return parse_schema((FIXTURES / "patient-care.schema.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def review_schema():
    return parse_schema((FIXTURES / "literature-review.schema.json").read_text(encoding="utf-8"))


def replay_scenario(name: str, path=None, seed: int = 7):
    """Replay a fixture scenario; returns (archive, symbolic id mapping)."""
    archive = Archive.open(path, seed=seed)
    ids = replay(archive, load_script(FIXTURES / name), base_dir=FIXTURES)
    return archive, ids


@pytest.fixture()
def patient():
    return replay_scenario("patient-a.scenario.json")


@pytest.fixture()
def reviews():
    return replay_scenario("reviews.scenario.json", seed=11)


TOY_SCHEMA = {
    "id": "toy",
    "name": "Toy",
    "version": 1,
    "activities": [{"id": "Work", "name": "Work", "description": ""}],
    "contents": [{"id": "Note", "name": "Note", "description": ""}],
    "concepts": [],
    "flow_edges": [],
    "assoc_edges": [{"activity": "Work", "content": "Note", "role": "produces"}],
    "template_edges": [],
    "semantic_links": [],
}


def corpus_archive(bodies: list[str], seed: int = 3):
    """In-memory archive holding each body as one element; ids sort in insertion order."""
    import json

    archive = Archive.open(None, seed=seed)
    archive.add_schema(parse_schema(json.dumps(TOY_SCHEMA)))
    instance = archive.begin_instance("toy", 1, "corpus", "author")
    activity = archive.begin_activity(instance.id, "Work")
    ids = []
    for body in bodies:
        element = archive.record_element(instance.id, activity.id, "Note", body, author="author")
        ids.append(element.id)
    return archive, ids
