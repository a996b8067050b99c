"""Acceptance suite: one test per release criterion, each printing a
PASS line on success (run with -s or -v to see them)."""

import random
import time

import pytest

from infowarehouse.archive import Archive
from infowarehouse.errors import WarehouseError
from infowarehouse.retrieval import ScoringConfig, WorkContext, build_index, contextual_search, search
from infowarehouse.scenario import load_script, replay
from infowarehouse.schema import categorical_context, parse_schema

from conftest import FIXTURES, corpus_archive, replay_scenario
from oracles import bm25_oracle, flow_neighborhood_oracle, query_weights_oracle, tokenize_oracle, undirected_bfs_oracle
from test_retrieval import two_identical_body_fixture
from test_service import drive_scenario_over_http, make_client


def report(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS", flush=True)


def test_fig1_scenario_fidelity(tmp_path):
    started = time.perf_counter()
    archive, ids = replay_scenario("patient-a.scenario.json", path=tmp_path / "a")
    subgraph = archive.episodic_context(ids["dd"], 1)
    elapsed = time.perf_counter() - started

    got = {(n.id, n.direction) for n in subgraph.nodes if n.id != ids["dd"]}
    assert got == {
        (ids["case"], "supports"),        # DS out: created to satisfy the case
        (ids["impression"], "refers"),    # RS out
        (ids["test"], "refers"),          # RS out
        (ids["tplan"], "supported-by"),   # DS in
    }
    assert subgraph.node(ids["dd"]).direction == "self"
    assert elapsed < 1.0, f"scenario replay + context query took {elapsed:.3f}s"
    report("fig1-scenario-fidelity")


def test_traversal_oracle_equivalence():
    mismatches = 0
    for name, seed in (("patient-a.scenario.json", 7), ("reviews.scenario.json", 11)):
        archive, _ = replay_scenario(name, seed=seed)
        pairs = [(e.from_element, e.to_element) for e in archive.edges()]
        for element in archive.elements():
            for depth in (1, 2, 3, 4):
                expected = undirected_bfs_oracle(pairs, element.id, depth)
                actual = archive.episodic_context(element.id, depth).node_ids()
                if actual != expected:
                    mismatches += 1
        for schema in archive.schemas():
            flow = [(e.from_activity, e.to_activity) for e in schema.flow_edges]
            for activity in schema.activity_ids():
                for radius in (1, 2, 3, 4):
                    expected = flow_neighborhood_oracle(flow, activity, radius)
                    actual = categorical_context(schema, activity, radius).activity_ids()
                    if actual != expected:
                        mismatches += 1
    assert mismatches == 0
    report("traversal-oracle-equivalence")


def test_scoring_oracle_equivalence():
    vocab = ["fever", "cough", "rash", "panel", "plan", "case", "note", "viral", "chronic",
             "acute", "blood", "scan", "dose", "trial", "risk", "onset", "relapse", "urgent"]
    rng = random.Random(20260809)
    corpora = 0
    for trial in range(24):
        n_docs = rng.randint(1, 50)
        bodies = [" ".join(rng.choices(vocab, k=rng.randint(1, 40))) for _ in range(n_docs)]
        archive, _ = corpus_archive(bodies, seed=trial)
        index = build_index(archive)
        live = {e.id: e.body for e in archive.elements()}
        schema = archive.get_schema("toy", 1)
        ctx = WorkContext(archive.instances()[0].id, "Work", "toy", 1)

        for _ in range(3):
            query = " ".join(rng.choices(vocab + ["zzz", "medicale"], k=rng.randint(1, 5)))
            hits = search(index, query, n_docs + 3)
            expected = bm25_oracle(live, query_weights_oracle(tokenize_oracle(query)))
            assert {h.ie for h in hits} == set(expected)
            for hit in hits:
                assert hit.score == pytest.approx(expected[hit.ie], abs=1e-9)
            neutral = contextual_search(index, schema, query, ctx, n_docs + 3,
                                        config=ScoringConfig(boost_weight=0.0))
            assert [(h.ie, h.score) for h in neutral] == [(h.ie, h.score) for h in hits]
        corpora += 1
    assert corpora >= 20
    report("scoring-oracle-equivalence")


def test_boost_behavior():
    archive, schema, ctx, dd_id, tp_id = two_identical_body_fixture()
    index = build_index(archive)
    for weight in (0.001, 0.1, 0.5, 1.0, 2.0, 10.0):
        hits = contextual_search(index, schema, "fever", ctx, 10,
                                 config=ScoringConfig(boost_weight=weight))
        assert [h.ie for h in hits] == [dd_id, tp_id]
        assert hits[0].score > hits[1].score
    tie = contextual_search(index, schema, "fever", ctx, 10, config=ScoringConfig(boost_weight=0.0))
    assert [h.ie for h in tie] == sorted([dd_id, tp_id])
    assert tie[0].score == tie[1].score
    report("boost-behavior")


def test_replay_determinism(tmp_path):
    exports = []
    indexes = []
    for name in ("one", "two"):
        archive, _ = replay_scenario("patient-a.scenario.json", path=tmp_path / name)
        exports.append(archive.canonical_export().encode())
        indexes.append(build_index(archive).canonical_serialization().encode())
        archive.close()
    assert exports[0] == exports[1]
    assert indexes[0] == indexes[1]
    reopened = Archive.open(tmp_path / "one")
    assert reopened.canonical_export().encode() == exports[0]
    assert build_index(reopened).canonical_serialization().encode() == indexes[0]
    report("replay-determinism")


ENUMERATED_CODES = {
    "unknown_schema", "unknown_instance", "unknown_activity", "unknown_element",
    "unknown_activity_category", "unknown_content_category",
    "instance_closed", "instance_has_active_activity",
    "activity_already_active", "activity_not_active", "activity_not_in_instance",
    "produces_mismatch", "empty_body", "invalid_field",
    "ds_cross_instance", "ds_cycle", "self_link", "duplicate_edge", "invalid_kind",
    "already_retracted", "schema_exists", "invalid_depth",
}


def _random_sequence(rng: random.Random, schema_text: str) -> tuple[int, int]:
    """One randomized op sequence against a fresh archive; returns (accepted, rejected)."""
    archive = Archive.open(None, seed=rng.randrange(1 << 30))
    archive.add_schema(parse_schema(schema_text))
    categories = ["Admit", "Examine", "Diagnosis", "Plan-Treatment", "Autopsy"]
    contents = ["Case", "Initial Impression", "Test Result", "Differential Diagnostic",
                "Treatment Plan", "Banana"]
    instances: list[str] = []
    activities: list[str] = []
    elements: list[str] = []
    accepted = rejected = 0

    for _ in range(rng.randint(4, 16)):
        roll = rng.random()
        seq_before = archive.seq
        try:
            if roll < 0.12 or not instances:
                schema_id = "patient-care" if rng.random() < 0.9 else "ghost"
                instances.append(archive.begin_instance(schema_id, 1, "T", "actor-" + rng.choice("ab")).id)
            elif roll < 0.30:
                activities.append(archive.begin_activity(rng.choice(instances), rng.choice(categories)).id)
            elif roll < 0.42 and activities:
                archive.end_activity(rng.choice(activities))
            elif roll < 0.72 and activities:
                targets = rng.sample(elements, k=min(len(elements), rng.randint(0, 2)))
                if elements and rng.random() < 0.15:
                    targets = targets + targets  # try a duplicate target
                activity_id = rng.choice(activities)
                instance_id = (archive.activity(activity_id).instance
                               if rng.random() < 0.9 else rng.choice(instances))
                elements.append(archive.record_element(
                    instance_id,
                    activity_id,
                    rng.choice(contents),
                    rng.choice(["some body text", "fever noted", "  ", "follow up"]),
                    author="actor-" + rng.choice("ab"),
                    ds_targets=targets if rng.random() < 0.5 else (),
                    rs_targets=targets if rng.random() < 0.5 else (),
                    override=rng.random() < 0.3,
                ).id)
            elif roll < 0.84 and len(elements) >= 1:
                a = rng.choice(elements)
                b = rng.choice(elements)
                archive.link_elements(a, b, rng.choice(["DS", "RS", "XX"]),
                                      note=rng.choice([None, "note"]))
            elif roll < 0.92 and elements:
                archive.retract_element(rng.choice(elements))
            else:
                archive.close_instance(rng.choice(instances) if rng.random() < 0.9 else "ti-ghost")
        except WarehouseError as exc:
            rejected += 1
            assert exc.code in ENUMERATED_CODES, f"unenumerated rejection {exc.code}"
            assert archive.seq == seq_before, f"rejected {exc.code} op left a journal record"
        else:
            accepted += 1

    report_ = archive.integrity_check()
    assert report_.ok, [f.to_dict() for f in report_.findings]
    return accepted, rejected


def test_randomized_invariant_suite():
    schema_text = (FIXTURES / "patient-care.schema.json").read_text(encoding="utf-8")
    rng = random.Random(20260809)
    accepted = rejected = 0
    for _ in range(10_000):
        a, r = _random_sequence(rng, schema_text)
        accepted += a
        rejected += r
    assert accepted > 10_000, "generator degenerated: too few accepted ops"
    assert rejected > 10_000, "generator degenerated: too few rejected ops"
    report("randomized-invariant-suite")


def test_api_engine_equivalence():
    script = load_script(FIXTURES / "patient-a.scenario.json")
    client, via_api = make_client(seed=7)
    drive_scenario_over_http(client, script)
    direct = Archive.open(None, seed=7)
    replay(direct, script, base_dir=FIXTURES)
    assert via_api.canonical_export() == direct.canonical_export()
    report("api-engine-equivalence")
