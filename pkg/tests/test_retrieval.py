import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infowarehouse.errors import InvalidInputError, NotFoundError
from infowarehouse.retrieval import (
    Hit,
    ScoringConfig,
    WorkContext,
    annotate_hits,
    build_index,
    contextual_search,
    search,
    tokenize,
)

from conftest import FIXTURES, corpus_archive, replay_scenario
from oracles import bm25_oracle, query_weights_oracle, tokenize_oracle


def patient_ctx(archive, ids, category="Diagnosis"):
    return WorkContext(ids["patient-a"], category, "patient-care", 1)


def live_bodies(archive) -> dict[str, str]:
    return {e.id: e.body for e in archive.elements() if not e.retracted}


# -- tokenizer -------------------------------------------------------------


def test_tokenize_examples():
    assert tokenize("Differential diagnostic: viral fever?") == ["differential", "diagnostic", "viral", "fever"]
    assert tokenize("") == []
    assert tokenize("x") == []


def test_tokenize_drops_short_and_splits_on_punctuation():
    assert tokenize("a bc, def. g hi-j") == ["bc", "def", "hi"]
    assert tokenize("Fever—fever\tFEVER") == ["fever", "fever", "fever"]


@settings(max_examples=120, deadline=None)
@given(st.text(max_size=80))
def test_tokenize_matches_oracle(text):
    assert tokenize(text) == tokenize_oracle(text)


@given(st.text(max_size=80))
def test_tokenize_output_shape(text):
    for token in tokenize(text):
        assert len(token) >= 2
        assert token == token.lower()
        assert all(ch.isalnum() for ch in token)


def test_tokenize_flags_default_off():
    assert tokenize("the fevers are rising") == ["the", "fevers", "are", "rising"]
    assert tokenize("the fevers are rising", drop_stopwords=True) == ["fevers", "rising"]
    assert tokenize("the fevers are rising", stem=True) == ["the", "fever", "are", "ris"]


def test_fixture_corpus_token_counts_match_oracle():
    archive, _ = replay_scenario("patient-a.scenario.json")
    for element in archive.elements():
        assert tokenize(element.body) == tokenize_oracle(element.body)


# -- index build ----------------------------------------------------------------


def test_build_index_empty_archive():
    from infowarehouse.archive import Archive

    index = build_index(Archive.open(None))
    assert index.N == 0
    assert index.avg_len == 0.0
    assert index.postings == {}


def test_build_index_fixture_counts():
    archive, _ = replay_scenario("patient-a.scenario.json")
    index = build_index(archive)
    assert index.N == 6
    assert index.built_at_seq == archive.seq
    # frozen from the reference tokenizer over the scenario bodies
    assert index.df["fever"] == 3
    oracle_df = {}
    for body in live_bodies(archive).values():
        for term in set(tokenize_oracle(body)):
            oracle_df[term] = oracle_df.get(term, 0) + 1
    assert index.df == oracle_df


def test_build_index_skips_retracted():
    archive, ids = replay_scenario("reviews.scenario.json", seed=11)
    index = build_index(archive)
    assert ids["stray-note"] not in index.doc_len
    assert index.N == len(archive.elements()) - 1
    assert "diesel" not in index.df


def test_rebuild_is_byte_identical():
    archive, _ = replay_scenario("patient-a.scenario.json")
    first = build_index(archive)
    second = build_index(archive)
    assert first.canonical_serialization() == second.canonical_serialization()


# -- plain search ------------------------------------------------------------------


def test_search_toy_corpus_matches_oracle():
    archive, ids = corpus_archive(["fever cough", "fever fever rash", "fracture"])
    doc1, doc2, doc3 = ids
    index = build_index(archive)
    hits = search(index, "fever", 10)
    assert [h.ie for h in hits] == [doc2, doc1]
    expected = bm25_oracle(live_bodies(archive), {"fever": 1.0})
    for hit in hits:
        assert hit.score == pytest.approx(expected[hit.ie], abs=1e-9)
        assert hit.base_score == hit.score
        assert hit.boosted is False


def test_search_unknown_terms_empty():
    archive, _ = corpus_archive(["fever cough", "fracture"])
    assert search(build_index(archive), "zymurgy", 5) == []


def test_search_k_larger_than_matches():
    archive, ids = corpus_archive(["fever cough", "fever fever rash", "fracture"])
    hits = search(build_index(archive), "fever", 50)
    assert len(hits) == 2


def test_search_repeated_query_term_doubles_weight():
    archive, _ = corpus_archive(["fever cough", "fever fever rash", "fracture"])
    index = build_index(archive)
    single = search(index, "fever", 10)
    double = search(index, "fever fever", 10)
    for one, two in zip(single, double):
        assert two.score == pytest.approx(2 * one.score, abs=1e-9)


def test_search_rejects_bad_k():
    archive, _ = corpus_archive(["fever"])
    with pytest.raises(InvalidInputError) as exc_info:
        search(build_index(archive), "fever", 0)
    assert exc_info.value.code == "invalid_k"


def test_search_deterministic():
    archive, _ = replay_scenario("patient-a.scenario.json")
    index = build_index(archive)
    first = [h.to_dict() for h in annotate_hits(archive, search(index, "fever panel", 10))]
    second = [h.to_dict() for h in annotate_hits(archive, search(index, "fever panel", 10))]
    assert first == second


# -- contextual search -----------------------------------------------------------------


def test_zero_boost_parity_with_search():
    archive, ids = replay_scenario("patient-a.scenario.json")
    schema = archive.get_schema("patient-care", 1)
    index = build_index(archive)
    config = ScoringConfig(boost_weight=0.0)
    for query in ("fever", "treatment plan", "blood panel", "radiograph", "nothing matches this"):
        plain = search(index, query, 10)
        boosted = contextual_search(index, schema, query, patient_ctx(archive, ids), 10, config=config)
        assert [(h.ie, h.score) for h in boosted] == [(h.ie, h.score) for h in plain]
        assert all(h.boosted is False for h in boosted)


def two_identical_body_fixture():
    """DD and Treatment Plan elements with byte-identical bodies."""
    from infowarehouse.archive import Archive
    from infowarehouse.schema import parse_schema

    archive = Archive.open(None, seed=5)
    schema = parse_schema((FIXTURES / "patient-care.schema.json").read_text(encoding="utf-8"))
    archive.add_schema(schema)
    instance = archive.begin_instance("patient-care", 1, "Twin", "dr-rao")
    diagnosis = archive.begin_activity(instance.id, "Diagnosis")
    dd = archive.record_element(instance.id, diagnosis.id, "Differential Diagnostic",
                                "Persistent fever under observation.", author="dr-rao")
    archive.end_activity(diagnosis.id)
    planning = archive.begin_activity(instance.id, "Plan-Treatment")
    tp = archive.record_element(instance.id, planning.id, "Treatment Plan",
                                "Persistent fever under observation.", author="dr-rao")
    archive.end_activity(planning.id)
    ctx = WorkContext(instance.id, "Diagnosis", "patient-care", 1)
    return archive, schema, ctx, dd.id, tp.id


def test_category_boost_breaks_tie():
    archive, schema, ctx, dd_id, tp_id = two_identical_body_fixture()
    index = build_index(archive)
    for weight in (0.25, 0.5, 1.0, 2.0):
        hits = contextual_search(index, schema, "fever", ctx, 10,
                                 config=ScoringConfig(boost_weight=weight))
        assert hits[0].ie == dd_id
        assert hits[0].boosted is True
        assert hits[0].score == pytest.approx(hits[0].base_score * (1 + weight), abs=1e-12)
        assert hits[1].ie == tp_id
        assert hits[1].boosted is False
        assert hits[1].score == hits[1].base_score
        assert hits[0].base_score == pytest.approx(hits[1].base_score, abs=1e-12)
    tie = contextual_search(index, schema, "fever", ctx, 10, config=ScoringConfig(boost_weight=0.0))
    assert [h.ie for h in tie] == sorted([dd_id, tp_id])  # tie broken by id ascending
    assert tie[0].score == pytest.approx(tie[1].score, abs=1e-12)


def test_boost_rank_monotone_in_weight():
    archive, ids = replay_scenario("patient-a.scenario.json")
    schema = archive.get_schema("patient-care", 1)
    index = build_index(archive)
    boosted_ids = {ids["dd"], ids["impression"], ids["test"], ids["test2"]}

    def rank_of(hits, element):
        return next(i for i, h in enumerate(hits) if h.ie == element)

    previous = None
    for weight in (0.0, 0.5, 1.0, 2.0):
        hits = contextual_search(index, schema, "fever", patient_ctx(archive, ids), 10,
                                 config=ScoringConfig(boost_weight=weight))
        present = [h.ie for h in hits]
        boosted_here = [e for e in present if e in boosted_ids]
        plain_here = [e for e in present if e not in boosted_ids]
        if previous is not None:
            for b in boosted_here:
                for p in plain_here:
                    if b in previous and p in previous and previous.index(b) < previous.index(p):
                        assert rank_of(hits, b) < rank_of(hits, p)
        previous = present


def test_semantic_expansion_reaches_fever_via_pyrexia():
    archive, ids = replay_scenario("patient-a.scenario.json")
    schema = archive.get_schema("patient-care", 1)
    index = build_index(archive)
    ctx = patient_ctx(archive, ids)

    no_semantic = contextual_search(index, schema, "pyrexia", ctx, 10)
    assert no_semantic == []

    hits = contextual_search(index, schema, "pyrexia", ctx, 10, semantic=True)
    assert hits, "expansion should surface documents containing only related labels"
    assert hits[0].ie == ids["dd"]

    # frozen expansion set: labels of concepts linked to Diagnosis's associated
    # categories plus their related-concept labels, minus the query term
    weights = query_weights_oracle(["pyrexia"], expansion={"differential", "diagnosis", "fever"})
    expected = bm25_oracle(live_bodies(archive), weights)
    boosted_categories = {"Differential Diagnostic", "Initial Impression", "Test Result"}
    for hit in hits:
        factor = 1.5 if archive.element(hit.ie).category in boosted_categories else 1.0
        assert hit.score == pytest.approx(expected[hit.ie] * factor, abs=1e-9)


def test_contextual_search_rejects_unresolvable_context():
    archive, ids = replay_scenario("patient-a.scenario.json")
    schema = archive.get_schema("patient-care", 1)
    index = build_index(archive)
    bad = WorkContext(ids["patient-a"], "Autopsy", "patient-care", 1)
    with pytest.raises(InvalidInputError) as exc_info:
        contextual_search(index, schema, "fever", bad, 5)
    assert exc_info.value.code == "unresolvable_context"
    mismatched = WorkContext(ids["patient-a"], "Diagnosis", "patient-care", 2)
    with pytest.raises(InvalidInputError):
        contextual_search(index, schema, "fever", mismatched, 5)


# -- annotation ---------------------------------------------------------------------------


def test_annotate_dd_neighbors():
    archive, ids = replay_scenario("patient-a.scenario.json")
    index = build_index(archive)
    hits = annotate_hits(archive, search(index, "differential", 5))
    dd_hit = next(h for h in hits if h.ie == ids["dd"])
    neighbors = {(n.element, n.direction) for n in dd_hit.links.neighbors}
    assert neighbors == {
        (ids["case"], "supports"),
        (ids["impression"], "refers"),
        (ids["test"], "refers"),
        (ids["tplan"], "supported-by"),
    }
    assert dd_hit.links.category == "Differential Diagnostic"
    assert dd_hit.links.concepts == ["differential-diagnosis", "pyrexia"]


def test_annotate_isolated_element_has_no_neighbors():
    archive, ids = replay_scenario("patient-a.scenario.json")
    index = build_index(archive)
    hits = annotate_hits(archive, search(index, "radiograph", 5))
    assert hits[0].ie == ids["test2"]
    assert hits[0].links.neighbors == []


def test_annotate_snippet_short_body_is_whole_body():
    archive, ids = corpus_archive(["tiny fever"])
    hits = annotate_hits(archive, search(build_index(archive), "fever", 5))
    assert hits[0].snippet == "tiny fever"


def test_annotate_snippet_windows_long_body():
    filler = "lorem ipsum dolor sit amet consectetur adipiscing elit " * 8
    body = filler + "the spiking fever appears here" + filler
    archive, ids = corpus_archive([body])
    hits = annotate_hits(archive, search(build_index(archive), "fever", 5))
    assert len(hits[0].snippet) <= 160
    assert "fever" in hits[0].snippet


def test_annotate_rejects_dangling_hit():
    archive, _ = corpus_archive(["fever"])
    with pytest.raises(NotFoundError):
        annotate_hits(archive, [Hit(ie="ie-missing", score=1.0, base_score=1.0, boosted=False)])


# -- randomized oracle equivalence ----------------------------------------------------------


def test_bm25_oracle_equivalence_random_corpora():
    import random

    vocab = ["fever", "cough", "rash", "panel", "plan", "case", "note", "viral",
             "chronic", "acute", "blood", "scan", "dose", "trial", "risk"]
    rng = random.Random(42)
    for trial in range(5):
        n_docs = rng.randint(1, 20)
        bodies = [" ".join(rng.choices(vocab, k=rng.randint(1, 30))) for _ in range(n_docs)]
        archive, ids = corpus_archive(bodies, seed=trial)
        index = build_index(archive)
        query = " ".join(rng.choices(vocab + ["zzz"], k=rng.randint(1, 4)))
        hits = search(index, query, n_docs + 5)
        expected = bm25_oracle(live_bodies(archive), query_weights_oracle(tokenize_oracle(query)))
        assert {h.ie for h in hits} == set(expected)
        for hit in hits:
            assert hit.score == pytest.approx(expected[hit.ie], abs=1e-9)
