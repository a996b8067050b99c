"""Ranked retrieval over element bodies with work-context boosting.

Scoring is BM25 (k1=1.2, b=0.75, idf = ln(1 + (N - df + 0.5)/(df + 0.5))).
A query is a bag of terms: each occurrence of a term adds weight 1.0 to
that term; semantic expansion adds new terms at ``expansion_weight``. A
document's base score is the weight-scaled sum of per-term BM25
contributions; work-context boosting then multiplies the base score by
(1 + boost_weight) for documents whose content category is associated with
the context's activity category. Ties break by element id ascending.

Indexes are immutable after build; rebuilding at the same journal seq
yields a byte-identical canonical serialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .archive import Archive
from .canonical import canonical_document
from .errors import InvalidInputError, NotFoundError
from .schema import TaskTypeSchema

STOPWORDS = frozenset(
    "a an and are as at be been by for from has have in is it of on or "
    "that the to was were will with".split()
)


@dataclass(frozen=True)
class ScoringConfig:
    k1: float = 1.2
    b: float = 0.75
    boost_weight: float = 0.5
    expansion_weight: float = 0.3


def _light_stem(token: str) -> str:
    """Very light English suffix stripping; off by default."""
    if len(token) > 4 and token.endswith("ies"):
        return token[:-3] + "y"
    if len(token) > 4 and token.endswith("ing"):
        return token[:-3]
    if len(token) > 3 and token.endswith("ed"):
        return token[:-2]
    if len(token) > 3 and token.endswith("es"):
        return token[:-2]
    if len(token) > 2 and token.endswith("s") and not token.endswith("ss"):
        return token[:-1]
    return token


def tokenize(text: str, *, stem: bool = False, drop_stopwords: bool = False) -> list[str]:
    """Lowercase, split on non-alphanumeric code points, drop tokens under 2 chars."""
    tokens: list[str] = []
    current: list[str] = []
    for ch in text.lower():
        if ch.isalnum():
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    tokens = [t for t in tokens if len(t) >= 2]
    if drop_stopwords:
        tokens = [t for t in tokens if t not in STOPWORDS]
    if stem:
        tokens = [t for t in (_light_stem(t) for t in tokens) if len(t) >= 2]
    return tokens


@dataclass
class PostingsIndex:
    """Inverted index over non-retracted element bodies at one journal seq."""

    N: int
    doc_len: dict[str, int]
    avg_len: float
    postings: dict[str, list[tuple[str, int]]]  # term -> [(element id, tf)]
    df: dict[str, int]
    built_at_seq: int
    doc_category: dict[str, str] = field(default_factory=dict)
    analyzer: dict = field(default_factory=lambda: {"stem": False, "drop_stopwords": False})

    def tokenize_query(self, text: str) -> list[str]:
        return tokenize(text, stem=self.analyzer["stem"], drop_stopwords=self.analyzer["drop_stopwords"])

    def idf(self, term: str) -> float:
        n = self.df.get(term, 0)
        return math.log(1.0 + (self.N - n + 0.5) / (n + 0.5))

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "doc_len": dict(sorted(self.doc_len.items())),
            "avg_len": self.avg_len,
            "postings": {t: sorted(p) for t, p in sorted(self.postings.items())},
            "df": dict(sorted(self.df.items())),
            "built_at_seq": self.built_at_seq,
            "doc_category": dict(sorted(self.doc_category.items())),
            "analyzer": self.analyzer,
        }

    def canonical_serialization(self) -> str:
        doc = self.to_dict()
        doc["postings"] = {t: [[d, f] for d, f in p] for t, p in doc["postings"].items()}
        return canonical_document(doc)


def build_index(archive: Archive, *, stem: bool = False, drop_stopwords: bool = False) -> PostingsIndex:
    """Batch-build the index over all non-retracted elements at the current seq."""
    doc_len: dict[str, int] = {}
    doc_category: dict[str, str] = {}
    postings: dict[str, dict[str, int]] = {}
    for element in archive.elements():
        if element.retracted:
            continue
        tokens = tokenize(element.body, stem=stem, drop_stopwords=drop_stopwords)
        doc_len[element.id] = len(tokens)
        doc_category[element.id] = element.category
        for term in tokens:
            bucket = postings.setdefault(term, {})
            bucket[element.id] = bucket.get(element.id, 0) + 1

    n = len(doc_len)
    avg_len = (sum(doc_len.values()) / n) if n else 0.0
    sorted_postings = {term: sorted(bucket.items()) for term, bucket in sorted(postings.items())}
    return PostingsIndex(
        N=n,
        doc_len=doc_len,
        avg_len=avg_len,
        postings=sorted_postings,
        df={term: len(bucket) for term, bucket in sorted_postings.items()},
        built_at_seq=archive.seq,
        doc_category=doc_category,
        analyzer={"stem": stem, "drop_stopwords": drop_stopwords},
    )


@dataclass
class NeighborLink:
    element: str
    kind: str
    direction: str
    category: str

    def to_dict(self) -> dict:
        return {"element": self.element, "kind": self.kind, "direction": self.direction, "category": self.category}


@dataclass
class HitLinks:
    category: str
    concepts: list[str]
    neighbors: list[NeighborLink]

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "concepts": self.concepts,
            "neighbors": [n.to_dict() for n in self.neighbors],
        }


@dataclass
class Hit:
    ie: str
    score: float
    base_score: float
    boosted: bool
    snippet: str = ""
    links: HitLinks | None = None
    matched_terms: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ie": self.ie,
            "score": self.score,
            "base_score": self.base_score,
            "boosted": self.boosted,
            "snippet": self.snippet,
            "links": self.links.to_dict() if self.links else None,
            "matched_terms": self.matched_terms,
        }


@dataclass(frozen=True)
class WorkContext:
    """The (instance, active activity category) pair a query is issued from."""

    instance: str
    activity_category: str
    schema_id: str
    schema_version: int


def _weighted_query(terms: list[str]) -> dict[str, float]:
    weights: dict[str, float] = {}
    for term in terms:
        weights[term] = weights.get(term, 0.0) + 1.0
    return weights


def _score_candidates(index: PostingsIndex, weights: dict[str, float], config: ScoringConfig) -> dict[str, tuple[float, list[str]]]:
    """Per-document (score, matched terms) for every document matching any term."""
    scores: dict[str, float] = {}
    matched: dict[str, set[str]] = {}
    for term, weight in weights.items():
        postings = index.postings.get(term)
        if not postings:
            continue
        idf = index.idf(term)
        for doc, tf in postings:
            dl = index.doc_len[doc]
            norm = config.k1 * (1.0 - config.b + config.b * dl / index.avg_len)
            contribution = weight * idf * (tf * (config.k1 + 1.0)) / (tf + norm)
            scores[doc] = scores.get(doc, 0.0) + contribution
            matched.setdefault(doc, set()).add(term)
    return {doc: (score, sorted(matched[doc])) for doc, score in scores.items()}


def search(index: PostingsIndex, query_text: str, k: int, *, config: ScoringConfig = ScoringConfig()) -> list[Hit]:
    """Top-k elements by BM25; no context, no boosting."""
    if k < 1:
        raise InvalidInputError("invalid_k", f"k must be >= 1, got {k}")
    weights = _weighted_query(index.tokenize_query(query_text))
    candidates = _score_candidates(index, weights, config)
    hits = [
        Hit(ie=doc, score=score, base_score=score, boosted=False, matched_terms=terms)
        for doc, (score, terms) in candidates.items()
    ]
    hits.sort(key=lambda h: (-h.score, h.ie))
    return hits[:k]


def expansion_terms(schema: TaskTypeSchema, categories: set[str], *, index: PostingsIndex) -> set[str]:
    """Tokenized labels of concepts linked to the categories, plus the labels
    of their directly related concepts."""
    concept_ids: set[str] = set()
    for category in categories:
        concept_ids.update(schema.concepts_for_category(category))
    labels: list[str] = []
    for concept_id in sorted(concept_ids):
        concept = schema.concept(concept_id)
        labels.append(concept.label)
        for target, _kind in concept.related:
            labels.append(schema.concept(target).label)
    terms: set[str] = set()
    for label in labels:
        terms.update(index.tokenize_query(label))
    return terms


def contextual_search(
    index: PostingsIndex,
    schema: TaskTypeSchema,
    query_text: str,
    ctx: WorkContext,
    k: int,
    *,
    semantic: bool = False,
    config: ScoringConfig = ScoringConfig(),
) -> list[Hit]:
    """BM25 with a multiplicative boost for elements whose content category is
    associated (produces or consumes) with the context's activity category;
    optional semantic expansion over concepts linked to those categories."""
    if k < 1:
        raise InvalidInputError("invalid_k", f"k must be >= 1, got {k}")
    if (ctx.schema_id, ctx.schema_version) != (schema.id, schema.version):
        raise InvalidInputError(
            "unresolvable_context",
            f"context pins schema {ctx.schema_id!r} v{ctx.schema_version}, got {schema.id!r} v{schema.version}",
        )
    if ctx.activity_category not in schema.activity_ids():
        raise InvalidInputError(
            "unresolvable_context",
            f"context activity category {ctx.activity_category!r} is not in schema {schema.id!r}",
        )

    associated = schema.associated_contents(ctx.activity_category)
    weights = _weighted_query(index.tokenize_query(query_text))
    if semantic:
        for term in sorted(expansion_terms(schema, associated, index=index) - set(weights)):
            weights[term] = config.expansion_weight

    candidates = _score_candidates(index, weights, config)
    hits = []
    for doc, (base, terms) in candidates.items():
        eligible = index.doc_category.get(doc) in associated
        boosted = eligible and config.boost_weight > 0
        score = base * (1.0 + config.boost_weight) if eligible else base
        hits.append(Hit(ie=doc, score=score, base_score=base, boosted=boosted, matched_terms=terms))
    hits.sort(key=lambda h: (-h.score, h.ie))
    return hits[:k]


def _snippet(body: str, terms: list[str], limit: int = 160) -> str:
    """First window of the body containing a query term, at most ``limit`` chars."""
    if len(body) <= limit:
        return body
    lowered = body.lower()
    first = None
    for term in terms:
        pos = lowered.find(term)
        if pos != -1 and (first is None or pos < first):
            first = pos
    if first is None:
        return body[:limit]
    start = max(0, first - 40)
    if start + limit > len(body):
        start = len(body) - limit
    return body[start:start + limit]


def annotate_hits(archive: Archive, hits: list[Hit]) -> list[Hit]:
    """Attach contextual links (depth-1 neighbors, category, concepts) and snippets."""
    annotated = []
    for hit in hits:
        if not archive.has_element(hit.ie):
            raise NotFoundError("unknown_element", f"hit references missing element {hit.ie!r}")
        element = archive.element(hit.ie)
        outgoing, incoming = archive.edges_of(hit.ie)
        neighbors = []
        for edge in outgoing:
            if archive.has_element(edge.to_element):
                other = archive.element(edge.to_element)
                direction = "supports" if edge.kind == "DS" else "refers"
                neighbors.append(NeighborLink(other.id, edge.kind, direction, other.category))
        for edge in incoming:
            if archive.has_element(edge.from_element):
                other = archive.element(edge.from_element)
                direction = "supported-by" if edge.kind == "DS" else "referred-by"
                neighbors.append(NeighborLink(other.id, edge.kind, direction, other.category))
        neighbors.sort(key=lambda n: (n.element, n.kind, n.direction))

        schema = archive.schema_for_instance(element.instance)
        links = HitLinks(
            category=element.category,
            concepts=schema.concepts_for_category(element.category),
            neighbors=neighbors,
        )
        annotated.append(replace(hit, links=links, snippet=_snippet(element.body, hit.matched_terms)))
    return annotated
