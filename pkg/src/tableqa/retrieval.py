"""Source selection: TF-IDF vector-space ranking of tables for a question.

Each table's token bag is the concatenation of its name, headers and all
cells, tokenized with stop-word removal and stemming. IDF is computed over
tables only; questions are vectorized against the table vocabulary.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass

from .errors import NoTables
from .tabular import Table
from .textproc import tokenize


class Similarity(enum.Enum):
    COSINE = "cosine"
    DOT = "dot"
    INV_EUCLIDEAN = "inveuclidean"


@dataclass
class TfIdfIndex:
    idf: dict[str, float]
    table_vectors: dict[str, dict[str, float]]

    @property
    def vocabulary(self) -> set[str]:
        return set(self.idf)


def table_stems(table: Table) -> list[str]:
    parts = [table.name] + list(table.headers)
    for row in table.rows:
        parts.extend(row)
    return list(tokenize(" ".join(parts), drop_stopwords=True).stems)


def build_index(tables: list[Table]) -> TfIdfIndex:
    """Weight = tf within the table x idf = ln(N / df) over all tables."""
    if not tables:
        raise NoTables("cannot build an index over zero tables")
    term_counts = {t.id: Counter(table_stems(t)) for t in tables}
    n = len(tables)
    df = Counter()
    for counts in term_counts.values():
        df.update(counts.keys())
    idf = {stem: math.log(n / d) for stem, d in df.items()}
    vectors = {
        tid: {stem: tf * idf[stem] for stem, tf in counts.items()}
        for tid, counts in term_counts.items()
    }
    return TfIdfIndex(idf=idf, table_vectors=vectors)


def question_vector(index: TfIdfIndex, question: str) -> dict[str, float]:
    counts = Counter(tokenize(question, drop_stopwords=True).stems)
    return {stem: tf * index.idf[stem] for stem, tf in counts.items()
            if stem in index.idf}


def _dot(a: dict[str, float], b: dict[str, float]) -> float:
    if len(b) < len(a):
        a, b = b, a
    return sum(w * b[s] for s, w in a.items() if s in b)


def _norm(v: dict[str, float]) -> float:
    return math.sqrt(sum(w * w for w in v.values()))


def _similarity(q: dict[str, float], t: dict[str, float], sim: Similarity) -> float:
    if sim is Similarity.DOT:
        return _dot(q, t)
    if sim is Similarity.COSINE:
        nq, nt = _norm(q), _norm(t)
        if nq == 0.0 or nt == 0.0:
            return 0.0
        return _dot(q, t) / (nq * nt)
    support = set(q) | set(t)
    dist = math.sqrt(sum((q.get(s, 0.0) - t.get(s, 0.0)) ** 2 for s in support))
    return 1.0 / (1.0 + dist)


def score(index: TfIdfIndex, question: str, sim: Similarity) -> list[tuple[str, float]]:
    """All tables ranked by descending similarity; ties broken by table id."""
    q = question_vector(index, question)
    scored = [(tid, _similarity(q, vec, sim))
              for tid, vec in index.table_vectors.items()]
    return sorted(scored, key=lambda pair: (-pair[1], pair[0]))


def precision_at_k(
    rankings: dict[str, list[str]],
    gold: dict[str, str],
    k: int,
    alternates: dict[str, set[str]] | None = None,
) -> float:
    """Fraction of questions whose gold table appears in the top k.

    When ``alternates`` lists extra acceptable table ids for a question,
    any of them counts (the adjusted variant); otherwise only the gold id.
    """
    if k < 1:
        raise ValueError(f"k must be positive: {k}")
    if not gold:
        return 0.0
    hits = 0
    for qid, gold_tid in gold.items():
        acceptable = {gold_tid} | (alternates.get(qid, set()) if alternates else set())
        top = rankings[qid][:k]
        if acceptable & set(top):
            hits += 1
    return hits / len(gold)
