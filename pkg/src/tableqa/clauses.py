"""Featurization and binary classification for SELECT and WHERE membership.

SELECT asks, per column: does this column belong in the projection?
WHERE asks, per (column, question word) pair: do they form a row filter?
Both feed fixed-layout feature vectors (25 and 77 dims) into the shared
MLP core. Shallow tags (POS, NER, dependency relation) come from a
pluggable provider: a built-in heuristic tagger keeps the package
dependency-free, and a sidecar file format accepts tags from any external
toolchain. The tag inventories are fixed text resources so the one-hot
blocks always have dimensions 12, 6 and 37.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .embed import EmbeddingStore, proximity
from .errors import SidecarMismatch, UntrainedModel
from .nn import MlpModel, MlpSpec, OutputHead, predict_batch
from .tabular import Table
from .textproc import STOPWORDS, edit_distance, normalized_edit_distance, tokenize
from .typerec import N_COLUMN_TYPES, N_QUESTION_TYPES, classify_question

SELECT_FEATURE_DIM = 25
WHERE_FEATURE_DIM = 77

SELECT_SPEC = MlpSpec(SELECT_FEATURE_DIM, (32, 16, 8), OutputHead.BINARY2)
WHERE_SPEC = MlpSpec(WHERE_FEATURE_DIM, (32, 16, 8), OutputHead.BINARY2)


def _load_tags(name: str) -> tuple[str, ...]:
    text = resources.files("tableqa").joinpath(f"data/{name}").read_text("utf-8")
    return tuple(line for line in text.split() if line)


POS_TAGS = _load_tags("pos_tags.txt")
NER_TAGS = _load_tags("ner_tags.txt")
DEP_TAGS = _load_tags("dep_tags.txt")

assert len(POS_TAGS) == 12 and len(NER_TAGS) == 6 and len(DEP_TAGS) == 37


@dataclass(frozen=True)
class TokenTags:
    pos: str
    ner: str
    dep: str

    def __post_init__(self):
        if self.pos not in POS_TAGS:
            raise ValueError(f"unknown POS tag {self.pos!r}")
        if self.ner not in NER_TAGS:
            raise ValueError(f"unknown NER tag {self.ner!r}")
        if self.dep not in DEP_TAGS:
            raise ValueError(f"unknown dependency tag {self.dep!r}")


# ---------------------------------------------------------------------------
# Tag providers
# ---------------------------------------------------------------------------

_SURFACE_SPLIT = re.compile(r"[^a-zA-Z0-9]+")

_WH_PRON = {"who", "whom", "what", "where", "when", "why", "how"}
_WH_DET = {"whose", "which"}
_DATE_TOKENS = {
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december",
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday",
    "sunday", "today", "tomorrow", "yesterday", "year", "month", "week",
}
_VERB_TOKENS = {
    "is", "are", "was", "were", "be", "been", "being", "am",
    "do", "does", "did", "done", "have", "has", "had",
    "get", "gets", "got", "make", "makes", "made", "go", "goes", "went",
    "play", "plays", "played", "live", "lives", "lived",
    "win", "wins", "won", "cost", "costs", "start", "starts", "started",
    "become", "became", "born", "stand", "stands", "open", "opens",
    "work", "works", "hold", "holds", "held", "can", "could", "will",
    "would", "should",
}
_LOCATION_GAZETTEER = {
    "louisiana", "portugal", "boston", "washington", "rochester",
    "texas", "jersey", "york", "orleans", "baton", "rouge", "paris",
    "london", "lisbon", "madrid", "austin", "sacramento", "france",
    "spain", "germany", "usa", "america", "pittsburgh", "amsterdam",
    "europe", "england", "china", "japan", "africa", "australia",
    "salem", "denver", "phoenix", "atlanta",
}


class HeuristicTagger:
    """Rule-based token tagger; one TokenTags per surface token.

    Wh-words map to PRON or DET; digit tokens to NUM/QUANTITY; month and
    weekday words to DATETIME; capitalized non-initial tokens to PROPN with
    a gazetteer deciding LOCATION vs PERSON; a small verb list to VERB.
    Everything else is NOUN with no entity. The first verb gets the root
    relation; every other token gets the unspecified-dependency tag.
    """

    def tag(self, question: str, question_id: str | None = None) -> list[TokenTags]:
        surfaces = [s for s in _SURFACE_SPLIT.split(question) if s]
        tags = []
        root_seen = False
        for i, surface in enumerate(surfaces):
            lower = surface.lower()
            pos, ner = "NOUN", "NONE"
            if lower in _WH_PRON:
                pos = "PRON"
            elif lower in _WH_DET:
                pos = "DET"
            elif lower.isdigit():
                pos, ner = "NUM", "QUANTITY"
            elif lower in _DATE_TOKENS:
                pos, ner = "PROPN", "DATETIME"
            elif lower in _VERB_TOKENS:
                pos = "VERB"
            elif i > 0 and surface[0].isupper():
                pos = "PROPN"
                ner = "LOCATION" if lower in _LOCATION_GAZETTEER else "PERSON"
            dep = "dep"
            if pos == "VERB" and not root_seen:
                dep = "root"
                root_seen = True
            tags.append(TokenTags(pos=pos, ner=ner, dep=dep))
        return tags


class SidecarTagger:
    """Tags read from a sidecar file produced by an external toolchain.

    Format, one line per question:
        question_id <TAB> surface/POS/NER/DEP surface/POS/NER/DEP ...
    """

    def __init__(self, path):
        self.by_question = {}
        with open(str(path), encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                qid, _, rest = line.partition("\t")
                tags = []
                for record in rest.split():
                    parts = record.rsplit("/", 3)
                    if len(parts) != 4:
                        raise SidecarMismatch(
                            f"bad sidecar record {record!r} for question {qid!r}"
                        )
                    _, pos, ner, dep = parts
                    tags.append(TokenTags(pos=pos, ner=ner, dep=dep))
                self.by_question[qid] = tags

    def tag(self, question: str, question_id: str | None = None) -> list[TokenTags]:
        if question_id not in self.by_question:
            raise SidecarMismatch(f"no sidecar tags for question {question_id!r}")
        return self.by_question[question_id]


def tag_tokens(question: str, provider, question_id: str | None = None) -> list[TokenTags]:
    """Provider tags aligned with tokenize(question) (stop words kept)."""
    tags = provider.tag(question, question_id)
    n_tokens = len(tokenize(question).tokens)
    if len(tags) != n_tokens:
        raise SidecarMismatch(
            f"provider produced {len(tags)} tags for {n_tokens} tokens"
        )
    return tags


# ---------------------------------------------------------------------------
# Shared per-question signals
# ---------------------------------------------------------------------------

@dataclass
class AuxSignals:
    """Question- and table-level inputs shared by both featurizers."""

    qtype_onehot: np.ndarray            # (11,)
    coltype_dists: np.ndarray           # (n_columns, 7)
    tags: list[TokenTags]               # aligned with question tokens
    question_tokens: tuple[str, ...]    # stop words kept


def build_aux(
    question: str,
    table: Table,
    coltype_model: MlpModel,
    tagger=None,
    question_id: str | None = None,
) -> AuxSignals:
    from .typerec import column_type_distributions

    tagger = tagger or HeuristicTagger()
    _, onehot = classify_question(question)
    return AuxSignals(
        qtype_onehot=onehot,
        coltype_dists=column_type_distributions(table, coltype_model),
        tags=tag_tokens(question, tagger, question_id),
        question_tokens=tokenize(question).tokens,
    )


def candidate_word_indices(aux: AuxSignals) -> list[int]:
    """Indices of the question tokens eligible as WHERE keywords."""
    return [i for i, tok in enumerate(aux.question_tokens) if tok not in STOPWORDS]


# ---------------------------------------------------------------------------
# Featurizers
# ---------------------------------------------------------------------------

def _column_text(table: Table, column_index: int) -> str:
    return " ".join(table.column(column_index))


def _proximity_block(
    question: str, column_text: str, store: EmbeddingStore
) -> np.ndarray:
    """avg, avg-sans-stopwords, max, max-sans-stopwords of token cosines."""
    out = np.zeros(4)
    for slot, drop in ((0, False), (2, True)):
        q_tokens = tokenize(question, drop_stopwords=drop).tokens
        c_tokens = tokenize(column_text, drop_stopwords=drop).tokens
        sims = [
            s for ct in c_tokens for qt in q_tokens
            if (s := proximity(store, ct, qt)) is not None
        ]
        if sims:
            out[slot] = float(np.mean(sims))
            out[slot + 1] = float(np.max(sims))
    # ordering: avg, avg-nostop, max, max-nostop
    return np.array([out[0], out[2], out[1], out[3]])


def _header_distance_block(question: str, header: str) -> np.ndarray:
    h_stems = tokenize(header, drop_stopwords=True).stems
    q_stems = tokenize(question, drop_stopwords=True).stems
    distances = sorted(
        edit_distance(h, q) for h in h_stems for q in q_stems
    )
    if not distances:
        return np.zeros(2)
    lowest = distances[0]
    second = distances[1] if len(distances) > 1 else lowest
    return np.array([float(lowest), float(second)])


def featurize_select(
    question: str,
    table: Table,
    column_index: int,
    aux: AuxSignals,
    store: EmbeddingStore,
) -> np.ndarray:
    """25-dim layout: n_columns | proximity(4) | column type(7) |
    question type(11) | header edit distance(2)."""
    parts = [
        np.array([float(table.n_columns)]),
        _proximity_block(question, _column_text(table, column_index), store),
        aux.coltype_dists[column_index],
        aux.qtype_onehot,
        _header_distance_block(question, table.headers[column_index]),
    ]
    vec = np.concatenate(parts)
    assert vec.shape == (SELECT_FEATURE_DIM,)
    return vec


def _min_word_column_distance(word: str, table: Table, column_index: int) -> float:
    best = 1.0
    for cell in table.column(column_index):
        for token in tokenize(cell).tokens:
            best = min(best, normalized_edit_distance(word, token))
            if best == 0.0:
                return 0.0
    return best


def _onehot(tag: str, inventory: tuple[str, ...]) -> np.ndarray:
    vec = np.zeros(len(inventory))
    vec[inventory.index(tag)] = 1.0
    return vec


def featurize_where(
    question: str,
    table: Table,
    column_index: int,
    word_index: int,
    select_columns: set[int],
    aux: AuxSignals,
    store: EmbeddingStore,
) -> np.ndarray:
    """77-dim layout: min norm edit distance | avg cell length | row count |
    in-SELECT flag | column type(7) | question type(11) | POS(12) | NER(6) |
    dependency(37).

    ``select_columns`` is the gold SELECT set during training and the
    predicted set at inference, per the error-isolation contract.
    """
    word = aux.question_tokens[word_index]
    tags = aux.tags[word_index]
    non_empty = [c for c in table.column(column_index) if c.strip()]
    avg_len = float(np.mean([len(c) for c in non_empty])) if non_empty else 0.0
    parts = [
        np.array([
            _min_word_column_distance(word, table, column_index),
            avg_len,
            float(table.n_rows),
            1.0 if column_index in select_columns else 0.0,
        ]),
        aux.coltype_dists[column_index],
        aux.qtype_onehot,
        _onehot(tags.pos, POS_TAGS),
        _onehot(tags.ner, NER_TAGS),
        _onehot(tags.dep, DEP_TAGS),
    ]
    vec = np.concatenate(parts)
    assert vec.shape == (WHERE_FEATURE_DIM,)
    return vec


# ---------------------------------------------------------------------------
# Prediction
# ---------------------------------------------------------------------------

def predict_select(
    question: str,
    table: Table,
    model: MlpModel,
    aux: AuxSignals,
    store: EmbeddingStore,
) -> set[int]:
    """Columns classified into the projection; never empty.

    When no column goes positive, the single column with the highest
    positive-class probability is used (a query needs a projection).
    """
    if model is None:
        raise UntrainedModel("no SELECT model supplied")
    features = np.stack([
        featurize_select(question, table, c, aux, store)
        for c in range(table.n_columns)
    ])
    probs = predict_batch(model, features)
    positive = {c for c in range(table.n_columns) if probs[c].argmax() == 1}
    if positive:
        return positive
    return {int(probs[:, 1].argmax())}


def predict_where(
    question: str,
    table: Table,
    model: MlpModel,
    aux: AuxSignals,
    select_pred: set[int],
    store: EmbeddingStore,
) -> set[tuple[int, str]]:
    """(column index, keyword) pairs classified into the WHERE clause.

    The empty set is legal: single-row tables usually need no filter.
    Keywords are the surface forms of non-stopword question tokens.
    """
    if model is None:
        raise UntrainedModel("no WHERE model supplied")
    candidates = [
        (c, w)
        for c in range(table.n_columns)
        for w in candidate_word_indices(aux)
    ]
    if not candidates:
        return set()
    features = np.stack([
        featurize_where(question, table, c, w, select_pred, aux, store)
        for c, w in candidates
    ])
    probs = predict_batch(model, features)
    return {
        (c, aux.question_tokens[w])
        for (c, w), p in zip(candidates, probs)
        if p.argmax() == 1
    }
