"""Dataset manifest, training/evaluation orchestration, and metrics.

The manifest is line-oriented text, one question per line:

    qid <TAB> split <TAB> table_id <TAB> alternates(,-separated or -)
        <TAB> cells(r:c,...) <TAB> question <TAB> gold query

Every entry is validated on load: the gold query must parse and execute
on the gold table to exactly the stated cells. Pipeline evaluation fans
questions out concurrently over immutable models and indexes; stage
failures never abort a sweep, they score zero and are listed.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .clauses import (
    AuxSignals,
    HeuristicTagger,
    build_aux,
    candidate_word_indices,
    featurize_select,
    featurize_where,
    predict_select,
    predict_where,
)
from .embed import EmbeddingStore, SimMatchConfig
from .errors import AllZero, TableQAError, ValidationFailure
from .nn import MlpModel, TrainConfig, train, upsample_positives
from .query import (
    StructuredQuery,
    Condition,
    Operator,
    execute,
    intersect_cells,
    parse_query,
    select_rows_embedding,
    select_rows_word_match,
)
from .retrieval import Similarity, TfIdfIndex, build_index, precision_at_k, score
from .tabular import (
    Table,
    TableFormat,
    TableKind,
    TableTypeModel,
    classify_table_type,
    extract_table_type_features,
    load_table,
    transpose_key_value,
)

from .clauses import SELECT_SPEC, WHERE_SPEC


class Split(enum.Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


class Scope(enum.Enum):
    GOLDEN_TABLE = "golden"
    INDIVIDUAL_SET = "individual"
    ALL_SETS = "all"


class RowMode(enum.Enum):
    WORD_MATCH = "wordmatch"
    EMBEDDING = "embedding"


@dataclass(frozen=True)
class ManifestEntry:
    qid: str
    question: str
    table_id: str
    alternates: tuple[str, ...]
    gold_query: str
    gold_cells: frozenset
    split: Split


# ---------------------------------------------------------------------------
# Corpus loading and ingestion
# ---------------------------------------------------------------------------

def load_table_kinds(path) -> dict[str, TableKind]:
    kinds = {}
    with open(str(path), encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            table_id, value = line.split("\t")
            kinds[table_id] = TableKind(value)
    return kinds


def load_corpus(tables_dir) -> dict[str, Table]:
    """Raw tables from a directory, one file per table, id = filename stem."""
    from pathlib import Path

    tables = {}
    for path in sorted(Path(str(tables_dir)).iterdir()):
        if path.suffix == ".csv":
            fmt = TableFormat.CSV
        elif path.suffix == ".tsv":
            fmt = TableFormat.TSV
        else:
            continue
        t = load_table(path, fmt)
        tables[t.id] = t
    return tables


def ingest_corpus(
    raw: dict[str, Table],
    kinds: dict[str, TableKind] | None = None,
    table_type_model: TableTypeModel | None = None,
) -> dict[str, Table]:
    """Tag each table's kind (labels or trained model) and transpose key-value
    tables so downstream stages see entity-instance layout only."""
    out = {}
    for tid, table in raw.items():
        if kinds is not None and tid in kinds:
            kind = kinds[tid]
        elif table_type_model is not None:
            kind = classify_table_type(
                extract_table_type_features(table), table_type_model
            )
        else:
            raise ValueError(f"no kind label or model for table {tid!r}")
        table.kind = kind
        out[tid] = transpose_key_value(table) if kind is TableKind.KEY_VALUE else table
    return out


def load_manifest(
    path,
    tables: dict[str, Table],
    store: EmbeddingStore,
    cfg: SimMatchConfig = SimMatchConfig(),
) -> list[ManifestEntry]:
    """Parse and validate the manifest; entries failing their gold-query
    round trip are collected into one ValidationFailure."""
    entries = []
    failures = []
    with open(str(path), encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 7:
                failures.append((f"line {lineno}", f"expected 7 fields, got {len(parts)}"))
                continue
            qid, split, table_id, alts, cells_s, question, query_text = parts
            try:
                cells = frozenset(
                    (int(r), int(c))
                    for r, c in (pair.split(":") for pair in cells_s.split(","))
                )
                entry = ManifestEntry(
                    qid=qid, question=question, table_id=table_id,
                    alternates=tuple(a for a in alts.split(",") if a and a != "-"),
                    gold_query=query_text, gold_cells=cells, split=Split(split),
                )
                if table_id not in tables:
                    raise ValidationFailure([(qid, f"unknown table {table_id!r}")])
                got = execute(parse_query(query_text), tables[table_id], store, cfg)
                if got != set(cells):
                    raise ValidationFailure(
                        [(qid, f"gold query yields {sorted(got)}, manifest says "
                               f"{sorted(cells)}")]
                    )
            except ValidationFailure as exc:
                failures.extend(exc.failures)
                continue
            except (TableQAError, ValueError) as exc:
                failures.append((qid, str(exc)))
                continue
            entries.append(entry)
    if failures:
        raise ValidationFailure(failures)
    return entries


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConfusionMetrics:
    tp: int
    fp: int
    fn: int
    tn: int
    accuracy: float
    precision: float
    recall: float


def metrics_from_confusion(tp: int, fp: int, fn: int, tn: int) -> ConfusionMetrics:
    total = tp + fp + fn + tn
    if total == 0:
        raise AllZero("confusion matrix has no observations")
    return ConfusionMetrics(
        tp=tp, fp=fp, fn=fn, tn=tn,
        accuracy=(tp + tn) / total,
        precision=tp / (tp + fp) if tp + fp else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
    )


def cell_prf(predicted: set, gold: set) -> tuple[float, float, float]:
    overlap = len(set(predicted) & set(gold))
    precision = overlap / len(predicted) if predicted else 0.0
    recall = overlap / len(gold) if gold else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


# ---------------------------------------------------------------------------
# Gold extraction and training-data construction
# ---------------------------------------------------------------------------

def gold_select_indices(entry: ManifestEntry, table: Table) -> set[int]:
    q = parse_query(entry.gold_query)
    return {table.headers.index(name) for name in q.select}


def gold_where_pairs(entry: ManifestEntry, table: Table) -> set[tuple[int, str]]:
    q = parse_query(entry.gold_query)
    return {(table.headers.index(c.column), c.keyword.lower()) for c in q.where}


@dataclass
class ModelBundle:
    """Trained models plus the pluggable pieces the pipeline needs.

    ``select_fn`` / ``where_fn`` override the classifier predictions when
    set; tests use them to run the pipeline under oracle stubs.
    """

    select_model: MlpModel | None = None
    where_model: MlpModel | None = None
    coltype_model: MlpModel | None = None
    tagger: object = field(default_factory=HeuristicTagger)
    select_fn: object = None
    where_fn: object = None


def _aux_for(entry_question, table, bundle, question_id=None) -> AuxSignals:
    return build_aux(entry_question, table, bundle.coltype_model,
                     bundle.tagger, question_id)


def build_select_samples(entries, tables, store, bundle):
    """(25-dim vector, in-SELECT label) per (question, column)."""
    samples = []
    for entry in entries:
        table = tables[entry.table_id]
        aux = _aux_for(entry.question, table, bundle, entry.qid)
        gold = gold_select_indices(entry, table)
        for c in range(table.n_columns):
            vec = featurize_select(entry.question, table, c, aux, store)
            samples.append((vec, int(c in gold)))
    return samples


def build_where_samples(entries, tables, store, bundle):
    """(77-dim vector, in-WHERE label) per (question, column, word).

    The in-SELECT flag comes from the gold SELECT clause, isolating WHERE
    training from SELECT prediction errors.
    """
    samples = []
    for entry in entries:
        table = tables[entry.table_id]
        aux = _aux_for(entry.question, table, bundle, entry.qid)
        gold_select = gold_select_indices(entry, table)
        gold_pairs = gold_where_pairs(entry, table)
        for c in range(table.n_columns):
            for w in candidate_word_indices(aux):
                vec = featurize_where(entry.question, table, c, w,
                                      gold_select, aux, store)
                label = int((c, aux.question_tokens[w]) in gold_pairs)
                samples.append((vec, label))
    return samples


def train_select_model(entries, tables, store, bundle,
                       cfg: TrainConfig = TrainConfig(),
                       upsample_factor: int = 6) -> MlpModel:
    samples = build_select_samples(entries, tables, store, bundle)
    balanced = upsample_positives(samples, upsample_factor, seed=cfg.seed)
    return train(SELECT_SPEC, balanced, cfg)


def train_where_model(entries, tables, store, bundle,
                      cfg: TrainConfig = TrainConfig(),
                      upsample_factor: int = 6) -> MlpModel:
    samples = build_where_samples(entries, tables, store, bundle)
    balanced = upsample_positives(samples, upsample_factor, seed=cfg.seed)
    return train(WHERE_SPEC, balanced, cfg)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PipelineResult:
    query: StructuredQuery
    table_id: str
    cells: frozenset


class PipelineStageError(TableQAError):
    """Stage failure, annotated with the stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


def run_pipeline(
    question: str,
    tables: dict[str, Table],
    index: TfIdfIndex | None,
    bundle: ModelBundle,
    store: EmbeddingStore,
    cfg: SimMatchConfig = SimMatchConfig(),
    row_mode: RowMode = RowMode.WORD_MATCH,
    similarity: Similarity = Similarity.INV_EUCLIDEAN,
    golden_table: Table | None = None,
    question_id: str | None = None,
) -> PipelineResult:
    """Retrieval (unless golden), SELECT, WHERE, row selection, intersection.

    Returns both the constructed query and the answer cells. Errors carry
    their stage name; additive error accounting happens in the sweep.
    """
    if golden_table is not None:
        table = golden_table
    else:
        try:
            ranked = score(index, question, similarity)
            table = tables[ranked[0][0]]
        except Exception as exc:
            raise PipelineStageError("source-selection", exc) from exc

    try:
        aux = _aux_for(question, table, bundle, question_id)
    except Exception as exc:
        raise PipelineStageError("featurization", exc) from exc

    try:
        if bundle.select_fn is not None:
            select_cols = set(bundle.select_fn(question, table, aux))
        else:
            select_cols = predict_select(question, table, bundle.select_model,
                                         aux, store)
    except Exception as exc:
        raise PipelineStageError("select-clause", exc) from exc

    try:
        if bundle.where_fn is not None:
            pairs = set(bundle.where_fn(question, table, aux, select_cols))
        else:
            pairs = predict_where(question, table, bundle.where_model, aux,
                                  select_cols, store)
    except Exception as exc:
        raise PipelineStageError("where-clause", exc) from exc

    try:
        if row_mode is RowMode.WORD_MATCH:
            rows = select_rows_word_match(table, pairs)
        else:
            rows = select_rows_embedding(table, pairs, store)
        cells = intersect_cells(table, rows, select_cols)
    except Exception as exc:
        raise PipelineStageError("row-selection", exc) from exc

    query = StructuredQuery(
        select=tuple(table.headers[c] for c in sorted(select_cols)),
        from_table=table.id,
        where=tuple(
            Condition(column=table.headers[c], keyword=kw,
                      operator=Operator.SIM_MATCH)
            for c, kw in sorted(pairs)
        ),
    )
    return PipelineResult(query=query, table_id=table.id,
                          cells=frozenset(cells))


@dataclass
class QuestionOutcome:
    qid: str
    precision: float
    recall: float
    f1: float
    error: str | None = None


@dataclass
class SweepCell:
    scope: Scope
    row_mode: RowMode
    outcomes: list[QuestionOutcome]

    @property
    def macro(self) -> tuple[float, float, float]:
        if not self.outcomes:
            return (0.0, 0.0, 0.0)
        p = float(np.mean([o.precision for o in self.outcomes]))
        r = float(np.mean([o.recall for o in self.outcomes]))
        f = float(np.mean([o.f1 for o in self.outcomes]))
        return (p, r, f)

    @property
    def failures(self) -> list[QuestionOutcome]:
        return [o for o in self.outcomes if o.error is not None]


def _entry_outcome(entry, tables, index, bundle, store, cfg, row_mode,
                   scope) -> QuestionOutcome:
    golden = tables[entry.table_id] if scope is Scope.GOLDEN_TABLE else None
    try:
        result = run_pipeline(
            entry.question, tables, index, bundle, store, cfg,
            row_mode=row_mode, golden_table=golden, question_id=entry.qid,
        )
    except PipelineStageError as exc:
        return QuestionOutcome(entry.qid, 0.0, 0.0, 0.0, error=str(exc))
    if result.table_id != entry.table_id:
        # wrong source table: no chance of recovering the gold cells
        return QuestionOutcome(entry.qid, 0.0, 0.0, 0.0)
    p, r, f = cell_prf(set(result.cells), set(entry.gold_cells))
    return QuestionOutcome(entry.qid, p, r, f)


def sweep_pipeline(
    entries: list[ManifestEntry],
    tables: dict[str, Table],
    bundle: ModelBundle,
    store: EmbeddingStore,
    cfg: SimMatchConfig = SimMatchConfig(),
    scopes=tuple(Scope),
    row_modes=tuple(RowMode),
    max_workers: int = 4,
) -> dict[tuple[Scope, RowMode], SweepCell]:
    """Evaluate every (scope, row mode) combination over the entries.

    Questions fan out over a thread pool; models, indexes and the store are
    immutable, so the only synchronization point is result aggregation.
    """
    all_index = build_index(list(tables.values()))
    split_indexes = {}
    for split in {e.split for e in entries}:
        split_tables = [tables[e.table_id]
                        for e in entries if e.split is split]
        unique = {t.id: t for t in split_tables}
        split_indexes[split] = build_index(list(unique.values()))

    grid = {}
    for scope in scopes:
        for row_mode in row_modes:
            def job(entry, scope=scope, row_mode=row_mode):
                if scope is Scope.INDIVIDUAL_SET:
                    index = split_indexes[entry.split]
                else:
                    index = all_index
                return _entry_outcome(entry, tables, index, bundle, store,
                                      cfg, row_mode, scope)

            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                outcomes = list(pool.map(job, entries))
            grid[(scope, row_mode)] = SweepCell(scope, row_mode, outcomes)
    return grid


# ---------------------------------------------------------------------------
# Per-task evaluation
# ---------------------------------------------------------------------------

def evaluate_retrieval(entries, tables, ks=(1, 3, 5, 10),
                       similarities=tuple(Similarity)):
    """P@k per similarity over the given entries; adjusted P@k (counting
    manifest-declared alternates) reported when any entry lists them."""
    index = build_index(list(tables.values()))
    gold = {e.qid: e.table_id for e in entries}
    alternates = {e.qid: set(e.alternates) for e in entries if e.alternates}
    report = {}
    for sim in similarities:
        rankings = {
            e.qid: [tid for tid, _ in score(index, e.question, sim)]
            for e in entries
        }
        p_at_k = {k: precision_at_k(rankings, gold, k) for k in ks}
        adjusted = (
            {k: precision_at_k(rankings, gold, k, alternates) for k in ks}
            if alternates else None
        )
        report[sim] = {"p_at_k": p_at_k, "adjusted_p_at_k": adjusted}
    return report


def evaluate_select(entries, tables, store, bundle) -> ConfusionMetrics:
    tp = fp = fn = tn = 0
    for entry in entries:
        table = tables[entry.table_id]
        aux = _aux_for(entry.question, table, bundle, entry.qid)
        gold = gold_select_indices(entry, table)
        predicted = predict_select(entry.question, table, bundle.select_model,
                                   aux, store)
        for c in range(table.n_columns):
            hit, truth = c in predicted, c in gold
            tp += hit and truth
            fp += hit and not truth
            fn += truth and not hit
            tn += not hit and not truth
    return metrics_from_confusion(tp, fp, fn, tn)


def evaluate_where(entries, tables, store, bundle) -> ConfusionMetrics:
    tp = fp = fn = tn = 0
    for entry in entries:
        table = tables[entry.table_id]
        aux = _aux_for(entry.question, table, bundle, entry.qid)
        gold_select = gold_select_indices(entry, table)
        gold_pairs = gold_where_pairs(entry, table)
        predicted = predict_where(entry.question, table, bundle.where_model,
                                  aux, gold_select, store)
        for c in range(table.n_columns):
            for w in candidate_word_indices(aux):
                pair = (c, aux.question_tokens[w])
                hit, truth = pair in predicted, pair in gold_pairs
                tp += hit and truth
                fp += hit and not truth
                fn += truth and not hit
                tn += not hit and not truth
    return metrics_from_confusion(tp, fp, fn, tn)


def evaluate_table_type(raw_tables, kinds, model) -> float:
    hits = 0
    total = 0
    for tid, table in raw_tables.items():
        if tid not in kinds:
            continue
        predicted = classify_table_type(extract_table_type_features(table), model)
        hits += predicted is kinds[tid]
        total += 1
    return hits / total if total else 0.0
