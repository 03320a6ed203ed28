"""Command-line shell: ingest, train, retrieve, eval, ask, pipeline-eval.

A workspace directory accumulates the pipeline's artifacts:

    workspace/
      tables/           ingested (transposed) tables, one file per table
      table_kinds.txt   resolved table kinds from ingestion
      models/           trained model files, one per task
      reports/          JSON copies of every eval / pipeline-eval report

Exit codes: 0 on success, 1 on validation or data errors, 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .embed import SimMatchConfig, load_embeddings
from .errors import TableQAError
from .harness import (
    ModelBundle,
    RowMode,
    Scope,
    Split,
    evaluate_retrieval,
    evaluate_select,
    evaluate_table_type,
    evaluate_where,
    ingest_corpus,
    load_corpus,
    load_manifest,
    load_table_kinds,
    run_pipeline,
    sweep_pipeline,
    train_select_model,
    train_where_model,
)
from .nn import TrainConfig, load_model, save_model
from .query import print_query
from .retrieval import Similarity, build_index, score
from .tabular import (
    classify_table_type,
    extract_table_type_features,
    load_table_type_model,
    save_table_type_model,
    train_table_type_model,
)
from .typerec import (
    classify_column_type,
    extract_column_type_features,
    load_column_labels,
    train_column_type_model,
)

TASKS = ("table-type", "column-type", "select", "where")


def _workspace_tables(ws: Path):
    tables_dir = ws / "tables"
    if not tables_dir.is_dir():
        raise TableQAError(f"workspace has no tables directory: {tables_dir}")
    return load_corpus(tables_dir)


def _model_path(ws: Path, task: str) -> Path:
    return ws / "models" / f"{task}.model"


def _load_bundle(ws: Path) -> ModelBundle:
    bundle = ModelBundle()
    coltype = _model_path(ws, "column-type")
    if coltype.exists():
        bundle.coltype_model = load_model(coltype)
    select = _model_path(ws, "select")
    if select.exists():
        bundle.select_model = load_model(select)
    where = _model_path(ws, "where")
    if where.exists():
        bundle.where_model = load_model(where)
    return bundle


def _write_table(table, path: Path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.headers)
        writer.writerows(table.rows)


def _split_entries(entries, split: str):
    if split == "all":
        return entries
    return [e for e in entries if e.split is Split(split)]


def _emit(report: dict, fmt: str, out=None):
    out = out if out is not None else sys.stdout
    if fmt == "json":
        json.dump(report, out, indent=2, default=str)
        out.write("\n")
        return
    _emit_text(report, out)


def _save_report(ws: Path, name: str, report: dict) -> Path:
    reports = ws / "reports"
    reports.mkdir(parents=True, exist_ok=True)
    path = reports / f"{name}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, default=str)
        fh.write("\n")
    return path


def _emit_text(report: dict, out, indent: int = 0):
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            out.write(f"{pad}{key}:\n")
            _emit_text(value, out, indent + 1)
        elif isinstance(value, float):
            out.write(f"{pad}{key:<22s} {value:.4f}\n")
        elif isinstance(value, list):
            out.write(f"{pad}{key}:\n")
            for item in value:
                out.write(f"{pad}  {item}\n")
        else:
            out.write(f"{pad}{key:<22s} {value}\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    raw = load_corpus(args.tables)
    kinds = load_table_kinds(args.kinds) if args.kinds else None
    model = load_table_type_model(args.table_type_model) \
        if args.table_type_model else None
    if kinds is None and model is None:
        raise TableQAError("ingest needs --kinds or --table-type-model")
    ingested = ingest_corpus(raw, kinds=kinds, table_type_model=model)

    ws = Path(args.workspace)
    (ws / "tables").mkdir(parents=True, exist_ok=True)
    for table in ingested.values():
        _write_table(table, ws / "tables" / f"{table.id}.csv")
    with open(ws / "table_kinds.txt", "w", encoding="utf-8") as fh:
        for tid, table in sorted(raw.items()):
            fh.write(f"{tid}\t{table.kind.value}\n")
    transposed = sum(1 for tid in raw if raw[tid].kind.value == "key-value")
    print(f"ingested {len(ingested)} tables into {ws / 'tables'} "
          f"({transposed} transposed)")
    return 0


def _train_config(args) -> TrainConfig:
    return TrainConfig(learning_rate=args.lr, epochs=args.epochs,
                       seed=args.seed, batch_size=args.batch_size)


def cmd_train(args) -> int:
    ws = Path(args.workspace)
    out = Path(args.out) if args.out else _model_path(ws, args.task)
    out.parent.mkdir(parents=True, exist_ok=True)

    if args.task == "table-type":
        if not (args.tables and args.kinds):
            raise TableQAError("train --task table-type needs --tables and --kinds")
        raw = load_corpus(args.tables)
        kinds = load_table_kinds(args.kinds)
        samples = [(extract_table_type_features(t), kinds[tid])
                   for tid, t in raw.items() if tid in kinds]
        model = train_table_type_model(samples)
        save_table_type_model(model, out)
    elif args.task == "column-type":
        if not args.labels:
            raise TableQAError("train --task column-type needs --labels")
        tables = _workspace_tables(ws)
        labels = load_column_labels(args.labels)
        samples = [(extract_column_type_features(tables[tid].column(idx)), ctype)
                   for tid, idx, ctype in labels]
        model = train_column_type_model(samples, _train_config(args))
        save_model(model, out)
    else:
        if not (args.manifest and args.embeddings):
            raise TableQAError(
                f"train --task {args.task} needs --manifest and --embeddings"
            )
        tables = _workspace_tables(ws)
        store = load_embeddings(args.embeddings)
        bundle = _load_bundle(ws)
        if bundle.coltype_model is None:
            raise TableQAError(
                "train the column-type model first (its distribution is a feature)"
            )
        entries = _split_entries(
            load_manifest(args.manifest, tables, store), "train"
        )
        trainer = train_select_model if args.task == "select" else train_where_model
        model = trainer(entries, tables, store, bundle, _train_config(args))
        save_model(model, out)
    print(f"trained {args.task} model -> {out}")
    return 0


def cmd_retrieve(args) -> int:
    tables = _workspace_tables(Path(args.workspace))
    index = build_index(list(tables.values()))
    ranked = score(index, args.question, Similarity(args.sim))
    for rank, (tid, value) in enumerate(ranked[: args.k], start=1):
        print(f"{rank:2d}. {tid:<28s} {value:.6f}")
    return 0


def cmd_eval(args) -> int:
    ws = Path(args.workspace)
    fmt = args.format
    if args.task == "table-type":
        if not (args.tables and args.kinds):
            raise TableQAError("eval --task table-type needs --tables and --kinds")
        raw = load_corpus(args.tables)
        kinds = load_table_kinds(args.kinds)
        model = load_table_type_model(_model_path(ws, "table-type"))
        accuracy = evaluate_table_type(raw, kinds, model)
        wrong = sorted(
            tid for tid, t in raw.items() if tid in kinds
            and classify_table_type(extract_table_type_features(t), model)
            is not kinds[tid]
        )
        report = {"task": "table-type", "tables": len(raw),
                  "accuracy": accuracy, "misclassified": wrong}
        _save_report(ws, "table-type", report)
        _emit(report, fmt)
        return 0

    if args.task == "column-type":
        if not args.labels:
            raise TableQAError("eval --task column-type needs --labels")
        tables = _workspace_tables(ws)
        model = load_model(_model_path(ws, "column-type"))
        labels = load_column_labels(args.labels)
        held = [x for i, x in enumerate(labels) if i % 4 == 0]
        hits = sum(
            classify_column_type(
                extract_column_type_features(tables[tid].column(idx)), model
            )[0] is ctype
            for tid, idx, ctype in held
        )
        report = {"task": "column-type", "held_out_columns": len(held),
                  "accuracy": hits / len(held)}
        _save_report(ws, "column-type", report)
        _emit(report, fmt)
        return 0

    if not (args.manifest and args.embeddings):
        raise TableQAError(f"eval --task {args.task} needs --manifest and --embeddings")
    tables = _workspace_tables(ws)
    store = load_embeddings(args.embeddings)
    entries = _split_entries(load_manifest(args.manifest, tables, store),
                             args.split)

    if args.task == "retrieval":
        report = evaluate_retrieval(entries, tables)
        payload = {
            sim.value: {
                "p_at_k": {f"p@{k}": v for k, v in data["p_at_k"].items()},
                **({"adjusted_p_at_k":
                    {f"p@{k}": v for k, v in data["adjusted_p_at_k"].items()}}
                   if data["adjusted_p_at_k"] else {}),
            }
            for sim, data in report.items()
        }
        report = {"task": "retrieval", "split": args.split,
                  "questions": len(entries), **payload}
        _save_report(ws, f"retrieval-{args.split}", report)
        _emit(report, fmt)
        return 0

    bundle = _load_bundle(ws)
    evaluator = evaluate_select if args.task == "select" else evaluate_where
    m = evaluator(entries, tables, store, bundle)
    report = {
        "task": args.task, "split": args.split, "questions": len(entries),
        "confusion": {"tp": m.tp, "fp": m.fp, "fn": m.fn, "tn": m.tn},
        "accuracy": m.accuracy, "precision": m.precision, "recall": m.recall,
    }
    _save_report(ws, f"{args.task}-{args.split}", report)
    _emit(report, fmt)
    return 0


def _answer(question, tables, entries, bundle, store, cfg, scope, row_mode,
            similarity):
    by_question = {e.question: e for e in entries}
    entry = by_question.get(question)
    golden = None
    index = None
    if scope is Scope.GOLDEN_TABLE:
        if entry is None:
            raise TableQAError(
                "golden scope works only for manifest questions; use --scope all"
            )
        golden = tables[entry.table_id]
    elif scope is Scope.INDIVIDUAL_SET and entry is not None:
        split_tables = {tables[e.table_id].id: tables[e.table_id]
                        for e in entries if e.split is entry.split}
        index = build_index(list(split_tables.values()))
    else:
        index = build_index(list(tables.values()))
    result = run_pipeline(question, tables, index, bundle, store, cfg,
                          row_mode=row_mode, similarity=similarity,
                          golden_table=golden,
                          question_id=entry.qid if entry else None)
    table = tables[result.table_id]
    print(f"table: {result.table_id}")
    print(f"query: {print_query(result.query)}")
    for r, c in sorted(result.cells):
        print(f"cell ({r},{c}) [{table.headers[c]}]: {table.rows[r][c]}")
    if entry is not None:
        flag = "match" if set(result.cells) == set(entry.gold_cells) \
            and result.table_id == entry.table_id else "differs from gold"
        print(f"gold: {flag}")


def cmd_ask(args) -> int:
    ws = Path(args.workspace)
    tables = _workspace_tables(ws)
    store = load_embeddings(args.embeddings)
    cfg = SimMatchConfig(threshold=args.threshold)
    entries = load_manifest(args.manifest, tables, store, cfg) \
        if args.manifest else []
    bundle = _load_bundle(ws)
    scope = Scope(args.scope)
    row_mode = RowMode(args.row_mode)
    similarity = Similarity(args.sim)

    if args.question:
        _answer(args.question, tables, entries, bundle, store, cfg, scope,
                row_mode, similarity)
    if args.repl:
        print("enter questions, one per line (blank line or EOF to quit)")
        for line in sys.stdin:
            question = line.strip()
            if not question:
                break
            try:
                _answer(question, tables, entries, bundle, store, cfg,
                        scope, row_mode, similarity)
            except TableQAError as exc:
                print(f"error: {exc}", file=sys.stderr)
    elif not args.question:
        raise TableQAError("ask needs a question argument or --repl")
    return 0


def cmd_pipeline_eval(args) -> int:
    ws = Path(args.workspace)
    tables = _workspace_tables(ws)
    store = load_embeddings(args.embeddings)
    entries = _split_entries(load_manifest(args.manifest, tables, store),
                             args.split)
    bundle = _load_bundle(ws)
    grid = sweep_pipeline(entries, tables, bundle, store)
    payload = {}
    for scope in Scope:
        payload[scope.value] = {}
        for mode in RowMode:
            cell = grid[(scope, mode)]
            p, r, f1 = cell.macro
            payload[scope.value][mode.value] = {
                "precision": p, "recall": r, "f1": f1,
                "failed_questions": [f"{o.qid}: {o.error}"
                                     for o in cell.failures],
            }
    report = {"split": args.split, "questions": len(entries), **payload}
    _save_report(ws, f"pipeline-{args.split}", report)
    _emit(report, args.format)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tableqa",
        description="question answering over web-extracted tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and transpose raw tables")
    p.add_argument("--tables", required=True, help="directory of raw table files")
    p.add_argument("--workspace", required=True)
    p.add_argument("--kinds", help="table kind labels file")
    p.add_argument("--table-type-model", help="trained table-type model file")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("train", help="fit one model")
    p.add_argument("--task", required=True, choices=TASKS)
    p.add_argument("--workspace", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--out", help="model file (default workspace/models/<task>.model)")
    p.add_argument("--tables", help="raw tables dir (table-type task)")
    p.add_argument("--kinds", help="table kind labels (table-type task)")
    p.add_argument("--labels", help="column labels file (column-type task)")
    p.add_argument("--manifest", help="manifest file (select/where tasks)")
    p.add_argument("--embeddings", help="embedding file (select/where tasks)")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("retrieve", help="rank tables for a question")
    p.add_argument("--workspace", required=True)
    p.add_argument("--question", required=True)
    p.add_argument("--sim", default="inveuclidean",
                   choices=[s.value for s in Similarity])
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(fn=cmd_retrieve)

    p = sub.add_parser("eval", help="report metrics for one task")
    p.add_argument("--task", required=True,
                   choices=TASKS + ("retrieval",))
    p.add_argument("--workspace", required=True)
    p.add_argument("--split", default="all",
                   choices=("train", "dev", "test", "all"))
    p.add_argument("--tables", help="raw tables dir (table-type task)")
    p.add_argument("--kinds", help="table kind labels (table-type task)")
    p.add_argument("--labels", help="column labels file (column-type task)")
    p.add_argument("--manifest")
    p.add_argument("--embeddings")
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("ask", help="answer one question")
    p.add_argument("question", nargs="?", help="natural-language question")
    p.add_argument("--workspace", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--manifest", help="needed for golden/individual scopes")
    p.add_argument("--scope", default="all",
                   choices=[s.value for s in Scope])
    p.add_argument("--row-mode", default="wordmatch",
                   choices=[m.value for m in RowMode])
    p.add_argument("--sim", default="inveuclidean",
                   choices=[s.value for s in Similarity],
                   help="retrieval similarity for non-golden scopes")
    p.add_argument("--threshold", type=float, default=0.45,
                   help="embedding distance threshold for ~")
    p.add_argument("--repl", action="store_true",
                   help="keep a read-eval loop open on stdin")
    p.set_defaults(fn=cmd_ask)

    p = sub.add_parser("pipeline-eval",
                       help="sweep table scopes x row-selection modes")
    p.add_argument("--workspace", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--split", default="all",
                   choices=("train", "dev", "test", "all"))
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(fn=cmd_pipeline_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except TableQAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
