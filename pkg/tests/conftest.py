from pathlib import Path

import pytest

from tableqa.embed import SimMatchConfig, load_embeddings
from tableqa.harness import (
    ingest_corpus,
    load_corpus,
    load_manifest,
    load_table_kinds,
)
from tableqa.nn import TrainConfig
from tableqa.typerec import (
    extract_column_type_features,
    load_column_labels,
    train_column_type_model,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def pipeline_store(fixtures_dir):
    return load_embeddings(fixtures_dir / "pipeline.vec")


@pytest.fixture(scope="session")
def table_kinds(fixtures_dir):
    return load_table_kinds(fixtures_dir / "table_types.txt")


@pytest.fixture(scope="session")
def raw_corpus(fixtures_dir):
    return load_corpus(fixtures_dir / "tables")


@pytest.fixture(scope="session")
def corpus(raw_corpus, table_kinds):
    return ingest_corpus(raw_corpus, kinds=table_kinds)


@pytest.fixture(scope="session")
def manifest(fixtures_dir, corpus, pipeline_store):
    return load_manifest(fixtures_dir / "manifest.txt", corpus, pipeline_store,
                         SimMatchConfig())


@pytest.fixture(scope="session")
def trained_coltype_model(fixtures_dir, corpus):
    labels = load_column_labels(fixtures_dir / "column_labels.txt")
    samples = [
        (extract_column_type_features(corpus[tid].column(idx)), ctype)
        for tid, idx, ctype in labels
    ]
    return train_column_type_model(samples, TrainConfig(epochs=300, seed=11))


@pytest.fixture(scope="session")
def cli_workspace(tmp_path_factory, fixtures_dir):
    """Workspace with ingested tables and all four trained models."""
    from tableqa.cli import main

    ws = tmp_path_factory.mktemp("workspace")
    fx = str(fixtures_dir)
    assert main(["ingest", "--tables", f"{fx}/tables",
                 "--kinds", f"{fx}/table_types.txt",
                 "--workspace", str(ws)]) == 0
    assert main(["train", "--task", "table-type", "--workspace", str(ws),
                 "--tables", f"{fx}/tables", "--kinds", f"{fx}/table_types.txt",
                 "--seed", "7"]) == 0
    assert main(["train", "--task", "column-type", "--workspace", str(ws),
                 "--labels", f"{fx}/column_labels.txt", "--seed", "7"]) == 0
    assert main(["train", "--task", "select", "--workspace", str(ws),
                 "--manifest", f"{fx}/manifest.txt",
                 "--embeddings", f"{fx}/pipeline.vec", "--seed", "7"]) == 0
    assert main(["train", "--task", "where", "--workspace", str(ws),
                 "--manifest", f"{fx}/manifest.txt",
                 "--embeddings", f"{fx}/pipeline.vec", "--seed", "7"]) == 0
    return ws
