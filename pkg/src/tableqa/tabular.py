"""Table data model, delimited-file ingestion, table-kind recognition, transpose.

Web-extracted tables come in two layouts: entity-instance (each row is an
entity, columns are shared attributes) and key-value (one entity, one
attribute per row). Recognition uses five shape features and a seeded
logistic-regression model; key-value tables are transposed so every stage
downstream sees a single layout.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DuplicateKeys, MalformedFile, NotKeyValue, UntrainedModel


class TableKind(enum.Enum):
    ENTITY_INSTANCE = "entity-instance"
    KEY_VALUE = "key-value"
    UNKNOWN = "unknown"


class TableFormat(enum.Enum):
    CSV = ","
    TSV = "\t"


@dataclass
class Table:
    """Rectangular grid of string cells with a header row.

    ``column_types`` is filled in by the column-typing stage; it stays None
    until then.
    """

    id: str
    name: str
    headers: list[str]
    rows: list[list[str]]
    kind: TableKind = TableKind.UNKNOWN
    column_types: list | None = None

    def __post_init__(self):
        if not self.headers:
            raise MalformedFile(f"table {self.id!r} has zero columns")
        width = len(self.headers)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise MalformedFile(
                    f"table {self.id!r} row {i} has {len(row)} cells, expected {width}"
                )

    @property
    def n_columns(self) -> int:
        return len(self.headers)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column(self, index: int) -> list[str]:
        return [row[index] for row in self.rows]


def load_table(path, fmt: TableFormat, table_id: str | None = None) -> Table:
    """Read a delimited file into a Table with kind UNKNOWN.

    The first record is the header row. Cells are preserved verbatim; only
    the record separator is consumed. Ragged or empty files raise
    MalformedFile.
    """
    path = str(path)
    with open(path, newline="", encoding="utf-8") as fh:
        records = list(csv.reader(fh, delimiter=fmt.value))
    if not records:
        raise MalformedFile(f"{path}: empty file")
    headers = records[0]
    if not headers or headers == [""]:
        raise MalformedFile(f"{path}: zero columns")
    for i, record in enumerate(records[1:]):
        if len(record) != len(headers):
            raise MalformedFile(
                f"{path}: row {i + 1} has {len(record)} cells, expected {len(headers)}"
            )
    if table_id is None:
        stem = path.rsplit("/", 1)[-1]
        table_id = stem.rsplit(".", 1)[0]
    return Table(id=table_id, name=table_id, headers=headers, rows=records[1:])


# ---------------------------------------------------------------------------
# Table-kind features
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableTypeFeatures:
    n_columns: int
    n_columns_sans_url: int
    has_key_or_property_header: int
    norm_word_len_variance: float
    norm_digit_presence_variance: float

    def as_vector(self) -> np.ndarray:
        return np.array([
            self.n_columns,
            self.n_columns_sans_url,
            self.has_key_or_property_header,
            self.norm_word_len_variance,
            self.norm_digit_presence_variance,
        ], dtype=np.float64)


FEATURE_DIM = 5


def _is_url_column(cells: list[str]) -> bool:
    # every non-empty cell carries "http"; an all-empty column does not count
    non_empty = [c for c in cells if c.strip()]
    return bool(non_empty) and all("http" in c for c in non_empty)


def _population_variance(values: list[float]) -> float:
    if not values:
        return 0.0
    arr = np.asarray(values, dtype=np.float64)
    return float(np.mean((arr - arr.mean()) ** 2))


def extract_table_type_features(table: Table) -> TableTypeFeatures:
    """Five shape features separating entity-instance from key-value layout.

    Both variance features are per-column population variances averaged
    across columns: word counts are normalized by the column's max token
    count; digit presence is a 0/1 indicator per cell. Empty cells count as
    zero tokens and as digit-free.
    """
    columns = [table.column(i) for i in range(table.n_columns)]
    n_columns = table.n_columns
    n_sans_url = sum(1 for cells in columns if not _is_url_column(cells))

    has_kp = int(any("key" in h.lower() or "property" in h.lower()
                     for h in table.headers))

    len_variances = []
    digit_variances = []
    for cells in columns:
        counts = [len(cell.split()) for cell in cells]
        max_count = max(counts, default=0)
        if max_count > 0:
            len_variances.append(_population_variance([c / max_count for c in counts]))
        else:
            len_variances.append(0.0)
        digit_variances.append(_population_variance(
            [float(any(ch.isdigit() for ch in cell)) for cell in cells]
        ))

    return TableTypeFeatures(
        n_columns=n_columns,
        n_columns_sans_url=n_sans_url,
        has_key_or_property_header=has_kp,
        norm_word_len_variance=float(np.mean(len_variances)) if len_variances else 0.0,
        norm_digit_presence_variance=(
            float(np.mean(digit_variances)) if digit_variances else 0.0
        ),
    )


# ---------------------------------------------------------------------------
# Logistic-regression table-kind classifier
# ---------------------------------------------------------------------------

@dataclass
class TableTypeModel:
    """Logistic regression over the five shape features.

    Positive logit means key-value; a logit of exactly zero breaks the tie
    toward entity-instance. Features are standardized with statistics
    frozen at training time.
    """

    weights: np.ndarray | None = None
    bias: float = 0.0
    mean: np.ndarray = field(default_factory=lambda: np.zeros(FEATURE_DIM))
    scale: np.ndarray = field(default_factory=lambda: np.ones(FEATURE_DIM))

    def logit(self, features: TableTypeFeatures) -> float:
        if self.weights is None:
            raise UntrainedModel("table-type model has no weights")
        x = (features.as_vector() - self.mean) / self.scale
        return float(x @ self.weights + self.bias)


def classify_table_type(features: TableTypeFeatures, model: TableTypeModel) -> TableKind:
    return TableKind.KEY_VALUE if model.logit(features) > 0 else TableKind.ENTITY_INSTANCE


def train_table_type_model(
    samples: list[tuple[TableTypeFeatures, TableKind]],
    learning_rate: float = 0.5,
    iterations: int = 500,
) -> TableTypeModel:
    """Full-batch gradient descent on logistic loss; deterministic (zero init)."""
    if not samples:
        raise ValueError("no training samples")
    x = np.stack([f.as_vector() for f, _ in samples])
    y = np.array([1.0 if kind is TableKind.KEY_VALUE else 0.0 for _, kind in samples])
    mean = x.mean(axis=0)
    scale = x.std(axis=0)
    scale[scale == 0] = 1.0
    xs = (x - mean) / scale

    w = np.zeros(FEATURE_DIM)
    b = 0.0
    n = len(samples)
    for _ in range(iterations):
        p = 1.0 / (1.0 + np.exp(-(xs @ w + b)))
        grad_w = xs.T @ (p - y) / n
        grad_b = float(np.mean(p - y))
        w -= learning_rate * grad_w
        b -= learning_rate * grad_b
    return TableTypeModel(weights=w, bias=b, mean=mean, scale=scale)


_TT_MAGIC = "tableqa-tabletype v1"


def save_table_type_model(model: TableTypeModel, path) -> None:
    """Versioned text format mirroring the MLP model files."""
    if model.weights is None:
        raise UntrainedModel("refusing to save an untrained table-type model")
    lines = [_TT_MAGIC]
    for name, arr in (("weights", model.weights), ("mean", model.mean),
                      ("scale", model.scale)):
        lines.append(f"array {name} " + " ".join(repr(float(v)) for v in arr))
    lines.append(f"bias {model.bias!r}")
    lines.append("end")
    with open(str(path), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_table_type_model(path) -> TableTypeModel:
    with open(str(path), encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _TT_MAGIC:
        raise UntrainedModel(f"{path}: not a {_TT_MAGIC} file")
    arrays = {}
    bias = 0.0
    for line in lines[1:]:
        if line == "end":
            break
        if line.startswith("array "):
            _, name, values = line.split(" ", 2)
            arrays[name] = np.array([float(v) for v in values.split()])
        elif line.startswith("bias "):
            bias = float(line.split(" ", 1)[1])
    return TableTypeModel(weights=arrays["weights"], bias=bias,
                          mean=arrays["mean"], scale=arrays["scale"])


# ---------------------------------------------------------------------------
# Key-value transpose
# ---------------------------------------------------------------------------

def transpose_grid(rows: list[list[str]]) -> list[list[str]]:
    """Plain matrix transpose of a rectangular cell grid."""
    return [list(col) for col in zip(*rows)] if rows else []


def transpose_key_value(table: Table) -> Table:
    """Promote the key column to headers, yielding an entity-instance table.

    The key column is always column 0. Each original value column becomes
    one output row, so a two-column key-value table transposes to a single
    row. Duplicate keys would collide as headers and are rejected.
    """
    if table.kind is not TableKind.KEY_VALUE:
        raise NotKeyValue(f"table {table.id!r} is {table.kind.value}, not key-value")
    if table.n_columns < 2:
        raise NotKeyValue(f"table {table.id!r} has no value column to transpose")
    keys = table.column(0)
    seen = set()
    for key in keys:
        if key in seen:
            raise DuplicateKeys(f"table {table.id!r}: duplicate key cell {key!r}")
        seen.add(key)
    value_rows = [[row[c] for row in table.rows] for c in range(1, table.n_columns)]
    return replace(
        table,
        headers=keys,
        rows=value_rows,
        kind=TableKind.ENTITY_INSTANCE,
        column_types=None,
    )
