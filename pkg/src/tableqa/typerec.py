"""Column data-type recognition and question-type classification.

Column typing extracts nine per-column proportion features and feeds a
small softmax network; the resulting 7-way distribution is reused as a
feature downstream. Question typing is a deterministic rule cascade over
eleven types (six coarse classes, yes/no, four numeric sub-classes),
documented as a table in the README.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyQuestion, UntrainedModel
from .nn import MlpModel, MlpSpec, OutputHead, TrainConfig, predict_batch, train
from .tabular import Table
from .textproc import tokenize


class ColumnType(enum.Enum):
    DATETIME = 0
    CURRENCY = 1
    PERCENTAGE = 2
    NUMERICAL = 3
    BOOLEAN = 4
    TEXT = 5
    URL = 6

    @classmethod
    def from_name(cls, name: str) -> "ColumnType":
        return cls[name.strip().upper()]


N_COLUMN_TYPES = len(ColumnType)
COLUMN_TYPE_FEATURE_DIM = 9
COLUMN_TYPE_SPEC = MlpSpec(
    input_dim=COLUMN_TYPE_FEATURE_DIM,
    hidden=(32, 32),
    output=OutputHead.SOFTMAX7,
)

_CURRENCY_CHARS = set("$€£¥")
_CURRENCY_TOKENS = {"usd", "eur", "gbp"}
_BOOLEAN_TOKENS = {"yes", "no", "true", "false"}
_MONTH_TOKENS = {
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "oct",
    "nov", "dec",
}
_WEEKDAY_TOKENS = {
    "monday", "tuesday", "wednesday", "thursday", "friday",
    "saturday", "sunday",
}


@dataclass(frozen=True)
class ColumnTypeFeatures:
    """Nine proportions in [0,1], computed over the column's non-empty cells."""

    numeric: float
    only_digits: float
    currency: float
    percentage: float
    boolean: float
    year: float
    month: float
    weekday: float
    url: float

    def as_vector(self) -> np.ndarray:
        return np.array([
            self.numeric, self.only_digits, self.currency, self.percentage,
            self.boolean, self.year, self.month, self.weekday, self.url,
        ], dtype=np.float64)


def _parses_as_number(cell: str) -> bool:
    text = cell.strip().replace(",", "")
    if not any(c.isdigit() for c in text):
        return False
    try:
        float(text)
    except ValueError:
        return False
    return True


def _only_digits(cell: str) -> bool:
    text = cell.strip()
    return bool(text) and any(c.isdigit() for c in text) \
        and all(c.isdigit() or c in ".," for c in text)


def _is_year_token(token: str) -> bool:
    return token.isdigit() and 1500 <= int(token) <= 2020


def extract_column_type_features(column: list[str]) -> ColumnTypeFeatures:
    cells = [c for c in column if c.strip()]
    if not cells:
        return ColumnTypeFeatures(*([0.0] * COLUMN_TYPE_FEATURE_DIM))
    n = len(cells)
    counts = [0] * COLUMN_TYPE_FEATURE_DIM
    for cell in cells:
        tokens = set(tokenize(cell).tokens)
        lowered = cell.lower()
        counts[0] += _parses_as_number(cell)
        counts[1] += _only_digits(cell)
        counts[2] += bool(_CURRENCY_CHARS & set(cell)) or bool(_CURRENCY_TOKENS & tokens)
        counts[3] += "%" in cell
        counts[4] += bool(_BOOLEAN_TOKENS & tokens)
        counts[5] += any(_is_year_token(t) for t in tokens)
        counts[6] += bool(_MONTH_TOKENS & tokens)
        counts[7] += bool(_WEEKDAY_TOKENS & tokens)
        counts[8] += "http" in lowered
    return ColumnTypeFeatures(*(c / n for c in counts))


def classify_column_type(
    features: ColumnTypeFeatures, model: MlpModel | None
) -> tuple[ColumnType, np.ndarray]:
    """Most likely column type plus the full 7-way distribution."""
    if model is None:
        raise UntrainedModel("no column-type model supplied")
    if model.spec.input_dim != COLUMN_TYPE_FEATURE_DIM \
            or model.spec.output is not OutputHead.SOFTMAX7:
        raise DimensionMismatch(
            f"column-type model must be {COLUMN_TYPE_FEATURE_DIM}-in/7-out, "
            f"got {model.spec}"
        )
    probs = predict_batch(model, features.as_vector()[None, :])[0]
    return ColumnType(int(probs.argmax())), probs


def column_type_distributions(table: Table, model: MlpModel) -> np.ndarray:
    """Per-column 7-way type distributions for a whole table, row-major."""
    out = np.zeros((table.n_columns, N_COLUMN_TYPES))
    for c in range(table.n_columns):
        _, out[c] = classify_column_type(
            extract_column_type_features(table.column(c)), model
        )
    return out


def annotate_column_types(table: Table, model: MlpModel) -> Table:
    """Fill table.column_types in place; returns the same table."""
    table.column_types = [
        classify_column_type(extract_column_type_features(table.column(c)), model)[0]
        for c in range(table.n_columns)
    ]
    return table


def train_column_type_model(
    samples: list[tuple[ColumnTypeFeatures, ColumnType]],
    cfg: TrainConfig = TrainConfig(),
) -> MlpModel:
    data = [(f.as_vector(), t.value) for f, t in samples]
    return train(COLUMN_TYPE_SPEC, data, cfg)


def load_column_labels(path) -> list[tuple[str, int, ColumnType]]:
    """Parse the labels file: `table_id <TAB> column_index <TAB> type` per line."""
    out = []
    with open(str(path), encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            table_id, index, name = line.split("\t")
            out.append((table_id, int(index), ColumnType.from_name(name)))
    return out


# ---------------------------------------------------------------------------
# Question typing
# ---------------------------------------------------------------------------

class QuestionType(enum.Enum):
    ABBREVIATION = 0
    ENTITY = 1
    DESCRIPTION = 2
    HUMAN = 3
    LOCATION = 4
    NUMERIC = 5
    YESNO = 6
    NUMERIC_DATE = 7
    NUMERIC_COUNT = 8
    NUMERIC_PERIOD = 9
    NUMERIC_MONEY = 10


N_QUESTION_TYPES = len(QuestionType)

_AUX_VERBS = {
    "is", "are", "was", "were", "am", "be", "do", "does", "did",
    "can", "could", "will", "would", "shall", "should", "may",
    "might", "must", "has", "have", "had",
}
_MONEY_CUES = {"cost", "costs", "price", "prices", "pay", "worth", "money"}


def _has_bigram(tokens: tuple[str, ...], first: str, second: str) -> bool:
    return any(a == first and b == second for a, b in zip(tokens, tokens[1:]))


def classify_question(question: str) -> tuple[QuestionType, np.ndarray]:
    """Deterministic rule cascade; returns the type and its one-hot encoding.

    Rules fire in a fixed priority order, so every question maps to exactly
    one of the eleven types.
    """
    tokens = tokenize(question).tokens
    if not tokens:
        raise EmptyQuestion("cannot classify an empty question")
    token_set = set(tokens)

    qtype = QuestionType.ENTITY
    if tokens[0] in _AUX_VERBS:
        qtype = QuestionType.YESNO
    elif token_set & {"who", "whose", "whom"}:
        qtype = QuestionType.HUMAN
    elif "where" in token_set:
        qtype = QuestionType.LOCATION
    elif "when" in token_set or any(
        _has_bigram(tokens, "what", unit) for unit in ("year", "day", "date")
    ):
        qtype = QuestionType.NUMERIC_DATE
    elif _has_bigram(tokens, "how", "many"):
        qtype = QuestionType.NUMERIC_COUNT
    elif _has_bigram(tokens, "how", "long"):
        qtype = QuestionType.NUMERIC_PERIOD
    elif _has_bigram(tokens, "how", "much") and token_set & _MONEY_CUES:
        qtype = QuestionType.NUMERIC_MONEY
    elif _has_bigram(tokens, "how", "much"):
        qtype = QuestionType.NUMERIC
    elif token_set & {"cost", "costs", "price", "prices"}:
        qtype = QuestionType.NUMERIC_MONEY
    elif _has_bigram(tokens, "stand", "for") or "abbreviation" in token_set \
            or "acronym" in token_set:
        qtype = QuestionType.ABBREVIATION
    elif token_set & {"how", "why"}:
        qtype = QuestionType.DESCRIPTION

    onehot = np.zeros(N_QUESTION_TYPES)
    onehot[qtype.value] = 1.0
    return qtype, onehot
