import random

import numpy as np
import pytest

from tableqa.errors import EmptyQuestion, UntrainedModel
from tableqa.nn import TrainConfig, init_model
from tableqa.typerec import (
    COLUMN_TYPE_SPEC,
    ColumnType,
    ColumnTypeFeatures,
    N_QUESTION_TYPES,
    QuestionType,
    classify_column_type,
    classify_question,
    extract_column_type_features,
    train_column_type_model,
)


class TestColumnFeatures:
    def test_boolean_column(self):
        f = extract_column_type_features(["yes", "no", "yes"])
        assert f.boolean == 1.0

    def test_token_bounded_boolean(self):
        f = extract_column_type_features(["nowhere", "notrue"])
        assert f.boolean == 0.0

    def test_currency_symbol(self):
        f = extract_column_type_features(["$349.99", "plain"])
        assert f.currency == 0.5

    def test_currency_iso_code_whole_token(self):
        assert extract_column_type_features(["3.1 billion USD (2018)"]).currency == 1.0
        assert extract_column_type_features(["usda report"]).currency == 0.0

    def test_year_range(self):
        assert extract_column_type_features(["1776"]).year == 1.0
        assert extract_column_type_features(["1492"]).year == 0.0
        assert extract_column_type_features(["2021"]).year == 0.0

    def test_numeric_parsing(self):
        f = extract_column_type_features(["349.99", "1,234", "6' 3''", "n/a"])
        assert f.numeric == 0.5

    def test_only_digits_allows_separators(self):
        f = extract_column_type_features(["1,234.5", "12 kg"])
        assert f.only_digits == 0.5

    def test_month_and_weekday(self):
        f = extract_column_type_features(["June 14, 1946", "Monday"])
        assert f.month == 0.5
        assert f.weekday == 0.5

    def test_url(self):
        assert extract_column_type_features(["http://x.org", "https://y.io"]).url == 1.0

    def test_percentage(self):
        assert extract_column_type_features(["42%", "x"]).percentage == 0.5

    def test_empty_column_is_all_zero(self):
        f = extract_column_type_features(["", "   "])
        assert np.array_equal(f.as_vector(), np.zeros(9))

    def test_components_in_unit_interval_and_permutation_invariant(self):
        rng = random.Random(3)
        pool = ["$5", "yes", "1999", "http://a", "42%", "word soup", "3.14", ""]
        for _ in range(50):
            cells = [rng.choice(pool) for _ in range(rng.randrange(1, 8))]
            f1 = extract_column_type_features(cells)
            shuffled = cells[:]
            rng.shuffle(shuffled)
            f2 = extract_column_type_features(shuffled)
            assert f1 == f2
            assert np.all(f1.as_vector() >= 0.0) and np.all(f1.as_vector() <= 1.0)


def labeled_column_pool(rng, n=240):
    """Synthetic labeled columns with clean per-type signal."""
    samples = []
    makers = {
        ColumnType.DATETIME: lambda: [
            f"{rng.choice(['January', 'June', 'Oct'])} {rng.randrange(1, 28)}, "
            f"{rng.randrange(1900, 2020)}" for _ in range(4)],
        ColumnType.CURRENCY: lambda: [f"${rng.randrange(1, 2000)}.99" for _ in range(4)],
        ColumnType.PERCENTAGE: lambda: [f"{rng.randrange(1, 99)}%" for _ in range(4)],
        ColumnType.NUMERICAL: lambda: [str(rng.randrange(21, 1499)) for _ in range(4)],
        ColumnType.BOOLEAN: lambda: [rng.choice(["yes", "no"]) for _ in range(4)],
        ColumnType.TEXT: lambda: [rng.choice(["alpha beta", "some words", "notes"])
                                  for _ in range(4)],
        ColumnType.URL: lambda: [f"http://site{rng.randrange(99)}.org"
                                 for _ in range(4)],
    }
    types = list(makers)
    for i in range(n):
        ctype = types[i % len(types)]
        samples.append((extract_column_type_features(makers[ctype]()), ctype))
    return samples


class TestColumnClassifier:
    def test_distribution_sums_to_one_at_initialization(self):
        model = init_model(COLUMN_TYPE_SPEC, seed=0)
        _, probs = classify_column_type(
            ColumnTypeFeatures(*([0.0] * 9)), model
        )
        assert probs.shape == (7,)
        assert abs(probs.sum() - 1.0) < 1e-9

    def test_learns_labeled_columns(self):
        rng = random.Random(8)
        samples = labeled_column_pool(rng)
        rng.shuffle(samples)
        split = int(len(samples) * 0.75)
        model = train_column_type_model(samples[:split],
                                        TrainConfig(epochs=200, seed=1))
        held_out = samples[split:]
        hits = sum(classify_column_type(f, model)[0] is t for f, t in held_out)
        assert hits / len(held_out) >= 0.9

    def test_price_column_confident(self):
        rng = random.Random(8)
        model = train_column_type_model(labeled_column_pool(rng),
                                        TrainConfig(epochs=200, seed=1))
        label, probs = classify_column_type(
            extract_column_type_features(["$349.99", "$799.99", "$1199.99"]), model
        )
        assert label is ColumnType.CURRENCY
        assert probs[ColumnType.CURRENCY.value] > 0.5

    def test_mostly_text_cell_with_digits_leans_text(self):
        rng = random.Random(8)
        model = train_column_type_model(labeled_column_pool(rng),
                                        TrainConfig(epochs=200, seed=1))
        label, _ = classify_column_type(
            extract_column_type_features(["4-5 years (In the wild)"]), model
        )
        assert label in (ColumnType.TEXT, ColumnType.NUMERICAL)

    def test_untrained_model_rejected(self):
        with pytest.raises(UntrainedModel):
            classify_column_type(ColumnTypeFeatures(*([0.0] * 9)), None)


class TestQuestionTyping:
    CASES = {
        "Is the store open?": QuestionType.YESNO,
        "Are cats mammals": QuestionType.YESNO,
        "Who is the husband of Whoopi Goldberg?": QuestionType.HUMAN,
        "Whose record is it?": QuestionType.HUMAN,
        "Where is the Super Bowl being played this year?": QuestionType.LOCATION,
        "When is easter this year?": QuestionType.NUMERIC_DATE,
        "What year was the first moon landing?": QuestionType.NUMERIC_DATE,
        "What day is easter on this year?": QuestionType.NUMERIC_DATE,
        "How many feet are in a mile?": QuestionType.NUMERIC_COUNT,
        "How long do cats live?": QuestionType.NUMERIC_PERIOD,
        "How much does Straight Talk cell phone service cost": QuestionType.NUMERIC_MONEY,
        "How much caffeine is in coffee?": QuestionType.NUMERIC,
        "What is the price of the dell xps 13?": QuestionType.NUMERIC_MONEY,
        "What does NAIRU stand for?": QuestionType.ABBREVIATION,
        "Why is the sky blue?": QuestionType.DESCRIPTION,
        "How do I get a refund?": QuestionType.DESCRIPTION,
        "What is the capital of Louisiana?": QuestionType.ENTITY,
        "What is Washington Wizards record?": QuestionType.ENTITY,
    }

    def test_rule_table(self):
        for question, expected in self.CASES.items():
            qtype, _ = classify_question(question)
            assert qtype is expected, question

    def test_onehot_has_exactly_one_hot(self):
        for question in self.CASES:
            qtype, onehot = classify_question(question)
            assert onehot.shape == (N_QUESTION_TYPES,)
            assert onehot.sum() == 1.0
            assert onehot[qtype.value] == 1.0

    def test_empty_question_rejected(self):
        with pytest.raises(EmptyQuestion):
            classify_question("  ?!  ")

    def test_every_question_maps_to_one_type(self):
        rng = random.Random(0)
        words = ["what", "team", "mile", "is", "cost", "how", "where",
                 "year", "long", "много", "42"]
        for _ in range(200):
            q = " ".join(rng.choice(words) for _ in range(rng.randrange(1, 7)))
            try:
                qtype, onehot = classify_question(q)
            except EmptyQuestion:
                continue
            assert isinstance(qtype, QuestionType)
            assert onehot.sum() == 1.0
