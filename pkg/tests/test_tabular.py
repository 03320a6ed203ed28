import random
from collections import Counter

import numpy as np
import pytest

from tableqa.errors import DuplicateKeys, MalformedFile, NotKeyValue, UntrainedModel
from tableqa.tabular import (
    Table,
    TableFormat,
    TableKind,
    TableTypeFeatures,
    TableTypeModel,
    classify_table_type,
    extract_table_type_features,
    load_table,
    train_table_type_model,
    transpose_grid,
    transpose_key_value,
)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestLoadTable:
    def test_minimal_csv(self, tmp_path):
        t = load_table(write(tmp_path, "t.csv", "a,b\n1,2\n"), TableFormat.CSV)
        assert t.headers == ["a", "b"]
        assert t.rows == [["1", "2"]]
        assert t.kind is TableKind.UNKNOWN
        assert t.id == "t"

    def test_ragged_rows_rejected(self, tmp_path):
        p = write(tmp_path, "bad.csv", "a,b\n1,2\n1,2,3\n")
        with pytest.raises(MalformedFile):
            load_table(p, TableFormat.CSV)

    def test_empty_file_rejected(self, tmp_path):
        with pytest.raises(MalformedFile):
            load_table(write(tmp_path, "empty.csv", ""), TableFormat.CSV)

    def test_tsv_and_cells_verbatim(self, tmp_path):
        p = write(tmp_path, "t.tsv", "h1\th2\n a ,x\tb\n")
        t = load_table(p, TableFormat.TSV)
        assert t.rows == [[" a ,x", "b"]]

    def test_quoted_cells(self, tmp_path):
        p = write(tmp_path, "q.csv", 'name,note\nx,"a, quoted cell"\n')
        t = load_table(p, TableFormat.CSV)
        assert t.rows == [["x", "a, quoted cell"]]

    def test_six_column_header_only_is_fine(self, tmp_path):
        p = write(tmp_path, "p.csv", "President,Party,Term,Born,Died,Spouse\n")
        t = load_table(p, TableFormat.CSV)
        assert t.n_columns == 6
        assert t.rows == []


class TestTableInvariants:
    def test_rectangularity_enforced(self):
        with pytest.raises(MalformedFile):
            Table(id="x", name="x", headers=["a", "b"], rows=[["1"]])

    def test_zero_columns_rejected(self):
        with pytest.raises(MalformedFile):
            Table(id="x", name="x", headers=[], rows=[])


class TestFeatures:
    def test_property_header_flag(self):
        t = Table(id="p", name="p", headers=["Property", "Value"],
                  rows=[["born", "1946"]])
        f = extract_table_type_features(t)
        assert f.has_key_or_property_header == 1
        assert f.n_columns == 2

    def test_all_digit_column_has_zero_digit_variance(self):
        t = Table(id="d", name="d", headers=["year"],
                  rows=[["1946"], ["2001"], ["1999"]])
        f = extract_table_type_features(t)
        assert f.norm_digit_presence_variance == 0.0

    def test_hand_computed_length_variance(self):
        t = Table(id="v", name="v", headers=["c"], rows=[["one"], ["two three"]])
        f = extract_table_type_features(t)
        assert f.norm_word_len_variance == pytest.approx(0.0625)

    def test_url_columns_excluded_from_adjusted_count(self):
        t = Table(id="u", name="u", headers=["name", "link"],
                  rows=[["a", "http://x"], ["b", "https://y"]])
        f = extract_table_type_features(t)
        assert f.n_columns == 2
        assert f.n_columns_sans_url == 1

    def test_single_row_table_variances_zero(self):
        t = Table(id="s", name="s", headers=["a", "b"], rows=[["one 1", "two"]])
        f = extract_table_type_features(t)
        assert f.norm_word_len_variance == 0.0
        assert f.norm_digit_presence_variance == 0.0

    def test_row_permutation_invariance(self):
        rows = [["aa bb", "1"], ["c", "x2"], ["dd ee ff", "nope"]]
        t1 = Table(id="r", name="r", headers=["a", "b"], rows=rows)
        t2 = Table(id="r", name="r", headers=["a", "b"], rows=rows[::-1])
        assert extract_table_type_features(t1) == extract_table_type_features(t2)

    def test_empty_cells_count_as_zero_tokens_and_no_digit(self):
        t = Table(id="e", name="e", headers=["a"], rows=[[""], ["word word"]])
        f = extract_table_type_features(t)
        # 0/2 and 2/2 tokens -> variance of [0, 1] = 0.25
        assert f.norm_word_len_variance == pytest.approx(0.25)
        assert f.norm_digit_presence_variance == 0.0


def synthetic_corpus(rng, n_per_kind=30):
    """Separable two-kind corpus exercising the five features."""
    samples = []
    for i in range(n_per_kind):
        # key-value: 2 columns, key-ish header, uneven value lengths
        header = ["Key" if i % 2 else "Property", "Value"]
        rows = []
        for j in range(5):
            words = "w " * rng.randrange(1, 8)
            value = words.strip() if j % 2 else f"{words}{rng.randrange(1900, 2020)}"
            rows.append([f"attr{j}", value])
        t = Table(id=f"kv{i}", name=f"kv{i}", headers=header, rows=rows)
        samples.append((extract_table_type_features(t), TableKind.KEY_VALUE))
    for i in range(n_per_kind):
        # entity-instance: wider, uniform per-column patterns
        headers = [f"col{j}" for j in range(4 + i % 3)]
        rows = [[f"item {r} {c}" if c else str(1900 + r) for c in range(len(headers))]
                for r in range(6)]
        t = Table(id=f"ei{i}", name=f"ei{i}", headers=headers, rows=rows)
        samples.append((extract_table_type_features(t), TableKind.ENTITY_INSTANCE))
    return samples


class TestClassifier:
    def test_learns_separable_corpus(self):
        rng = random.Random(11)
        samples = synthetic_corpus(rng)
        model = train_table_type_model(samples)
        correct = sum(classify_table_type(f, model) is kind for f, kind in samples)
        assert correct / len(samples) >= 0.95

    def test_zeroed_weights_tie_break_to_entity_instance(self):
        model = TableTypeModel(weights=np.zeros(5), bias=0.0)
        f = TableTypeFeatures(2, 2, 1, 0.3, 0.3)
        assert classify_table_type(f, model) is TableKind.ENTITY_INSTANCE

    def test_untrained_model_rejected(self):
        with pytest.raises(UntrainedModel):
            classify_table_type(TableTypeFeatures(1, 1, 0, 0.0, 0.0), TableTypeModel())

    def test_training_deterministic(self):
        samples = synthetic_corpus(random.Random(3), n_per_kind=10)
        m1 = train_table_type_model(samples)
        m2 = train_table_type_model(samples)
        assert np.array_equal(m1.weights, m2.weights)
        assert m1.bias == m2.bias


class TestTranspose:
    def test_five_key_table_becomes_single_row(self):
        t = Table(
            id="donald-trump", name="donald-trump",
            headers=["Key", "Value"],
            rows=[["spouse", "Melania Trump (m. 2005)"],
                  ["born", "June 14, 1946"],
                  ["height", "6' 3''"],
                  ["net worth", "3.1 billion USD (2018)"],
                  ["education", "Wharton School (1966-1968)"]],
            kind=TableKind.KEY_VALUE,
        )
        out = transpose_key_value(t)
        assert out.headers == ["spouse", "born", "height", "net worth", "education"]
        assert out.n_rows == 1
        assert out.rows[0][1] == "June 14, 1946"
        assert out.kind is TableKind.ENTITY_INSTANCE

    def test_one_by_one(self):
        t = Table(id="m", name="m", headers=["Key", "Value"], rows=[["a", "1"]],
                  kind=TableKind.KEY_VALUE)
        out = transpose_key_value(t)
        assert out.headers == ["a"]
        assert out.rows == [["1"]]

    def test_multi_value_columns_give_multiple_rows(self):
        t = Table(
            id="laptops", name="laptops",
            headers=["Feature", "1", "2"],
            rows=[["product", "acer", "dell"], ["ram", "4 gb", "8 gb"]],
            kind=TableKind.KEY_VALUE,
        )
        out = transpose_key_value(t)
        assert out.headers == ["product", "ram"]
        assert out.rows == [["acer", "4 gb"], ["dell", "8 gb"]]

    def test_not_key_value_rejected(self):
        t = Table(id="e", name="e", headers=["a", "b"], rows=[["1", "2"]])
        with pytest.raises(NotKeyValue):
            transpose_key_value(t)

    def test_duplicate_keys_rejected(self):
        t = Table(id="d", name="d", headers=["Key", "Value"],
                  rows=[["born", "x"], ["born", "y"]], kind=TableKind.KEY_VALUE)
        with pytest.raises(DuplicateKeys):
            transpose_key_value(t)

    def test_grid_transpose_is_involution(self):
        rng = random.Random(99)
        for _ in range(50):
            rows = [[f"{r}:{c}" for c in range(rng.randrange(1, 6))]
                    for r in range(rng.randrange(1, 6))]
            width = len(rows[0])
            rows = [row[:width] + ["pad"] * (width - len(row)) for row in rows]
            assert transpose_grid(transpose_grid(rows)) == rows

    def test_cell_multiset_and_rectangularity_preserved(self):
        rng = random.Random(5)
        for i in range(100):
            n_rows = rng.randrange(1, 7)
            n_value_cols = rng.randrange(1, 5)
            keys = [f"k{j}" for j in range(n_rows)]
            rows = [[keys[j]] + [f"v{j}.{c}{rng.randrange(10)}"
                                 for c in range(n_value_cols)]
                    for j in range(n_rows)]
            t = Table(id=f"t{i}", name=f"t{i}",
                      headers=["Key"] + [f"V{c}" for c in range(n_value_cols)],
                      rows=rows, kind=TableKind.KEY_VALUE)
            out = transpose_key_value(t)
            # rectangular with one row per original value column
            assert out.n_rows == n_value_cols
            assert all(len(r) == n_rows for r in out.rows)
            before = Counter(cell for row in rows for cell in row)
            after = Counter(out.headers) + Counter(
                cell for row in out.rows for cell in row
            )
            assert before == after
