"""Tables come in two layouts; recognition and transposition unify them.

Walks through loading a raw extracted table, computing the five shape
features, training the logistic-regression kind classifier on the
labeled fixture corpus, and transposing a key-value table so its keys
become headers.

Run from the repository root:  python3 demos/01_tables_and_transpose.py
"""

from tableqa.harness import load_corpus, load_table_kinds
from tableqa.tabular import (
    TableKind,
    classify_table_type,
    extract_table_type_features,
    train_table_type_model,
    transpose_key_value,
)

raw = load_corpus("fixtures/tables")
kinds = load_table_kinds("fixtures/table_types.txt")
print(f"loaded {len(raw)} raw tables, "
      f"{sum(1 for k in kinds.values() if k is TableKind.KEY_VALUE)} labeled key-value")

# A key-value table describes one entity, one attribute per row.
trump = raw["donald-trump"]
print(f"\n{trump.id}: headers={trump.headers}")
for key, value in trump.rows[:3]:
    print(f"  {key:10s} -> {value[:60]}")

features = extract_table_type_features(trump)
print(f"\nshape features: columns={features.n_columns}, "
      f"key/property header={features.has_key_or_property_header}, "
      f"word-length variance={features.norm_word_len_variance:.3f}, "
      f"digit variance={features.norm_digit_presence_variance:.3f}")

# Train the kind classifier on half the labeled corpus, apply everywhere.
train_ids = sorted(raw)[::2]
model = train_table_type_model(
    [(extract_table_type_features(raw[t]), kinds[t]) for t in train_ids]
)
hits = sum(
    classify_table_type(extract_table_type_features(raw[t]), model) is kinds[t]
    for t in raw
)
print(f"\nkind classifier: {hits}/{len(raw)} correct over the labeled corpus")

# Transposition promotes the key column to headers; this one-entity table
# becomes a single-row entity-instance table.
trump.kind = TableKind.KEY_VALUE
flat = transpose_key_value(trump)
print(f"\ntransposed {flat.id}: headers={flat.headers}")
print(f"  single row, 'born' cell: {flat.rows[0][flat.headers.index('born')][:40]}")
