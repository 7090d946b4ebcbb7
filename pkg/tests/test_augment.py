import json

import pytest

from codecontrast.augment import (DEFAULT_PROBABILITIES, VariantSet, augment_corpus, default_specs, derive_seed,
                                  dissimilarity_stats, load_variant_sets, token_dissimilarity, transform_dropout)
from codecontrast.eval.synthetic import generate_corpus, write_corpus
from codecontrast.transforms import TransformId as T, TransformSpec

from conftest import MERGE_SORT
from test_transforms import MERGE_SORT_COMPRESSED


def test_defaults():
    assert DEFAULT_PROBABILITIES["LS"] == 0.25
    assert all(p == 0.5 for t, p in DEFAULT_PROBABILITIES.items() if t != "LS")
    assert [s.id.value for s in default_specs()][:3] == ["CF", "DCE", "T"]


def test_zero_probabilities_give_singleton():
    specs = [TransformSpec(s.id, 0.0) for s in default_specs()]
    vs = transform_dropout(MERGE_SORT, specs, 5, seed=0)
    assert vs.variants == [MERGE_SORT] and vs.alternatives == []


def test_single_sample_is_just_the_input():
    assert transform_dropout(MERGE_SORT, default_specs(), 1, seed=0).variants == [MERGE_SORT]


def test_mangle_and_compress_variant():
    vs = transform_dropout(MERGE_SORT, [TransformSpec(T.IM, 1.0), TransformSpec(T.C, 1.0)], 2, seed=0)
    assert vs.variants == [MERGE_SORT, MERGE_SORT_COMPRESSED]


def test_seeded_determinism():
    a = transform_dropout(MERGE_SORT, default_specs(), 20, seed=4)
    b = transform_dropout(MERGE_SORT, default_specs(), 20, seed=4)
    assert a.variants == b.variants and len(a) > 1


def test_derive_seed_is_stable():
    assert derive_seed(0, "batch", 3) == derive_seed(0, "batch", 3) != derive_seed(0, "batch", 4)
    assert derive_seed(1, 2) == 3719260088301377541


@pytest.mark.parametrize("a,b,d", [
    ("a b c", "a b c", 0.0),
    ("a b c", "a x c", 1 / 3),
    ("a b c", "x y z", 1.0),
    ("var x = 1;", "var  x=1 ;", 0.0),
])
def test_token_dissimilarity(a, b, d):
    assert token_dissimilarity(a, b) == pytest.approx(d, abs=1e-15)


def test_empty_corpus(tmp_path):
    (tmp_path / "in.jsonl").write_text("")
    summary = augment_corpus(tmp_path / "in.jsonl", tmp_path / "out.jsonl", default_specs(), 20, 0)
    assert (tmp_path / "out.jsonl").read_text() == "" and summary["histogram"] == {}


def test_parallel_matches_serial(tmp_path):
    write_corpus(generate_corpus(12, seed=5), tmp_path / "c.jsonl")
    augment_corpus(tmp_path / "c.jsonl", tmp_path / "one.jsonl", default_specs(), 6, 1, jobs=1)
    augment_corpus(tmp_path / "c.jsonl", tmp_path / "two.jsonl", default_specs(), 6, 1, jobs=3)
    one = (tmp_path / "one.jsonl").read_bytes()
    assert one == (tmp_path / "two.jsonl").read_bytes()
    rec = json.loads(one.splitlines()[0])
    assert rec["schema_version"] == 1 and set(rec) == {"schema_version", "id", "source", "variants"}


def test_one_line_methods_have_fewer_alternatives(tmp_path):
    write_corpus(generate_corpus(100, seed=2, families=("constant",)), tmp_path / "k.jsonl")
    write_corpus(generate_corpus(100, seed=2), tmp_path / "g.jsonl")
    k = augment_corpus(tmp_path / "k.jsonl", tmp_path / "k.out", default_specs(), 20, 0)
    g = augment_corpus(tmp_path / "g.jsonl", tmp_path / "g.out", default_specs(), 20, 0)
    mean_size = lambda s: sum(int(size) * c for size, c in s["histogram"].items()) / s["methods"]
    assert mean_size(k) < mean_size(g) - 2
    sets = load_variant_sets(tmp_path / "g.out")
    assert all(vs.variants[0] == vs.base for vs in sets)


def test_stats_flag_missing_positives():
    corpus = [VariantSet(s, [s]) for s in ("function f(){return 1;}", "function g(){return 2;}")]
    report = dissimilarity_stats(corpus, 0)
    assert report["no_positive_pairs"] and report["positives"]["count"] == 0
