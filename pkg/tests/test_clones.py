import json

import numpy as np
import pytest

from codecontrast.augment import augment_corpus, default_specs, load_variant_sets
from codecontrast.encoder import init_params
from codecontrast.eval.clones import (AttackConfig, ClonePair, CosineScorer, EditDistanceScorer, adversarial_attack,
                                      attack_candidates, behaves_differently, clone_eval, export_embeddings,
                                      make_variant_pairs)
from codecontrast.eval.synthetic import write_corpus
from codecontrast.interp import EQUIVALENT, check_equivalence, entry_arity, random_inputs
from codecontrast.syntax.parser import parse


@pytest.fixture(scope="module")
def pairs(small_corpus):
    return [ClonePair(p["a"], p["b"], p["label"], p["id"])
            for p in make_variant_pairs([r["source"] for r in small_corpus[:16]], seed=1)]


@pytest.fixture(scope="module")
def cosine(small_vocab):
    return CosineScorer(init_params(small_vocab.size, 32, 32, 16, seed=0), small_vocab, "mean")


def test_pairs_are_balanced_and_negatives_differ(pairs):
    labels = [p.label for p in pairs]
    assert sum(labels) == 16 and len(labels) == 32
    for p in pairs:
        if p.label == 0:
            assert behaves_differently(p.a, p.b, seed=0)
        else:
            pa = parse(p.a)
            assert check_equivalence(pa, parse(p.b), random_inputs(entry_arity(pa), 5, 0), 10_000).status == EQUIVALENT


def test_identical_programs_score_maximum(small_corpus, cosine):
    src = small_corpus[0]["source"]
    assert EditDistanceScorer().score(src, src) == 1.0
    assert cosine.score(src, src) == pytest.approx(1.0)


def test_exact_copies_give_perfect_auroc(small_corpus):
    srcs = [r["source"] for r in small_corpus[:10]]
    ps = [ClonePair(s, s, 1, f"c{i}") for i, s in enumerate(srcs)]
    ps += [ClonePair(srcs[i], srcs[(i + 1) % 10], 0, f"n{i}") for i in range(10)]
    assert clone_eval(EditDistanceScorer(), ps)[0]["auroc"] == 1.0


def test_attack_without_active_passes_is_identity(pairs):
    atk = AttackConfig(samples=1, probability=0.0)
    p = pairs[0]
    prog, score = adversarial_attack(EditDistanceScorer(), p, atk)
    assert prog == p.b and score == EditDistanceScorer().score(p.a, p.b)


def test_attack_lowers_identical_clone_similarity(small_corpus):
    atk = AttackConfig(samples=4, pool=("IM", "C"), probability=1.0)
    for i, rec in enumerate(small_corpus[:5]):
        src = rec["source"]
        _, score = adversarial_attack(EditDistanceScorer(), ClonePair(src, src, 1, str(i)), atk)
        assert score < 1.0


def test_candidate_sets_nest(pairs):
    p = pairs[0]
    small = attack_candidates(p.b, AttackConfig(samples=4), p.id)
    big = attack_candidates(p.b, AttackConfig(samples=16), p.id)
    assert big[: len(small)] == small
    s4 = adversarial_attack(EditDistanceScorer(), p, AttackConfig(samples=4))[1]
    s16 = adversarial_attack(EditDistanceScorer(), p, AttackConfig(samples=16))[1]
    assert s16 <= s4


def test_attack_candidates_preserve_behaviour(pairs):
    for p in pairs[:6]:
        pb = parse(p.b)
        for cand in attack_candidates(p.b, AttackConfig(samples=4), p.id):
            assert check_equivalence(pb, parse(cand), random_inputs(entry_arity(pb), 5, 1), 10_000).status == EQUIVALENT


def test_attack_pool_rejects_label_changing_passes():
    with pytest.raises(ValueError):
        AttackConfig(pool=("LS",))


def test_auroc_non_increasing_in_attack_strength(pairs, cosine):
    for scorer in (EditDistanceScorer(), cosine):
        values = [clone_eval(scorer, pairs, "mean", AttackConfig(samples=n) if n else None)[0]["auroc"]
                  for n in (0, 1, 4, 16)]
        assert all(b <= a for a, b in zip(values, values[1:]))


def test_report_fields(pairs):
    report, dump = clone_eval(EditDistanceScorer(), pairs, attack=AttackConfig(samples=4))
    assert set(report) == {"schema_version", "scorer", "pooling", "attack_n", "auroc", "auroc_se", "ap",
                           "pairs_used", "pairs_skipped"}
    assert report["attack_n"] == 4 and len(dump) == len(pairs)


def test_parallel_scoring_matches_serial(pairs, cosine):
    serial = clone_eval(cosine, pairs, "mean", AttackConfig(samples=2), jobs=1)
    parallel = clone_eval(cosine, pairs, "mean", AttackConfig(samples=2), jobs=3)
    assert json.dumps(serial, sort_keys=True) == json.dumps(parallel, sort_keys=True)


def test_export_embeddings(tmp_path, small_corpus, small_vocab):
    params = init_params(small_vocab.size, 8, 8, 4, seed=0)
    (tmp_path / "empty.jsonl").write_text("")
    assert export_embeddings(params, small_vocab, tmp_path / "empty.jsonl", tmp_path / "e.out") == 0
    assert (tmp_path / "e.out").read_text() == ""
    write_corpus(small_corpus[:5], tmp_path / "c.jsonl")
    augment_corpus(tmp_path / "c.jsonl", tmp_path / "aug.jsonl", default_specs(), 5, 0)
    rows = export_embeddings(params, small_vocab, tmp_path / "aug.jsonl", tmp_path / "emb.jsonl", "mean")
    assert rows == sum(len(vs) for vs in load_variant_sets(tmp_path / "aug.jsonl"))
    first = json.loads((tmp_path / "emb.jsonl").read_text().splitlines()[0])
    assert first["variant"] == 0 and len(first["embedding"]) == 4
    assert np.linalg.norm(first["embedding"]) == pytest.approx(1.0)
