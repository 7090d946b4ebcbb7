import pytest
from hypothesis import given, settings, strategies as st

from codecontrast.eval.synthetic import generate_corpus
from codecontrast.errors import DecodeError, VocabError
from codecontrast.tokenizer import BOS, EOS, PAD, UNK, RESERVED, SubwordVocab, normalize, train_vocab


def test_tiny_corpus_inventory():
    vocab = train_vocab(["aaaa"], size=len(RESERVED) + 2 + 1)
    pieces = [p for p, _ in vocab.pieces]
    assert "a" in pieces
    assert sum(len(p) > 1 for p in pieces) == 1


def test_size_below_alphabet_rejected():
    with pytest.raises(VocabError):
        train_vocab(["abcdef"], size=5)


def test_reserved_ids(small_vocab):
    assert (PAD, UNK, BOS, EOS) == (0, 1, 2, 3)
    assert small_vocab.encode("") == [BOS, EOS]
    assert small_vocab.decode([BOS, EOS]) == ""


def test_best_mode_deterministic(small_vocab, small_corpus):
    src = small_corpus[0]["source"]
    assert small_vocab.encode(src) == small_vocab.encode(src)


def test_roundtrip_on_corpus(small_vocab, small_corpus):
    for rec in small_corpus:
        for line in rec["source"].splitlines():
            assert small_vocab.decode(small_vocab.encode(line)) == normalize(line)


def test_keyword_segmentation(small_vocab):
    ids = small_vocab.encode("function", add_special=False)
    assert 1 <= len(ids) <= 3


def test_sampling_varies_but_decodes_the_same(small_vocab, small_corpus):
    src = small_corpus[1]["source"]
    seen = set()
    for seed in range(100):
        ids = small_vocab.encode(src, "sample", alpha=0.1, seed=seed)
        assert small_vocab.decode(ids) == normalize(src)
        seen.add(tuple(ids))
    assert len(seen) > 1


def test_sampling_seeded(small_vocab, small_corpus):
    src = small_corpus[2]["source"]
    assert small_vocab.encode(src, "sample", seed=5) == small_vocab.encode(src, "sample", seed=5)


def test_unknown_characters_map_to_unk(small_vocab):
    ids = small_vocab.encode("x = '☃';", add_special=False)
    assert UNK in ids and "�" in small_vocab.decode(ids)


def test_out_of_range_id(small_vocab):
    with pytest.raises(DecodeError):
        small_vocab.decode([small_vocab.size])


def test_save_load_identical(tmp_path, small_vocab, small_corpus):
    small_vocab.save(tmp_path / "v.txt")
    again = SubwordVocab.load(tmp_path / "v.txt")
    assert again.pieces == small_vocab.pieces
    src = small_corpus[3]["source"]
    assert again.encode(src) == small_vocab.encode(src)
    again.save(tmp_path / "w.txt")
    assert (tmp_path / "v.txt").read_bytes() == (tmp_path / "w.txt").read_bytes()


def test_training_deterministic(small_corpus):
    texts = [r["source"] for r in small_corpus[:10]]
    assert train_vocab(texts, size=200).pieces == train_vocab(texts, size=200).pieces


# characters the session vocabulary was trained on (see conftest)
KNOWN = sorted({ch for r in generate_corpus(40, seed=3) for ch in r["source"]} | {" ", "\n"})


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet=KNOWN, max_size=80), st.integers(0, 1000))
def test_sample_roundtrip_property(small_vocab, text, seed):
    ids = small_vocab.encode(text, "sample", seed=seed)
    assert small_vocab.decode(ids) == normalize(text)
