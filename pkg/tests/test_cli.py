import json
import os
import subprocess
import sys

import pytest

from codecontrast.cli import content_hash, main


def run(*argv):
    return main([str(a) for a in argv])


def test_gen_is_deterministic(tmp_path, capsys):
    assert run("gen", "--count", 10, "--seed", 1, "--out", tmp_path / "a.jsonl") == 0
    assert run("gen", "--count", 10, "--seed", 1, "--out", tmp_path / "b.jsonl") == 0
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    rows = [json.loads(x) for x in (tmp_path / "a.jsonl").read_text().splitlines()]
    assert len(rows) == 10 and all({"id", "family", "source"} <= set(r) for r in rows)
    manifest = json.loads((tmp_path / "a.jsonl.manifest.json").read_text())
    assert manifest["schema_version"] == 1 and manifest["seed"] == 1 and "wall_time_sec" in manifest


def test_gen_zero_is_usage_error(tmp_path, capsys):
    assert run("gen", "--count", 0, "--out", tmp_path / "x") == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run("gen", "--bogus")
    assert exc.value.code == 2


def test_missing_input_and_bad_config(tmp_path):
    assert run("stats", "--in", tmp_path / "none.jsonl") == 2
    (tmp_path / "cfg.json").write_text('{"schema_version": 9}')
    assert run("gen", "--count", 2, "--out", tmp_path / "c", "--config", tmp_path / "cfg.json") == 2


def test_broken_input_is_operation_error(tmp_path):
    (tmp_path / "bad.jsonl").write_text("{not json\n")
    assert run("augment", "--in", tmp_path / "bad.jsonl", "--out", tmp_path / "o.jsonl") == 1


def test_vocab_independent_of_hash_seed(tmp_path):
    # set iteration order changes with PYTHONHASHSEED, so run in fresh interpreters
    assert run("gen", "--count", 20, "--seed", 2, "--out", tmp_path / "c.jsonl") == 0
    outs = []
    for h in ("1", "2"):
        out = tmp_path / f"v{h}.txt"
        subprocess.run([sys.executable, "-m", "codecontrast.cli", "train-vocab", "--in", str(tmp_path / "c.jsonl"),
                        "--out", str(out), "--size", "400"], check=True, capture_output=True,
                       env={**os.environ, "PYTHONHASHSEED": h})
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_content_hash_matches_git_blob(tmp_path):
    (tmp_path / "f").write_bytes(b"hello\n")
    assert content_hash(tmp_path / "f") == "ce013625030ba8dba906f756967f9e9ca394464a"


def test_pipeline_end_to_end(tmp_path, capsys):
    d = tmp_path
    cfg = {"schema_version": 1, "seed": 3, "augment": {"n": 4}, "vocab": {"size": 500},
           "train": {"steps": 4, "batch_size": 8, "queue_size": 16, "refill": 4, "d_tok": 16, "d_hid": 16,
                     "d_out": 8, "pooling": "mean"}}
    (d / "cfg.json").write_text(json.dumps(cfg))
    c = ("--config", d / "cfg.json")
    assert run("gen", "--count", 12, "--out", d / "corpus.jsonl", *c) == 0
    assert run("augment", "--in", d / "corpus.jsonl", "--out", d / "aug.jsonl", *c) == 0
    assert run("augment", "--in", d / "corpus.jsonl", "--out", d / "aug8.jsonl", "--jobs", 8, *c) == 0
    assert (d / "aug.jsonl").read_bytes() == (d / "aug8.jsonl").read_bytes()
    assert run("stats", "--in", d / "aug.jsonl", "--out", d / "stats.json", *c) == 0
    assert run("train-vocab", "--in", d / "aug.jsonl", "--out", d / "vocab.txt", *c) == 0
    assert run("pretrain", "--in", d / "aug.jsonl", "--vocab", d / "vocab.txt", "--out-dir", d / "ck", *c) == 0
    assert run("gen", "--count", 6, "--seed", 50, "--out", d / "held.jsonl") == 0
    assert run("make-pairs", "--in", d / "held.jsonl", "--out", d / "pairs.jsonl", *c) == 0
    capsys.readouterr()
    assert run("eval-clones", "--pairs", d / "pairs.jsonl", "--scorer", "cosine", "--pool", "mean",
               "--checkpoint", d / "ck" / "encoder.ckpt", "--vocab", d / "vocab.txt", "--attack-n", 4,
               "--out", d / "report.json", "--scores", d / "scores.jsonl", *c) == 0
    assert '"attack_n": 4' in capsys.readouterr().out
    assert json.loads((d / "report.json").read_text())["attack_n"] == 4
    assert run("eval-clones", "--pairs", d / "pairs.jsonl", "--scorer", "edit", "--out", d / "edit.json") == 0
    assert run("eval-clones", "--pairs", d / "pairs.jsonl", "--scorer", "random", "--vocab", d / "vocab.txt",
               "--checkpoint", d / "ck" / "encoder.ckpt", "--pool", "mean", "--out", d / "rand.json") == 0
    assert run("embed", "--in", d / "aug.jsonl", "--checkpoint", d / "ck" / "encoder.ckpt",
               "--vocab", d / "vocab.txt", "--pool", "mean", "--out", d / "emb.jsonl") == 0
    manifest = json.loads((d / "ck" / "encoder.ckpt.manifest.json").read_text())
    assert manifest["config"]["steps"] == 4 and set(manifest["inputs"]) == {"corpus", "vocab"}
