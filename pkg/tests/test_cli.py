import json

import pytest

from seqtag.cli import main
from seqtag.corpus import Corpus, parse_conll, read_conll, save_conll
from seqtag.synthetic import random_corpus


@pytest.fixture()
def files(tmp_path, det_corpus):
    gold = tmp_path / "gold.conll"
    save_conll(det_corpus, gold)
    return tmp_path, str(gold)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_stats_text_and_json(capsys, files, det_corpus):
    _, gold = files
    code, out, _ = run(capsys, "stats", "--in", gold)
    assert code == 0
    assert f"sentences\t{len(det_corpus)}" in out
    code, out, _ = run(capsys, "stats", "--in", gold, "--json")
    doc = json.loads(out)
    assert doc["token_count"] == sum(len(s) for s in det_corpus)


def test_split_is_reproducible(capsys, tmp_path):
    src = tmp_path / "c.conll"
    save_conll(random_corpus(120, kinds=["Person", "Money", "Year", "Disease", "Day"], seed=3), src)
    outputs = []
    for name in ("a", "b"):
        code, out, _ = run(capsys, "split", "--in", src, "--out", tmp_path / name)
        assert code == 0 and out.startswith("train\t")
        outputs.append(((tmp_path / name / "train.conll").read_bytes(),
                        (tmp_path / name / "test.conll").read_bytes()))
    assert outputs[0] == outputs[1]
    train = read_conll(tmp_path / "a" / "train.conll")
    test = read_conll(tmp_path / "a" / "test.conll")
    assert len(train) + len(test) == 120


def test_crf_pipeline(capsys, files):
    tmp, gold = files
    model = tmp / "crf.json"
    code, out, _ = run(capsys, "train-crf", "--in", gold, "--model", model,
                       "--c1", "0.01", "--c2", "0.01", "--max-iterations", "60")
    assert code == 0 and "c1\t0.01" in out
    log = (tmp / "crf.json.log").read_text().splitlines()
    assert log and log[0].startswith("0\t")

    code, out, _ = run(capsys, "predict", "--in", gold, "--model", model)
    pred = parse_conll(out)
    assert [s.words for s in pred] == [s.words for s in read_conll(gold)]

    code, out, _ = run(capsys, "eval", "--in", gold, "--model", model)
    assert code == 0
    assert out.strip().splitlines()[-1].split()[-3:] == ["100.00"] * 3

    pred_path = tmp / "pred.conll"
    run(capsys, "predict", "--in", gold, "--model", model, "--out", pred_path)
    code, out, _ = run(capsys, "eval", "--in", gold, "--pred", pred_path, "--json")
    assert json.loads(out)["avg_all"]["f1"] == 100.0

    code, out, _ = run(capsys, "confmat", "--in", gold, "--pred", pred_path, "--filter")
    assert out == "gold\\predicted\n"

    code, out, _ = run(capsys, "transitions", "--model", model, "--k", "3")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 7 and lines[1].startswith("top1\t")


def test_neural_pipeline(capsys, files):
    tmp, gold = files
    model = tmp / "nn.json"
    code, out, _ = run(capsys, "train-neural", "--in", gold, "--model", model,
                       "--word-emb", "8", "--char-emb", "4", "--char-hidden", "4",
                       "--word-hidden", "8", "--epochs", "2")
    assert code == 0
    log = (tmp / "nn.json.log").read_text().splitlines()
    assert [line.split("\t")[0] for line in log] == ["0", "1"]
    code, out, _ = run(capsys, "predict", "--in", gold, "--model", model)
    assert code == 0 and len(parse_conll(out)) == 50
    code, _, err = run(capsys, "transitions", "--model", model)
    assert code == 8 and "CRF" in err


def test_pipeline_byte_identical(capsys, files):
    tmp, gold = files
    outs = []
    for name in ("m1.json", "m2.json"):
        run(capsys, "train-crf", "--in", gold, "--model", tmp / name,
            "--c1", "0.05", "--c2", "0.05", "--max-iterations", "20")
        _, pred, _ = run(capsys, "predict", "--in", gold, "--model", tmp / name)
        _, report, _ = run(capsys, "eval", "--in", gold, "--model", tmp / name)
        outs.append(((tmp / name).read_bytes(), pred, report))
    assert outs[0] == outs[1]


def test_errors(capsys, tmp_path):
    code, _, err = run(capsys, "stats", "--in", tmp_path / "nope.conll")
    assert code == 3 and "no such file" in err

    bad = tmp_path / "bad.conll"
    bad.write_text("a\tO\nb\n")
    code, _, err = run(capsys, "stats", "--in", bad)
    assert code == 4 and "line 2" in err

    tag = tmp_path / "tag.conll"
    tag.write_text("a\tB-Planet\n")
    code, _, err = run(capsys, "stats", "--in", tag)
    assert code == 5

    tiny = tmp_path / "tiny.conll"
    save_conll(random_corpus(10, seed=1), tiny)
    code, _, err = run(capsys, "split", "--in", tiny, "--out", tmp_path / "s")
    assert code == 6 and "coverage" in err

    empty = tmp_path / "empty.conll"
    empty.write_text("")
    code, _, err = run(capsys, "train-crf", "--in", empty, "--model", tmp_path / "m",
                       "--c1", "0.1", "--c2", "0.1")
    assert code == 7

    junk = tmp_path / "junk.json"
    junk.write_text('{"format_version": 999}')
    code, _, err = run(capsys, "predict", "--in", tiny, "--model", junk)
    assert code == 8

    code, _, err = run(capsys, "train-crf", "--in", tiny, "--model", tmp_path / "m")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_module_entry(tmp_path, det_corpus):
    import subprocess
    import sys

    path = tmp_path / "c.conll"
    save_conll(Corpus(det_corpus.sentences[:3]), path)
    res = subprocess.run([sys.executable, "-m", "seqtag", "stats", "--in", str(path)],
                         capture_output=True, text=True, check=True)
    assert res.stdout.startswith("sentences\t3")
