import csv
import io
import json
import sys

import pytest

from romanlab.cli import run
from romanlab.tokenlab import (
    Vocabulary,
    fertility,
    observed_tokens,
    relative_fertility_change,
    token_collapse,
    train_bpe,
)
from romanlab.uroman import uroman

NATIVE = [
    "все люди рождаются свободными и равными",
    "они наделены разумом и совестью",
    "каждый человек должен обладать всеми правами",
] * 4


@pytest.fixture
def stdin(monkeypatch):
    def feed(text):
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(text.encode("utf-8")), encoding="utf-8"))

    return feed


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return str(path)


def test_romanize_from_stdin(stdin, capsys):
    stdin("Все люди рождаются свободными и равными.\n")
    assert run(["romanize", "--scheme", "uroman"]) == 0
    assert capsys.readouterr().out == "Vse lyudi rozhdayutsya svobodnymi i ravnymi.\n"


def test_transliterate_defaults_to_auto(stdin, capsys):
    stdin("人人生而自由平等。\n")
    assert run(["transliterate"]) == 0
    assert capsys.readouterr().out == "rén rén shēng ér zì yóu píng děng.\n"


def test_romanize_jsonl_error_is_a_data_error(tmp_path, capsys):
    src = write_lines(tmp_path / "in.jsonl", ['{"text": "Все"}', "oops"])
    out = tmp_path / "out.jsonl"
    assert run(["romanize", src, "--format", "jsonl", "--out", str(out)]) == 2
    assert out.read_text(encoding="utf-8") == '{"text": "Vse"}\n'


def test_invert(stdin, capsys):
    stdin("Čajkovskij\n")
    assert run(["invert", "--scheme", "iso9"]) == 0
    assert capsys.readouterr().out == "Чайковский\n"


def test_invert_foreign_letter(stdin, capsys):
    stdin("Čajkovskiw\n")
    assert run(["invert"]) == 2
    assert "'w'" in capsys.readouterr().err


def test_collapse_empty_token_file(tmp_path, capsys):
    empty = tmp_path / "tokens.txt"
    empty.write_text("", encoding="utf-8")
    assert run(["collapse", "--tokens", str(empty)]) == 2
    assert "empty token set" in capsys.readouterr().err


def test_collapse_token_file(tmp_path, capsys):
    tokens = write_lines(tmp_path / "tokens.txt", ["他", "她", "人"])
    assert run(["collapse", "--tokens", tokens, "--groups"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["unique_orig"] == 3 and report["unique_romanized"] == 2
    assert report["collision_groups"] == [["ta", ["他", "她"]]]


def test_collapse_corpus_needs_vocab(tmp_path, capsys):
    corpus = write_lines(tmp_path / "c.txt", NATIVE)
    assert run(["collapse", "--corpus", corpus]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["romanize", "--bogus"],
        ["romanize", "--scheme", "klingon"],
        ["tokenizer-train", "--out", "x.json"],
        ["fertility", "--vocab", "v.json"],
        ["sweep", "--sizes", "a,b", "--native", "x"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == 1
    assert "usage:" in capsys.readouterr().err


def test_unknown_flag_prints_verb_help(capsys):
    run(["encode", "--vocab", "v.json", "--nope"])
    err = capsys.readouterr().err
    assert "usage: romanlab encode" in err
    assert "unrecognized arguments: --nope" in err


def test_train_encode_fertility(tmp_path, capsys):
    corpus = write_lines(tmp_path / "c.txt", NATIVE)
    vocab_path = tmp_path / "v.json"
    assert run(["tokenizer-train", corpus, "--vocab-size", "300", "--out", str(vocab_path)]) == 0
    vocab = Vocabulary.load(vocab_path)
    assert len(vocab) == 300
    assert vocab == train_bpe(NATIVE, vocab_size=300)

    assert run(["encode", corpus, "--vocab", str(vocab_path)]) == 0
    encoded = capsys.readouterr().out.splitlines()
    assert len(encoded) == len(NATIVE)

    report_path = tmp_path / "base.json"
    assert run(["fertility", corpus, "--vocab", str(vocab_path), "--word-mode", "whitespace", "--out", str(report_path)]) == 0
    report = json.loads(report_path.read_text())
    assert report["token_count"] == sum(len(line.split(" ")) for line in encoded)

    assert run(["fertility", corpus, "--vocab", str(vocab_path), "--word-mode", "whitespace", "--baseline", str(report_path)]) == 0
    assert json.loads(capsys.readouterr().out)["rel_fertility_change"] == 0.0


def test_train_unreachable_size(tmp_path, capsys):
    corpus = write_lines(tmp_path / "c.txt", ["ab"])
    assert run(["tokenizer-train", corpus, "--vocab-size", "5000", "--out", str(tmp_path / "v.json")]) == 2
    assert "at most" in capsys.readouterr().err


def test_sweep_row_matches_manual_recomputation(tmp_path, capsys):
    romanized = [uroman(line) for line in NATIVE]
    a = write_lines(tmp_path / "a.txt", NATIVE)
    b = write_lines(tmp_path / "b.txt", romanized)
    assert run(["sweep", "--sizes", "300", "--native", a, "--romanized", b, "--language", "ru"]) == 0
    (row,) = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))

    nv = train_bpe(NATIVE, vocab_size=300)
    rv = train_bpe(romanized, vocab_size=300)
    f_nat = fertility(nv, NATIVE)
    f_rom = fertility(rv, romanized, words_from=NATIVE)
    loss = token_collapse(observed_tokens(nv, NATIVE), uroman).loss
    assert row == {
        "language": "ru",
        "vocab_size": "300",
        "fertility_native": repr(float(f_nat.fertility)),
        "fertility_romanized": repr(float(f_rom.fertility)),
        "rel_fertility_change": repr(float(relative_fertility_change(f_rom, f_nat))),
        "collapse_loss": repr(float(loss)),
    }


def test_sweep_error_row_exit_code(tmp_path, capsys):
    a = write_lines(tmp_path / "a.txt", NATIVE)
    out = tmp_path / "s.csv"
    assert run(["sweep", "--sizes", "10,300", "--native", a, "--out", str(out)]) == 2
    rows = list(csv.DictReader(out.open(encoding="utf-8")))
    assert rows[0]["fertility_native"] == "" and rows[1]["fertility_native"] != ""


def test_empty_sweep(tmp_path, capsys):
    a = write_lines(tmp_path / "a.txt", NATIVE)
    assert run(["sweep", "--sizes", ",", "--native", a]) == 2
    assert "empty sweep" in capsys.readouterr().err


def test_missing_file_is_a_data_error(tmp_path, capsys):
    assert run(["encode", str(tmp_path / "nope.txt"), "--vocab", str(tmp_path / "nope.json")]) == 2


def test_bench(capsys):
    assert run(["bench", "--docs", "50", "--workers", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["documents"] == 50 and report["workers"] == 2
