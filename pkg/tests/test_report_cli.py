import csv
import json
import os

import pytest

from corpora import zipf_lexicon
from textentropy import cli
from textentropy.entropy import EntropyReport, build_report, entropy_rate, f_series, per_char, redundancy
from textentropy.alphabet import normalize
from textentropy.errors import MismatchError
from textentropy.fileio import atomic_write_text
from textentropy.report import TABLE_FILES, WEIGHTED, AggregateRow, build_tables, emit_tables
from textentropy.textgen import generate

# published per-work word counts and average word lengths
WORKS = [
    ("EFE", 279917, 4.80), ("LW1", 231860, 4.51), ("LW2", 137783, 4.73), ("LW3", 100797, 4.35),
    ("LW4", 91388, 4.60), ("LW5", 88376, 4.45), ("LW6", 81223, 4.58), ("LW7", 61386, 4.73),
    ("LW8", 53035, 4.65), ("LW9", 52571, 4.48), ("LW10", 49835, 4.95), ("LW11", 42956, 4.23),
    ("LW12", 27813, 4.48),
]


def published_nword():
    """Per-work n-word entropies (n = 1..18) and the printed weighted-average column."""
    path = os.path.join(os.path.dirname(__file__), "data", "nword_entropy_published.tsv")
    lines = open(path, encoding="utf-8").read().splitlines()
    per_work, average = {w[0]: {} for w in WORKS}, {}
    for line in lines[1:19]:
        cells = line.split("\t")
        n = int(cells[0])
        for (name, _, _), v in zip(WORKS, cells[1:14]):
            per_work[name][n] = float(v)
        average[n] = float(cells[14])
    return per_work, average


def fake_report(name, words, alpha, h_nword, h_chars=(4.4, 8.0, 11.0), distinct_chars=60):
    h_nword = dict(h_nword)
    n_max = max(h_nword)
    rate = entropy_rate(h_nword[3], alpha)
    return EntropyReport(
        name=name, word_count=words, distinct_words=words // 10, char_count=words * 6,
        distinct_chars=distinct_chars, h_char=h_chars[0], h_digram=h_chars[1], h_trigram=h_chars[2],
        h_nword=h_nword,
        f_char_series=f_series({1: h_chars[0], 2: h_chars[1], 3: h_chars[2]}),
        f_word_series=f_series({n: h_nword[n] for n in range(1, 6)}),
        per_char_eq5={n: per_char(h, n, alpha) for n, h in h_nword.items()},
        per_char_eq8={n: per_char(h, n, alpha, True) for n, h in h_nword.items()},
        alpha=alpha, entropy_rate=rate, redundancy=redundancy(rate, distinct_chars),
        onset=None, h_max_n=max(h_nword, key=h_nword.get), n_max=n_max, windowing="disjoint",
    )


def read_table(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


@pytest.fixture
def thirteen():
    per_work, _ = published_nword()
    return [fake_report(name, words, alpha, per_work[name]) for name, words, alpha in WORKS]


def test_published_word_total():
    assert sum(w for _, w, _ in WORKS) == 1298940


def test_thirteen_corpora_alpha_average(tmp_path, thirteen):
    emit_tables(thirteen, tmp_path)
    rows = read_table(tmp_path / TABLE_FILES["word_length"])
    assert rows[-1][0] == WEIGHTED
    assert rows[-1][1] == "1298940"
    assert rows[-1][3] == "4.61"


def test_nword_average_column_matches_published(tmp_path, thirteen):
    _, average = published_nword()
    emit_tables(thirteen, tmp_path)
    rows = read_table(tmp_path / TABLE_FILES["nword_entropy"])
    assert rows[0][1:] == [w[0] for w in WORKS] + [WEIGHTED]
    assert [int(r[0]) for r in rows[1:]] == list(range(1, 19))
    exact = 0
    for row in rows[1:]:
        ours, printed = float(row[-1]), average[int(row[0])]
        assert abs(ours - printed) <= 0.01 + 1e-9
        exact += ours == printed
    # one row differs in the last digit because the source averaged unrounded values
    assert exact >= 17


def test_efe_style_rate_table(tmp_path):
    r = fake_report("EFE", 279917, 4.80, {1: 10.43, 2: 15.22, 3: 16.19, 4: 16.03, 5: 15.75})
    emit_tables([r], tmp_path)
    rows = read_table(tmp_path / TABLE_FILES["entropy_rate"])
    assert rows[0] == ["Text", "H_L"]
    assert rows[1] == ["EFE", "0.93"]
    assert float(rows[1][1]) == round(16.19 / (3 * 5.80), 2)


def test_efe_style_f_word_and_per_char(tmp_path):
    r = fake_report("EFE", 279917, 4.80, {1: 10.43, 2: 15.22, 3: 16.19, 4: 16.03, 5: 15.75})
    emit_tables([r], tmp_path)
    f_rows = read_table(tmp_path / TABLE_FILES["f_word"])
    assert [row[1] for row in f_rows[1:]] == ["10.43", "4.79", "0.97", "-0.16", "-0.28"]
    eq5 = read_table(tmp_path / TABLE_FILES["per_char_eq5"])
    assert eq5[1][1] == "2.17"
    eq8 = read_table(tmp_path / TABLE_FILES["per_char_eq8"])
    assert eq8[2][1] == "1.312"


def test_single_report_average_is_itself(tmp_path):
    text = generate(zipf_lexicon(400), 3000, seed=4)
    r = build_report(normalize(text), n_max=6, name="solo")
    for key, rows in build_tables([r]).items():
        header = rows[0]
        if WEIGHTED in header:
            for row in rows[1:]:
                assert row[-1] == row[1]
        elif rows[-1][0] == WEIGHTED and key != "word_length":
            assert rows[-1][1:] == rows[1][1:]
    assert build_tables([r])["word_length"][-1][3] == f"{r.alpha:.2f}"


def test_average_lies_between_extremes(thirteen):
    for n in range(1, 19):
        vals = {r.name: r.h_nword[n] for r in thirteen}
        agg = AggregateRow(str(n), vals, {r.name: r.word_count for r in thirteen})
        assert min(vals.values()) - 0.005 <= agg.weighted_average <= max(vals.values()) + 0.005


def test_inconsistent_n_max():
    a = fake_report("a", 100, 4.5, {n: 10.0 for n in range(1, 19)})
    b = fake_report("b", 100, 4.5, {n: 10.0 for n in range(1, 13)})
    with pytest.raises(MismatchError):
        build_tables([a, b])


def test_independent_recomputation_of_averages(tmp_path, thirteen):
    emit_tables(thirteen, tmp_path)
    weights = [w for _, w, _ in WORKS]
    for key in ("nword_entropy", "per_char_eq5", "per_char_eq8"):
        rows = read_table(tmp_path / TABLE_FILES[key])
        digits = len(rows[1][1].split(".")[1])
        for row in rows[1:]:
            vals = [float(v) for v in row[1:14]]
            expect = sum(v * w for v, w in zip(vals, weights)) / sum(weights)
            assert row[14] == f"{expect:.{digits}f}"


def test_tables_are_byte_identical(tmp_path, thirteen):
    emit_tables(thirteen, tmp_path / "a")
    emit_tables(list(thirteen), tmp_path / "b")
    for name in TABLE_FILES.values():
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_atomic_write_leaves_no_temp_files(tmp_path):
    target = tmp_path / "deep" / "t.csv"
    atomic_write_text(target, "a,b\n")
    atomic_write_text(target, "c,d\n")
    assert target.read_text() == "c,d\n"
    assert os.listdir(target.parent) == ["t.csv"]


# --- CLI -------------------------------------------------------------------


@pytest.fixture
def corpus_dir(tmp_path):
    d = tmp_path / "corpora"
    d.mkdir()
    for i, name in enumerate(("uno", "dos")):
        (d / f"{name}.txt").write_text(generate(zipf_lexicon(500), 4000, seed=i), encoding="utf-8")
    return d


def test_cli_analyze_directory(tmp_path, corpus_dir, capsys):
    out = tmp_path / "out"
    assert cli.main(["analyze", str(corpus_dir), "--n-max", "8", "--out", str(out)]) == 0
    assert (out / "uno.report.json").exists() and (out / "dos.report.json").exists()
    for name in TABLE_FILES.values():
        assert (out / name).exists()
    report = EntropyReport.from_json((out / "uno.report.json").read_text(encoding="utf-8"))
    assert report.n_max == 8 and report.windowing == "disjoint"
    assert "uno: words=4000" in capsys.readouterr().out


def test_cli_analyze_parallel_matches_serial(tmp_path, corpus_dir):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["analyze", str(corpus_dir), "--n-max", "6", "--out", str(a)]) == 0
    assert cli.main(["analyze", str(corpus_dir), "--n-max", "6", "--out", str(b), "--workers", "2"]) == 0
    for p in sorted(a.iterdir()):
        assert p.read_bytes() == (b / p.name).read_bytes()


def test_cli_fseries_and_rate(tmp_path, corpus_dir, capsys):
    files = sorted(str(p) for p in corpus_dir.iterdir())
    assert cli.main(["fseries", *files, "--out", str(tmp_path / "f")]) == 0
    assert "Work,F_2,F_3" in capsys.readouterr().out
    assert cli.main(["rate", *files, "--out", str(tmp_path / "r")]) == 0
    out = capsys.readouterr().out
    assert "Text,H_L" in out and "Redundancy" in out


def test_cli_zipf(tmp_path, corpus_dir):
    out = tmp_path / "z"
    assert cli.main(["zipf", str(corpus_dir / "uno.txt"), "--rank-window", "2:50", "--out", str(out)]) == 0
    summary = json.loads((out / "zipf_summary.json").read_text())
    assert summary[0]["rank_window"] == [2, 50]
    assert 0 < summary[0]["zipf_constant"] < 1
    assert (out / "uno" / "loglog_1word.dat").exists()
    assert (out / "uno" / "loglog_1word.csv").exists()


def test_cli_generate_and_compare(tmp_path, corpus_dir, capsys):
    out = tmp_path / "g"
    src = str(corpus_dir / "uno.txt")
    args = ["generate", src, "--words", "4000", "--seed", "5", "--out", str(out)]
    assert cli.main(args) == 0
    first = (out / "generated.txt").read_bytes()
    assert cli.main(args) == 0
    assert (out / "generated.txt").read_bytes() == first
    meta = json.loads((out / "generated.txt.meta.json").read_text())
    assert meta["seed"] == 5 and meta["k_words"] == 4000
    capsys.readouterr()
    assert cli.main(["compare", src, str(out / "generated.txt"), "--n-max", "6", "--out", str(out)]) == 0
    assert "h_6word" in capsys.readouterr().out
    assert json.loads((out / "comparison.json").read_text())["scalars"]["alpha"]


def test_cli_generate_from_lexicon(tmp_path):
    lex = tmp_path / "lex.csv"
    lex.write_text("word,count\nde,100\nla,50\n", encoding="utf-8")
    assert cli.main(["generate", "--lexicon", str(lex), "--words", "20", "--out", str(tmp_path)]) == 0
    assert set((tmp_path / "generated.txt").read_text().split()) <= {"de", "la"}


def test_cli_report_from_json(tmp_path, corpus_dir):
    a = tmp_path / "a"
    assert cli.main(["analyze", str(corpus_dir), "--n-max", "5", "--out", str(a), "--format", "json"]) == 0
    assert not (a / TABLE_FILES["nword_entropy"]).exists()
    b = tmp_path / "b"
    jsons = sorted(str(p) for p in a.glob("*.report.json"))
    assert cli.main(["report", *jsons, "--out", str(b)]) == 0
    assert (b / TABLE_FILES["nword_entropy"]).exists()


def test_cli_missing_file(tmp_path, capsys):
    missing = tmp_path / "nope.txt"
    assert cli.main(["analyze", str(missing), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert str(missing) in err and len(err.strip().splitlines()) == 1


def test_cli_bad_utf8(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"hola \xff mundo")
    assert cli.main(["analyze", str(bad), "--out", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert str(bad) in err and "5" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "x.txt", "--n-max", "2"],
        ["analyze", "x.txt", "--n-max", "41"],
        ["analyze"],
        ["compare", "a.txt"],
        ["generate", "--words", "0", "--lexicon", "l.csv"],
        ["generate", "--words", "10"],
        ["zipf", "x.txt", "--rank-window", "50:2"],
    ],
)
def test_cli_usage_errors(argv, capsys):
    assert cli.main(argv) == 1
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["frobnicate"], ["analyze", "--windowing", "sideways", "x"],
                                  ["zipf", "x", "--rank-window", "abc"]])
def test_cli_parse_errors_exit_one(argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 1


def test_cli_unwritable_output(tmp_path, corpus_dir, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    code = cli.main(["analyze", str(corpus_dir / "uno.txt"), "--n-max", "4", "--out", str(blocker / "o")])
    assert code == 2
    assert str(blocker) in capsys.readouterr().err
