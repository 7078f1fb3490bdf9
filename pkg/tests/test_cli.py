import csv
import json
from fractions import Fraction
from pathlib import Path

import pytest

from conceptrec import cli

TOY = str(Path(__file__).parent / "data" / "toy_kft.csv")


def run(*argv):
    return cli.main([str(a) for a in argv])


def rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def rules_file(tmp_path):
    out = tmp_path / "rules.csv"
    assert run("mine-rules", TOY, "--min-supp", 2, "--min-conf", 0.6, "-o", out) == 0
    return out


def test_mine_rules(rules_file):
    got = rows(rules_file)
    assert len(got) == 7
    assert {(r["support"], r["confidence"]) for r in got} == {("2", "0.6667")}


def test_mine_rules_with_exact(tmp_path):
    out = tmp_path / "r.json"
    assert run("mine-rules", TOY, "--min-supp", 2, "--min-conf", 0.6, "--with-exact",
               "--output-format", "json", "-o", out) == 0
    rules = json.loads(out.read_text())["rules"]
    assert len(rules) == 8
    assert rules[0]["confidence_exact"] == "1/1"


def test_mine_concepts(tmp_path):
    out = tmp_path / "c.csv"
    assert run("mine-concepts", TOY, "--min-extent", 2, "--min-intent", 2, "-o", out) == 0
    assert len(rows(out)) == 6
    assert (tmp_path / "c.png").stat().st_size > 0


def test_count_only(capsys):
    assert run("mine-concepts", TOY, "--count-only") == 0
    assert capsys.readouterr().out == "concepts\n16\n"


def test_exact_rules(capsys):
    assert run("exact-rules", TOY, "--min-supp", 2) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1] == '"call distance long","cheap distance long",2,1.0000'


def test_recommend_one_firm(rules_file, capsys):
    assert run("recommend", TOY, "--rules", rules_file, "--firm", "F3") == 0
    assert capsys.readouterr().out.splitlines()[1:] == ["f3,calling distance long,0.6667,1,2"]


def test_recommend_all_json(rules_file, tmp_path):
    out = tmp_path / "rec.json"
    assert run("recommend", TOY, "--rules", rules_file, "--output-format", "json", "-o", out) == 0
    recs = json.loads(out.read_text())["recommendations"]
    assert {r["firm"] for r in recs} == {"f1", "f2", "f3", "f4", "f5"}
    assert all(r["score_exact"] == "2/3" for r in recs)


def test_metarules_morph(tmp_path):
    out = tmp_path / "m.csv"
    assert run("metarules-morph", TOY, "--form", "D", "-o", out) == 0
    got = [(r["antecedent"], r["consequent"], r["confidence"]) for r in rows(out)]
    assert ("calling distance long plan", "calling distance long", "0.6667") in got
    assert rows(tmp_path / "m.stats.csv")[0]["form"] == "D"
    assert (tmp_path / "m.stats.png").exists()


def test_metarules_morph_dictionary(tmp_path, capsys):
    stems = tmp_path / "stems.csv"
    stems.write_text("word,stem\ncarrier,call\n", encoding="utf-8")
    assert run("metarules-morph", TOY, "--form", "A", "--stem-dict", stems) == 0
    (rule,) = [r for r in csv.DictReader(capsys.readouterr().out.splitlines())
               if r["antecedent"] == "carrier distance long" and r["via"] == "call"]
    assert set(rule["consequent"].split(";")) == {
        "call distance long", "calling distance long", "calling distance long plan"
    }


@pytest.fixture
def pharma(tmp_path):
    ctx = tmp_path / "ph.csv"
    ctx.write_text("object,attribute\nf1,B Vitamin\nf1,c vitamin\nf2,b vitamin\nf2,c vitamin\n"
                   "f2,e vitamin\nf3,e vitamin\n", encoding="utf-8")
    onto = tmp_path / "onto.csv"
    onto.write_text("child,parent\nvitamins,\nb_vitamin,vitamins\nc_vitamin,vitamins\ne_vitamin,vitamins\n",
                    encoding="utf-8")
    return ctx, onto


def test_metarules_onto(pharma, capsys):
    ctx, onto = pharma
    assert run("metarules-onto", ctx, "--ontology", onto) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == 'N,"b vitamin","c vitamin;e vitamin",1,0.5000,"b_vitamin"'


def test_metarules_onto_binding(pharma, tmp_path, capsys):
    ctx, onto = pharma
    binding = tmp_path / "bind.csv"
    binding.write_text("node,attribute_label\nb_vitamin,B VITAMIN\nc_vitamin,c vitamin\n", encoding="utf-8")
    assert run("metarules-onto", ctx, "--ontology", onto, "--binding", binding) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3


def test_crossval_and_synth_are_byte_identical(tmp_path):
    outputs = []
    for i in range(2):
        d = tmp_path / f"run{i}"
        assert run("synth", "--objects", 120, "--attributes", 100, "--incidences", 900, "--sectors", 3,
                   "--sector-objects", 20, "--sector-attributes", 6, "--seed", 5, "-o", d / "ctx.csv",
                   "--blocks", d / "blocks.json", "--no-figures") == 0
        assert run("crossval", d / "ctx.csv", "--min-supp", "10%", "--min-conf", "90%", "--folds", 5,
                   "--seed", 2, "-o", d / "cv.csv") == 0
        outputs.append([(d / name).read_bytes() for name in ("ctx.csv", "blocks.json", "cv.csv", "cv.png")])
    assert outputs[0] == outputs[1]
    cv = rows(tmp_path / "run0" / "cv.csv")
    assert [r["fold"] for r in cv] == ["1", "2", "3", "4", "5", "means"]
    assert len(json.loads((tmp_path / "run0" / "blocks.json").read_text())) == 3
    assert not (tmp_path / "run0" / "ctx.png").exists()


def test_crossval_threads(tmp_path):
    out = [tmp_path / "a.json", tmp_path / "b.json"]
    for path, threads in zip(out, (1, 2)):
        assert run("crossval", TOY, "--min-supp", 1, "--min-conf", 0.5, "--folds", 5, "--threads", threads,
                   "--output-format", "json", "-o", path) == 0
    assert out[0].read_bytes() == out[1].read_bytes()


@pytest.mark.parametrize("fmt", ["cxt", "fimi"])
def test_synth_formats_feed_stats(tmp_path, fmt, capsys):
    ext = {"cxt": "cxt", "fimi": "dat"}[fmt]
    path = tmp_path / f"ctx.{ext}"
    assert run("synth", "--objects", 30, "--attributes", 20, "--incidences", 100, "--sectors", 0,
               "--context-format", fmt, "-o", path) == 0
    assert run("stats", path) == 0
    out = capsys.readouterr().out
    assert "incidences,100" in out


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ENV_OUTPUT_DIR, str(tmp_path / "out"))
    assert run("stats", TOY) == 0
    assert (tmp_path / "out" / "stats.csv").exists()
    assert (tmp_path / "out" / "stats.png").exists()


def test_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"min_conf": 0.9, "mine-rules": {"min_supp": 2, "min_conf": 0.6}}))
    out = tmp_path / "r.csv"
    assert run("--verbose", "mine-rules", TOY, "--config", cfg, "-o", out) == 0
    assert len(rows(out)) == 7
    assert run("mine-rules", TOY, "--config", cfg, "--min-conf", 0.7, "-o", out) == 0
    assert rows(out) == []


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert run("mine-rules", TOY, "--config", cfg) == 2
    assert str(cfg) in capsys.readouterr().err


def test_missing_file(capsys):
    assert run("stats", "does-not-exist.csv") == 1
    assert "does-not-exist.csv" in capsys.readouterr().err


def test_parse_error_names_file_and_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("object,attribute\na,b\nc\n")
    assert run("mine-rules", bad) == 1
    assert f"{bad}:3:" in capsys.readouterr().err


def test_unknown_firm(rules_file, capsys):
    assert run("recommend", TOY, "--rules", rules_file, "--firm", "nobody") == 1
    assert "nobody" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["no-such-command"],
    ["mine-rules", TOY, "--min-conf", "1.5"],
    ["mine-rules", TOY, "--min-supp", "abc"],
    ["crossval", TOY, "--folds", "0"],
])
def test_bad_arguments_exit_nonzero(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code != 0


def test_infeasible_synth(capsys):
    assert run("synth", "--objects", 2, "--attributes", 2, "--incidences", 9) == 1
    assert "infeasible" in capsys.readouterr().err


@pytest.mark.parametrize("text,expected", [("30", 30), ("1.5%", Fraction(3, 200)), ("0.015", Fraction(3, 200)), ("1/4", Fraction(1, 4))])
def test_parse_min_supp(text, expected):
    assert cli.parse_min_supp(text) == expected
