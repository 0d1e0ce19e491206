"""End-to-end tests of the command-line interface."""

import json
import math

import pytest
from click.testing import CliRunner

from conftest import data_path
from pdmg.cli import main

WHQ = data_path("whq.lex")
AMBIG = data_path("ambig.lex")


@pytest.fixture()
def runner():
    return CliRunner()


CHECK_SEQ_TRACE = """\
  1  pos= 0  skip-right     selector =i; move right
  2  pos= 1  skip-right     selector =v; move right
  3  pos= 2  skip-right     selector d=; move right
  4  pos= 3  category-match category d checked by d= on see
  5  pos= 3  delete-item    you is out of features; deleted
  6  pos= 2  skip-right     selector =d; move right
  7  pos= 4  category-match category d checked by =d on see
  8  pos= 4  licensee-left  licensee -wh; move left
  9  pos= 2  category-match category v checked by =v on did
 10  pos= 2  delete-item    see is out of features; deleted
 11  pos= 1  category-match category i checked by =i on ε
 12  pos= 1  delete-item    did is out of features; deleted
 13  pos= 0  licensor-match licensor +wh checked against -wh on what
 14  pos= 0  root-category  root category c deleted
 15  pos= 0  delete-item    ε is out of features; deleted
 16  pos= 4  delete-item    what is out of features; deleted
 17  pos= -  accept         empty sequence
well-formed
"""


class TestCheckSeq:
    def test_accept_with_trace(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ,
                                 "ε", "did", "see", "you", "what"])
        assert r.exit_code == 0
        assert r.output == CHECK_SEQ_TRACE

    def test_accept_no_trace(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ, "--no-trace",
                                 "ε", "did", "see", "you", "what"])
        assert r.exit_code == 0
        assert r.output == "well-formed\n"

    def test_reject(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ, "--no-trace", "did"])
        assert r.exit_code == 1
        assert r.output == "ill-formed\n"

    def test_reject_trace_names_the_rule(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ, "did"])
        assert r.exit_code == 1
        assert "rule 1" in r.output
        assert r.output.endswith("ill-formed\n")

    def test_indexed_references(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ, "--no-trace",
                                 "ε@3.0", "did@2.0", "see@1.0",
                                 "you@0.1", "what@0.0"])
        assert r.exit_code == 0
        assert r.output == "well-formed\n"

    def test_eps_alias(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ, "--no-trace",
                                 "eps", "did", "see", "you", "what"])
        assert r.exit_code == 0

    def test_ambiguous_bare_reference(self, runner):
        r = runner.invoke(main, ["check-seq", AMBIG, "saw"])
        assert r.exit_code == 2
        assert "ambiguous" in r.stderr
        assert "saw@0.0" in r.stderr and "saw@0.1" in r.stderr

    def test_unknown_reference(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ, "blorp"])
        assert r.exit_code == 2

    def test_mismatched_indexed_reference(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ, "you@0.0"])
        assert r.exit_code == 2
        assert "what@0.0" in r.stderr

    def test_out_of_range_reference(self, runner):
        r = runner.invoke(main, ["check-seq", WHQ, "you@9.0"])
        assert r.exit_code == 2


class TestDerive:
    def test_question(self, runner):
        r = runner.invoke(main, ["derive", WHQ,
                                 "ε", "did", "see", "you", "what"])
        assert r.exit_code == 0
        assert r.output == (
            "[move [merge ε [merge did [merge [merge see you] what]]]]\n"
            "category: c\n"
            "string: what did you see\n")

    def test_incomplete_evaluation(self, runner):
        r = runner.invoke(main, ["derive", WHQ, "did", "see", "you", "what"])
        assert r.exit_code == 3
        assert "movers never landed" in r.stderr

    def test_arity_error(self, runner):
        r = runner.invoke(main, ["derive", WHQ, "did"])
        assert r.exit_code == 2


class TestParse:
    def test_question_json(self, runner):
        r = runner.invoke(main, ["parse", WHQ, "what did you see",
                                 "--start", "c"])
        assert r.exit_code == 0
        assert r.output == ('{"sentence":"what did you see","count":1,'
                            '"derivations":[[[3,0],[2,0],[1,0],[0,1],[0,0]]]}\n')

    def test_uncovered_sentence_is_not_an_error(self, runner):
        r = runner.invoke(main, ["parse", WHQ, "see what", "--start", "c"])
        assert r.exit_code == 0
        payload = json.loads(r.output)
        assert payload["count"] == 0
        assert payload["derivations"] == []

    def test_corpus_file(self, runner, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("# a comment\nwhat did you see\n\nwhat did see you\n")
        r = runner.invoke(main, ["parse", WHQ, "--start", "c",
                                 "--corpus", str(corpus)])
        assert r.exit_code == 0
        lines = r.output.splitlines()
        assert len(lines) == 2
        assert json.loads(lines[0])["sentence"] == "what did you see"
        assert json.loads(lines[1])["sentence"] == "what did see you"

    def test_cap_exceeded(self, runner):
        r = runner.invoke(main, ["parse", AMBIG, "saw", "--start", "c",
                                 "--max-derivations", "1"])
        assert r.exit_code == 4

    def test_unknown_start(self, runner):
        r = runner.invoke(main, ["parse", WHQ, "you", "--start", "zz"])
        assert r.exit_code == 2


class TestScore:
    def test_uniform_default(self, runner):
        r = runner.invoke(main, ["score", WHQ, "what did you see",
                                 "--start", "c"])
        assert r.exit_code == 0
        assert r.output == (
            '{"sentence":"what did you see","count":1,"prob":0.25,'
            '"derivations":[{"items":[[3,0],[2,0],[1,0],[0,1],[0,0]],'
            '"prob":0.25}]}\n')

    def test_ambiguous_sums_readings(self, runner):
        r = runner.invoke(main, ["score", AMBIG, "saw", "--start", "c"])
        assert r.exit_code == 0
        payload = json.loads(r.output)
        assert payload["count"] == 2
        assert payload["prob"] == pytest.approx(0.75, abs=1e-12)
        probs = [d["prob"] for d in payload["derivations"]]
        assert probs == pytest.approx([0.25, 0.5], abs=1e-12)

    def test_theta_file(self, runner, tmp_path, whq):
        theta = {"d": [1.0, 0.0], "v": [1.0], "i": [1.0], "c": [1.0]}
        p = tmp_path / "theta.json"
        p.write_text(json.dumps(theta))
        r = runner.invoke(main, ["score", WHQ, "what did you see",
                                 "--start", "c", "--theta", str(p)])
        assert r.exit_code == 0
        payload = json.loads(r.output)
        # the derivation uses both d items, one of which has weight zero
        assert payload["prob"] == 0.0

    def test_invalid_theta(self, runner, tmp_path):
        p = tmp_path / "theta.json"
        p.write_text('{"d": [0.9, 0.9]}')
        r = runner.invoke(main, ["score", WHQ, "you", "--start", "d",
                                 "--theta", str(p)])
        assert r.exit_code == 2


class TestSample:
    def test_seed_reproducible(self, runner):
        args = ["sample", WHQ, "--start", "c", "-n", "10", "--seed", "7"]
        a = runner.invoke(main, args)
        b = runner.invoke(main, args)
        assert a.exit_code == b.exit_code == 0
        assert a.output == b.output
        assert len(a.output.splitlines()) == 10

    def test_draws_are_wellformed_references(self, runner, whq):
        from pdmg.cli import resolve_item
        import pdmg
        r = runner.invoke(main, ["sample", WHQ, "--start", "c",
                                 "-n", "5", "--seed", "0"])
        assert r.exit_code == 0
        for line in r.output.splitlines():
            seq = tuple(resolve_item(whq, ref) for ref in line.split())
            assert pdmg.is_wellformed(seq)
            assert pdmg.derived_category(seq) == "c"

    def test_seeds_differ(self, runner):
        a = runner.invoke(main, ["sample", WHQ, "--start", "c",
                                 "-n", "20", "--seed", "1"])
        b = runner.invoke(main, ["sample", WHQ, "--start", "c",
                                 "-n", "20", "--seed", "2"])
        assert a.output != b.output

    def test_rejection_cap(self, runner, tmp_path):
        theta = {"d": [1.0, 0.0], "v": [1.0], "i": [1.0], "c": [1.0]}
        p = tmp_path / "theta.json"
        p.write_text(json.dumps(theta))
        r = runner.invoke(main, ["sample", WHQ, "--start", "c", "--seed", "0",
                                 "--theta", str(p), "--max-rejections", "20"])
        assert r.exit_code == 4


class TestTrain:
    def test_whq_result(self, runner, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("what did you see\n")
        out = tmp_path / "result.json"
        r = runner.invoke(main, ["train", WHQ, str(corpus),
                                 "--start", "c", "--out", str(out)])
        assert r.exit_code == 0
        assert r.output == (f"converged after 2 iterations, bound -1.791759, "
                            f"wrote {out}\n")
        payload = json.loads(out.read_text())
        assert payload["omega"] == {"d": [2, 2], "v": [2], "i": [2], "c": [2]}
        assert payload["theta_mean"] == {
            "d": [0.5, 0.5], "v": [1], "i": [1], "c": [1]}
        assert payload["iterations"] == 2
        assert payload["converged"] is True
        assert payload["unparsed"] == []
        assert payload["elbo_trace"][0] == -2
        assert payload["elbo_trace"][1] == pytest.approx(-math.log(6.0),
                                                         abs=1e-12)
        assert list(payload) == ["omega", "theta_mean", "elbo_trace",
                                 "iterations", "converged", "unparsed"]

    def test_rerun_byte_identical(self, runner, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("what did you see\nwhat did see you\n")
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        for out in (out1, out2):
            r = runner.invoke(main, ["train", WHQ, str(corpus),
                                     "--start", "c", "--out", str(out)])
            assert r.exit_code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_unparsed_sentence_fails(self, runner, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("what did you see\nsee what\n")
        out = tmp_path / "result.json"
        r = runner.invoke(main, ["train", WHQ, str(corpus),
                                 "--start", "c", "--out", str(out)])
        assert r.exit_code == 3
        assert not out.exists()

    def test_skip_unparsed(self, runner, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("see what\nwhat did you see\n")
        out = tmp_path / "result.json"
        r = runner.invoke(main, ["train", WHQ, str(corpus), "--start", "c",
                                 "--skip-unparsed", "--out", str(out)])
        assert r.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["unparsed"] == [0]

    def test_alpha_file(self, runner, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("what did you see\n")
        alpha = {"d": [2.0, 1.0], "v": [1.0], "i": [1.0], "c": [1.0]}
        p = tmp_path / "alpha.json"
        p.write_text(json.dumps(alpha))
        out = tmp_path / "result.json"
        r = runner.invoke(main, ["train", WHQ, str(corpus), "--start", "c",
                                 "--alpha", str(p), "--out", str(out)])
        assert r.exit_code == 0
        payload = json.loads(out.read_text())
        # the question uses each item once: omega = alpha + 1 everywhere
        assert payload["omega"]["d"] == [3, 2]

    def test_cap_exceeded(self, runner, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("what did you see\n")
        r = runner.invoke(main, ["train", WHQ, str(corpus), "--start", "c",
                                 "--max-steps", "5",
                                 "--out", str(tmp_path / "r.json")])
        assert r.exit_code == 4


class TestValidate:
    def test_whq_summary(self, runner):
        r = runner.invoke(main, ["validate", WHQ])
        assert r.exit_code == 0
        assert r.output == (
            "5 items, 4 categories\n"
            "  [0] d: what@0.0, you@0.1\n"
            "  [1] v: see@1.0\n"
            "  [2] i: did@2.0\n"
            "  [3] c: ε@3.0\n"
            "covert: ε@3.0\n")

    def test_smc_risk_note(self, runner, tmp_path):
        p = tmp_path / "risky.lex"
        p.write_text("who :: d -wh\nwhat :: d -wh\nsee :: =d =d v\n"
                     "ε :: =v +wh c\n")
        r = runner.invoke(main, ["validate", str(p)])
        assert r.exit_code == 0
        assert "note: several items lead with -wh: who@0.0, what@0.1" in r.output

    def test_bad_lexicon(self, runner, tmp_path):
        p = tmp_path / "bad.lex"
        p.write_text("oops\n")
        r = runner.invoke(main, ["validate", str(p)])
        assert r.exit_code == 2
        assert "line 1" in r.stderr

    def test_missing_file(self, runner):
        r = runner.invoke(main, ["validate", "/nonexistent.lex"])
        assert r.exit_code == 2


class TestHelp:
    def test_root_help(self, runner):
        r = runner.invoke(main, ["--help"])
        assert r.exit_code == 0
        for cmd in ("validate", "check-seq", "derive", "parse", "score",
                    "sample", "train"):
            assert cmd in r.output

    def test_version(self, runner):
        r = runner.invoke(main, ["--version"])
        assert r.exit_code == 0
        assert "0.1.0" in r.output
