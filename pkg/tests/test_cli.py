import io
import json

import pytest

from metaseg.cli import cli_main
from metaseg.corpus_io import generate_synthetic, save_corpus
from metaseg.grammar import default_grammar


def run(*argv):
    out = io.StringIO()
    code = cli_main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def corpus_path(tmp_path):
    path = tmp_path / "corpus.json"
    save_corpus(generate_synthetic(7, 12, 40), path)
    return path


@pytest.fixture
def micro_corpus(tmp_path):
    names = {"m": "MoveAhead", "l": "RotateLeft", "r": "RotateRight", "i": "SliceObject"}
    eps = [
        {"id": f"e{k}", "goal": "g", "sub_goals": ["s"], "actions": [names[c] for c in word],
         "subgoal_index": [0] * len(word)}
        for k, word in enumerate(["lmmr", "mmm", "llmrr", "i"])
    ]
    path = tmp_path / "micro.json"
    path.write_text(json.dumps({"version": "1.0", "episodes": eps}))
    return path


def test_segment_micro_examples(micro_corpus):
    code, out = run("segment", str(micro_corpus))
    assert code == 0
    assert out.splitlines() == [
        "e0\tStep Left[0,4)",
        "e1\tMove Forward[0,3)",
        "e2\tStep Back[0,5)",
        "e3\tInteraction[0,1)",
    ]


def test_segment_with_grammar_file(micro_corpus, tmp_path):
    g = tmp_path / "g.tsv"
    g.write_text("# forward and single letters only\nF\tm+\nL\tl\nR\tr\nI\ti\n")
    code, out = run("segment", "--grammar", str(g), str(micro_corpus))
    assert code == 0
    assert out.splitlines()[0] == "e0\tL[0,1) F[1,3) R[3,4)"
    code2, out2 = run("--grammar", str(g), "segment", str(micro_corpus))
    assert (code2, out2) == (code, out)


def test_segment_incomplete_grammar_exit_1(micro_corpus, tmp_path):
    g = tmp_path / "g.tsv"
    g.write_text("F\tm+\n")
    assert run("segment", "--grammar", str(g), str(micro_corpus))[0] == 1


def test_bad_grammar_file_exit_1(micro_corpus, tmp_path):
    g = tmp_path / "g.tsv"
    g.write_text("F\tm**\n")
    assert run("segment", "--grammar", str(g), str(micro_corpus))[0] == 1
    assert run("segment", "--grammar", str(tmp_path / "nope"), str(micro_corpus))[0] == 1


def test_segment_stats_and_json(corpus_path):
    code, out = run("segment", "--stats", str(corpus_path))
    lines = out.splitlines()
    assert code == 0 and len(lines) == 12 + 4 + 10
    assert lines[12].startswith("n_trajectories: 12")
    code, out = run("--format", "json", "segment", "--stats", str(corpus_path))
    data = json.loads(out)
    assert len(data["segmentations"]) == 12 and data["stats"]["n_trajectories"] == 12


def test_table(corpus_path):
    code, out = run("table", "--letters", "ll")
    assert code == 0
    assert out == "Turn Left\t0\t1\nTurn Around\t0\t2\nTurn Left\t1\t2\n"
    code, out = run("table", str(corpus_path))
    assert code == 0 and out.startswith("# syn-7-00000\n")
    assert run("table")[0] == 2
    assert run("table", "--letters", "lx")[0] == 1
    code, out = run("--format", "json", "table", "--letters", "mm")
    assert json.loads(out)[0]["length"] == 2


def test_stats(corpus_path, tmp_path):
    figs = tmp_path / "figs"
    code, out = run("stats", str(corpus_path), "--figures", str(figs))
    assert code == 0
    assert out.splitlines()[0] == "n_trajectories: 12"
    assert (figs / "meta_histogram.png").stat().st_size > 0
    assert (figs / "lengths.png").stat().st_size > 0


def test_metrics(tmp_path):
    path = tmp_path / "results.json"
    ep = {"id": "p", "goal": "hot potato slice", "sub_goals": ["s"], "actions": [],
          "subgoal_index": [], "goal_conditions": [True, True, True, False],
          "pred_len": 20, "ref_len": 10,
          "pred_path": [[0, 0], [1, 0]], "ref_path": [[0, 0], [1, 0]]}
    path.write_text(json.dumps({"version": "1.0", "episodes": [ep]}))
    code, out = run("metrics", str(path), "--figures", str(tmp_path / "f"))
    assert code == 0
    assert out.splitlines() == [
        "SR\t0.0000", "GC\t0.7500", "PLW-SR\t0.0000", "PLW-GC\t0.3750",
        "PC\t1.0000", "LS\t1.0000", "CLS\t1.0000",
    ]
    assert (tmp_path / "f" / "metrics.png").exists()


def test_metrics_without_paths_prints_nan(micro_corpus, tmp_path):
    path = tmp_path / "r.json"
    ep = {"id": "x", "goal": "g", "sub_goals": [], "actions": [], "subgoal_index": [],
          "goal_conditions": [True]}
    path.write_text(json.dumps({"version": "1.0", "episodes": [ep]}))
    code, out = run("metrics", str(path))
    assert code == 0 and "PC\tnan" in out
    assert run("metrics", str(micro_corpus))[0] == 1  # no goal conditions


def test_gradcheck():
    code, out = run("gradcheck", "--batches", "5")
    assert code == 0 and out.splitlines()[-1] == "result\tPASS"
    assert run("gradcheck", "--batches", "3", "--tol", "1e-30")[0] == 1


def test_gumbel():
    code, out = run("gumbel", "--logits=-0.356675,-1.609438,-2.302585", "--tau", "1",
                    "--draws", "50000", "--seed", "3")
    assert code == 0
    freqs = [float(line.split("\t")[1]) for line in out.splitlines()[:3]]
    assert abs(freqs[0] - 0.7) < 0.01
    assert out.splitlines()[3].startswith("max_sum_error\t")
    assert run("gumbel", "--logits", "a,b")[0] == 2
    assert run("gumbel", "--logits", "1,2", "--tau", "0")[0] == 1


def test_oracle_check():
    code, out = run("oracle-check", "--max-len", "4", "--random", "20")
    assert code == 0 and out.splitlines()[-1] == "result: PASS"


def test_gen(tmp_path):
    path = tmp_path / "g.json"
    assert run("--seed", "5", "gen", "--n", "3", "--mean-len", "10", "-o", str(path))[0] == 0
    code, out = run("gen", "--seed", "5", "--n", "3", "--mean-len", "10")
    assert out == path.read_text()


def test_usage_errors():
    assert run("bogus")[0] == 2
    assert run()[0] == 2
    assert run("segment")[0] == 2
    assert run("--format", "xml", "gen")[0] == 2
    assert run("--help")[0] == 0


def test_missing_corpus_exit_1(tmp_path):
    assert run("segment", str(tmp_path / "missing.json"))[0] == 1


def test_module_entry_point(micro_corpus):
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "metaseg", "segment", str(micro_corpus)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("e0\tStep Left[0,4)")
    res = subprocess.run([sys.executable, "-m", "metaseg", "nope"], capture_output=True)
    assert res.returncode == 2
