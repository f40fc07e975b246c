"""End-to-end checks of the command line tool (path in $DNETS_BIN)."""

import json
import os
import subprocess

import pytest

BIN = os.environ.get("DNETS_BIN", "dnets")


def run(*args, expect=0):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    assert proc.returncode == expect, (
        f"{args} -> exit {proc.returncode}\nstdout: {proc.stdout}\nstderr: {proc.stderr}"
    )
    return proc.stdout


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    run("gen-dataset", "--task", "rot90", "--n", "2", "--count", "8",
        "--seed", "5", "--out", str(out))
    assert (out / "manifest.tsv").exists()
    assert (out / "input_0000.pbm").exists()
    return out


def make_config(tmp_path, dataset, seed=9):
    config = {
        "n": 2,
        "net": {"layers": [["x"], ["y"]], "edges": [["x", "y"]]},
        "neighbor": {
            "family": "twist",
            "h": {"dihedral": True, "swap_masks": 2, "blank_masks": 2},
            "g": {"indicators": 2, "dominions": 1, "dominion_labels": 3},
            "sample_bound": 24,
        },
        "loss": "hamming",
        "trainer": {"max_iterations": 30, "patience": 0},
        "dataset": str(dataset / "manifest.tsv"),
        "seed": seed,
        "out": str(tmp_path / "run"),
    }
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(config))
    return path


def test_gen_dataset_is_deterministic(tmp_path, dataset):
    other = tmp_path / "again"
    run("gen-dataset", "--task", "rot90", "--n", "2", "--count", "8",
        "--seed", "5", "--out", str(other))
    for name in ["manifest.tsv", "input_0003.pbm", "target_0003.pbm"]:
        assert (other / name).read_bytes() == (dataset / name).read_bytes()


def test_train_eval_verify_show(tmp_path, dataset):
    config = make_config(tmp_path, dataset)
    stdout = run("train", "--config", str(config))
    assert "initial_loss" in stdout and "final_loss" in stdout
    net = tmp_path / "run" / "net.json"
    trace = tmp_path / "run" / "trace.csv"
    assert net.exists() and trace.exists()
    assert trace.read_text().startswith("step,vertex,loss_before,loss_after,candidates")

    eval_out = run("eval", "--net", str(net), "--dataset",
                   str(dataset / "manifest.tsv"), "--loss", "hamming")
    final = float(stdout.split("final_loss")[1].split()[0])
    assert abs(float(eval_out.strip()) - final) < 1e-9

    verify_out = run("verify", "--net", str(net), "--mode", "exhaustive")
    assert "PASS" in verify_out and "all checks passed" in verify_out

    show_out = run("show", "--net", str(net))
    assert "images(2)" in show_out and "x -> y" in show_out


def test_train_is_deterministic(tmp_path, dataset):
    (tmp_path / "a").mkdir(exist_ok=True)
    (tmp_path / "b").mkdir(exist_ok=True)
    config_a = make_config(tmp_path / "a", dataset)
    config_b = make_config(tmp_path / "b", dataset)
    run("train", "--config", str(config_a))
    run("train", "--config", str(config_b))
    net_a = (tmp_path / "a" / "run" / "net.json").read_bytes()
    net_b = (tmp_path / "b" / "run" / "net.json").read_bytes()
    assert net_a == net_b
    trace_a = (tmp_path / "a" / "run" / "trace.csv").read_bytes()
    trace_b = (tmp_path / "b" / "run" / "trace.csv").read_bytes()
    assert trace_a == trace_b


def test_verify_fails_on_non_polymorphism(tmp_path):
    # a net whose output activation is the pixelwise AND
    net_doc = {
        "universe": {"kind": "images", "n": 2},
        "layers": [["a", "b"], ["o"]],
        "edges": [["a", "o"], ["b", "o"]],
        "activations": {
            "o": {
                "family": "bitwise_and",
                "arity": 2,
                "universe": {"kind": "images", "n": 2},
                "params": {},
            }
        },
    }
    path = tmp_path / "and_net.json"
    path.write_text(json.dumps(net_doc))
    proc = subprocess.run([BIN, "verify", "--net", str(path), "--mode", "exhaustive"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "FAIL" in proc.stdout


def test_gen_dominion_and_verify(tmp_path):
    out = tmp_path / "dom.txt"
    stdout = run("gen-dominion", "--k", "2", "--n", "2", "--labels", "4",
                 "--seed", "0", "--out", str(out), "--alpha")
    assert out.exists()
    assert (tmp_path / "dom.txt.minc").exists()
    header = out.read_text().splitlines()[0].split()
    assert header == ["2", "2", "4"]
    run("verify", "--dominion", str(out))
    # seed 0 at n=2 embeds in a tree, so the label assignment is emitted
    assert "alpha written" in stdout
    assert (tmp_path / "dom.txt.alpha" / "assignment.tsv").exists()

    # a cyclic minc (seed 2) skips alpha but still succeeds
    cyclic = tmp_path / "cyclic.txt"
    stdout = run("gen-dominion", "--k", "2", "--n", "2", "--labels", "4",
                 "--seed", "2", "--out", str(cyclic), "--alpha")
    assert "alpha skipped" in stdout
    run("verify", "--dominion", str(cyclic))


def test_usage_errors_exit_2(tmp_path):
    proc = subprocess.run([BIN, "train", "--config", str(tmp_path / "missing.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([BIN, "gen-dataset", "--task", "sharpen", "--n", "2",
                           "--out", str(tmp_path / "x")], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([BIN, "nonsense"], capture_output=True, text=True)
    assert proc.returncode == 2
