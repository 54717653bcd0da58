import json
import shutil
from pathlib import Path

import pytest

from coxkit.cli import main

SYSTEMS = Path(__file__).resolve().parent.parent / "demos" / "systems"


@pytest.fixture
def sysdir(tmp_path):
    for p in SYSTEMS.glob("*.json"):
        shutil.copy(p, tmp_path / p.name)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_classify(capsys, sysdir):
    code, doc, _ = run(capsys, "classify", "--system", sysdir / "a2.json")
    assert code == 0 and doc["label"] == "Spherical(A2)"
    code, doc, _ = run(capsys, "classify", "--system", sysdir / "dinfty2.json", "--subset", "s t")
    assert code == 0 and doc["shape"]["reason"] == "TwoInfiniteFactors"
    assert doc["subsets"][0]["J"] == ["s", "t"]


def test_nf(capsys, sysdir):
    code, doc, _ = run(capsys, "nf", "--system", sysdir / "b2.json", "--word", "t s t s t")
    assert code == 0 and doc["normal_form"] == "s t s" and doc["input_reduced"] is False


def test_invalid_inputs_exit_1(capsys, sysdir):
    assert run(capsys, "nf", "--system", sysdir / "a2.json", "--word", "s q")[0] == 1
    assert run(capsys, "classify", "--system", sysdir / "missing.json")[0] == 1
    assert run(capsys, "qm", "--system", sysdir / "f2.json", "--n-max", "3")[0] == 1
    bad = sysdir / "bad.json"
    bad.write_text('{"generators": ["s", "t"], "m": [[1, 3], [2, 1]]}')
    assert run(capsys, "classify", "--system", bad)[0] == 1
    bad.write_text("{not json")
    assert run(capsys, "classify", "--system", bad)[0] == 1
    assert main(["no-such-command"]) == 1
    capsys.readouterr()


def test_pc_and_essential(capsys, sysdir):
    code, doc, _ = run(capsys, "pc", "--system", sysdir / "a2.json", "--word", "s t s")
    assert code == 0 and doc["closure"] == {"conjugator": "s", "J": ["t"]}
    code, doc, _ = run(capsys, "essential", "--system", sysdir / "p5.json")
    assert code == 0 and doc["essential"] is True


def test_rank1_and_ball_cache(capsys, sysdir):
    code, doc, _ = run(capsys, "rank1", "--system", sysdir / "p5.json", "--radius", "4")
    assert code == 0 and doc["decision"]["status"] == "RankOne"
    assert doc["oracles"]["z2_witness"] is None
    assert list(sysdir.glob(".p5.ball-*.jsonl"))
    code, doc, _ = run(capsys, "rank1", "--system", sysdir / "a2tilde.json", "--word", "s1 s2 s3",
                       "--radius", "4")
    assert code == 0 and doc["decision"]["status"] == "NotRankOne"
    code, doc, _ = run(capsys, "rank1", "--system", sysdir / "a2.json", "--word", "s")
    assert code == 0 and doc["decision"]["status"] == "FiniteOrder"


def test_reversible(capsys, sysdir):
    code, doc, _ = run(capsys, "reversible", "--system", sysdir / "dinfty.json", "--word", "s t")
    assert code == 0 and doc["witness"] == {"k": 1, "a": "s", "b": "t"}
    code, doc, _ = run(capsys, "reversible", "--system", sysdir / "p5.json", "--k-max", "1",
                       "--radius", "3")
    assert code == 2 and doc["witness"] is None


def test_equiv(capsys, sysdir):
    code, doc, _ = run(capsys, "equiv", "--system", sysdir / "dinfty.json", "--word", "s t", "--word", "t s")
    assert code == 0 and doc["witness"] is not None
    code, doc, _ = run(capsys, "equiv", "--system", sysdir / "p5.json", "--word", "s1 s2 s3 s4 s5",
                       "--word", "s5 s4 s3 s2 s1", "--radius", "3", "--horizon", "4")
    assert code == 2 and doc["witness"] is None
    assert run(capsys, "equiv", "--system", sysdir / "dinfty.json", "--word", "s")[0] == 1


def test_pair_virtually_abelian(capsys, sysdir):
    code, doc, _ = run(capsys, "pair", "--system", sysdir / "dinfty.json", "--radius", "3")
    assert code == 0 and doc["search"]["pair"] is None


def test_building_check(capsys, sysdir):
    code, doc, _ = run(capsys, "building-check", "--system", sysdir / "a2.json")
    assert code == 0 and doc["mode"] == "exhaustive" and doc["ok"]
    code, doc, _ = run(capsys, "building-check", "--system", sysdir / "p5_building.json",
                       "--samples", "300", "--radius", "4")
    assert code == 0 and doc["mode"] == "sampled" and doc["ok"]
    assert doc["axioms"]["pairs"] == 300


def test_building_rank1(capsys, sysdir):
    code, doc, _ = run(capsys, "building-rank1", "--system", sysdir / "p5_building.json")
    assert code == 0 and doc["decision"]["status"] == "RankOne"
    code, doc, _ = run(capsys, "building-rank1", "--system", sysdir / "p5_building.json", "--word", "x1^2")
    assert code == 0 and doc["decision"]["status"] == "FiniteOrder"
    assert run(capsys, "building-rank1", "--system", sysdir / "a2tilde.json")[0] == 1


def test_qm_free_group(capsys, sysdir):
    code, doc, _ = run(capsys, "qm", "--system", sysdir / "f2.json", "--length-bound", "4")
    assert code == 0
    assert doc["defect"]["value"] == 1
    assert float(doc["scl_bound"]["lower_bound_float"]) > 0
    assert doc["caveats"]


def test_qm_not_in_commutator_subgroup(capsys, sysdir):
    code, doc, _ = run(capsys, "qm", "--system", sysdir / "f2.json", "--word", "ab", "--word", "ab",
                       "--length-bound", "3")
    assert code == 0 and doc["scl_bound"] is None and "commutator" in doc["scl_error"]


def test_reproducible_and_atomic_out(capsys, sysdir, tmp_path):
    out = tmp_path / "reports" / "qm.json"
    args = ["qm", "--system", sysdir / "f2.json", "--length-bound", "3", "--samples", "50", "--seed", "7"]
    _, _, first = run(capsys, *args, "--out", out)
    _, _, second = run(capsys, *args)
    assert first == second
    assert out.read_text() == first
    assert [p.name for p in out.parent.iterdir()] == ["qm.json"]


@pytest.mark.parametrize("name,needle", [("a2tilde", "affine"), ("dinfty", "affine"),
                                          ("a2", "spherical"), ("dinfty2", "reducible")])
def test_demo_rejects_hypothesis_violations(capsys, sysdir, name, needle):
    code, doc, _ = run(capsys, "demo-main-theorem", "--system", sysdir / f"{name}.json")
    assert code == 2 and needle in doc["error"]


def test_threads_accepted(capsys, sysdir):
    assert run(capsys, "classify", "--system", sysdir / "a2.json", "--threads", "4")[0] == 0
