import json
from pathlib import Path

import numpy as np
import pytest

from qchoquet import refdata
from qchoquet.capacity import validate_capacity
from qchoquet.cli import main
from qchoquet.errors import FormatError
from qchoquet.io import (
    builder_from_obj,
    ev_from_obj,
    lattice_from_obj,
    lattice_to_obj,
    load_builder,
    load_lattice,
    matrix_from_literal,
    matrix_to_literal,
)

FIX = Path(__file__).parent / "fixtures"
L1, L2, EV = str(FIX / "lattice_choice1.json"), str(FIX / "lattice_choice2.json"), str(FIX / "ev.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# formats


def test_matrix_literal_round_trip():
    m = refdata.THETA_4
    assert matrix_from_literal(json.loads(json.dumps(matrix_to_literal(m)))) == m


@pytest.mark.parametrize(
    "bad",
    [[], [[1, 2]], [[[1, 0], [2, 0]], [[0, 0], [1, 0]]], [[[1, 0, 0]]], [[["a", 0]]], [[[True, 0]]]],
)
def test_matrix_literal_rejects(bad):
    with pytest.raises(FormatError):
        matrix_from_literal(bad)


def test_lattice_fixture_matches_builder():
    c = load_lattice(L1)
    ref = refdata.lattice(1)
    for k in ref:
        assert c[k] == ref[k]
    assert validate_capacity(c).ok


def test_builder_fixture():
    c = load_builder(FIX / "builder_choice1.json")
    ref = refdata.lattice(1)
    for k in ref:
        assert c[k].allclose(ref[k].array, 1e-15)


def test_lattice_obj_round_trip(lattice2):
    obj = json.loads(json.dumps(lattice_to_obj(lattice2)))
    back = lattice_from_obj(obj)
    for k in lattice2:
        assert back[k] == lattice2[k]


def test_lattice_ends_optional():
    obj = lattice_to_obj(refdata.lattice(1))
    obj["entries"] = [e for e in obj["entries"] if 0 < len(e["subset"]) < 4]
    c = lattice_from_obj(obj)
    assert validate_capacity(c).ok


@pytest.mark.parametrize(
    "mutate",
    [
        lambda o: o.update(extra=1),
        lambda o: o["entries"][1].update(weight=2),
        lambda o: o["entries"].pop(3),
        lambda o: o["entries"].append(dict(o["entries"][1])),
        lambda o: o["entries"][1].update(subset=[9]),
        lambda o: o.update(d=2),
        lambda o: o.update(n="4"),
    ],
)
def test_lattice_obj_rejects(mutate):
    obj = lattice_to_obj(refdata.lattice(1))
    mutate(obj)
    with pytest.raises(FormatError):
        lattice_from_obj(obj)


def test_ev_obj():
    assert ev_from_obj({"values": [0.1, 0.2]}) == [0.1, 0.2]
    for bad in ({}, {"values": []}, {"values": ["x"]}, {"values": [0.1], "n": 1}, {"values": [float("nan")]}):
        with pytest.raises(FormatError):
            ev_from_obj(bad)


def test_builder_obj_rejects():
    sing = [matrix_to_literal(s) for s in refdata.SINGLETONS]
    with pytest.raises(FormatError):
        builder_from_obj({"singletons": sing, "weights": [{"subset": [1, 2], "mu": {"x": 1.2}}]})
    with pytest.raises(FormatError):
        builder_from_obj({"singletons": sing, "weight": []})


# ---------------------------------------------------------------------------
# validate


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", L1)
    assert code == 0 and "status: OK" in out


def test_validate_corrupted(capsys, tmp_path):
    obj = json.loads(Path(L1).read_text())
    for e in obj["entries"]:
        if e["subset"] == [1, 2]:
            e["matrix"] = matrix_to_literal(0.5 * refdata.THETA_1)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "validate", str(bad), "--format", "json")
    assert code == 1
    rep = json.loads(out)
    assert [[1], [1, 2]] in rep["violations"]
    assert rep["ok"] is False


def test_validate_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == 2 and "error" in err


def test_validate_bad_json(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(capsys, "validate", str(p))[0] == 2


def test_unknown_flag_and_missing_subcommand(capsys):
    assert run(capsys, "validate", L1, "--bogus")[0] == 2
    assert run(capsys)[0] == 2


# ---------------------------------------------------------------------------
# reconstruct


@pytest.mark.parametrize("choice,path", [(1, L1), (2, L2)])
def test_reconstruct_json(capsys, choice, path):
    code, out, _ = run(capsys, "reconstruct", path, EV, "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"r1", "eigenvalues", "reproduced", "errors", "chain", "flags"}
    g = refdata.GOLDEN[choice]
    np.testing.assert_allclose(rep["reproduced"], g["reproduced"], atol=refdata.VALUE_TOL)
    np.testing.assert_allclose(rep["eigenvalues"], g["eigenvalues"], atol=refdata.VALUE_TOL)
    ev = refdata.EV
    np.testing.assert_allclose(rep["errors"], [abs(p - v) / v for p, v in zip(rep["reproduced"], ev)], atol=1e-15)
    assert rep["chain"] == [[2], [2, 4], [2, 3, 4]]


def test_reconstruct_table(capsys):
    code, out, _ = run(capsys, "reconstruct", L1, EV)
    assert code == 0
    assert "chain:" in out and "{2} < {2,4} < {2,3,4}" in out


def test_reconstruct_projector_lattice(capsys, tmp_path):
    code, out, _ = run(capsys, "lattice-gen", "--zd", "3", "--additive", "--format", "json")
    assert code == 0
    lat = tmp_path / "lat.json"
    lat.write_text(out)
    ev = tmp_path / "ev.json"
    ev.write_text(json.dumps({"values": [0.2, 0.5, 0.3]}))
    code, out, _ = run(capsys, "reconstruct", str(lat), str(ev), "--format", "json")
    assert code == 0
    assert max(json.loads(out)["errors"]) < 1e-10


def test_reconstruct_zero_trace(capsys, tmp_path):
    ev = tmp_path / "ev.json"
    ev.write_text(json.dumps({"values": [0.2] * 4}))
    code, _, err = run(capsys, "reconstruct", L1, str(ev))
    assert code == 1 and "ZeroTrace" in err


def test_reconstruct_arity_mismatch(capsys, tmp_path):
    ev = tmp_path / "ev.json"
    ev.write_text(json.dumps({"values": [0.2, 0.3, 0.4]}))
    code, _, err = run(capsys, "reconstruct", L1, str(ev))
    assert code == 1 and "ArityMismatch" in err


def test_reconstruct_policy(capsys, tmp_path):
    # n = 2 < d = 3 is outside the supported regime unless overridden
    spec = tmp_path / "spec.json"
    sing = [matrix_to_literal(refdata.THETA_1), matrix_to_literal(refdata.THETA_2)]
    spec.write_text(json.dumps({"singletons": sing}))
    lat = tmp_path / "lat.json"
    assert run(capsys, "lattice-gen", str(spec), "--format", "json", "-o", str(lat))[0] == 0
    ev = tmp_path / "ev.json"
    ev.write_text(json.dumps({"values": [0.2, 0.3]}))
    code, _, err = run(capsys, "reconstruct", str(lat), str(ev))
    assert code == 1 and "DimensionPolicyViolation" in err
    code, out, _ = run(capsys, "reconstruct", str(lat), str(ev), "--allow-outside-regime", "--format", "json")
    assert code == 0 and "outside paper regime" in json.loads(out)["flags"]


def test_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "reconstruct", L1, EV, "--format", "json", "-o", str(out))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["chain"][0] == [2]


def test_deterministic_output(capsys):
    a = run(capsys, "reconstruct", L2, EV, "--format", "json", "--seed", "3")[1]
    b = run(capsys, "reconstruct", L2, EV, "--format", "json", "--seed", "3")[1]
    assert a == b


# ---------------------------------------------------------------------------
# mobius and choquet


def test_mobius_additive(capsys, tmp_path):
    out = run(capsys, "lattice-gen", "--zd", "5", "--basis", "momentum", "--additive", "--format", "json")[1]
    lat = tmp_path / "lat.json"
    lat.write_text(out)
    code, out, _ = run(capsys, "mobius", str(lat), "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["identity_residual"] < 1e-10
    for e in obj["entries"]:
        if len(e["subset"]) >= 2:
            assert np.abs(np.array(e["matrix"])).max() < 1e-12


def test_mobius_table(capsys):
    code, out, _ = run(capsys, "mobius", L1)
    assert code == 0 and out.startswith("identity residual:")


def test_choquet_forms_identical(capsys):
    outs = []
    for form in ("1", "2"):
        code, out, _ = run(capsys, "choquet", L1, EV, "--form", form, "--format", "json")
        assert code == 0
        obj = json.loads(out)
        outs.append(json.dumps(np.round(np.array(obj["matrix"]), 10).tolist()))
    assert outs[0] == outs[1]


def test_choquet_form3_gate(capsys):
    assert run(capsys, "choquet", L1, EV, "--form", "3")[0] == 1
    code, out, _ = run(capsys, "choquet", L1, EV, "--form", "3", "--allow-mobius-n-gt-d", "--format", "json")
    assert code == 0
    assert json.loads(out)["flags"] == ["unverified equivalence"]


def test_choquet_increments(capsys):
    obj = json.loads(run(capsys, "choquet", L1, EV, "--format", "json")[1])
    np.testing.assert_allclose(obj["increments"], refdata.INCREMENTS, atol=1e-12)
    assert "flags" not in obj


# ---------------------------------------------------------------------------
# lattice-gen


def test_lattice_gen_position_files(capsys, tmp_path):
    code, _, _ = run(capsys, "lattice-gen", "--zd", "3", "--out-dir", str(tmp_path))
    assert code == 0
    files = sorted(tmp_path.glob("singleton_*.json"))
    assert [f.name for f in files] == ["singleton_1.json", "singleton_2.json", "singleton_3.json"]
    mats = [matrix_from_literal(json.loads(f.read_text())).array for f in files]
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            assert np.trace(a @ b).real == pytest.approx(1.0 if i == j else 0.0, abs=1e-14)
    np.testing.assert_allclose(sum(mats), np.eye(3))


def test_lattice_gen_coherent_points(capsys):
    code, out, _ = run(capsys, "lattice-gen", "--zd", "3", "--basis", "coherent", "--points", "0,0", "1,2", "2,1", "--format", "json")
    assert code == 0
    assert len(json.loads(out)["singletons"]) == 3


def test_lattice_gen_builder(capsys):
    code, out, _ = run(capsys, "lattice-gen", str(FIX / "builder_choice1.json"), "--format", "json")
    assert code == 0
    back = lattice_from_obj(json.loads(out))
    assert back[(1, 2)].allclose(refdata.lattice(1)[(1, 2)].array, 1e-15)


def test_lattice_gen_errors(capsys, tmp_path):
    assert run(capsys, "lattice-gen")[0] == 2
    assert run(capsys, "lattice-gen", "--zd", "4")[0] == 1
    spec = json.loads((FIX / "builder_choice1.json").read_text())
    spec["weights"].append({"subset": [1, 3], "mu": {"1": 0.5}})
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(spec))
    code, _, err = run(capsys, "lattice-gen", str(p))
    assert code == 1 and "WeightBelowOne" in err


# ---------------------------------------------------------------------------
# demos


def test_demo_projectors(capsys):
    code, out, _ = run(capsys, "demo", "projectors")
    assert code == 0
    assert "[PASS] lambda=0 trivial solution errors" in out
    assert out.rstrip().endswith("RESULT: PASS")


@pytest.mark.parametrize("choice,r00", [(1, 0.545), (2, 0.536)])
def test_demo_noncommuting(capsys, choice, r00):
    code, out, _ = run(capsys, "demo", f"noncommuting-{choice}", "--format", "json")
    obj = json.loads(out)
    checks = {c["check"]: c["pass"] for c in obj["checks"]}
    for name in ("C(R) coefficient expansion", "increments", "R1 entries", "R1 eigenvalues", "reproduced expectations"):
        assert checks[name], name
    # the exit code reflects the checks, whatever their outcome
    assert code == (0 if all(checks.values()) else 1)
    assert obj["pass"] == all(checks.values())
    r1 = matrix_from_literal(obj["report"]["r1"])
    assert r1.array[0, 0].real == pytest.approx(r00, abs=refdata.VALUE_TOL)
