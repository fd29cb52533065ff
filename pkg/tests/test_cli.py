import json

import numpy as np
from quatsim import hmat, qqt
from quatsim.cli import dump_model, main, parse_dims
from quatsim.service import models


def write_state(path, state):
    path.write_text(dump_model(models.StateFile(
        dim=state.dim, matrix=models.QuatMatrix.from_core(state.matrix))))
    return str(path)


def write_povm(path, povm):
    path.write_text(dump_model(models.PovmFile(
        dim=povm.dim, effects=[models.QuatMatrix.from_core(e) for e in povm.effects])))
    return str(path)


def write_channel(path, channel):
    path.write_text(dump_model(models.ChannelFile(
        in_dim=channel.in_dim, out_dim=channel.out_dim,
        kraus=[models.QuatMatrix.from_core(a) for a in channel.kraus])))
    return str(path)


# -- verify ---------------------------------------------------------------------

def test_verify_passes_and_is_deterministic(tmp_path):
    args = ["verify", "--seed", "7", "--dims", "1..3", "--trials", "12"]
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["pass"] is True
    assert report["schema"] == 1
    assert report["dims"] == [1, 2, 3]
    assert report["max_measurement_dev"] <= 1e-10
    assert report["max_channel_dev"] <= 1e-10


def test_verify_violation_exits_one(tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", "--seed", "7", "--dims", "1..2", "--trials", "6",
                 "--tol", "1e-20", "--out", str(out)])
    assert code == 1
    report = json.loads(out.read_text())
    assert report["pass"] is False
    assert report["violations"]
    assert report["violations"][0]["seed"] > 0


def test_verify_usage_errors():
    assert main(["verify", "--trials", "0"]) == 2
    assert main(["verify", "--dims", "zero"]) == 2
    assert main(["verify", "--no-such-flag"]) == 2
    assert main(["no-such-command"]) == 2


def test_parse_dims():
    assert parse_dims("1..4") == [1, 2, 3, 4]
    assert parse_dims("2,5") == [2, 5]
    assert parse_dims("1..2,4") == [1, 2, 4]


def test_verify_strict_mode(tmp_path):
    out = tmp_path / "strict.json"
    assert main(["verify", "--seed", "3", "--dims", "1..2", "--trials", "8",
                 "--mode", "strict", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["mode"] == "strict"


# -- simulate -------------------------------------------------------------------

def test_simulate_table(tmp_path, capsys):
    state = write_state(tmp_path / "state.json", qqt.State.maximally_mixed(2))
    povm = write_povm(tmp_path / "povm.json", qqt.Povm.projective(2))
    assert main(["simulate", "--state", state, "--povm", povm]) == 0
    table = capsys.readouterr().out
    assert "p(r)" in table and "q(r)" in table
    assert "max deviation" in table


def test_simulate_with_channel_writes_response(tmp_path):
    rng = np.random.default_rng(0)
    state = write_state(tmp_path / "state.json", qqt.State.random(rng, 2))
    channel = write_channel(tmp_path / "channel.json",
                            qqt.Channel.random(rng, 2, 3, 2))
    povm = write_povm(tmp_path / "povm.json", qqt.Povm.random(rng, 3, 4))
    out = tmp_path / "resp.json"
    assert main(["simulate", "--state", state, "--povm", povm,
                 "--channel", channel, "--out", str(out)]) == 0
    resp = json.loads(out.read_text())
    assert resp["max_deviation"] <= 1e-10
    assert resp["intermediate_residual"] <= 1e-10


def test_simulate_malformed_povm_names_completeness(tmp_path, capsys):
    state = write_state(tmp_path / "state.json", qqt.State.maximally_mixed(2))
    bad = models.PovmFile(dim=2, effects=[
        models.QuatMatrix.from_core(qqt.Povm.projective(2).effects[0])])
    path = tmp_path / "bad.json"
    path.write_text(dump_model(bad))
    assert main(["simulate", "--state", state, "--povm", str(path)]) == 1
    assert "completeness" in capsys.readouterr().err


def test_simulate_missing_file_exits_two(tmp_path):
    povm = write_povm(tmp_path / "povm.json", qqt.Povm.projective(2))
    assert main(["simulate", "--state", str(tmp_path / "nope.json"),
                 "--povm", povm]) == 2


def test_simulate_unparseable_json_exits_two(tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    povm = write_povm(tmp_path / "povm.json", qqt.Povm.projective(2))
    assert main(["simulate", "--state", str(junk), "--povm", povm]) == 2


def test_simulate_schema_violation_exits_two(tmp_path):
    # parseable JSON, wrong shape: entries not 4-arrays
    bad = tmp_path / "badstate.json"
    bad.write_text(json.dumps({"schema": 1, "dim": 1,
                               "matrix": {"rows": 1, "cols": 1,
                                          "entries": [[[1.0, 0.0]]]}}))
    povm = write_povm(tmp_path / "povm.json", qqt.Povm.projective(1))
    assert main(["simulate", "--state", str(bad), "--povm", povm]) == 2


# -- embed ----------------------------------------------------------------------

def test_embed_round_trip_byte_stable(tmp_path):
    rng = np.random.default_rng(1)
    m = hmat.random_matrix(rng, 2, 3)
    fixture = tmp_path / "m.json"
    fixture.write_text(dump_model(models.QuatMatrixFile(
        rows=2, cols=3, entries=m.to_nested())))
    complex_path = tmp_path / "m_c.json"
    back_path = tmp_path / "m_back.json"
    assert main(["embed", "--input", str(fixture), "--direction", "h2c",
                 "--out", str(complex_path)]) == 0
    assert main(["embed", "--input", str(complex_path), "--direction", "c2h",
                 "--out", str(back_path)]) == 0
    assert back_path.read_bytes() == fixture.read_bytes()
    # and the complex side is stable too
    again = tmp_path / "m_c2.json"
    assert main(["embed", "--input", str(back_path), "--direction", "h2c",
                 "--out", str(again)]) == 0
    assert again.read_bytes() == complex_path.read_bytes()


def test_embed_known_matrix(tmp_path, capsys):
    fixture = tmp_path / "j.json"
    fixture.write_text(dump_model(models.QuatMatrixFile(
        rows=1, cols=1, entries=[[[0.0, 0.0, 1.0, 0.0]]])))
    assert main(["embed", "--input", str(fixture), "--direction", "h2c"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rows"] == 2 and out["cols"] == 2
    flat = [complex(re, im) for re, im in out["entries"]]
    assert flat == [0, 1, -1, 0]


def test_embed_rejects_non_image(tmp_path, capsys):
    bad = tmp_path / "diag.json"
    bad.write_text(dump_model(models.ComplexMatrixFile(
        rows=2, cols=2,
        entries=[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [2.0, 0.0]])))
    assert main(["embed", "--input", str(bad), "--direction", "c2h"]) == 1
    assert "symmetry residual" in capsys.readouterr().err


# -- tomography -------------------------------------------------------------------

def test_tomography_generate_round_trip(tmp_path):
    out = tmp_path / "tomo.json"
    assert main(["tomography", "--dim", "3", "--seed", "9",
                 "--out", str(out)]) == 0
    resp = json.loads(out.read_text())
    assert resp["round_trip_residual"] <= 1e-8
    assert resp["state"]["dim"] == 3


def test_tomography_values_file_round_trip(tmp_path):
    values_path = tmp_path / "values.json"
    out1 = tmp_path / "direct.json"
    out2 = tmp_path / "from_values.json"
    assert main(["tomography", "--dim", "2", "--seed", "4",
                 "--emit-values", str(values_path), "--out", str(out1)]) == 0
    assert main(["tomography", "--values", str(values_path),
                 "--out", str(out2)]) == 0
    direct = json.loads(out1.read_text())
    from_values = json.loads(out2.read_text())
    assert from_values["state"] == direct["state"]


def test_tomography_trivial_dimension(tmp_path):
    out = tmp_path / "tomo1.json"
    assert main(["tomography", "--dim", "1", "--seed", "0",
                 "--out", str(out)]) == 0
    resp = json.loads(out.read_text())
    matrix = models.StatePayload.model_validate(resp["state"]).matrix.to_core()
    assert matrix.allclose(hmat.QMatrix.identity(1), 1e-12)


def test_tomography_perturbed_values_exit_one(tmp_path, capsys):
    values_path = tmp_path / "values.json"
    assert main(["tomography", "--dim", "2", "--seed", "4",
                 "--emit-values", str(values_path),
                 "--out", str(tmp_path / "x.json")]) == 0
    recorded = json.loads(values_path.read_text())
    recorded["values"][3] += 1e-3
    bad = tmp_path / "bad_values.json"
    bad.write_text(json.dumps(recorded))
    capsys.readouterr()
    assert main(["tomography", "--values", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_tomography_needs_dim_or_values():
    assert main(["tomography"]) == 2


# -- basis ------------------------------------------------------------------------

def test_basis_emission(tmp_path):
    out = tmp_path / "basis.json"
    assert main(["basis", "--dim", "3", "--out", str(out)]) == 0
    body = json.loads(out.read_text())
    assert body["schema"] == 1
    assert len(body["elements"]) == 3 * (2 * 3 - 1)
    mats = [models.QuatMatrix.model_validate(e).to_core() for e in body["elements"]]
    gram = np.array([[hmat.hs_form(x, y) for y in mats] for x in mats])
    assert np.max(np.abs(gram - np.eye(15))) <= 1e-12
