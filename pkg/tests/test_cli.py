"""CLI: configuration resolution, file contracts, determinism, exit codes."""

import json
import os

import numpy as np
import pytest

from boltlab.cli import ConfigError, config_hash, main, resolve_config


def read(path):
    with open(path) as fh:
        return fh.read()


def test_resolve_defaults_echoed():
    cfg = resolve_config("flow", None, [])
    assert cfg["epsilon"] == 1e-4
    assert cfg["grid"] == {"N": 1024, "S_max": None}
    assert "n" in cfg


def test_unknown_keys_rejected(tmp_path):
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"epsilon": 1e-3, "bogus": 1}))
    with pytest.raises(ConfigError):
        resolve_config("flow", str(bad), [])
    with pytest.raises(ConfigError):
        resolve_config("flow", None, ["grid.M=12"])
    with pytest.raises(ConfigError):
        resolve_config("flow", None, ["nonsense"])


def test_overrides_parse_json():
    cfg = resolve_config("flow", None,
                         ["epsilon=1e-3", "grid.N=256", "time_scheme=euler"])
    assert cfg["epsilon"] == 1e-3
    assert cfg["grid"]["N"] == 256
    assert cfg["time_scheme"] == "euler"


def test_config_hash_stable():
    a = config_hash({"x": 1, "y": [1, 2]})
    b = config_hash({"y": [1, 2], "x": 1})
    assert a == b and len(a) == 64


def test_geometry_outputs(tmp_path):
    out = tmp_path / "g"
    assert main(["geometry", "--out", str(out),
                 "--override", "points=200"]) == 0
    csv = read(out / "geometry.csv")
    lines = csv.splitlines()
    assert lines[0].startswith("# config_hash=")
    assert lines[1] == "r,a,b,c,K_12,abs_Rm,r3_abs_Rm,u"
    assert len(lines) == 202
    cert = json.loads(read(out / "profile_bounds.json"))
    assert cert["verdict"] == "PASS"
    summary = json.loads(read(out / "summary.json"))
    assert summary["config_hash"] in lines[0]
    assert summary["max_abs_Ric_over_abs_Rm"] < 1e-10
    # every defaulted value is echoed
    assert summary["config"]["spacing"] == "log"


def test_geometry_scaling(tmp_path):
    """n = 2 tables equal the n = 1 tables under the isometry scaling
    r -> nr, orbit metric -> n^2, curvature -> 1/n^2."""
    out1, out2 = tmp_path / "n1", tmp_path / "n2"
    assert main(["geometry", "--out", str(out1),
                 "--override", "points=50"]) == 0
    assert main(["geometry", "--out", str(out2), "--override", "points=50",
                 "--override", "n=2", "--override", "r_min=2e-3",
                 "--override", "r_max=2e3"]) == 0

    def cols(path):
        rows = [ln.split(",") for ln in read(path).splitlines()[2:]]
        return np.array(rows, dtype=float)

    c1, c2 = cols(out1 / "geometry.csv"), cols(out2 / "geometry.csv")
    n = 2.0
    assert np.allclose(c2[:, 0], n * c1[:, 0], rtol=1e-9)        # r
    assert np.allclose(c2[:, 1], c1[:, 1], rtol=1e-9)            # a
    assert np.allclose(c2[:, 2], n * n * c1[:, 2], rtol=1e-9)    # b
    assert np.allclose(c2[:, 4], c1[:, 4] / n ** 2, rtol=1e-9)   # K_12
    assert np.allclose(c2[:, 7], c1[:, 7], rtol=1e-9)            # u


def test_certify_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["certify", "--out", str(out1)]) == 0
    assert main(["certify", "--out", str(out2)]) == 0
    assert read(out1 / "certificate.json") == read(out2 / "certificate.json")
    assert read(out1 / "integrand.csv") == read(out2 / "integrand.csv")
    s1 = json.loads(read(out1 / "summary.json"))
    s2 = json.loads(read(out2 / "summary.json"))
    s1.pop("timestamp"), s2.pop("timestamp")
    assert s1 == s2
    doc = json.loads(read(out1 / "certificate.json"))
    assert doc["bracket_paper"] == pytest.approx(-3.63, abs=0.05)


def test_certify_zero_field_fails(tmp_path):
    code = main(["certify", "--out", str(tmp_path / "z"),
                 "--override", "scheme=zero_field_debug"])
    assert code == 1


def test_malformed_config_no_partial_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = tmp_path / "out"
    assert main(["geometry", "--config", str(bad),
                 "--out", str(out)]) == 2
    assert not out.exists()


def test_spectrum_outputs(tmp_path):
    out = tmp_path / "s"
    assert main(["spectrum", "--out", str(out), "--override", "N=256",
                 "--override", "s_max_sweep=[40,55,66]"]) == 0
    summary = json.loads(read(out / "summary.json"))
    assert summary["lambda"] > 0
    sweep = [row["lambda"] for row in summary["s_max_sweep"]]
    assert sweep == sorted(sweep)
    header = read(out / "mode.csv").splitlines()[1]
    assert header == "r,s,h_r,h_1,h_3,I,D,U"


def test_frequency_outputs(tmp_path):
    out = tmp_path / "f"
    assert main(["frequency", "--out", str(out), "--override", "N=512"]) == 0
    summary = json.loads(read(out / "summary.json"))
    assert summary["checks"] == {"U_outer": True, "decay_rate": True}


def test_flow_outputs(tmp_path):
    out = tmp_path / "fl"
    assert main(["flow", "--out", str(out), "--override", "grid.N=256"]) == 0
    summary = json.loads(read(out / "summary.json"))
    assert summary["verdict"] == "PASS"
    assert abs(summary["lambda_hat"] - summary["lambda_model"]) \
        <= 0.02 * summary["lambda_model"]
    lines = read(out / "flow.csv").splitlines()
    assert lines[1] == "t,norm_v_L2,norm_w_L2,sup_v,sup_Rm,dt"
    assert all(ln.startswith("# config_hash=") for ln in lines[:1])


def test_flow_zero_epsilon(tmp_path):
    out = tmp_path / "fl0"
    assert main(["flow", "--out", str(out), "--override", "grid.N=256",
                 "--override", "epsilon=0", "--override",
                 "t_end_offset=2.0"]) == 0
    data = read(out / "flow.csv").splitlines()[2:]
    norm_v = [float(ln.split(",")[1]) for ln in data]
    assert max(norm_v) < 1e-11


def test_ancient_outputs(tmp_path):
    out = tmp_path / "anc"
    assert main(["ancient", "--out", str(out), "--override", "grid.N=256",
                 "--override", "n_snapshots=16"]) == 0
    summary = json.loads(read(out / "summary.json"))
    assert summary["slope"] == pytest.approx(2.0, abs=0.3)
    assert {"flow_eps0.csv", "flow_eps1.csv", "flow_eps2.csv"} \
        <= set(os.listdir(out))
