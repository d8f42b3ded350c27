"""Rendering from the committed samples, determinism, and strict input
validation (missing columns / keys / files exit nonzero)."""

import json
from pathlib import Path

import pytest

from boltplots.cli import main
from boltplots.io import InputError, read_table

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

CASES = {
    "curvature": ["geometry.csv"],
    "integrand": ["integrand.csv"],
    "eigenmode": ["mode.csv", "spectrum_summary.json"],
    "frequency": ["frequency.csv", "frequency_summary.json"],
    "flow": ["flow.csv", "flow_summary.json"],
    "overlay": ["flow_eps0.csv", "flow_eps1.csv", "flow_eps2.csv",
                "ancient_summary.json"],
}


def _argv(kind, inputs, out):
    return [kind, "--in", *[str(p) for p in inputs], "--out", str(out)]


@pytest.mark.parametrize("kind", sorted(CASES))
def test_kinds_render_from_samples(kind, tmp_path):
    out = tmp_path / f"{kind}.png"
    inputs = [SAMPLES / name for name in CASES[kind]]
    assert main(_argv(kind, inputs, out)) == 0
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000


def test_deterministic_output(tmp_path):
    outs = []
    for i in (0, 1):
        out = tmp_path / f"fig{i}.png"
        assert main(_argv("integrand", [SAMPLES / "integrand.csv"], out)) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_missing_column_fails(tmp_path):
    src = (SAMPLES / "geometry.csv").read_text().splitlines()
    # drop the u column (last) from header and rows
    clipped = [src[0]] + [",".join(line.split(",")[:-1]) for line in src[1:]]
    bad = tmp_path / "geometry.csv"
    bad.write_text("\n".join(clipped) + "\n")
    assert main(_argv("curvature", [bad], tmp_path / "fig.png")) == 2


def test_empty_series_fails(tmp_path):
    bad = tmp_path / "integrand.csv"
    bad.write_text("# config_hash=deadbeef\nr,integrand,cutoff\n")
    assert main(_argv("integrand", [bad], tmp_path / "fig.png")) == 2


def test_missing_json_key_fails(tmp_path):
    doc = json.loads((SAMPLES / "spectrum_summary.json").read_text())
    doc.pop("lambda")
    bad = tmp_path / "summary.json"
    bad.write_text(json.dumps(doc))
    args = _argv("eigenmode", [SAMPLES / "mode.csv", bad], tmp_path / "f.png")
    assert main(args) == 2


def test_unknown_kind_and_missing_file(tmp_path):
    assert main(_argv("sparkline", [SAMPLES / "geometry.csv"],
                      tmp_path / "f.png")) == 2
    assert main(_argv("curvature", [tmp_path / "nope.csv"],
                      tmp_path / "f.png")) == 2


def test_read_table_parses_metadata():
    t = read_table(str(SAMPLES / "mode.csv"))
    assert "config_hash" in t.meta
    r, = t.require("r")
    assert r.size > 100
    with pytest.raises(InputError):
        t.require("no_such_column")
