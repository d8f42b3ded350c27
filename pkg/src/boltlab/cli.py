"""Command-line front end and serialization.

One executable with subcommands (geometry | certify | spectrum | frequency
| flow | ancient).  Every run resolves a single JSON configuration
document (defaults, then --config file, then --override key=value with
dotted paths), rejects unknown keys, and stamps every output file with
the SHA-256 hash of the resolved configuration, so outputs are
byte-reproducible apart from the one timestamp field in the summary.

Exit codes: 0 all certificates PASS, 1 a certificate FAIL, 2 usage or
configuration error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import io
import json
import os
import sys
import tempfile
from datetime import datetime, timezone
from typing import Any

import numpy as np

from .certificate import build_cutoff, certify_instability, certificate_wire, displayed_integrand
from .curvature import certify_profile_bounds, curvature
from .flow import FlowConfig, FlowDomainError, FlowModel, ancient_family, run
from .profile import BoltProfile
from .quadrature import DivergentIntegralError
from .spectral import assemble, frequency_diagnostics, reference_lambda, solve

__all__ = ["main", "ConfigError", "resolve_config", "config_hash"]


class ConfigError(ValueError):
    """Malformed or unknown configuration input."""


# -- configuration plumbing -------------------------------------------------

DEFAULTS: dict[str, dict[str, Any]] = {
    "geometry": {
        "n": 1.0,
        "r_min": 1e-3,
        "r_max": 1e3,
        "points": 2000,
        "spacing": "log",
    },
    "certify": {
        "scheme": "default",
        "r_max": 400.0,
        "integrand_r_max": 12.0,
        "integrand_points": 1201,
    },
    "spectrum": {
        "n": 1.0,
        "N": 2048,
        "S_max": None,
        "scheme": "fv",
        "sigma": -0.5,
        "refine": False,
        "s_max_sweep": [],
    },
    "frequency": {
        "n": 1.0,
        "N": 2048,
        "S_max": None,
        "scheme": "fv",
    },
    "flow": dict(FlowConfig().to_dict(), n=1.0),
    "ancient": dict(
        FlowConfig().to_dict(),
        n=1.0,
        eps_list=[1e-3, 10.0 ** -3.5, 1e-4],
        n_snapshots=48,
    ),
}


def _merge(defaults: dict[str, Any], loaded: dict[str, Any],
           prefix: str = "") -> dict[str, Any]:
    out = copy.deepcopy(defaults)
    for key, val in loaded.items():
        dotted = f"{prefix}{key}"
        if key not in out:
            raise ConfigError(f"unknown configuration key: {dotted}")
        if isinstance(out[key], dict) and isinstance(val, dict):
            out[key] = _merge(out[key], val, prefix=dotted + ".")
        else:
            out[key] = val
    return out


def _apply_override(config: dict[str, Any], spec: str) -> None:
    if "=" not in spec:
        raise ConfigError(f"override must be key=value, got {spec!r}")
    key, raw = spec.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            raise ConfigError(f"unknown configuration key: {key}")
        node = node[part]
    if parts[-1] not in node:
        raise ConfigError(f"unknown configuration key: {key}")
    node[parts[-1]] = value


def resolve_config(subcommand: str, config_path: str | None,
                   overrides: list[str]) -> dict[str, Any]:
    """Defaults, then the JSON file, then dotted overrides; unknown keys
    rejected at every stage so the echoed document is complete."""
    config = copy.deepcopy(DEFAULTS[subcommand])
    if config_path is not None:
        try:
            with open(config_path) as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {config_path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config document must be a JSON object")
        config = _merge(config, loaded)
    for spec in overrides:
        _apply_override(config, spec)
    return config


def config_hash(config: dict[str, Any]) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


# -- serialization ----------------------------------------------------------

def _csv_text(columns: dict[str, np.ndarray], chash: str) -> str:
    buf = io.StringIO()
    buf.write(f"# config_hash={chash}\n")
    buf.write(",".join(columns) + "\n")
    arrays = [np.asarray(v, dtype=float) for v in columns.values()]
    for row in zip(*arrays):
        buf.write(",".join(format(x, ".17g") for x in row) + "\n")
    return buf.getvalue()


def _json_text(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_all(out_dir: str, files: dict[str, str]) -> None:
    """Atomic writes: each file lands via rename, so a failure mid-run
    leaves no partial artifacts."""
    os.makedirs(out_dir, exist_ok=True)
    for name, text in files.items():
        path = os.path.join(out_dir, name)
        fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _summary(subcommand: str, config: dict[str, Any], chash: str,
             payload: dict[str, Any], verdict: str) -> dict[str, Any]:
    return {
        "subcommand": subcommand,
        "config": config,
        "config_hash": chash,
        "verdict": verdict,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        **payload,
    }


# -- subcommands ------------------------------------------------------------

def cmd_geometry(config: dict[str, Any], chash: str):
    profile = BoltProfile(float(config["n"]))
    if config["spacing"] == "log":
        r = np.geomspace(config["r_min"], config["r_max"], int(config["points"]))
    elif config["spacing"] == "linear":
        r = np.linspace(config["r_min"], config["r_max"], int(config["points"]))
    else:
        raise ConfigError(f"unknown spacing {config['spacing']!r}")
    v = profile.eval(r)
    table = curvature(profile, r)
    cert = certify_profile_bounds(profile)
    cert.metadata["config_hash"] = chash
    files = {
        "geometry.csv": _csv_text({
            "r": r, "a": v.a, "b": v.b, "c": v.c,
            "K_12": table.K_12, "abs_Rm": table.abs_Rm,
            "r3_abs_Rm": r ** 3 * table.abs_Rm,
            "u": profile.fiber_ratio(r),
        }, chash),
        "profile_bounds.json": cert.to_json(timestamp=False) + "\n",
    }
    payload = {
        "max_abs_Ric_over_abs_Rm": float(np.max(table.abs_Ric / table.abs_Rm)),
        "certificate": cert.to_dict(timestamp=False),
    }
    return files, payload, cert.verdict


def cmd_certify(config: dict[str, Any], chash: str):
    cert = certify_instability(scheme=str(config["scheme"]),
                               r_max=float(config["r_max"]))
    cert.metadata["config_hash"] = chash
    r = np.linspace(0.0, float(config["integrand_r_max"]),
                    int(config["integrand_points"]))
    eta = build_cutoff(r)
    files = {
        "certificate.json": certificate_wire(cert, timestamp=False) + "\n",
        "integrand.csv": _csv_text({
            "r": r,
            "integrand": displayed_integrand(r) * eta ** 2,
            "cutoff": eta,
        }, chash),
    }
    payload = {"certificate": json.loads(certificate_wire(cert, timestamp=False))}
    return files, payload, cert.verdict


def cmd_spectrum(config: dict[str, Any], chash: str):
    profile = BoltProfile(float(config["n"]))
    s_max = config["S_max"]
    form = assemble(profile, int(config["N"]), s_max, str(config["scheme"]))
    result = solve(form, sigma=float(config["sigma"]))
    freq = frequency_diagnostics(result)
    payload: dict[str, Any] = {
        "lambda": result.lam,
        "lambda2_form": result.lam2,
        "residual": result.residual,
        "grid": {"N": form.grid.N, "S_max": form.grid.s_max,
                 "scheme": form.scheme},
    }
    if config["refine"]:
        payload["refinement"] = reference_lambda(profile, int(config["N"]) // 2,
                                                 s_max)
    sweep = list(config["s_max_sweep"])
    if sweep:
        payload["s_max_sweep"] = [
            {"S_max": float(sm),
             "lambda": solve(assemble(profile, int(config["N"]), float(sm),
                                      str(config["scheme"]))).lam}
            for sm in sweep
        ]
    mode = result.mode.values
    files = {
        "mode.csv": _csv_text({
            "r": freq["r"], "s": freq["s"],
            "h_r": mode[0], "h_1": mode[1], "h_3": mode[2],
            "I": freq["I"], "D": freq["D"], "U": freq["U"],
        }, chash),
    }
    verdict = "PASS" if result.lam > 0 else "FAIL"
    return files, payload, verdict


def cmd_frequency(config: dict[str, Any], chash: str):
    profile = BoltProfile(float(config["n"]))
    form = assemble(profile, int(config["N"]), config["S_max"],
                    str(config["scheme"]))
    result = solve(form)
    freq = frequency_diagnostics(result)
    scale = np.max(freq["identity_scale"])
    ident_rel = float(np.max(np.abs(freq["identity_residual"])) / scale)
    u_ok = freq["U_outer_max"] <= freq["U_bound"] * (1.0 - 0.05)
    decay_ok = freq["decay_rate_sqrtI"] >= freq["decay_bound"] * 0.9
    payload = {
        "lambda": result.lam,
        "identity_residual_rel": ident_rel,
        "U_outer_max": freq["U_outer_max"],
        "U_bound": freq["U_bound"],
        "decay_rate_sqrtI": freq["decay_rate_sqrtI"],
        "decay_bound": freq["decay_bound"],
        "checks": {"U_outer": bool(u_ok), "decay_rate": bool(decay_ok)},
    }
    files = {
        "frequency.csv": _csv_text({
            "r": freq["r"], "s": freq["s"],
            "I": freq["I"], "D": freq["D"], "U": freq["U"],
        }, chash),
    }
    verdict = "PASS" if (u_ok and decay_ok) else "FAIL"
    return files, payload, verdict


def _flow_config(config: dict[str, Any]) -> FlowConfig:
    return FlowConfig(
        epsilon=float(config["epsilon"]),
        t_end_offset=config["t_end_offset"],
        dt_init=float(config["dt_init"]),
        dt_ctrl=float(config["dt_ctrl"]),
        dt_max=float(config["dt_max"]),
        N=int(config["grid"]["N"]),
        s_max=config["grid"]["S_max"],
        fit_window=tuple(config["fit_window"]),
        curvature_ceiling=config["curvature_ceiling"],
        time_scheme=str(config["time_scheme"]),
    )


def _flow_series_csv(diag, chash: str) -> str:
    return _csv_text({
        "t": diag.t, "norm_v_L2": diag.norm_v, "norm_w_L2": diag.norm_w,
        "sup_v": diag.sup_v, "sup_Rm": diag.sup_rm, "dt": diag.dt,
    }, chash)


def cmd_flow(config: dict[str, Any], chash: str):
    fc = _flow_config(config)
    model = FlowModel(BoltProfile(float(config["n"])), fc.N, fc.s_max)
    diag = run(fc, model=model)
    files = {"flow.csv": _flow_series_csv(diag, chash)}
    payload = diag.summary()
    # the resolved CLI document (which includes n) is echoed by _summary
    payload.pop("config", None)
    payload.pop("verdict", None)
    payload["meta"] = {k: v for k, v in diag.meta.items() if k != "eig"}
    payload["eig"] = diag.meta.get("eig", {})
    return files, payload, diag.verdict


def cmd_ancient(config: dict[str, Any], chash: str):
    fc = _flow_config(config)
    model = FlowModel(BoltProfile(float(config["n"])), fc.N, fc.s_max)
    report = ancient_family(fc, list(config["eps_list"]), model=model,
                            n_snapshots=int(config["n_snapshots"]))
    files = {}
    for i, eps in enumerate(report["eps_list"]):
        files[f"flow_eps{i}.csv"] = _flow_series_csv(report["runs"][eps], chash)
    payload = {
        "lambda": report["lambda"],
        "eps_list": report["eps_list"],
        "pairs": report["pairs"],
        "slope": report["slope"],
        "lambda_hats": {format(e, ".6e"): lh
                        for e, lh in report["lambda_hats"].items()},
    }
    return files, payload, report["verdict"]


_COMMANDS = {
    "geometry": cmd_geometry,
    "certify": cmd_certify,
    "spectrum": cmd_spectrum,
    "frequency": cmd_frequency,
    "flow": cmd_flow,
    "ancient": cmd_ancient,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boltlab",
        description="Taub-Bolt Ricci-flow instability laboratory",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="JSON configuration file")
        p.add_argument("--out", default="out",
                       help="output directory (default: out)")
        p.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="dotted-path configuration override (repeatable)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = resolve_config(args.subcommand, args.config, args.override)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    chash = config_hash(config)
    try:
        files, payload, verdict = _COMMANDS[args.subcommand](config, chash)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FlowDomainError, DivergentIntegralError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    files["summary.json"] = _json_text(
        _summary(args.subcommand, config, chash, payload, verdict))
    try:
        _write_all(args.out, files)
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 2
    print(f"{args.subcommand}: {verdict} (config {chash[:12]}, "
          f"{len(files)} files in {args.out})")
    return 0 if verdict == "PASS" else 1


if __name__ == "__main__":
    raise SystemExit(main())
