"""Command-line front end: simulate, estimate, verify, constants, mix.

Every command is a pure function of (config, seed); JSON payloads are stable
across re-runs, with volatile data (timestamps, versions) confined to a
"meta" block.  Exit codes: 0 pass, 1 statistical failure or saturated
coverage, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import fixtures
from .boolmodel import (BooleanModelSpec, GrainModel, OrientationLaw, ScaleLaw,
                        hitting_count, sample_realization)
from .estimate import (ChannelConfig, SaturatedCoverageError, estimate_densities,
                       grain_process_densities, harmonic_series_constants,
                       invert_isotropic, invert_kernel, miles_forward,
                       tensor_isotropy_check)
from .geom2d import ConvexPolygon, Window, from_literal, rect, regular_ngon, square
from .integral import (enumerate_mix, enumerate_mix_reduced, kinematic_mc,
                       pkf_rhs, translative_mc, translative_rhs)
from .valuations import (alpha_iso, c_area, c_tensor, c_upper, harm_dim, kappa,
                         omega, val_intrinsic_all)

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    pass


# -- configuration -----------------------------------------------------------------

def _build_shape(d: dict) -> ConvexPolygon:
    kind = d.get("kind")
    if kind == "square":
        return square(_field(d, "side", float))
    if kind == "rect":
        return rect(_field(d, "a", float), _field(d, "b", float))
    if kind == "regular_ngon":
        return regular_ngon(_field(d, "m", int), _field(d, "r", float))
    if kind == "polygon":
        return from_literal(_field(d, "vertices", list))
    raise ConfigError(f"grain.shapes[].kind: unknown shape kind {kind!r}")


def _field(d: dict, name: str, typ):
    if name not in d:
        raise ConfigError(f"missing required field {name!r}")
    try:
        return typ(d[name])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field {name!r}: {exc}") from None


def parse_config(d: dict) -> dict:
    """Validate a configuration dict; returns normalized settings."""
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    schema = d.get("schema", 1)
    if schema != 1:
        raise ConfigError(f"schema: unsupported version {schema!r}")
    gamma = _field(d, "gamma", float)
    if not gamma > 0:
        raise ConfigError("gamma: must be positive")
    gd = d.get("grain")
    if not isinstance(gd, dict):
        raise ConfigError("grain: must be an object")
    shapes = gd.get("shapes")
    if not isinstance(shapes, list) or not shapes:
        raise ConfigError("grain.shapes: need a nonempty list")
    shape_pairs = [(_build_shape(s), float(s.get("weight", 1.0))) for s in shapes]
    od = gd.get("orientation", {"law": "fixed", "angle": 0.0})
    law = od.get("law")
    if law == "fixed":
        orientation = OrientationLaw.fixed(float(od.get("angle", 0.0)))
    elif law == "uniform":
        orientation = OrientationLaw.uniform()
    elif law == "discrete":
        orientation = OrientationLaw.discrete(od.get("atoms", []))
    else:
        raise ConfigError(f"grain.orientation.law: unknown law {law!r}")
    sd = gd.get("scale", {"law": "fixed", "value": 1.0})
    slaw = sd.get("law")
    if slaw == "fixed":
        scale = ScaleLaw.fixed(float(sd.get("value", 1.0)))
    elif slaw == "discrete":
        scale = ScaleLaw.discrete(sd.get("atoms", []))
    else:
        raise ConfigError(f"grain.scale.law: unknown law {slaw!r}")
    win = d.get("window")
    if not (isinstance(win, list) and len(win) == 4):
        raise ConfigError("window: need [x0, y0, x1, y1]")
    try:
        window = Window(*[float(x) for x in win])
    except ValueError as exc:
        raise ConfigError(f"window: {exc}") from None
    if "seed" not in d:
        raise ConfigError("missing required field 'seed'")
    try:
        grain = GrainModel(shape_pairs, orientation=orientation, scale=scale)
        spec = BooleanModelSpec(gamma=gamma, grain=grain, window=window)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return {
        "spec": spec,
        "seed": int(d["seed"]),
        "reps": int(d.get("reps", 200)),
        "l_max": int(d.get("l_max", 16)),
        "s_max": int(d.get("s_max", 4)),
        "k_max": int(d.get("k_max", 4)),
        "samples": int(d.get("samples", 20000)),
        "threads": int(d.get("threads", 1)),
        "channels": d.get("channels", ["v", "harm", "tensor", "support"]),
    }


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON (line {exc.lineno}): {exc.msg}")
    return parse_config(raw)


def _apply_overrides(cfg: dict, args) -> dict:
    for name in ("seed", "reps", "threads", "samples"):
        v = getattr(args, name, None)
        if v is not None:
            cfg[name] = v
    if getattr(args, "lmax", None) is not None:
        cfg["l_max"] = args.lmax
    if getattr(args, "smax", None) is not None:
        cfg["s_max"] = args.smax
    if getattr(args, "kmax", None) is not None:
        cfg["k_max"] = args.kmax
    if getattr(args, "channels", None):
        cfg["channels"] = [c.strip() for c in args.channels.split(",") if c.strip()]
    return cfg


def _channel_config(cfg: dict) -> ChannelConfig:
    chs = {c.lower() for c in cfg["channels"]}
    v_only = chs <= {"v0", "v1", "v2", "v"}
    return ChannelConfig(
        l_max=cfg["l_max"], s_max=cfg["s_max"],
        harmonics=not v_only and ("harm" in chs or not chs),
        tensors=not v_only and ("tensor" in chs or not chs),
        support=not v_only and ("support" in chs or not chs))


# -- output helpers -------------------------------------------------------------------

def _payload(body: dict) -> dict:
    return {**body, "meta": {"generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ",
                                                           time.gmtime())}}


def _emit(obj: dict, out: str | None, name: str) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        (path / name).write_text(text + "\n")
    else:
        print(text)


# -- commands -----------------------------------------------------------------------

def cmd_simulate(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    spec = cfg["spec"]
    reals = [sample_realization(spec, cfg["seed"], index=i)
             for i in range(cfg["reps"])]
    counts = [len(r) for r in reals]
    sim = spec.window.dilate(spec.grain.r_max)
    body = {
        "schema": 1,
        "seed": cfg["seed"],
        "reps": cfg["reps"],
        "mean_count": float(np.mean(counts)) if counts else 0.0,
        "expected_count": spec.gamma * sim.area,
        "counts": counts,
    }
    _emit(_payload(body), args.out, "summary.json")
    dump = {"schema": 1, "realizations": [r.to_json_dict() for r in reals]}
    _emit(_payload(dump), args.out, "realizations.json")
    return EXIT_OK


def cmd_estimate(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    spec = cfg["spec"]
    ccfg = _channel_config(cfg)
    report = estimate_densities(spec, cfg["reps"], cfg["seed"], cfg=ccfg,
                                threads=cfg["threads"], keep_samples=True)
    _emit(_payload(report.to_json_dict()), args.out, "report.json")
    if args.out and report.per_rep is not None:
        names = report.layout.names()
        with open(Path(args.out) / "replications.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["rep"] + names)
            for i, row in enumerate(report.per_rep):
                writer.writerow([i] + [f"{x:.12g}" for x in row])
    code = EXIT_OK
    fits = {}
    iso = spec.grain.is_isotropic
    try:
        fit_iso = invert_isotropic(report)
        fits["isotropic"] = fit_iso.to_json_dict()
        fits["isotropic"]["model_misspecified"] = not iso
    except SaturatedCoverageError as exc:
        fits["isotropic"] = {"error": str(exc)}
        code = EXIT_STAT_FAIL
    if ccfg.harmonics:
        try:
            fit_k = invert_kernel(report)
            fits["kernel"] = fit_k.to_json_dict()
        except SaturatedCoverageError as exc:
            fits["kernel"] = {"error": str(exc)}
            code = EXIT_STAT_FAIL
    _emit(_payload({"schema": 1, "fits": fits, "authoritative":
                    "isotropic" if iso else "kernel"}), args.out, "fit.json")
    return code


def cmd_constants(args) -> int:
    body = {
        "schema": 1,
        "kappa": {str(k): kappa(k) for k in range(0, 5)},
        "omega": {str(k): omega(k) for k in range(1, 7)},
        "c_upper": {f"{r},{s}": c_upper(r, s)
                    for r in range(0, 4) for s in range(0, 4)},
        "c_tensor": {f"{k},{r},{s}": c_tensor(k, r, s)
                     for k in (1, 2) for r in range(0, 3) for s in range(0, 5)},
        "c_area": {f"2,{j}": c_area(2, j) for j in (0, 1)},
        "alpha": {f"2,{j},{s}": alpha_iso(2, j, s)
                  for j in (0, 1) for s in range(0, 5)},
        "D": {f"2,{l}": harm_dim(2, l) for l in range(0, 9)},
        "series": {f"{l},{m},{p},{q}": v for (l, m, p, q), v in
                   sorted(harmonic_series_constants(8).items())},
    }
    _emit(_payload(body), args.out, "constants.json")
    return EXIT_OK


def cmd_mix(args) -> int:
    j, k, n = args.j, args.k, args.n
    body = {"schema": 1, "j": j, "n": n,
            "mix_reduced": [list(m) for m in enumerate_mix_reduced(j, n)]}
    if k is not None:
        body["k"] = k
        body["mix"] = [list(m) for m in enumerate_mix(j, k, n)]
    _emit(_payload(body), args.out, "mix.json")
    return EXIT_OK


# -- verification suites ---------------------------------------------------------------

def _record(check: str, lhs, rhs, stderr, ok: bool) -> dict:
    return {
        "check": check,
        "lhs": np.asarray(lhs, dtype=float).tolist(),
        "rhs": np.asarray(rhs, dtype=float).tolist(),
        "stderr": np.asarray(stderr, dtype=float).tolist(),
        "pass": bool(ok),
    }


def suite_translative(samples: int, seed: int) -> list[dict]:
    phi = val_intrinsic_all()
    records = []
    for i, (label, k, m) in enumerate(fixtures.fixture_pairs()):
        res = translative_mc(phi, k, m, samples, seed + i)
        rhs = np.array([translative_rhs(j, [k, m]) for j in (0, 1, 2)])
        ok = res.within(rhs)
        records.append(_record(f"translative[{label}]", res.est, rhs, res.stderr, ok))
    return records


def suite_kinematic(samples: int, seed: int) -> list[dict]:
    phi = val_intrinsic_all()
    records = []
    for i, (label, k, m) in enumerate(fixtures.kinematic_pairs()):
        res = kinematic_mc(phi, k, m, samples, seed + i)
        rhs = np.array([pkf_rhs(j, k, m) for j in (0, 1, 2)])
        ok = res.within(rhs)
        records.append(_record(f"kinematic[{label}]", res.est, rhs, res.stderr, ok))
    return records


def suite_poisson(reps: int, seed: int) -> list[dict]:
    spec = BooleanModelSpec(
        gamma=20.0,
        grain=GrainModel(square(0.2)),
        window=Window(0.0, 0.0, 1.0, 1.0))
    c_body = square(0.2).translate((0.4, 0.4))
    counts = hitting_count(spec, c_body, reps, seed)
    theta = spec.gamma * (0.2 + 0.2) ** 2
    mean = counts.mean()
    se_mean = counts.std(ddof=1) / math.sqrt(reps)
    rec1 = _record("poisson-mean", mean, theta, se_mean,
                   abs(mean - theta) <= 3 * se_mean)
    disp = counts.var(ddof=1) / mean
    se_disp = math.sqrt(2.0 / (reps - 1))  # chi-square dispersion test scale
    rec2 = _record("poisson-dispersion", disp, 1.0, se_disp,
                   abs(disp - 1.0) <= 3 * se_disp)
    return [rec1, rec2]


def suite_miles(reps: int, seed: int, threads: int = 1) -> list[dict]:
    spec = fixtures.disk_model()
    target = miles_forward(grain_process_densities(spec))
    report = estimate_densities(spec, reps, seed, threads=threads)
    records = []
    for idx, name in ((0, "V0"), (1, "V1"), (2, "V2")):
        se = float(report.stderr[idx])
        ok = abs(report.est[idx] - target.est[idx]) <= 3 * se
        records.append(_record(f"miles[{name}]", report.est[idx],
                               target.est[idx], se, ok))
    fit = invert_isotropic(report)
    ok = abs(fit.gamma_hat - spec.gamma) <= 3 * fit.stderr
    records.append(_record("miles[gamma]", fit.gamma_hat, spec.gamma,
                           fit.stderr, ok))
    return records


def suite_tensor(reps: int, seed: int, threads: int = 1) -> list[dict]:
    spec = fixtures.disk_model()
    report = estimate_densities(spec, reps, seed, threads=threads)
    records = []
    for s in (1, 2, 3):
        chk = tensor_isotropy_check(report, 1, s)
        records.append(_record(f"tensor[j=1,s={s}]", chk["measured"],
                               chk["predicted"], chk["stderr"], chk["pass"]))
    return records


def suite_harmonic(reps: int, seed: int, threads: int = 1) -> list[dict]:
    spec = fixtures.square_model()
    target = miles_forward(grain_process_densities(spec))
    report = estimate_densities(spec, reps, seed, threads=threads)
    records = []
    sl = report.layout.slices["harm"]
    n = 1 + 2 * 8
    est = report.est[sl][:n]
    se = report.stderr[sl][:n]
    rhs = target.est[sl][:n]
    ok = bool(np.all(np.abs(est - rhs) <= 3 * se + 1e-12))
    records.append(_record("harmonic[aniso,l<=8]", est, rhs, se, ok))
    fit = invert_kernel(report)
    ok = abs(fit.gamma_hat - spec.gamma) <= 3 * fit.stderr + fit.tail_bound
    records.append(_record("harmonic[gamma]", fit.gamma_hat, spec.gamma,
                           fit.stderr, ok))
    return records


SUITES = {
    "translative": lambda a: suite_translative(a["samples"], a["seed"]),
    "kinematic": lambda a: suite_kinematic(a["samples"], a["seed"]),
    "poisson": lambda a: suite_poisson(a["reps"], a["seed"]),
    "miles": lambda a: suite_miles(a["reps"], a["seed"], a["threads"]),
    "tensor": lambda a: suite_tensor(a["reps"], a["seed"], a["threads"]),
    "harmonic": lambda a: suite_harmonic(a["reps"], a["seed"], a["threads"]),
}


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; known: {sorted(SUITES)}",
              file=sys.stderr)
        return EXIT_USAGE
    params = {
        "samples": args.samples if args.samples is not None else 20000,
        "reps": args.reps if args.reps is not None else
                (5000 if args.suite == "poisson" else 300),
        "seed": args.seed if args.seed is not None else 1,
        "threads": args.threads if args.threads is not None else 1,
    }
    records = SUITES[args.suite](params)
    ok = all(r["pass"] for r in records)
    body = {"schema": 1, "suite": args.suite, "params": params,
            "records": records, "pass": ok}
    _emit(_payload(body), args.out, f"verify_{args.suite}.json")
    return EXIT_OK if ok else EXIT_STAT_FAIL


# -- entry point ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="germgrain",
        description="Boolean-model simulation and valuation-density estimation")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--reps", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--lmax", type=int)
        p.add_argument("--smax", type=int)
        p.add_argument("--kmax", type=int)
        p.add_argument("--channels", type=str,
                       help="comma list: v0,v1,v2,harm,tensor,support")
        p.add_argument("--out", type=str, help="output directory")

    p_sim = sub.add_parser("simulate", help="sample and dump realizations")
    common(p_sim)
    p_sim.set_defaults(fn=cmd_simulate)

    p_est = sub.add_parser("estimate", help="estimate densities and invert")
    common(p_est)
    p_est.set_defaults(fn=cmd_estimate)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("suite", help="|".join(sorted(SUITES)))
    common(p_ver, config_required=False)
    p_ver.set_defaults(fn=cmd_verify)

    p_con = sub.add_parser("constants", help="dump the constants table")
    p_con.add_argument("--out", type=str)
    p_con.set_defaults(fn=cmd_constants)

    p_mix = sub.add_parser("mix", help="dump multi-index sets")
    p_mix.add_argument("--j", type=int, required=True)
    p_mix.add_argument("--k", type=int)
    p_mix.add_argument("-n", type=int, default=2)
    p_mix.add_argument("--out", type=str)
    p_mix.set_defaults(fn=cmd_mix)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SaturatedCoverageError as exc:
        print(f"statistical failure: {exc}", file=sys.stderr)
        return EXIT_STAT_FAIL


if __name__ == "__main__":
    sys.exit(main())
