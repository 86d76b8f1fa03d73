"""Command-line front end: ``rchwave <subcommand> --c 8/5 --sigma 2 ...``.

Data files are deterministic (17 significant digits, sorted keys, no
timestamps); the accompanying manifest.json echoes the configuration and
tolerances and records the check outcomes.

Exit status: 0 all requested checks pass, 1 a check ran and failed,
2 invalid regime or input, 3 numerical anomaly, 4 exact and numeric layers
disagree.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import enum
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import __version__
from .model import AnomalyWarning, ModelError, ModelParams, amplitude, params_from_c, params_from_omega, regime_classify
from .ratpoly import rat_to_str

EXIT_OK, EXIT_CHECK, EXIT_REGIME, EXIT_ANOMALY, EXIT_INCONSISTENT = 0, 1, 2, 3, 4


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# parsing


def parse_rational(text: str) -> Fraction:
    """'p/q' or a decimal literal, converted exactly (1.6 -> 8/5)."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def parse_grid(text: str) -> list:
    """'lo:hi:n' -> n equally spaced exact rationals from lo to hi inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like lo:hi:n")
    lo, hi = parse_rational(parts[0]), parse_rational(parts[1])
    try:
        n = int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad point count {parts[2]!r}") from exc
    if n < 1:
        raise argparse.ArgumentTypeError("grid needs at least one point")
    if n == 1:
        return [lo]
    if not hi > lo:
        raise argparse.ArgumentTypeError("grid must be strictly increasing (hi > lo)")
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


# ---------------------------------------------------------------------------
# serialisation


def _plain(obj):
    """Recursively convert to JSON-ready values (floats kept as floats)."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return rat_to_str(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "as_dict"):
        return _plain(obj.as_dict())
    return str(obj)


def fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {enc(o[k], level + 1)}" for k in sorted(o)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list)) for v in o):
                return "[" + ", ".join(enc(v, level) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, float):
            return fmt_float(o)
        return json.dumps(o, ensure_ascii=False)

    return enc(_plain(obj), 0) + "\n"


def to_csv(header: list, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else _plain(v) for v in row])
    return buf.getvalue()


def to_table(obj) -> str:
    """Flat key/value listing for humans."""
    lines = []

    def walk(prefix, o):
        if isinstance(o, dict):
            for k in sorted(o):
                walk(f"{prefix}.{k}" if prefix else str(k), o[k])
        elif isinstance(o, list) and o and isinstance(o[0], (dict, list)):
            for i, v in enumerate(o):
                walk(f"{prefix}[{i}]", v)
        else:
            val = fmt_float(o) if isinstance(o, float) else (json.dumps(o) if not isinstance(o, str) else o)
            lines.append(f"{prefix:<48} {val}")

    walk("", _plain(obj))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# results


@dataclass
class Result:
    data: dict
    checks: dict
    code: int = EXIT_OK
    csv: Optional[tuple] = None  # (filename stem, header, rows)
    notes: tuple = ()


def _status(checks: dict) -> int:
    return EXIT_OK if all(checks.values()) else EXIT_CHECK


def _params(args) -> ModelParams:
    if args.omega is not None:
        return params_from_omega(args.omega)
    c = args.c if args.c is not None else getattr(args, "default_c", None)
    if c is None:
        raise CLIError("one of --c or --omega is required", EXIT_REGIME)
    return params_from_c(c)


def _sigmas(args, default=None) -> list:
    if getattr(args, "sigma_grid", None):
        return args.sigma_grid
    if getattr(args, "sigma", None) is not None:
        return [args.sigma]
    if default is not None:
        return [default]
    raise CLIError("--sigma or --sigma-grid is required", EXIT_REGIME)


def _controls(args):
    from .phaseplane import Controls

    return Controls(rtol=args.rtol, atol=args.atol)


def _fan_out(fn: Callable, items: list, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------------------
# subcommands


def cmd_constants(args) -> Result:
    p = _params(args)
    data = {"exact": p.as_dict(), "float": {k: float(getattr(p, k)) for k in
                                            ("c", "alpha", "beta0", "beta", "K", "w1", "w2", "A", "B")}}
    data["float"]["omega"] = p.omega_float
    if args.sigma is not None:
        r = regime_classify(p, args.sigma)
        data["regime"] = {"sigma": args.sigma, "tag": r.tag.value, "sigma_minus_K_positive": r.sigma_minus_K_positive}
    return Result(data, {})


def _cp_dict(cp) -> dict:
    return {
        "phi": cp.phi,
        "zeta": cp.zeta,
        "exact_phi": cp.exact_phi,
        "J_sigma": cp.J_sigma,
        "eigenvalues": [[complex(e).real, complex(e).imag] for e in cp.eigenvalues],
        "kind": cp.kind.value,
    }


def cmd_critical_points(args) -> Result:
    from .phaseplane import critical_points

    p = _params(args)
    out = []
    for s in _sigmas(args):
        out.append({"sigma": s, "regime": regime_classify(p, s).tag.value,
                    "points": [_cp_dict(cp) for cp in critical_points(p, s)]})
    return Result({"c": p.c, "critical_points": out}, {})


def _default_seeds(params, sigma) -> list:
    from .phaseplane import center_point

    H = amplitude(params, sigma).H
    cp = center_point(params, sigma)
    seeds = [(cp.phi + f * (H - cp.phi), 0.0) for f in (0.25, 0.5, 0.75)]
    seeds += [(1.15 * H, 0.0), (-0.1 * H, 0.0), (0.5 * H, 0.6 * H)]
    return seeds


def cmd_portrait(args) -> Result:
    from .phaseplane import portrait_sample

    p = _params(args)
    s = _sigmas(args)[0]
    seeds = _default_seeds(p, s)
    orbits = portrait_sample(p, s, seeds, xi_span=args.xi_span)
    rows, summary = [], []
    for i, o in enumerate(orbits):
        summary.append({"id": i, "seed": o.info.get("seed"), "status": o.status, "energy_defect": o.energy_defect,
                        "n": int(len(o.xi))})
        rows += [(i, float(x), float(a), float(b)) for x, a, b in zip(o.xi, o.phi, o.zeta)]
    return Result({"c": p.c, "sigma": s, "orbits": summary}, {},
                  csv=("portrait", ["orbit", "xi", "phi", "zeta"], rows))


def _homoclinic(params, sigma, args):
    from .phaseplane import homoclinic_orbit

    return homoclinic_orbit(params, sigma, controls=_controls(args))


def cmd_orbit(args) -> Result:
    p = _params(args)
    s = _sigmas(args)[0]
    o = _homoclinic(p, s, args)
    checks = {
        "energy_defect_le_1e-8": o.energy_defect <= 1e-8,
        "turning_point_rel_le_1e-8": o.info["turning_rel_error"] <= 1e-8,
        "closure_defect_le_1e-6": o.closure_defect <= 1e-6,
    }
    data = {"c": p.c, "sigma": s, "status": o.status, "closure_defect": o.closure_defect,
            "energy_defect": o.energy_defect, "turning_point": o.turning_point, "info": o.info}
    rows = [(float(x), float(a), float(b)) for x, a, b in zip(o.xi, o.phi, o.zeta)]
    return Result(data, checks, _status(checks), csv=("homoclinic", ["xi", "phi", "zeta"], rows))


def cmd_profile(args) -> Result:
    from .profile import (GridSpec, decay_rate, ode_residual, profile_from_ode,
                          profile_from_quadrature)

    p = _params(args)
    s = _sigmas(args)[0]
    spec = GridSpec(dx=args.dx)
    prof = profile_from_quadrature(p, s, spec)
    ode = profile_from_ode(p, s, spec, rtol=args.rtol)
    n = min(len(prof.phi), len(ode.phi))
    diff = float(np.max(np.abs(prof.phi[:n] - ode.phi[:n]))) if n else 0.0
    rate = decay_rate(prof)
    expected = math.sqrt(float((s - p.c) / (s - p.K)))
    checks = {
        "quadrature_vs_ode_le_1e-6_H": diff <= 1e-6 * prof.H,
        "decay_rate_within_1pct": abs(rate - expected) <= 0.01 * expected,
    }
    data = {"c": p.c, "sigma": s, "H": prof.H, "L": float(prof.xi[-1]), "dx": args.dx, "points": int(len(prof.xi)),
            "max_abs_diff_ode": diff, "decay_rate": rate, "decay_rate_expected": expected,
            "ode_residual": ode_residual(prof)}
    rows = [(float(x), float(a), float(b), float(c)) for x, a, b, c in
            zip(prof.xi[:n], prof.phi[:n], prof.phi_x[:n], ode.phi[:n])]
    return Result(data, checks, _status(checks), csv=("profile", ["xi", "phi", "phi_x", "phi_ode"], rows))


def _conserved_one(task):
    c, s = task
    from .profile import conserved_quantities, profile_from_quadrature

    cq = conserved_quantities(profile_from_quadrature(params_from_c(c), s))
    return {"sigma": s, "I": cq.I, "E": cq.E, "F": cq.F, "tail_bound": cq.tail_bound,
            "d": float(s) * cq.E - cq.F}


def cmd_conserved(args) -> Result:
    p = _params(args)
    rows = _fan_out(_conserved_one, [(p.c, s) for s in _sigmas(args)], args.jobs)
    csv_rows = [(r["sigma"], r["I"], r["E"], r["F"], r["d"]) for r in rows]
    return Result({"c": p.c, "conserved": rows}, {}, csv=("conserved", ["sigma", "I", "E", "F", "d"], csv_rows))


def _stability_one(task):
    c, s = task
    from .stability import stability_report

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AnomalyWarning)
        return stability_report(params_from_c(c), s).as_dict()


def _stability_checks(reports) -> dict:
    return {
        "d_prime_methods_agree": all(r["agreement_flags"]["d_prime_agree"] for r in reports),
        "d_second_methods_agree": all(r["agreement_flags"]["d_second_agree"] for r in reports),
        "d_second_positive": all(r["sign_verdict"] for r in reports),
    }


def cmd_stability(args) -> Result:
    p = _params(args)
    reports = _fan_out(_stability_one, [(p.c, s) for s in _sigmas(args)], args.jobs)
    checks = _stability_checks(reports)
    code = EXIT_OK
    if not (checks["d_prime_methods_agree"] and checks["d_second_methods_agree"]):
        code = EXIT_ANOMALY
    elif not checks["d_second_positive"]:
        code = EXIT_CHECK
    rows = [(r["sigma"], r["H"], r["d_value"], r["d_prime_xspace"], r["d_prime_yspace"], r["d_second_fd"],
             r["d_second_integral"]) for r in reports]
    return Result({"c": p.c, "reports": reports}, checks, code,
                  csv=("stability", ["sigma", "H", "d", "d_prime_x", "d_prime_y", "d_second_fd",
                                     "d_second_integral"], rows))


def cmd_certify(args) -> Result:
    from .certify import CERTIFIED, certify_c
    from .npoly import compare_N, compare_with_appendix

    p = _params(args)
    res = certify_c(p.c, H_max=args.H_max)
    audit = {"N": compare_N().as_dict(), "appendix": compare_with_appendix()}
    checks = {"certified": res["result"]["overall"]["verdict"] == CERTIFIED,
              "exact_numeric_consistent": res["consistent"]}
    code = EXIT_INCONSISTENT if not res["consistent"] else _status(checks)
    return Result({"certification": res, "audit": audit}, checks, code)


def _spectrum_checks(sp, tol: float) -> dict:
    return {
        "one_negative_eigenvalue": sp.negative_count == 1,
        "kernel_eigenvalue_le_1e-4_Qsup": sp.nearest_zero_ratio <= 1e-4,
        "kernel_cosine_ge_0.999": sp.cosine_with_phi_x >= 0.999,
        "boundary_Q_matches_sigma_minus_c": abs(sp.Q_boundary - sp.sigma_minus_c) <= tol,
    }


def cmd_spectrum(args) -> Result:
    from .stability import spectrum_check

    p = _params(args)
    s = _sigmas(args)[0]
    sp = spectrum_check(p, s, n=args.n, n_eigs=args.n_eigs)
    checks = _spectrum_checks(sp, 1e-3)
    rows = [(i, v) for i, v in enumerate(sp.lowest)]
    return Result({"c": p.c, "sigma": s, "spectrum": sp.as_dict()}, checks, _status(checks),
                  csv=("spectrum", ["index", "eigenvalue"], rows))


def cmd_reproduce_figure1(args) -> Result:
    from .phaseplane import CriticalKind, critical_points, portrait_sample

    p = _params(args)
    s = _sigmas(args, default=Fraction(2))[0]
    cps = critical_points(p, s)
    o = _homoclinic(p, s, args)
    orbits = portrait_sample(p, s, _default_seeds(p, s), xi_span=args.xi_span)
    rows = [("homoclinic", float(x), float(a), float(b)) for x, a, b in zip(o.xi, o.phi, o.zeta)]
    for i, orb in enumerate(orbits):
        rows += [(f"orbit{i}", float(x), float(a), float(b)) for x, a, b in zip(orb.xi, orb.phi, orb.zeta)]
    kinds = [cp.kind for cp in cps]
    checks = {
        "saddle_found": CriticalKind.SADDLE in kinds,
        "center_found": CriticalKind.CENTER in kinds,
        "homoclinic_found": o.closure_defect <= 1e-6 and o.info["turning_rel_error"] <= 1e-8,
    }
    data = {"c": p.c, "sigma": s, "critical_points": [_cp_dict(cp) for cp in cps],
            "homoclinic": {"closure_defect": o.closure_defect, "energy_defect": o.energy_defect,
                           "turning_point": o.turning_point, "H": o.info["H"]},
            "orbits": [{"id": i, "seed": orb.info.get("seed"), "status": orb.status} for i, orb in enumerate(orbits)]}
    notes = tuple(k.replace("_found", "") + " found" for k, v in checks.items() if v)
    return Result(data, checks, _status(checks), csv=("figure1", ["curve", "xi", "phi", "zeta"], rows), notes=notes)


DEFAULT_SIGMA_GRIDS = {
    Fraction(1, 2): (Fraction(-3), Fraction(1, 5)),
    Fraction(8, 5): (Fraction(17, 10), Fraction(4)),
}


def cmd_sign_sweep(args) -> Result:
    from .certify import DEFAULT_SWEEP, certification_sweep

    if args.c is not None or args.omega is not None:
        p = _params(args)
        grids = {p.c: (args.sigma_grid or None)}
    else:
        grids = {c: None for c in DEFAULT_SIGMA_GRIDS}
    sweeps = []
    for c, grid in grids.items():
        if grid is None:
            lo, hi = DEFAULT_SIGMA_GRIDS.get(c, (None, None))
            if lo is None:
                raise CLIError(f"no default sigma grid for c = {c}; pass --sigma-grid", EXIT_REGIME)
            grid = [lo + (hi - lo) * k / (args.points - 1) for k in range(args.points)]
        reports = _fan_out(_stability_one, [(c, s) for s in grid], args.jobs)
        sweeps.append({"c": c, "regime": reports[0]["regime"], "reports": reports,
                       "checks": _stability_checks(reports)})
    certs = []
    if not args.skip_certify:
        cs = args.cert_c or list(DEFAULT_SWEEP)
        certs = certification_sweep(cs, H_max=args.H_max, jobs=args.jobs)
    checks = {}
    for sw in sweeps:
        for k, v in sw["checks"].items():
            checks[f"c={rat_to_str(sw['c'])}:{k}"] = v
    for cr in certs:
        checks[f"certify c={cr['c']}:consistent"] = cr["consistent"]
        checks[f"certify c={cr['c']}:certified"] = cr["result"]["overall"]["verdict"] == "Certified"
    code = _status(checks)
    if any(not cr["consistent"] for cr in certs):
        code = EXIT_INCONSISTENT
    elif any(not (sw["checks"]["d_prime_methods_agree"] and sw["checks"]["d_second_methods_agree"]) for sw in sweeps):
        code = EXIT_ANOMALY
    rows = [(sw["c"], r["sigma"], r["H"], r["d_second_fd"], r["d_second_integral"], r["sign_verdict"])
            for sw in sweeps for r in sw["reports"]]
    return Result({"sigma_sweeps": sweeps, "certification": certs}, checks, code,
                  csv=("d_second_sweep", ["c", "sigma", "H", "d_second_fd", "d_second_integral", "positive"], rows))


# ---------------------------------------------------------------------------
# argument parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_mutually_exclusive_group()
    g.add_argument("--c", type=parse_rational, help="model parameter c as p/q or decimal (exact)")
    g.add_argument("--omega", type=parse_rational, help="rotation parameter Omega (c is recovered)")
    common.add_argument("--sigma", type=parse_rational, help="wave speed")
    common.add_argument("--sigma-grid", type=parse_grid, help="lo:hi:n")
    common.add_argument("--rtol", type=positive_float, default=1e-12)
    common.add_argument("--atol", type=positive_float, default=1e-15)
    common.add_argument("--out", help="output directory (data files + manifest.json)")
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="rchwave", description="Solitary waves of the rotation-Camassa-Holm "
                                     "equation: phase plane, profiles and stability checks.")
    parser.add_argument("--version", action="version", version=f"rchwave {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=fn)
        return sp

    add("constants", cmd_constants, "exact model constants")
    add("critical-points", cmd_critical_points, "equilibria of the planar system")
    add("portrait", cmd_portrait, "sample orbits of the planar system").add_argument(
        "--xi-span", type=float, default=30.0)
    add("orbit", cmd_orbit, "homoclinic orbit from the saddle at the origin")
    add("profile", cmd_profile, "wave profile by quadrature and by ODE").add_argument(
        "--dx", type=positive_float, default=0.02)
    add("conserved", cmd_conserved, "conserved quantities I, E, F")
    add("stability", cmd_stability, "d, d' and d'' by two methods each")
    add("certify", cmd_certify, "exact positivity certificate for N").add_argument(
        "--H-max", type=parse_rational, default=Fraction(4))
    sp = add("spectrum", cmd_spectrum, "spectrum of the linearised operator")
    sp.add_argument("--n", type=int, default=2000)
    sp.add_argument("--n-eigs", type=int, default=6)
    add("reproduce-figure1", cmd_reproduce_figure1, "phase portrait and homoclinic loop").add_argument(
        "--xi-span", type=float, default=30.0)
    sp = add("reproduce-theorem34", cmd_sign_sweep, "d'' sign sweeps and certification sweep")
    sp.add_argument("--points", type=int, default=10)
    sp.add_argument("--skip-certify", action="store_true")
    sp.add_argument("--cert-c", type=parse_rational, action="append")
    sp.add_argument("--H-max", type=parse_rational, default=Fraction(4))
    return parser


def _config_echo(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _write_outputs(args, res: Result, stdout) -> None:
    tolerances = {"rtol": args.rtol, "atol": args.atol, "d_prime_rtol": 1e-6, "d_second_rtol": 1e-4}
    manifest = {
        "tool": "rchwave",
        "version": __version__,
        "subcommand": args.subcommand,
        "config": _config_echo(args),
        "tolerances": tolerances,
        "checks": res.checks,
        "exit_status": res.code,
        "notes": list(res.notes),
    }
    if args.out:
        files = {f"{args.subcommand}.json": dumps(res.data)}
        if res.csv is not None:
            stem, header, rows = res.csv
            files[f"{stem}.csv"] = to_csv(header, rows)
        manifest["artifacts"] = sorted(files)
        manifest["created"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        os.makedirs(args.out, exist_ok=True)
        for name, text in files.items():
            with open(os.path.join(args.out, name), "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(manifest))
        return
    if args.format == "csv" and res.csv is not None:
        stdout.write(to_csv(res.csv[1], res.csv[2]))
    elif args.format == "table":
        stdout.write(to_table({"data": res.data, "checks": res.checks}))
    else:
        stdout.write(dumps({"data": res.data, "checks": res.checks}))


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        res = args.func(args)
    except CLIError as exc:
        stderr.write(f"rchwave: {exc}\n")
        return exc.code
    except ModelError as exc:
        stderr.write(f"rchwave: invalid regime or input: {exc}\n")
        return EXIT_REGIME
    except (ArithmeticError, RuntimeError, FloatingPointError) as exc:
        stderr.write(f"rchwave: numerical anomaly: {exc}\n")
        return EXIT_ANOMALY
    _write_outputs(args, res, stdout)
    for k, v in res.checks.items():
        if not v:
            stderr.write(f"rchwave: check failed: {k}\n")
    return res.code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
