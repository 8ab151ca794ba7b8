"""Command-line front end: radius tables, family sweeps, searches and verification runs.

Exit codes: 0 success, 1 verification violation, 2 solver or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import extremal, harness, radii
from .bohrsum import BohrKind, bohr_sum, bohr_tail
from .harmonic import dilatation_bound
from .powser import DEFAULT_ORDER

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2

SIG = 9

SWEEP_HEADER = ["family", "a", "K", "r", "bohr_sum", "closed_form", "tail"]
RADII_HEADER = ["spec", "K", "value", "kind", "bracket_lo", "bracket_hi", "residual", "iterations"]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    K: List[float] = field(default_factory=lambda: [1.0, 2.0, math.inf])
    p: int = 2
    order: int = DEFAULT_ORDER
    tol: float = radii.DEFAULT_TOL
    seed: int = 7
    count: int = 1000
    format: str = "csv"
    out: Optional[str] = None
    spec: Optional[List[str]] = None
    family: Optional[str] = None
    a: Optional[List[float]] = None
    r: Optional[List[float]] = None
    eps: float = 1e-2

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        if self.order < 16:
            raise ConfigError("truncation order must be at least 16")
        if any(not k >= 1 for k in self.K):
            raise ConfigError("every K must be >= 1")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{SIG}g}"


def jnum(x):
    """JSON value with 9 significant digits; infinities become the string 'inf'."""
    if x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf"
    return float(f"{x:.{SIG}g}")


def parse_K_list(text: str) -> List[float]:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        out.append(math.inf if tok in ("inf", "infinity") else float(tok))
    return out


def parse_grid(text: str) -> List[float]:
    """'0.3', '0.1,0.2', or 'lo:hi:n' (inclusive linspace)."""
    if ":" in text:
        lo, hi, n = text.split(":")
        return [float(x) for x in np.linspace(float(lo), float(hi), int(n))]
    return [float(x) for x in text.split(",") if x.strip()]


def _K_label(K: Optional[float]):
    if K is None:
        return None
    return "inf" if math.isinf(K) else K


# ---------------------------------------------------------------------------
# commands


def radius_rows(config: RunConfig) -> List[dict]:
    ids = config.spec or list(radii.ALL_IDS)
    rows = []
    for sid in ids:
        if sid not in radii.KINDS:
            raise ConfigError(f"unknown radius id {sid!r}")
        if sid in radii.K_IDS:
            Ks = config.K
        elif sid in ("Cor3Lower", "Cor3Upper"):
            Ks = [math.inf]
        else:
            Ks = [None]
        for K in Ks:
            spec = radii.RadiusSpec(sid, K=K, p=config.p if sid == "Thm5" else None)
            try:
                res = radii.radius_of(spec, config.tol)
            except ValueError as exc:
                raise RuntimeError(f"{spec.label()}: {exc}") from exc
            rows.append(
                {
                    "spec": sid,
                    "K": _K_label(K),
                    "value": res.value,
                    "kind": spec.kind,
                    "bracket": [res.bracket[0], res.bracket[1]],
                    "residual": res.residual,
                    "iterations": res.iterations,
                }
            )
    return rows


def cmd_radii(config: RunConfig) -> str:
    rows = radius_rows(config)
    if config.format == "json":
        return json.dumps([{k: _jsonify(v) for k, v in row.items()} for row in rows], indent=2)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RADII_HEADER)
    for row in rows:
        w.writerow(
            [
                row["spec"],
                fmt(row["K"]),
                fmt(row["value"]),
                row["kind"],
                fmt(row["bracket"][0]),
                fmt(row["bracket"][1]),
                fmt(row["residual"]),
                fmt(row["iterations"]),
            ]
        )
    return buf.getvalue()


def _jsonify(v):
    if isinstance(v, list):
        return [jnum(x) for x in v]
    return jnum(v)


def _anchor_radius(family: str, K: float) -> List[float]:
    """Radii worth including in a default sweep grid for a family."""
    if family in ("T1", "T3"):
        return [radii.closed_form_radius(radii.RadiusSpec("Thm1", K=K))]
    if family == "T4":
        return [math.sqrt(7 / 32)]
    if family == "T5":
        return [0.5]
    if family == "T6":
        return [radii.radius_of(radii.RadiusSpec("Thm6Upper", K=K)).value]
    if family == "T8":
        return [extremal.bloch_sharpness_search().r_star]
    if family == "C1":
        return [radii.closed_form_radius(radii.RadiusSpec("Conj1", K=K))]
    return []


def sweep_rows(config: RunConfig) -> List[dict]:
    fam = config.family
    if fam not in extremal.FAMILIES:
        raise ConfigError(f"--family must be one of {', '.join(extremal.FAMILIES)}")
    a_list = config.a if config.a is not None else [float(x) for x in np.linspace(0, 0.99, 12)]
    K = config.K[0] if config.K else 1.0
    k = dilatation_bound(K)
    if config.r is not None:
        r_list = list(config.r)
    else:
        r_list = sorted(set(np.round(np.linspace(0, 0.99, 100), 12).tolist() + _anchor_radius(fam, K)))
    kind = BohrKind("Full")
    rows = []
    for a in a_list:
        spec = extremal.FamilySpec(fam, a, k)
        f = extremal.build(spec, config.order)
        for r in r_list:
            try:
                cf = extremal.family_bohr_closed_form(spec, r)
            except ValueError:
                cf = None
            rows.append(
                {
                    "family": fam,
                    "a": a,
                    "K": _K_label(K),
                    "r": r,
                    "bohr_sum": bohr_sum(f, r, kind),
                    "closed_form": cf,
                    "tail": bohr_tail(f, r, kind),
                }
            )
    return rows


def cmd_sweep(config: RunConfig) -> str:
    rows = sweep_rows(config)
    if config.format == "json":
        return json.dumps([{k: _jsonify(v) for k, v in row.items()} for row in rows], indent=2)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for row in rows:
        w.writerow([fmt(row[h]) for h in SWEEP_HEADER])
    return buf.getvalue()


def cmd_bloch_search(config: RunConfig) -> str:
    res = extremal.bloch_sharpness_search(tol=min(config.tol * 1e6, 1e-6))
    rec = {
        "a_star": res.a_star,
        "r_star": res.r_star,
        "cubic_residual": res.cubic_residual,
        "stationarity_relative_residual": res.stationarity_residual,
        "iterations": res.iterations,
        "unimodal_prescan": res.unimodal,
        "missing_roots": len(res.missing_roots),
    }
    if config.format == "json":
        return json.dumps({k: (v if isinstance(v, bool) else jnum(v)) for k, v in rec.items()}, indent=2)
    return "\n".join(f"{k} = {fmt(v) if not isinstance(v, bool) else v}" for k, v in rec.items()) + "\n"


SHARPNESS_DEFAULT = [("Thm1", 1.0), ("Thm1", 2.0), ("Thm1", math.inf), ("Thm2", 2.0), ("Thm3", 2.0),
                     ("Thm4", None), ("Thm5", None), ("Thm7", 2.0), ("Thm8", None)]


def sharpness_reports(config: RunConfig, count: int) -> List[harness.SharpnessReport]:
    if config.spec:
        todo = []
        for sid in config.spec:
            if sid in ("Thm1", "Thm2", "Thm3", "Thm7"):
                todo.extend((sid, K) for K in config.K)
            else:
                todo.append((sid, None))
    else:
        todo = SHARPNESS_DEFAULT
    return [
        harness.sharpness_bracket(sid, config.eps, K=K, p=config.p, count=count, seed=config.seed, N=config.order)
        for sid, K in todo
    ]


def verify_lines(config: RunConfig):
    """(lines, ok) for the property suites, Parseval check and sharpness brackets."""
    lines, ok = [], True
    for res in harness.run_property_suite(config.seed, config.count, config.order):
        lines.append(res.line())
        ok &= res.ok
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    for _ in range(100):
        from .powser import TruncatedSeries

        n = int(rng.integers(1, 64))
        s = TruncatedSeries(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
        quad, exact = harness.parseval_pair(s, float(rng.uniform(0.05, 0.99)))
        worst = max(worst, abs(quad - exact) / exact)
    par_ok = worst <= 1e-8
    lines.append(f"parseval: {'pass' if par_ok else 'FAIL'} (max relative error {worst:.3g})")
    ok &= par_ok
    for rep in sharpness_reports(config, count=min(config.count, 200)):
        lines.append(("pass " if rep.ok else "FAIL ") + "sharpness " + rep.line())
        ok &= rep.ok
    return lines, ok


def cmd_verify(config: RunConfig):
    lines, ok = verify_lines(config)
    if config.format == "json":
        return json.dumps({"ok": ok, "lines": lines}, indent=2), ok
    return "\n".join(lines) + "\n", ok


def cmd_conjecture(config: RunConfig) -> str:
    ids = config.spec or ["Conj1", "Conj2"]
    reports = []
    for cid in ids:
        if cid == "Conj1":
            for K in config.K:
                reports.append(extremal.conjecture_sweep("Conj1", K, N=config.order))
        elif cid == "Conj2":
            reports.append(extremal.conjecture_sweep("Conj2", config.p, count=min(config.count, 500), seed=config.seed))
        else:
            raise ConfigError(f"unknown conjecture {cid!r}")
    if config.format == "json":
        return json.dumps(
            [
                {
                    "label": r.label,
                    "conjecture": r.conjecture,
                    "parameter": r.parameter,
                    "radius": jnum(r.radius),
                    "max_sum": jnum(r.max_sum),
                    "cases": r.instance_count,
                    "violations": r.violations,
                    "note": r.note,
                }
                for r in reports
            ],
            indent=2,
        )
    return "\n".join(r.summary() for r in reports) + "\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--K", default="1,2,inf", help="comma list of K values; 'inf' is the K -> infinity limit")
    common.add_argument("--p", type=int, default=2, help="symmetry order for p-symmetric checks")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order N")
    common.add_argument("--tol", type=float, default=radii.DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--count", type=int, default=1000, help="instances per property suite")
    common.add_argument("--format", choices=["json", "csv"], default="csv")
    common.add_argument("--out", default=None, help="output path (stdout if omitted)")
    common.add_argument("--spec", default=None, help="comma list of radius ids")
    common.add_argument("--eps", type=float, default=1e-2, help="witness offset above the radius")

    parser = argparse.ArgumentParser(prog="bohrlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("radii", parents=[common], help="radius table")
    sw = sub.add_parser("sweep", parents=[common], help="(a, r, Bohr sum) table for an extremal family")
    sw.add_argument("--family", required=True)
    sw.add_argument("--a", default=None, help="value, comma list, or lo:hi:n")
    sw.add_argument("--r", default=None, help="value, comma list, or lo:hi:n")
    sub.add_parser("bloch-search", parents=[common], help="Bloch-family sharpness search")
    sub.add_parser("verify", parents=[common], help="property suites and sharpness brackets")
    sub.add_parser("sharpness", parents=[common], help="sharpness brackets only")
    sub.add_parser("conjecture", parents=[common], help="conjecture evidence sweeps")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        K=parse_K_list(args.K),
        p=args.p,
        order=args.order,
        tol=args.tol,
        seed=args.seed,
        count=args.count,
        format=args.format,
        out=args.out,
        spec=[s.strip() for s in args.spec.split(",")] if args.spec else None,
        family=getattr(args, "family", None),
        a=parse_grid(args.a) if getattr(args, "a", None) else None,
        r=parse_grid(args.r) if getattr(args, "r", None) else None,
        eps=args.eps,
    )


def run(config: RunConfig):
    """Return (text, exit_code)."""
    c = config.command
    if c == "radii":
        return cmd_radii(config), EXIT_OK
    if c == "sweep":
        return cmd_sweep(config), EXIT_OK
    if c == "bloch-search":
        return cmd_bloch_search(config), EXIT_OK
    if c == "verify":
        text, ok = cmd_verify(config)
        return text, EXIT_OK if ok else EXIT_VIOLATION
    if c == "sharpness":
        reps = sharpness_reports(config, count=min(config.count, 200))
        text = "\n".join(("pass " if r.ok else "FAIL ") + r.line() for r in reps) + "\n"
        return text, EXIT_OK if all(r.ok for r in reps) else EXIT_VIOLATION
    if c == "conjecture":
        return cmd_conjecture(config), EXIT_OK
    raise ConfigError(f"unknown command {c!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        text, code = run(config)
    except (ConfigError, RuntimeError, ValueError) as exc:
        print(f"bohrlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if config.out:
        with open(config.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
