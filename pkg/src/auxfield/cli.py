"""
Command-line front end.

    auxfield solve  --potential anharmonic --beta 1 --n 0 --l 0 --method all
    auxfield sweep  --potential anharmonic --beta 0.1,1,10 --n 0..3 --format csv
    auxfield verify equivalence
    auxfield fixtures --out fixtures.json

Exit codes: 0 success, 1 failed claim, 2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from . import _kernel, oracle, scenarios
from .afm import AfmProblem, afm_minimize
from .core import QuantumState, anharmonic, power_law, scaled_base
from .envelope import et_minimize_s, et_minimize_v
from .errors import AuxFieldError

METHODS = ("afm", "et-s", "et-v", "exact")
SOLVE_COLUMNS = ("n", "l", "N", "method", "energy", "nu0", "r0", "bound",
                 "stationarity_residual", "tol", "oracle_error", "provenance")
SWEEP_PARAMS = ("potential", "beta", "a", "p", "base", "mass")
SWEEP_COLUMNS = SWEEP_PARAMS + SOLVE_COLUMNS + ("E_exact", "gap")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class SolverFailure(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    potential: str
    beta: float
    a: float
    p: float
    base: str
    mass: float
    n: int
    l: int
    N: Optional[float]
    methods: tuple
    tolerance: float

    def target(self):
        if self.potential == "anharmonic":
            return anharmonic(self.beta)
        base = scenarios.make_base(self.base, self.mass)
        if self.potential == "power":
            return power_law(self.a, self.p, base)
        return scaled_base(self.a, base)

    @property
    def state(self):
        return QuantumState(self.n, self.l) if self.N is None else self.N


def provenance() -> str:
    return (f"scan={_kernel.SCAN_POINTS}pts/1e{_kernel.SCAN_DECADES:g};"
            f"oracle={oracle.DEFAULT_POINTS}x{'-'.join(map(str, oracle.DEFAULT_LADDER))}"
            f"/safety={oracle.DEFAULT_SAFETY:g}")


def fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "nan" if math.isnan(value) else format(value, ".16e")
    return str(value)


def solve_records(config: RunConfig) -> List[dict]:
    """One record per requested method, in the order of :data:`METHODS`."""
    try:
        target = config.target()
        state = config.state
    except (AuxFieldError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    n = "" if config.N is not None else config.n
    l = "" if config.N is not None else config.l
    label = f"n={config.n} l={config.l}" if config.N is None else f"N={config.N:g}"
    records = []
    for method in METHODS:
        if method not in config.methods:
            continue
        try:
            if method == "exact":
                if config.N is not None:
                    raise ConfigError("method 'exact' needs integer --n/--l, not --N")
                sol = scenarios.exact_solution(target, state, tolerance=oracle.DEFAULT_TOLERANCE)
                N = target.base.principal_number(config.n, config.l)
                rec = dict(energy=sol.energy, nu0=math.nan, r0=math.nan, bound="exact",
                           stationarity_residual=math.nan, oracle_error=sol.error_estimate, N=N)
            else:
                solver = {"afm": lambda: afm_minimize(AfmProblem(target, state, config.tolerance)),
                          "et-s": lambda: et_minimize_s(target, state, config.tolerance),
                          "et-v": lambda: et_minimize_v(target, state, config.tolerance)}[method]
                sol = solver()
                rec = dict(energy=sol.energy, nu0=sol.nu0, r0=sol.r0,
                           bound="exact" if sol.exact else sol.bound.value,
                           stationarity_residual=sol.stationarity_residual,
                           oracle_error=math.nan, N=sol.N)
        except AuxFieldError as exc:
            raise SolverFailure(f"{method} failed for {label}: {exc}") from exc
        rec.update(n=n, l=l, method=method, tol=config.tolerance, provenance=provenance())
        records.append(rec)
    return records


def write_records(records: List[dict], columns: Sequence[str], fmt_name: str, out) -> None:
    if fmt_name == "json":
        rows = [{c: (None if isinstance(r[c], float) and math.isnan(r[c]) else r[c])
                 for c in columns} for r in records]
        out.write(json.dumps(rows, indent=1) + "\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([fmt(r[c]) for c in columns])


def _values(text: str, kind=float) -> list:
    """Comma list of values; integers also accept ``a..b`` ranges."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part and kind is int:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(kind(part))
    if not out:
        raise ConfigError(f"empty value list {text!r}")
    return out


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--potential", choices=("anharmonic", "power", "base"), default="anharmonic")
    parser.add_argument("--beta", default="1")
    parser.add_argument("--a", default="1", help="power-law strength, or coupling for --potential base")
    parser.add_argument("--p", default="1", help="power-law exponent")
    parser.add_argument("--base", choices=("harmonic", "coulomb"), default="harmonic")
    parser.add_argument("--mass", default=None)
    parser.add_argument("--n", default="0")
    parser.add_argument("--l", default="0")
    parser.add_argument("--N", default=None, help="continuous principal number (overrides --n/--l)")
    parser.add_argument("--method", choices=METHODS + ("all",), default="all")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None)
    parser.add_argument("--tol", type=float, default=1e-12)


def _configs(args) -> List[RunConfig]:
    try:
        betas = _values(args.beta)
        avals = _values(args.a)
        pvals = _values(args.p)
        ns = _values(args.n, int)
        ls = _values(args.l, int)
        Ns = [None] if args.N is None else _values(args.N)
        masses = [None] if args.mass is None else _values(args.mass)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not args.tol > 0:
        raise ConfigError("--tol must be positive")
    methods = METHODS if args.method == "all" else (args.method,)
    if args.potential == "anharmonic":
        if args.base != "harmonic" or any(m not in (None, 2.0) for m in masses):
            raise ConfigError("the anharmonic case fixes base=harmonic and mass=2")
        masses, avals, pvals, base = [2.0], [math.nan], [math.nan], "harmonic"
        if any(b < 0 for b in betas):
            raise ConfigError("--beta must be non-negative")
    else:
        masses = [1.0 if m is None else m for m in masses]
        betas, base = [math.nan], args.base
        if args.potential == "base":
            pvals = [math.nan]
    if any(m <= 0 for m in masses):
        raise ConfigError("--mass must be positive")
    if any(v < 0 for v in ns + ls):
        raise ConfigError("--n and --l must be non-negative")
    if Ns != [None] and any(N <= 0 for N in Ns):
        raise ConfigError("--N must be positive")
    if Ns != [None]:
        ns, ls = [0], [0]
    configs = []
    for beta, a, p, mass, N, n, l in itertools.product(betas, avals, pvals, masses, Ns, ns, ls):
        configs.append(RunConfig(args.potential, beta, a, p, base, mass, n, l, N,
                                 methods, args.tol))
    return configs


def _emit(records, columns, args) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_records(records, columns, args.format, fh)
    else:
        buf = io.StringIO()
        write_records(records, columns, args.format, buf)
        sys.stdout.write(buf.getvalue())


def cmd_solve(args) -> int:
    configs = _configs(args)
    if len(configs) != 1:
        raise ConfigError("solve takes single values; use sweep for ranges")
    _emit(solve_records(configs[0]), SOLVE_COLUMNS, args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    configs = _configs(args)
    if len(configs) < 2:
        raise ConfigError("sweep needs at least one ranged parameter")
    records = []
    for config in configs:
        wanted = set(config.methods)
        if config.N is None:
            wanted.add("exact")
        full = RunConfig(**{**config.__dict__, "methods": tuple(m for m in METHODS if m in wanted)})
        rows = solve_records(full)
        exact = next((r["energy"] for r in rows if r["method"] == "exact"), math.nan)
        for r in rows:
            if r["method"] not in config.methods:
                continue
            r.update(potential=config.potential, beta=config.beta, a=config.a, p=config.p,
                     base=config.base, mass=config.mass, E_exact=exact, gap=r["energy"] - exact)
            records.append(r)
    _emit(records, SWEEP_COLUMNS, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    claims = scenarios.run_suite(args.suite) if args.suite != "fixtures" else []
    if args.suite in ("all", "fixtures"):
        claims += scenarios.suite_fixtures(args.fixtures)
    for claim in claims:
        print(claim.line())
    failed = sum(not c.passed for c in claims)
    print(f"{len(claims) - failed}/{len(claims)} claims passed")
    return EXIT_OK if failed == 0 else EXIT_FAILED


def cmd_fixtures(args) -> int:
    scenarios.write_fixtures(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="auxfield", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True)
    p_solve = sub.add_parser("solve", help="solve one state")
    _common(p_solve)
    p_solve.set_defaults(func=cmd_solve)
    p_sweep = sub.add_parser("sweep", help="cross-product sweep in long format")
    _common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)
    p_verify = sub.add_parser("verify", help="run a claim suite")
    p_verify.add_argument("suite", nargs="?", default="all",
                          choices=tuple(scenarios.SUITES) + ("fixtures", "all"))
    p_verify.add_argument("--fixtures", default=None, help="fixture file (default: packaged)")
    p_verify.set_defaults(func=cmd_verify)
    p_fix = sub.add_parser("fixtures", help="regenerate the fixture file")
    p_fix.add_argument("--out", required=True)
    p_fix.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
