"""Command-line front end.

Figure recipes (all at gamma = -1, eta = 0.6):

    socbound sweep dirac --omega-min 0 --omega-max 2 --steps 201 --out fig1.csv
    socbound dispersion --omega 0.2 --pmin -1 --pmax 1 --steps 401 --out fig2.csv
    socbound sweep so --omega-min 0 --omega-max 2 --steps 201 --out fig3.csv
    socbound sweep bound --omega-min 0 --omega-max 2 --steps 201 --out fig4.csv

Exit codes: 0 success, 1 validation error, 2 solver failure, 3 I/O error,
4 invariant-suite failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bound, checks, dirac, dispersion, oracle, soc
from .errors import (ConvergenceError, DomainError, InconsistencyError,
                     NoSuchStateError, PoleError, SocBoundError)
from .model import ModelParams, lambda_zero, validate

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_IO, EXIT_INVARIANT = 0, 1, 2, 3, 4

SWEEP_HEADERS = {
    "dirac": ["omega", "eps_plus", "eps_minus", "edge"],
    "so": ["omega", "lambda_plus", "lambda_minus", "ess_edge", "res1", "res2", "class_plus", "class_minus"],
    "bound": ["omega", "lambda_plus", "lambda_minus", "ess_edge"],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class SweepConfig:
    gamma: float
    eta: float
    omega_min: float
    omega_max: float
    steps: int
    kind: str
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.omega_min > self.omega_max:
            raise DomainError("omega_min must not exceed omega_max")
        if self.steps < 1:
            raise DomainError("steps must be at least 1")
        if self.kind not in SWEEP_HEADERS:
            raise DomainError(f"unknown sweep kind {self.kind!r}")
        if self.format not in ("csv", "json"):
            raise DomainError("format must be csv or json")

    @property
    def omegas(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.omega_min])
        return np.linspace(self.omega_min, self.omega_max, self.steps)


# ---------------------------------------------------------------- formatting

def fmt(value) -> str:
    """17 significant digits; None is the blank cell; lists are ';'-joined."""
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return ";".join(fmt(v) for v in value)
    if isinstance(value, str):
        return value
    return "%.17g" % float(value)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_value(value):
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value] or None
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def render_json(header, rows) -> str:
    records = [{k: _json_value(v) for k, v in zip(header, row)} for row in rows]
    return json.dumps({"columns": header, "rows": records}, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _emit_log(lines: list[str], out: str | None) -> None:
    text = "".join(line + "\n" for line in lines)
    if out in (None, "-"):
        sys.stderr.write(text)
    else:
        Path(out).with_suffix(".log").write_text(text, encoding="utf-8", newline="\n")


def _params(args) -> ModelParams:
    return validate(ModelParams(args.eta, args.omega, args.gamma))


def _single(values: list):
    return values if len(values) > 1 else (values[0] if values else None)


# ---------------------------------------------------------------- commands

def cmd_dispersion(eta, omega, pmin, pmax, steps, out) -> int:
    params = validate(ModelParams(eta, omega, -1.0))
    if steps < 1 or pmin > pmax:
        raise DomainError("need pmin <= pmax and steps >= 1")
    ps = np.linspace(pmin, pmax, steps) if steps > 1 else np.array([pmin])
    point = dispersion.branches(params, ps)
    rows = zip(ps, np.atleast_1d(point.lambda_minus), np.atleast_1d(point.lambda_plus))
    _emit(render_csv(["p", "lambda_minus", "lambda_plus"], rows), out)
    return EXIT_OK


def sweep_rows(cfg: SweepConfig):
    """Rows of the requested sweep plus per-row diagnostics."""
    rows, log = [], []
    for om in cfg.omegas:
        om = float(om)
        params = validate(ModelParams(cfg.eta, om, cfg.gamma))
        notes = []
        try:
            rows.append(_sweep_row(cfg.kind, params, notes))
        except SocBoundError as exc:
            notes.append(f"error: {type(exc).__name__}: {exc}")
            rows.append([om] + [None] * (len(SWEEP_HEADERS[cfg.kind]) - 1))
        log += [f"omega={fmt(om)}: {n}" for n in notes]
    return rows, log


def _sweep_row(kind: str, params: ModelParams, notes: list) -> list:
    om = params.omega
    if kind == "dirac":
        states = dirac.a0_discrete_spectrum(params, notes) if params.eta > 0 else []
        plus = [s.eps for s in states if s.branch == "+"]
        minus = [s.eps for s in states if s.branch == "-"]
        return [om, _single(plus), _single(minus), dispersion.dirac_essential_edge(params)]
    if kind == "so":
        resonances = []
        states = soc.so_states(params, resonances) if params.eta > 0 else []
        for eps, branch in resonances:
            notes.append(f"resonant parent eps={fmt(eps)} on branch {branch} excluded")
        plus = [s for s in states if s.branch == "+"]
        minus = [s for s in states if s.branch == "-"]
        res = (None, None)
        if params.eta > 0 and om > params.eta**2:
            res = (lambda_zero(params), -om / 2)
        return [om, _single([s.lambda_val for s in plus]), _single([s.lambda_val for s in minus]),
                dispersion.essential_edge(params), res[0], res[1],
                _single([soc.CLASS_CODES[s.classification] for s in plus]),
                _single([soc.CLASS_CODES[s.classification] for s in minus])]
    report = bound.discrete_spectrum(params)
    notes += report.diagnostics
    notes += [f"dropped {tag} root {fmt(lam)}: {why}" for lam, tag, why in report.dropped]
    upper = [s.lambda_val for s in report.of_family(bound.CONTINUOUS, "upper")]
    lower = [s.lambda_val for s in report.of_family(bound.CONTINUOUS, "lower")]
    return [om, _single(upper), _single(lower), report.essential_edge]


def cmd_sweep(cfg: SweepConfig) -> int:
    rows, log = sweep_rows(cfg)
    header = SWEEP_HEADERS[cfg.kind]
    text = render_csv(header, rows) if cfg.format == "csv" else render_json(header, rows)
    _emit(text, cfg.out)
    _emit_log(log, cfg.out)
    return EXIT_OK


def find_state(params: ModelParams, family: str, sign: str, index: int = 0):
    """Eigenfunction expansion of the requested state, or NoSuchStateError listing what exists."""
    report = bound.discrete_spectrum(params)
    tags = {"upper": ("upper", "+"), "+": ("upper", "+"), "lower": ("lower", "-"), "-": ("lower", "-")}
    if sign not in tags:
        raise DomainError(f"sign must be upper, lower, + or -; got {sign!r}")
    want_family = bound.CONTINUOUS if family == "continuous" else bound.SPIN_ORBIT
    want_sign = tags[sign][0] if want_family == bound.CONTINUOUS else tags[sign][1]
    matches = report.of_family(want_family, want_sign)
    if index >= len(matches):
        available = ", ".join(f"{s.family}/{s.sign} lambda={fmt(s.lambda_val)}" for s in report.states) or "none"
        raise NoSuchStateError(f"no {family} state with sign {sign} (index {index}); available: {available}")
    return matches[index]


def cmd_eigfun(params: ModelParams, family, sign, xmin, xmax, samples, out,
               index: int = 0, normalize: bool = False) -> int:
    state = find_state(params, family, sign, index)
    f = state.eigenfunction.normalized() if normalize else state.eigenfunction
    xs = np.linspace(xmin, xmax, samples) if samples > 1 else np.array([xmin])
    xs = xs[xs != 0]
    values = f(xs) if xs.size else np.zeros((0, 2))
    rows = [(x, v[0].real, v[0].imag, v[1].real, v[1].imag) for x, v in zip(xs, values)]
    _emit(render_csv(["x", "re_up", "im_up", "re_down", "im_down"], rows), out)
    return EXIT_OK


GREEN_HEADER = ["x"] + [f"{part}_g{i}{j}" for i in (1, 2) for j in (1, 2) for part in ("re", "im")]


def cmd_green(params: ModelParams, operator, z, xs, out) -> int:
    if operator == "a0":
        expansion = dirac.a0_green_expansion(params, z)
        den = abs(dirac.a0_resolvent_denominator(params, z))
    elif operator == "a":
        expansion = bound.a_green_expansion(params, z)
        m = bound.momentum_branch(params, z)
        P, S = m.p1 * m.p2, m.p1 + m.p2
        den = abs((2 * P * S + 1j * params.gamma * (P + z)) ** 2 + (params.gamma * params.omega / 2) ** 2)
    else:
        raise DomainError("operator must be a0 or a")
    if den <= 1e-6 * params.scale:
        sys.stderr.write(f"warning: z = {z} is close to a pole (|denominator| = {den:.3e})\n")
    xs = np.asarray([x for x in xs if x != 0], dtype=float)
    rows = []
    for x, g in zip(xs, expansion(xs) if xs.size else []):
        rows.append([x] + [v for entry in g.reshape(-1) for v in (entry.real, entry.imag)])
    _emit(render_csv(GREEN_HEADER, rows), out)
    return EXIT_OK


def oracle_report(params: ModelParams, spec: oracle.GridSpec, k: int, tol: float) -> dict:
    analytic = bound.discrete_spectrum(params)
    grid = {"L": spec.half_length, "N": spec.points, "eps_w": spec.well_half_width}
    targets = [s.lambda_val for s in analytic.states
               if s.family == bound.CONTINUOUS and s.lambda_val < analytic.essential_edge]
    try:
        numeric = [v for v, _ in oracle.lowest_eigenpairs(oracle.build_grid_hamiltonian(params, spec), k)]
    except ConvergenceError as exc:
        return {"analytic": targets, "numeric": [], "matches": [], "unmatched": [],
                "grid": grid, "diagnostics": [str(exc)]}
    cmp = oracle.compare_spectra(analytic, numeric, tol)
    unmatched = ([{"side": "analytic", "value": a, "nearest": d} for a, d in cmp.unmatched_analytic]
                 + [{"side": "numeric", "value": v} for v in cmp.unmatched_numeric])
    return {
        "analytic": targets,
        "numeric": numeric,
        "matches": [{"analytic": a, "numeric": n, "abs_err": e} for a, n, e in cmp.matches],
        "unmatched": unmatched,
        "grid": grid,
        "diagnostics": [],
    }


def cmd_oracle(params: ModelParams, L, N, well_width, k, out, tol: float = 5e-3) -> int:
    report = oracle_report(params, oracle.GridSpec(L, N, well_width), k, tol)
    _emit(json.dumps(report, indent=2) + "\n", out)
    return EXIT_SOLVER if report["diagnostics"] else EXIT_OK


def cmd_check(inject_fault: bool = False, with_oracle: bool = True, stream=None) -> int:
    stream = sys.stdout if stream is None else stream
    results = checks.run_suite(perturb=1e-3 if inject_fault else 0.0, with_oracle=with_oracle)
    failed = [r for r in results if not r.passed]
    stream.write(f"{len(results) - len(failed)}/{len(results)} invariants hold\n")
    for r in failed:
        stream.write(f"FAIL {r.name} {r.detail}\n")
    return EXIT_INVARIANT if failed else EXIT_OK


# ---------------------------------------------------------------- argument parsing

def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="socbound", description=__doc__.split("\n")[0])
    parser.add_argument("--config", help="JSON file whose keys mirror flag names; flags win")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def physics(p, omega=True):
        p.add_argument("--gamma", type=float, default=-1.0)
        p.add_argument("--eta", type=float, default=0.6)
        if omega:
            p.add_argument("--omega", type=float, default=0.5)

    p = sub.add_parser("dispersion", help="lower and upper dispersion branches")
    p.add_argument("--eta", type=float, default=0.6)
    p.add_argument("--omega", type=float, default=0.2)
    p.add_argument("--pmin", type=float, default=-1.0)
    p.add_argument("--pmax", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="eigenvalues as a function of Omega")
    p.add_argument("kind", choices=sorted(SWEEP_HEADERS))
    physics(p, omega=False)
    p.add_argument("--omega-min", type=float, default=0.0)
    p.add_argument("--omega-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")

    p = sub.add_parser("eigfun", help="sample an eigenfunction")
    physics(p)
    p.add_argument("--family", choices=["continuous", "so"], default="continuous")
    p.add_argument("--sign", default="lower", help="upper/lower (continuous) or +/- (so)")
    p.add_argument("--index", type=int, default=0, help="which state when several match, by energy")
    p.add_argument("--xmin", type=float, default=-5.0)
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("green", help="sample a resolvent kernel")
    physics(p)
    p.add_argument("--operator", choices=["a0", "a"], default="a")
    p.add_argument("--z-re", type=float, default=-1.0)
    p.add_argument("--z-im", type=float, default=0.1)
    p.add_argument("--xs", type=_float_list, default=[-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
    p.add_argument("--out")

    p = sub.add_parser("oracle", help="grid eigensolve versus analytic spectrum")
    physics(p)
    p.add_argument("--L", type=float, default=40.0)
    p.add_argument("--N", type=int, default=8000)
    p.add_argument("--well-width", type=float, default=1e-2)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--tol", type=float, default=5e-3)
    p.add_argument("--out")

    p = sub.add_parser("check", help="run the invariant suite")
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb the cubic constant coefficient by 1e-3 (negative control)")
    p.add_argument("--no-oracle", action="store_true")
    return parser


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config}: {exc}") from None
        if not isinstance(config, dict):
            raise UsageError("config must be a JSON object")
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = set(k.replace("-", "_") for k in config) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        subparser.set_defaults(**{k.replace("-", "_"): v for k, v in config.items()})
        args = parser.parse_args(argv)
    return args


def run(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "dispersion":
        return cmd_dispersion(args.eta, args.omega, args.pmin, args.pmax, args.steps, args.out)
    if cmd == "sweep":
        cfg = SweepConfig(args.gamma, args.eta, args.omega_min, args.omega_max, args.steps,
                          args.kind, args.out, args.format)
        return cmd_sweep(cfg)
    if cmd == "eigfun":
        return cmd_eigfun(_params(args), args.family, args.sign, args.xmin, args.xmax, args.samples,
                          args.out, args.index, args.normalize)
    if cmd == "green":
        return cmd_green(_params(args), args.operator, complex(args.z_re, args.z_im), args.xs, args.out)
    if cmd == "oracle":
        return cmd_oracle(_params(args), args.L, args.N, args.well_width, args.k, args.out, args.tol)
    return cmd_check(args.inject_fault, not args.no_oracle)


def main(argv=None) -> int:
    try:
        return run(parse_args(argv))
    except (UsageError, DomainError, NoSuchStateError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except (ConvergenceError, InconsistencyError, PoleError) as exc:
        sys.stderr.write(f"solver error: {exc}\n")
        return EXIT_SOLVER
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
