"""Command-line front end: parameter entry, sweeps, CSV/JSON emission, and
the self-verification suite.

Exit codes: 0 success, 1 usage error (bad flags or parameters outside the
regime a subcommand needs), 2 numerical failure (Newton divergence, step
collapse), 3 verification failure.

Floats are serialized with ``repr`` (shortest round-trip decimals), so CSV
output is byte-identical across runs and reading a column back with
``float`` reproduces the values exactly.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import barriers, bvp, shooting, verify
from .errors import NewtonDivergence, PlapError, StepCollapse
from .exponents import (
    ProblemParams,
    classify_regime,
    equation_critical,
    lambda_exponent,
    pohozaev_coefficient,
    serrin_critical,
)

_USAGE = """plap <subcommand> [flags]

subcommands:
  classify        regime flags and critical exponents         (JSON)
  shoot           integrate one radial shot                   (CSV r,u,du,w)
  sweep           classify outcomes along a parameter axis    (CSV)
  counterexample  explicit supercritical counterexample       (JSON)
  hadamard        three-sphere lower bound on an annulus      (CSV r,lower_bound)
  pohozaev        radial Pohozaev balance for one shot        (JSON)
  bvp             annulus Dirichlet problem                   (CSV r,u)
  verify          run the acceptance suite                    (one line per check)

--n --p --q --gamma --a describe -Delta_p u = a r^gamma u^q (radial).
--config PATH loads key=value defaults; explicit flags override them.
--out PATH writes to a file instead of stdout.  PLAP_THREADS caps sweep
concurrency.  `plap <subcommand> --help` lists the full flag set.
"""

_BOUNDARY_TOL = 1e-9
_BOUNDARY_NOTE = "proof uses strict inequality"


class _UsageExit(Exception):
    def __init__(self, message: str):
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the contract here is exit 1 + grammar."""

    def error(self, message):  # noqa: D102 - argparse hook
        raise _UsageExit(message)


# ---------------------------------------------------------------------------
# Flag groups
# ---------------------------------------------------------------------------

def _add_param_flags(p: _Parser, *, with_q: bool = True):
    p.add_argument("--n", type=int, required=True, help="dimension N (integer >= 1)")
    p.add_argument("--p", type=float, required=True, help="p-Laplacian exponent, p > 1")
    if with_q:
        p.add_argument("--q", type=float, required=True, help="nonlinearity power, q > p-1")
    p.add_argument("--gamma", type=float, default=0.0, help="weight exponent (default 0)")
    p.add_argument("--a", type=float, default=1.0, help="amplitude a > 0 (default 1)")


def _add_shot_flags(p: _Parser):
    p.add_argument("--u0", type=float, required=True, help="shooting height u(0) > 0")
    p.add_argument("--sign", choices=("minus", "plus"), default="minus",
                   help="equation sign: minus for -Delta_p u = ..., plus for Delta_p u = ...")
    p.add_argument("--r-max", type=float, default=100.0, help="integration endpoint")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--delta0", type=float, default=None,
                   help="series hand-off radius (default 1e-6 min(1, r_max))")


def _add_out_flag(p: _Parser):
    p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    p.add_argument("--config", type=str, default=None,
                   help="key=value file of flag defaults; explicit flags override")


def _params_from(args, q: float | None = None) -> ProblemParams:
    return ProblemParams(
        n_dim=args.n, p=args.p, q=args.q if q is None else q,
        gamma=args.gamma, amplitude=args.a,
    )


def _sign_from(args) -> shooting.EquationSign:
    return shooting.EquationSign.MINUS if args.sign == "minus" else shooting.EquationSign.PLUS


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    if x is None:
        return ""
    return str(x)


def _emit_csv(out: str | None, header, rows):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    finally:
        if out:
            fh.close()


def _emit_json(out: str | None, obj):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Sweep spec
# ---------------------------------------------------------------------------

class SweepAxis(enum.Enum):
    Q = "q"
    U0 = "u0"
    GAMMA = "gamma"


@dataclass(frozen=True)
class SweepSpec:
    base: ProblemParams
    axis: SweepAxis
    from_: float
    to: float
    steps: int
    sign: shooting.EquationSign
    r_max: float
    u0: float

    def __post_init__(self):
        if not self.from_ < self.to:
            raise ValueError(f"need from < to, got {self.from_} >= {self.to}")
        if not (isinstance(self.steps, int) and self.steps >= 2):
            raise ValueError(f"steps must be an integer >= 2, got {self.steps!r}")

    def points(self) -> list[tuple[float, shooting.IvpSpec]]:
        out = []
        for v in np.linspace(self.from_, self.to, self.steps):
            v = float(v)
            params, u0 = self.base, self.u0
            if self.axis is SweepAxis.Q:
                params = dataclasses.replace(self.base, q=v)
            elif self.axis is SweepAxis.GAMMA:
                params = dataclasses.replace(self.base, gamma=v)
            else:
                u0 = v
            out.append((v, shooting.IvpSpec(
                params=params, u0=u0, sign=self.sign, r_max=self.r_max)))
        return out


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _build_classify(p: _Parser):
    _add_param_flags(p)
    _add_out_flag(p)


def _run_classify(args) -> int:
    pr = _params_from(args)
    reg = classify_regime(pr)
    obj = {
        "n": pr.n_dim, "p": pr.p, "q": pr.q, "gamma": pr.gamma, "a": pr.amplitude,
        "lambda": reg.lam,
        "q_serrin": reg.q_serrin,
        "q_equation": reg.q_equation,
        "low_dimension": reg.low_dimension,
        "inequality_nonexistence": reg.inequality_nonexistence,
        "counterexample_exists": reg.counterexample_exists,
        "equation_radial_nonexistence": reg.equation_radial_nonexistence,
    }
    if reg.q_equation is not None and abs(pr.q - reg.q_equation) < _BOUNDARY_TOL:
        obj["boundary"] = _BOUNDARY_NOTE
    _emit_json(args.out, obj)
    return 0


def _build_shoot(p: _Parser):
    _add_param_flags(p)
    _add_shot_flags(p)
    p.add_argument("--max-step", type=float, default=None, help="cap on the step size")
    _add_out_flag(p)


def _run_shoot(args) -> int:
    spec = shooting.IvpSpec(
        params=_params_from(args), u0=args.u0, sign=_sign_from(args),
        r_max=args.r_max, rtol=args.rtol, atol=args.atol, delta0=args.delta0,
        max_step=args.max_step if args.max_step is not None else math.inf,
    )
    traj = shooting.integrate_ivp(spec)
    outcome = shooting.classify_outcome(traj, spec)
    du = traj.du(spec.params)
    _emit_csv(args.out, ("r", "u", "du", "w"),
              zip(traj.r.tolist(), traj.u.tolist(), du.tolist(), traj.w.tolist()))
    parts = [f"outcome={outcome.label}", f"status={traj.status}", f"nodes={len(traj.r)}"]
    if outcome.r_event is not None:
        parts.append(f"r_event={outcome.r_event!r}")
    if outcome.tail_slope is not None:
        parts.append(f"tail_slope={outcome.tail_slope!r}")
    if outcome.reason:
        parts.append(f"reason={outcome.reason}")
    print("  ".join(parts), file=sys.stderr)
    if traj.step_collapsed and outcome.kind is shooting.OutcomeKind.INDETERMINATE:
        return 2
    return 0


def _build_sweep(p: _Parser):
    p.add_argument("--axis", choices=tuple(a.value for a in SweepAxis), required=True)
    p.add_argument("--from", dest="from_", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, default=None,
                   help="base q (required unless --axis q)")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--u0", type=float, default=1.0)
    p.add_argument("--sign", choices=("minus", "plus"), default="minus")
    p.add_argument("--r-max", type=float, default=1000.0)
    _add_out_flag(p)


def _run_sweep(args) -> int:
    axis = SweepAxis(args.axis)
    if args.q is None:
        if axis is not SweepAxis.Q:
            raise _UsageExit("--q is required unless --axis q")
        base_q = max(args.from_, args.p)  # placeholder; replaced per point
    else:
        base_q = args.q
    base = ProblemParams(n_dim=args.n, p=args.p, q=base_q,
                         gamma=args.gamma, amplitude=args.a)
    spec = SweepSpec(base=base, axis=axis, from_=args.from_, to=args.to,
                     steps=args.steps, sign=_sign_from(args), r_max=args.r_max,
                     u0=args.u0)
    points = spec.points()
    workers = _thread_cap(len(points))
    outcomes = shooting.sweep_outcomes([s for _, s in points], max_workers=workers)
    rows = []
    for (v, ivp), outc in zip(points, outcomes):
        pr = ivp.params
        boundary = False
        if pr.n_dim > pr.p:
            boundary = abs(pr.q - equation_critical(pr)) < _BOUNDARY_TOL
        rows.append((v, outc.kind.value, outc.r_event, outc.tail_slope, boundary))
    _emit_csv(args.out, ("axis_value", "outcome", "r_event", "tail_slope", "boundary_case"), rows)
    return 0


def _thread_cap(n_points: int) -> int:
    env = os.environ.get("PLAP_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise _UsageExit(f"PLAP_THREADS must be an integer, got {env!r}")
        if cap < 1:
            raise _UsageExit(f"PLAP_THREADS must be >= 1, got {cap}")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_points))


def _build_counterexample(p: _Parser):
    _add_param_flags(p)
    p.add_argument("--r-min", type=float, default=1e-3)
    p.add_argument("--r-max", type=float, default=1e6)
    p.add_argument("--points", type=int, default=2000)
    _add_out_flag(p)


def _run_counterexample(args) -> int:
    pr = _params_from(args)
    consts = barriers.build_counterexample(pr)
    r, res = barriers.counterexample_residual_grid(
        consts, pr, r_min=args.r_min, r_max=args.r_max, points=args.points)
    i_min = int(np.argmin(res))
    obj = {
        "epsilon": consts.epsilon,
        "alpha": consts.alpha,
        "c": consts.c,
        "q_serrin": serrin_critical(pr),
        "profile": f"{consts.c!r} * (1 + r)^-{consts.alpha!r}",
        "grid": {
            "r_min": args.r_min, "r_max": args.r_max, "points": args.points,
            "min_residual": float(res[i_min]), "argmin_r": float(r[i_min]),
        },
        "residual_nonnegative": bool(np.all(res >= 0.0)),
    }
    _emit_json(args.out, obj)
    return 0


def _build_hadamard(p: _Parser):
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--lam", type=float, default=None,
                   help="interpolation exponent; derived from --n/--p when omitted")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--log-mode", action="store_true",
                   help="logarithmic interpolation (the N = p case)")
    p.add_argument("--points", type=int, default=101)
    _add_out_flag(p)


def _run_hadamard(args) -> int:
    if args.log_mode:
        inp = barriers.HadamardInput(args.r1, args.r2, args.m1, args.m2, log_mode=True)
    elif args.lam is not None:
        inp = barriers.HadamardInput(args.r1, args.r2, args.m1, args.m2, lam=args.lam)
    elif args.n is not None and args.p is not None:
        pr = ProblemParams(n_dim=args.n, p=args.p, q=max(args.p, 2.0))
        if args.n == args.p:
            inp = barriers.HadamardInput(args.r1, args.r2, args.m1, args.m2, log_mode=True)
        else:
            inp = barriers.HadamardInput(args.r1, args.r2, args.m1, args.m2,
                                         lam=lambda_exponent(pr))
    else:
        raise _UsageExit("hadamard needs --lam, --log-mode, or both --n and --p")
    if args.points < 2:
        raise _UsageExit("--points must be >= 2")
    r = np.linspace(args.r1, args.r2, args.points)
    vals = barriers.hadamard_lower_bound(inp, r)
    _emit_csv(args.out, ("r", "lower_bound"), zip(r.tolist(), np.asarray(vals).tolist()))
    return 0


def _build_pohozaev(p: _Parser):
    _add_param_flags(p)
    _add_shot_flags(p)
    p.add_argument("--r-eval", type=float, required=True,
                   help="radius at which the balance is evaluated")
    p.add_argument("--tol", type=float, default=1e-6)
    _add_out_flag(p)


def _run_pohozaev(args) -> int:
    if args.sign != "minus":
        raise _UsageExit("the balance identity holds for the minus sign only")
    spec = shooting.IvpSpec(
        params=_params_from(args), u0=args.u0, sign=shooting.EquationSign.MINUS,
        r_max=args.r_max, rtol=args.rtol, atol=args.atol, delta0=args.delta0,
    )
    traj = shooting.integrate_ivp(spec)
    rep = shooting.pohozaev_residual(traj, spec, args.r_eval, tol=args.tol)
    pr = spec.params
    obj = rep.as_dict()
    obj["coefficient"] = pohozaev_coefficient(pr) if pr.n_dim > pr.p else None
    obj["q_equation"] = equation_critical(pr) if pr.n_dim > pr.p else None
    _emit_json(args.out, obj)
    return 0


def _build_bvp(p: _Parser):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r-inner", type=float, required=True)
    p.add_argument("--r-outer", type=float, required=True)
    p.add_argument("--b-inner", type=float, required=True, help="value at r_inner")
    p.add_argument("--b-outer", type=float, required=True, help="value at r_outer")
    p.add_argument("--f", type=float, default=0.0, help="constant right-hand side")
    p.add_argument("--mesh-size", type=int, default=256)
    _add_out_flag(p)


def _run_bvp(args) -> int:
    pr = ProblemParams(n_dim=args.n, p=args.p, q=max(args.p, 2.0))
    f = args.f
    prob = bvp.AnnulusProblem(
        params=pr, r_inner=args.r_inner, r_outer=args.r_outer,
        boundary_inner=args.b_inner, boundary_outer=args.b_outer,
        rhs=(lambda r: f) if f != 0.0 else None,
        mesh_size=args.mesh_size,
    )
    sol, info = bvp.solve_annulus_dirichlet_detailed(prob)
    _emit_csv(args.out, ("r", "u"), zip(sol.r.tolist(), sol.u.tolist()))
    print(
        f"newton iterations={info.iterations}  residual={info.residual!r}  "
        f"flux_eps={info.flux_eps!r}  levels={info.levels_done}",
        file=sys.stderr,
    )
    return 0


def _build_verify(p: _Parser):
    p.add_argument("--only", type=str, default=None,
                   help="comma-separated criterion numbers (default: all)")
    _add_out_flag(p)


def _run_verify(args) -> int:
    indices = None
    if args.only is not None:
        try:
            indices = [int(tok) for tok in args.only.split(",") if tok.strip()]
        except ValueError:
            raise _UsageExit(f"--only expects comma-separated integers, got {args.only!r}")
        bad = [i for i in indices if not 1 <= i <= len(verify.CRITERIA)]
        if bad:
            raise _UsageExit(f"criterion numbers must be in 1..{len(verify.CRITERIA)}: {bad}")
    results = verify.run_all(indices)
    lines = "".join(res.line() + "\n" for res in results)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    n_fail = sum(1 for res in results if not res.passed)
    if n_fail:
        print(f"{n_fail} of {len(results)} checks failed", file=sys.stderr)
        return 3
    return 0


_SUBCOMMANDS = {
    "classify": (_build_classify, _run_classify),
    "shoot": (_build_shoot, _run_shoot),
    "sweep": (_build_sweep, _run_sweep),
    "counterexample": (_build_counterexample, _run_counterexample),
    "hadamard": (_build_hadamard, _run_hadamard),
    "pohozaev": (_build_pohozaev, _run_pohozaev),
    "bvp": (_build_bvp, _run_bvp),
    "verify": (_build_verify, _run_verify),
}


# ---------------------------------------------------------------------------
# Config splicing and dispatch
# ---------------------------------------------------------------------------

def _extract_config(tokens: list[str]) -> tuple[str | None, list[str]]:
    path, rest, i = None, [], 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "--config":
            if i + 1 >= len(tokens):
                raise _UsageExit("--config needs a path")
            path = tokens[i + 1]
            i += 2
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            i += 1
        else:
            rest.append(tok)
            i += 1
    return path, rest


def _config_tokens(parser: _Parser, path: str) -> list[str]:
    """key=value lines -> flag tokens, spliced ahead of explicit flags."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _UsageExit(f"cannot read config {path!r}: {exc}")
    known = parser._option_string_actions  # noqa: SLF001 - argparse has no public map
    out: list[str] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _UsageExit(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (tok.strip() for tok in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        action = known.get(flag)
        if action is None:
            raise _UsageExit(f"{path}:{lineno}: unknown key {key!r} for this subcommand")
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes"):
                out.append(flag)
            elif value.lower() not in ("0", "false", "no"):
                raise _UsageExit(f"{path}:{lineno}: {key!r} is a switch; use true/false")
        else:
            out.extend((flag, value))
    return out


def dispatch(argv: list[str]) -> int:
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(_USAGE)
        return 0 if argv else 1
    cmd = argv[0]
    if cmd not in _SUBCOMMANDS:
        print(f"unknown subcommand {cmd!r}\n\n{_USAGE}", file=sys.stderr, end="")
        return 1
    build, run = _SUBCOMMANDS[cmd]
    parser = _Parser(prog=f"plap {cmd}", add_help=True)
    build(parser)
    try:
        config_path, rest = _extract_config(argv[1:])
        tokens = rest
        if config_path is not None:
            tokens = _config_tokens(parser, config_path) + rest
        args = parser.parse_args(tokens)
        args.config = config_path
        return run(args)
    except _UsageExit as exc:
        print(f"plap {cmd}: {exc}\n\n{_USAGE}", file=sys.stderr, end="")
        return 1
    except (NewtonDivergence, StepCollapse) as exc:
        print(f"plap {cmd}: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (PlapError, ValueError) as exc:
        print(f"plap {cmd}: {exc}\n\n{_USAGE}", file=sys.stderr, end="")
        return 1


def main(argv: list[str] | None = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
