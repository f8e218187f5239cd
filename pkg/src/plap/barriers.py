"""Explicit barriers, the supercritical counterexample, and three-sphere bounds.

Counterexample recipe: for N > p, gamma >= 0 and q strictly above the
inequality threshold q_S, pick eps in (0, N-p) solving

    q = (N + gamma - eps)(p - 1)/(N - p - eps),

set alpha = (N - p - eps)/(p - 1) and choose c from

    a c^{q-p+1} = alpha^{p-1} eps.

Then Gamma = c (1+r)^{-alpha} satisfies -Delta_p Gamma >= a r^gamma Gamma^q
on all of (0, oo): the exponent bookkeeping is alpha q = alpha(p-1) + p + gamma
= N + gamma - eps and N - 1 - (alpha+1)(p-1) = eps, and the residual keeps the
sign because (N-1)(1+r)/r - (alpha+1)(p-1) >= eps >= eps (r/(1+r))^gamma.

Cutoff barrier (k >= 3, 1/k < p-1):

    -Delta_p zeta = [m1(k+1)/(R-r1)^{k+1}]^{p-1} s^{k(p-1)-1}
                    [ k(p-1) + (N-1) s/r ],     s = (r - r1)+,

zero for r <= r1, and bounded by (k+1)^{p-1}(N+2p-3) m1^{p-1} (R-r1)^{-p}
on (r1, R) provided k(p-1) <= 2(p-1) + (N-1) r1/R (the closed form increases
on (r1, R), so the sup sits at r -> R); see ``cutoff_plap_bound``.

Log-corrected barrier psi = g1 r^lam (log r)^beta + g2 (r > 1, N > p):

    Delta_p psi = g1^{p-1} r^{-N} |lam L^b + b L^{b-1}|^{p-2}
                  [ (p-1) b (b-1) L^{b-2} - b (N-p) L^{b-1} ],   L = log r,

which has the large-r shape -C r^{-N} (log r)^{b(p-1)-1}.  Admissible beta:
0 < beta < 1/(p-1) for p > 2, beta = 1 for p <= 2.

Hadamard three-sphere bound for -Delta_p u >= 0, u >= 0, m(r) = min_{|x|=r} u:

    m(r) >= [ m(r1)(r^lam - r2^lam) + m(r2)(r1^lam - r^lam) ] / (r1^lam - r2^lam)

for r1 <= r <= r2 (log-mode variant when N = p), with equality when m comes
from an exact p-harmonic profile.  For lam < 0 and global supersolutions,
sending r2 -> oo shows g(r) = m(r) r^{-lam} is nondecreasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    DimensionRegime,
    NegativeWeightExponent,
    NotSupercritical,
    OriginSingularity,
    RangeError,
    RegimeError,
    SingularGradient,
)
from .exponents import ProblemParams, serrin_critical
from .radial_ops import CutoffBarrier, LogBarrier, _odd_pow
from .reports import IdentityReport


# ---------------------------------------------------------------------------
# Counterexample
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleConstants:
    """(eps, alpha, c) of the explicit supercritical counterexample."""

    epsilon: float
    alpha: float
    c: float


def build_counterexample(params: ProblemParams) -> CounterexampleConstants:
    """Solve the (eps, alpha, c) recipe; needs N > p, gamma >= 0, q > q_S strictly."""
    n, p, q, gamma, a = params.n_dim, params.p, params.q, params.gamma, params.amplitude
    if gamma < 0:
        raise NegativeWeightExponent(
            f"counterexample construction assumes gamma >= 0, got {gamma}"
        )
    q_s = serrin_critical(params)  # raises DimensionRegime for N <= p
    if q <= q_s:
        raise NotSupercritical(
            f"need q > q_serrin = {q_s} strictly, got q = {q} (eps would be <= 0)"
        )
    eps = (q * (n - p) - (n + gamma) * (p - 1.0)) / (q - (p - 1.0))
    alpha = (n - p - eps) / (p - 1.0)
    c = (alpha ** (p - 1.0) * eps / a) ** (1.0 / (q - p + 1.0))
    return CounterexampleConstants(epsilon=eps, alpha=alpha, c=c)


def counterexample_plap(consts: CounterexampleConstants, params: ProblemParams, r):
    """Delta_p Gamma for Gamma = c(1+r)^{-alpha}, vectorized over r > 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise OriginSingularity(
            "closed form carries an (N-1)/r term; at r = 0 the residual is +inf "
            "(the inequality holds in the limit)"
        )
    n, p = params.n_dim, params.p
    c, alpha = consts.c, consts.alpha
    bracket = (alpha + 1.0) * (p - 1.0) / (1.0 + r) - (n - 1.0) / r
    out = (c * alpha) ** (p - 1.0) * (1.0 + r) ** (-(alpha + 1.0) * (p - 1.0)) * bracket
    return out if out.shape else float(out)


def _counterexample_sides(consts, params, r):
    r = np.asarray(r, dtype=float)
    lhs = -np.asarray(counterexample_plap(consts, params, r))
    gamma_val = consts.c * (1.0 + r) ** (-consts.alpha)
    rhs = params.amplitude * r ** params.gamma * gamma_val ** params.q
    return lhs, rhs


def counterexample_residual(
    consts: CounterexampleConstants, params: ProblemParams, r: float, tol: float = 0.0
) -> IdentityReport:
    """residual = -Delta_p Gamma - a r^gamma Gamma^q at one r; >= 0 for all r > 0."""
    lhs, rhs = _counterexample_sides(consts, params, float(r))
    residual = float(lhs - rhs)
    scale = max(abs(float(lhs)), abs(float(rhs)), 1e-300)
    return IdentityReport(
        label="counterexample_residual",
        lhs=float(lhs),
        rhs=float(rhs),
        residual=residual,
        scale=scale,
        tol=tol,
        passed=residual >= -tol * scale,
    )


def counterexample_residual_grid(
    consts: CounterexampleConstants,
    params: ProblemParams,
    r_min: float = 1e-3,
    r_max: float = 1e6,
    points: int = 2000,
):
    """(r, residual) on a log grid; the standard nonnegativity sweep."""
    r = np.geomspace(r_min, r_max, points)
    lhs, rhs = _counterexample_sides(consts, params, r)
    return r, lhs - rhs


# ---------------------------------------------------------------------------
# Cutoff barrier
# ---------------------------------------------------------------------------

def cutoff_barrier_plap(
    spec: CutoffBarrier,
    params: ProblemParams,
    r: float,
    bracket_constant: float | None = None,
) -> float:
    """-Delta_p zeta in closed form; 0 for r <= r1.

    ``bracket_constant`` overrides the k(p-1) term of the bracket (the
    chain-rule value); passing the literal printed constant 2(p-1) lets
    ``cutoff_bracket_report`` surface how far that text sits from the oracle.
    """
    if r < 0:
        raise DomainError(f"need r >= 0, got {r}")
    n, p = params.n_dim, params.p
    spec.check_admissible(p)
    s = r - spec.r1
    if s <= 0.0:
        return 0.0
    lead = (spec.m1 * (spec.k + 1) / (spec.r_big - spec.r1) ** (spec.k + 1)) ** (p - 1.0)
    kp = spec.k * (p - 1.0) if bracket_constant is None else bracket_constant
    return lead * s ** (spec.k * (p - 1.0) - 1.0) * (kp + (n - 1.0) * s / r)


def cutoff_plap_bound(spec: CutoffBarrier, params: ProblemParams) -> float:
    """(k+1)^{p-1} (N+2p-3) m1^{p-1} (R-r1)^{-p}.

    Valid as a sup bound for -Delta_p zeta on (r1, R) iff
    k(p-1) <= 2(p-1) + (N-1) r1/R; at R = 2r1 this reads
    k(p-1) <= 2(p-1) + (N-1)/2 (e.g. k = 3 needs N >= 2p - 1).
    """
    n, p = params.n_dim, params.p
    return (
        (spec.k + 1) ** (p - 1.0)
        * (n + 2.0 * p - 3.0)
        * spec.m1 ** (p - 1.0)
        * (spec.r_big - spec.r1) ** (-p)
    )


def cutoff_bracket_report(
    spec: CutoffBarrier,
    params: ProblemParams,
    r: float,
    printed_bracket: bool = False,
    tol: float = 1e-6,
) -> IdentityReport:
    """Closed form (chain-rule or the printed 2(p-1) bracket) vs the FD oracle."""
    from .radial_ops import p_laplacian_fd

    bracket = 2.0 * (params.p - 1.0) if printed_bracket else None
    closed = cutoff_barrier_plap(spec, params, r, bracket_constant=bracket)
    fd = -p_laplacian_fd(spec, r, params)
    residual = closed - fd
    scale = max(abs(closed), abs(fd), 1e-300)
    passed = abs(residual) <= tol * scale
    note = ""
    if printed_bracket and not passed:
        note = "printed bracket constant 2(p-1) disagrees with the FD oracle"
    return IdentityReport(
        label="cutoff_plap_vs_fd",
        lhs=closed,
        rhs=fd,
        residual=residual,
        scale=scale,
        tol=tol,
        passed=passed,
        note=note,
    )


# ---------------------------------------------------------------------------
# Log-corrected barrier
# ---------------------------------------------------------------------------

def log_barrier_plap(spec: LogBarrier, params: ProblemParams, r: float) -> float:
    """Delta_p psi for psi = g1 r^lam (log r)^beta + g2; r > 1, N > p."""
    if params.n_dim <= params.p:
        raise DimensionRegime(
            f"log-corrected barrier is stated for N > p (N={params.n_dim}, p={params.p})"
        )
    if r <= 1.0:
        raise DomainError(f"log barrier needs r > 1, got r={r}")
    n, p = params.n_dim, params.p
    lam, b = spec.lam, spec.beta
    L = math.log(r)
    inner = lam * L ** b + b * L ** (b - 1.0)
    if p < 2.0 and abs(inner) <= 1e-12 * max(1.0, abs(lam) * L ** b):
        raise SingularGradient(
            f"|psi'| vanishes near r={r} (inner={inner:.3e}) and p={p} < 2"
        )
    grad_factor = abs(inner) ** (p - 2.0) if p != 2.0 else 1.0
    bracket = (p - 1.0) * b * (b - 1.0) * L ** (b - 2.0) - b * (n - p) * L ** (b - 1.0)
    return spec.gamma1 ** (p - 1.0) * r ** (-float(n)) * grad_factor * bracket


# ---------------------------------------------------------------------------
# Hadamard three-sphere bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HadamardInput:
    """Sphere minima m1 = m(r1), m2 = m(r2) at radii 0 < r1 < r2.

    Power mode interpolates through r^lam (lam != 0); log_mode is the N = p
    variant interpolating linearly in log r.
    """

    r1: float
    r2: float
    m1: float
    m2: float
    lam: float = 0.0
    log_mode: bool = False

    def __post_init__(self):
        if not 0 < self.r1 < self.r2:
            raise ValueError("need 0 < r1 < r2")
        if self.m1 < 0 or self.m2 < 0:
            raise ValueError("sphere minima must be nonnegative")
        if not self.log_mode and self.lam == 0.0:
            raise ValueError("lam = 0 degenerates the power interpolant; use log_mode (N = p)")


def hadamard_lower_bound(inp: HadamardInput, r):
    """The interpolated lower bound for m(r) on [r1, r2]; vectorized over r."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < inp.r1) or np.any(r_arr > inp.r2):
        raise RangeError(f"r must lie in [{inp.r1}, {inp.r2}]")
    if inp.log_mode:
        denom = math.log(inp.r1 / inp.r2)
        out = (inp.m1 * np.log(r_arr / inp.r2) + inp.m2 * np.log(inp.r1 / r_arr)) / denom
    else:
        lam = inp.lam
        r1l, r2l = inp.r1 ** lam, inp.r2 ** lam
        rl = r_arr ** lam
        out = (inp.m1 * (rl - r2l) + inp.m2 * (r1l - rl)) / (r1l - r2l)
    return out if out.shape else float(out)


def hadamard_monotonicity_check(samples, lam: float, tol: float = 1e-8) -> IdentityReport:
    """min consecutive increment of g(r) = m(r) r^{-lam}; pass iff >= -tol.

    Stated for lam < 0 (p < N) and for minima of *global* supersolutions;
    trajectories that stop being supersolutions (e.g. after crossing zero)
    only satisfy it on the range where the exterior-domain argument applies.
    """
    if lam >= 0:
        raise RegimeError(f"monotonicity of m(r) r^(-lam) needs lam < 0, got {lam}")
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError("samples must be a sequence of (r, m) pairs, length >= 2")
    r, m = arr[:, 0], arr[:, 1]
    if not np.all(np.diff(r) > 0):
        raise ValueError("samples must be sorted by strictly increasing r")
    g = m * r ** (-lam)
    increments = np.diff(g)
    worst = float(np.min(increments))
    return IdentityReport(
        label="hadamard_monotonicity",
        lhs=float(g[0]),
        rhs=float(g[-1]),
        residual=worst,
        scale=max(1.0, float(np.max(np.abs(g)))),
        tol=tol,
        passed=worst >= -tol,
        note=f"min increment of m(r) r^(-lam) over {len(r)} samples",
    )
