"""Radial shooting for -(r^{N-1}|u'|^{p-2}u')' = a r^{N-1+gamma} u^q and its
sign variant, with outcome classification, decay-slope checks, and the radial
Pohozaev identity.

The integration variable pair is (u, w) with w = r^{N-1}|u'|^{p-2}u', so

    u' = sign(w) (|w| / r^{N-1})^{1/(p-1)},
    w' = -+ a r^{N-1+gamma} |u|^{q-1} u      (minus for EquationMinus),

which stays well-defined where u' = 0 for every p > 1.  Initial data at the
hand-off radius delta0 comes from the origin series

    u(r) = u0 -+ ku r^s + O(r^{2s}),   s = (p+gamma)/(p-1),
    ku   = (p-1)/(p+gamma) (a u0^q / (N+gamma))^{1/(p-1)},
    w(r) = -+ a u0^q r^{N+gamma}/(N+gamma),

so the hand-off error is O(delta0^{2s}) relative.

The Pohozaev identity carries the amplitude (it reduces to the a = 1 display
after the rescaling v = a^{1/(q-p+1)} u):

    a K int_0^R r^{gamma+N-1}|u|^{q+1} dr
        = -(N-p) |u'|^{p-2}u' u R^{N-1} + (1-p)|u'|^p R^N
          - (a p/(q+1)) R^{gamma+N} |u(R)|^{q+1},

K = N - p - (gamma+N)p/(q+1); both multiplier identities were re-derived and
cross-checked against the closed form u = 3^{1/4}(1+r^2)^{-1/2} (p=2, N=3,
q=5), whose boundary terms cancel exactly.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rk45
from .errors import CrossedZero, NotDecaying, RangeError, RegimeError
from .exponents import ProblemParams, pohozaev_coefficient
from .radial_ops import _odd_pow
from .reports import IdentityReport

_GL_X, _GL_W = np.polynomial.legendre.leggauss(7)


class EquationSign(enum.Enum):
    """MINUS: -Delta_p u = a r^gamma u^q.  PLUS: Delta_p u = a r^gamma u^q."""

    MINUS = -1
    PLUS = 1


@dataclass(frozen=True)
class IvpSpec:
    """Shooting problem: u(0) = u0 > 0, u'(0) = 0, integrate to r_max."""

    params: ProblemParams
    u0: float
    sign: EquationSign = EquationSign.MINUS
    r_max: float = 100.0
    rtol: float = 1e-10
    atol: float = 1e-12
    delta0: float | None = None            # default 1e-6 * min(1, r_max)
    blowup_threshold: float | None = None  # default 1e8 * u0
    first_step: float | None = None        # default 0.1 * delta0
    max_step: float = math.inf             # refinement-study knob

    def __post_init__(self):
        if not (self.u0 > 0):
            raise ValueError(f"need u0 > 0, got {self.u0}")
        if not (self.r_max > 0):
            raise ValueError(f"need r_max > 0, got {self.r_max}")
        if self.delta0 is None:
            object.__setattr__(self, "delta0", 1e-6 * min(1.0, self.r_max))
        if not (0 < self.delta0 < 0.01 * self.r_max):
            raise ValueError(f"need 0 < delta0 << r_max, got {self.delta0}")
        if self.blowup_threshold is None:
            object.__setattr__(self, "blowup_threshold", 1e8 * self.u0)
        if self.blowup_threshold <= self.u0:
            raise ValueError("blowup_threshold must exceed u0")
        if self.first_step is None:
            object.__setattr__(self, "first_step", 0.1 * self.delta0)
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol, atol must be positive")
        if not (self.max_step > 0):
            raise ValueError("max_step must be positive")


def series_coefficients(spec: IvpSpec) -> tuple[float, float]:
    """(ku, s) of the origin series u = u0 -+ ku r^s."""
    pr = spec.params
    s = (pr.p + pr.gamma) / (pr.p - 1.0)
    ku = (pr.p - 1.0) / (pr.p + pr.gamma) * (
        pr.amplitude * spec.u0 ** pr.q / (pr.n_dim + pr.gamma)
    ) ** (1.0 / (pr.p - 1.0))
    return ku, s


def series_state(spec: IvpSpec, r: float) -> np.ndarray:
    """(u, w) from the origin series at radius r."""
    pr = spec.params
    sgn = float(spec.sign.value)
    ku, s = series_coefficients(spec)
    u = spec.u0 + sgn * ku * r ** s
    w = sgn * pr.amplitude * spec.u0 ** pr.q * r ** (pr.n_dim + pr.gamma) / (
        pr.n_dim + pr.gamma
    )
    return np.array([u, w])


@dataclass
class Trajectory:
    """Accepted nodes of one shooting run plus the dense interpolant."""

    r: np.ndarray
    u: np.ndarray
    w: np.ndarray
    dense: bool
    result: rk45.IntegrationResult
    r_cross: float | None = None
    r_blow: float | None = None
    step_collapsed: bool = False

    @property
    def status(self) -> str:
        return self.result.status

    def du(self, params: ProblemParams) -> np.ndarray:
        """u' at the nodes, recovered from w."""
        return _du_from_w(self.r, self.w, params)

    def sample(self, params: ProblemParams, r) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(u, u', w) at arbitrary radii inside the integrated range."""
        ys = self.result.sol(r)
        ys = np.atleast_2d(ys)
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        u, w = ys[:, 0], ys[:, 1]
        return u, _du_from_w(r_arr, w, params), w


def _du_from_w(r, w, params: ProblemParams):
    r = np.asarray(r, dtype=float)
    w = np.asarray(w, dtype=float)
    mag = np.abs(w) * r ** (1.0 - params.n_dim)
    return np.sign(w) * mag ** (1.0 / (params.p - 1.0))


def integrate_ivp(spec: IvpSpec) -> Trajectory:
    """Shoot from delta0 to r_max; halt at a zero crossing or at blow-up.

    Step-size underflow is recorded on the trajectory (step_collapsed), not
    raised: classification decides whether it is a blow-up signature.
    """
    pr = spec.params
    sgn = float(spec.sign.value)
    n1 = pr.n_dim - 1.0
    inv_pm1 = 1.0 / (pr.p - 1.0)

    def rhs(r, y):
        u, w = y
        mag = abs(w) * r ** -n1 if n1 else abs(w)
        du = math.copysign(mag ** inv_pm1, w) if w else 0.0
        dw = sgn * pr.amplitude * r ** (n1 + pr.gamma) * _odd_pow(u, pr.q)
        return np.array([du, dw])

    events = [
        rk45.EventSpec(fn=lambda t, y: y[0], terminal=True, direction=-1),
        rk45.EventSpec(
            fn=lambda t, y: y[0] - spec.blowup_threshold, terminal=True, direction=1
        ),
    ]
    res = rk45.integrate(
        rhs,
        spec.delta0,
        spec.r_max,
        series_state(spec, spec.delta0),
        rtol=spec.rtol,
        atol=spec.atol,
        first_step=spec.first_step,
        max_step=spec.max_step,
        events=events,
    )

    r, u, w = res.ts, res.ys[:, 0], res.ys[:, 1]
    keep = np.concatenate(([True], np.diff(r) > 0))  # event node may duplicate
    r, u, w = r[keep], u[keep], w[keep]

    r_cross = r_blow = None
    if res.status == "event":
        if res.event_index == 0:
            r_cross = float(res.event_t)
        else:
            r_blow = float(res.event_t)
    return Trajectory(
        r=r,
        u=u,
        w=w,
        dense=True,
        result=res,
        r_cross=r_cross,
        r_blow=r_blow,
        step_collapsed=(res.status == "step_collapse"),
    )


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

class OutcomeKind(enum.Enum):
    CROSSES_ZERO = "crosses_zero"
    POSITIVE_DECAYING = "positive_decaying"
    BLOWS_UP = "blows_up"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    r_cross: float | None = None
    r_blow: float | None = None
    tail_slope: float | None = None
    reason: str = ""

    def __post_init__(self):
        if self.kind is OutcomeKind.CROSSES_ZERO and not (self.r_cross and self.r_cross > 0):
            raise ValueError("CrossesZero needs r_cross > 0")
        if self.kind is OutcomeKind.BLOWS_UP and not (
            self.r_blow is not None and math.isfinite(self.r_blow)
        ):
            raise ValueError("BlowsUp needs finite r_blow")
        if self.kind is OutcomeKind.POSITIVE_DECAYING and not (
            self.tail_slope is not None and self.tail_slope < 0
        ):
            raise ValueError("PositiveDecaying needs tail_slope < 0")

    @property
    def r_event(self) -> float | None:
        return self.r_cross if self.r_cross is not None else self.r_blow

    @property
    def label(self) -> str:
        return self.kind.value


def classify_outcome(traj: Trajectory, spec: IvpSpec) -> Outcome:
    """CrossesZero / BlowsUp / PositiveDecaying (final-decade test) / Indeterminate."""
    if traj.r_cross is not None:
        return Outcome(OutcomeKind.CROSSES_ZERO, r_cross=traj.r_cross)
    if traj.r_blow is not None:
        return Outcome(OutcomeKind.BLOWS_UP, r_blow=traj.r_blow)
    if traj.step_collapsed:
        grew = traj.u[-1] > 10.0 * spec.u0 and traj.w[-1] > 0
        if spec.sign is EquationSign.PLUS and grew:
            return Outcome(OutcomeKind.BLOWS_UP, r_blow=float(traj.r[-1]))
        return Outcome(
            OutcomeKind.INDETERMINATE,
            reason=f"step collapse at r={traj.r[-1]:.6g} without blow-up signature",
        )
    if traj.status != "finished":
        return Outcome(OutcomeKind.INDETERMINATE, reason=f"integrator status {traj.status}")

    # Final decade [r_max/10, r_max]: transients near the origin must not
    # pollute the slope fit.
    lo = spec.r_max / 10.0
    mask = traj.r >= lo
    r_dec, u_dec = traj.r[mask], traj.u[mask]
    du_dec = _du_from_w(r_dec, traj.w[mask], spec.params)
    if len(r_dec) < 8:
        r_fill = np.geomspace(lo, traj.r[-1], 64)
        u_dec, du_dec, _ = traj.sample(spec.params, r_fill)
        r_dec = r_fill
    if np.all(u_dec > 0) and np.all(du_dec < 0):
        slope = float(np.polyfit(np.log(r_dec), np.log(u_dec), 1)[0])
        return Outcome(OutcomeKind.POSITIVE_DECAYING, tail_slope=slope)
    if np.all(u_dec > 0):
        return Outcome(
            OutcomeKind.INDETERMINATE, reason="u positive but not monotone in final decade"
        )
    return Outcome(
        OutcomeKind.INDETERMINATE, reason="sign behavior unresolved in final decade"
    )


def decay_slope_report(traj: Trajectory, spec: IvpSpec, slope_tol: float = 0.05) -> IdentityReport:
    """Final-decade log-log slopes of u and |u'| against the decay exponents.

    Targets: slope(u) <= (gamma+p)/(p-1-q), slope(|u'|) <= (gamma+q+1)/(p-1-q)
    (both negative for q > p - 1).
    """
    outcome = classify_outcome(traj, spec)
    if outcome.kind is not OutcomeKind.POSITIVE_DECAYING:
        raise NotDecaying(f"trajectory classified {outcome.label}, not positive_decaying")
    pr = spec.params
    target_u = (pr.gamma + pr.p) / (pr.p - 1.0 - pr.q)
    target_du = (pr.gamma + pr.q + 1.0) / (pr.p - 1.0 - pr.q)
    r_fit = np.geomspace(spec.r_max / 10.0, traj.r[-1], 64)
    u_fit, du_fit, _ = traj.sample(pr, r_fit)
    slope_u = float(np.polyfit(np.log(r_fit), np.log(u_fit), 1)[0])
    slope_du = float(np.polyfit(np.log(r_fit), np.log(np.abs(du_fit)), 1)[0])
    excess = max(slope_u - target_u, slope_du - target_du)
    return IdentityReport(
        label="decay_slopes",
        lhs=slope_u,
        rhs=slope_du,
        residual=excess,
        scale=1.0,
        tol=slope_tol,
        passed=excess <= slope_tol,
        note=f"targets: slope(u) <= {target_u:.6g}, slope(|u'|) <= {target_du:.6g}",
    )


# ---------------------------------------------------------------------------
# Quadrature along the dense trajectory
# ---------------------------------------------------------------------------

def _series_head(spec: IvpSpec, power: float) -> float:
    """int_0^delta0 r^{N-1+gamma} |u|^power dr from the two-term origin series."""
    pr = spec.params
    sgn = float(spec.sign.value)
    ku, s = series_coefficients(spec)
    d = spec.delta0
    lead = spec.u0 ** power * d ** (pr.n_dim + pr.gamma) / (pr.n_dim + pr.gamma)
    corr = (
        sgn
        * power
        * spec.u0 ** (power - 1.0)
        * ku
        * d ** (pr.n_dim + pr.gamma + s)
        / (pr.n_dim + pr.gamma + s)
    )
    return lead + corr


def _gl_panel(traj: Trajectory, spec: IvpSpec, a: float, b: float, power: float, signed: bool) -> float:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    pts = mid + half * _GL_X
    u = np.atleast_2d(traj.result.sol(pts))[:, 0]
    pr = spec.params
    uq = np.sign(u) * np.abs(u) ** power if signed else np.abs(u) ** power
    vals = pts ** (pr.n_dim - 1.0 + pr.gamma) * uq
    return half * float(_GL_W @ vals)


def _cumulative_integral(traj: Trajectory, spec: IvpSpec, power: float, signed: bool) -> np.ndarray:
    """int_0^{r_i} r^{N-1+gamma} u^power dr at every node (series head + panels)."""
    out = np.empty_like(traj.r)
    acc = _series_head(spec, power)
    out[0] = acc
    for i in range(len(traj.r) - 1):
        acc += _gl_panel(traj, spec, traj.r[i], traj.r[i + 1], power, signed)
        out[i + 1] = acc
    return out


def conservation_report(traj: Trajectory, spec: IvpSpec, tol_factor: float = 10.0) -> IdentityReport:
    """w(r) -+ a int_0^r s^{N-1+gamma} u^q ds = 0 at every node.

    The check's quadrature samples the dense interpolant (locally 4th
    order), so its own error floor is ~rtol^{4/5}, not rtol; the tolerance
    is tol_factor * rtol^{4/5}.  Nodes where w has not yet grown past the
    accumulated absolute allowance (10 * atol) are judged absolutely --
    near the origin w ~ r^{N+gamma} sits below atol and a relative
    comparison there only measures the integrator's (permitted) noise.
    """
    pr = spec.params
    sgn = float(spec.sign.value)
    integral = _cumulative_integral(traj, spec, pr.q, signed=True)
    resid = np.abs(traj.w - sgn * pr.amplitude * integral)
    scale = np.maximum(np.abs(traj.w), pr.amplitude * np.abs(integral))
    scale = np.maximum(scale, spec.atol)
    excess = np.maximum(resid - 10.0 * spec.atol, 0.0) / scale
    worst = float(np.max(excess))
    i_worst = int(np.argmax(excess))
    tol = tol_factor * spec.rtol ** 0.8
    return IdentityReport(
        label="w_conservation",
        lhs=float(traj.w[i_worst]),
        rhs=float(sgn * pr.amplitude * integral[i_worst]),
        residual=worst,
        scale=1.0,
        tol=tol,
        passed=worst <= tol,
        note=f"max relative defect over {len(traj.r)} nodes, at r={traj.r[i_worst]:.6g}",
    )


def pohozaev_residual(
    traj: Trajectory, spec: IvpSpec, r_eval: float, tol: float = 1e-6
) -> IdentityReport:
    """Radial Pohozaev identity at R = r_eval; needs u > 0 on [0, r_eval].

    residual = LHS - RHS with scale = max(|LHS|, |RHS|, a * integral), so the
    critical case (vanishing coefficient) stays well-scaled.
    """
    if spec.sign is not EquationSign.MINUS:
        raise RegimeError("Pohozaev identity is stated for the minus equation")
    if not (traj.r[0] <= r_eval <= traj.r[-1]):
        raise RangeError(f"r_eval={r_eval} outside integrated range [{traj.r[0]}, {traj.r[-1]}]")
    if traj.r_cross is not None and r_eval >= traj.r_cross:
        raise CrossedZero(f"u changes sign at r={traj.r_cross:.6g} <= r_eval")

    pr = spec.params
    coeff = pohozaev_coefficient(pr)

    j = int(np.searchsorted(traj.r, r_eval, side="right")) - 1
    j = min(max(j, 0), len(traj.r) - 2)
    integral = float(_cumulative_integral(traj, spec, pr.q + 1.0, signed=False)[j])
    if r_eval > traj.r[j]:
        integral += _gl_panel(traj, spec, traj.r[j], r_eval, pr.q + 1.0, signed=False)

    u_arr, du_arr, _ = traj.sample(pr, r_eval)
    u, du = float(u_arr[0]), float(du_arr[0])
    n, p, q, a = pr.n_dim, pr.p, pr.q, pr.amplitude
    flux_term = -(n - p) * _odd_pow(du, p - 1.0) * u * r_eval ** (n - 1.0)
    grad_term = (1.0 - p) * abs(du) ** p * r_eval ** float(n)
    pot_term = -(a * p / (q + 1.0)) * r_eval ** (pr.gamma + n) * abs(u) ** (q + 1.0)
    lhs = a * coeff * integral
    rhs = flux_term + grad_term + pot_term
    scale = max(abs(lhs), abs(rhs), a * integral, 1e-300)
    residual = lhs - rhs
    return IdentityReport(
        label="pohozaev_radial",
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        scale=scale,
        tol=tol,
        passed=abs(residual) <= tol * scale,
        note=f"flux={flux_term:.6e} grad={grad_term:.6e} potential={pot_term:.6e}",
    )


# ---------------------------------------------------------------------------
# Scaling covariance and sweeps
# ---------------------------------------------------------------------------

def scaling_exponent(params: ProblemParams) -> float:
    """kappa = (p+gamma)/(q-p+1): u_s(r) = s^kappa u(sr) solves the same equation."""
    return (params.p + params.gamma) / (params.q - params.p + 1.0)


def rescaled_spec(spec: IvpSpec, lam: float) -> IvpSpec:
    """The shooting problem whose solution should equal lam^kappa u(lam r)."""
    kappa = scaling_exponent(spec.params)
    return IvpSpec(
        params=spec.params,
        u0=lam ** kappa * spec.u0,
        sign=spec.sign,
        r_max=spec.r_max / lam,
        rtol=spec.rtol,
        atol=spec.atol,
        delta0=spec.delta0 / lam,
    )


def scaling_covariance_report(
    spec: IvpSpec, lam: float = 2.0, n_samples: int = 40, tol: float = 1e-6
) -> IdentityReport:
    """Compare lam^kappa u(lam r) against the rescaled shot, max rel error."""
    traj = integrate_ivp(spec)
    spec2 = rescaled_spec(spec, lam)
    traj2 = integrate_ivp(spec2)
    kappa = scaling_exponent(spec.params)
    # overlap range, clear of both hand-off radii and both endpoints
    lo = 10.0 * max(traj.r[0] / lam, traj2.r[0])
    hi = 0.99 * min(traj.r[-1] / lam, traj2.r[-1])
    if hi <= lo:
        raise RangeError("trajectories do not overlap after rescaling")
    r = np.geomspace(lo, hi, n_samples)
    u_base, _, _ = traj.sample(spec.params, lam * r)
    u_resc, _, _ = traj2.sample(spec.params, r)
    # keep clear of an approaching zero crossing, where the relative error
    # denominator collapses while the absolute error stays at integrator level
    amp = float(np.max(np.abs(u_resc)))
    mask = np.abs(u_resc) >= 0.01 * amp
    r, u_base, u_resc = r[mask], u_base[mask], u_resc[mask]
    predicted = lam ** kappa * u_base
    rel = np.abs(predicted - u_resc) / np.maximum(np.abs(u_resc), spec.atol)
    worst = float(np.max(rel))
    return IdentityReport(
        label="scaling_covariance",
        lhs=float(predicted[np.argmax(rel)]),
        rhs=float(u_resc[np.argmax(rel)]),
        residual=worst,
        scale=1.0,
        tol=tol,
        passed=worst <= tol,
        note=f"lam={lam}, kappa={kappa:.6g}, {n_samples} overlap samples",
    )


def sweep_outcomes(specs, max_workers: int | None = None):
    """Classify a batch of specs; order-preserving, deterministic per point."""
    def one(spec: IvpSpec) -> Outcome:
        return classify_outcome(integrate_ivp(spec), spec)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as ex:
            return list(ex.map(one, specs))
    return [one(s) for s in specs]
