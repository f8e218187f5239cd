"""Adaptive Dormand-Prince 5(4) with cubic-Hermite dense output and events.

The pair is FSAL: stage 7 of an accepted step is stage 1 of the next, so an
accepted step costs six f evaluations.  Error control is the usual RMS of the
embedded difference against atol + rtol * max(|y0|, |y1|) per component, with
step factor 0.9 * err^(-1/5) clipped to [0.2, 5].

Events are scalar functions g(t, y); a sign change over an accepted step is
refined by bisection on the dense interpolant to ~1e-10 relative in t.  The
integrator never raises on difficult problems: it reports status
"step_collapse" when h underflows (1e-14 * max(|t|, 1)) and "max_steps" when
the step budget runs out, and leaves classification to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

# Butcher tableau (Dormand & Prince, 1980).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3 / 40, 9 / 40, 0.0, 0.0, 0.0, 0.0],
        [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0, 0.0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0, 0.0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0.0],
    ]
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)

_COLLAPSE_FLOOR = 1e-14
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9


@dataclass(frozen=True)
class EventSpec:
    """Root of g(t, y) terminates (or is recorded during) the integration.

    direction > 0 fires only on increasing crossings, < 0 only on decreasing,
    0 on both.
    """

    fn: Callable[[float, np.ndarray], float]
    terminal: bool = True
    direction: int = 0


@dataclass
class IntegrationResult:
    ts: np.ndarray                      # accepted nodes, shape (n+1,)
    ys: np.ndarray                      # states at nodes, shape (n+1, d)
    fs: np.ndarray                      # f at nodes (FSAL byproduct), shape (n+1, d)
    status: str                         # finished | event | step_collapse | max_steps
    event_index: int | None = None
    event_t: float | None = None
    event_y: np.ndarray | None = None
    events_hit: list = field(default_factory=list)   # (index, t, y) incl. non-terminal
    n_steps: int = 0
    n_rejected: int = 0
    n_fev: int = 0

    def sol(self, t):
        """Dense evaluation at scalar or array t inside [ts[0], ts[-1]]."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t_arr < self.ts[0] - 1e-12) or np.any(t_arr > self.ts[-1] * (1 + 1e-12)):
            raise ValueError(
                f"dense output queried outside [{self.ts[0]}, {self.ts[-1]}]"
            )
        idx = np.clip(np.searchsorted(self.ts, t_arr, side="right") - 1, 0, len(self.ts) - 2)
        out = np.empty((t_arr.size, self.ys.shape[1]))
        for j, (ti, i) in enumerate(zip(t_arr, idx)):
            out[j] = _hermite(
                self.ts[i], self.ts[i + 1], self.ys[i], self.ys[i + 1],
                self.fs[i], self.fs[i + 1], ti,
            )
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return out[0]
        return out


def _hermite(t0, t1, y0, y1, f0, f1, t):
    h = t1 - t0
    if h == 0.0:
        return y0.copy()
    th = (t - t0) / h
    h00 = 2 * th**3 - 3 * th**2 + 1
    h10 = th**3 - 2 * th**2 + th
    h01 = -2 * th**3 + 3 * th**2
    h11 = th**3 - th**2
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _initial_step(f, t0, y0, f0, t1, rtol, atol):
    # Hairer-Norsett-Wanner-style cheap guess, clamped to the span.
    sc = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / sc) ** 2))
    d1 = np.sqrt(np.mean((f0 / sc) ** 2))
    h = 1e-6 * (t1 - t0) if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    return min(h, 0.1 * (t1 - t0))


def integrate(
    f: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    y0: Sequence[float],
    rtol: float = 1e-10,
    atol: float = 1e-12,
    first_step: float | None = None,
    max_step: float = np.inf,
    events: Sequence[EventSpec] = (),
    max_steps: int = 2_000_000,
) -> IntegrationResult:
    """Integrate y' = f(t, y) forward from t0 to t1 (t1 > t0)."""
    if t1 <= t0:
        raise ValueError(f"need t1 > t0, got [{t0}, {t1}]")
    y = np.asarray(y0, dtype=float).copy()
    t = t0
    fy = np.asarray(f(t, y), dtype=float)
    n_fev = 1
    h = first_step if first_step is not None else _initial_step(f, t0, y, fy, t1, rtol, atol)
    h = min(h, max_step, t1 - t0)

    ts, ys, fs = [t], [y.copy()], [fy.copy()]
    g_prev = [ev.fn(t, y) for ev in events]
    events_hit: list = []
    n_steps = n_rejected = 0
    status = "finished"
    event_index = None
    event_t = None
    event_y = None
    k = np.empty((7, y.size))

    while t < t1:
        if h < _COLLAPSE_FLOOR * max(abs(t), 1.0):
            status = "step_collapse"
            break
        if n_steps >= max_steps:
            status = "max_steps"
            break
        h = min(h, t1 - t)

        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            k[0] = fy
            bad = False
            for i in range(1, 6):
                yi = y + h * (k[:i].T @ _A[i, :i])
                ki = np.asarray(f(t + _C[i] * h, yi), dtype=float)
                if not np.all(np.isfinite(ki)):
                    bad = True
                    break
                k[i] = ki
            if not bad:
                y_new = y + h * (k[:6].T @ _B5[:6])
                if np.all(np.isfinite(y_new)):
                    f_new = np.asarray(f(t + h, y_new), dtype=float)
                    k[6] = f_new
                    bad = not np.all(np.isfinite(f_new))
                else:
                    bad = True
        n_fev += 6
        if bad:
            n_rejected += 1
            h *= _MIN_FACTOR
            continue

        err_vec = h * (k.T @ (_B5 - _B4))
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((err_vec / sc) ** 2)))

        if err > 1.0:
            n_rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            continue

        # Accepted.
        t_new = t + h
        n_steps += 1
        triggered = []
        for ie, ev in enumerate(events):
            g_new = ev.fn(t_new, y_new)
            g_old = g_prev[ie]
            fire = False
            if g_new == 0.0 and g_old != 0.0:
                fire = True
            elif g_old < 0.0 < g_new and ev.direction >= 0:
                fire = True
            elif g_old > 0.0 > g_new and ev.direction <= 0:
                fire = True
            if fire:
                te, ye = _refine_event(
                    ev.fn, t, t_new, y, y_new, fy, f_new, g_old
                )
                triggered.append((te, ie, ye))
            g_prev[ie] = g_new

        if triggered:
            triggered.sort(key=lambda item: item[0])
            for te, ie, ye in triggered:
                events_hit.append((ie, te, ye))
            te, ie, ye = triggered[0]
            if events[ie].terminal:
                status = "event"
                event_index, event_t, event_y = ie, te, ye
                ts.append(te)
                ys.append(ye)
                fs.append(np.asarray(f(te, ye), dtype=float))
                n_fev += 1
                t, y, fy = te, ye, fs[-1]
                break

        ts.append(t_new)
        ys.append(y_new.copy())
        fs.append(f_new.copy())
        t, y, fy = t_new, y_new, f_new  # FSAL

        factor = _MAX_FACTOR if err == 0.0 else min(_MAX_FACTOR, _SAFETY * err ** -0.2)
        h = min(factor * h, max_step)

    return IntegrationResult(
        ts=np.asarray(ts),
        ys=np.asarray(ys),
        fs=np.asarray(fs),
        status=status,
        event_index=event_index,
        event_t=event_t,
        event_y=event_y,
        events_hit=events_hit,
        n_steps=n_steps,
        n_rejected=n_rejected,
        n_fev=n_fev,
    )


def _refine_event(g, t0, t1, y0, y1, f0, f1, g0, rel_tol=1e-10, max_iter=200):
    """Bisect g(t, herm(t)) = 0 inside one accepted step."""
    a, b = t0, t1
    ga = g0
    if ga == 0.0:  # degenerate: root at left node already handled by caller
        ga = g(a, _hermite(t0, t1, y0, y1, f0, f1, a))
    width_tol = rel_tol * max(abs(t0), abs(t1), 1e-30)
    for _ in range(max_iter):
        if (b - a) <= width_tol:
            break
        mid = 0.5 * (a + b)
        gm = g(mid, _hermite(t0, t1, y0, y1, f0, f1, mid))
        if gm == 0.0:
            a = b = mid
            break
        if (ga < 0) == (gm < 0):
            a, ga = mid, gm
        else:
            b = mid
    te = 0.5 * (a + b)
    return te, _hermite(t0, t1, y0, y1, f0, f1, te)
