"""Algorithmic-time integrators for field-update flows, plus a line search.

The integrators drive a right-hand side mapping (s, ControlField) to the
field derivative d eps/d s.  `euler_integrate` is the fixed-step linear
update scheme; `rkck_adaptive` is the embedded Cash-Karp Runge-Kutta 4(5)
pair with step-size control from the difference between the fourth- and
fifth-order estimates.  Both are deterministic: identical problems produce
bit-identical step sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dynamics import ControlField
from .errors import NoBracketError, StallError

# Cash-Karp tableau.
_CK_C = np.array([0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8])
_CK_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([3 / 10, -9 / 10, 6 / 5]),
    np.array([-11 / 54, 5 / 2, -70 / 27, 35 / 27]),
    np.array([1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096]),
]
_CK_B5 = np.array([37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771])
_CK_B4 = np.array([2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4])

_SAFETY = 0.9
_GROWTH_CAP = 5.0
_SHRINK_CAP = 0.1


@dataclass(frozen=True)
class FlowProblem:
    """A field-update flow over an s interval with error targets.

    ``clamp_at_ds_min`` selects what happens when the controller wants a
    step below ``ds_min``: abort with StallError (default), or march at the
    floor accepting the local error (the regime where ds_min is chosen as
    the largest value permitting stable integration, with tracking error
    handled by the correction term).
    """

    rhs: Callable[[float, ControlField], np.ndarray]
    s_span: tuple[float, float]
    initial: ControlField
    atol: float = 1e-6
    rtol: float = 1e-6
    ds_min: float = 1e-6
    ds_max: float = 0.1
    clamp_at_ds_min: bool = False

    def __post_init__(self):
        s0, s1 = self.s_span
        if not s1 > s0:
            raise ValueError("s_span must satisfy s1 > s0")
        if not (self.atol > 0 and self.rtol > 0):
            raise ValueError("tolerances must be positive")
        if not 0 < self.ds_min <= self.ds_max:
            raise ValueError("need 0 < ds_min <= ds_max")


@dataclass
class IntegrationReport:
    """Step accounting and the accepted (s, field) trajectory."""

    accepted_steps: int
    rejected_steps: int
    rhs_evaluations: int
    s_values: np.ndarray
    fields: np.ndarray
    stopped_early: bool = False

    @property
    def final_field(self) -> ControlField:
        return ControlField(self.fields[-1])


Observer = Callable[[float, ControlField], bool | None]


def euler_integrate(
    problem: FlowProblem, ds: float, observer: Observer | None = None
) -> IntegrationReport:
    """Fixed-step forward Euler: eps <- eps + ds * rhs(s, eps).

    The observer (if any) is called after every accepted step; returning
    True stops the integration early.
    """
    if ds <= 0:
        raise ValueError("ds must be positive")
    s0, s1 = problem.s_span
    y = problem.initial.samples.copy()
    s_values, fields = [s0], [y.copy()]
    s, n_eval, stopped = s0, 0, False
    while s < s1 - 1e-14:
        h = min(ds, s1 - s)
        dy = problem.rhs(s, ControlField(y))
        n_eval += 1
        y = y + h * dy
        s = s + h
        s_values.append(s)
        fields.append(y.copy())
        if observer is not None and observer(s, ControlField(y)):
            stopped = True
            break
    return IntegrationReport(
        accepted_steps=len(s_values) - 1,
        rejected_steps=0,
        rhs_evaluations=n_eval,
        s_values=np.array(s_values),
        fields=np.array(fields),
        stopped_early=stopped,
    )


def rkck_adaptive(
    problem: FlowProblem,
    ds_init: float | None = None,
    observer: Observer | None = None,
    max_steps: int = 100_000,
) -> IntegrationReport:
    """Adaptive Cash-Karp embedded Runge-Kutta 4(5) over the s interval.

    Per-component errors are scaled by atol + rtol |eps| and combined in an
    RMS norm; a step is accepted when the scaled error is at most 1.  The
    next step is safety * err^(-1/5) times the current one, clamped to
    [ds_min, ds_max] with growth at most 5x.  A required step below ds_min
    raises StallError.
    """
    s0, s1 = problem.s_span
    y = problem.initial.samples.copy()
    h = min(problem.ds_max, ds_init if ds_init is not None else 0.01, s1 - s0)
    h = max(h, problem.ds_min)
    s_values, fields = [s0], [y.copy()]
    s, acc, rej, n_eval, stopped = s0, 0, 0, 0, False
    k = [None] * 6
    while s < s1 - 1e-14:
        h = min(h, s1 - s)
        k[0] = problem.rhs(s, ControlField(y))
        n_eval += 1
        for i in range(1, 6):
            yi = y + h * sum(a * k[j] for j, a in enumerate(_CK_A[i]))
            k[i] = problem.rhs(s + _CK_C[i] * h, ControlField(yi))
            n_eval += 1
        y5 = y + h * sum(b * ki for b, ki in zip(_CK_B5, k))
        y4 = y + h * sum(b * ki for b, ki in zip(_CK_B4, k))
        scale = problem.atol + problem.rtol * np.abs(y)
        err = float(np.sqrt(np.mean(((y5 - y4) / scale) ** 2)))
        at_floor = h <= problem.ds_min * (1 + 1e-12)
        if err <= 1.0 or (at_floor and problem.clamp_at_ds_min):
            s = s + h
            y = y5
            acc += 1
            s_values.append(s)
            fields.append(y.copy())
            if observer is not None and observer(s, ControlField(y)):
                stopped = True
                break
            factor = _GROWTH_CAP if err == 0.0 else min(_GROWTH_CAP, _SAFETY * err ** (-0.2))
        else:
            rej += 1
            factor = max(_SHRINK_CAP, _SAFETY * err ** (-0.2))
        h_new = h * factor
        if h_new < problem.ds_min:
            if err > 1.0 and not problem.clamp_at_ds_min:
                raise StallError(
                    f"step below ds_min = {problem.ds_min:.1e} at s = {s:.6f} "
                    f"(scaled error {err:.3e})",
                    s=s,
                    error_estimate=err,
                )
            h_new = problem.ds_min
        h = min(h_new, problem.ds_max)
        if acc + rej >= max_steps:
            break
    return IntegrationReport(
        accepted_steps=acc,
        rejected_steps=rej,
        rhs_evaluations=n_eval,
        s_values=np.array(s_values),
        fields=np.array(fields),
        stopped_early=stopped,
    )


def brent_line_search(
    objective: Callable[[float], float],
    bracket_seed: float,
    xtol_rel: float = 1e-4,
    max_evals: int = 100,
) -> float:
    """Step length minimizing a scalar objective along a ray.

    Brackets a minimum starting from steps (0, bracket_seed) by parabolic
    extrapolation with golden-ratio growth, then pinpoints it with Brent's
    inverse parabolic interpolation.  Raises NoBracketError if the objective
    is monotone over the probed range.
    """
    if bracket_seed <= 0:
        raise ValueError("bracket_seed must be positive")
    gold = 1.618033988749895
    glimit = 100.0
    evals = 0

    def f(x: float) -> float:
        nonlocal evals
        evals += 1
        val = float(objective(x))
        if not np.isfinite(val):
            raise ValueError(f"objective not finite at step {x!r}")
        return val

    # -- bracketing (downhill parabolic extrapolation) --
    ax, bx = 0.0, float(bracket_seed)
    fa, fb = f(ax), f(bx)
    if fb > fa:
        ax, bx, fa, fb = bx, ax, fb, fa
    cx = bx + gold * (bx - ax)
    fc = f(cx)
    while fb >= fc:
        if evals >= max_evals // 2:
            raise NoBracketError(
                f"no bracket after {evals} evaluations (objective monotone on the probed ray)"
            )
        r = (bx - ax) * (fb - fc)
        qq = (bx - cx) * (fb - fa)
        denom = 2.0 * np.copysign(max(abs(qq - r), 1e-21), qq - r)
        u = bx - ((bx - cx) * qq - (bx - ax) * r) / denom
        ulim = bx + glimit * (cx - bx)
        if (bx - u) * (u - cx) > 0.0:
            fu = f(u)
            if fu < fc:
                ax, bx, fa, fb = bx, u, fb, fu
                break
            if fu > fb:
                cx, fc = u, fu
                break
            u = cx + gold * (cx - bx)
            fu = f(u)
        elif (cx - u) * (u - ulim) > 0.0:
            fu = f(u)
            if fu < fc:
                bx, cx = cx, u
                fb, fc = fc, fu
                u = cx + gold * (cx - bx)
                fu = f(u)
        elif (u - ulim) * (ulim - cx) >= 0.0:
            u = ulim
            fu = f(u)
        else:
            u = cx + gold * (cx - bx)
            fu = f(u)
        ax, bx, cx = bx, cx, u
        fa, fb, fc = fb, fc, fu

    lo, hi = (ax, cx) if ax < cx else (cx, ax)

    # -- Brent minimization on [lo, hi] --
    cgold = 0.381966011250105
    x = w = v = bx
    fx = fw = fv = fb
    d = e = 0.0
    while evals < max_evals:
        xm = 0.5 * (lo + hi)
        tol1 = xtol_rel * abs(x) + 1e-14
        tol2 = 2.0 * tol1
        if abs(x - xm) <= tol2 - 0.5 * (hi - lo):
            return x
        if abs(e) > tol1:
            r = (x - w) * (fx - fv)
            qq = (x - v) * (fx - fw)
            p = (x - v) * qq - (x - w) * r
            qq = 2.0 * (qq - r)
            if qq > 0.0:
                p = -p
            qq = abs(qq)
            etemp = e
            e = d
            if abs(p) >= abs(0.5 * qq * etemp) or p <= qq * (lo - x) or p >= qq * (hi - x):
                e = hi - x if x < xm else lo - x
                d = cgold * e
            else:
                d = p / qq
                u = x + d
                if u - lo < tol2 or hi - u < tol2:
                    d = np.copysign(tol1, xm - x)
        else:
            e = hi - x if x < xm else lo - x
            d = cgold * e
        u = x + d if abs(d) >= tol1 else x + np.copysign(tol1, d)
        fu = f(u)
        if fu <= fx:
            if u >= x:
                lo = x
            else:
                hi = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
        else:
            if u < x:
                lo = u
            else:
                hi = u
            if fu <= fw or w == x:
                v, w = w, u
                fv, fw = fw, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return x
