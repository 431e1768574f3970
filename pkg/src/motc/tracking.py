"""Homotopy tracking: geodesic targets, Gramians, and tracking field updates.

Tracking turns "follow a prescribed path" into an initial value problem in
algorithmic time s.  For m observables with expectation path w_s, expanding
d eps/d s on the basis of the observable gradients a^i(t) and enforcing
d Phi/d s = d w/d s gives

    d eps_s(t)/d s = f_s(t) + [dw/ds + c_s - int a f dt']^T Gamma^{-1} a_s(t),

with the Gramian (Gamma)_ij = int a^i a^j dt, the free function f choosing
among the solution family, and an optional error-correction term c_s pulling
the actual expectations back onto the track.  Unitary-propagator tracking is
the same construction over the N^2 dipole basis functions with Gramian G.

All time integrals are trapezoidal sums on the propagation grid; because the
gradient samples are exact derivatives of the discrete dynamics divided by
the quadrature weights, the discrete chain rule d Phi/d s = sum_j w_j a_j
(d eps_j/d s) holds exactly and first-order tracking consistency is limited
only by O(ds^2) terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dynamics import ControlField, PropagationResult, StateSpec, expectations
from .errors import SingularTrackError
from .landscape import ObservableSet, dipole_component_matrix, single_observable_gradients
from .linalg import (
    condition_number,
    herm_to_vec,
    log_unitary_principal,
    require_unitary,
    solve_linear,
)

# Above this condition number, Gramian solves switch from LU to the
# truncated-SVD pseudo-inverse (relative cutoff 1e-12).
STRICT_SOLVE_CAP = 1e10
# Observable-tracking Gramians beyond this cap abort with SingularTrackError.
MOTC_HARD_CAP = 1e14
# Residual fraction above which a (regularized) unitary-tracking solve is
# considered to have no usable solution at all.
RESIDUAL_CAP = 0.9


@dataclass(frozen=True)
class GramianReport:
    """Symmetric PSD Gramian with its singular values and condition number."""

    matrix: np.ndarray
    singular_values: np.ndarray
    condition: float
    _u: np.ndarray = field(repr=False, default=None)
    _vt: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class CorrectionSpec:
    """Tracking error correction: c_s = beta (w_s - Phi_s) for observable
    tracks, c_s = beta (-i log(U_s^dag(T) Q_s)) for unitary tracks."""

    enabled: bool = False
    beta: float = 10.0


@dataclass(frozen=True, eq=False)
class TrackTarget:
    """A prescribed path over s in [0, 1], either in U(N) or in R^m.

    Unitary kind: Q_s = U0 exp(iAs) with generator A = -i log(U0^dag W), so
    Q_0 = U0 and Q_1 = W; dQ/ds = Q_s (iA).  Observable kind: the path w_s
    and its derivative as callables on s.
    """

    kind: str
    m: int
    u0: np.ndarray | None = None
    w_final: np.ndarray | None = None
    generator: np.ndarray | None = None
    q_of_s: Callable[[float], np.ndarray] | None = None
    dq_ds: Callable[[float], np.ndarray] | None = None
    w_of_s: Callable[[float], np.ndarray] | None = None
    dw_ds: Callable[[float], np.ndarray] | None = None


def geodesic_target_unitary(u0: np.ndarray, w: np.ndarray) -> TrackTarget:
    """Geodesic track Q_s from U0 to W in U(N).

    The generator is oriented so the endpoints close: A = -i log(U0^dag W)
    and Q_s = U0 exp(iAs) gives Q_1 = W exactly.
    """
    u0 = require_unitary(np.asarray(u0, complex), name="U0")
    w = require_unitary(np.asarray(w, complex), name="W")
    a = log_unitary_principal(u0.conj().T @ w)
    wa, va = np.linalg.eigh(a)
    vah = va.conj().T

    def q_of_s(s: float) -> np.ndarray:
        return u0 @ ((va * np.exp(1j * s * wa)) @ vah)

    def dq_ds(s: float) -> np.ndarray:
        return u0 @ ((va * (1j * wa * np.exp(1j * s * wa))) @ vah)

    return TrackTarget(
        kind="unitary", m=u0.shape[0] ** 2, u0=u0, w_final=w, generator=a,
        q_of_s=q_of_s, dq_ds=dq_ds,
    )


def geodesic_target_observables(
    u0: np.ndarray, w: np.ndarray, state: StateSpec, oset: ObservableSet
) -> TrackTarget:
    """Expectation-value path induced by the geodesic from U0 to W.

    w_s^k = Tr(rho(0) M_k(s)) with M_k(s) = e^{-iAs} U0^dag Theta_k U0 e^{iAs},
    and dw_s^k/ds = i Tr(rho(0) [M_k(s), A]) by commutator differentiation.
    """
    u0 = require_unitary(np.asarray(u0, complex), name="U0")
    w = require_unitary(np.asarray(w, complex), name="W")
    a = log_unitary_principal(u0.conj().T @ w)
    wa, va = np.linalg.eigh(a)
    vah = va.conj().T
    kern = np.einsum("ba,kbc,cd->kad", u0.conj(), oset.operators, u0)
    rho = state.rho0

    def frame(s: float) -> np.ndarray:
        e = (va * np.exp(1j * s * wa)) @ vah
        return np.einsum("ba,kbc,cd->kad", e.conj(), kern, e)

    def w_of_s(s: float) -> np.ndarray:
        return np.einsum("kab,ba->k", frame(s), rho).real

    def dw_ds(s: float) -> np.ndarray:
        m = frame(s)
        comm = m @ a - a @ m
        return (1j * np.einsum("kab,ba->k", comm, rho)).real

    return TrackTarget(
        kind="observable", m=oset.m, u0=u0, w_final=w, generator=a,
        w_of_s=w_of_s, dw_ds=dw_ds,
    )


def linear_target_observables(phi_start: np.ndarray, phi_target: np.ndarray) -> TrackTarget:
    """Straight-line path w_s = (1 - s) Phi_0 + s Phi_target in R^m."""
    p0 = np.asarray(phi_start, float)
    p1 = np.asarray(phi_target, float)
    if p0.shape != p1.shape or p0.ndim != 1:
        raise ValueError("phi_start and phi_target must be matching vectors")

    return TrackTarget(
        kind="observable", m=p0.size,
        w_of_s=lambda s: (1.0 - s) * p0 + s * p1,
        dw_ds=lambda s: p1 - p0,
    )


def motc_a_vector(prop: PropagationResult, state: StateSpec, oset: ObservableSet) -> np.ndarray:
    """(m, q) matrix a_s^i(t_j) = d Phi^i / d eps(t_j), unit weights."""
    return single_observable_gradients(prop, state, oset)


def _report_from_gram(g: np.ndarray) -> GramianReport:
    g = 0.5 * (g + g.T)
    u, s, vt = np.linalg.svd(g)
    if s.size == 0 or s[0] == 0.0 or s[-1] < 1e-300 * s[0]:
        cond = float("inf")
    else:
        cond = float(s[0] / s[-1])
    return GramianReport(matrix=g, singular_values=s, condition=cond, _u=u, _vt=vt)


def gramian_motc(a: np.ndarray, weights: np.ndarray) -> GramianReport:
    """MOTC Gramian (Gamma)_ij = int a^i(t) a^j(t) dt by trapezoid quadrature."""
    a = np.asarray(a, float)
    if a.ndim != 2 or a.shape[1] != np.asarray(weights).size:
        raise ValueError("a must be (m, q) with one column per quadrature node")
    return _report_from_gram((a * weights[None, :]) @ a.T)


def gramian_unitary(prop: PropagationResult) -> GramianReport:
    """Unitary-tracking Gramian G: the N^2 x N^2 Gram matrix of the dipole
    basis functions in the real Hermitian parameterization."""
    b = dipole_component_matrix(prop)
    return _report_from_gram((b * prop.weights[:, None]).T @ b)


def free_function_min_fluence(field_or_samples, eta: float, w: np.ndarray) -> np.ndarray:
    """Minimal-fluence free function f_s(t) = -(1/eta) eps_s(t) w(t)."""
    eps = field_or_samples.samples if isinstance(field_or_samples, ControlField) else np.asarray(field_or_samples, float)
    w = np.asarray(w, float)
    if not eta > 0:
        raise ValueError("eta must be positive")
    if w.shape != eps.shape or np.any(w <= 0):
        raise ValueError("weight w must be positive and match the field length")
    return -(eps * w) / eta


def solve_gramian(report: GramianReport, b: np.ndarray, hard_cap: float | None = None) -> np.ndarray:
    """Solve Gramian x = b under the conditioning policy.

    LU below `STRICT_SOLVE_CAP`; truncated-SVD pseudo-inverse above it;
    SingularTrackError beyond ``hard_cap`` (when given).
    """
    if hard_cap is not None and not (report.condition <= hard_cap):
        raise SingularTrackError(
            f"Gramian condition {report.condition:.3e} beyond cap {hard_cap:.1e}",
            condition=report.condition,
        )
    if report.condition <= STRICT_SOLVE_CAP:
        return solve_linear(report.matrix, b, mode="strict")
    s = report.singular_values
    keep = s > 1e-12 * s[0]
    coeff = np.zeros_like(s)
    proj = report._u.T @ b
    coeff[keep] = proj[keep] / s[keep]
    return report._vt.T @ coeff


def motc_rhs(
    prop: PropagationResult,
    state: StateSpec,
    oset: ObservableSet,
    target: TrackTarget,
    s: float,
    free: np.ndarray | None = None,
    correction: CorrectionSpec | None = None,
) -> np.ndarray:
    """d eps/d s for multiobservable tracking at algorithmic time s."""
    if target.kind != "observable":
        raise ValueError("motc_rhs requires an observable-kind target")
    if target.m != oset.m:
        raise ValueError(f"target tracks {target.m} observables, set has {oset.m}")
    a = motc_a_vector(prop, state, oset)
    wq = prop.weights
    f = np.zeros(prop.q) if free is None else np.asarray(free, float)
    if f.shape != (prop.q,):
        raise ValueError("free function must have one sample per grid node")
    dw = target.dw_ds(s)
    if correction is not None and correction.enabled:
        phi = expectations(prop, state, oset)
        dw = dw + correction.beta * (target.w_of_s(s) - phi)
    gam = gramian_motc(a, wq)
    x = solve_gramian(gam, dw - a @ (wq * f), hard_cap=MOTC_HARD_CAP)
    return x @ a + f


def unitary_rhs(
    prop: PropagationResult,
    target: TrackTarget,
    s: float,
    free: np.ndarray | None = None,
    correction: CorrectionSpec | None = None,
) -> np.ndarray:
    """d eps/d s for unitary-propagator tracking at algorithmic time s.

    The track derivative is mapped into the tangent frame at U_s(T):
    Delta_s = Herm(-i U_s^dag(T) dQ_s/ds), whose real coordinates the dipole
    basis must reproduce.  G is routinely ill-conditioned, so solves above
    the strict cap use the truncated pseudo-inverse; there is no hard
    condition cap (a cap would reject essentially every propagation).
    """
    if target.kind != "unitary":
        raise ValueError("unitary_rhs requires a unitary-kind target")
    u = prop.final
    uh = u.conj().T
    delta = -1j * (uh @ target.dq_ds(s))
    delta = 0.5 * (delta + delta.conj().T)
    if correction is not None and correction.enabled:
        delta = delta + correction.beta * log_unitary_principal(uh @ target.q_of_s(s))
    b = dipole_component_matrix(prop)
    wq = prop.weights
    f = np.zeros(prop.q) if free is None else np.asarray(free, float)
    if f.shape != (prop.q,):
        raise ValueError("free function must have one sample per grid node")
    rhs_vec = herm_to_vec(delta) - b.T @ (wq * f)
    g = gramian_unitary(prop)
    x = solve_gramian(g, rhs_vec, hard_cap=None)
    scale = np.linalg.norm(rhs_vec)
    if scale > 0:
        residual = np.linalg.norm(g.matrix @ x - rhs_vec) / scale
        if residual > RESIDUAL_CAP:
            raise SingularTrackError(
                f"unitary track unreachable: solve residual {residual:.2f} "
                f"(G condition {g.condition:.3e})",
                condition=g.condition,
            )
    return b @ x + f
