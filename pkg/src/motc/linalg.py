"""Dense complex matrix kernel.

Hermitian eigendecomposition, unitary exponential/logarithm, linear solves,
singular values, and the real Hermitian-basis vectorization used by the
gradient and Gramian machinery.  Everything is a pure function over numpy
arrays; LAPACK (via numpy/scipy) does the heavy lifting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import BranchBoundaryError, ConvergenceError, SingularMatrixError

# Distance of a unitary-log eigenphase to +-pi below which we refuse to pick
# a branch.  The principal branch is the open interval (-pi, pi).
BRANCH_TOL = 1e-6

# Relative singular-value cutoff of the truncated pseudo-inverse used by
# regularized solves.
REGULARIZED_CUTOFF = 1e-12


def require_finite(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m)
    if not np.all(np.isfinite(m.view(float) if np.iscomplexobj(m) else m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def require_hermitian(m: np.ndarray, tol: float = 1e-12, name: str = "matrix") -> np.ndarray:
    m = require_finite(m, name)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise ValueError(f"{name} is not Hermitian (max deviation {dev:.3e} > {tol:.1e})")
    return m


def require_unitary(v: np.ndarray, tol: float = 1e-8, name: str = "matrix") -> np.ndarray:
    v = require_finite(v, name)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise ValueError(f"{name} must be square, got shape {v.shape}")
    dev = np.linalg.norm(v.conj().T @ v - np.eye(v.shape[0]))
    if dev > tol:
        raise ValueError(f"{name} is not unitary (||V^dag V - I||_F = {dev:.3e} > {tol:.1e})")
    return v


@dataclass(frozen=True)
class EigDecomposition:
    """Hermitian eigendecomposition H = V diag(w) V^dag, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def eig_hermitian(h: np.ndarray) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending."""
    h = require_hermitian(h, name="H")
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise ConvergenceError(
            f"Hermitian eigensolver did not converge (||H||_F = {np.linalg.norm(h):.3e})"
        ) from exc
    return EigDecomposition(eigenvalues=w, eigenvectors=v)


def expi_hermitian(h: np.ndarray, theta: float = 1.0) -> np.ndarray:
    """exp(-i * theta * H) for Hermitian H, unitary by construction."""
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    dec = eig_hermitian(h)
    phase = np.exp(-1j * theta * dec.eigenvalues)
    return (dec.eigenvectors * phase) @ dec.eigenvectors.conj().T


def log_unitary_principal(v: np.ndarray, branch_tol: float = BRANCH_TOL) -> np.ndarray:
    """Hermitian A = -i log(V) on the principal branch, so V = exp(iA).

    All eigenphases of V are mapped into (-pi, pi).  An eigenphase within
    ``branch_tol`` of +-pi raises :class:`BranchBoundaryError`; the caller
    should perturb the input or re-seed.
    """
    v = require_unitary(v, name="V")
    # A unitary matrix is normal, so its complex Schur form is diagonal and
    # the Schur vectors are orthonormal (unlike raw eigenvectors from geev).
    t, z = scipy.linalg.schur(v.astype(complex), output="complex")
    phases = np.angle(np.diag(t))
    if np.any(np.pi - np.abs(phases) < branch_tol):
        worst = phases[np.argmax(np.abs(phases))]
        raise BranchBoundaryError(
            f"eigenphase {worst:+.8f} within {branch_tol:.1e} of the +-pi branch cut"
        )
    return (z * phases) @ z.conj().T


def solve_linear(
    m: np.ndarray,
    b: np.ndarray,
    mode: str = "strict",
    cutoff: float = REGULARIZED_CUTOFF,
) -> np.ndarray:
    """Solve M x = b.

    ``strict`` uses an LU factorization and raises
    :class:`SingularMatrixError` on an exactly singular matrix.
    ``regularized`` replaces the inverse with a truncated-singular-value
    pseudo-inverse at relative cutoff ``cutoff``.
    """
    m = require_finite(m, "M")
    b = np.asarray(b)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"M must be square, got shape {m.shape}")
    if mode == "strict":
        try:
            return np.linalg.solve(m, b)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError(
                f"singular matrix in strict solve (condition ~ {condition_number(m):.3e})",
                condition=condition_number(m),
            ) from exc
    if mode == "regularized":
        u, s, vt = np.linalg.svd(m)
        keep = s > cutoff * (s[0] if s.size else 0.0)
        s_inv = np.zeros_like(s)
        s_inv[keep] = 1.0 / s[keep]
        return vt.T @ (s_inv[:, None] * (u.T.conj() @ b) if b.ndim > 1 else s_inv * (u.T.conj() @ b))
    raise ValueError(f"unknown solve mode {mode!r}")


def condition_number(m: np.ndarray) -> float:
    """sigma_max / sigma_min, with +inf when sigma_min underflows to nothing."""
    m = require_finite(m, "M")
    s = np.linalg.svd(np.atleast_2d(m), compute_uv=False)
    if s.size == 0 or s[0] == 0.0 or s[-1] < 1e-300 * s[0]:
        return float("inf")
    return float(s[0] / s[-1])


# ---------------------------------------------------------------------------
# Real Hermitian-basis vectorization.
#
# Orthonormal basis of the N^2-dimensional real vector space of Hermitian
# matrices: diagonal units E_kk, symmetric pairs (E_ij + E_ji)/sqrt(2) and
# antisymmetric pairs i(E_ij - E_ji)/sqrt(2) for i < j.  Coordinates of a
# Hermitian M are (diag(M), sqrt(2) Re M_ij, sqrt(2) Im M_ij); the map is an
# isometry for the Frobenius norm, which keeps Gram matrices real and their
# condition numbers unambiguous.
# ---------------------------------------------------------------------------


def herm_to_vec(m: np.ndarray) -> np.ndarray:
    """Real coordinates of Hermitian matrices; batched over leading axes."""
    m = np.asarray(m)
    n = m.shape[-1]
    iu, ju = np.triu_indices(n, 1)
    diag = m[..., np.arange(n), np.arange(n)].real
    off = m[..., iu, ju]
    return np.concatenate(
        [diag, np.sqrt(2.0) * off.real, np.sqrt(2.0) * off.imag], axis=-1
    )


def vec_to_herm(x: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`herm_to_vec` for a single coordinate vector."""
    x = np.asarray(x, dtype=float)
    if x.shape != (n * n,):
        raise ValueError(f"expected coordinate vector of length {n * n}, got {x.shape}")
    iu, ju = np.triu_indices(n, 1)
    k = iu.size
    m = np.zeros((n, n), dtype=complex)
    m[np.arange(n), np.arange(n)] = x[:n]
    off = (x[n : n + k] + 1j * x[n + k :]) / np.sqrt(2.0)
    m[iu, ju] = off
    m[ju, iu] = off.conj()
    return m
