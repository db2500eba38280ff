"""Dense complex linear algebra for two-qubit operators.

Everything in this module works on small (2x2 and 4x4) complex matrices in
the fixed computational basis order (|00>, |01>, |10>, |11>).  That ordering
is a global convention of the package: every operator bank, density matrix
and state vector uses it, so Kronecker products compose qubit 1 (left
factor) with qubit 2 (right factor) without any reindexing.

The eigensolver is a cyclic Jacobi iteration specialised for these tiny
Hermitian matrices; it needs no external LAPACK and converges quadratically
(a handful of sweeps in practice, hard-capped at 200).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError, NotPSDError

HERMITIAN_TOL = 1e-10
OFF_DIAGONAL_TOL = 1e-13
MAX_SWEEPS = 200
EIGENVALUE_CLAMP = -1e-10
DENSITY_TOL = 1e-12


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def kron2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two single-qubit (2x2) operators.

    The result acts on the two-qubit basis (|00>, |01>, |10>, |11>) with
    ``a`` on the first qubit and ``b`` on the second.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"kron2 expects 2x2 factors, got {a.shape} and {b.shape}")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("kron2 factors must be finite")
    return np.kron(a, b)


def outer(v: np.ndarray) -> np.ndarray:
    """Projector-style outer product |v><v| (input need not be normalized)."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(m - dagger(m))) <= tol)


@dataclass(frozen=True)
class EigenDecomposition:
    """Hermitian eigendecomposition with ascending eigenvalues.

    ``eigenvectors`` holds the orthonormal eigenvectors as columns, so the
    input is recovered as ``V @ diag(w) @ V.conj().T``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def hermitian_eig(h: np.ndarray, *, max_sweeps: int = MAX_SWEEPS,
                  off_tol: float = OFF_DIAGONAL_TOL) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    The input is symmetrized as (h + h^dag)/2 before iterating, but must be
    Hermitian to within ``HERMITIAN_TOL`` to begin with.  Convergence is
    declared when the off-diagonal Frobenius norm drops below ``off_tol``.

    Raises:
        ValueError: input is not square or not Hermitian within tolerance.
        NonConvergenceError: tolerance not reached after ``max_sweeps``.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.isfinite(h).all():
        raise ValueError("matrix entries must be finite")
    if not is_hermitian(h):
        raise ValueError("matrix is not Hermitian within tolerance")

    n = h.shape[0]
    a = 0.5 * (h + dagger(h))
    v = np.eye(n, dtype=complex)

    def off_norm() -> float:
        mask = ~np.eye(n, dtype=bool)
        return float(np.sqrt(np.sum(np.abs(a[mask]) ** 2)))

    converged = off_norm() <= off_tol
    for _ in range(max_sweeps):
        if converged:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = a[p, q]
                absb = abs(beta)
                if absb < 1e-300:
                    continue
                # Unitary 2x2 rotation zeroing a[p, q]; the small-|t| quadratic
                # root keeps the iteration stable.
                tau = (a[q, q].real - a[p, p].real) / (2.0 * absb)
                t = -math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = (t * c) * (beta / absb)
                rot = np.array([[c, -s], [s.conjugate(), c]], dtype=complex)
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = dagger(rot) @ a[[p, q], :]
                a[q, p] = a[p, q].conjugate()
                v[:, [p, q]] = v[:, [p, q]] @ rot
        converged = off_norm() <= off_tol
    if not converged:
        raise NonConvergenceError(
            f"off-diagonal norm {off_norm():.3e} > {off_tol:.0e} "
            f"after {max_sweeps} sweeps"
        )

    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(eigenvalues=w[order], eigenvectors=v[:, order])


def psd_sqrt(rho: np.ndarray) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite matrix.

    Eigenvalues in [EIGENVALUE_CLAMP, 0) are treated as floating-point noise
    and clamped to zero; anything lower is a genuinely invalid input.

    Raises:
        NotPSDError: an eigenvalue falls below the clamp threshold.
    """
    dec = hermitian_eig(rho)
    w = dec.eigenvalues
    if w[0] < EIGENVALUE_CLAMP:
        raise NotPSDError(f"matrix has eigenvalue {w[0]:.3e} below {EIGENVALUE_CLAMP:.0e}")
    w = np.clip(w, 0.0, None)
    v = dec.eigenvectors
    s = (v * np.sqrt(w)) @ dagger(v)
    return 0.5 * (s + dagger(s))


def uhlmann_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Mixed-state fidelity [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2.

    Both arguments must be normalized density matrices.  The result is
    clamped into [0, 1] when it overshoots a bound by less than 1e-9.

    Raises:
        NotPSDError: either argument is not positive semidefinite.
    """
    rho = check_density_matrix(rho)
    sigma = check_density_matrix(sigma)
    s = psd_sqrt(rho)
    mid = s @ sigma @ s
    mid = 0.5 * (mid + dagger(mid))
    w = hermitian_eig(mid).eigenvalues
    if w[0] < EIGENVALUE_CLAMP:
        raise NotPSDError(f"fidelity kernel eigenvalue {w[0]:.3e} below tolerance")
    fid = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    if -1e-9 <= fid < 0.0:
        return 0.0
    if 1.0 < fid <= 1.0 + 1e-9:
        return 1.0
    return fid


def check_density_matrix(m: np.ndarray, *, tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate a normalized density matrix and return it as complex128.

    Checks Hermiticity and unit trace to ``tol`` and positive
    semidefiniteness to the eigenvalue clamp threshold.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4) and m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 or 4x4 density matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("density matrix entries must be finite")
    if np.max(np.abs(m - dagger(m))) > tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(m).real - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(m).real!r} != 1")
    w = hermitian_eig(m).eigenvalues
    if w[0] < EIGENVALUE_CLAMP:
        raise NotPSDError(f"density matrix eigenvalue {w[0]:.3e} below tolerance")
    return m
