"""Finite-dimensional biorthogonal linear algebra.

This module is the small, exactly checkable model of the structures the rest
of the package realizes on the field grid: a non-orthogonal basis |alpha_n>,
its dual family |beta_n> with <beta_i|alpha_j> = kronecker(i, j), the metric
eta = sum_n |beta_n><beta_n| that maps each basis vector onto its dual, and
pseudo-Hermitian generators H whose adjoint satisfies H^dag = eta H eta^-1.

Everything here works on plain complex arrays with the standard inner
product; the bridge to the density-normalized field amplitudes is a diagonal
rescaling done by the callers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DegenerateSpectrumError, IllConditionedBasisError


def _as_columns(vectors) -> np.ndarray:
    if isinstance(vectors, (FiniteBasis, DualBasis)):
        return vectors.matrix
    matrix = np.asarray(vectors, dtype=complex)
    if matrix.ndim == 1:
        raise ValueError("expected a matrix of column vectors or a sequence of vectors")
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        # a sequence of 1-D vectors stacks to rows; transpose to columns
        raise ValueError(f"basis matrix must be square, got shape {matrix.shape}")
    return matrix


class FiniteBasis:
    """A complete (generally non-orthogonal) basis, stored column-wise."""

    def __init__(self, vectors):
        if not isinstance(vectors, np.ndarray) and not isinstance(vectors, (FiniteBasis, DualBasis)):
            vectors = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
        self.matrix = _as_columns(vectors).astype(complex)
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("basis contains non-finite entries")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))

    def vector(self, n: int) -> np.ndarray:
        return self.matrix[:, n].copy()

    def __repr__(self):
        return f"FiniteBasis(dimension={self.dimension})"


class DualBasis:
    """The family |beta_n> biorthogonal to a FiniteBasis, stored column-wise."""

    def __init__(self, vectors):
        if not isinstance(vectors, np.ndarray) and not isinstance(vectors, (FiniteBasis, DualBasis)):
            vectors = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
        self.matrix = _as_columns(vectors).astype(complex)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def vector(self, n: int) -> np.ndarray:
        return self.matrix[:, n].copy()

    def __repr__(self):
        return f"DualBasis(dimension={self.dimension})"


def dual_basis(basis: FiniteBasis, cond_limit: float = 1e12) -> DualBasis:
    """Compute the dual family, columns of (A^-1)^dag.

    With A the column matrix of |alpha_n>, the conjugate-transposed inverse
    B = (A^-1)^dag satisfies B^dag A = I, which is exactly the biorthogonality
    condition <beta_i|alpha_j> = kronecker(i, j).

    Raises IllConditionedBasisError if cond(A) exceeds ``cond_limit``.
    """
    A = basis.matrix
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedBasisError(
            f"basis condition number {cond:.3e} exceeds limit {cond_limit:.1e}"
        )
    return DualBasis(np.linalg.inv(A).conj().T)


def overlap_matrix(dual: DualBasis, basis: FiniteBasis) -> np.ndarray:
    """<beta_i|alpha_j> for all pairs; identity for a consistent pair."""
    return dual.matrix.conj().T @ basis.matrix


def identity_resolution_residual(basis: FiniteBasis, dual: DualBasis) -> float:
    """Max-abs deviation of sum_n |alpha_n><beta_n| from the identity."""
    N = basis.dimension
    resolved = basis.matrix @ dual.matrix.conj().T
    return float(np.max(np.abs(resolved - np.eye(N))))


def bqm_inner(psi, phi, basis: FiniteBasis, dual: DualBasis) -> complex:
    """Biorthogonal inner product <phi~|psi>.

    Both vectors are expanded in |alpha_n>; the bra is built from the dual
    family, so the product reduces to the plain coefficient contraction
    sum_n conj(c_n) a_n with a = coefficients of psi, c = coefficients of phi.
    """
    a = dual.matrix.conj().T @ np.asarray(psi, dtype=complex)
    c = dual.matrix.conj().T @ np.asarray(phi, dtype=complex)
    return complex(np.vdot(c, a))


@dataclass(frozen=True)
class MetricOperator:
    """The metric eta = sum_n |beta_n><beta_n| and its inverse."""

    matrix: np.ndarray
    inverse: np.ndarray

    def __post_init__(self):
        herm = np.max(np.abs(self.matrix - self.matrix.conj().T))
        scale = max(1.0, float(np.max(np.abs(self.matrix))))
        if herm > 1e-10 * scale:
            raise ValueError(f"metric is not Hermitian (deviation {herm:.3e})")
        N = self.matrix.shape[0]
        resid = np.max(np.abs(self.matrix @ self.inverse - np.eye(N)))
        if resid > 1e-8 * scale:
            raise ValueError(f"metric inverse inconsistent (residual {resid:.3e})")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def metric_from_dual(dual: DualBasis) -> MetricOperator:
    """Build eta = B B^dag from the dual family.

    The inverse is assembled from the same factorization,
    eta^-1 = (B^dag)^-1 B^-1 = sum_n |alpha_n><alpha_n|, rather than by a
    generic matrix inversion.
    """
    B = dual.matrix
    Binv = np.linalg.inv(B)
    eta = B @ B.conj().T
    eta_inv = Binv.conj().T @ Binv
    # symmetrize away the last bits of roundoff
    eta = 0.5 * (eta + eta.conj().T)
    eta_inv = 0.5 * (eta_inv + eta_inv.conj().T)
    return MetricOperator(eta, eta_inv)


def eta_inner(psi, phi, metric: MetricOperator) -> complex:
    """<phi|eta|psi>, the inner product induced by the metric."""
    return complex(np.vdot(phi, metric.matrix @ np.asarray(psi, dtype=complex)))


def eta_norm(psi, metric: MetricOperator) -> float:
    value = eta_inner(psi, psi, metric)
    return float(np.sqrt(max(value.real, 0.0)))


def beta_eta_overlap(dual: DualBasis, metric: MetricOperator, n: int, m: int) -> complex:
    """eta-inner product of two dual vectors, <beta_m|eta|beta_n>.

    Because beta = eta alpha, this equals <alpha_m|eta^3|alpha_n> and is not
    kronecker(n, m) unless the basis is orthonormal: the dual family fails to
    be orthonormal in the very product that makes the primal family
    orthonormal.
    """
    return eta_inner(dual.vector(n), dual.vector(m), metric)


@dataclass(frozen=True)
class PseudoHermiticityCheck:
    is_pseudo_hermitian: bool
    residual: float


def is_pseudo_hermitian(H, metric: MetricOperator, tol: float = 1e-10) -> PseudoHermiticityCheck:
    """Check H^dag = eta H eta^-1 up to ``tol`` in the max-abs norm."""
    H = np.asarray(H, dtype=complex)
    transformed = metric.matrix @ H @ metric.inverse
    residual = float(np.max(np.abs(H.conj().T - transformed)))
    return PseudoHermiticityCheck(residual <= tol, residual)


def eigenbasis(H, cond_limit: float = 1e12, degeneracy_tol: float = 1e-8):
    """Eigenvalues and eigenvector basis of a non-degenerate matrix.

    Raises DegenerateSpectrumError when two eigenvalues coincide within
    ``degeneracy_tol`` (relative to the spectral scale); the biorthogonal
    constructions used here assume a non-degenerate spectrum.
    """
    H = np.asarray(H, dtype=complex)
    values, vectors = np.linalg.eig(H)
    order = np.argsort(values.real + 1e-9 * values.imag)
    values = values[order]
    vectors = vectors[:, order]
    scale = max(float(np.max(np.abs(values))), 1.0)
    diffs = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(diffs, np.inf)
    if np.min(diffs) < degeneracy_tol * scale:
        raise DegenerateSpectrumError(
            f"eigenvalue gap {np.min(diffs):.3e} below {degeneracy_tol:.1e} * scale"
        )
    basis = FiniteBasis(vectors)
    if basis.condition_number > cond_limit:
        raise IllConditionedBasisError(
            f"eigenvector condition number {basis.condition_number:.3e} exceeds "
            f"{cond_limit:.1e}"
        )
    return values, basis


def biorthogonal_system(H, cond_limit: float = 1e12, degeneracy_tol: float = 1e-8):
    """Eigenvalues, eigenbasis, dual family, and metric of a generator H."""
    values, basis = eigenbasis(H, cond_limit=cond_limit, degeneracy_tol=degeneracy_tol)
    dual = dual_basis(basis, cond_limit=cond_limit)
    return values, basis, dual, metric_from_dual(dual)


def _expm_eig(M: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eig(M)
    return vectors @ (np.exp(values)[:, None] * np.linalg.inv(vectors))


def evolve_pair(psi0, psitilde0, H, t: float, hbar: float = 1.0, method: str = "pade"):
    """Evolve a state and its associated dual-picture partner.

    psi(t)      = exp(-i H t / hbar)     psi(0)
    psitilde(t) = exp(-i H^dag t / hbar) psitilde(0)

    The overlap <psitilde(t)|psi(t)> is exactly conserved for any H, which is
    the working invariant for the pair. ``method`` selects the matrix
    exponential: "pade" (scaling and squaring) or "eig" (eigendecomposition);
    the two are cross-checked in the test suite.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"H must be square, got shape {H.shape}")
    arg = -1j * t / hbar * H
    dual_arg = -1j * t / hbar * H.conj().T
    if method == "pade":
        U = expm(arg)
        U_dual = expm(dual_arg)
    elif method == "eig":
        U = _expm_eig(arg)
        U_dual = _expm_eig(dual_arg)
    else:
        raise ValueError(f"unknown expm method {method!r}")
    psi_t = U @ np.asarray(psi0, dtype=complex)
    psitilde_t = U_dual @ np.asarray(psitilde0, dtype=complex)
    return psi_t, psitilde_t


def pair_overlap(psi, psitilde) -> complex:
    """<psitilde|psi>, the conserved overlap of an evolved pair."""
    return complex(np.vdot(psitilde, psi))
