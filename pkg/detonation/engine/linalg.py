"""Invariant subspaces, spectral projectors and smooth orthonormal complements."""
import numpy as np
from scipy.linalg import orth, schur, solve


def invariant_subspace(matrix, select, real: bool = False) -> np.ndarray:
    """
    Orthonormal basis of the invariant subspace for eigenvalues where select(w) is true.

    Uses an ordered complex Schur form, which stays well conditioned for
    repeated eigenvalues. With real=True the basis of a real invariant
    subspace is returned as a real array.
    """
    _, Z, sdim = schur(np.asarray(matrix, dtype=complex), output="complex", sort=select)
    basis = Z[:, :sdim]
    if real:
        basis = orth(np.hstack([basis.real, basis.imag]))
    return basis


def spectral_projector(matrix, select) -> np.ndarray:
    """Riesz projector onto the eigenvalues selected by select, along the remaining ones."""
    chosen = invariant_subspace(matrix, select)
    rest = invariant_subspace(matrix, lambda w: not select(w))
    frame = np.hstack([chosen, rest])
    weights = np.zeros(frame.shape[1])
    weights[: chosen.shape[1]] = 1.0
    return frame @ np.diag(weights) @ solve(frame, np.eye(frame.shape[0], dtype=complex))


def orthonormal_complement(basis, seeds) -> np.ndarray:
    """
    Orthonormal basis of span(basis)^perp obtained by Gram-Schmidt on the
    projected seed vectors. The result depends smoothly on basis as long as the
    projected seeds stay independent.
    """
    basis = np.asarray(basis)
    projected = seeds - basis @ (basis.conj().T @ seeds)
    Q, R = np.linalg.qr(projected)
    signs = np.sign(np.real(np.diag(R)))
    signs[signs == 0] = 1.0
    return Q * signs


def orthonormalize(frame):
    """QR factorization with a positive real diagonal; returns (Q, log det R)."""
    Q, R = np.linalg.qr(frame)
    diag = np.diag(R)
    magnitudes = np.abs(diag)
    return Q * (diag / magnitudes), complex(np.sum(np.log(magnitudes)))
