"""Small fixed-size tensor algebra on 3-vectors and 3x3 matrices.

Conventions: a second-order tensor is a ``(3, 3)`` array acting on column
vectors from the left, and the dyad ``u (x) v`` is ``np.outer(u, v)``, so
``(u (x) v) w = u (v . w)``.  Most functions broadcast over leading axes.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import Degenerate, NotSkew

SKEW_TOL = 1e-12
DEGENERATE_DET = 1e-12


def _levi_civita() -> np.ndarray:
    e = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        e[i, j, k] = 1.0
        e[j, i, k] = -1.0
    e.setflags(write=False)
    return e


#: Cartesian alternator e_ijk with e_123 = 1.
LEVI_CIVITA = _levi_civita()

#: Two-dimensional alternator e_{alpha beta} with e_12 = 1.
LEVI_CIVITA_2D = np.array([[0.0, 1.0], [-1.0, 0.0]])
LEVI_CIVITA_2D.setflags(write=False)

IDENTITY = np.eye(3)
IDENTITY.setflags(write=False)


class Split(NamedTuple):
    sym: np.ndarray
    skew: np.ndarray
    dev3sym: np.ndarray
    trace: float


def dyad(u, v) -> np.ndarray:
    return np.einsum("...i,...j->...ij", u, v)


def sym(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return 0.5 * (X + np.swapaxes(X, -1, -2))


def skew(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return 0.5 * (X - np.swapaxes(X, -1, -2))


def dev3(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    tr = np.trace(X, axis1=-2, axis2=-1)
    return X - tr[..., None, None] / 3.0 * IDENTITY


def split(X) -> Split:
    """Decompose ``X`` into symmetric, skew, deviatoric-symmetric parts and trace."""
    X = np.asarray(X, dtype=float)
    s = sym(X)
    return Split(sym=s, skew=skew(X), dev3sym=dev3(s), trace=float(np.trace(X)))


def skew_from_axial(a) -> np.ndarray:
    """The skew matrix ``A`` with ``A v = a x v``."""
    a = np.asarray(a, dtype=float)
    A = np.zeros(a.shape[:-1] + (3, 3))
    A[..., 0, 1] = -a[..., 2]
    A[..., 0, 2] = a[..., 1]
    A[..., 1, 0] = a[..., 2]
    A[..., 1, 2] = -a[..., 0]
    A[..., 2, 0] = -a[..., 1]
    A[..., 2, 1] = a[..., 0]
    return A


def axl(A, tol: float = SKEW_TOL) -> np.ndarray:
    """Axial vector of a skew matrix, the inverse of :func:`skew_from_axial`.

    Raises :class:`NotSkew` when ``|A + A^T|`` exceeds ``tol``.  Pass
    ``tol=None`` to read off the axial vector of the skew part without the
    check (used where ``A`` carries finite-difference noise).
    """
    A = np.asarray(A, dtype=float)
    if tol is not None:
        defect = np.linalg.norm(A + np.swapaxes(A, -1, -2), axis=(-2, -1))
        if np.any(defect > tol):
            raise NotSkew(f"matrix is not skew-symmetric: |A + A^T| = {np.max(defect):.3e}")
    return 0.5 * np.stack(
        [A[..., 2, 1] - A[..., 1, 2], A[..., 0, 2] - A[..., 2, 0], A[..., 1, 0] - A[..., 0, 1]],
        axis=-1,
    )


def tensor_cross_vector(T, w) -> np.ndarray:
    """Right cross product ``T x w`` defined by ``(u (x) v) x w = u (x) (v x w)``.

    Row ``i`` of the result is ``T[i] x w``.
    """
    T = np.asarray(T, dtype=float)
    w = np.asarray(w, dtype=float)
    return np.cross(T, w[..., None, :])


def vector_cross_tensor(w, T) -> np.ndarray:
    """Left cross product ``w x T`` defined by ``w x (u (x) v) = (w x u) (x) v``."""
    T = np.asarray(T, dtype=float)
    w = np.asarray(w, dtype=float)
    return np.swapaxes(np.cross(w[..., None, :], np.swapaxes(T, -1, -2)), -1, -2)


def double_dot(B, T) -> np.ndarray:
    """Contraction of a third-order tensor with a second-order one over the last two slots."""
    return np.einsum("...ijk,...jk->...i", B, T)


def norm(X) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(X))


def rotation_defect(R) -> float:
    """``|R^T R - 1|``; infinite when ``det R <= 0``."""
    R = np.asarray(R, dtype=float)
    if np.linalg.det(R) <= 0.0:
        return float("inf")
    return float(np.linalg.norm(R.T @ R - IDENTITY))


def polar_factor(F, tol: float = 1e-14, max_iter: int = 100) -> np.ndarray:
    """Rotation ``R`` of the polar decomposition ``F = R U``.

    Scaled Newton iteration ``X <- (z X + (z X)^{-T}) / 2`` with the
    determinant scaling ``z = |det X|^{-1/3}``.
    """
    X = np.array(F, dtype=float)
    det = np.linalg.det(X)
    if not det > DEGENERATE_DET:
        raise Degenerate(f"polar factor needs det F > {DEGENERATE_DET}, got {det:.3e}")
    for _ in range(max_iter):
        zeta = abs(np.linalg.det(X)) ** (-1.0 / 3.0)
        X_next = 0.5 * (zeta * X + np.linalg.inv(zeta * X).T)
        delta = np.linalg.norm(X_next - X)
        X = X_next
        if delta < tol:
            break
    return X


def polar_factor_derivative(F, dF, R=None) -> np.ndarray:
    """Directional derivative of :func:`polar_factor` at ``F`` along ``dF``.

    With ``U = R^T F`` and ``R^T dR = [w]x`` one has
    ``(tr U - U) w = axl(R^T dF - dF^T R)``.  ``dF`` may carry leading axes.
    """
    if R is None:
        R = polar_factor(F)
    U = sym(R.T @ F)
    M = np.trace(U) * IDENTITY - U
    dF = np.asarray(dF, dtype=float)
    RtdF = np.einsum("ji,...jk->...ik", R, dF)
    rhs = axl(RtdF - np.swapaxes(RtdF, -1, -2), tol=None)
    w = np.linalg.solve(M, rhs[..., None])[..., 0]
    return R @ skew_from_axial(w)
