"""Strain and curvature measures of 6-parameter (Cosserat-type) shells.

The shell is described over a :class:`~cosserat_curvature.surface.SurfacePatch`
by the midsurface deformation ``m``, the elastic microrotation ``Qe`` and the
initial microrotation ``Q0``.  Directors are stored as rows, as in
:mod:`cosserat_curvature.cosserat3d`, and partials are stacked over the two
surface coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .cosserat3d import _axial_rates, _director_rates, _spin_sums, check_rotation
from .errors import NyeViolated
from .fields import Field
from .surface import SurfaceFrames, SurfacePatch, curl_s_tensor, surf_frames
from .tensor import (IDENTITY, LEVI_CIVITA, axl, dev3, norm, polar_factor,
                     polar_factor_derivative, skew, sym, tensor_cross_vector)
from .cosserat3d import SKEW_NOISE

NYE_TOL = 1e-6
DET2_TOL = 1e-12


def default_initial_rotation(patch: SurfacePatch, x) -> np.ndarray:
    """``Q0 = polar(a_i (x) e_i)``; its third director is the unit normal."""
    frames = surf_frames(patch, x)
    return polar_factor(frames.cov.T)


def initial_rotation_field(patch: SurfacePatch) -> Field:
    """:func:`default_initial_rotation` as a field with analytic partials."""

    def fn(x):
        return default_initial_rotation(patch, x)

    def dfn(x):
        frames = surf_frames(patch, x)
        A = frames.cov.T
        return polar_factor_derivative(A, np.swapaxes(frames.dcov, -1, -2), polar_factor(A))

    return Field(fn, dfn, name=f"polar_frame({patch.name})")


@dataclass(frozen=True)
class ShellConfig:
    patch: SurfacePatch
    deformation: Field
    rotation: Field
    initial_rotation: Field | None = None

    @property
    def q0(self) -> Field:
        if self.initial_rotation is None:
            return initial_rotation_field(self.patch)
        return self.initial_rotation

    def numeric(self) -> "ShellConfig":
        q0 = None if self.initial_rotation is None else self.initial_rotation.numeric()
        return ShellConfig(self.patch.numeric(), self.deformation.numeric(),
                           self.rotation.numeric(), q0)


class ShellKinematics(NamedTuple):
    frames: SurfaceFrames
    Qe: np.ndarray
    dQe: np.ndarray
    Q0: np.ndarray
    dQ0: np.ndarray
    d: np.ndarray
    dd: np.ndarray  # dd[alpha, j] = d_j,alpha
    d0: np.ndarray
    dd0: np.ndarray


def shell_kinematics(cfg: ShellConfig, x) -> ShellKinematics:
    x = np.asarray(x, dtype=float)
    frames = surf_frames(cfg.patch, x)
    q0 = cfg.q0
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    Q0 = check_rotation(q0(x), "initial microrotation")
    dQe = cfg.rotation.partials(x)
    dQ0 = q0.partials(x)
    R = Qe @ Q0
    dR = dQe @ Q0 + Qe @ dQ0
    return ShellKinematics(frames, Qe, dQe, Q0, dQ0, R.T, np.swapaxes(dR, -1, -2), Q0.T,
                           np.swapaxes(dQ0, -1, -2))


@dataclass(frozen=True)
class ShellMeasures:
    E: np.ndarray
    K: np.ndarray
    D: np.ndarray


# ---------------------------------------------------------------------------
# strain


def shell_strain(cfg: ShellConfig, x) -> np.ndarray:
    """``Ee = Qe^T Grad_s m - a``."""
    frames = surf_frames(cfg.patch, x)
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    grad_m = cfg.deformation.partials(x).T @ frames.con[:2]
    return Qe.T @ grad_m - frames.first


def shell_strain_directors(cfg: ShellConfig, x) -> np.ndarray:
    """``Ee = (m_,a . d_i - a_a . d0_i) d0_i (x) a^a``."""
    k = shell_kinematics(cfg, x)
    dm = cfg.deformation.partials(x)
    C = k.d @ dm.T - k.d0 @ k.frames.cov[:2].T
    return k.d0.T @ C @ k.frames.con[:2]


# ---------------------------------------------------------------------------
# bending-curvature tensor


def shell_bending_curvature(cfg: ShellConfig, x) -> np.ndarray:
    """``Ke = axl(Qe^T Qe_,a) (x) a^a``."""
    k = shell_kinematics(cfg, x)
    return _axial_rates(k.Qe, k.dQe).T @ k.frames.con[:2]


def curvature_total(cfg: ShellConfig, x) -> np.ndarray:
    """``Ke = Q0 [axl(R^T R_,a) - axl(Q0^T Q0_,a)] (x) a^a`` with ``R = Qe Q0``."""
    k = shell_kinematics(cfg, x)
    R = k.Qe @ k.Q0
    dR = k.dQe @ k.Q0 + k.Qe @ k.dQ0
    rates = _axial_rates(R, dR) - _axial_rates(k.Q0, k.dQ0)
    return k.Q0 @ rates.T @ k.frames.con[:2]


def curvature_components(k: ShellKinematics) -> np.ndarray:
    """``K_ia = 1/2 e_ijk (d_j,a . d_k - d0_j,a . d0_k)`` as a ``(3, 2)`` array."""
    return 0.5 * np.einsum("ijk,ajk->ia", LEVI_CIVITA, _director_rates(k))


def axial_rates_directors(k: ShellKinematics) -> np.ndarray:
    """``axl(Qe^T Qe_,a) = -1/2 e_ijk (d_j . d_k,a - d0_j . d0_k,a) d0_i``; rows ``a``."""
    dots = (np.einsum("jc,akc->ajk", k.d, k.dd) - np.einsum("jc,akc->ajk", k.d0, k.dd0))
    return -0.5 * np.einsum("ijk,ajk->ai", LEVI_CIVITA, dots) @ k.d0


def curvature_directors(cfg: ShellConfig, x) -> np.ndarray:
    """``Ke = K_ia d0_i (x) a^a`` with the compact alternator form of ``K_ia``."""
    k = shell_kinematics(cfg, x)
    return k.d0.T @ curvature_components(k) @ k.frames.con[:2]


def curvature_directors_expanded(cfg: ShellConfig, x) -> np.ndarray:
    """Row-by-row expansion of the director components of ``Ke``."""
    k = shell_kinematics(cfg, x)
    d, dd, d0, dd0 = k.d, k.dd, k.d0, k.dd0
    C = np.empty((3, 2))
    for a in range(2):
        C[0, a] = dd[a, 1] @ d[2] - dd0[a, 1] @ d0[2]
        C[1, a] = dd[a, 2] @ d[0] - dd0[a, 2] @ d0[0]
        C[2, a] = dd[a, 0] @ d[1] - dd0[a, 0] @ d0[1]
    return d0.T @ C @ k.frames.con[:2]


def curvature_spin(cfg: ShellConfig, x) -> np.ndarray:
    """``Ke = 1/2 [Qe^T (d_i x d_i,a) - d0_i x d0_i,a] (x) a^a``."""
    k = shell_kinematics(cfg, x)
    rates = 0.5 * (_spin_sums(k.d, k.dd) @ k.Qe - _spin_sums(k.d0, k.dd0))
    return rates.T @ k.frames.con[:2]


def shell_omega_vectors(cfg: ShellConfig, x) -> np.ndarray:
    """``omega_a = axl(Qe_,a Qe^T)``, so ``Qe_,a = omega_a x Qe``; rows ``a``."""
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    return axl(cfg.rotation.partials(x) @ Qe.T, tol=SKEW_NOISE)


def shell_omega_directors(cfg: ShellConfig, x) -> np.ndarray:
    """``omega_a = 1/2 [d_i x d_i,a - Qe (d0_i x d0_i,a)]``."""
    k = shell_kinematics(cfg, x)
    return 0.5 * (_spin_sums(k.d, k.dd) - _spin_sums(k.d0, k.dd0) @ k.Qe.T)


def curvature_omega(cfg: ShellConfig, x) -> np.ndarray:
    """``Ke = Qe^T omega`` with ``omega = omega_a (x) a^a``."""
    frames = surf_frames(cfg.patch, x)
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    return Qe.T @ shell_omega_vectors(cfg, x).T @ frames.con[:2]


# ---------------------------------------------------------------------------
# dislocation density


def shell_dislocation(cfg: ShellConfig, x, curl: Callable = curl_s_tensor) -> np.ndarray:
    """``De = Qe^T Curl_s Qe``; ``curl`` selects the surface Curl implementation."""
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    return Qe.T @ curl(cfg.rotation, cfg.patch, x)


def dislocation_cross(cfg: ShellConfig, x, cross: Callable = tensor_cross_vector) -> np.ndarray:
    """``De = -(Qe^T Qe_,a) x a^a``; ``cross`` is the right cross product."""
    frames = surf_frames(cfg.patch, x)
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    A = np.einsum("ji,ajl->ail", Qe, cfg.rotation.partials(x))
    return -sum(cross(A[a], frames.con[a]) for a in range(2))


def dislocation_directors(cfg: ShellConfig, x) -> np.ndarray:
    """``De = e_jkb (d_i,a . d_k - d0_i,a . d0_k)(a^a . d0_b) d0_i (x) d0_j``.

    The sum over ``b`` runs over the two tangential directors only, which
    presupposes ``d0_3 = n0``.
    """
    k = shell_kinematics(cfg, x)
    P = k.frames.con[:2] @ k.d0[:2].T  # P[a, b] = a^a . d0_b
    C = np.einsum("jkb,aik,ab->ij", LEVI_CIVITA[:, :, :2], _director_rates(k), P)
    return k.d0.T @ C @ k.d0


# ---------------------------------------------------------------------------
# Nye relation and its consequences


def shell_nye_dislocation(K) -> np.ndarray:
    """``De = -Ke^T + tr(Ke) 1``."""
    K = np.asarray(K, dtype=float)
    return -K.T + np.trace(K) * IDENTITY


def shell_nye_curvature(D) -> np.ndarray:
    """``Ke = -De^T + tr(De)/2 1``."""
    D = np.asarray(D, dtype=float)
    return -D.T + 0.5 * np.trace(D) * IDENTITY


@dataclass(frozen=True)
class ShellNye:
    """Residuals of the shell Nye pair and the identities that follow from it.

    ``lower`` and ``upper`` are the violations of ``|K| <= |D| <= 2|K|``
    (non-positive when the bounds hold).
    """

    dislocation: float
    curvature: float
    trace: float
    skew: float
    dev_sym: float
    norm_d: float
    norm_k: float
    lower: float
    upper: float

    @property
    def identities(self) -> float:
        return max(self.dislocation, self.curvature, self.trace, self.skew, self.dev_sym,
                   self.norm_d, self.norm_k)

    @property
    def bound_violation(self) -> float:
        return max(self.lower, self.upper)


def shell_nye(K, D, dislocation_of: Callable = shell_nye_dislocation) -> ShellNye:
    """Shell Nye residuals; ``dislocation_of`` maps ``Ke`` to the predicted ``De``."""
    K = np.asarray(K, dtype=float)
    D = np.asarray(D, dtype=float)
    trK, trD = np.trace(K), np.trace(D)
    nk, nd = norm(K), norm(D)
    return ShellNye(
        dislocation=norm(D - dislocation_of(K)),
        curvature=norm(K - shell_nye_curvature(D)),
        trace=abs(trD - 2.0 * trK),
        skew=norm(skew(D) - skew(K)),
        dev_sym=norm(dev3(sym(D)) + dev3(sym(K))),
        norm_d=abs(nd ** 2 - nk ** 2 - trK ** 2),
        norm_k=abs(nk ** 2 - nd ** 2 + 0.25 * trD ** 2),
        lower=nk - nd,
        upper=nd - 2.0 * nk,
    )


# ---------------------------------------------------------------------------
# planar structure


@dataclass(frozen=True)
class PlanarTensor:
    """``S = S^a_b a_a (x) a^b`` stored by its mixed components."""

    components: np.ndarray
    frames: SurfaceFrames

    @classmethod
    def from_tensor(cls, X, frames: SurfaceFrames) -> "PlanarTensor":
        """Project ``X`` to its tangent part ``a X a`` and read off ``S^a_b``."""
        return cls(frames.con[:2] @ np.asarray(X, dtype=float) @ frames.cov[:2].T, frames)

    @property
    def tensor(self) -> np.ndarray:
        return self.frames.cov[:2].T @ self.components @ self.frames.con[:2]

    @property
    def trace(self) -> float:
        return float(np.trace(self.components))

    @property
    def det2(self) -> float:
        return float(np.linalg.det(self.components))

    def inverse(self) -> "PlanarTensor":
        """Inverse within the tangent plane, ``S S^-1 = a``."""
        return PlanarTensor(np.linalg.inv(self.components), self.frames)


def transform_T(S: PlanarTensor) -> PlanarTensor:
    """``T(S) = -S^T + tr(S) a``."""
    return PlanarTensor.from_tensor(-S.tensor.T + S.trace * S.frames.first, S.frames)


def transform_T_alternator(S: PlanarTensor) -> np.ndarray:
    """``-c S c``."""
    c = S.frames.alternator
    return -c @ S.tensor @ c


def planar_cofactor(S: PlanarTensor, tol: float = DET2_TOL) -> np.ndarray | None:
    """``det2(S) S^-T``, or ``None`` when ``|det2(S)| <= tol``."""
    det = S.det2
    if abs(det) <= tol:
        return None
    return det * S.inverse().tensor.T


def transform_T_components(S: PlanarTensor) -> np.ndarray:
    """Components of ``T(S)`` on ``a^a (x) a_b``: the cofactor matrix of ``S^a_b``."""
    s = S.components
    return np.array([[s[1, 1], -s[1, 0]], [-s[0, 1], s[0, 0]]])


@dataclass(frozen=True)
class PlanarSplit:
    D_par: np.ndarray
    D_a3: np.ndarray
    D_trace_part: np.ndarray
    K_par: np.ndarray
    K_3a: np.ndarray

    def reassemble(self, frames: SurfaceFrames) -> np.ndarray:
        """``D_par + D_a3 a^a (x) n0 + tr(De)/2 n0 (x) n0``."""
        return self.D_par + np.outer(self.D_a3 @ frames.con[:2], frames.normal) + self.D_trace_part


def _require_nye(K, D, tol):
    res = norm(D - shell_nye_dislocation(K))
    if res > tol:
        raise NyeViolated(f"shell Nye residual {res:.3e} exceeds {tol:.1e}")


def planar_split(D, K, frames: SurfaceFrames, tol: float = NYE_TOL) -> PlanarSplit:
    """Split ``De`` and ``Ke`` into planar, mixed normal and trace parts."""
    D = np.asarray(D, dtype=float)
    K = np.asarray(K, dtype=float)
    _require_nye(K, D, tol)
    n0 = frames.normal
    return PlanarSplit(
        D_par=D @ frames.first,
        D_a3=frames.cov[:2] @ D @ n0,
        D_trace_part=0.5 * np.trace(D) * np.outer(n0, n0),
        K_par=frames.first @ K,
        K_3a=n0 @ K @ frames.cov[:2].T,
    )


@dataclass(frozen=True)
class CofactorResiduals:
    planar: float  # |D_par - T(K_par)|
    reassembly: float  # |De - [T(K_par) - K_3a a^a (x) n0 + tr(K_par) n0 (x) n0]|


def planar_cofactor_check(K, D, frames: SurfaceFrames, tol: float = NYE_TOL) -> CofactorResiduals:
    split = planar_split(D, K, frames, tol)
    Kp = PlanarTensor.from_tensor(split.K_par, frames)
    TK = transform_T(Kp).tensor
    n0 = frames.normal
    rebuilt = (TK - np.outer(split.K_3a @ frames.con[:2], n0)
               + Kp.trace * np.outer(n0, n0))
    return CofactorResiduals(norm(split.D_par - TK), norm(np.asarray(D, dtype=float) - rebuilt))


def measures(cfg: ShellConfig, x) -> ShellMeasures:
    return ShellMeasures(E=shell_strain(cfg, x), K=shell_bending_curvature(cfg, x),
                         D=shell_dislocation(cfg, x))
