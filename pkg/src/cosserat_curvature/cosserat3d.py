"""Strain and curvature measures of a three-dimensional Cosserat continuum.

Every curvature measure has several independent routes: the defining
formula, a director-component formula and (for the wryness) the
``omega``-vector formula.  Directors are stored as rows: ``d[j]`` is
``d_j = Qe Q0 e_j`` and ``d0[j]`` is ``d0_j = Q0 e_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .curvilinear import Chart3, ChartFrames, curl_tensor, frames_at
from .errors import NotARotation
from .fields import Field, constant_field
from .tensor import IDENTITY, LEVI_CIVITA, axl, norm, rotation_defect, tensor_cross_vector

ROTATION_DRIFT = 1e-8
# bound on |A + A^T| for A = Q^T Q_,i; finite differences leave O(h^2) symmetric noise
SKEW_NOISE = 1e-6


def _identity_rotation() -> Field:
    return constant_field(IDENTITY, name="identity")


@dataclass(frozen=True)
class Config3D:
    chart: Chart3
    deformation: Field
    rotation: Field
    initial_rotation: Field = field(default_factory=_identity_rotation)

    def numeric(self) -> "Config3D":
        """All derivatives of fields and chart by central differences."""
        return Config3D(self.chart.numeric(), self.deformation.numeric(),
                        self.rotation.numeric(), self.initial_rotation.numeric())


class Strains(NamedTuple):
    U: np.ndarray
    E: np.ndarray


@dataclass(frozen=True)
class Measures3D:
    F: np.ndarray
    U: np.ndarray
    E: np.ndarray
    wryness: np.ndarray
    dislocation: np.ndarray
    omega: np.ndarray


class Kinematics(NamedTuple):
    frames: ChartFrames
    Qe: np.ndarray
    dQe: np.ndarray
    Q0: np.ndarray
    dQ0: np.ndarray
    d: np.ndarray
    dd: np.ndarray  # dd[i, j] = d_j,i
    d0: np.ndarray
    dd0: np.ndarray


def check_rotation(Q, what: str = "rotation") -> np.ndarray:
    defect = rotation_defect(Q)
    if defect > ROTATION_DRIFT:
        raise NotARotation(f"{what} is off SO(3) by {defect:.3e}")
    return Q


def kinematics(cfg: Config3D, x) -> Kinematics:
    x = np.asarray(x, dtype=float)
    frames = frames_at(cfg.chart, x)
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    Q0 = check_rotation(cfg.initial_rotation(x), "initial microrotation")
    dQe = cfg.rotation.partials(x)
    dQ0 = cfg.initial_rotation.partials(x)
    R = Qe @ Q0
    dR = dQe @ Q0 + Qe @ dQ0
    return Kinematics(frames, Qe, dQe, Q0, dQ0, R.T, np.swapaxes(dR, -1, -2), Q0.T,
                      np.swapaxes(dQ0, -1, -2))


def _axial_rates(Q, dQ) -> np.ndarray:
    """``axl(Q^T Q_,i)`` for each coordinate, stacked as rows."""
    return axl(np.einsum("ji,kjl->kil", Q, dQ), tol=SKEW_NOISE)


# ---------------------------------------------------------------------------
# strain


def deformation_gradient(cfg: Config3D, x) -> np.ndarray:
    """``F = phi_,i (x) g^i``."""
    frames = frames_at(cfg.chart, x)
    return cfg.deformation.partials(x).T @ frames.con


def strain_measures(cfg: Config3D, x) -> Strains:
    """Biot-type stretch ``U = Qe^T F`` and strain ``E = U - 1``."""
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    U = Qe.T @ deformation_gradient(cfg, x)
    return Strains(U, U - IDENTITY)


def strain_directors(cfg: Config3D, x) -> np.ndarray:
    """``E = (phi_,j . d_i - g_j . d0_i) d0_i (x) g^j``."""
    k = kinematics(cfg, x)
    dphi = cfg.deformation.partials(x)
    C = k.d @ dphi.T - k.d0 @ k.frames.cov.T
    return k.d0.T @ C @ k.frames.con


# ---------------------------------------------------------------------------
# wryness


def wryness(cfg: Config3D, x) -> np.ndarray:
    """``Gamma = axl(Qe^T Qe_,i) (x) g^i``."""
    k = kinematics(cfg, x)
    return _axial_rates(k.Qe, k.dQe).T @ k.frames.con


def wryness_total(cfg: Config3D, x) -> np.ndarray:
    """``Gamma = Q0 [axl(R^T R_,i) - axl(Q0^T Q0_,i)] (x) g^i`` with ``R = Qe Q0``."""
    k = kinematics(cfg, x)
    R = k.Qe @ k.Q0
    dR = k.dQe @ k.Q0 + k.Qe @ k.dQ0
    rates = _axial_rates(R, dR) - _axial_rates(k.Q0, k.dQ0)
    return k.Q0 @ rates.T @ k.frames.con


def _director_rates(k: Kinematics) -> np.ndarray:
    """``M[i, j, k] = d_j,i . d_k - d0_j,i . d0_k``."""
    return np.einsum("ijc,kc->ijk", k.dd, k.d) - np.einsum("ijc,kc->ijk", k.dd0, k.d0)


def wryness_directors(cfg: Config3D, x) -> np.ndarray:
    """``Gamma = 1/2 e_jks (d_j,i . d_k - d0_j,i . d0_k) d0_s (x) g^i``."""
    k = kinematics(cfg, x)
    C = 0.5 * np.einsum("jks,ijk->si", LEVI_CIVITA, _director_rates(k))
    return k.d0.T @ C @ k.frames.con


def _spin_sums(d, dd) -> np.ndarray:
    """``sum_j d_j x d_j,i`` for each coordinate ``i``."""
    return np.cross(d[None, :, :], dd).sum(axis=1)


def omega_vectors(cfg: Config3D, x) -> np.ndarray:
    """``omega_i = Qe axl(Qe^T Qe_,i)``, so that ``Qe_,i = omega_i x Qe``; rows ``i``."""
    k = kinematics(cfg, x)
    return _axial_rates(k.Qe, k.dQe) @ k.Qe.T


def omega_vectors_directors(cfg: Config3D, x) -> np.ndarray:
    """``omega_i = 1/2 [d_j x d_j,i - Qe (d0_j x d0_j,i)]``."""
    k = kinematics(cfg, x)
    return 0.5 * (_spin_sums(k.d, k.dd) - _spin_sums(k.d0, k.dd0) @ k.Qe.T)


def wryness_omega(cfg: Config3D, x) -> np.ndarray:
    """``Gamma = 1/2 [Qe^T (d_j x d_j,i) - d0_j x d0_j,i] (x) g^i``."""
    k = kinematics(cfg, x)
    rates = 0.5 * (_spin_sums(k.d, k.dd) @ k.Qe - _spin_sums(k.d0, k.dd0))
    return rates.T @ k.frames.con


def wryness_cartesian(cfg: Config3D, x) -> np.ndarray:
    """``Gamma = 1/2 e_iks (d_k,j . d_s) e_i (x) e_j``.

    Valid only on the identity chart with ``Q0 = 1``.
    """
    k = kinematics(cfg, x)
    return 0.5 * np.einsum("iks,jkc,sc->ij", LEVI_CIVITA, k.dd, k.d)


# ---------------------------------------------------------------------------
# dislocation density


def dislocation_density(cfg: Config3D, x, curl: Callable = curl_tensor) -> np.ndarray:
    """``D = Qe^T Curl Qe``; ``curl`` selects the Curl implementation."""
    Qe = check_rotation(cfg.rotation(x), "elastic microrotation")
    return Qe.T @ curl(cfg.rotation, cfg.chart, x)


def dislocation_density_cross(cfg: Config3D, x) -> np.ndarray:
    """``D = -(Qe^T Qe_,k) x g^k``."""
    k = kinematics(cfg, x)
    A = np.einsum("ji,kjl->kil", k.Qe, k.dQe)
    return -sum(tensor_cross_vector(A[i], k.frames.con[i]) for i in range(3))


def dislocation_density_directors(cfg: Config3D, x) -> np.ndarray:
    """``D = e_krs (d_j,i . d_k - d0_j,i . d0_k)(g^i . d0_r) d0_j (x) d0_s``."""
    k = kinematics(cfg, x)
    P = k.frames.con @ k.d0.T  # P[i, r] = g^i . d0_r
    C = np.einsum("krs,ijk,ir->js", LEVI_CIVITA, _director_rates(k), P)
    return k.d0.T @ C @ k.d0


def dislocation_cartesian(cfg: Config3D, x) -> np.ndarray:
    """``D = e_ijk (d_j,i . d_s) e_s (x) e_k``; identity chart with ``Q0 = 1`` only."""
    k = kinematics(cfg, x)
    return np.einsum("ijk,ijc,sc->sk", LEVI_CIVITA, k.dd, k.d)


# ---------------------------------------------------------------------------
# Nye


def nye_dislocation(gamma) -> np.ndarray:
    """``D = -Gamma^T + tr(Gamma) 1``."""
    gamma = np.asarray(gamma, dtype=float)
    return -gamma.T + np.trace(gamma) * IDENTITY


def nye_wryness(D) -> np.ndarray:
    """``Gamma = -D^T + tr(D)/2 1``, the inverse of :func:`nye_dislocation`."""
    D = np.asarray(D, dtype=float)
    return -D.T + 0.5 * np.trace(D) * IDENTITY


def nye_check(gamma, D) -> tuple[float, float]:
    """Residuals ``|D + Gamma^T - tr(Gamma) 1|`` and ``|Gamma + D^T - tr(D)/2 1|``."""
    return norm(D - nye_dislocation(gamma)), norm(gamma - nye_wryness(D))


def measures(cfg: Config3D, x) -> Measures3D:
    F = deformation_gradient(cfg, x)
    U, E = strain_measures(cfg, x)
    return Measures3D(F=F, U=U, E=E, wryness=wryness(cfg, x),
                      dislocation=dislocation_density(cfg, x), omega=omega_vectors(cfg, x))
