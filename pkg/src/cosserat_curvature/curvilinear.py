"""Curvilinear charts in three dimensions and the Curl operator.

``Curl T`` follows the row-wise convention ``(Curl T)^T c = curl(T^T c)`` for
constant ``c``; the transposed convention used by some authors is available
only through :func:`curl_transposed`.

Index layout used throughout: ``frames.cov[i]`` is ``g_i``, ``frames.con[i]``
is ``g^i``, ``frames.christoffel[r, i, j]`` is the symbol of the second kind
with upper index ``r``, and component partials are stacked as
``dT[k, s, j] = d T_sj / d x_k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateChart, OutOfDomain
from .fields import Field, central_partials, central_second_partials, fd_step
from .tensor import LEVI_CIVITA, tensor_cross_vector

DEGENERATE_G = 1e-12


@dataclass(frozen=True)
class Chart3:
    """Map ``theta`` from an axis-aligned parameter box into space.

    ``jacobian(x)`` returns the covariant basis stacked as rows and
    ``hessian(x)[i, j]`` the second partial; both are optional.
    """

    theta: Callable[[np.ndarray], np.ndarray]
    box: tuple
    jacobian: Callable | None = None
    hessian: Callable | None = None
    name: str = "chart"

    @property
    def analytic(self) -> bool:
        return self.jacobian is not None

    def numeric(self) -> "Chart3":
        return Chart3(self.theta, self.box, None, None, self.name)

    def as_field(self) -> Field:
        """The chart map as a vector field (the identity deformation)."""
        return Field(self.theta, self.jacobian, name=self.name)

    def check_point(self, x, margin=0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo, hi = (np.asarray(b, dtype=float) for b in self.box)
        if x.shape != lo.shape or np.any(x < lo + margin) or np.any(x > hi - margin):
            raise OutOfDomain(f"point {x.tolist()} outside {self.name} box {lo.tolist()}..{hi.tolist()}")
        return x

    def sample(self, rng: np.random.Generator, n: int, inset: float = 0.05) -> np.ndarray:
        lo, hi = (np.asarray(b, dtype=float) for b in self.box)
        pad = inset * (hi - lo)
        return rng.uniform(lo + pad, hi - pad, size=(n, lo.size))


@dataclass(frozen=True)
class ChartFrames:
    x: np.ndarray
    cov: np.ndarray
    con: np.ndarray
    metric: np.ndarray
    metric_inv: np.ndarray
    g: float
    christoffel: np.ndarray
    dcov: np.ndarray
    dcon: np.ndarray

    @property
    def sqrt_g(self) -> float:
        return float(np.sqrt(self.g))

    @property
    def eps_cov(self) -> np.ndarray:
        """``eps_ijk = sqrt(g) e_ijk``."""
        return self.sqrt_g * LEVI_CIVITA

    @property
    def eps_con(self) -> np.ndarray:
        """``eps^ijk = e_ijk / sqrt(g)``."""
        return LEVI_CIVITA / self.sqrt_g


def _jacobian(chart: Chart3, x) -> np.ndarray:
    if chart.jacobian is not None:
        return np.asarray(chart.jacobian(x), dtype=float)
    return central_partials(chart.theta, x)


def frames_at(chart: Chart3, x) -> ChartFrames:
    x = chart.check_point(x, 0.0 if chart.analytic else 2.0 * float(np.max(fd_step(x))))
    cov = _jacobian(chart, x)
    if chart.hessian is not None:
        hess = np.asarray(chart.hessian(x), dtype=float)
    elif chart.jacobian is not None:
        hess = np.swapaxes(central_partials(chart.jacobian, x), 0, 1)
    else:
        hess = central_second_partials(chart.theta, x)
    det_j = np.linalg.det(cov)
    g = det_j ** 2
    if not (det_j > 0.0 and g > DEGENERATE_G):
        raise DegenerateChart(f"{chart.name}: det(grad theta) = {det_j:.3e} at {x.tolist()}")
    cov_inv = np.linalg.inv(cov)
    con = cov_inv.T
    dcov = np.swapaxes(hess, 0, 1)  # dcov[k, i] = g_i,k
    dcon = -np.swapaxes(cov_inv @ dcov @ cov_inv, -1, -2)
    metric = cov @ cov.T
    christoffel = np.einsum("jic,rc->rij", dcov, con)
    return ChartFrames(x, cov, con, metric, con @ con.T, float(g), christoffel, dcov, dcon)


def _basis(chart: Chart3, x):
    cov = _jacobian(chart, x)
    return cov, np.linalg.inv(cov).T


# ---------------------------------------------------------------------------
# components and covariant derivatives

_SANDWICH = {
    # kind: (left factor, right factor) in terms of (cov, con)
    "covariant": (lambda cov, con: cov, lambda cov, con: cov.T),
    "mixed": (lambda cov, con: con, lambda cov, con: cov.T),
    "contravariant": (lambda cov, con: con, lambda cov, con: con.T),
}


def tensor_components(T, dT, frames, kind: str = "covariant"):
    """Components of ``T`` (``T_sj = g_s . T g_j`` for ``covariant``, ``T^s_j``
    for ``mixed``) and their partials by the product rule."""
    left, right = _SANDWICH[kind]
    L = left(frames.cov, frames.con)
    R = right(frames.cov, frames.con)
    dL = left(frames.dcov, frames.dcon)
    dR = np.swapaxes(frames.dcon if kind == "contravariant" else frames.dcov, -1, -2)
    Tc = L @ T @ R
    dTc = dL @ T @ R + L @ dT @ R + L @ T @ dR
    return Tc, dTc


def vector_components(v, dv, frames, kind: str = "covariant"):
    """``v_j = v . g_j`` (covariant) or ``v^j = v . g^j`` and their partials."""
    B, dB = (frames.cov, frames.dcov) if kind == "covariant" else (frames.con, frames.dcon)
    return B @ v, dB @ v + dv @ B.T


def field_tensor_components(T: Field, chart: Chart3, x, kind: str = "covariant",
                            method: str = "product"):
    """Components of a tensor field at ``x`` and their partials.

    ``method="product"`` differentiates ``L T R`` by the product rule using
    the field's and chart's derivatives; ``method="fd"`` takes central
    differences of the component functions themselves.
    """
    x = np.asarray(x, dtype=float)
    frames = frames_at(chart, x)
    if method == "product":
        return tensor_components(T(x), T.partials(x), frames, kind)
    left, right = _SANDWICH[kind]

    def comps(y):
        cov, con = _basis(chart, y)
        return left(cov, con) @ T(y) @ right(cov, con)

    return comps(x), central_partials(comps, x)


def field_vector_components(v: Field, chart: Chart3, x, kind: str = "covariant",
                            method: str = "product"):
    x = np.asarray(x, dtype=float)
    frames = frames_at(chart, x)
    if method == "product":
        return vector_components(v(x), v.partials(x), frames, kind)

    def comps(y):
        cov, con = _basis(chart, y)
        return (cov if kind == "covariant" else con) @ v(y)

    return comps(x), central_partials(comps, x)


def covariant_derivative_vector(vc, dvc, christoffel) -> np.ndarray:
    """``v_{j|i} = v_{j,i} - Gamma^r_ij v_r`` stacked as ``[i, j]``."""
    return dvc - np.einsum("rij,r->ij", christoffel, vc)


def covariant_derivative_covariant(Tc, dTc, christoffel) -> np.ndarray:
    """``T_{sj|i} = T_{sj,i} - Gamma^r_is T_rj - Gamma^r_ij T_sr`` stacked as ``[i, s, j]``."""
    return (dTc - np.einsum("ris,rj->isj", christoffel, Tc)
            - np.einsum("rij,sr->isj", christoffel, Tc))


def covariant_derivative_mixed(Tm, dTm, christoffel) -> np.ndarray:
    """``T^s_{j|i} = T^s_{j,i} + Gamma^s_ir T^r_j - Gamma^r_ij T^s_r`` as ``[i, s, j]``."""
    return (dTm + np.einsum("sir,rj->isj", christoffel, Tm)
            - np.einsum("rij,sr->isj", christoffel, Tm))


# ---------------------------------------------------------------------------
# curl


def curl_vec(v: Field, chart: Chart3, x) -> np.ndarray:
    """``curl v = -v_,i x g^i``."""
    frames = frames_at(chart, x)
    return -np.cross(v.partials(x), frames.con).sum(axis=0)


def curl_tensor(T: Field, chart: Chart3, x) -> np.ndarray:
    """``Curl T = -T_,i x g^i`` with the right cross product acting row-wise."""
    frames = frames_at(chart, x)
    return curl_tensor_from_partials(T.partials(x), frames)


def curl_tensor_from_partials(dT, frames) -> np.ndarray:
    return -sum(tensor_cross_vector(dT[i], frames.con[i]) for i in range(3))


def curl_transposed(T: Field, chart: Chart3, x) -> np.ndarray:
    """The transposed Curl convention, ``(Curl T)^T``."""
    return curl_tensor(T, chart, x).T


def curl_vec_from_covariant(vc, dvc, frames) -> np.ndarray:
    """``curl v = eps^ijk v_{j|i} g_k``."""
    vd = covariant_derivative_vector(vc, dvc, frames.christoffel)
    ck = np.einsum("ijk,ij->k", frames.eps_con, vd)
    return ck @ frames.cov


def curl_from_covariant(Tc, dTc, frames) -> np.ndarray:
    """``Curl T = eps^ijk T_{sj|i} g^s (x) g_k``."""
    Td = covariant_derivative_covariant(Tc, dTc, frames.christoffel)
    C = np.einsum("ijk,isj->sk", frames.eps_con, Td)
    return frames.con.T @ C @ frames.cov


def curl_from_mixed(Tm, dTm, frames) -> np.ndarray:
    """``Curl T = eps^ijk T^s_{j|i} g_s (x) g_k``."""
    Td = covariant_derivative_mixed(Tm, dTm, frames.christoffel)
    C = np.einsum("ijk,isj->sk", frames.eps_con, Td)
    return frames.cov.T @ C @ frames.cov


def curl_vec_components(v: Field, chart: Chart3, x, method: str = "product") -> np.ndarray:
    vc, dvc = field_vector_components(v, chart, x, "covariant", method)
    return curl_vec_from_covariant(vc, dvc, frames_at(chart, x))


def curl_tensor_components(T: Field, chart: Chart3, x, kind: str = "covariant",
                           method: str = "product") -> np.ndarray:
    """Curl from covariant (``kind="covariant"``) or mixed components."""
    Tc, dTc = field_tensor_components(T, chart, x, kind, method)
    frames = frames_at(chart, x)
    if kind == "covariant":
        return curl_from_covariant(Tc, dTc, frames)
    if kind == "mixed":
        return curl_from_mixed(Tc, dTc, frames)
    raise ValueError(f"unsupported component kind {kind!r}")


def curl_rowwise(T: Field, chart: Chart3, x, basis: str = "covariant",
                 method: str = "product") -> np.ndarray:
    """Row-wise Curl in curvilinear coordinates.

    ``basis="covariant"``: ``Curl T = g^i (x) curl_cov(T_i)`` with
    ``T_i = T^T g_i`` and ``T_i|j = T_i,j - Gamma^r_ji T_r``.
    ``basis="contravariant"``: ``Curl T = g_i (x) curl_cov(T^i)`` with
    ``T^i = T^T g^i`` and ``T^i|j = T^i,j + Gamma^i_rj T^r``.
    """
    x = np.asarray(x, dtype=float)
    frames = frames_at(chart, x)
    chr_ = frames.christoffel
    B, dB = (frames.cov, frames.dcov) if basis == "covariant" else (frames.con, frames.dcon)
    if method == "product":
        Tx = T(x)
        rows = B @ Tx
        drows = dB @ Tx + B @ T.partials(x)  # [j, i, :] = d(T_i)/dx_j
    else:
        def rows_at(y):
            cov, con = _basis(chart, y)
            return (cov if basis == "covariant" else con) @ T(y)

        rows = rows_at(x)
        drows = central_partials(rows_at, x)
    if basis == "covariant":
        rd = drows - np.einsum("rji,rc->jic", chr_, rows)
        outer = frames.con
    else:
        rd = drows + np.einsum("irj,rc->jic", chr_, rows)
        outer = frames.cov
    curls = -np.cross(rd, frames.con[:, None, :]).sum(axis=0)  # [i, :] = curl_cov(row i)
    return outer.T @ curls


# ---------------------------------------------------------------------------
# Cartesian forms


def curl_vec_cartesian(dv) -> np.ndarray:
    """``curl v = e_ijk v_j,i e_k`` from Cartesian partials ``dv[i, j]``."""
    return np.einsum("ijk,ij->k", LEVI_CIVITA, dv)


def curl_tensor_cartesian(dT) -> np.ndarray:
    """``Curl T = e_ijk T_sj,i e_s (x) e_k`` from ``dT[i, s, j]``."""
    return np.einsum("ijk,isj->sk", LEVI_CIVITA, dT)


def curl_tensor_rows_cartesian(dT) -> np.ndarray:
    """Rows of ``Curl T`` are the curls of the rows of ``T``."""
    return np.stack([curl_vec_cartesian(dT[:, s, :]) for s in range(3)])
