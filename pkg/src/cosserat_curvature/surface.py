"""Surface frames, fundamental tensors and the surface Curl operator.

A :class:`SurfacePatch` maps ``(x1, x2)`` into space.  Its frames store the
tangent basis and the unit normal together: ``cov`` has rows ``a_1, a_2,
n0`` and ``con`` has rows ``a^1, a^2, n0``, so index 2 plays the role of the
normal index "3" in component formulas.  The normal is ``a_1 x a_2 / |a_1 x
a_2|`` and the sign of the second fundamental tensor follows from it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curvilinear import tensor_components, vector_components
from .errors import DegenerateSurface, OutOfDomain
from .fields import Field, central_partials, central_second_partials, fd_step
from .tensor import LEVI_CIVITA_2D, tensor_cross_vector

DEGENERATE_AREA = 1e-12


@dataclass(frozen=True)
class SurfacePatch:
    """Parametrization ``y0`` over a rectangle; ``jacobian`` rows are ``a_alpha``."""

    y0: Callable[[np.ndarray], np.ndarray]
    box: tuple
    jacobian: Callable | None = None
    hessian: Callable | None = None
    name: str = "patch"

    @property
    def analytic(self) -> bool:
        return self.jacobian is not None

    def numeric(self) -> "SurfacePatch":
        return SurfacePatch(self.y0, self.box, None, None, self.name)

    def as_field(self) -> Field:
        return Field(self.y0, self.jacobian, name=self.name)

    def check_point(self, x, margin=0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo, hi = (np.asarray(b, dtype=float) for b in self.box)
        if x.shape != lo.shape or np.any(x < lo + margin) or np.any(x > hi - margin):
            raise OutOfDomain(f"point {x.tolist()} outside {self.name} box {lo.tolist()}..{hi.tolist()}")
        return x

    def sample(self, rng: np.random.Generator, n: int, inset: float = 0.05) -> np.ndarray:
        lo, hi = (np.asarray(b, dtype=float) for b in self.box)
        pad = inset * (hi - lo)
        return rng.uniform(lo + pad, hi - pad, size=(n, 2))


@dataclass(frozen=True)
class SurfaceFrames:
    x: np.ndarray
    cov: np.ndarray
    con: np.ndarray
    area: float
    metric: np.ndarray
    metric_inv: np.ndarray
    christoffel: np.ndarray  # [gamma, alpha, beta]
    b_lo: np.ndarray  # b_{alpha beta} from the normal part of a_alpha,beta
    b_weingarten: np.ndarray  # b_{alpha beta} = -n0_,beta . a_alpha
    b_mixed: np.ndarray  # b^alpha_beta
    dcov: np.ndarray  # [beta, i] = d(cov[i]) / dx_beta
    dcon: np.ndarray

    @property
    def normal(self) -> np.ndarray:
        return self.cov[2]

    @property
    def eps_up(self) -> np.ndarray:
        """``eps^{alpha beta} = e_{alpha beta} / a``."""
        return LEVI_CIVITA_2D / self.area

    @property
    def eps_lo(self) -> np.ndarray:
        return self.area * LEVI_CIVITA_2D

    @property
    def first(self) -> np.ndarray:
        """First fundamental tensor ``a_alpha (x) a^alpha`` (the tangent identity)."""
        return self.cov[:2].T @ self.con[:2]

    @property
    def second(self) -> np.ndarray:
        """Second fundamental tensor ``b_{alpha beta} a^alpha (x) a^beta``."""
        return self.con[:2].T @ self.b_lo @ self.con[:2]

    @property
    def second_weingarten(self) -> np.ndarray:
        """``-Grad_s n0 = -n0_,alpha (x) a^alpha``."""
        return -self.dcov[:, 2].T @ self.con[:2]

    @property
    def alternator(self) -> np.ndarray:
        """``c = eps^{alpha beta} a_alpha (x) a_beta``."""
        return self.cov[:2].T @ self.eps_up @ self.cov[:2]


def _tangents(patch: SurfacePatch, x):
    if patch.jacobian is not None:
        return np.asarray(patch.jacobian(x), dtype=float)
    return central_partials(patch.y0, x)


def surf_frames(patch: SurfacePatch, x) -> SurfaceFrames:
    x = patch.check_point(x, 0.0 if patch.analytic else 2.0 * float(np.max(fd_step(x))))
    tang = _tangents(patch, x)
    if patch.hessian is not None:
        hess = np.asarray(patch.hessian(x), dtype=float)
    elif patch.jacobian is not None:
        hess = np.swapaxes(central_partials(patch.jacobian, x), 0, 1)
    else:
        hess = central_second_partials(patch.y0, x)
    c = np.cross(tang[0], tang[1])
    area = float(np.linalg.norm(c))
    if not area > DEGENERATE_AREA:
        raise DegenerateSurface(f"{patch.name}: |a_1 x a_2| = {area:.3e} at {x.tolist()}")
    n0 = c / area
    dc = np.cross(hess[0], tang[1]) + np.cross(tang[0], hess[1])  # [beta]
    dn = (dc - np.outer(dc @ n0, n0)) / area
    cov = np.vstack([tang, n0])
    dcov = np.stack([np.vstack([hess[0, b], hess[1, b], dn[b]]) for b in range(2)])
    cov_inv = np.linalg.inv(cov)
    con = cov_inv.T
    dcon = -np.swapaxes(cov_inv @ dcov @ cov_inv, -1, -2)
    metric = tang @ tang.T
    christoffel = np.einsum("abc,gc->gab", hess, con[:2])
    b_lo = hess @ n0
    b_weingarten = -(tang @ dn.T)  # [alpha, beta] = -n0_,beta . a_alpha
    b_mixed = -(con[:2] @ dn.T)
    return SurfaceFrames(x, cov, con, area, metric, np.linalg.inv(metric), christoffel,
                         b_lo, b_weingarten, b_mixed, dcov, dcon)


def _basis(patch: SurfacePatch, y):
    tang = _tangents(patch, y)
    n = np.cross(tang[0], tang[1])
    cov = np.vstack([tang, n / np.linalg.norm(n)])
    return cov, np.linalg.inv(cov).T


_SANDWICH = {
    "covariant": (lambda cov, con: cov, lambda cov, con: cov.T),
    "mixed": (lambda cov, con: con, lambda cov, con: cov.T),
}


def field_tensor_components(T: Field, patch: SurfacePatch, x, kind: str = "covariant",
                            method: str = "product"):
    """Surface components ``T_ij = a_i . T a_j`` (or ``T^i_j``) and partials ``[gamma, i, j]``."""
    x = np.asarray(x, dtype=float)
    if method == "product":
        return tensor_components(T(x), T.partials(x), surf_frames(patch, x), kind)
    left, right = _SANDWICH[kind]

    def comps(y):
        cov, con = _basis(patch, y)
        return left(cov, con) @ T(y) @ right(cov, con)

    return comps(x), central_partials(comps, x)


def field_vector_components(v: Field, patch: SurfacePatch, x, method: str = "product"):
    """Covariant components ``v_i = v . a_i`` and partials ``[gamma, i]``."""
    x = np.asarray(x, dtype=float)
    if method == "product":
        return vector_components(v(x), v.partials(x), surf_frames(patch, x), "covariant")
    return v(x) @ _basis(patch, x)[0].T, central_partials(lambda y: _basis(patch, y)[0] @ v(y), x)


# ---------------------------------------------------------------------------
# gradient, divergence, curl


def grad_s(v: Field, patch: SurfacePatch, x) -> np.ndarray:
    """``Grad_s v = v_,alpha (x) a^alpha``."""
    frames = surf_frames(patch, x)
    return v.partials(x).T @ frames.con[:2]


def div_s(v: Field, patch: SurfacePatch, x) -> float:
    return float(np.trace(grad_s(v, patch, x)))


def curl_s_vec(v: Field, patch: SurfacePatch, x) -> np.ndarray:
    """``curl_s v = -v_,alpha x a^alpha``."""
    frames = surf_frames(patch, x)
    return -np.cross(v.partials(x), frames.con[:2]).sum(axis=0)


def curl_s_tensor(T: Field, patch: SurfacePatch, x) -> np.ndarray:
    """``Curl_s T = -T_,alpha x a^alpha``."""
    frames = surf_frames(patch, x)
    return curl_s_from_partials(T.partials(x), frames)


def curl_s_from_partials(dT, frames: SurfaceFrames) -> np.ndarray:
    return -sum(tensor_cross_vector(dT[a], frames.con[a]) for a in range(2))


def _cov_deriv_vector(vc, dvc, chr_) -> np.ndarray:
    """``v_{beta|alpha}`` as ``[alpha, beta]``."""
    return dvc[:, :2] - np.einsum("gab,g->ab", chr_, vc[:2])


def curl_s_vec_from_components(vc, dvc, frames: SurfaceFrames) -> np.ndarray:
    """``curl_s v = eps^{ab} [(v_3,b + b^g_b v_g) a_a + v_{b|a} a_3]``."""
    eps = frames.eps_up
    vd = _cov_deriv_vector(vc, dvc, frames.christoffel)
    tang = dvc[:, 2] + frames.b_mixed.T @ vc[:2]  # [beta]
    coeff_t = eps @ tang  # [alpha]
    coeff_n = np.einsum("ab,ab->", eps, vd)
    return coeff_t @ frames.cov[:2] + coeff_n * frames.cov[2]


def curl_s_vec_components(v: Field, patch: SurfacePatch, x, method: str = "product") -> np.ndarray:
    vc, dvc = field_vector_components(v, patch, x, method)
    return curl_s_vec_from_components(vc, dvc, surf_frames(patch, x))


def vector_derivative_from_components(vc, dvc, frames: SurfaceFrames) -> np.ndarray:
    """Reassemble ``v_,alpha`` from covariant components; rows ``alpha``."""
    vd = _cov_deriv_vector(vc, dvc, frames.christoffel)
    b = frames.b_lo
    tang = vd - b * vc[2]  # [alpha, beta]
    norm_part = dvc[:, 2] + frames.b_mixed.T @ vc[:2]  # [alpha]
    return tang @ frames.con[:2] + np.outer(norm_part, frames.con[2])


def _surface_cov_derivs(Tc, dTc, chr_):
    """Covariant derivatives of covariant surface components, indexed ``[gamma, ...]``."""
    Tab = Tc[:2, :2]
    d_ab = (dTc[:, :2, :2] - np.einsum("dbg,ad->gab", chr_, Tab)
            - np.einsum("dag,db->gab", chr_, Tab))
    d_a3 = dTc[:, :2, 2] - np.einsum("bag,b->ga", chr_, Tc[:2, 2])
    d_3a = dTc[:, 2, :2] - np.einsum("bag,b->ga", chr_, Tc[2, :2])
    return d_ab, d_a3, d_3a


def tensor_derivative_from_components(Tc, dTc, frames: SurfaceFrames) -> np.ndarray:
    """Reassemble ``T_,gamma`` from covariant surface components; ``[gamma]``."""
    b, bm = frames.b_lo, frames.b_mixed
    d_ab, d_a3, d_3a = _surface_cov_derivs(Tc, dTc, frames.christoffel)
    out = []
    for g in range(2):
        C = np.empty((3, 3))
        C[:2, :2] = d_ab[g] - np.outer(b[:, g], Tc[2, :2]) - np.outer(Tc[:2, 2], b[:, g])
        C[:2, 2] = d_a3[g] + Tc[:2, :2] @ bm[:, g] - b[:, g] * Tc[2, 2]
        C[2, :2] = d_3a[g] + bm[:, g] @ Tc[:2, :2] - b[:, g] * Tc[2, 2]
        C[2, 2] = dTc[g, 2, 2] + bm[:, g] @ Tc[:2, 2] + bm[:, g] @ Tc[2, :2]
        out.append(frames.con.T @ C @ frames.con)
    return np.stack(out)


def curl_s_from_covariant(Tc, dTc, frames: SurfaceFrames) -> np.ndarray:
    """Surface Curl from covariant components, basis ``a^i (x) a_j``."""
    b, bm, eps = frames.b_lo, frames.b_mixed, frames.eps_up
    d_ab, d_a3, d_3a = _surface_cov_derivs(Tc, dTc, frames.christoffel)
    C = np.zeros((3, 3))
    for g in range(2):
        # eps^{beta gamma} (T_a3|g + b^s_g T_as - b_ag T_33) a^a (x) a_b
        C[:2, :2] += np.outer(d_a3[g] + Tc[:2, :2] @ bm[:, g] - b[:, g] * Tc[2, 2], eps[:, g])
        # eps^{gamma beta} (T_ab|g - b_ag T_3b) a^a (x) a_3
        C[:2, 2] += (d_ab[g] - np.outer(b[:, g], Tc[2, :2])) @ eps[g]
        # eps^{beta gamma} (T_33,g + b^a_g T_a3 + b^a_g T_3a) a^3 (x) a_b
        C[2, :2] += (dTc[g, 2, 2] + bm[:, g] @ Tc[:2, 2] + bm[:, g] @ Tc[2, :2]) * eps[:, g]
        # eps^{gamma beta} (T_3b|g + b^a_g T_ab) a^3 (x) a_3
        C[2, 2] += (d_3a[g] + bm[:, g] @ Tc[:2, :2]) @ eps[g]
    return frames.con.T @ C @ frames.cov


def curl_s_from_mixed(Tm, dTm, frames: SurfaceFrames) -> np.ndarray:
    """Surface Curl from mixed components ``T^i_j``, basis ``a_i (x) a_j``."""
    b, bm, eps, chr_ = frames.b_lo, frames.b_mixed, frames.eps_up, frames.christoffel
    Tab = Tm[:2, :2]
    # T^a_b|g = T^a_b,g + Gamma^a_gs T^s_b - Gamma^s_bg T^a_s
    d_ab = dTm[:, :2, :2] + np.einsum("ags,sb->gab", chr_, Tab) - np.einsum("sbg,as->gab", chr_, Tab)
    d_a3 = dTm[:, :2, 2] + np.einsum("ags,s->ga", chr_, Tm[:2, 2])
    d_3b = dTm[:, 2, :2] - np.einsum("sbg,s->gb", chr_, Tm[2, :2])
    C = np.zeros((3, 3))
    for g in range(2):
        C[:2, :2] += np.outer(d_a3[g] + Tab @ bm[:, g] - bm[:, g] * Tm[2, 2], eps[:, g])
        C[:2, 2] += (d_ab[g] - np.outer(bm[:, g], Tm[2, :2])) @ eps[g]
        C[2, :2] += (dTm[g, 2, 2] + b[:, g] @ Tm[:2, 2] + bm[:, g] @ Tm[2, :2]) * eps[:, g]
        C[2, 2] += (d_3b[g] + b[:, g] @ Tab) @ eps[g]
    return frames.cov.T @ C @ frames.cov


def curl_s_tensor_components(T: Field, patch: SurfacePatch, x, kind: str = "covariant",
                             method: str = "product") -> np.ndarray:
    Tc, dTc = field_tensor_components(T, patch, x, kind, method)
    frames = surf_frames(patch, x)
    if kind == "covariant":
        return curl_s_from_covariant(Tc, dTc, frames)
    if kind == "mixed":
        return curl_s_from_mixed(Tc, dTc, frames)
    raise ValueError(f"unsupported component kind {kind!r}")


def curl_s_rowwise(T: Field, patch: SurfacePatch, x, basis: str = "covariant",
                   method: str = "product") -> np.ndarray:
    """Row-wise surface Curl.

    ``basis="covariant"`` uses ``T = a^i (x) T_i`` with ``T_i = T^T a_i``;
    ``basis="contravariant"`` uses ``T = a_i (x) T^i`` with ``T^i = T^T a^i``.
    """
    x = np.asarray(x, dtype=float)
    frames = surf_frames(patch, x)
    chr_, b, bm = frames.christoffel, frames.b_lo, frames.b_mixed
    B, dB = (frames.cov, frames.dcov) if basis == "covariant" else (frames.con, frames.dcon)
    if method == "product":
        Tx = T(x)
        rows = B @ Tx
        drows = dB @ Tx + B @ T.partials(x)  # [gamma, i, :]
    else:
        def rows_at(y):
            cov, con = _basis(patch, y)
            return (cov if basis == "covariant" else con) @ T(y)

        rows = rows_at(x)
        drows = central_partials(rows_at, x)
    total = np.zeros((3, 3))
    for g in range(2):
        if basis == "covariant":
            # a^a (x) (T_a|g - b_ag T_3) + a^3 (x) (T_3,g + b^a_g T_a)
            tang = drows[g, :2] - chr_[:, :, g].T @ rows[:2] - np.outer(b[:, g], rows[2])
            norm_row = drows[g, 2] + bm[:, g] @ rows[:2]
            outer = frames.con
        else:
            # a_a (x) (T^a_|g - b^a_g T^3) + a_3 (x) (T^3_,g + b_ag T^a)
            tang = drows[g, :2] + chr_[:, g, :] @ rows[:2] - np.outer(bm[:, g], rows[2])
            norm_row = drows[g, 2] + b[:, g] @ rows[:2]
            outer = frames.cov
        inner = np.vstack([tang, norm_row])
        total -= outer.T @ tensor_cross_vector(inner, frames.con[g])
    return total


def surf_covariant_derivative(T: Field, patch: SurfacePatch, x, method: str = "product") -> np.ndarray:
    """``T_,gamma`` rebuilt from the surface covariant derivatives of the components of ``T``.

    Works for vector and second-order tensor fields; the result is indexed
    ``[gamma, ...]``.
    """
    fr = surf_frames(patch, x)
    if T(x).ndim == 1:
        vc, dvc = field_vector_components(T, patch, x, method)
        return vector_derivative_from_components(vc, dvc, fr)
    Tc, dTc = field_tensor_components(T, patch, x, "covariant", method)
    return tensor_derivative_from_components(Tc, dTc, fr)
