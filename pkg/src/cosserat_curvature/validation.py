"""Property and multi-route checks over the catalog.

Each check samples random interior points for every case of its suite,
records the worst residual against a fixed tolerance and remembers the
first failing ``(case, point)``.  A few route implementations are looked up
in a registry so that a fault can replace one of them; a meaningful suite
must then report at least one failing check.
"""
from __future__ import annotations

import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.spatial.transform import Rotation

from . import catalog
from . import cosserat3d as c3
from . import curvilinear as cv
from . import energy as en
from . import shell as sh
from . import surface as sf
from .fields import Field, central_partials, composed_rotation, constant_field, random_polynomial_field
from .tensor import (IDENTITY, axl, norm, rotation_defect, skew_from_axial, sym, tensor_cross_vector,
                     vector_cross_tensor)

SUITES = ("curl3d", "cosserat3d", "surface", "shell", "energy")

DEFAULT_ROUTES: dict[str, Callable] = {
    "curl_tensor": cv.curl_tensor,
    "surface_cross": tensor_cross_vector,
    "shell_nye_dislocation": sh.shell_nye_dislocation,
    "shell_pair": lambda K, D: (K, D),
}

FAULTS: dict[str, dict[str, Callable]] = {
    # the pair handed to the shell Nye check is corrupted
    "shell_nye_pair": {"shell_pair": lambda K, D: (K, -D)},
    # sign flip of the right cross product in -(Qe^T Qe_,a) x a^a
    "dislocation_cross_sign": {"surface_cross": lambda T, w: -tensor_cross_vector(T, w)},
    # shell Nye map without its trace term
    "nye_drop_trace": {"shell_nye_dislocation": lambda K: -np.asarray(K, dtype=float).T},
    # the transposed Curl convention
    "curl_transpose": {"curl_tensor": cv.curl_transposed},
}


@dataclass
class CheckResult:
    name: str
    suite: str
    tolerance: float
    max_residual: float = 0.0
    samples: int = 0
    wall_time: float = 0.0
    worst: dict | None = None
    first_failure: dict | None = None

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def add(self, residual: float, case: str, point=None) -> None:
        residual = float(residual)
        self.samples += 1
        where = {"case": case, "point": None if point is None else [float(v) for v in point],
                 "residual": residual}
        if self.worst is None or not residual <= self.max_residual:
            self.max_residual = residual if np.isfinite(residual) else float("inf")
            self.worst = where
        if self.first_failure is None and not residual <= self.tolerance:
            self.first_failure = where

    def to_json(self) -> dict:
        return {"name": self.name, "suite": self.suite, "tolerance": self.tolerance,
                "max_residual": self.max_residual, "passed": self.passed,
                "samples": self.samples, "wall_time": self.wall_time,
                "worst": self.worst, "first_failure": self.first_failure}


@dataclass
class ValidationReport:
    suite: str
    samples: int
    seed: int
    fault: str | None
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self, timings: bool = True) -> dict:
        checks = [c.to_json() for c in self.checks]
        if not timings:
            for c in checks:
                c.pop("wall_time")
        return {"schema": catalog.SCHEMA_TAG, "suite": self.suite, "samples": self.samples,
                "seed": self.seed, "fault": self.fault, "passed": self.passed, "checks": checks}


@dataclass(frozen=True)
class Context:
    samples: int
    seed: int
    routes: dict

    def rng(self, name: str, case: str = "") -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(f"{name}/{case}".encode())])


_CHECKS: list[tuple[str, str, float, Callable]] = []


def check(suite: str, tolerance: float):
    def register(fn):
        _CHECKS.append((fn.__name__, suite, tolerance, fn))
        return fn
    return register


def check_names(suite: str = "all") -> list[str]:
    return sorted(n for n, s, _, _ in _CHECKS if suite in ("all", s))


def _diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _random_rotation(rng) -> np.ndarray:
    return Rotation.from_rotvec(rng.standard_normal(3)).as_matrix()


def _left_rotated(R, rot: Field) -> Field:
    return composed_rotation([constant_field(R), rot], name=f"R*{rot.name}")


# ---------------------------------------------------------------------------
# case builders


def continuum_cases(with_initial: bool = False):
    """``(label, Config3D)`` for every chart and rotation field of the catalog."""
    cases = []
    for cname, chart in catalog.default_charts().items():
        for n, (fname, rot) in enumerate(catalog.rotation_fields_3d().items()):
            phi = catalog.polynomial_deformation(chart.as_field(), 3, seed=n)
            cases.append((f"{cname}/{fname}", c3.Config3D(chart, phi, rot)))
            if with_initial:
                cases.append((f"{cname}/{fname}+q0",
                              c3.Config3D(chart, phi, rot, catalog.nontrivial_initial_rotation_3d())))
    return cases


def shell_cases():
    cases = []
    for pname, patch in catalog.default_patches().items():
        for n, (fname, rot) in enumerate(catalog.rotation_fields_2d().items()):
            m = catalog.polynomial_deformation(patch.as_field(), 2, seed=n)
            cases.append((f"{pname}/{fname}", sh.ShellConfig(patch, m, rot)))
    return cases


# ---------------------------------------------------------------------------
# curl3d


def _curl_vec_definition(v: Field, chart, x) -> np.ndarray:
    """``curl v . c = div(v x c)`` for each basis ``c``, with central differences."""
    frames = cv.frames_at(chart, x)
    out = np.empty(3)
    for c in range(3):
        e = IDENTITY[c]
        dw = central_partials(lambda y: np.cross(v(y), e), x)
        out[c] = float(np.einsum("ic,ic->", dw, frames.con))
    return out


def _curl_tensor_definition(T: Field, chart, x) -> np.ndarray:
    """Rows from ``(Curl T)^T c = curl(T^T c)``."""
    return np.stack([_curl_vec_definition(Field(lambda y, c=c: T(y)[c]), chart, x)
                     for c in range(3)])


@check("curl3d", 1e-6)
def chart_frames(ctx, res):
    """Dual bases, symmetry of metric and Christoffel symbols, and ``g_i,j = Gamma^r_ij g_r``."""
    for cname, chart in catalog.default_charts().items():
        for x in chart.sample(ctx.rng("chart_frames", cname), ctx.samples):
            fr = cv.frames_at(chart, x)
            dg = central_partials(chart.jacobian, x)  # [j, i] = g_i,j
            predicted = np.einsum("rij,rc->jic", fr.christoffel, fr.cov)
            r = max(_diff(fr.con @ fr.cov.T, IDENTITY), _diff(fr.metric, fr.metric.T),
                    _diff(fr.christoffel, np.swapaxes(fr.christoffel, 1, 2)),
                    _diff(dg, predicted), abs(fr.g - np.linalg.det(fr.metric)))
            res.add(r, cname, x)


@check("curl3d", 1e-6)
def curl3d_vector_routes(ctx, res):
    for cname, chart in catalog.default_charts().items():
        rng = ctx.rng("curl3d_vector_routes", cname)
        v = random_polynomial_field(rng, 3, (3,))
        for x in chart.sample(rng, ctx.samples):
            ref = cv.curl_vec(v, chart, x)
            others = [cv.curl_vec_components(v, chart, x, "product"),
                      cv.curl_vec_components(v, chart, x, "fd"),
                      _curl_vec_definition(v, chart, x)]
            res.add(max(_diff(ref, o) for o in others), cname, x)


@check("curl3d", 1e-6)
def curl3d_tensor_routes(ctx, res):
    curl = ctx.routes["curl_tensor"]
    for cname, chart in catalog.default_charts().items():
        rng = ctx.rng("curl3d_tensor_routes", cname)
        T = random_polynomial_field(rng, 3, (3, 3))
        for x in chart.sample(rng, ctx.samples):
            ref = curl(T, chart, x)
            others = [_curl_tensor_definition(T, chart, x)]
            for method in ("product", "fd"):
                others += [cv.curl_tensor_components(T, chart, x, "covariant", method),
                           cv.curl_tensor_components(T, chart, x, "mixed", method),
                           cv.curl_rowwise(T, chart, x, "covariant", method),
                           cv.curl_rowwise(T, chart, x, "contravariant", method)]
            res.add(max(_diff(ref, o) for o in others), cname, x)


@check("curl3d", 1e-12)
def curl3d_cartesian_reduction(ctx, res):
    """On the identity chart the curvilinear forms equal the Cartesian ones."""
    chart = catalog.identity_chart()
    rng = ctx.rng("curl3d_cartesian_reduction")
    T = random_polynomial_field(rng, 3, (3, 3))
    v = random_polynomial_field(rng, 3, (3,))
    for x in chart.sample(rng, ctx.samples):
        dT = T.partials(x)
        ref = cv.curl_tensor_cartesian(dT)
        r = max(_diff(ctx.routes["curl_tensor"](T, chart, x), ref),
                _diff(cv.curl_tensor_rows_cartesian(dT), ref),
                _diff(cv.curl_tensor_components(T, chart, x, "covariant"), ref),
                _diff(cv.curl_rowwise(T, chart, x, "contravariant"), ref),
                _diff(cv.curl_vec(v, chart, x), cv.curl_vec_cartesian(v.partials(x))))
        res.add(r, "identity", x)


@check("curl3d", 1e-14)
def curl3d_constant(ctx, res):
    rng = ctx.rng("curl3d_constant")
    T = constant_field(rng.standard_normal((3, 3)))
    for cname, chart in catalog.default_charts().items():
        for x in chart.sample(rng, ctx.samples):
            res.add(norm(ctx.routes["curl_tensor"](T, chart, x)), cname, x)


# ---------------------------------------------------------------------------
# cosserat3d


@check("cosserat3d", 1e-10)
def nye3d_analytic(ctx, res):
    """Nye relation and its inverse with analytic derivatives."""
    for label, cfg in continuum_cases():
        for x in cfg.chart.sample(ctx.rng("nye3d_analytic", label), ctx.samples):
            G = c3.wryness(cfg, x)
            D = c3.dislocation_density(cfg, x, curl=ctx.routes["curl_tensor"])
            res.add(max(c3.nye_check(G, D)), label, x)


@check("cosserat3d", 1e-6)
def nye3d_fd(ctx, res):
    """Nye relation with every derivative taken by central differences."""
    for label, cfg in continuum_cases():
        ncfg = cfg.numeric()
        for x in cfg.chart.sample(ctx.rng("nye3d_fd", label), ctx.samples):
            G = c3.wryness(ncfg, x)
            D = c3.dislocation_density(ncfg, x, curl=ctx.routes["curl_tensor"])
            res.add(max(c3.nye_check(G, D)), label, x)


@check("cosserat3d", 1e-10)
def nye3d_trace(ctx, res):
    for label, cfg in continuum_cases():
        for x in cfg.chart.sample(ctx.rng("nye3d_trace", label), ctx.samples):
            G = c3.wryness(cfg, x)
            D = c3.dislocation_density(cfg, x, curl=ctx.routes["curl_tensor"])
            res.add(abs(np.trace(D) - 2.0 * np.trace(G)), label, x)


@check("cosserat3d", 1e-6)
def wryness_routes(ctx, res):
    for label, cfg in continuum_cases(with_initial=True):
        for x in cfg.chart.sample(ctx.rng("wryness_routes", label), ctx.samples):
            ref = c3.wryness(cfg, x)
            others = [c3.wryness_total(cfg, x), c3.wryness_directors(cfg, x), c3.wryness_omega(cfg, x)]
            res.add(max(_diff(ref, o) for o in others), label, x)


@check("cosserat3d", 1e-6)
def dislocation_routes(ctx, res):
    for label, cfg in continuum_cases(with_initial=True):
        for x in cfg.chart.sample(ctx.rng("dislocation_routes", label), ctx.samples):
            ref = c3.dislocation_density(cfg, x, curl=ctx.routes["curl_tensor"])
            others = [c3.dislocation_density_cross(cfg, x), c3.dislocation_density_directors(cfg, x)]
            res.add(max(_diff(ref, o) for o in others), label, x)


@check("cosserat3d", 1e-6)
def omega_routes(ctx, res):
    """Both omega formulas agree and ``Qe_,i = omega_i x Qe``."""
    for label, cfg in continuum_cases(with_initial=True):
        for x in cfg.chart.sample(ctx.rng("omega_routes", label), ctx.samples):
            om = c3.omega_vectors(cfg, x)
            Q, dQ = cfg.rotation(x), cfg.rotation.partials(x)
            r = max(_diff(om, c3.omega_vectors_directors(cfg, x)),
                    _diff(dQ, skew_from_axial(om) @ Q))
            res.add(r, label, x)


@check("cosserat3d", 1e-10)
def strain_routes(ctx, res):
    """Tensor and director forms of the strain; zero strain under rigid motion."""
    for label, cfg in continuum_cases(with_initial=True):
        rng = ctx.rng("strain_routes", label)
        R = _random_rotation(rng)
        rigid = c3.Config3D(cfg.chart, Field(lambda y: R @ cfg.chart.theta(y) + 1.0,
                                             lambda y: cfg.chart.jacobian(y) @ R.T),
                            constant_field(R), cfg.initial_rotation)
        for x in cfg.chart.sample(rng, ctx.samples):
            r = max(_diff(c3.strain_measures(cfg, x).E, c3.strain_directors(cfg, x)),
                    norm(c3.strain_measures(rigid, x).E))
            res.add(r, label, x)


@check("cosserat3d", 1e-12)
def cosserat_cartesian_reduction(ctx, res):
    chart = catalog.identity_chart()
    for fname, rot in catalog.rotation_fields_3d().items():
        cfg = c3.Config3D(chart, chart.as_field(), rot)
        for x in chart.sample(ctx.rng("cosserat_cartesian_reduction", fname), ctx.samples):
            r = max(_diff(c3.wryness(cfg, x), c3.wryness_cartesian(cfg, x)),
                    _diff(c3.dislocation_density(cfg, x, curl=ctx.routes["curl_tensor"]),
                          c3.dislocation_cartesian(cfg, x)))
            res.add(r, f"identity/{fname}", x)


@check("cosserat3d", 1e-10)
def cosserat_left_invariance(ctx, res):
    for label, cfg in continuum_cases():
        rng = ctx.rng("cosserat_left_invariance", label)
        moved = c3.Config3D(cfg.chart, cfg.deformation, _left_rotated(_random_rotation(rng), cfg.rotation))
        curl = ctx.routes["curl_tensor"]
        for x in cfg.chart.sample(rng, ctx.samples):
            r = max(_diff(c3.wryness(cfg, x), c3.wryness(moved, x)),
                    _diff(c3.dislocation_density(cfg, x, curl), c3.dislocation_density(moved, x, curl)))
            res.add(r, label, x)


# ---------------------------------------------------------------------------
# surface


@check("surface", 1e-10)
def surface_frames(ctx, res):
    """Dual bases, cross-product table of the frame, and the fundamental tensors."""
    for pname, patch in catalog.default_patches().items():
        for x in patch.sample(ctx.rng("surface_frames", pname), ctx.samples):
            fr = sf.surf_frames(patch, x)
            a_lo, a_up, n0 = fr.cov[:2], fr.con[:2], fr.normal
            eu, el = fr.eps_up, fr.eps_lo
            A, B, C = fr.first, fr.second, fr.alternator
            r = [_diff(fr.con @ fr.cov.T, IDENTITY), abs(fr.area - np.sqrt(np.linalg.det(fr.metric)))]
            for al in range(2):
                r.append(_diff(np.cross(n0, a_up[al]), eu[al] @ a_lo))
                r.append(_diff(np.cross(n0, a_lo[al]), el[al] @ a_up))
                for be in range(2):
                    r.append(_diff(np.cross(a_up[al], a_up[be]), eu[al, be] * n0))
                    r.append(_diff(np.cross(a_lo[al], a_lo[be]), el[al, be] * n0))
            r += [_diff(A, A.T), _diff(B, B.T), _diff(C, -C.T), _diff(C @ C, -A),
                  _diff(C, -vector_cross_tensor(n0, A)), _diff(C, -tensor_cross_vector(A, n0)),
                  _diff(C, a_up.T @ el @ a_up), norm(A @ n0), norm(B @ n0), norm(n0 @ B),
                  _diff(fr.christoffel, np.swapaxes(fr.christoffel, 1, 2))]
            res.add(max(r), pname, x)


@check("surface", 1e-10)
def surface_b_crosscheck(ctx, res):
    """``b`` from the normal part of ``a_a,b`` equals ``b`` from ``-n0_,b``."""
    for pname, patch in catalog.default_patches().items():
        for x in patch.sample(ctx.rng("surface_b_crosscheck", pname), ctx.samples):
            fr = sf.surf_frames(patch, x)
            r = max(_diff(fr.b_lo, fr.b_weingarten), _diff(fr.second, fr.second_weingarten),
                    _diff(fr.b_mixed, fr.metric_inv @ fr.b_lo))
            res.add(r, pname, x)


@check("surface", 1e-6)
def surface_normal_fd(ctx, res):
    """Analytic frame derivatives against central differences of the frame."""
    for pname, patch in catalog.default_patches().items():
        for x in patch.sample(ctx.rng("surface_normal_fd", pname), ctx.samples):
            fr = sf.surf_frames(patch, x)
            fd = central_partials(lambda y: sf.surf_frames(patch, y).cov, x)
            res.add(_diff(fr.dcov, fd), pname, x)


def _div_s(w: Callable, fr, x) -> float:
    return float(np.einsum("ac,ac->", central_partials(w, x), fr.con[:2]))


def _curl_s_vec_definition(v: Field, patch, x) -> np.ndarray:
    """``curl_s v . k = Div_s(v x k)``."""
    fr = sf.surf_frames(patch, x)
    return np.array([_div_s(lambda y, k=k: np.cross(v(y), IDENTITY[k]), fr, x) for k in range(3)])


@check("surface", 1e-6)
def curl_s_vector_routes(ctx, res):
    for pname, patch in catalog.default_patches().items():
        rng = ctx.rng("curl_s_vector_routes", pname)
        v = random_polynomial_field(rng, 2, (3,))
        for x in patch.sample(rng, ctx.samples):
            ref = sf.curl_s_vec(v, patch, x)
            others = [sf.curl_s_vec_components(v, patch, x, "product"),
                      sf.curl_s_vec_components(v, patch, x, "fd"),
                      _curl_s_vec_definition(v, patch, x)]
            res.add(max(_diff(ref, o) for o in others), pname, x)


@check("surface", 1e-6)
def curl_s_tensor_routes(ctx, res):
    for pname, patch in catalog.default_patches().items():
        rng = ctx.rng("curl_s_tensor_routes", pname)
        T = random_polynomial_field(rng, 2, (3, 3))
        for x in patch.sample(rng, ctx.samples):
            ref = sf.curl_s_tensor(T, patch, x)
            others = [np.stack([_curl_s_vec_definition(Field(lambda y, c=c: T(y)[c]), patch, x)
                                for c in range(3)])]
            for method in ("product", "fd"):
                others += [sf.curl_s_tensor_components(T, patch, x, "covariant", method),
                           sf.curl_s_tensor_components(T, patch, x, "mixed", method),
                           sf.curl_s_rowwise(T, patch, x, "covariant", method),
                           sf.curl_s_rowwise(T, patch, x, "contravariant", method)]
            res.add(max(_diff(ref, o) for o in others), pname, x)


@check("surface", 1e-6)
def surface_covariant_derivative(ctx, res):
    """Reassembled ``v_,a`` and ``T_,g`` from surface components match central differences."""
    for pname, patch in catalog.default_patches().items():
        rng = ctx.rng("surface_covariant_derivative", pname)
        v = random_polynomial_field(rng, 2, (3,))
        T = random_polynomial_field(rng, 2, (3, 3))
        first = Field(lambda y: sf.surf_frames(patch, y).first)
        for x in patch.sample(rng, ctx.samples):
            fr = sf.surf_frames(patch, x)
            r = [_diff(sf.vector_derivative_from_components(*sf.field_vector_components(v, patch, x), fr),
                       central_partials(v, x))]
            for F in (T, first):
                Tc, dTc = sf.field_tensor_components(F, patch, x, "covariant", "fd")
                r.append(_diff(sf.tensor_derivative_from_components(Tc, dTc, fr), central_partials(F, x)))
            res.add(max(r), pname, x)


@check("surface", 1e-6)
def curl_s_grad_vanishes(ctx, res):
    """``curl_s Grad_s f`` has no normal part; its tangential part is
    ``eps^{ab} b^g_b f_,g a_a`` and therefore vanishes on planar patches."""
    for pname, patch in catalog.default_patches().items():
        rng = ctx.rng("curl_s_grad_vanishes", pname)
        f = random_polynomial_field(rng, 2, ())
        grad = Field(lambda y: f.partials(y) @ sf.surf_frames(patch, y).con[:2], name="grad_s f")
        for x in patch.sample(rng, ctx.samples):
            fr = sf.surf_frames(patch, x)
            c = sf.curl_s_vec(grad, patch, x)
            tangential = (fr.eps_up @ (fr.b_mixed.T @ f.partials(x))) @ fr.cov[:2]
            r = _diff(c, tangential)
            if np.allclose(fr.b_lo, 0.0):
                r = max(r, norm(c))
            res.add(r, pname, x)


@check("surface", 1e-12)
def surface_planar_reduction(ctx, res):
    """On the plane, surface operators are the Cartesian ones in ``x1, x2``."""
    patch = catalog.plane_patch()
    rng = ctx.rng("surface_planar_reduction")
    v = random_polynomial_field(rng, 2, (3,))
    for x in patch.sample(rng, ctx.samples):
        dv = v.partials(x)
        cart = np.array([dv[1, 2], -dv[0, 2], dv[0, 1] - dv[1, 0]])
        grad = np.zeros((3, 3))
        grad[:, :2] = dv.T
        r = max(_diff(sf.curl_s_vec(v, patch, x), cart), _diff(sf.grad_s(v, patch, x), grad),
                abs(sf.div_s(v, patch, x) - dv[0, 0] - dv[1, 1]))
        res.add(r, "plane", x)


# ---------------------------------------------------------------------------
# shell


@check("shell", 1e-6)
def shell_nye(ctx, res):
    for label, cfg in shell_cases():
        for x in cfg.patch.sample(ctx.rng("shell_nye", label), ctx.samples):
            K, D = ctx.routes["shell_pair"](sh.shell_bending_curvature(cfg, x), sh.shell_dislocation(cfg, x))
            nye = sh.shell_nye(K, D, dislocation_of=ctx.routes["shell_nye_dislocation"])
            res.add(max(nye.dislocation, nye.curvature), label, x)


@check("shell", 1e-6)
def shell_norm_identities(ctx, res):
    """Trace, skew, dev-sym and norm identities, and ``|K| <= |D| <= 2|K|`` (slack 1e-9)."""
    for label, cfg in shell_cases():
        for x in cfg.patch.sample(ctx.rng("shell_norm_identities", label), ctx.samples):
            K, D = ctx.routes["shell_pair"](sh.shell_bending_curvature(cfg, x), sh.shell_dislocation(cfg, x))
            nye = sh.shell_nye(K, D)
            bound = nye.bound_violation
            r = max(nye.trace, nye.skew, nye.dev_sym, nye.norm_d, nye.norm_k,
                    0.0 if bound <= 1e-9 else np.inf)
            res.add(r, label, x)


@check("shell", 1e-6)
def shell_curvature_routes(ctx, res):
    for label, cfg in shell_cases():
        for x in cfg.patch.sample(ctx.rng("shell_curvature_routes", label), ctx.samples):
            ref = sh.shell_bending_curvature(cfg, x)
            others = [sh.curvature_total(cfg, x), sh.curvature_directors(cfg, x),
                      sh.curvature_directors_expanded(cfg, x), sh.curvature_spin(cfg, x),
                      sh.curvature_omega(cfg, x)]
            k = sh.shell_kinematics(cfg, x)
            rates = axl(np.einsum("ji,ajl->ail", k.Qe, k.dQe), tol=None)
            r = max([_diff(ref, o) for o in others] + [_diff(rates, sh.axial_rates_directors(k))])
            res.add(r, label, x)


@check("shell", 1e-6)
def shell_dislocation_routes(ctx, res):
    for label, cfg in shell_cases():
        for x in cfg.patch.sample(ctx.rng("shell_dislocation_routes", label), ctx.samples):
            ref = sh.shell_dislocation(cfg, x)
            others = [sh.dislocation_cross(cfg, x, cross=ctx.routes["surface_cross"]),
                      sh.dislocation_directors(cfg, x)]
            res.add(max(_diff(ref, o) for o in others), label, x)


@check("shell", 1e-6)
def shell_omega_routes(ctx, res):
    for label, cfg in shell_cases():
        for x in cfg.patch.sample(ctx.rng("shell_omega_routes", label), ctx.samples):
            om = sh.shell_omega_vectors(cfg, x)
            r = max(_diff(om, sh.shell_omega_directors(cfg, x)),
                    _diff(cfg.rotation.partials(x), skew_from_axial(om) @ cfg.rotation(x)))
            res.add(r, label, x)


@check("shell", 1e-10)
def shell_strain_routes(ctx, res):
    for label, cfg in shell_cases():
        rng = ctx.rng("shell_strain_routes", label)
        R = _random_rotation(rng)
        patch = cfg.patch
        rigid = sh.ShellConfig(patch, Field(lambda y: R @ patch.y0(y) - 0.5,
                                            lambda y: patch.jacobian(y) @ R.T),
                               constant_field(R))
        for x in patch.sample(rng, ctx.samples):
            r = max(_diff(sh.shell_strain(cfg, x), sh.shell_strain_directors(cfg, x)),
                    norm(sh.shell_strain(rigid, x)))
            res.add(r, label, x)


@check("shell", 1e-6)
def planar_split(ctx, res):
    """Reassembly of ``De`` from its planar, mixed and trace parts; ``D_a3 = -K_3a``."""
    for label, cfg in shell_cases():
        for x in cfg.patch.sample(ctx.rng("planar_split", label), ctx.samples):
            fr = sf.surf_frames(cfg.patch, x)
            K, D = sh.shell_bending_curvature(cfg, x), sh.shell_dislocation(cfg, x)
            split = sh.planar_split(D, K, fr)
            k = sh.shell_kinematics(cfg, x)
            d13 = k.d[0] @ k.dd[:, 1].T - k.d0[0] @ k.dd0[:, 1].T  # d1 . d2_,a - d0_1 . d0_2,a
            r = max(_diff(split.reassemble(fr), D), _diff(split.D_a3, -split.K_3a),
                    _diff(split.D_a3, d13), _diff(fr.normal @ D, 0.5 * np.trace(D) * fr.normal),
                    _diff(split.D_par, -split.K_par.T + np.trace(K) * fr.first))
            res.add(r, label, x)


@check("shell", 1e-6)
def cofactor_structure(ctx, res):
    for label, cfg in shell_cases():
        for x in cfg.patch.sample(ctx.rng("cofactor_structure", label), ctx.samples):
            fr = sf.surf_frames(cfg.patch, x)
            K, D = sh.shell_bending_curvature(cfg, x), sh.shell_dislocation(cfg, x)
            out = sh.planar_cofactor_check(K, D, fr)
            split = sh.planar_split(D, K, fr)
            Kp = sh.PlanarTensor.from_tensor(split.K_par, fr)
            r = [out.planar, out.reassembly, _diff(split.D_par, sh.transform_T_alternator(Kp))]
            cof = sh.planar_cofactor(Kp, tol=1e-6)
            if cof is not None:
                r.append(_diff(split.D_par, cof))
            res.add(max(r), label, x)


@check("shell", 1e-10)
def transform_T(ctx, res):
    """Involution, ``-c S c``, planar cofactor and the component cofactor matrix."""
    for pname, patch in catalog.default_patches().items():
        rng = ctx.rng("transform_T", pname)
        for x in patch.sample(rng, ctx.samples):
            fr = sf.surf_frames(patch, x)
            S = sh.PlanarTensor(rng.standard_normal((2, 2)), fr)
            TS = sh.transform_T(S)
            lower = fr.cov[:2] @ TS.tensor @ fr.con[:2].T  # components on a^a (x) a_b
            r = [_diff(sh.transform_T(TS).tensor, S.tensor), _diff(TS.tensor, sh.transform_T_alternator(S)),
                 _diff(lower, sh.transform_T_components(S))]
            cof = sh.planar_cofactor(S, tol=1e-6)
            if cof is not None:
                r.append(_diff(TS.tensor, cof))
            res.add(max(r), pname, x)


@check("shell", 1e-10)
def initial_rotation_normality(ctx, res):
    """``Q0 = polar(a_i (x) e_i)`` is a rotation with ``Q0 e3 = n0``."""
    for pname, patch in catalog.default_patches().items():
        q0 = sh.initial_rotation_field(patch)
        for x in patch.sample(ctx.rng("initial_rotation_normality", pname), ctx.samples):
            fr = sf.surf_frames(patch, x)
            Q0 = q0(x)
            r = max(rotation_defect(Q0), _diff(Q0[:, 2], fr.normal),
                    float(np.max(np.abs(Q0[:, :2].T @ fr.normal))),
                    float(np.max(np.abs(sym(Q0.T @ fr.cov.T) - Q0.T @ fr.cov.T))),
                    1e-4 * _diff(q0.partials(x), central_partials(q0, x)))
            res.add(r, pname, x)


@check("shell", 1e-10)
def shell_left_invariance(ctx, res):
    for label, cfg in shell_cases():
        rng = ctx.rng("shell_left_invariance", label)
        moved = sh.ShellConfig(cfg.patch, cfg.deformation,
                               _left_rotated(_random_rotation(rng), cfg.rotation))
        for x in cfg.patch.sample(rng, ctx.samples):
            r = max(_diff(sh.shell_bending_curvature(cfg, x), sh.shell_bending_curvature(moved, x)),
                    _diff(sh.shell_dislocation(cfg, x), sh.shell_dislocation(moved, x)))
            res.add(r, label, x)


# ---------------------------------------------------------------------------
# energy

_PARAMS = en.EnergyParams(mu=1.0, kappa=2.0, mu_c=0.5, L_c=0.3, a1=1.0, a2=0.7, a3=1.3)


def _random_params(rng, p=2.0) -> en.EnergyParams:
    v = rng.uniform(0.1, 3.0, 7)
    return en.EnergyParams(*v, p=p)


@check("energy", 0.0)
def energy_positivity(ctx, res):
    """``W(0, 0) = 0`` and ``W > 0`` on random nonzero inputs (residual 1 on violation)."""
    rng = ctx.rng("energy_positivity")
    for n in range(20 * ctx.samples):
        P = _random_params(rng, p=2.0 + 2.0 * (n % 3 == 2))
        E, D = rng.standard_normal((2, 3, 3)) * rng.uniform(0, 1, 2)[:, None, None]
        W = en.energy_3d(E, D, P)
        r = float(en.energy_3d(np.zeros((3, 3)), np.zeros((3, 3)), P) != 0.0)
        r = max(r, float(not W > 0) if (norm(E) + norm(D)) > 0 else 0.0)
        res.add(r, f"random/{n}")


@check("energy", 1e-12)
def energy_homogeneity(ctx, res):
    """``W(tE, tD) = t^2 W(E, D)`` for the quadratic shell form (relative residual)."""
    rng = ctx.rng("energy_homogeneity")
    for n in range(ctx.samples):
        P = _random_params(rng)
        E, D = rng.standard_normal((2, 3, 3))
        W = en.energy_shell(E, D, P)
        r = max(abs(en.energy_shell(t * E, t * D, P) - t * t * W) / (t * t * W) for t in (0.5, 2.0))
        res.add(r, f"random/{n}")


@check("energy", 1e-15)
def energy_worked_values(ctx, res):
    """Pure trace strain gives ``4.5 kappa``; skew strain with unit axial vector gives ``2 mu_c``;
    the rotation-about-e3 shell curvature gives 1 with unit parameters."""
    rng = ctx.rng("energy_worked_values")
    for n in range(max(ctx.samples, 1) if ctx.samples else 0):
        P = _random_params(rng)
        zero = np.zeros((3, 3))
        r = max(abs(en.energy_3d(IDENTITY, zero, P) - 4.5 * P.kappa),
                abs(en.energy_3d(skew_from_axial([0, 0, 1]), zero, P) - 2.0 * P.mu_c),
                abs(en.energy_shell(zero, -np.outer([1, 0, 0], [0, 0, 1]), en.EnergyParams(1, 1, 1, 1)) - 1.0))
        res.add(r, f"params/{n}")


@check("energy", 1e-12)
def energy_frame_indifference(ctx, res):
    """Discrete total energy is unchanged by ``m -> R m + c``, ``Qe -> R Qe`` (relative)."""
    for pname, patch in catalog.default_patches().items():
        rng = ctx.rng("energy_frame_indifference", pname)
        grid = None
        for n in range(ctx.samples):
            state = en.perturbed_state(patch, (8, 8), 0.1, seed=int(rng.integers(1 << 31)), clamp="left")
            state.m[~state.fixed_m] += 0.02 * rng.standard_normal(state.m[~state.fixed_m].shape)
            if grid is None:
                grid = en.ShellGrid.build(patch, state.box, state.shape)
            R = Rotation.from_rotvec(rng.standard_normal(3))
            moved = state.copy()
            moved.m = state.m @ R.as_matrix().T + rng.standard_normal(3)
            moved.q = (R * Rotation.from_quat(state.q.reshape(-1, 4))).as_quat().reshape(state.q.shape)
            e0 = en._energy(state, grid, _PARAMS)
            e1 = en._energy(moved, grid, _PARAMS)
            res.add(abs(e1 - e0) / e0, f"{pname}/{n}")


@check("energy", 1e-5)
def energy_gradient(ctx, res):
    """Hand-derived gradient against central differences of the total energy, 4x4 grid."""
    for pname in ("plane", "cylinder", "graph"):
        patch = catalog.default_patches()[pname]
        rng = ctx.rng("energy_gradient", pname)
        for n in range(min(ctx.samples, 2)):
            state = en.perturbed_state(patch, (4, 4), 0.2, seed=int(rng.integers(1 << 31)), clamp="left")
            state.m[~state.fixed_m] += 0.05 * rng.standard_normal(state.m[~state.fixed_m].shape)
            grid = en.ShellGrid.build(patch, state.box, state.shape)
            _, g_m, g_xi = en._energy_and_gradient(state, grid, _PARAMS)
            fd_m, fd_xi = np.zeros_like(g_m), np.zeros_like(g_xi)
            h = 1e-6
            for idx in np.ndindex(g_m.shape):
                if state.fixed_m[idx[:2]]:
                    continue
                d = np.zeros_like(g_m)
                d[idx] = h
                z = np.zeros_like(d)
                fd_m[idx] = (en._energy(en.retract(state, d, z), grid, _PARAMS)
                             - en._energy(en.retract(state, -d, z), grid, _PARAMS)) / (2 * h)
                fd_xi[idx] = (en._energy(en.retract(state, z, d), grid, _PARAMS)
                              - en._energy(en.retract(state, z, -d), grid, _PARAMS)) / (2 * h)
            scale = max(np.max(np.abs(g_m)), np.max(np.abs(g_xi)))
            res.add(max(_diff(g_m, fd_m), _diff(g_xi, fd_xi)) / scale, f"{pname}/{n}")


@check("energy", 1.0)
def energy_curvature_smoothness(ctx, res):
    """For ``p > 2`` the curvature term has a vanishing gradient at ``D = 0``:
    the central-difference gradient at ``|D| = r`` stays below a fixed multiple of ``r^(p-1)``."""
    rng = ctx.rng("energy_curvature_smoothness")
    zero = np.zeros((3, 3))
    for n in range(ctx.samples):
        P = _random_params(rng, p=float(rng.choice([3.0, 4.0])))
        X = rng.standard_normal((3, 3))
        X /= norm(X)
        r = 1e-3
        h = 1e-6
        grad = np.zeros((3, 3))
        for idx in np.ndindex(3, 3):
            d = np.zeros((3, 3))
            d[idx] = h
            grad[idx] = (en.energy_3d(zero, r * X + d, P) - en.energy_3d(zero, r * X - d, P)) / (2 * h)
        bound = 10.0 * P.mu * P.L_c ** P.p * P.p * (3.0 * max(P.a1, P.a2, P.a3)) ** (P.p / 2) * r ** (P.p - 1)
        res.add(norm(grad) / bound, f"random/{n}")


# ---------------------------------------------------------------------------
# runner


def thread_count() -> int:
    try:
        n = int(os.environ.get("COSSERAT_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def run_check(name: str, ctx: Context) -> CheckResult:
    for n, suite, tol, fn in _CHECKS:
        if n == name:
            res = CheckResult(name, suite, tol)
            if ctx.samples > 0:
                start = time.perf_counter()
                fn(ctx, res)
                res.wall_time = time.perf_counter() - start
            return res
    raise KeyError(name)


def validate(suite: str = "all", samples: int = 50, seed: int = 1, fault: str | None = None,
             checks: list[str] | None = None, threads: int | None = None) -> ValidationReport:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    routes = dict(DEFAULT_ROUTES)
    if fault is not None:
        routes.update(FAULTS[fault])
    ctx = Context(samples, seed, routes)
    names = checks if checks is not None else check_names(suite)
    if samples <= 0:
        names = []  # vacuous pass
    workers = threads or thread_count()
    if workers > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda n: run_check(n, ctx), names))
    else:
        results = [run_check(n, ctx) for n in names]
    return ValidationReport(suite, samples, seed, fault, sorted(results, key=lambda c: c.name))
