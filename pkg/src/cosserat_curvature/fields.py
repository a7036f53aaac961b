"""Evaluatable fields over a parameter box and their partial derivatives.

A :class:`Field` maps a parameter point ``x`` (2 or 3 coordinates) to a
scalar, vector or matrix.  Partials are stacked along a new leading axis:
``field.partials(x)[i]`` is the derivative with respect to ``x_i``.  They come
from a user-supplied analytic function when one is given and from central
differences otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from .tensor import IDENTITY, skew_from_axial

EPS = np.finfo(float).eps


def fd_step(x) -> np.ndarray:
    """Per-coordinate step ``eps^(1/3) max(1, |x_i|)`` for central differences."""
    return EPS ** (1.0 / 3.0) * np.maximum(1.0, np.abs(np.asarray(x, dtype=float)))


def central_partials(fn: Callable, x, step: float | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = fd_step(x) if step is None else np.full(x.shape, float(step))
    out = []
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h[i]
        xm[i] -= h[i]
        out.append((np.asarray(fn(xp), dtype=float) - np.asarray(fn(xm), dtype=float)) / (xp[i] - xm[i]))
    return np.stack(out)


def central_second_partials(fn: Callable, x, step: float | None = None) -> np.ndarray:
    """Second partials ``[i, j] = d^2 fn / dx_i dx_j`` by a four-point stencil.

    The default step ``eps^(1/4) max(1, |x|)`` balances truncation against
    round-off for a second difference.
    """
    x = np.asarray(x, dtype=float)
    h = EPS ** 0.25 * np.maximum(1.0, np.abs(x)) if step is None else np.full(x.shape, float(step))
    n = x.size
    f0 = np.asarray(fn(x), dtype=float)
    out = np.empty((n, n) + f0.shape)
    for i in range(n):
        for j in range(i, n):
            def at(si, sj):
                y = x.copy()
                y[i] += si * h[i]
                y[j] += sj * h[j]
                return np.asarray(fn(y), dtype=float)

            val = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j])
            out[i, j] = val
            out[j, i] = val
    return out


@dataclass(frozen=True)
class Field:
    """A smooth field with an analytic or central-difference derivative strategy."""

    fn: Callable[[np.ndarray], np.ndarray]
    dfn: Callable[[np.ndarray], np.ndarray] | None = None
    step: float | None = None
    name: str = "field"

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    @property
    def analytic(self) -> bool:
        return self.dfn is not None

    def partials(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.dfn is not None:
            return np.asarray(self.dfn(x), dtype=float)
        return central_partials(self.fn, x, self.step)

    def numeric(self, step: float | None = None) -> "Field":
        """The same field with its derivatives taken by central differences."""
        return Field(self.fn, None, step, self.name)


def constant_field(value, name: str = "constant") -> Field:
    value = np.array(value, dtype=float)

    def d(x):
        return np.zeros((len(x),) + value.shape)

    return Field(lambda x: value.copy(), d, name=name)


def polynomial_field(terms: Sequence[tuple], name: str = "polynomial") -> Field:
    """Field ``sum_t c_t prod_i x_i^{p_ti}`` with array coefficients ``c_t``.

    ``terms`` holds ``(coeff, powers)`` pairs; all coefficients share a shape.
    """
    coeffs = np.array([np.asarray(c, dtype=float) for c, _ in terms])
    powers = np.array([list(p) for _, p in terms], dtype=int)

    def fn(x):
        mono = np.prod(x[None, :] ** powers, axis=1)
        return np.tensordot(mono, coeffs, axes=1)

    def dfn(x):
        out = []
        for i in range(len(x)):
            p = powers.copy()
            fac = p[:, i].astype(float)
            p[:, i] = np.maximum(p[:, i] - 1, 0)
            mono = fac * np.prod(x[None, :] ** p, axis=1)
            out.append(np.tensordot(mono, coeffs, axes=1))
        return np.stack(out)

    return Field(fn, dfn, name=name)


def random_polynomial_field(rng: np.random.Generator, dim: int, shape: tuple,
                            degree: int = 3, scale: float = 0.5, name: str = "random") -> Field:
    """Random polynomial field with every monomial of total degree <= ``degree``."""
    terms = []
    for powers in np.ndindex(*(degree + 1,) * dim):
        if sum(powers) <= degree:
            terms.append((scale * rng.standard_normal(shape) / (1 + sum(powers)), powers))
    return polynomial_field(terms, name=name)


def affine_field(base: Field, matrix, offset, name: str = "affine") -> Field:
    """Field ``x -> A base(x) + c`` for vector-valued ``base``."""
    A = np.asarray(matrix, dtype=float)
    c = np.asarray(offset, dtype=float)
    dfn = None
    if base.analytic:
        def dfn(x):
            return base.partials(x) @ A.T
    return Field(lambda x: A @ base(x) + c, dfn, name=name)


def sum_fields(*fields: Field, name: str = "sum") -> Field:
    dfn = None
    if all(f.analytic for f in fields):
        def dfn(x):
            return sum(f.partials(x) for f in fields)
    return Field(lambda x: sum(f(x) for f in fields), dfn, name=name)


def matmul_fields(left: Field, right: Field, name: str = "product") -> Field:
    """Pointwise matrix product with the product rule for analytic factors."""
    dfn = None
    if left.analytic and right.analytic:
        def dfn(x):
            return left.partials(x) @ right(x) + left(x) @ right.partials(x)
    return Field(lambda x: left(x) @ right(x), dfn, name=name)


# ---------------------------------------------------------------------------
# rotation fields


@dataclass(frozen=True)
class AngleFunction:
    """Scalar angle ``c x_i`` (``linear``) or ``sin(c x_i)`` (``sin``)."""

    kind: str
    coeff: float
    var: int

    def __post_init__(self):
        if self.kind not in ("linear", "sin"):
            raise ValueError(f"unknown angle function {self.kind!r}")

    def __call__(self, x) -> float:
        t = self.coeff * x[self.var]
        return float(t if self.kind == "linear" else np.sin(t))

    def gradient(self, x) -> np.ndarray:
        g = np.zeros(len(x))
        t = self.coeff * x[self.var]
        g[self.var] = self.coeff if self.kind == "linear" else self.coeff * np.cos(t)
        return g


def _unit(axis) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.0:
        raise ValueError("rotation axis must be nonzero")
    return axis / n


def constant_rotation(axis=(0.0, 0.0, 1.0), angle: float = 0.0, name: str = "constant") -> Field:
    R = Rotation.from_rotvec(angle * _unit(axis)).as_matrix()
    return constant_field(R, name=name)


def axis_angle_field(axis, angle: AngleFunction, name: str = "axis_angle") -> Field:
    """Rotation by ``angle(x)`` about a fixed ``axis``; ``dQ/dx_i = angle_,i [n]x Q``."""
    n = _unit(axis)
    K = skew_from_axial(n)

    def fn(x):
        return Rotation.from_rotvec(angle(x) * n).as_matrix()

    def dfn(x):
        Q = fn(x)
        return angle.gradient(x)[:, None, None] * (K @ Q)[None]

    return Field(fn, dfn, name=name)


def composed_rotation(factors: Sequence[Field], name: str = "composed") -> Field:
    """Product ``Q_1 Q_2 ... Q_n`` of rotation fields."""
    factors = list(factors)
    if not factors:
        return constant_field(IDENTITY, name=name)

    def fn(x):
        out = IDENTITY.copy()
        for f in factors:
            out = out @ f(x)
        return out

    dfn = None
    if all(f.analytic for f in factors):
        def dfn(x):
            vals = [f(x) for f in factors]
            ders = [f.partials(x) for f in factors]
            total = 0.0
            for k in range(len(factors)):
                left = IDENTITY.copy()
                for v in vals[:k]:
                    left = left @ v
                right = IDENTITY.copy()
                for v in vals[k + 1:]:
                    right = right @ v
                total = total + left @ ders[k] @ right
            return total

    return Field(fn, dfn, name=name)
