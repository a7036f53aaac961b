import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from cosserat_curvature.errors import Degenerate, NotSkew
from cosserat_curvature.tensor import (IDENTITY, LEVI_CIVITA, axl, double_dot, dyad, norm,
                                       polar_factor, polar_factor_derivative, rotation_defect, skew,
                                       skew_from_axial, split, sym, tensor_cross_vector,
                                       vector_cross_tensor)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vec3 = arrays(float, 3, elements=finite)
mat3 = arrays(float, (3, 3), elements=finite)

E3_GENERATOR = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def test_levi_civita_entries():
    assert LEVI_CIVITA[0, 1, 2] == 1 and LEVI_CIVITA[1, 0, 2] == -1
    assert LEVI_CIVITA[0, 0, 1] == 0
    assert np.count_nonzero(LEVI_CIVITA) == 6


def test_axl_known_values():
    assert np.array_equal(axl(np.zeros((3, 3))), np.zeros(3))
    assert np.array_equal(axl(E3_GENERATOR), [0.0, 0.0, 1.0])
    assert np.array_equal(skew_from_axial([0, 0, 1]), E3_GENERATOR)
    assert np.array_equal(skew_from_axial(np.zeros(3)), np.zeros((3, 3)))


def test_axl_rejects_non_skew():
    with pytest.raises(NotSkew):
        axl(IDENTITY)
    # the check can be switched off for noisy input
    axl(E3_GENERATOR + 1e-9 * IDENTITY, tol=None)


@given(vec3)
def test_axl_round_trip(a):
    assert np.allclose(axl(skew_from_axial(a)), a, atol=1e-14 * (1 + np.abs(a).max()))


def test_skew_from_axial_is_cross(rng):
    a = rng.standard_normal(3)
    A = skew_from_axial(a)
    b = rng.standard_normal((100, 3))
    assert np.allclose(b @ A.T, np.cross(a, b), atol=1e-14)


def test_split_known_values():
    s = split(IDENTITY)
    assert np.array_equal(s.sym, IDENTITY) and s.trace == 3.0
    assert np.array_equal(s.skew, np.zeros((3, 3))) and np.allclose(s.dev3sym, 0)
    s = split(E3_GENERATOR)
    assert np.array_equal(s.sym, np.zeros((3, 3))) and s.trace == 0.0


@given(mat3)
def test_split_reassembles(X):
    s = split(X)
    scale = 1 + np.abs(X).max()
    assert np.allclose(s.dev3sym + s.skew + s.trace / 3 * IDENTITY, X, atol=1e-14 * scale)
    assert abs(np.trace(s.dev3sym)) < 1e-13 * scale
    assert np.allclose(sym(X) + skew(X), X)


def test_tensor_cross_vector_dyads():
    u, v = np.array([1.0, 2.0, 3.0]), np.array([-1.0, 0.5, 2.0])
    assert np.allclose(tensor_cross_vector(dyad(u, v), v), 0)
    # 1 x e3 = sum_i e_i (x) (e_i x e3)
    expected = sum(dyad(IDENTITY[i], np.cross(IDENTITY[i], [0, 0, 1])) for i in range(3))
    assert np.array_equal(tensor_cross_vector(IDENTITY, [0, 0, 1]), expected)
    assert np.array_equal(expected, [[0, -1, 0], [1, 0, 0], [0, 0, 0]])


@given(mat3, vec3)
def test_tensor_cross_vector_expansion(T, w):
    ref = sum(T[i, j] * dyad(IDENTITY[i], np.cross(IDENTITY[j], w)) for i in range(3) for j in range(3))
    scale = 1 + np.abs(T).max() * np.abs(w).max()
    assert np.allclose(tensor_cross_vector(T, w), ref, atol=1e-13 * scale)
    # w x T acts on the first leg
    ref = sum(T[i, j] * dyad(np.cross(w, IDENTITY[i]), IDENTITY[j]) for i in range(3) for j in range(3))
    assert np.allclose(vector_cross_tensor(w, T), ref, atol=1e-13 * scale)


def test_double_dot_alternator(rng):
    assert np.array_equal(double_dot(LEVI_CIVITA, IDENTITY), np.zeros(3))
    a = rng.standard_normal(3)
    assert np.allclose(double_dot(LEVI_CIVITA, skew_from_axial(a)), -2 * a, atol=1e-14)
    T = rng.standard_normal((3, 3))
    loop = np.zeros(3)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                loop[i] += LEVI_CIVITA[i, j, k] * T[j, k]
    assert np.allclose(double_dot(LEVI_CIVITA, T), loop, atol=1e-14)


def test_polar_known_values():
    assert np.allclose(polar_factor(np.diag([2.0, 3.0, 1.0])), IDENTITY, atol=1e-14)
    R = polar_factor(np.random.default_rng(3).standard_normal((3, 3)) + 3 * IDENTITY)
    assert np.allclose(polar_factor(R), R, atol=1e-14)


@given(arrays(float, (3, 3), elements=st.floats(-0.5, 0.5)))
def test_polar_defining_properties(A):
    F = A + 2 * IDENTITY  # Gershgorin keeps det > 0
    R = polar_factor(F)
    assert rotation_defect(R) < 1e-12
    assert np.linalg.eigvalsh(sym(R.T @ F)).min() > 0
    assert np.allclose(R.T @ F, (R.T @ F).T, atol=1e-12)


def test_polar_rejects_singular():
    with pytest.raises(Degenerate):
        polar_factor(np.diag([1.0, 1.0, 0.0]))


def test_polar_derivative_matches_fd(rng):
    F = rng.standard_normal((3, 3)) + 3 * IDENTITY
    dF = rng.standard_normal((2, 3, 3))
    h = 1e-6
    fd = np.stack([(polar_factor(F + h * d) - polar_factor(F - h * d)) / (2 * h) for d in dF])
    assert np.allclose(polar_factor_derivative(F, dF), fd, atol=1e-8)


def test_norm_and_defect():
    assert norm(IDENTITY) == pytest.approx(np.sqrt(3))
    assert rotation_defect(IDENTITY) == 0.0
    assert rotation_defect(2 * IDENTITY) > 1
