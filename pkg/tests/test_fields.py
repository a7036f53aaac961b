import numpy as np
import pytest

from cosserat_curvature.fields import (AngleFunction, axis_angle_field, central_partials,
                                       composed_rotation, constant_rotation, matmul_fields,
                                       polynomial_field, random_polynomial_field)
from cosserat_curvature.tensor import rotation_defect, skew_from_axial


def test_polynomial_partials(rng):
    f = random_polynomial_field(rng, 3, (3, 3))
    x = rng.uniform(0, 1, 3)
    assert np.allclose(f.partials(x), central_partials(f, x), atol=1e-8)
    assert np.allclose(f.numeric().partials(x), f.partials(x), atol=1e-8)


def test_polynomial_values():
    f = polynomial_field([(np.array([1.0, 0.0]), (1, 2)), (np.array([0.0, 2.0]), (0, 0))])
    assert np.allclose(f([2.0, 3.0]), [18.0, 2.0])
    assert np.allclose(f.partials([2.0, 3.0]), [[9.0, 0.0], [12.0, 0.0]])


def test_axis_angle_linear():
    q = axis_angle_field([0, 0, 1], AngleFunction("linear", 1.0, 0))
    x = np.array([0.7, 0.2, 0.1])
    Q = q(x)
    assert rotation_defect(Q) < 1e-14
    assert np.allclose(Q[:2, :2], [[np.cos(0.7), -np.sin(0.7)], [np.sin(0.7), np.cos(0.7)]])
    # Q_,1 = e3 x Q, Q_,2 = 0
    dQ = q.partials(x)
    assert np.allclose(dQ[0], skew_from_axial([0, 0, 1]) @ Q)
    assert np.allclose(dQ[1:], 0)


def test_composed_rotation_partials(rng):
    q = composed_rotation([axis_angle_field([1, 2, 0], AngleFunction("sin", 2.0, 1)),
                           constant_rotation([0, 1, 1], 0.4),
                           axis_angle_field([0, 0, 1], AngleFunction("linear", -1.3, 0))])
    x = rng.uniform(0, 1, 2)
    assert rotation_defect(q(x)) < 1e-13
    assert np.allclose(q.partials(x), central_partials(q, x), atol=1e-8)


def test_matmul_fields(rng):
    a = random_polynomial_field(rng, 2, (3, 3))
    b = random_polynomial_field(rng, 2, (3, 3))
    p = matmul_fields(a, b)
    x = rng.uniform(0, 1, 2)
    assert np.allclose(p(x), a(x) @ b(x))
    assert np.allclose(p.partials(x), central_partials(p, x), atol=1e-8)


def test_angle_function_kind():
    with pytest.raises(ValueError):
        AngleFunction("cos", 1.0, 0)
