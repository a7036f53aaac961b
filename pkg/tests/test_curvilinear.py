import numpy as np
import pytest

from cosserat_curvature import catalog
from cosserat_curvature import curvilinear as cv
from cosserat_curvature.errors import OutOfDomain
from cosserat_curvature.fields import Field, central_partials, constant_field, polynomial_field, random_polynomial_field
from cosserat_curvature.tensor import IDENTITY, dyad

ROTATIONAL = polynomial_field([(np.array([-1.0, 0.0, 0.0]), (0, 1, 0)),
                               (np.array([0.0, 1.0, 0.0]), (1, 0, 0))])


def test_identity_chart_frames():
    fr = cv.frames_at(catalog.identity_chart(), [0.3, 0.4, 0.5])
    assert np.array_equal(fr.cov, IDENTITY) and fr.g == 1.0
    assert np.array_equal(fr.christoffel, np.zeros((3, 3, 3)))


def test_affine_chart_metric():
    fr = cv.frames_at(catalog.affine_chart((2.0, 3.0, 1.0)), [0.3, 0.4, 0.5])
    assert np.allclose(fr.metric, np.diag([4.0, 9.0, 1.0]))
    assert fr.g == pytest.approx(36.0)
    assert np.allclose(fr.christoffel, 0)


def test_cylindrical_christoffel():
    r = 1.2
    chart = catalog.cylindrical_chart()
    fr = cv.frames_at(chart, [r, 0.7, 0.3])
    assert fr.metric[1, 1] == pytest.approx(r * r)
    assert fr.christoffel[0, 1, 1] == pytest.approx(-r)
    assert fr.christoffel[1, 0, 1] == pytest.approx(1 / r)
    # same values from central differences of the basis
    num = cv.frames_at(chart.numeric(), [r, 0.7, 0.3])
    assert np.allclose(num.christoffel, fr.christoffel, atol=1e-7)


def test_curl_vec_examples():
    chart = catalog.identity_chart()
    x = np.array([0.2, 0.5, 0.6])
    assert np.allclose(cv.curl_vec(constant_field([1.0, 2.0, 3.0]), chart, x), 0)
    assert np.allclose(cv.curl_vec(ROTATIONAL, chart, x), [0, 0, 2])


@pytest.mark.parametrize("name", ["identity", "affine", "cylindrical", "perturbed"])
def test_curl_of_gradient_vanishes(name):
    chart = catalog.default_charts()[name]
    scalar = lambda y: float(np.prod(chart.theta(y)))  # x1 x2 x3 in Cartesian coordinates
    grad = Field(lambda y: cv.frames_at(chart, y).con.T @ central_partials(scalar, y))
    x = chart.sample(np.random.default_rng(1), 1)[0]
    assert np.abs(cv.curl_vec(grad, chart, x)).max() < 1e-6


def test_curl_tensor_rows():
    chart = catalog.identity_chart()
    c = np.array([0.3, -1.0, 2.0])
    T = Field(lambda y: dyad(c, ROTATIONAL(y)), lambda y: np.einsum("a,ib->iab", c, ROTATIONAL.partials(y)))
    out = cv.curl_tensor(T, chart, [0.2, 0.4, 0.1])
    assert np.allclose(out, dyad(c, [0, 0, 2]))


def test_curl_of_identity_vanishes():
    chart = catalog.cylindrical_chart()
    T = Field(lambda y: cv.frames_at(chart, y).cov.T @ cv.frames_at(chart, y).con)
    x = np.array([1.0, 0.4, 0.5])
    assert np.allclose(T(x), IDENTITY)
    assert np.abs(cv.curl_tensor(T, chart, x)).max() < 1e-8
    for kind in ("covariant", "mixed"):
        assert np.abs(cv.curl_tensor_components(T, chart, x, kind, "fd")).max() < 1e-6


def test_routes_on_cylindrical(rng):
    chart = catalog.cylindrical_chart()
    T = random_polynomial_field(rng, 3, (3, 3))
    for x in chart.sample(rng, 5):
        ref = cv.curl_tensor(T, chart, x)
        for kind in ("covariant", "mixed"):
            for method in ("product", "fd"):
                assert np.allclose(cv.curl_tensor_components(T, chart, x, kind, method), ref, atol=1e-6)
        for basis in ("covariant", "contravariant"):
            assert np.allclose(cv.curl_rowwise(T, chart, x, basis), ref, atol=1e-6)


def test_cartesian_reduction(rng):
    chart = catalog.identity_chart()
    T = random_polynomial_field(rng, 3, (3, 3))
    x = rng.uniform(0.1, 0.9, 3)
    dT = T.partials(x)
    sign = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    loop = np.zeros((3, 3))
    for (i, j, k), e in sign.items():
        for s in range(3):
            loop[s, k] += e * dT[i, s, j]  # e_ijk T_sj,i
    assert np.allclose(cv.curl_tensor_cartesian(dT), loop, atol=1e-12)
    assert np.allclose(cv.curl_tensor(T, chart, x), loop, atol=1e-12)


def test_curl_transposed_differs(rng):
    chart = catalog.identity_chart()
    T = random_polynomial_field(rng, 3, (3, 3))
    x = rng.uniform(0.1, 0.9, 3)
    assert not np.allclose(cv.curl_transposed(T, chart, x), cv.curl_tensor(T, chart, x))


def test_out_of_domain():
    with pytest.raises(OutOfDomain):
        catalog.identity_chart().check_point([1.5, 0.5, 0.5])
