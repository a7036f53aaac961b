import numpy as np
import pytest

from cosserat_curvature import catalog
from cosserat_curvature import surface as sf
from cosserat_curvature.errors import DegenerateSurface
from cosserat_curvature.fields import Field, central_partials, constant_field, polynomial_field, random_polynomial_field
from cosserat_curvature.surface import SurfacePatch
from cosserat_curvature.tensor import IDENTITY, dyad

ROTATIONAL = polynomial_field([(np.array([-1.0, 0.0, 0.0]), (0, 1)), (np.array([0.0, 1.0, 0.0]), (1, 0))])
E3 = np.array([0.0, 0.0, 1.0])


def test_plane_frames():
    fr = sf.surf_frames(catalog.plane_patch(), [0.4, 0.2])
    assert np.allclose(fr.normal, E3) and fr.area == 1.0
    assert np.allclose(fr.b_lo, 0) and np.allclose(fr.christoffel, 0)


def test_cylinder_curvature():
    patch = catalog.cylinder_patch(2.0)
    x = np.array([0.7, 0.4])
    fr = sf.surf_frames(patch, x)
    assert np.allclose(fr.normal, [np.cos(0.7), np.sin(0.7), 0])  # outward
    assert fr.metric[0, 0] == pytest.approx(4.0) and fr.area == pytest.approx(2.0)
    assert np.allclose(fr.b_lo, [[-2.0, 0.0], [0.0, 0.0]], atol=1e-14)
    # the same from -n0_,b . a_a with central differences
    dn = central_partials(lambda y: sf.surf_frames(patch, y).normal, x)
    assert np.allclose(-fr.cov[:2] @ dn.T, fr.b_lo, atol=1e-8)


def test_sphere_is_umbilic(rng):
    R = 1.0
    patch = catalog.sphere_patch(R)
    for x in patch.sample(rng, 5):
        fr = sf.surf_frames(patch, x)
        # outward normal, so b = -a / R
        assert np.allclose(fr.second, -fr.first / R, atol=1e-6)


def test_degenerate_patch():
    flat = SurfacePatch(lambda x: np.array([x[0], x[0], 0.0]), ((0, 0), (1, 1)))
    with pytest.raises(DegenerateSurface):
        sf.surf_frames(flat, [0.5, 0.5])


def test_grad_div_plane():
    patch = catalog.plane_patch()
    x = np.array([0.3, 0.6])
    assert np.allclose(sf.grad_s(constant_field([1.0, 2.0, 3.0]), patch, x), 0)
    v = Field(lambda y: np.array([y[0], y[1], 0.0]))
    assert np.allclose(sf.grad_s(v, patch, x), dyad([1, 0, 0], [1, 0, 0]) + dyad([0, 1, 0], [0, 1, 0]))
    assert sf.div_s(v, patch, x) == pytest.approx(2.0)


@pytest.mark.parametrize("name", ["plane", "tilted_plane", "cylinder", "sphere", "graph"])
def test_grad_of_midsurface_is_first_form(name):
    patch = catalog.default_patches()[name]
    x = patch.sample(np.random.default_rng(5), 1)[0]
    fr = sf.surf_frames(patch, x)
    assert np.allclose(sf.grad_s(patch.as_field(), patch, x), fr.first, atol=1e-12)


def test_curl_s_plane():
    patch = catalog.plane_patch()
    x = np.array([0.3, 0.6])
    assert np.allclose(sf.curl_s_vec(ROTATIONAL, patch, x), 2 * E3)
    assert np.allclose(sf.curl_s_tensor(constant_field(np.ones((3, 3))), patch, x), 0)
    T = Field(lambda y: dyad(E3, ROTATIONAL(y)))
    assert np.allclose(sf.curl_s_tensor(T, patch, x), dyad(E3, 2 * E3), atol=1e-8)


def test_curl_s_routes_on_cylinder(rng):
    patch = catalog.cylinder_patch()
    v = random_polynomial_field(rng, 2, (3,))
    T = random_polynomial_field(rng, 2, (3, 3))
    for x in patch.sample(rng, 4):
        assert np.allclose(sf.curl_s_vec_components(v, patch, x), sf.curl_s_vec(v, patch, x), atol=1e-6)
        ref = sf.curl_s_tensor(T, patch, x)
        for kind in ("covariant", "mixed"):
            assert np.allclose(sf.curl_s_tensor_components(T, patch, x, kind), ref, atol=1e-6)
        for basis in ("covariant", "contravariant"):
            assert np.allclose(sf.curl_s_rowwise(T, patch, x, basis), ref, atol=1e-6)


def test_tensor_derivative_reassembly_sphere(rng):
    patch = catalog.sphere_patch()
    first = Field(lambda y: sf.surf_frames(patch, y).first)
    for x in patch.sample(rng, 3):
        fr = sf.surf_frames(patch, x)
        Tc, dTc = sf.field_tensor_components(first, patch, x, "covariant", "fd")
        assert np.allclose(sf.tensor_derivative_from_components(Tc, dTc, fr), central_partials(first, x), atol=1e-6)


def test_curl_s_of_gradient_on_curved_patch(rng):
    # only the normal part vanishes; the tangential part is eps^{ab} b^g_b f_,g a_a
    patch = catalog.cylinder_patch()
    f = random_polynomial_field(rng, 2, ())
    grad = Field(lambda y: f.partials(y) @ sf.surf_frames(patch, y).con[:2])
    x = np.array([0.5, 0.5])
    fr = sf.surf_frames(patch, x)
    c = sf.curl_s_vec(grad, patch, x)
    assert abs(c @ fr.normal) < 1e-8
    expected = (fr.eps_up @ (fr.b_mixed.T @ f.partials(x))) @ fr.cov[:2]
    assert np.allclose(c, expected, atol=1e-7)
    assert np.linalg.norm(c) > 1e-3


def test_frame_identities(rng):
    patch = catalog.graph_patch()
    fr = sf.surf_frames(patch, patch.sample(rng, 1)[0])
    n0 = fr.normal
    assert np.allclose(fr.con @ fr.cov.T, IDENTITY, atol=1e-14)
    assert np.allclose(np.cross(fr.con[0], fr.con[1]), fr.eps_up[0, 1] * n0)
    assert np.allclose(np.cross(n0, fr.cov[0]), fr.eps_lo[0] @ fr.con[:2])
    assert np.allclose(fr.alternator @ fr.alternator, -fr.first, atol=1e-14)


def test_surf_covariant_derivative(rng):
    plane = catalog.plane_patch()
    assert np.allclose(sf.surf_covariant_derivative(constant_field(np.ones((3, 3))), plane, [0.3, 0.4]), 0)
    patch = catalog.cylinder_patch()
    v = random_polynomial_field(rng, 2, (3,))
    T = random_polynomial_field(rng, 2, (3, 3))
    for x in patch.sample(rng, 3):
        for F in (v, T):
            for method in ("product", "fd"):
                assert np.allclose(sf.surf_covariant_derivative(F, patch, x, method), central_partials(F, x), atol=1e-6)
