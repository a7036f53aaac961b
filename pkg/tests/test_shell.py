import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from cosserat_curvature import catalog
from cosserat_curvature import shell as sh
from cosserat_curvature import surface as sf
from cosserat_curvature.errors import NyeViolated
from cosserat_curvature.fields import AngleFunction, Field, axis_angle_field, constant_field, constant_rotation
from cosserat_curvature.tensor import IDENTITY, dyad, rotation_defect

TWIST = axis_angle_field([0, 0, 1], AngleFunction("linear", 1.0, 0))
E1, E3 = IDENTITY[0], IDENTITY[2]


def plane_cfg(rotation):
    patch = catalog.plane_patch()
    return sh.ShellConfig(patch, patch.as_field(), rotation)


def test_initial_rotation():
    assert np.allclose(sh.default_initial_rotation(catalog.plane_patch(), [0.2, 0.3]), IDENTITY)
    Q0 = sh.default_initial_rotation(catalog.cylinder_patch(), [0.0, 0.5])
    assert np.allclose(Q0 @ E3, [1, 0, 0]) and rotation_defect(Q0) < 1e-14


def test_zero_strain():
    assert np.allclose(sh.shell_strain(plane_cfg(constant_rotation()), [0.2, 0.3]), 0)
    R = Rotation.from_rotvec([0.3, -0.2, 0.9]).as_matrix()
    patch = catalog.sphere_patch()
    rigid = Field(lambda y: R @ patch.y0(y) + 1, lambda y: patch.jacobian(y) @ R.T)
    cfg = sh.ShellConfig(patch, rigid, constant_field(R))
    assert np.abs(sh.shell_strain(cfg, [0.4, 0.1])).max() < 1e-14


def test_twist_worked_example():
    cfg = plane_cfg(TWIST)
    x = np.array([0.3, 0.3])
    K = sh.shell_bending_curvature(cfg, x)
    D = sh.shell_dislocation(cfg, x)
    assert np.allclose(K, dyad(E3, E1), atol=1e-15)
    assert np.allclose(D, -dyad(E1, E3), atol=1e-15)
    nye = sh.shell_nye(K, D)
    assert nye.identities < 1e-15
    # trace-free, so |D| = |K| sits on the lower bound
    assert np.linalg.norm(D) == pytest.approx(1.0) and nye.bound_violation <= 1e-15
    ps = sh.planar_split(D, K, sf.surf_frames(cfg.patch, x))
    assert np.allclose(ps.D_par, 0) and np.allclose(ps.D_trace_part, 0)
    assert ps.D_a3[0] == pytest.approx(-1.0) and ps.K_3a[0] == pytest.approx(1.0)


def test_constant_rotation_is_flat():
    cfg = plane_cfg(constant_rotation([1, 0, 1], 0.5))
    m = sh.measures(cfg, [0.5, 0.5])
    assert np.allclose(m.K, 0) and np.allclose(m.D, 0)
    nye = sh.shell_nye(np.zeros((3, 3)), np.zeros((3, 3)))
    assert nye.identities == 0.0


@pytest.mark.parametrize("name", ["plane", "tilted_plane", "cylinder", "sphere", "graph"])
def test_routes_agree(name, rng):
    patch = catalog.default_patches()[name]
    for fname, rot in catalog.rotation_fields_2d().items():
        cfg = sh.ShellConfig(patch, catalog.polynomial_deformation(patch.as_field(), 2), rot)
        x = patch.sample(rng, 1)[0]
        K = sh.shell_bending_curvature(cfg, x)
        D = sh.shell_dislocation(cfg, x)
        for route in (sh.curvature_total, sh.curvature_directors, sh.curvature_directors_expanded,
                      sh.curvature_spin, sh.curvature_omega):
            assert np.allclose(route(cfg, x), K, atol=1e-10), (fname, route.__name__)
        for route in (sh.dislocation_cross, sh.dislocation_directors):
            assert np.allclose(route(cfg, x), D, atol=1e-10), (fname, route.__name__)
        assert np.allclose(sh.shell_strain_directors(cfg, x), sh.shell_strain(cfg, x), atol=1e-10)
        nye = sh.shell_nye(K, D)
        assert nye.identities < 1e-10 and nye.bound_violation < 1e-9
        res = sh.planar_cofactor_check(K, D, sf.surf_frames(patch, x))
        assert res.planar < 1e-10 and res.reassembly < 1e-10


def test_transform_T_examples(rng):
    fr = sf.surf_frames(catalog.plane_patch(), [0.5, 0.5])
    a = sh.PlanarTensor.from_tensor(fr.first, fr)
    assert np.allclose(sh.transform_T(a).tensor, fr.first)
    S = sh.PlanarTensor(np.array([[1.0, 2.0], [3.0, 4.0]]), fr)
    assert np.allclose(sh.transform_T(S).components, [[4.0, -3.0], [-2.0, 1.0]])
    fr = sf.surf_frames(catalog.sphere_patch(), [0.4, 0.3])
    S = sh.PlanarTensor(rng.standard_normal((2, 2)), fr)
    TS = sh.transform_T(S).tensor
    assert np.allclose(TS, sh.transform_T_alternator(S), atol=1e-10)
    assert np.allclose(TS, sh.planar_cofactor(S), atol=1e-10)
    assert np.allclose(sh.transform_T(sh.transform_T(S)).tensor, S.tensor, atol=1e-12)


def test_singular_cofactor_is_none():
    fr = sf.surf_frames(catalog.plane_patch(), [0.5, 0.5])
    S = sh.PlanarTensor(np.array([[1.0, 2.0], [2.0, 4.0]]), fr)
    assert sh.planar_cofactor(S, tol=1e-6) is None


def test_split_requires_nye():
    fr = sf.surf_frames(catalog.plane_patch(), [0.5, 0.5])
    with pytest.raises(NyeViolated):
        sh.planar_split(IDENTITY, IDENTITY, fr)
    ps = sh.planar_split(np.zeros((3, 3)), np.zeros((3, 3)), fr)
    assert np.allclose(ps.reassemble(fr), 0)
    K = fr.first
    D = sh.shell_nye_dislocation(K)
    assert np.allclose(sh.planar_split(D, K, fr).D_par, fr.first)
