"""The eight acceptance criteria at their stated tolerances.

Criteria 1 to 6 read named checks from one full validation run
(50 samples per case, seed 1).  Each test records a pass/fail line that is
printed in the ``acceptance criteria`` section of the pytest summary.
"""
import time

import numpy as np
import pytest

from cosserat_curvature import catalog
from cosserat_curvature import energy as en
from cosserat_curvature import validation

SAMPLES, SEED = 50, 1


@pytest.fixture(scope="module")
def report():
    return validation.validate("all", samples=SAMPLES, seed=SEED, threads=1)


def summarize(report, names):
    checks = [c for c in report.checks if c.name in names]
    assert sorted(c.name for c in checks) == sorted(names)
    passed = all(c.passed for c in checks)
    worst = max(checks, key=lambda c: c.max_residual / c.tolerance if c.tolerance else c.max_residual)
    detail = ", ".join(f"{c.name} {c.max_residual:.1e}/{c.tolerance:.0e}" for c in checks)
    return passed, worst, detail, sum(c.wall_time for c in checks), sum(c.samples for c in checks)


def test_1_nye_3d(report, acceptance):
    passed, _, detail, wall, n = summarize(report, ["nye3d_analytic", "nye3d_fd"])
    cases = len(catalog.default_charts()) * len(catalog.rotation_fields_3d())
    ok = passed and wall < 10.0 and n == 2 * cases * SAMPLES
    acceptance(1, "Nye relation in 3D", ok, f"{detail}, {n} samples, {wall:.1f} s")
    assert ok


def test_2_shell_nye(report, acceptance):
    passed, _, detail, wall, n = summarize(report, ["shell_norm_identities", "shell_nye"])
    cases = len(catalog.default_patches()) * len(catalog.rotation_fields_2d())
    ok = passed and wall < 10.0 and n == 2 * cases * SAMPLES
    acceptance(2, "shell Nye relation and norm identities", ok, f"{detail}, {n} samples, {wall:.1f} s")
    assert ok


ROUTES = ["wryness_routes", "omega_routes", "dislocation_routes", "shell_curvature_routes",
          "shell_dislocation_routes", "curl3d_tensor_routes", "curl3d_vector_routes",
          "curl_s_tensor_routes", "curl_s_vector_routes"]


def test_3_multi_route(report, acceptance):
    passed, worst, _, _, n = summarize(report, ROUTES)
    ok = passed and all(c.tolerance <= 1e-6 for c in report.checks if c.name in ROUTES)
    acceptance(3, "multi-route agreement", ok,
               f"{len(ROUTES)} checks, {n} samples, worst {worst.name} {worst.max_residual:.1e}")
    assert ok


def test_4_cofactor(report, acceptance):
    passed, _, detail, _, _ = summarize(report, ["transform_T", "cofactor_structure", "planar_split"])
    acceptance(4, "cofactor structure", passed, detail)
    assert passed


def test_5_cartesian_reductions(report, acceptance):
    names = ["curl3d_cartesian_reduction", "cosserat_cartesian_reduction", "surface_planar_reduction"]
    passed, _, detail, _, _ = summarize(report, names)
    ok = passed and all(c.tolerance <= 1e-12 for c in report.checks if c.name in names)
    acceptance(5, "Cartesian reductions", ok, detail)
    assert ok


def test_6_energy(report, acceptance):
    names = ["energy_positivity", "energy_homogeneity", "energy_worked_values", "energy_frame_indifference"]
    passed, _, detail, _, _ = summarize(report, names)
    positivity = next(c for c in report.checks if c.name == "energy_positivity")
    ok = passed and positivity.samples >= 1000
    acceptance(6, "energy properties", ok, f"{detail}, {positivity.samples} random inputs")
    assert ok


def plate_run():
    patch = catalog.plane_patch()
    state = en.perturbed_state(patch, (16, 16), amplitude=0.05, seed=0, clamp="all")
    params = en.EnergyParams(1.0, 1.0, 1.0, 1.0)
    return en.minimize(state, patch, params, en.MinimizeOptions(seed=0))


def test_7_minimizer(acceptance):
    start = time.perf_counter()
    first = plate_run()
    wall = time.perf_counter() - start
    second = plate_run()
    e = np.asarray(first.energies)
    monotone = bool(np.all(np.diff(e) <= 0))
    ratio = e[-1] / e[0]
    # iteration at which the energy first drops below 1e-3 of its start
    below = int(np.argmax(e < 1e-3 * e[0])) if np.any(e < 1e-3 * e[0]) else None
    same = first.energies == second.energies and np.array_equal(first.state.q, second.state.q)
    ok = (first.converged and monotone and ratio < 1e-3 and first.grad_norms[-1] < 1e-6
          and same and wall < 60.0 and below is not None and below <= 500)
    acceptance(7, "shell minimizer", ok,
               f"{first.iterations} iterations, E {e[0]:.3e} -> {e[-1]:.1e}, |g| {first.grad_norms[-1]:.1e}, "
               f"below 1e-3 at {below}, monotone {monotone}, deterministic {same}, {wall:.1f} s")
    assert ok


def test_8_fault_injection(acceptance):
    caught = {}
    for fault in sorted(validation.FAULTS):
        rep = validation.validate("all", samples=5, seed=SEED, fault=fault, threads=1)
        caught[fault] = [c.name for c in rep.failed()]
    ok = all(caught.values())
    acceptance(8, "fault injection", ok,
               "; ".join(f"{f} -> {', '.join(n) or 'NOT DETECTED'}" for f, n in caught.items()))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
