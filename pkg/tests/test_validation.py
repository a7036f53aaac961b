import pytest

from cosserat_curvature import validation


def test_check_names_sorted_and_unique():
    names = validation.check_names()
    assert names == sorted(set(names))
    assert "shell_nye" in names and "nye3d_fd" in names


def test_unknown_suite_and_fault():
    with pytest.raises(ValueError):
        validation.validate("everything", samples=1)
    with pytest.raises(ValueError):
        validation.validate("shell", samples=1, fault="nope")


def test_report_is_deterministic():
    a = validation.validate("surface", samples=2, seed=3, threads=1).to_json(timings=False)
    b = validation.validate("surface", samples=2, seed=3, threads=2).to_json(timings=False)
    assert a == b and a["passed"]


@pytest.mark.parametrize("fault,expected", [
    ("shell_nye_pair", "shell_nye"),
    ("dislocation_cross_sign", "shell_dislocation_routes"),
    ("nye_drop_trace", "shell_nye"),
    ("curl_transpose", "nye3d_analytic"),
])
def test_faults_are_detected(fault, expected):
    suite = "cosserat3d" if fault == "curl_transpose" else "shell"
    report = validation.validate(suite, samples=2, seed=1, fault=fault)
    assert not report.passed
    failed = {c.name for c in report.failed()}
    assert expected in failed
    first = next(c for c in report.checks if c.name == expected).first_failure
    assert first["case"] and len(first["point"]) in (2, 3)


def test_check_result_bookkeeping():
    res = validation.CheckResult("x", "shell", 1e-6)
    res.add(1e-9, "a", [0.1, 0.2])
    res.add(1e-3, "b", [0.3, 0.4])
    res.add(1e-2, "c", [0.5, 0.6])
    assert not res.passed and res.samples == 3
    assert res.first_failure["case"] == "b" and res.worst["case"] == "c"
    res.add(float("nan"), "d")
    assert res.max_residual == float("inf")
