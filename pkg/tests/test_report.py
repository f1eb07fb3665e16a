import json

import pytest

from qrlab.report import ReportDocument, Step, reproduce


@pytest.fixture(scope="module")
def report(tmp_path_factory):
    figs = tmp_path_factory.mktemp("figs")
    return reproduce(figures=figs), figs


def test_all_gating_steps_pass(report):
    doc, _ = report
    assert doc.passed
    names = [s.name for s in doc.steps]
    for required in ["code", "weight_distribution", "formal_self_duality", "assmus_mattson",
                     "design_3_42_10_18", "derived_and_residual", "linear_span", "psl2_41",
                     "automorphism_group", "triple_orbits", "sanity_p7"]:
        assert doc.step(required).passed, required
    assert set(doc.timings) == set(names)


def test_key_numbers(report):
    doc, _ = report
    assert doc.step("assmus_mattson").details["nonzero_dual_weights_le_39"] == 12
    assert doc.step("automorphism_group").details["order"] == 34440
    assert doc.step("triple_orbits").details["triple_orbits"] == [5740, 5740]


def test_figures_written(report):
    _, figs = report
    for name in ["weight_distribution.png", "triple_coverage.png", "triple_orbits.png"]:
        path = figs / name
        assert path.exists() and path.read_bytes()[:4] == b"\x89PNG"


def test_json_round_trip(report):
    doc, _ = report
    again = ReportDocument.from_json(doc.to_json())
    assert again == doc
    assert json.loads(doc.to_json())["passed"] is True


def test_deterministic_steps(report):
    doc, _ = report
    rerun = reproduce(use_cache=False)
    assert rerun.steps == doc.steps
    skipped = reproduce(skip_aut=True)
    assert "automorphism_group" not in {s.name for s in skipped.steps}
    assert skipped.step("triple_orbits").details["group"] == "PSL(2,41)"
    assert skipped.passed


def test_failing_step_is_recorded_not_raised():
    doc = ReportDocument("x", {})
    doc.steps.append(Step("a", True, {}))
    doc.steps.append(Step("b", False, {}, gating=False))
    assert doc.passed
    doc.steps.append(Step("c", False, {"error": "boom"}))
    assert not doc.passed
    assert "FAIL" in doc.to_text() and "info" in doc.to_text()
