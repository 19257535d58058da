import json

import pytest

import jointgen


@pytest.fixture(scope="module")
def design():
    d = jointgen.seed_design(points=4, edges=4, seed=1)
    d["errors"] = {"dx": 0.01, "dtheta": 0.02, "scale": 0.005}
    return d


def test_seed_validates(design):
    rep = jointgen.validate(design)
    assert rep["valid"]
    assert rep["issues"] == []


def test_validate_flags_bad_design(design):
    bad = json.loads(json.dumps(design))
    bad["correspondence"][0] = [bad["correspondence"][0][0], 99]
    rep = jointgen.validate(bad)
    assert not rep["valid"]
    assert any("correspondence" in i["message"] for i in rep["issues"])


def test_parse_error_raises():
    with pytest.raises(jointgen.ParseError):
        jointgen.validate("{not json")
    with pytest.raises(jointgen.ParseError):
        jointgen.validate({"version": 1})


def test_canonical_is_idempotent(design):
    once = jointgen.canonical(design)
    twice = jointgen.canonical(once)
    assert once == twice
    assert once["errors"] == design["errors"]


def test_analyze_reports_scales(design):
    rep = jointgen.analyze(design)
    assert isinstance(rep["insertable"], bool)
    assert len(rep["scales"]) == 3
    for sr in rep["scales"]:
        assert sr["nodes"] >= 1
        assert sr["goal_modes"], "every scale needs a goal mode"


def test_stability_has_seat(design):
    st = jointgen.stability(design)
    assert st["has_seat"]
    assert st["max_rotation"] >= 0.0
    assert st["sinks"]


def test_optimize_trace_shape(design):
    tr = jointgen.optimize(design)
    names = [s["stage"] for s in tr["stages"]]
    assert names[0] == "initial"
    assert names[-1] == "stability"
    final = tr["stages"][-1]
    assert jointgen.validate(final["design"])["valid"]


def test_simulate_centered_drop(design):
    res = jointgen.simulate(design, dx=0.0, dtheta=0.0)
    assert res["verdict"] in ("seated", "stuck", "escaped")
    assert res["steps"] >= 1


def test_simulate_records_trajectory(design):
    res = jointgen.simulate(design, dx=0.005, dtheta=0.01, record=True)
    traj = res.get("trajectory", [])
    assert traj, "record=True must emit a trajectory"
    assert traj[0]["mode"] == []


def test_export_svg(design):
    svg = jointgen.export_svg(design)
    assert svg.startswith("<svg")
    assert "polyline" in svg or "path" in svg


def test_export_obj_counts(design):
    obj = jointgen.export_obj(design, separation=0.0)
    v = sum(1 for line in obj.splitlines() if line.startswith("v "))
    f = sum(1 for line in obj.splitlines() if line.startswith("f "))
    assert v > 0 and f > 0
    with pytest.raises(jointgen.ParseError):
        jointgen.export_obj(design, separation=45.0)
