"""Planar insertion joint design: insertability graphs, stability, optimization.

Thin dict-in/dict-out wrapper over the compiled `_jointgen` module, which
speaks JSON strings.
"""

import json as _json

import _jointgen

ParseError = _jointgen.ParseError


def _dumps(design):
    return design if isinstance(design, str) else _json.dumps(design)


def validate(design):
    return _json.loads(_jointgen.validate(_dumps(design)))


def canonical(design):
    return _json.loads(_jointgen.canonical(_dumps(design)))


def analyze(design, friction=0.0):
    return _json.loads(_jointgen.analyze(_dumps(design), friction))


def stability(design, friction=0.0):
    return _json.loads(_jointgen.stability(_dumps(design), friction))


def optimize(design, edge_step_deg=0.5, point_step=0.01, friction=0.0):
    return _json.loads(
        _jointgen.optimize(_dumps(design), edge_step_deg, point_step, friction)
    )


def simulate(design, dx=0.0, dtheta=0.0, friction=0.0, record=False):
    return _json.loads(
        _jointgen.simulate(_dumps(design), dx, dtheta, friction, record)
    )


def seed_design(points=5, edges=5, seed=1):
    return _json.loads(_jointgen.seed_design(points, edges, seed))


def export_svg(design):
    return _jointgen.export_svg(_dumps(design))


def export_obj(design, separation=0.0):
    return _jointgen.export_obj(_dumps(design), separation)
