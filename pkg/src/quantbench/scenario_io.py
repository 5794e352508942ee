"""Scenario file format: JSON blocks for atlas, algebroid, action,
presymplectic form and momentum map (plus optional bundle and reduction
blocks).  Exact scalars are serialized as strings like "1/2-2/3i" and
expressions as parseable strings, so nothing is lost to rounding."""

from __future__ import annotations

import json

from .errors import SchemaError
from .exprs import PolyExpr, coerce_rational, parse_expr
from .geometry import Chart, DifferentialForm, FiberedAtlas, Transition, VectorField
from .hamiltonian import ActionScenario, MomentumMapRep, PresymplecticData
from .liealg import ActionMap, AlgebroidModel
from .scalars import ExactScalar


def scalar_to_string(value: ExactScalar) -> str:
    return str(value)


def expr_to_string(expr) -> str:
    """Fully parseable rendering (explicit '*' between coefficient and i)."""
    expr = coerce_rational(expr).simplify()
    num = _poly_to_string(expr.num)
    if expr.den.is_constant() and expr.den.constant_value() == ExactScalar(1):
        return num
    return f"({num})/({_poly_to_string(expr.den)})"


def _poly_to_string(poly: PolyExpr) -> str:
    if poly.is_zero():
        return "0"
    bits = []
    for mono, coeff in sorted(poly.terms.items()):
        factors = []
        re_part, im_part = coeff.re, coeff.im
        if im_part == 0:
            factors.append(f"{re_part}" if re_part >= 0 else f"(0-{-re_part})")
        elif re_part == 0:
            factors.append(f"({im_part}*i)" if im_part >= 0 else f"(0-{-im_part}*i)")
        else:
            im_txt = f"+{im_part}*i" if im_part >= 0 else f"-{-im_part}*i"
            factors.append(f"({re_part}{im_txt})")
        for var, exp in mono:
            factors.append(var if exp == 1 else f"{var}^{exp}")
        bits.append("*".join(factors))
    return " + ".join(bits)


def _form_to_dict(form: DifferentialForm) -> dict:
    return {
        "degree": form.degree,
        "class": form.leafwise_class,
        "coefficients": [
            {"chart": ch, "index": list(idx), "value": expr_to_string(v)}
            for ch, table in sorted(form.coefficients.items())
            for idx, v in sorted(table.items())
        ],
    }


def _form_from_dict(atlas, data) -> DifferentialForm:
    table = {}
    for entry in data["coefficients"]:
        table.setdefault(entry["chart"], {})[tuple(entry["index"])] = \
            parse_expr(entry["value"])
    for ch in atlas.charts:
        table.setdefault(ch, {})
    return DifferentialForm(atlas, data["degree"], data["class"], table)


def _field_to_dict(field: VectorField) -> dict:
    return {
        "class": field.leafwise_class,
        "components": [
            {"chart": ch, "coord": coord, "value": expr_to_string(v)}
            for ch, table in sorted(field.components.items())
            for coord, v in sorted(table.items())
        ],
    }


def _field_from_dict(atlas, data) -> VectorField:
    table = {ch: {} for ch in atlas.charts}
    for entry in data["components"]:
        table.setdefault(entry["chart"], {})[entry["coord"]] = \
            parse_expr(entry["value"])
    return VectorField(atlas, data["class"], table)


def dump_scenario(scenario: ActionScenario) -> dict:
    atlas = scenario.atlas
    model = scenario.model
    data = {
        "name": scenario.name,
        "atlas": {
            "leaf_structure": atlas.leaf_structure,
            "charts": [
                {"name": c.name, "base": list(c.base_coords),
                 "fiber": list(c.fiber_coords), "orbit": list(c.orbit_coords),
                 "star_shaped": c.star_shaped}
                for c in atlas.charts.values()
            ],
            "transitions": [
                {"source": t.source, "target": t.target, "overlap": t.overlap,
                 "map": {k: expr_to_string(v) for k, v in sorted(t.exprs.items())}}
                for t in atlas.transitions.values()
            ],
        },
        "model": {
            "name": model.name,
            "variant": model.variant,
            "generators": list(model.generator_names),
            "base_charts": [
                {"name": c.name, "base": list(c.base_coords),
                 "fiber": list(c.fiber_coords), "orbit": list(c.orbit_coords),
                 "star_shaped": c.star_shaped}
                for c in model.base_atlas.charts.values()
            ],
            "brackets": [
                {"pair": list(pair), "coefficients": [expr_to_string(v) for v in vec]}
                for pair, vec in sorted(model.bracket_table.items())
            ],
            "anchors": [None if f is None else _field_to_dict(f)
                        for f in model.anchor_fields],
            "isotropy": list(model.isotropy_indices),
        },
        "action": {
            "fields": [_field_to_dict(scenario.action.of(model.basis_section(i)))
                       for i in range(model.n)],
        },
        "presymplectic": {
            "omega": _form_to_dict(scenario.presymplectic.omega_tilde),
            "samples": [
                {"chart": s["chart"], "point": {k: repr(v) for k, v in s["point"].items()}}
                for s in scenario.presymplectic.sample_points
            ],
        },
        "momentum": {
            "pairings": [
                [{"chart": ch, "value": expr_to_string(v)}
                 for ch, v in sorted(scenario.momentum.pairing(i).items())]
                for i in range(model.n)
            ],
        },
        "extras": {k: v for k, v in scenario.extras.items()
                   if isinstance(v, (str, int, bool))},
    }
    return data


def load_scenario(data) -> ActionScenario:
    try:
        atlas = FiberedAtlas(
            [Chart(c["name"], c["base"], c["fiber"], c["orbit"], c["star_shaped"])
             for c in data["atlas"]["charts"]],
            [Transition(t["source"], t["target"],
                        {k: parse_expr(v) for k, v in t["map"].items()},
                        overlap=t.get("overlap", ""))
             for t in data["atlas"]["transitions"]],
            leaf_structure=data["atlas"].get("leaf_structure", ""))
        mdata = data["model"]
        base_atlas = FiberedAtlas(
            [Chart(c["name"], c["base"], c["fiber"], c["orbit"], c["star_shaped"])
             for c in mdata["base_charts"]])
        anchors = []
        for entry in mdata["anchors"]:
            anchors.append(None if entry is None else _field_from_dict(base_atlas, entry))
        bracket_table = {tuple(b["pair"]): [parse_expr(v) for v in b["coefficients"]]
                         for b in mdata["brackets"]}
        model = AlgebroidModel(mdata["name"], mdata["variant"], base_atlas,
                               mdata["generators"], bracket_table, anchors,
                               isotropy_indices=mdata["isotropy"])
        fields = [_field_from_dict(atlas, f) for f in data["action"]["fields"]]
        action = ActionMap(model, atlas, fields)
        omega = _form_from_dict(atlas, data["presymplectic"]["omega"])
        samples = [{"chart": s["chart"],
                    "point": {k: float(v) for k, v in s["point"].items()}}
                   for s in data["presymplectic"].get("samples", [])]
        presymplectic = PresymplecticData(atlas, omega, samples)
        pairings = []
        for entries in data["momentum"]["pairings"]:
            pairings.append({e["chart"]: parse_expr(e["value"]) for e in entries})
        momentum = MomentumMapRep(model, pairings)
        return ActionScenario(data["name"], model, action, presymplectic, momentum,
                              extras=dict(data.get("extras", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"scenario file invalid: {exc}") from exc


def save_scenario_file(scenario, path):
    with open(path, "w") as handle:
        json.dump(dump_scenario(scenario), handle, indent=2, sort_keys=True)


def load_scenario_file(path) -> ActionScenario:
    with open(path) as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    return load_scenario(data)
