"""Built-in scenario catalog.

Conventions used throughout (recorded in reports):
  * the projective-line fiber carries charts N(x, y) / S(u, v) with transition
    u = x/r^2, v = -y/r^2; the chart holomorphic coordinate is z = x - i y;
  * the unit area form is omega_FS = (1/pi)(1 + r^2)^-2 dx dy, written with
    1/pi = 2i/twopii;
  * direction functions n1 = x/(pi(1+r^2)), n2 = -y/(pi(1+r^2)),
    n3 = (r^2-1)/(2 pi (1+r^2)) make mu_a = (level/2) n_a a momentum map for
    level * omega_FS with the rotation fields below.
"""

from __future__ import annotations

from fractions import Fraction

from .bundles import LineBundleData, TransitionValue
from .cech import GoodCover, OverlapFunction
from .exprs import RationalExpr, parse_expr
from .geometry import (
    Chart,
    DifferentialForm,
    FiberedAtlas,
    LEAF_J,
    LEAF_JTILDE,
    Transition,
    VectorField,
)
from .hamiltonian import ActionScenario, MomentumMapRep, PresymplecticData
from .liealg import ActionMap, AlgebroidModel, su2, u1
from .gauge import FiberPackage, GaugeScenario, PrincipalBundleData, build_gauge_scenario
from .quantize import ComplexStructureData
from .reduce import ZeroLevelData
from .scalars import ExactScalar


def _pe(text):
    return parse_expr(text)


def _scale(expr, q: Fraction):
    return expr * ExactScalar(q)


# ---------------------------------------------------------------------------
# the projective-line fiber
# ---------------------------------------------------------------------------

def sphere_atlas() -> FiberedAtlas:
    n = Chart("N", fiber_coords=("x", "y"), star_shaped=True)
    s = Chart("S", fiber_coords=("u", "v"), star_shaped=True)
    t_ns = Transition("N", "S", {"u": _pe("x/(x^2+y^2)"), "v": _pe("-y/(x^2+y^2)")},
                      overlap="x^2+y^2 != 0")
    t_sn = Transition("S", "N", {"x": _pe("u/(u^2+v^2)"), "y": _pe("-v/(u^2+v^2)")},
                      overlap="u^2+v^2 != 0")
    return FiberedAtlas([n, s], [t_ns, t_sn], leaf_structure="single leaf")


def omega_fs(atlas, level: Fraction, leafwise_class=LEAF_JTILDE) -> DifferentialForm:
    return DifferentialForm(atlas, 2, leafwise_class, {
        "N": {("x", "y"): _scale(_pe("2*i/(twopii*(1+x^2+y^2)^2)"), level)},
        "S": {("u", "v"): _scale(_pe("2*i/(twopii*(1+u^2+v^2)^2)"), level)},
    })


def rotation_fields(atlas):
    v1 = VectorField(atlas, LEAF_J, {
        "N": {"x": _pe("x*y"), "y": _pe("(1-x^2+y^2)/2")},
        "S": {"u": _pe("u*v"), "v": _pe("(1-u^2+v^2)/2")}})
    v2 = VectorField(atlas, LEAF_J, {
        "N": {"x": _pe("(1+x^2-y^2)/2"), "y": _pe("x*y")},
        "S": {"u": _pe("-(1+u^2-v^2)/2"), "v": _pe("-u*v")}})
    v3 = VectorField(atlas, LEAF_J, {
        "N": {"x": _pe("-y"), "y": _pe("x")},
        "S": {"u": _pe("v"), "v": _pe("-u")}})
    return [v1, v2, v3]


def direction_functions():
    n1 = {"N": _pe("2*i*x/(twopii*(1+x^2+y^2))"),
          "S": _pe("2*i*u/(twopii*(1+u^2+v^2))")}
    n2 = {"N": _pe("-2*i*y/(twopii*(1+x^2+y^2))"),
          "S": _pe("2*i*v/(twopii*(1+u^2+v^2))")}
    n3 = {"N": _pe("i*(x^2+y^2-1)/(twopii*(1+x^2+y^2))"),
          "S": _pe("-i*(u^2+v^2-1)/(twopii*(1+u^2+v^2))")}
    return [n1, n2, n3]


def standard_complex_structure(atlas) -> ComplexStructureData:
    mat = [[_pe("0"), _pe("1")], [_pe("-1"), _pe("0")]]
    samples = [{"chart": "N", "point": {"x": 0.4, "y": -0.3}},
               {"chart": "S", "point": {"u": 0.2, "v": 0.5}}]
    return ComplexStructureData(atlas, {"N": mat, "S": [[r for r in row] for row in mat]},
                                positivity_samples=samples)


def holomorphic_coordinates():
    return {"N": _pe("x - i*y"), "S": _pe("u - i*v")}


def two_chart_cover(atlas) -> GoodCover:
    return GoodCover(atlas, ["N", "S"], [("N", "S")],
                     chart_refs={("N",): "N", ("S",): "S", ("N", "S"): "N"})


def o_bundle(atlas, k: int, cover=None) -> LineBundleData:
    """Degree-k line bundle in holomorphic frames with the round metric."""
    cover = cover or two_chart_cover(atlas)
    z = _pe("x - i*y")
    c = TransitionValue("N", z ** k if k >= 0 else (RationalExpr.const(1) / z) ** (-k))
    q_n, q_s = _pe("1+x^2+y^2"), _pe("1+u^2+v^2")
    h_n = (RationalExpr.const(1) / q_n) ** k if k >= 0 else q_n ** (-k)
    h_s = (RationalExpr.const(1) / q_s) ** k if k >= 0 else q_s ** (-k)
    eta_n = DifferentialForm(atlas, 1, LEAF_JTILDE, {"N": {
        ("x",): _scale(_pe("(i*i*x - i*y)/(twopii*(1+x^2+y^2))"), Fraction(k)),
        ("y",): _scale(_pe("(i*i*y + i*x)/(twopii*(1+x^2+y^2))"), Fraction(k))}})
    eta_s = DifferentialForm(atlas, 1, LEAF_JTILDE, {"S": {
        ("u",): _scale(_pe("(i*i*u - i*v)/(twopii*(1+u^2+v^2))"), Fraction(k)),
        ("v",): _scale(_pe("(i*i*v + i*u)/(twopii*(1+u^2+v^2))"), Fraction(k))}})
    return LineBundleData(f"O({k})", cover, {("N", "S"): c},
                          {"N": h_n, "S": h_s}, {"N": eta_n, "S": eta_s})


def su2_point_model(algebra=None) -> AlgebroidModel:
    algebra = algebra or su2()
    point = FiberedAtlas([Chart("pt")])
    return AlgebroidModel("su2-point", "bundle_of_algebras", point,
                          algebra.basis_names,
                          {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)},
                          [None, None, None], fiber_algebra=algebra)


def u1_point_model() -> AlgebroidModel:
    point = FiberedAtlas([Chart("pt")])
    return AlgebroidModel("u1-point", "bundle_of_algebras", point, ("e1",), {},
                          [None], fiber_algebra=u1())


def _fs_samples():
    return [{"chart": "N", "point": {"x": 0.3, "y": -0.2}},
            {"chart": "S", "point": {"u": -0.4, "v": 0.1}}]


def su2_orbit_scenario(k: int, atlas=None) -> ActionScenario:
    """Coadjoint-orbit scenario: su(2) rotations on the sphere of level k."""
    atlas = atlas or sphere_atlas()
    model = su2_point_model()
    fields = rotation_fields(atlas)
    action = ActionMap(model, atlas, fields, name="su2-rotations")
    action.require_validated()
    half = Fraction(k, 2)
    pairings = [{ch: _scale(v, half) for ch, v in n.items()}
                for n in direction_functions()]
    momentum = MomentumMapRep(model, pairings)
    presymplectic = PresymplecticData(atlas, omega_fs(atlas, Fraction(k)),
                                      sample_points=_fs_samples())
    scenario = ActionScenario(f"su2-orbit-{k}", model, action, presymplectic,
                              momentum,
                              extras={"kind": "coadjoint-orbit", "level": k,
                                      "degenerate_level": k == 0})
    scenario.extras["bundle"] = o_bundle(atlas, k)
    scenario.extras["complex_structure"] = standard_complex_structure(atlas)
    scenario.extras["holomorphic_coords"] = holomorphic_coordinates()
    scenario.extras["ansatz_cap"] = max(k, 0) + 2
    return scenario


def u1_rotation_scenario(k: int, atlas=None) -> ActionScenario:
    """Circle rotation about the vertical axis on the level-k sphere."""
    atlas = atlas or sphere_atlas()
    model = u1_point_model()
    fields = rotation_fields(atlas)
    action = ActionMap(model, atlas, [fields[2]], name="u1-rotation")
    action.require_validated()
    half = Fraction(k, 2)
    n3 = direction_functions()[2]
    momentum = MomentumMapRep(model, [{ch: _scale(v, half) for ch, v in n3.items()}])
    presymplectic = PresymplecticData(atlas, omega_fs(atlas, Fraction(k)),
                                      sample_points=_fs_samples())
    scenario = ActionScenario(f"u1-rotation-reduction-{k}", model, action,
                              presymplectic, momentum,
                              extras={"kind": "rotation-reduction", "level": k,
                                      "integration": "u1-weights"})
    scenario.extras["bundle"] = o_bundle(atlas, k)
    scenario.extras["complex_structure"] = standard_complex_structure(atlas)
    scenario.extras["holomorphic_coords"] = holomorphic_coordinates()
    scenario.extras["ansatz_cap"] = max(k, 0) + 2
    scenario.extras["zero_level"] = dict(
        chart="N", equations=[_pe("x^2+y^2-1")],
        parametrization={"x": _pe("(1-t^2)/(1+t^2)"), "y": _pe("2*t/(1+t^2)")},
        param_names=("t",), orbit_dimension=1,
        note="equator; rational parametrization omits one point of the circle")
    return scenario


def zero_level_data(scenario: ActionScenario) -> ZeroLevelData:
    decl = scenario.extras["zero_level"]
    return ZeroLevelData(scenario, decl["chart"], decl["equations"],
                         decl["parametrization"], decl["param_names"],
                         orbit_dimension=decl.get("orbit_dimension", 0),
                         note=decl.get("note", ""))


# ---------------------------------------------------------------------------
# sector covers with the angle bookkeeping
# ---------------------------------------------------------------------------

def angle_primitive(atlas) -> DifferentialForm:
    """d(azimuth)/2pi on the N chart: (x dy - y dx)/(2 pi r^2)."""
    return DifferentialForm(atlas, 1, "full", {"N": {
        ("x",): _pe("-y*i/(twopii*(x^2+y^2))"),
        ("y",): _pe("x*i/(twopii*(x^2+y^2))")}})


def sector_cover(atlas, sectors: int) -> GoodCover:
    """Patch 0 around the far pole plus `sectors` overlapping plane sectors."""
    if sectors not in (3, 4):
        raise ValueError("catalog covers use 3 or 4 sectors")
    idx = list(range(sectors + 1))
    import itertools
    simplices = [tuple(p) for p in itertools.combinations(idx, 2)]
    if sectors == 3:
        triples = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        samples = {((0, 1, 2), "c0"): {"x": -1, "y": 3},
                   ((0, 2, 3), "c0"): {"x": -1, "y": -3},
                   ((0, 1, 3), "c0"): {"x": 3, "y": 1},
                   ((1, 2, 3), "c0"): {"x": Fraction(1, 4), "y": Fraction(1, 4)}}
        quads = []
    else:
        triples = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 1, 4),
                   (1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
        samples = {((0, 1, 2), "c0"): {"x": 1, "y": 3},
                   ((0, 2, 3), "c0"): {"x": -3, "y": 1},
                   ((0, 3, 4), "c0"): {"x": -1, "y": -3},
                   ((0, 1, 4), "c0"): {"x": 3, "y": 1}}
        quads = [(1, 2, 3, 4)]
    charts = {(i,): "N" if i > 0 else "S" for i in idx}
    for s in simplices + triples + quads:
        charts[tuple(sorted(s))] = "N"
    return GoodCover(atlas, idx, simplices + triples + quads,
                     chart_refs=charts, sample_points=samples,
                     angle_forms={"N": angle_primitive(atlas)})


def sector_zigzag_data(atlas, cover: GoodCover, level: Fraction):
    """Primitives, overlap functions and branch offsets for level * omega_FS."""
    eta_n = DifferentialForm(atlas, 1, "full", {"N": {
        ("x",): _scale(_pe("-y*i/(twopii*(1+x^2+y^2))"), level),
        ("y",): _scale(_pe("x*i/(twopii*(1+x^2+y^2))"), level)}})
    eta_s = DifferentialForm(atlas, 1, "full", {"S": {
        ("u",): _scale(_pe("-v*i/(twopii*(1+u^2+v^2))"), level),
        ("v",): _scale(_pe("u*i/(twopii*(1+u^2+v^2))"), level)}})
    primitives = {i: eta_n for i in cover.index_set if i != 0}
    primitives[0] = eta_s
    overlaps = {}
    for simplex in cover.k_simplices(1):
        j, k = simplex
        if j == 0:
            overlaps[(j, k)] = OverlapFunction("N", 0, ExactScalar(-level))
        else:
            overlaps[(j, k)] = OverlapFunction("N", 0, 0)
    sectors = len(cover.index_set) - 1
    cut_triple = (0, 1, 3) if sectors == 3 else (0, 1, 4)
    offsets = {(cut_triple, "c0"): {(0, cut_triple[2]): 1}}
    return primitives, overlaps, offsets


# ---------------------------------------------------------------------------
# gauge scenarios
# ---------------------------------------------------------------------------

def base_plane_atlas() -> FiberedAtlas:
    return FiberedAtlas([Chart("B", base_coords=("b1", "b2"), star_shaped=True)])


def gauge_su2_scenario(k: int, twist: Fraction = Fraction(1)) -> GaugeScenario:
    """Nonflat su(2) potential over the plane twisting the level-k sphere."""
    base = base_plane_atlas()
    algebra = su2()
    zero = (_pe("0"), _pe("0"), _pe("0"))
    a2 = (_pe("0"), _pe("0"), _scale(_pe("b1"), twist))
    bundle_data = PrincipalBundleData(base, "SU2", algebra, [zero, a2])
    fiber_atlas = sphere_atlas()
    half = Fraction(k, 2)
    pairings = [{ch: _scale(v, half) for ch, v in n.items()}
                for n in direction_functions()]
    fiber = FiberPackage(
        algebra=algebra,
        atlas=fiber_atlas,
        action_fields=rotation_fields(fiber_atlas),
        omega=omega_fs(fiber_atlas, Fraction(k), LEAF_J),
        momentum_pairings=pairings,
        line_bundle=o_bundle(fiber_atlas, k),
        complex_matrices={"N": [[_pe("0"), _pe("1")], [_pe("-1"), _pe("0")]],
                          "S": [[_pe("0"), _pe("1")], [_pe("-1"), _pe("0")]]},
        holomorphic_coords=holomorphic_coordinates(),
        ansatz_cap=max(k, 0) + 2,
        fiber_scenario=None,
    )
    fiber_scenario = su2_orbit_scenario(k, atlas=fiber_atlas)
    fiber_scenario.extras["bundle"] = fiber.line_bundle
    fiber.fiber_scenario = fiber_scenario
    gauge = build_gauge_scenario(bundle_data, fiber, name=f"gauge-su2-{k}")
    gauge.scenario.extras["kind"] = "gauge-su2"
    gauge.scenario.extras["level"] = k
    gauge.scenario.extras["degenerate_level"] = k == 0
    return gauge


def gauge_u1_character_scenario(n: int, twist: Fraction = Fraction(1)) -> GaugeScenario:
    """U(1) character n over the plane: the fiber is a point."""
    base = base_plane_atlas()
    algebra = u1()
    a1 = (_pe("0"),)
    a2 = (_scale(_pe("b1"), twist),)
    bundle_data = PrincipalBundleData(base, "U1", algebra, [a1, a2])
    fiber_atlas = FiberedAtlas([Chart("pt", star_shaped=True)])
    omega_point = DifferentialForm(fiber_atlas, 2, LEAF_J, {"pt": {}})
    fiber = FiberPackage(
        algebra=algebra,
        atlas=fiber_atlas,
        action_fields=[VectorField(fiber_atlas, LEAF_J, {"pt": {}})],
        omega=omega_point,
        momentum_pairings=[{"pt": RationalExpr.const(n)}],
        line_bundle=None,
        complex_matrices=None,
        holomorphic_coords=None,
        ansatz_cap=0,
        fiber_scenario=None,
    )
    gauge = build_gauge_scenario(bundle_data, fiber, name=f"gauge-u1-char-{n}")
    gauge.scenario.extras["kind"] = "gauge-u1-character"
    gauge.scenario.extras["level"] = n
    return gauge


def gauge_u1_rotation_scenario(k: int, twist: Fraction = Fraction(1)) -> GaugeScenario:
    """U(1) structure group acting on the level-k sphere, twisted over the plane."""
    base = base_plane_atlas()
    algebra = u1()
    a1 = (_pe("0"),)
    a2 = (_scale(_pe("b1"), twist),)
    bundle_data = PrincipalBundleData(base, "U1", algebra, [a1, a2])
    fiber_atlas = sphere_atlas()
    half = Fraction(k, 2)
    n3 = direction_functions()[2]
    fiber = FiberPackage(
        algebra=algebra,
        atlas=fiber_atlas,
        action_fields=[rotation_fields(fiber_atlas)[2]],
        omega=omega_fs(fiber_atlas, Fraction(k), LEAF_J),
        momentum_pairings=[{ch: _scale(v, half) for ch, v in n3.items()}],
        line_bundle=o_bundle(fiber_atlas, k),
        complex_matrices={"N": [[_pe("0"), _pe("1")], [_pe("-1"), _pe("0")]],
                          "S": [[_pe("0"), _pe("1")], [_pe("-1"), _pe("0")]]},
        holomorphic_coords=holomorphic_coordinates(),
        ansatz_cap=max(k, 0) + 2,
        fiber_scenario=None,
    )
    fiber_scenario = u1_rotation_scenario(k, atlas=fiber_atlas)
    fiber_scenario.extras["bundle"] = fiber.line_bundle
    fiber.fiber_scenario = fiber_scenario
    gauge = build_gauge_scenario(bundle_data, fiber, name=f"gauge-u1-rot-{k}")
    gauge.scenario.extras["kind"] = "gauge-u1-rotation"
    gauge.scenario.extras["level"] = k
    return gauge


# ---------------------------------------------------------------------------
# flat / degenerate catalog entries
# ---------------------------------------------------------------------------

def pair_groupoid_scenario() -> ActionScenario:
    """Pair groupoid of the line acting on itself: everything collapses."""
    atlas = FiberedAtlas([Chart("L", base_coords=("s",), orbit_coords=("s",),
                                star_shaped=True)])
    field = VectorField(atlas, LEAF_JTILDE, {"L": {"s": 1}})
    model = AlgebroidModel("pair-line", "tangent", atlas, ("ds",), {}, [field])
    action = ActionMap(model, atlas, [field], name="translation")
    action.require_validated()
    omega = DifferentialForm(atlas, 2, LEAF_JTILDE, {"L": {}})
    momentum = MomentumMapRep(model, [{"L": RationalExpr.zero()}])
    scenario = ActionScenario("pair-groupoid-flat", model, action,
                              PresymplecticData(atlas, omega), momentum,
                              extras={"kind": "pair-groupoid",
                                      "quantization_note":
                                      "fibers are points; quantization empty",
                                      "full_quotient": "single point"})
    return scenario


def s1_plane_scenario(function=None) -> ActionScenario:
    """Circle rotations of the plane (non-regular isotropy at the origin)."""
    atlas = FiberedAtlas([Chart("P", base_coords=("x", "y"), star_shaped=True)])
    rotation = VectorField(atlas, "full", {"P": {"x": _pe("-y"), "y": _pe("x")}})
    model = AlgebroidModel("s1-plane", "action", atlas, ("e1",), {}, [rotation])
    action = ActionMap(model, atlas, [rotation], name="plane-rotation")
    action.require_validated()
    omega = DifferentialForm(atlas, 2, LEAF_JTILDE, {"P": {}})
    f = function if function is not None else _pe("x^2+y^2")
    momentum = MomentumMapRep(model, [{"P": f}])
    scenario = ActionScenario("s1-plane-action", model, action,
                              PresymplecticData(atlas, omega), momentum,
                              extras={"kind": "plane-rotation",
                                      "integration": "s1-plane",
                                      "plane_function": f})
    return scenario


def sphere_family_scenario(level: int = 1) -> ActionScenario:
    """The sphere as a family of circles over the interval; step momentum."""
    atlas = FiberedAtlas([Chart("I", base_coords=("q",), star_shaped=True)])
    model = AlgebroidModel("sphere-family", "bundle_of_algebras", atlas, ("e1",),
                          {}, [None], fiber_algebra=u1())
    action = ActionMap(model, atlas,
                       [VectorField(atlas, LEAF_J, {"I": {}})],
                       name="family-action")
    action.require_validated()
    omega = DifferentialForm(atlas, 2, LEAF_JTILDE, {"I": {}})
    momentum = MomentumMapRep(model, [{"I": RationalExpr.const(level)}])
    scenario = ActionScenario("sphere-family", model, action,
                              PresymplecticData(atlas, omega), momentum,
                              extras={"kind": "sphere-family", "level": level,
                                      "integration": "sphere-family",
                                      "endpoint_note":
                                      "pairing value drops to 0 at q = +-1; the "
                                      "integrated phase stays continuous"})
    return scenario


def foliation_flat_scenario() -> ActionScenario:
    """Two-dimensional foliation of 3-space with a leafwise form and flat line."""
    atlas = FiberedAtlas([Chart("F", base_coords=("x", "y", "w"),
                                orbit_coords=("x", "y"), star_shaped=True)])
    d_x = VectorField(atlas, LEAF_JTILDE, {"F": {"x": 1}})
    d_y = VectorField(atlas, LEAF_JTILDE, {"F": {"y": 1}})
    model = AlgebroidModel("foliation", "foliation", atlas, ("dx", "dy"),
                           {(0, 1): (0, 0)}, [d_x, d_y])
    action = ActionMap(model, atlas, [d_x, d_y], name="leafwise")
    action.require_validated()
    omega = DifferentialForm(atlas, 2, LEAF_JTILDE,
                             {"F": {("x", "y"): _pe("1+w^2")}})
    momentum = MomentumMapRep(model, [{"F": RationalExpr.zero()},
                                      {"F": _pe("x*(1+w^2)")}])
    scenario = ActionScenario("foliation-flat", model, action,
                              PresymplecticData(atlas, omega), momentum,
                              extras={"kind": "foliation",
                                      "quantization_note":
                                      "fibers are points; quantization empty"})
    # flat prequantization data: trivial line with the leafwise potential
    cover = GoodCover(atlas, ["F"], [], chart_refs={("F",): "F"})
    eta = DifferentialForm(atlas, 1, LEAF_JTILDE,
                           {"F": {("y",): _pe("x*(1+w^2)")}})
    scenario.extras["bundle"] = LineBundleData(
        "foliation-line", cover, {}, {"F": RationalExpr.const(1)}, {"F": eta})
    return scenario


# ---------------------------------------------------------------------------
# negative controls
# ---------------------------------------------------------------------------

def control_flipped_momentum(k: int = 2) -> ActionScenario:
    """Vertical momentum component negated: internal check must fail."""
    base = su2_orbit_scenario(k)
    pairings = [dict(base.momentum.pairing(0)), dict(base.momentum.pairing(1)),
                {ch: -v for ch, v in base.momentum.pairing(2).items()}]
    return ActionScenario(f"control-flipped-momentum-{k}", base.model, base.action,
                          base.presymplectic, MomentumMapRep(base.model, pairings),
                          extras=dict(base.extras, control=True))


def control_scaled_momentum(k: int = 2) -> ActionScenario:
    """Momentum scaled by a non-invariant function: equivariance must fail."""
    base = su2_orbit_scenario(k)
    factor = {"N": _pe("1+x"), "S": _pe("1+u/(u^2+v^2)")}
    pairings = [{ch: v * factor[ch] for ch, v in base.momentum.pairing(i).items()}
                for i in range(3)]
    return ActionScenario(f"control-scaled-momentum-{k}", base.model, base.action,
                          base.presymplectic, MomentumMapRep(base.model, pairings),
                          extras=dict(base.extras, control=True))


def control_imaginary_momentum(k: int = 2) -> ActionScenario:
    """Momentum multiplied by i: Hermiticity of the operators must fail."""
    base = su2_orbit_scenario(k)
    i_unit = ExactScalar(0, 1)
    pairings = [{ch: v * i_unit for ch, v in base.momentum.pairing(idx).items()}
                for idx in range(3)]
    return ActionScenario(f"control-imaginary-momentum-{k}", base.model, base.action,
                          base.presymplectic, MomentumMapRep(base.model, pairings),
                          extras=dict(base.extras, control=True))


def control_flipped_field(k: int = 2):
    """Vertical rotation field negated with the others kept: morphism fails."""
    atlas = sphere_atlas()
    model = su2_point_model()
    v1, v2, v3 = rotation_fields(atlas)
    return ActionMap(model, atlas, [v1, v2, -v3], name="flipped-vertical")


def control_skew_structure(atlas=None) -> ComplexStructureData:
    """x-dependent skew perturbation: not a complex structure equivariantly."""
    atlas = atlas or sphere_atlas()
    mat = [[_pe("x"), _pe("1+x^2")], [_pe("-1"), _pe("-x")]]
    return ComplexStructureData(atlas, {"N": mat, "S": [[_pe("0"), _pe("1")],
                                                        [_pe("-1"), _pe("0")]]})


# ---------------------------------------------------------------------------
# the registry
# ---------------------------------------------------------------------------

SCENARIO_FAMILIES = {
    "su2-orbit-k": {
        "factory": su2_orbit_scenario,
        "levels": (0, 1, 2, 3, 4),
        "description": "su(2) coadjoint-orbit sphere at integer level k",
    },
    "u1-rotation-reduction-k": {
        "factory": u1_rotation_scenario,
        "levels": (1, 2, 3, 4),
        "description": "circle rotation on the level-k sphere with reduction data",
    },
    "gauge-su2-k": {
        "factory": gauge_su2_scenario,
        "levels": (0, 1, 2, 3),
        "description": "nonflat su(2) potential over the plane twisting the sphere",
    },
    "gauge-u1-char-n": {
        "factory": gauge_u1_character_scenario,
        "levels": (0, 1, 2),
        "description": "U(1) character n over the plane (point fiber)",
    },
    "pair-groupoid-flat": {
        "factory": pair_groupoid_scenario,
        "levels": None,
        "description": "pair groupoid of the line; quantization is empty",
    },
    "s1-plane-action": {
        "factory": s1_plane_scenario,
        "levels": None,
        "description": "circle rotations of the plane; closed-form integration",
    },
    "sphere-family": {
        "factory": sphere_family_scenario,
        "levels": (1, 2),
        "description": "sphere as a family of shrinking circles; step momentum",
    },
    "foliation-flat": {
        "factory": foliation_flat_scenario,
        "levels": None,
        "description": "leafwise-presymplectic foliation with flat quantization",
    },
}


def list_scenarios(filter_text=""):
    out = []
    for name, info in SCENARIO_FAMILIES.items():
        if filter_text and filter_text not in name:
            continue
        out.append({"name": name, "description": info["description"],
                    "levels": info["levels"]})
    return out


def build_scenario(name, level=None):
    if name in SCENARIO_FAMILIES:
        info = SCENARIO_FAMILIES[name]
        if info["levels"] is None:
            return info["factory"]()
        lvl = level if level is not None else info["levels"][min(1, len(info["levels"]) - 1)]
        return info["factory"](lvl)
    # allow concrete names like su2-orbit-2
    for family, info in SCENARIO_FAMILIES.items():
        if info["levels"] is None:
            continue
        stem = family.rsplit("-", 1)[0]
        if name.startswith(stem + "-"):
            suffix = name[len(stem) + 1:]
            try:
                lvl = int(suffix)
            except ValueError:
                continue
            return info["factory"](lvl)
    raise KeyError(name)
