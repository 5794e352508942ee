"""Hermitian line bundles as cocycle data, curvature, the integral-class
construction, covariant-derivative operators with momentum potentials, and
the tensor/dual group structure.

Frames follow s_k = c_jk s_j with connection nabla s_j = twopii * eta_j s_j,
so metric compatibility reads h_k = |c_jk|^2 h_j and the gluing identity is
eta_k - eta_j = (1/twopii) dc_jk / c_jk.  Transition values are stored as
(rational factor) * exp(twopii * g) so tensor products and constructed
bundles share one code path.
"""

from __future__ import annotations

import random

from .cech import GoodCover, OverlapFunction, derham_to_cech, integrality_test
from .errors import CurvatureMismatchError, IntegralityError, MalformedExpressionError
from .exprs import RationalExpr, coerce_rational
from .geometry import (
    DifferentialForm,
    LEAF_FULL,
    LEAF_J,
    LEAF_JTILDE,
    exterior_derivative,
    glue_check,
    interior_product,
    commutator,
    VectorField,
)
from .hamiltonian import ActionScenario, AlgebroidCochain, CheckResult, \
    algebroid_differential, _fn_add, _fn_is_zero, _fn_scale, _fn_simplify
from .liealg import random_polynomial
from .scalars import ExactScalar, ZERO


class TransitionValue:
    """c = rational * exp(twopii * g); either factor may be trivial."""

    def __init__(self, chart, rational=1, exponent=None):
        self.chart = chart
        self.rational = coerce_rational(rational)
        if self.rational.is_zero():
            raise MalformedExpressionError("transition function must not vanish")
        self.exponent = exponent  # OverlapFunction or None

    def tensor(self, other):
        if other.chart != self.chart:
            raise MalformedExpressionError("transition charts differ under tensor")
        exp = _add_overlap(self.exponent, other.exponent)
        return TransitionValue(self.chart, self.rational * other.rational, exp)

    def dual(self):
        exp = None if self.exponent is None else self.exponent.scaled(ExactScalar(-1))
        return TransitionValue(self.chart, RationalExpr.const(1) / self.rational, exp)

    def dlog(self, cover) -> DifferentialForm:
        """(1/twopii) dc / c as a 1-form on the overlap chart."""
        atlas = cover.atlas
        chart = atlas.chart(self.chart)
        table = {}
        inv_twopii = RationalExpr.const(1) / RationalExpr.var("twopii")
        for coord in chart.coords:
            val = self.rational.derivative(coord) / self.rational * inv_twopii
            if not val.is_zero():
                table[(coord,)] = val
        form = DifferentialForm(atlas, 1, LEAF_FULL, {self.chart: table})
        if self.exponent is not None:
            form = form + self.exponent.differential(cover)
        return form

    def abs_squared(self) -> RationalExpr:
        """|c|^2; requires a real exponent so the phase factor drops out."""
        if self.exponent is not None:
            rat = self.exponent.rational_part
            if not (rat - rat.conj()).is_zero() or \
                    not self.exponent.angle_coeff.is_real():
                raise MalformedExpressionError("transition exponent is not real-valued")
        return (self.rational * self.rational.conj()).simplify()


def _add_overlap(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a.chart != b.chart:
        raise MalformedExpressionError("overlap exponents live on different charts")
    return OverlapFunction(a.chart, a.rational_part + b.rational_part,
                           a.angle_coeff + b.angle_coeff)


class LineBundleData:
    """Cover + transitions c_jk + metric weights h_j + potentials eta_j."""

    def __init__(self, name, cover: GoodCover, transitions, metric_weights,
                 potentials, branch_offsets=None):
        self.name = name
        self.cover = cover
        self.transitions = {tuple(k): v for k, v in transitions.items()}
        self.metric_weights = dict(metric_weights)
        self.potentials = dict(potentials)
        self.branch_offsets = dict(branch_offsets or {})
        self.validated = False

    def patch_chart(self, index):
        return self.cover.chart_of((index,))

    def transition_value(self, j, k) -> TransitionValue:
        if (j, k) in self.transitions:
            return self.transitions[(j, k)]
        if (k, j) in self.transitions:
            return self.transitions[(k, j)].dual()
        chart = self.cover.chart_of(tuple(sorted((j, k), key=self.cover.position.get)))
        return TransitionValue(chart, 1, None)

    def weight(self, index) -> RationalExpr:
        return coerce_rational(self.metric_weights[index])

    def potential(self, index) -> DifferentialForm:
        return self.potentials[index]


def trivial_bundle(cover: GoodCover, name="trivial") -> LineBundleData:
    atlas = cover.atlas
    weights = {}
    pots = {}
    for idx in cover.index_set:
        chart = cover.chart_of((idx,))
        weights[idx] = RationalExpr.const(1)
        pots[idx] = DifferentialForm(atlas, 1, LEAF_JTILDE, {chart: {}})
    return LineBundleData(name, cover, {}, weights, pots)


def _express_function(expr, src_chart, dst_chart, atlas):
    if src_chart == dst_chart:
        return expr
    transition = atlas.transition(dst_chart, src_chart)
    return transition.compose_into(expr)


def _express_form(form, dst_chart, atlas):
    if dst_chart in form.charts():
        return DifferentialForm(atlas, form.degree, LEAF_FULL,
                                {dst_chart: form.coefficients[dst_chart]})
    from .geometry import pullback
    src = next(iter(form.charts()))
    return pullback(atlas.transition(dst_chart, src), form)


def validate_bundle(bundle: LineBundleData) -> CheckResult:
    """Cocycle identity, metric compatibility, gluing, Hermiticity."""
    cover = bundle.cover
    atlas = cover.atlas
    failures = []
    notes = ["frame convention: s_k = c_jk s_j, nabla s_j = twopii eta_j s_j",
             "gluing: eta_k - eta_j = (1/twopii) d c_jk / c_jk"]
    # cocycle identity on triple overlaps
    for simplex in cover.k_simplices(2):
        j, k, l = simplex
        chart = cover.chart_of(simplex)
        c_jk, c_kl, c_jl = (bundle.transition_value(*p) for p in ((j, k), (k, l), (j, l)))
        rational = RationalExpr.const(1)
        for val, power in ((c_jk, 1), (c_kl, 1), (c_jl, -1)):
            expr = _express_function(val.rational, val.chart, chart, atlas)
            rational = rational * (expr if power == 1 else RationalExpr.const(1) / expr)
        exps = [c_jk.exponent, c_kl.exponent,
                None if c_jl.exponent is None else c_jl.exponent.scaled(ExactScalar(-1))]
        total = None
        for e in exps:
            total = _add_overlap(total, e)
        if total is None:
            if not (rational - 1).is_zero():
                failures.append(("cocycle", f"{simplex}: residual {rational.simplify()}"))
        else:
            # rational part must be 1 and the exponent an integer constant
            if not (rational - 1).is_zero():
                failures.append(("cocycle", f"{simplex}: rational residual"))
            if not total.angle_coeff.is_zero():
                offsets = bundle.branch_offsets.get((simplex, "c0"), None)
                if offsets is None:
                    failures.append(("cocycle", f"{simplex}: angle part without offsets"))
                    continue
            value = total.rational_part.simplify()
            for comp in cover.components[simplex]:
                offsets = bundle.branch_offsets.get((simplex, comp), {})
                offset_value = (
                    _angle_coeff(c_jk) * ExactScalar.coerce(offsets.get((j, k), 0))
                    + _angle_coeff(c_kl) * ExactScalar.coerce(offsets.get((k, l), 0))
                    - _angle_coeff(c_jl) * ExactScalar.coerce(offsets.get((j, l), 0)))
                sample = cover.sample_points.get((simplex, comp))
                if value.is_constant():
                    base = value.constant_value()
                elif sample is not None:
                    base = value.evaluate(sample)
                else:
                    failures.append(("cocycle", f"{simplex}: nonconstant exponent"))
                    continue
                if not (base + offset_value).is_integer():
                    failures.append(("cocycle",
                                     f"{simplex}/{comp}: exponent sum {base + offset_value}"))
    # metric compatibility and gluing on pair overlaps
    for simplex in cover.k_simplices(1):
        j, k = simplex
        chart = cover.chart_of(simplex)
        c = bundle.transition_value(j, k)
        h_j = _express_function(bundle.weight(j), bundle.patch_chart(j), chart, atlas)
        h_k = _express_function(bundle.weight(k), bundle.patch_chart(k), chart, atlas)
        abs2 = _express_function(c.abs_squared(), c.chart, chart, atlas)
        residual = (h_k - abs2 * h_j).light()
        if not residual.is_zero():
            failures.append(("metric", f"{simplex}: residual {residual}"))
        eta_j = _express_form(bundle.potential(j), chart, atlas)
        eta_k = _express_form(bundle.potential(k), chart, atlas)
        dlog = _express_form(c.dlog(cover), chart, atlas)
        glue_res = (eta_k - eta_j - dlog).light()
        if not glue_res.is_zero():
            failures.append(("gluing", f"{simplex}: residual {glue_res}"))
    # Hermiticity of the connection against the metric, patch by patch
    for idx in cover.index_set:
        chart = bundle.patch_chart(idx)
        h = bundle.weight(idx)
        eta = bundle.potential(idx)
        imag_part = eta - eta.conj()
        lhs = imag_part * RationalExpr.var("twopii")
        dh = exterior_derivative(
            DifferentialForm(atlas, 0, LEAF_JTILDE, {chart: {(): h}}), LEAF_JTILDE)
        rhs = dh * (RationalExpr.const(1) / h)
        residual = (lhs - rhs).light()
        if not residual.is_zero():
            failures.append(("hermitian", f"patch {idx}: residual {residual}"))
    result = CheckResult("bundle-data", not failures, failures, notes)
    bundle.validated = result.ok
    return result


def _angle_coeff(value: TransitionValue) -> ExactScalar:
    return ZERO if value.exponent is None else value.exponent.angle_coeff


def curvature(bundle: LineBundleData) -> DifferentialForm:
    """Chartwise d eta_j, checked consistent across patches and transitions."""
    if not bundle.validated:
        raise MalformedExpressionError("validate the bundle before taking curvature")
    atlas = bundle.cover.atlas
    tables = {}
    for idx in bundle.cover.index_set:
        chart = bundle.patch_chart(idx)
        k_form = exterior_derivative(bundle.potential(idx))
        table = k_form.coefficients.get(chart, {})
        if chart in tables:
            ref = tables[chart]
            keys = set(ref) | set(table)
            for key in keys:
                a = ref.get(key, RationalExpr.zero())
                b = table.get(key, RationalExpr.zero())
                if not (a - b).is_zero():
                    raise MalformedExpressionError(
                        f"curvature differs between patches sharing chart {chart}")
        else:
            tables[chart] = table
    form = DifferentialForm(atlas, 2, LEAF_JTILDE, tables)
    if len(tables) > 1:
        report = glue_check(atlas, form)
        if not report.ok:
            raise MalformedExpressionError(f"curvature does not glue: {report.residuals}")
    return form


def construct_from_integral_class(omega: DifferentialForm, cover: GoodCover,
                                  primitives=None, overlap_functions=None,
                                  branch_offsets=None, name="constructed"):
    """Bundle with curvature omega from an integral leafwise class.

    Uses the zig-zag data; transitions are exp(-twopii f'_jk) for the
    integer-corrected overlap functions, unit metric weights, and the declared
    primitives as potentials.
    """
    cls = derham_to_cech(omega, cover, primitives=primitives,
                         overlap_functions=overlap_functions,
                         branch_offsets=branch_offsets)
    report = integrality_test(cls)
    if not report.integral:
        raise IntegralityError("class is not integral", report)
    correction = report.correction
    transitions = {}
    for simplex in cover.k_simplices(1):
        j, k = simplex
        f = (overlap_functions or {}).get((j, k))
        if f is None:
            f = OverlapFunction(cover.chart_of(simplex), 0, 0)
        corrected = OverlapFunction(
            f.chart,
            f.rational_part - RationalExpr.const(correction.value(simplex)),
            f.angle_coeff)
        transitions[(j, k)] = TransitionValue(
            f.chart, 1, corrected.scaled(ExactScalar(-1)))
    weights = {}
    pots = dict(primitives or {})
    for idx in cover.index_set:
        weights[idx] = RationalExpr.const(1)
        if idx not in pots:
            raise MalformedExpressionError("constructed bundles need declared primitives")
    bundle = LineBundleData(name, cover, transitions, weights, pots,
                            branch_offsets=_negate_offsets(branch_offsets))
    result = validate_bundle(bundle)
    if not result.ok:
        raise MalformedExpressionError(f"constructed bundle fails validation: {result.failures}")
    return bundle


def _negate_offsets(branch_offsets):
    # offsets transported through f -> -f: the per-pair offsets are unchanged
    # (they scale with the angle primitive, whose coefficient already flipped).
    return dict(branch_offsets or {})


# ---------------------------------------------------------------------------
# covariant operators with momentum potentials
# ---------------------------------------------------------------------------

class KostantOperator:
    """First-order operator nabla_{alpha(X)} - twopii <mu, X> on local frames."""

    def __init__(self, scenario: ActionScenario, bundle: LineBundleData, section):
        self.scenario = scenario
        self.bundle = bundle
        self.section = section
        self.vector_part = scenario.action.of(section)
        self.pairing = scenario.momentum.section_pairing(section)
        self._potentials = {}
        for idx in bundle.cover.index_set:
            chart = bundle.patch_chart(idx)
            contraction = interior_product(self.vector_part, bundle.potential(idx))
            pot = contraction.coefficient(chart, ()) - \
                self.pairing.get(chart, RationalExpr.zero())
            self._potentials[idx] = pot * RationalExpr.var("twopii")

    def potential_part(self, idx) -> RationalExpr:
        return self._potentials[idx]

    def apply(self, idx, local_coefficient) -> RationalExpr:
        """Action on f s_idx in the idx-th frame."""
        chart = self.bundle.patch_chart(idx)
        f = coerce_rational(local_coefficient)
        return self.vector_part.derive(f, chart) + self._potentials[idx] * f


def kostant_operator(scenario: ActionScenario, bundle: LineBundleData,
                     section) -> KostantOperator:
    """Construct the operator; curvature must match the scenario's 2-form."""
    if not bundle.validated:
        validate_bundle(bundle)
    k_form = curvature(bundle)
    diff = (k_form - scenario.presymplectic.omega_tilde).light()
    if not diff.is_zero():
        raise CurvatureMismatchError(
            "bundle curvature differs from the scenario's leafwise 2-form")
    return KostantOperator(scenario, bundle, section)


def covariant_operator(bundle: LineBundleData, field: VectorField):
    """Plain nabla_v on local frames (no momentum potential)."""
    pots = {}
    for idx in bundle.cover.index_set:
        chart = bundle.patch_chart(idx)
        contraction = interior_product(field, bundle.potential(idx))
        pots[idx] = contraction.coefficient(chart, ()) * RationalExpr.var("twopii")

    def apply(idx, f):
        chart = bundle.patch_chart(idx)
        f = coerce_rational(f)
        return field.derive(f, chart) + pots[idx] * f
    return apply


def _test_coefficients(bundle, idx, rng):
    chart_name = bundle.patch_chart(idx)
    chart = bundle.cover.atlas.chart(chart_name)
    tests = [RationalExpr.const(1)]
    for coord in chart.coords[:2]:
        tests.append(RationalExpr.var(coord))
    tests.append(random_polynomial(chart.coords, rng))
    return tests


def rep_flatness_check(scenario: ActionScenario, bundle: LineBundleData,
                       rng=None) -> CheckResult:
    """[pi(X), pi(Y)] = pi([X, Y]) on frames and polynomial local sections."""
    rng = rng or random.Random(23)
    failures = []
    model = scenario.model
    ops = [kostant_operator(scenario, bundle, model.basis_section(i))
           for i in range(model.n)]
    for i in range(model.n):
        for j in range(i + 1, model.n):
            bracket_op = KostantOperator(scenario, bundle,
                                         model.bracket(model.basis_section(i),
                                                       model.basis_section(j)))
            for idx in bundle.cover.index_set:
                for f in _test_coefficients(bundle, idx, rng):
                    resid = (ops[i].apply(idx, ops[j].apply(idx, f))
                             - ops[j].apply(idx, ops[i].apply(idx, f))
                             - bracket_op.apply(idx, f)).light()
                    if not resid.is_zero():
                        failures.append((f"{model.generator_names[i]},"
                                         f"{model.generator_names[j]}@patch {idx}",
                                         str(resid)))
    return CheckResult("representation-flatness", not failures, failures)


def rep_hermitian_check(scenario: ActionScenario, bundle: LineBundleData,
                        rng=None) -> CheckResult:
    """h(pi(X)f, g) + h(f, pi(X)g) = alpha(X).h(f, g) with h(f,g) = conj(f) g h_j."""
    rng = rng or random.Random(29)
    failures = []
    model = scenario.model
    for i in range(model.n):
        op = kostant_operator(scenario, bundle, model.basis_section(i))
        field = op.vector_part
        for idx in bundle.cover.index_set:
            chart = bundle.patch_chart(idx)
            h = bundle.weight(idx)
            tests = _test_coefficients(bundle, idx, rng)
            for f in tests[:2]:
                for g in tests[1:]:
                    lhs = (op.apply(idx, f).conj() * g + f.conj() * op.apply(idx, g)) * h
                    rhs = field.derive(f.conj() * g * h, chart)
                    resid = (lhs - rhs).light()
                    if not resid.is_zero():
                        failures.append((f"{model.generator_names[i]}@patch {idx}",
                                         str(resid)))
    return CheckResult("representation-hermitian", not failures, failures)


def connection_equivariance_check(scenario: ActionScenario, bundle: LineBundleData,
                                  rng=None) -> CheckResult:
    """[pi(X), nabla_v] = nabla_{[alpha(X), v]} for random polynomial fiber fields."""
    rng = rng or random.Random(31)
    failures = []
    model = scenario.model
    atlas = scenario.atlas
    comps = {}
    for ch_name, chart in atlas.charts.items():
        comps[ch_name] = {c: random_polynomial(chart.coords, rng, degree=1)
                          for c in chart.fiber_coords}
    v = VectorField(atlas, LEAF_J, comps)
    nabla_v = covariant_operator(bundle, v)
    for i in range(model.n):
        op = kostant_operator(scenario, bundle, model.basis_section(i))
        moved = commutator(op.vector_part, v)
        nabla_moved = covariant_operator(bundle, moved)
        for idx in bundle.cover.index_set:
            for f in _test_coefficients(bundle, idx, rng):
                resid = (op.apply(idx, nabla_v(idx, f))
                         - nabla_v(idx, op.apply(idx, f))
                         - nabla_moved(idx, f)).light()
                if not resid.is_zero():
                    failures.append((f"{model.generator_names[i]}@patch {idx}",
                                     str(resid)))
    return CheckResult("connection-equivariance", not failures, failures)


# ---------------------------------------------------------------------------
# Picard operations and the algebroid Chern witness
# ---------------------------------------------------------------------------

def pic_tensor(a: LineBundleData, b: LineBundleData) -> LineBundleData:
    if a.cover is not b.cover:
        raise MalformedExpressionError("tensor requires a common cover")
    transitions = {}
    keys = set(a.transitions) | set(b.transitions)
    for key in keys:
        transitions[key] = a.transition_value(*key).tensor(b.transition_value(*key))
    weights = {idx: a.weight(idx) * b.weight(idx) for idx in a.cover.index_set}
    pots = {idx: a.potential(idx) + b.potential(idx) for idx in a.cover.index_set}
    offsets = dict(a.branch_offsets)
    for key, table in b.branch_offsets.items():
        merged = dict(offsets.get(key, {}))
        merged.update(table)
        offsets[key] = merged
    return LineBundleData(f"{a.name}(x){b.name}", a.cover, transitions, weights,
                          pots, branch_offsets=offsets)


def pic_dual(a: LineBundleData) -> LineBundleData:
    transitions = {key: val.dual() for key, val in a.transitions.items()}
    weights = {idx: RationalExpr.const(1) / a.weight(idx) for idx in a.cover.index_set}
    pots = {idx: -a.potential(idx) for idx in a.cover.index_set}
    return LineBundleData(f"{a.name}^*", a.cover, transitions, weights, pots,
                          branch_offsets=dict(a.branch_offsets))


def chern_class_algebroid(scenario: ActionScenario, bundle: LineBundleData) -> CheckResult:
    """Exactness witness: alpha^* K = -d_A mu for the scenario's momentum data."""
    if scenario.momentum is None:
        return CheckResult("chern-witness", True,
                           notes=["no witness declared"], status="hypotheses-not-met")
    if not bundle.validated:
        validate_bundle(bundle)
    k_form = curvature(bundle)
    mu = AlgebroidCochain(scenario, 1, scenario.momentum.pairings)
    d_mu = algebroid_differential(mu)
    failures = []
    model = scenario.model
    for i in range(model.n):
        for j in range(i + 1, model.n):
            pulled = k_form.apply(scenario.generator_field(i),
                                  scenario.generator_field(j))
            residual = _fn_simplify(_fn_add(d_mu.value(i, j), pulled))
            if not _fn_is_zero(residual):
                failures.append((f"{model.generator_names[i]},{model.generator_names[j]}",
                                 str({ch: str(v) for ch, v in residual.items()})))
    notes = ["witness: the declared momentum pairing exhibits alpha^*K as exact"]
    return CheckResult("chern-witness", not failures, failures, notes)
