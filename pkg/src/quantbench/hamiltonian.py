"""Momentum-map verification: internal, equivariant and full Hamiltonian
conditions, the algebroid differential, and exact-form perturbations.

Pairing data ``<mu, X>`` is stored chartwise per generator; every quantifier
over sections is discharged on the declared generators together with module
linearity over pulled-back base functions.
"""

from __future__ import annotations

import random

from .errors import PerturbationRejectedError
from .exprs import RationalExpr, coerce_rational
from .geometry import (
    DifferentialForm,
    LEAF_J,
    LEAF_JTILDE,
    exterior_derivative,
    form_function,
    glue_check,
    interior_product,
    lie_derivative,
)
from .liealg import ActionMap, AlgebroidModel, action_algebroid, random_polynomial
from .scalars import ExactScalar


class CheckResult:
    def __init__(self, check_id, ok, failures=None, notes=None, status=None):
        self.check_id = check_id
        self.ok = bool(ok)
        self.failures = list(failures or [])
        self.notes = list(notes or [])
        self.status = status or ("pass" if self.ok else "fail")

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"CheckResult({self.check_id}: {self.status}, {len(self.failures)} failures)"


class PresymplecticData:
    """A leafwise-closed 2-form restricting to fiberwise symplectic forms."""

    def __init__(self, atlas, omega_tilde: DifferentialForm, sample_points=None):
        self.atlas = atlas
        self.omega_tilde = omega_tilde
        self.omega = omega_tilde.restrict(LEAF_J)
        self.sample_points = list(sample_points or [])

    def fiber_matrix(self, chart_name):
        chart = self.atlas.chart(chart_name)
        fibers = chart.fiber_coords
        return [[self.omega.coefficient(chart_name, (a, b)) if
                 chart.coord_index(a) < chart.coord_index(b) else
                 -self.omega.coefficient(chart_name, (b, a)) if
                 chart.coord_index(a) > chart.coord_index(b) else RationalExpr.zero()
                 for b in fibers] for a in fibers]


def _det(rows):
    n = len(rows)
    if n == 0:
        return RationalExpr.const(1)
    if n == 1:
        return rows[0][0]
    total = RationalExpr.zero()
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def presymplectic_check(data: PresymplecticData) -> CheckResult:
    """Leafwise closedness plus fiberwise nondegeneracy (symbolic + samples)."""
    failures = []
    notes = ["nondegeneracy method: symbolic determinant + declared sample points"]
    d_omega = exterior_derivative(data.omega_tilde)
    if not d_omega.is_zero():
        failures.append(("closedness", repr(d_omega.simplify())))
    glue = glue_check(data.atlas, data.omega_tilde)
    if not glue.ok:
        failures.append(("gluing", str(glue.residuals)))
    for chart_name in data.omega_tilde.charts():
        det = _det(data.fiber_matrix(chart_name)).simplify()
        if data.atlas.chart(chart_name).fiber_coords and det.is_zero():
            failures.append(("nondegeneracy", f"chart {chart_name}: determinant vanishes"))
    for sample in data.sample_points:
        chart_name, point = sample["chart"], sample["point"]
        det = _det(data.fiber_matrix(chart_name))
        value = det.numeric(point)
        if abs(value) < 1e-12:
            failures.append(("nondegeneracy-sample", f"{chart_name}@{point}"))
    return CheckResult("presymplectic", not failures, failures, notes)


class MomentumMapRep:
    """Chartwise pairing functions <mu, gen_i> plus isotropy restriction."""

    def __init__(self, model: AlgebroidModel, pairings):
        if len(pairings) != model.n:
            raise ValueError("one pairing function per generator required")
        self.model = model
        self.pairings = [dict((ch, coerce_rational(v)) for ch, v in p.items())
                         for p in pairings]

    def pairing(self, index) -> dict:
        return self.pairings[index]

    def pairing_form(self, atlas, index) -> DifferentialForm:
        return form_function(atlas, self.pairings[index], LEAF_JTILDE)

    def section_pairing(self, section) -> dict:
        """<mu, sum f_i gen_i> = sum (J^* f_i) <mu, gen_i>, chartwise."""
        charts = set()
        for p in self.pairings:
            charts |= set(p)
        out = {}
        for ch in charts:
            total = RationalExpr.zero()
            for coeff, p in zip(section.coeffs, self.pairings):
                total = total + coeff * p.get(ch, RationalExpr.zero())
            out[ch] = total
        return out


class ActionScenario:
    """Everything the condition checks need, bundled."""

    def __init__(self, name, model: AlgebroidModel, action: ActionMap,
                 presymplectic: PresymplecticData, momentum: MomentumMapRep,
                 extras=None):
        self.name = name
        self.model = model
        self.action = action
        self.presymplectic = presymplectic
        self.momentum = momentum
        self.extras = dict(extras or {})
        self.atlas = presymplectic.atlas
        self._action_model = None

    @property
    def action_model(self) -> AlgebroidModel:
        if self._action_model is None:
            self._action_model = action_algebroid(self.model, self.action)
        return self._action_model

    def generator_field(self, index):
        return self.action.of(self.model.basis_section(index))

    def isotropy_indices(self):
        return self.model.isotropy_indices


# ---------------------------------------------------------------------------
# the algebroid differential (sign: d_n = (-1)^n * Chevalley-Eilenberg d_n)
# ---------------------------------------------------------------------------

class AlgebroidCochain:
    """Antisymmetric multilinear data on the action algebroid's generators.

    degree 0: chartwise function; degree 1: list per generator; degree 2:
    dict (i, j) with i < j -> chartwise function.
    """

    def __init__(self, scenario: ActionScenario, degree, values):
        self.scenario = scenario
        self.degree = degree
        self.values = values

    def value(self, *indices) -> dict:
        if self.degree == 0:
            return self.values
        if self.degree == 1:
            return self.values[indices[0]]
        i, j = indices
        if i == j:
            return {}
        if i < j:
            return self.values.get((i, j), {})
        return _fn_scale(self.values.get((j, i), {}), ExactScalar(-1))


def _fn_scale(fn, scalar):
    return {ch: v * scalar for ch, v in fn.items()}


def _fn_add(*fns):
    out = {}
    for fn in fns:
        for ch, v in fn.items():
            out[ch] = out.get(ch, RationalExpr.zero()) + v
    return out


def _fn_simplify(fn):
    return {ch: v.light() for ch, v in fn.items()}


def _fn_is_zero(fn):
    return all(v.is_zero() for v in fn.values())


def algebroid_differential(cochain: AlgebroidCochain) -> AlgebroidCochain:
    scenario = cochain.scenario
    model = scenario.model
    n = model.n
    if cochain.degree == 0:
        values = []
        for i in range(n):
            field = scenario.generator_field(i)
            values.append({ch: field.derive(v, ch) if ch in field.components else
                           RationalExpr.zero() for ch, v in cochain.values.items()})
        return AlgebroidCochain(scenario, 1, values)
    if cochain.degree == 1:
        values = {}
        for i in range(n):
            for j in range(i + 1, n):
                bracket = model.generator_bracket(i, j)
                mu_bracket = {}
                for k, coeff in enumerate(bracket):
                    if coeff.is_zero():
                        continue
                    mu_bracket = _fn_add(
                        mu_bracket,
                        {ch: v * coeff for ch, v in cochain.values[k].items()})
                f_i = scenario.generator_field(i)
                f_j = scenario.generator_field(j)
                term_i = {ch: f_i.derive(v, ch) for ch, v in cochain.values[j].items()
                          if ch in f_i.components}
                term_j = {ch: f_j.derive(v, ch) for ch, v in cochain.values[i].items()
                          if ch in f_j.components}
                values[(i, j)] = _fn_add(mu_bracket, _fn_scale(term_i, ExactScalar(-1)),
                                         term_j)
        return AlgebroidCochain(scenario, 2, values)
    if cochain.degree == 2:
        # d_2 = +CE_2 on generator triples
        values = {}
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    total = {}
                    for (pos, a, rest) in ((0, i, (j, k)), (1, j, (i, k)), (2, k, (i, j))):
                        field = scenario.generator_field(a)
                        nu = cochain.value(*rest)
                        term = {ch: field.derive(v, ch) for ch, v in nu.items()
                                if ch in field.components}
                        total = _fn_add(total, _fn_scale(term, ExactScalar((-1) ** pos)))
                    for (pos, pair_, c) in ((0, (i, j), k), (1, (i, k), j), (2, (j, k), i)):
                        bracket = model.generator_bracket(*pair_)
                        contraction = {}
                        for m, coeff in enumerate(bracket):
                            if coeff.is_zero():
                                continue
                            nu = cochain.value(m, c)
                            contraction = _fn_add(contraction,
                                                  {ch: v * coeff for ch, v in nu.items()})
                        total = _fn_add(total, _fn_scale(contraction,
                                                         ExactScalar((-1) ** (pos + 1))))
                    values[(i, j, k)] = total
        return AlgebroidCochain(scenario, 3, values)
    raise NotImplementedError("differential implemented through degree 2")


# ---------------------------------------------------------------------------
# the condition checks
# ---------------------------------------------------------------------------

def internal_momentum_check(s: ActionScenario) -> CheckResult:
    """d^J <mu, X> = - iota_{alpha(X)} omega for isotropy generators."""
    failures = []
    for i in s.isotropy_indices():
        pairing = s.momentum.pairing_form(s.atlas, i)
        lhs = exterior_derivative(pairing, LEAF_J)
        rhs = interior_product(s.generator_field(i), s.presymplectic.omega)
        residual = (lhs + rhs).light()
        if not residual.is_zero():
            failures.append((s.model.generator_names[i], repr(residual)))
    return CheckResult("internal-momentum", not failures, failures)


def equivariance_check(s: ActionScenario) -> CheckResult:
    """alpha(X).<mu, Y> = <mu, [X, Y]> for isotropy Y (bracket-form identity).

    The dual-side convention <ad*(X) xi, Y> = <xi, ad(-X) Y> differs from this
    identity by a sign; reports carry the adopted form.
    """
    failures = []
    notes = ["equivariance verified as alpha(X).<mu,Y> - <mu,[X,Y]> = 0"]
    for i in range(s.model.n):
        field = s.generator_field(i)
        for j in s.isotropy_indices():
            pairing_j = s.momentum.pairing(j)
            derived = {ch: field.derive(v, ch) for ch, v in pairing_j.items()
                       if ch in field.components}
            bracket = s.model.generator_bracket(i, j)
            expected = {}
            for k, coeff in enumerate(bracket):
                if coeff.is_zero():
                    continue
                expected = _fn_add(expected,
                                   {ch: v * coeff for ch, v in s.momentum.pairing(k).items()})
            residual = _fn_simplify(_fn_add(derived, _fn_scale(expected, ExactScalar(-1))))
            if not _fn_is_zero(residual):
                failures.append((f"{s.model.generator_names[i]},"
                                 f"{s.model.generator_names[j]}",
                                 str({ch: str(v) for ch, v in residual.items()})))
    return CheckResult("coadjoint-equivariance", not failures, failures, notes)


def prequantization_condition_check(s: ActionScenario) -> CheckResult:
    """d_A mu + alpha^* omega_tilde = 0 on generator pairs."""
    failures = []
    mu = AlgebroidCochain(s, 1, s.momentum.pairings)
    d_mu = algebroid_differential(mu)
    for i in range(s.model.n):
        for j in range(i + 1, s.model.n):
            pulled = s.presymplectic.omega_tilde.apply(
                s.generator_field(i), s.generator_field(j))
            residual = _fn_simplify(_fn_add(d_mu.value(i, j), pulled))
            if not _fn_is_zero(residual):
                failures.append((f"{s.model.generator_names[i]},"
                                 f"{s.model.generator_names[j]}",
                                 str({ch: str(v) for ch, v in residual.items()})))
    return CheckResult("prequantization-condition", not failures, failures)


def quantization_condition_check(s: ActionScenario) -> CheckResult:
    """d^J <mu, X> = -(iota_{alpha(X)} omega_tilde)|_J for every generator."""
    failures = []
    for i in range(s.model.n):
        pairing = s.momentum.pairing_form(s.atlas, i)
        lhs = exterior_derivative(pairing, LEAF_J)
        contraction = interior_product(s.generator_field(i), s.presymplectic.omega_tilde)
        rhs = contraction.restrict(LEAF_J)
        residual = (lhs + rhs).light()
        if not residual.is_zero():
            failures.append((s.model.generator_names[i], repr(residual)))
    return CheckResult("quantization-condition", not failures, failures)


def hamiltonian_check(s: ActionScenario) -> CheckResult:
    parts = [presymplectic_check(s.presymplectic),
             prequantization_condition_check(s),
             quantization_condition_check(s)]
    failures = [f for p in parts for f in p.failures]
    return CheckResult("hamiltonian", not failures, failures)


def perturb(s: ActionScenario, beta: DifferentialForm, name=None) -> ActionScenario:
    """omega -> omega + d beta, mu -> mu + alpha^* beta, hypotheses checked."""
    for i in range(s.model.n):
        field = s.generator_field(i)
        moved = lie_derivative(field, beta).restrict(LEAF_J)
        if not moved.is_zero():
            raise PerturbationRejectedError(
                f"Lie derivative of the perturbation does not annihilate the fibers "
                f"for generator {s.model.generator_names[i]}",
                generator=s.model.generator_names[i])
    omega_new = s.presymplectic.omega_tilde + exterior_derivative(beta)
    pairings = []
    for i in range(s.model.n):
        field = s.generator_field(i)
        shift_form = interior_product(field, beta)
        shifted = dict(s.momentum.pairing(i))
        for ch in shift_form.charts():
            add = shift_form.coefficient(ch, ())
            shifted[ch] = shifted.get(ch, RationalExpr.zero()) + add
        pairings.append(shifted)
    out = ActionScenario(
        name or f"{s.name}+perturbation",
        s.model, s.action,
        PresymplecticData(s.atlas, omega_new, s.presymplectic.sample_points),
        MomentumMapRep(s.model, pairings),
        extras=dict(s.extras))
    pre = prequantization_condition_check(out)
    quant = quantization_condition_check(out)
    if not (pre.ok and quant.ok):
        raise PerturbationRejectedError(
            "perturbed scenario fails the momentum conditions: "
            f"{pre.failures + quant.failures}")
    return out


def dd_zero_report(s: ActionScenario, rng: random.Random, samples=3) -> CheckResult:
    """d_A o d_A = 0 from degree 0 (random functions) and from the momentum cochain."""
    failures = []
    variables = []
    for chart in s.atlas.charts.values():
        variables.extend(c for c in chart.coords if c not in variables)
    for trial in range(samples):
        f = random_polynomial(variables[:3] or variables, rng)
        zero_cochain = AlgebroidCochain(s, 0, {ch: f for ch in s.atlas.charts})
        dd = algebroid_differential(algebroid_differential(zero_cochain))
        for key, fn in dd.values.items():
            if not _fn_is_zero(fn):
                failures.append((f"ddf trial {trial} pair {key}", "nonzero"))
    mu = AlgebroidCochain(s, 1, s.momentum.pairings)
    dd_mu = algebroid_differential(algebroid_differential(mu))
    for key, fn in dd_mu.values.items():
        if not _fn_is_zero(fn):
            failures.append((f"ddmu triple {key}", "nonzero"))
    return CheckResult("differential-squares-to-zero", not failures, failures)
