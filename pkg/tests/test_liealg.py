"""Lie algebras, exact group elements, algebroid models and actions."""

import random
from fractions import Fraction

import pytest

from quantbench.catalog import rotation_fields, sphere_atlas, su2_point_model
from quantbench.errors import MalformedExpressionError, ModelMismatchError
from quantbench.exprs import parse_expr
from quantbench.geometry import LEAF_J, VectorField, commutator
from quantbench.liealg import (
    ActionMap,
    Ad,
    AlgebroidModel,
    GroupElement,
    LieAlgebra,
    abelian,
    action_algebroid,
    ad_star,
    coAd,
    jacobi_check,
    morphism_check,
    pair,
    random_su2,
    su2,
    u1,
)
from quantbench.scalars import ExactScalar, I, ONE, ZERO


class TestJacobi:
    def test_su2(self):
        assert jacobi_check(su2()).ok

    def test_abelian(self):
        assert jacobi_check(abelian(3)).ok

    def test_cyclic_rescaling_still_lie(self):
        # any purely cyclic antisymmetric table in dimension 3 satisfies Jacobi
        constants = {(0, 1, 2): 1, (1, 0, 2): -1, (1, 2, 0): 2, (2, 1, 0): -2,
                     (2, 0, 1): 1, (0, 2, 1): -1}
        assert jacobi_check(constants, ("e1", "e2", "e3")).ok

    def test_genuinely_failing_constants(self):
        constants = {(0, 1, 0): 1, (1, 0, 0): -1, (1, 2, 1): 1, (2, 1, 1): -1,
                     (2, 0, 2): 1, (0, 2, 2): -1}
        report = jacobi_check(constants, ("e1", "e2", "e3"))
        assert not report.ok
        assert report.failures

    def test_antisymmetry_enforced(self):
        with pytest.raises(MalformedExpressionError):
            LieAlgebra(("a", "b"), {(0, 1, 0): 1})


class TestGroupElements:
    def test_u1_unit_circle(self):
        g = GroupElement("U1", ExactScalar(Fraction(3, 5), Fraction(4, 5)))
        assert (g * g.inverse()) == GroupElement.identity("U1")
        with pytest.raises(MalformedExpressionError):
            GroupElement("U1", ExactScalar(2))

    def test_su2_constraints(self):
        g = GroupElement.su2_from_quaternion(Fraction(3, 5), 0, 0, Fraction(4, 5))
        assert (g * g.inverse()) == GroupElement.identity("SU2")
        with pytest.raises(MalformedExpressionError):
            GroupElement("SU2", ((ExactScalar(2), ZERO), (ZERO, ExactScalar(1))))

    def test_adjoint_diag_flips_e1(self):
        # quaternion (0,0,0,1) is the diagonal element diag(-i, i)
        g = GroupElement.su2_from_quaternion(0, 0, 0, 1)
        assert Ad(g, (ONE, ZERO, ZERO)) == (-ONE, ZERO, ZERO)

    def test_adjoint_identity(self):
        assert Ad(GroupElement.identity("SU2"), (ONE, ZERO, ZERO)) == \
            (ONE, ZERO, ZERO)
        assert Ad(GroupElement.identity("U1"), (ExactScalar(5),)) == (ExactScalar(5),)

    def test_adjoint_homomorphism_randomized(self):
        rng = random.Random(5)
        for _ in range(12):
            g, h = random_su2(rng), random_su2(rng)
            x = tuple(ExactScalar(rng.randint(-4, 4)) for _ in range(3))
            assert Ad(g * h, x) == Ad(g, Ad(h, x))
            assert Ad(g.inverse(), Ad(g, x)) == x

    def test_adjoint_preserves_bracket(self):
        rng = random.Random(8)
        alg = su2()
        for _ in range(8):
            g = random_su2(rng)
            x = tuple(ExactScalar(rng.randint(-3, 3)) for _ in range(3))
            y = tuple(ExactScalar(rng.randint(-3, 3)) for _ in range(3))
            lhs = Ad(g, tuple(v.constant_value()
                              for v in alg.bracket_vectors(x, y)))
            rhs = tuple(v.constant_value() for v in
                        alg.bracket_vectors(Ad(g, x), Ad(g, y)))
            assert lhs == rhs

    def test_pairing_invariance(self):
        rng = random.Random(9)
        for _ in range(12):
            g = random_su2(rng)
            xi = tuple(ExactScalar(rng.randint(-4, 4)) for _ in range(3))
            x = tuple(ExactScalar(rng.randint(-4, 4)) for _ in range(3))
            assert pair(coAd(g, xi), Ad(g, x)) == pair(xi, x)

    def test_ad_star_sign_convention(self):
        # <ad*(e1) xi, e2> = <xi, ad(-e1) e2> = -<xi, e3>
        alg = su2()
        xi = (ZERO, ZERO, ONE)
        moved = ad_star(alg, (ONE, ZERO, ZERO), xi)
        assert moved[1].constant_value() == -ONE


class TestAlgebroidModels:
    def test_ad_on_structure_constants(self):
        model = su2_point_model()
        out = model.ad(model.basis_section(0), model.basis_section(1))
        assert [c.simplify() for c in out.coeffs] == \
            [parse_expr("0"), parse_expr("0"), parse_expr("1")]
        # antisymmetry: ad(X)X = 0
        assert model.ad(model.basis_section(0), model.basis_section(0)).is_zero()

    def test_tangent_model_ad_is_zero(self):
        from quantbench.catalog import pair_groupoid_scenario
        scenario = pair_groupoid_scenario()
        model = scenario.model
        # ker(anchor) is trivial, so no isotropy sections exist
        assert model.isotropy_indices == ()
        with pytest.raises(ModelMismatchError):
            model.ad(model.basis_section(0), model.basis_section(0) * parse_expr("1"))

    def test_anchor_morphism_and_leibniz(self):
        from quantbench.catalog import foliation_flat_scenario
        model = foliation_flat_scenario().model
        assert model.anchor_morphism_report().ok
        assert model.leibniz_report(random.Random(2)).ok

    def test_gauge_splitting_recovers_base_field(self):
        from quantbench.catalog import gauge_u1_character_scenario
        gauge = gauge_u1_character_scenario(1)
        model = gauge.scenario.model
        section = model.splitting([parse_expr("b2"), parse_expr("1")])
        field = model.anchor(section)
        chart = next(iter(model.base_atlas.charts))
        assert (field.component(chart, "b1") - parse_expr("b2")).simplify().is_zero()
        assert (field.component(chart, "b2") - parse_expr("1")).simplify().is_zero()


class TestActions:
    def test_su2_rotations_pass(self):
        atlas = sphere_atlas()
        model = su2_point_model()
        action = ActionMap(model, atlas, rotation_fields(atlas))
        assert morphism_check(action).ok

    def test_flipped_vertical_field_fails_bracket(self):
        from quantbench.catalog import control_flipped_field
        report = morphism_check(control_flipped_field())
        assert not report.ok
        assert any(f[0] == "bracket" for f in report.failures)

    def test_zero_abelian_action_passes(self):
        atlas = sphere_atlas()
        from quantbench.geometry import FiberedAtlas, Chart
        point = FiberedAtlas([Chart("pt")])
        model = AlgebroidModel("ab", "bundle_of_algebras", point, ("e1", "e2"),
                               {}, [None, None], fiber_algebra=abelian(2))
        zero = VectorField(atlas, LEAF_J, {"N": {}, "S": {}})
        action = ActionMap(model, atlas, [zero, zero])
        assert morphism_check(action).ok

    def test_action_algebroid_bracket(self):
        atlas = sphere_atlas()
        model = su2_point_model()
        action = ActionMap(model, atlas, rotation_fields(atlas))
        derived = action_algebroid(model, action)
        # constant sections reproduce the structure constants
        bracket = derived.bracket(derived.basis_section(0), derived.basis_section(1))
        assert [c.simplify() for c in bracket.coeffs] == \
            [parse_expr("0"), parse_expr("0"), parse_expr("1")]
        # f = g = 1 collapse and Jacobi with f = x
        assert derived.jacobi_on_generators().ok
        assert derived.jacobi_on_generators(coefficient=parse_expr("x")).ok

    def test_action_algebroid_anchor_is_action(self):
        atlas = sphere_atlas()
        model = su2_point_model()
        fields = rotation_fields(atlas)
        action = ActionMap(model, atlas, fields)
        derived = action_algebroid(model, action)
        coeff = parse_expr("x")
        section = derived.section([coeff, 0, 0])
        anchored = derived.anchor(section)
        assert (anchored - fields[0] * coeff).is_zero()
