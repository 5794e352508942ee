"""Lie algebras by structure constants, exact U(1)/SU(2) elements, algebroid
models with anchor and bracket, and actions on fibered atlases.

A section of any model is a coefficient vector over finitely many declared
generating sections; coefficients are rational functions on the model's base.
The bracket of generators is tabulated and extended by the Leibniz rule, so
one bracket/anchor implementation serves the tangent, foliation,
bundle-of-Lie-algebras, gauge and action variants alike.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import MalformedExpressionError, ModelMismatchError, UnvalidatedActionError
from .exprs import PolyExpr, RationalExpr, coerce_rational
from .geometry import FiberedAtlas, VectorField, commutator
from .scalars import ExactScalar, I, ONE, ZERO


class LieAlgebra:
    """Finite-dimensional Lie algebra given by exact structure constants."""

    def __init__(self, basis_names, structure_constants, check=True):
        self.basis_names = tuple(basis_names)
        self.dimension = len(self.basis_names)
        table = {}
        for (a, b, k), value in structure_constants.items():
            value = ExactScalar.coerce(value)
            if value.is_zero():
                continue
            table[(a, b, k)] = value
        self.constants = table
        if check:
            bad = self.antisymmetry_violations()
            if bad:
                raise MalformedExpressionError(f"structure constants not antisymmetric: {bad}")
            report = self.jacobi_report()
            if not report.ok:
                raise MalformedExpressionError(f"Jacobi identity fails on {report.failures}")

    def c(self, a, b, k) -> ExactScalar:
        return self.constants.get((a, b, k), ZERO)

    def antisymmetry_violations(self):
        bad = []
        n = self.dimension
        for a in range(n):
            for b in range(n):
                for k in range(n):
                    if self.c(a, b, k) != -self.c(b, a, k):
                        bad.append((a, b, k))
        return bad

    def bracket_vectors(self, u, v):
        """Bracket of coefficient vectors (entries ExactScalar or RationalExpr)."""
        n = self.dimension
        out = [RationalExpr.zero() for _ in range(n)]
        for a in range(n):
            ua = coerce_rational(u[a])
            if ua.is_zero():
                continue
            for b in range(n):
                vb = coerce_rational(v[b])
                if vb.is_zero():
                    continue
                for k in range(n):
                    cc = self.c(a, b, k)
                    if not cc.is_zero():
                        out[k] = out[k] + ua * vb * cc
        return out

    def jacobi_report(self):
        n = self.dimension
        failures = []
        basis = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    total = [RationalExpr.zero()] * n
                    for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                        inner = self.bracket_vectors(basis[x], basis[y])
                        term = self.bracket_vectors(inner, basis[z])
                        total = [t + s for t, s in zip(total, term)]
                    if any(not t.is_zero() for t in total):
                        failures.append((self.basis_names[a], self.basis_names[b],
                                         self.basis_names[c]))
        return JacobiReport(not failures, failures)


class JacobiReport:
    def __init__(self, ok, failures):
        self.ok = ok
        self.failures = failures

    def __bool__(self):
        return self.ok


def jacobi_check(algebra_or_constants, basis_names=None) -> JacobiReport:
    """Jacobi identity over all basis triples, exactly."""
    if isinstance(algebra_or_constants, LieAlgebra):
        return algebra_or_constants.jacobi_report()
    alg = LieAlgebra(basis_names, algebra_or_constants, check=False)
    if alg.antisymmetry_violations():
        return JacobiReport(False, ["antisymmetry"])
    return alg.jacobi_report()


def su2() -> LieAlgebra:
    """so(3)-normalized basis: [e_a, e_b] = sum_c eps_abc e_c."""
    eps = {}
    for (a, b, c) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[(a, b, c)] = ONE
        eps[(b, a, c)] = -ONE
    return LieAlgebra(("e1", "e2", "e3"), eps)


def u1() -> LieAlgebra:
    return LieAlgebra(("e1",), {})


def abelian(n) -> LieAlgebra:
    return LieAlgebra(tuple(f"e{i+1}" for i in range(n)), {})


# ---------------------------------------------------------------------------
# exact group elements
# ---------------------------------------------------------------------------

_SIGMA = (
    ((ZERO, ONE), (ONE, ZERO)),
    ((ZERO, -I), (I, ZERO)),
    ((ONE, ZERO), (ZERO, -ONE)),
)


def _mat_mul(a, b):
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(2)), ZERO) for j in range(2))
        for i in range(2))


def _mat_scale(s, a):
    return tuple(tuple(s * a[i][j] for j in range(2)) for i in range(2))


def _mat_add(a, b):
    return tuple(tuple(a[i][j] + b[i][j] for j in range(2)) for i in range(2))


def _mat_dagger(a):
    return tuple(tuple(a[j][i].conj() for j in range(2)) for i in range(2))


_ID2 = ((ONE, ZERO), (ZERO, ONE))


class GroupElement:
    """Exact-entry element of U(1) or SU(2)."""

    def __init__(self, group_tag, value):
        self.group_tag = group_tag
        if group_tag == "U1":
            value = ExactScalar.coerce(value)
            if value.abs2() != ONE:
                raise MalformedExpressionError("U(1) element must have |z|^2 = 1")
            self.value = value
        elif group_tag == "SU2":
            m = tuple(tuple(ExactScalar.coerce(e) for e in row) for row in value)
            det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            if det != ONE:
                raise MalformedExpressionError("SU(2) element must have determinant 1")
            if _mat_mul(m, _mat_dagger(m)) != _ID2:
                raise MalformedExpressionError("SU(2) element must be unitary")
            self.value = m
        else:
            raise MalformedExpressionError(f"unknown group tag {group_tag}")

    @staticmethod
    def identity(group_tag):
        return GroupElement(group_tag, ONE if group_tag == "U1" else _ID2)

    @staticmethod
    def su2_from_quaternion(t, x, y, z):
        t, x, y, z = (ExactScalar.coerce(v) for v in (t, x, y, z))
        m = ((t - I * z, -I * x - y), (-I * x + y, t + I * z))
        return GroupElement("SU2", m)

    def __mul__(self, other):
        if self.group_tag != other.group_tag:
            raise ModelMismatchError("group tags differ")
        if self.group_tag == "U1":
            return GroupElement("U1", self.value * other.value)
        return GroupElement("SU2", _mat_mul(self.value, other.value))

    def inverse(self):
        if self.group_tag == "U1":
            return GroupElement("U1", self.value.conj())
        return GroupElement("SU2", _mat_dagger(self.value))

    def __eq__(self, other):
        return self.group_tag == other.group_tag and self.value == other.value

    def __repr__(self):
        return f"GroupElement({self.group_tag}, {self.value})"


def Ad(g: GroupElement, coeffs):
    """Adjoint action on fiber-algebra coefficient vectors.

    SU(2) uses the so(3)-normalized basis e_a = -(i/2) sigma_a; U(1) is abelian.
    """
    if g.group_tag == "U1":
        return tuple(ExactScalar.coerce(c) for c in coeffs)
    coeffs = tuple(ExactScalar.coerce(c) for c in coeffs)
    m = ((ZERO, ZERO), (ZERO, ZERO))
    for a in range(3):
        term = _mat_scale(coeffs[a] * ExactScalar(0, Fraction(-1, 2)), _SIGMA[a])
        m = _mat_add(m, term)
    conj = _mat_mul(_mat_mul(g.value, m), _mat_dagger(g.value))
    out = []
    for a in range(3):
        prod = _mat_mul(conj, _SIGMA[a])
        trace = prod[0][0] + prod[1][1]
        out.append(I * trace)
    return tuple(out)


def coAd(g: GroupElement, covector):
    """<coAd(g) xi, X> = <xi, Ad(g^-1) X>, computed exactly."""
    ginv = g.inverse()
    n = len(covector)
    out = []
    for a in range(n):
        basis = [ONE if i == a else ZERO for i in range(n)]
        moved = Ad(ginv, basis)
        out.append(sum((ExactScalar.coerce(covector[k]) * moved[k] for k in range(n)), ZERO))
    return tuple(out)


def pair(covector, vector):
    return sum((ExactScalar.coerce(a) * ExactScalar.coerce(b)
                for a, b in zip(covector, vector)), ZERO)


def ad_star(algebra: LieAlgebra, x_coeffs, covector):
    """<ad*(X) xi, Y> := <xi, ad(-X) Y> (sign convention flagged in reports)."""
    n = algebra.dimension
    neg_x = [-ExactScalar.coerce(c) for c in x_coeffs]
    out = []
    for b in range(n):
        basis = [ONE if i == b else ZERO for i in range(n)]
        moved = algebra.bracket_vectors(neg_x, basis)
        total = RationalExpr.zero()
        for k in range(n):
            total = total + coerce_rational(covector[k]) * moved[k]
        out.append(total)
    return tuple(out)


def random_su2(rng: random.Random) -> GroupElement:
    """Cayley transform of a rational pure quaternion: exact unit quaternion."""
    v = [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(3)]
    n2 = 1 + sum(c * c for c in v)
    # (1+v)^2 / |1+v|^2 with v pure imaginary: (1 - |v|^2 + 2v) / (1 + |v|^2)
    t = Fraction(1 - sum(c * c for c in v)) / n2
    x, y, z = (2 * c / n2 for c in v)
    return GroupElement.su2_from_quaternion(t, x, y, z)


# ---------------------------------------------------------------------------
# algebroid models and sections
# ---------------------------------------------------------------------------

class AlgebroidModel:
    """Anchor + bracket over declared generating sections.

    bracket_table[(i, j)] is the coefficient vector of [gen_i, gen_j] (i < j);
    anchor_fields[i] is the vector field the anchor assigns to gen_i (None = 0).
    isotropy_indices flags the generators spanning ker(anchor).
    """

    def __init__(self, name, variant, base_atlas, generator_names, bracket_table,
                 anchor_fields, isotropy_indices=None, fiber_algebra=None,
                 gauge_base_count=0):
        self.name = name
        self.variant = variant
        self.base_atlas = base_atlas
        self.generator_names = tuple(generator_names)
        self.n = len(self.generator_names)
        self.bracket_table = {}
        for (i, j), vec in bracket_table.items():
            self.bracket_table[(i, j)] = tuple(coerce_rational(v) for v in vec)
        self.anchor_fields = list(anchor_fields)
        self.isotropy_indices = tuple(
            isotropy_indices if isotropy_indices is not None
            else [i for i, f in enumerate(self.anchor_fields)
                  if f is None or f.is_zero()])
        self.fiber_algebra = fiber_algebra
        self.gauge_base_count = gauge_base_count

    # -- sections ---------------------------------------------------------
    def section(self, coeffs) -> "SectionRep":
        coeffs = tuple(coerce_rational(c) for c in coeffs)
        if len(coeffs) != self.n:
            raise ModelMismatchError("coefficient vector has wrong length")
        return SectionRep(self, coeffs)

    def basis_section(self, index) -> "SectionRep":
        return self.section([1 if i == index else 0 for i in range(self.n)])

    def generators(self):
        return [self.basis_section(i) for i in range(self.n)]

    def generator_bracket(self, i, j):
        if i == j:
            return tuple(RationalExpr.zero() for _ in range(self.n))
        if (i, j) in self.bracket_table:
            return self.bracket_table[(i, j)]
        if (j, i) in self.bracket_table:
            return tuple(-v for v in self.bracket_table[(j, i)])
        return tuple(RationalExpr.zero() for _ in range(self.n))

    # -- structure maps ------------------------------------------------------
    def anchor(self, section: "SectionRep") -> VectorField:
        self._own(section)
        out = None
        for i, coeff in enumerate(section.coeffs):
            field = self.anchor_fields[i]
            if field is None or coeff.is_zero():
                continue
            scaled = field * coeff
            out = scaled if out is None else out + scaled
        if out is None:
            charts = {ch: {} for ch in self.base_atlas.charts}
            from .geometry import LEAF_FULL
            out = VectorField(self.base_atlas, LEAF_FULL, charts)
        return out

    def bracket(self, s1: "SectionRep", s2: "SectionRep") -> "SectionRep":
        """Leibniz extension of the generator bracket table."""
        self._own(s1)
        self._own(s2)
        out = [RationalExpr.zero() for _ in range(self.n)]
        for i, f in enumerate(s1.coeffs):
            if f.is_zero():
                continue
            for j, g in enumerate(s2.coeffs):
                if g.is_zero():
                    continue
                for k, c in enumerate(self.generator_bracket(i, j)):
                    if not c.is_zero():
                        out[k] = out[k] + f * g * c
        for i, f in enumerate(s1.coeffs):
            rho_i = self.anchor_fields[i]
            if rho_i is None or f.is_zero():
                continue
            for j, g in enumerate(s2.coeffs):
                dg = _derive_everywhere(rho_i, g)
                if not dg.is_zero():
                    out[j] = out[j] + f * dg
        for j, g in enumerate(s2.coeffs):
            rho_j = self.anchor_fields[j]
            if rho_j is None or g.is_zero():
                continue
            for i, f in enumerate(s1.coeffs):
                df = _derive_everywhere(rho_j, f)
                if not df.is_zero():
                    out[i] = out[i] - g * df
        return self.section(out)

    def ad(self, x: "SectionRep", y: "SectionRep") -> "SectionRep":
        """Adjoint action ad(X)Y = [X, Y]; Y must be an isotropy section."""
        self._own(x)
        self._own(y)
        for i, c in enumerate(y.coeffs):
            if i not in self.isotropy_indices and not c.is_zero():
                raise ModelMismatchError("ad target must lie in ker(anchor)")
        return self.bracket(x, y)

    def splitting(self, base_field_coeffs) -> "SectionRep":
        """Gauge models: base vector field -> section with zero algebra part."""
        if self.variant != "gauge":
            raise ModelMismatchError("splitting is only defined for gauge models")
        coeffs = list(base_field_coeffs) + [0] * (self.n - self.gauge_base_count)
        return self.section(coeffs)

    def _own(self, section):
        if section.model is not self:
            raise ModelMismatchError("section belongs to another model")

    # -- structural validation -----------------------------------------------
    def anchor_morphism_report(self, rng=None):
        """anchor([X,Y]) = [anchor X, anchor Y] on generators, symbolically."""
        failures = []
        gens = self.generators()
        for i in range(self.n):
            for j in range(i + 1, self.n):
                lhs = self.anchor(self.bracket(gens[i], gens[j]))
                rhs = commutator(self.anchor(gens[i]), self.anchor(gens[j]))
                if not (lhs - rhs).is_zero():
                    failures.append((self.generator_names[i], self.generator_names[j]))
        return JacobiReport(not failures, failures)

    def leibniz_report(self, rng: random.Random):
        """[X, f Y] = f [X, Y] + (rho(X).f) Y on generators, random polynomial f."""
        failures = []
        gens = self.generators()
        base_vars = _base_variables(self.base_atlas)
        for i in range(self.n):
            for j in range(self.n):
                if i == j:
                    continue
                f = random_polynomial(base_vars, rng)
                lhs = self.bracket(gens[i], self.section(
                    [f if k == j else RationalExpr.zero() for k in range(self.n)]))
                direct = self.bracket(gens[i], gens[j])
                rho_f = _derive_everywhere(self.anchor_fields[i], f) \
                    if self.anchor_fields[i] is not None else RationalExpr.zero()
                expect = [f * c for c in direct.coeffs]
                expect[j] = expect[j] + rho_f
                diff = [(a - b).simplify() for a, b in zip(lhs.coeffs, expect)]
                if any(not d.is_zero() for d in diff):
                    failures.append((self.generator_names[i], self.generator_names[j]))
        return JacobiReport(not failures, failures)

    def jacobi_on_generators(self, coefficient=None):
        """Jacobi for the extended bracket on all generator triples.

        coefficient, when given, multiplies the first slot of each triple to
        exercise the Leibniz terms.
        """
        failures = []
        gens = self.generators()
        for a in range(self.n):
            for b in range(self.n):
                for c in range(self.n):
                    if not (a < b < c or coefficient is not None and a != b != c):
                        continue
                    first = gens[a] if coefficient is None else self.section(
                        [coefficient if k == a else 0 for k in range(self.n)])
                    total = None
                    for (x, y, z) in ((first, gens[b], gens[c]),
                                      (gens[b], gens[c], first),
                                      (gens[c], first, gens[b])):
                        term = self.bracket(self.bracket(x, y), z)
                        total = term if total is None else self.section(
                            [p + q for p, q in zip(total.coeffs, term.coeffs)])
                    if any(not v.is_zero() for v in total.coeffs):
                        failures.append((a, b, c))
        return JacobiReport(not failures, failures)


class SectionRep:
    def __init__(self, model: AlgebroidModel, coeffs):
        self.model = model
        self.coeffs = tuple(coerce_rational(c) for c in coeffs)

    def __add__(self, other):
        if other.model is not self.model:
            raise ModelMismatchError("sections of different models")
        return SectionRep(self.model, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, factor):
        factor = coerce_rational(factor)
        return SectionRep(self.model, [c * factor for c in self.coeffs])

    __rmul__ = __mul__

    def __neg__(self):
        return self * ExactScalar(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __repr__(self):
        bits = [f"({c})*{n}" for c, n in zip(self.coeffs, self.model.generator_names)
                if not c.is_zero()]
        return " + ".join(bits) if bits else "0"


def _derive_everywhere(field: VectorField, expr: RationalExpr) -> RationalExpr:
    """Directional derivative of a base-coordinate expression, chart-agnostic.

    Generator coefficient functions are written in base coordinates shared by
    every chart, so any chart of the field computes the same derivative; we
    use the first chart carrying components.
    """
    if field is None:
        return RationalExpr.zero()
    expr = coerce_rational(expr)
    for ch in field.components:
        return field.derive(expr, ch)
    return RationalExpr.zero()


def _base_variables(atlas: FiberedAtlas):
    out = []
    for chart in atlas.charts.values():
        for c in chart.base_coords:
            if c not in out:
                out.append(c)
    if not out:
        for chart in atlas.charts.values():
            for c in chart.coords:
                if c not in out:
                    out.append(c)
    return out


def random_polynomial(variables, rng: random.Random, degree=2, span=5) -> RationalExpr:
    if not variables:
        return RationalExpr.const(Fraction(rng.randint(-span, span), rng.randint(1, 3)))
    poly = PolyExpr()
    for _ in range(4):
        mono = {}
        for v in variables:
            e = rng.randint(0, degree)
            if e:
                mono[v] = e
        coeff = ExactScalar(Fraction(rng.randint(-span, span), rng.randint(1, 3)))
        poly = poly + PolyExpr({tuple(sorted(mono.items())): coeff})
    return RationalExpr.from_poly(poly)


# ---------------------------------------------------------------------------
# actions of algebroids on fibered atlases
# ---------------------------------------------------------------------------

class ActionMap:
    """Assignment of leafwise fields on the target to sections of the model.

    Target charts reuse the base coordinate names of the model's base, so the
    pullback along the bundle projection is literal.
    """

    def __init__(self, model: AlgebroidModel, target_atlas: FiberedAtlas,
                 fields, name=""):
        if len(fields) != model.n:
            raise ModelMismatchError("one field per generator required")
        self.model = model
        self.target_atlas = target_atlas
        self.fields = list(fields)
        self.name = name
        self.validated = False

    def of(self, section: SectionRep) -> VectorField:
        if section.model is not self.model:
            raise ModelMismatchError("section belongs to another model")
        out = None
        for coeff, field in zip(section.coeffs, self.fields):
            if coeff.is_zero():
                continue
            scaled = field * coeff
            out = scaled if out is None else out + scaled
        if out is None:
            from .geometry import LEAF_JTILDE
            out = VectorField(self.target_atlas, LEAF_JTILDE,
                              {ch: {} for ch in self.target_atlas.charts})
        return out

    def morphism_report(self, rng=None):
        """The four action identities on generators (and random coefficients)."""
        rng = rng or random.Random(11)
        failures = []
        gens = self.model.generators()
        # bracket compatibility on generator pairs
        for i in range(self.model.n):
            for j in range(i + 1, self.model.n):
                lhs = commutator(self.of(gens[i]), self.of(gens[j]))
                rhs = self.of(self.model.bracket(gens[i], gens[j]))
                if not (lhs - rhs).is_zero():
                    failures.append(("bracket", self.model.generator_names[i],
                                     self.model.generator_names[j]))
        # anchor compatibility: base components of alpha(X) equal rho(X)
        for i, gen in enumerate(gens):
            field = self.of(gen)
            rho = self.model.anchor(gen)
            for ch_name in field.components:
                chart = self.target_atlas.chart(ch_name)
                for coord in chart.base_coords:
                    alpha_comp = field.component(ch_name, coord)
                    rho_comp = _base_component(rho, coord)
                    if not (alpha_comp - rho_comp).is_zero():
                        failures.append(("anchor", self.model.generator_names[i], coord))
        # additivity and module linearity over pullbacks of base functions
        base_vars = _base_variables(self.model.base_atlas)
        f = random_polynomial(base_vars, rng)
        for i, gen in enumerate(gens):
            j = (i + 1) % self.model.n
            both = self.of(gens[i] + gens[j])
            if not (both - self.of(gens[i]) - self.of(gens[j])).is_zero():
                failures.append(("additivity", self.model.generator_names[i]))
            scaled = self.of(gen * f)
            if not (scaled - self.of(gen) * f).is_zero():
                failures.append(("linearity", self.model.generator_names[i]))
        ok = not failures
        if ok:
            self.validated = True
        return MorphismReport(ok, failures)

    def require_validated(self):
        if not self.validated:
            report = self.morphism_report()
            if not report.ok:
                raise UnvalidatedActionError(f"action fails morphism check: {report.failures}")


class MorphismReport:
    def __init__(self, ok, failures):
        self.ok = ok
        self.failures = failures

    def __bool__(self):
        return self.ok


def _base_component(field: VectorField, coord) -> RationalExpr:
    for ch in field.components:
        if coord in field.atlas.chart(ch).coords:
            return field.component(ch, coord)
    return RationalExpr.zero()


def morphism_check(action: ActionMap, rng=None) -> MorphismReport:
    return action.morphism_report(rng)


def action_algebroid(parent: AlgebroidModel, action: ActionMap) -> AlgebroidModel:
    """Action algebroid: same generators, base moved to the action target."""
    action.require_validated()
    bracket_table = {}
    for i in range(parent.n):
        for j in range(i + 1, parent.n):
            bracket_table[(i, j)] = parent.generator_bracket(i, j)
    return AlgebroidModel(
        name=f"{parent.name}|action",
        variant="action",
        base_atlas=action.target_atlas,
        generator_names=parent.generator_names,
        bracket_table=bracket_table,
        anchor_fields=[action.of(parent.basis_section(i)) for i in range(parent.n)],
        isotropy_indices=parent.isotropy_indices,
        fiber_algebra=parent.fiber_algebra,
    )
