"""Kahler polarization data, the holomorphic-section solver, exact inner
products on the projective-line fiber, induced representation matrices, and
the closed-form integrated representations of the catalog.

The polarization is reduced to one antiholomorphic frame field per chart;
solving nabla_vbar sigma = 0 over a finite monomial ansatz plus the frame
gluing constraint is exact linear algebra over the Gaussian rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .bundles import LineBundleData, kostant_operator
from .errors import (
    MalformedExpressionError,
    UnsupportedFiberError,
    UnsupportedIntegrationError,
)
from .exprs import PolyExpr, RationalExpr, coerce_rational, TWO_PI_I
from .geometry import LEAF_J, VectorField, commutator, interior_product
from .hamiltonian import ActionScenario, CheckResult
from .linalg import kernel_basis, solve_linear
from .scalars import ExactScalar, I, ONE, ZERO


class ComplexStructureData:
    """Fiberwise almost complex structure as a matrix on the fiber frame."""

    def __init__(self, atlas, matrices, positivity_samples=None):
        self.atlas = atlas
        self.matrices = {ch: [[coerce_rational(v) for v in row] for row in mat]
                         for ch, mat in matrices.items()}
        self.positivity_samples = list(positivity_samples or [])

    def validate(self) -> CheckResult:
        failures = []
        for ch, mat in self.matrices.items():
            n = len(mat)
            for i in range(n):
                for j in range(n):
                    entry = sum((mat[i][k] * mat[k][j] for k in range(n)),
                                RationalExpr.zero())
                    expected = RationalExpr.const(-1) if i == j else RationalExpr.zero()
                    if not (entry - expected).is_zero():
                        failures.append((f"{ch}: j^2 != -1", f"entry {i},{j}"))
        # glue consistency: the fiber Jacobian intertwines the two matrices
        for (src, tgt), transition in self.atlas.transitions.items():
            if src not in self.matrices or tgt not in self.matrices:
                continue
            sf = self.atlas.chart(src).fiber_coords
            tf = self.atlas.chart(tgt).fiber_coords
            jac = [[transition.jacobian_entry(tc, sc) for sc in sf] for tc in tf]
            j_src = self.matrices[src]
            j_tgt_pulled = [[transition.compose_into(v) for v in row]
                            for row in self.matrices[tgt]]
            lhs = _mat_mul_expr(jac, j_src)
            rhs = _mat_mul_expr(j_tgt_pulled, jac)
            for i in range(len(tf)):
                for j in range(len(sf)):
                    if not (lhs[i][j] - rhs[i][j]).is_zero():
                        failures.append((f"{src}->{tgt}: jacobian does not intertwine",
                                         f"entry {i},{j}"))
        return CheckResult("complex-structure", not failures, failures)

    def apply(self, field: VectorField) -> VectorField:
        """j(v) for a fiberwise field."""
        comps = {}
        for ch, mat in self.matrices.items():
            if ch not in field.components:
                continue
            fibers = self.atlas.chart(ch).fiber_coords
            vec = [field.component(ch, c) for c in fibers]
            out = {}
            for i, c in enumerate(fibers):
                total = RationalExpr.zero()
                for k in range(len(fibers)):
                    total = total + mat[i][k] * vec[k]
                out[c] = total
            comps[ch] = out
        return VectorField(field.atlas, LEAF_J, comps)

    def polarization_frames(self) -> dict:
        """-i eigenfield of j per chart (constant matrices)."""
        frames = {}
        for ch, mat in self.matrices.items():
            n = len(mat)
            rows = []
            for i in range(n):
                row = []
                for j in range(n):
                    entry = mat[i][j]
                    if not entry.is_constant():
                        raise MalformedExpressionError(
                            "declare polarization frames for non-constant structures")
                    row.append(entry.constant_value() + (I if i == j else ZERO))
                rows.append(row)
            kernel = kernel_basis(rows, n)
            if len(kernel) != n // 2:
                raise MalformedExpressionError(
                    f"polarization on chart {ch} has wrong rank")
            fibers = self.atlas.chart(ch).fiber_coords
            frames[ch] = [
                VectorField(self.atlas, LEAF_J,
                            {ch: {c: vec[i] for i, c in enumerate(fibers)}})
                for vec in kernel]
        return frames

    def positivity_check(self, omega) -> CheckResult:
        """omega(j v, v) > 0 at declared sample points (float evaluation)."""
        failures = []
        for sample in self.positivity_samples:
            ch, point = sample["chart"], sample["point"]
            fibers = self.atlas.chart(ch).fiber_coords
            for c in fibers:
                v = VectorField(self.atlas, LEAF_J, {ch: {c: 1}})
                jv = self.apply(v)
                value = omega.apply(jv, v).get(ch)
                if value is None:
                    continue
                num = value.numeric(point)
                if not (abs(num.imag) < 1e-9 and num.real > 1e-12):
                    failures.append((f"{ch}@{point}", f"omega(j d{c}, d{c}) = {num}"))
        return CheckResult("kahler-positivity", not failures, failures,
                           notes=["positivity sampled numerically at declared points"])


def _mat_mul_expr(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), RationalExpr.zero())
             for j in range(p)] for i in range(n)]


def polarization_equivariance_check(scenario: ActionScenario,
                                    structure: ComplexStructureData) -> CheckResult:
    """[alpha(X), j v] = j [alpha(X), v] on coordinate fiber frames."""
    failures = []
    for i in range(scenario.model.n):
        alpha = scenario.generator_field(i)
        for ch, chart in scenario.atlas.charts.items():
            if ch not in structure.matrices:
                continue
            for c in chart.fiber_coords:
                v = VectorField(scenario.atlas, LEAF_J, {ch: {c: 1}})
                lhs = commutator(alpha, structure.apply(v))
                rhs = structure.apply(commutator(alpha, v))
                diff = lhs - rhs
                bad = [(coord, val) for coord, val in
                       diff.components.get(ch, {}).items()
                       if not val.is_zero()]
                if bad:
                    failures.append((f"{scenario.model.generator_names[i]}@"
                                     f"{ch}:d{c}", str([(c0, str(v0)) for c0, v0 in bad])))
    return CheckResult("polarization-equivariance", not failures, failures)


# ---------------------------------------------------------------------------
# holomorphic-section solver
# ---------------------------------------------------------------------------

class SectionAnsatz:
    """Finite candidate coefficient functions per patch."""

    def __init__(self, candidates):
        self.candidates = {patch: [coerce_rational(c) for c in funcs]
                           for patch, funcs in candidates.items()}

    @staticmethod
    def monomial(bundle: LineBundleData, holomorphic_coords, degree_cap):
        """Powers of the chart holomorphic coordinate up to the cap, per patch."""
        table = {}
        for idx in bundle.cover.index_set:
            chart = bundle.patch_chart(idx)
            z = holomorphic_coords[chart]
            table[idx] = [z ** a for a in range(degree_cap + 1)]
        return SectionAnsatz(table)


class HolomorphicBasis:
    def __init__(self, bundle, frames, elements):
        self.bundle = bundle
        self.frames = frames
        self.elements = elements  # list of {patch: RationalExpr}

    @property
    def dimension(self):
        return len(self.elements)


def holomorphic_solve(bundle: LineBundleData, structure_or_frames,
                      ansatz: SectionAnsatz) -> HolomorphicBasis:
    """Kernel of the polarized covariant derivative over the ansatz."""
    if isinstance(structure_or_frames, ComplexStructureData):
        frames = {ch: fs[0] for ch, fs in structure_or_frames.polarization_frames().items()}
    else:
        frames = dict(structure_or_frames)
    cover = bundle.cover
    atlas = cover.atlas
    patches = list(cover.index_set)
    offsets = {}
    total = 0
    for p in patches:
        offsets[p] = total
        total += len(ansatz.candidates[p])
    rows = []
    # (1) polarized-derivative kernel per patch
    for p in patches:
        chart = bundle.patch_chart(p)
        frame = frames[chart]
        contraction = interior_product(frame, bundle.potential(p))
        pot = contraction.coefficient(chart, ()) * RationalExpr.var(TWO_PI_I)
        exprs = []
        for f in ansatz.candidates[p]:
            exprs.append(frame.derive(f, chart) + pot * f)
        rows.extend(_linear_rows(exprs, offsets[p], total))
    # (2) frame gluing: f_j = c_jk (f_k o T) on every pair overlap
    for simplex in cover.k_simplices(1):
        j, k = simplex
        c = bundle.transition_value(j, k)
        if c.exponent is not None:
            raise MalformedExpressionError(
                "holomorphic solver supports rational transitions only")
        chart_j = bundle.patch_chart(j)
        chart_k = bundle.patch_chart(k)
        c_expr = _to_chart(c.rational, c.chart, chart_j, atlas)
        glue_exprs = []
        transition = atlas.transition(chart_j, chart_k) if chart_j != chart_k else None
        for a, f in enumerate(ansatz.candidates[j]):
            glue_exprs.append((offsets[j] + a, f))
        for b, g in enumerate(ansatz.candidates[k]):
            moved = transition.compose_into(g) if transition is not None else g
            glue_exprs.append((offsets[k] + b, -(c_expr * moved)))
        rows.extend(_linear_rows_indexed(glue_exprs, total))
    kernel = kernel_basis(rows, total) if rows else \
        [[ONE if i == j else ZERO for i in range(total)] for j in range(total)]
    elements = []
    for vec in kernel:
        element = {}
        for p in patches:
            expr = RationalExpr.zero()
            for a, f in enumerate(ansatz.candidates[p]):
                coeff = vec[offsets[p] + a]
                if not coeff.is_zero():
                    expr = expr + f * coeff
            element[p] = expr.simplify()
        elements.append(element)
    # deterministic order: by degree of the first-patch coefficient
    p0 = patches[0]
    elements.sort(key=lambda e: (e[p0].num.total_degree(), str(e[p0])))
    basis = HolomorphicBasis(bundle, frames, elements)
    _reverify(basis, bundle, frames)
    return basis


def _to_chart(expr, src_chart, dst_chart, atlas):
    if src_chart == dst_chart:
        return expr
    return atlas.transition(dst_chart, src_chart).compose_into(expr)


def _linear_rows(exprs, offset, total):
    """Rows for sum_e lambda_e expr_e = 0 with exprs rational, exact."""
    indexed = [(offset + e, expr) for e, expr in enumerate(exprs)]
    return _linear_rows_indexed(indexed, total)


def _linear_rows_indexed(indexed, total):
    den = PolyExpr.const(1)
    cleaned = []
    for pos, expr in indexed:
        expr = coerce_rational(expr).simplify()
        cleaned.append((pos, expr))
        den = den * expr.den
    monomial_rows = {}
    for pos, expr in cleaned:
        scaled = expr.num * den.exact_div(expr.den)
        for mono, coeff in scaled.terms.items():
            row = monomial_rows.setdefault(mono, [ZERO] * total)
            row[pos] = row[pos] + coeff
    return list(monomial_rows.values())


def _reverify(basis, bundle, frames):
    for element in basis.elements:
        for p, f in element.items():
            chart = bundle.patch_chart(p)
            frame = frames[chart]
            contraction = interior_product(frame, bundle.potential(p))
            pot = contraction.coefficient(chart, ()) * RationalExpr.var(TWO_PI_I)
            resid = (frame.derive(f, chart) + pot * f).simplify()
            if not resid.is_zero():
                raise MalformedExpressionError(
                    "solver returned a non-polarized section")


# ---------------------------------------------------------------------------
# exact inner products on the projective-line fiber
# ---------------------------------------------------------------------------

def fs_monomial_integral(m, n, weight_power) -> ExactScalar:
    """(1/pi) int z^m zbar^n (1+r^2)^(-weight_power) dx dy, z = x - i y."""
    if m != n:
        return ZERO
    n_pow = weight_power
    if m + 2 > n_pow:
        raise UnsupportedFiberError("integral diverges: weight power too small")
    num = math.factorial(m) * math.factorial(n_pow - m - 2)
    den = math.factorial(n_pow - 1)
    return ExactScalar(Fraction(num, den))


def _zz_decompose(poly: PolyExpr, x_name, y_name):
    """Rewrite a polynomial in x, y as {(m, n): coeff} over z^m zbar^n."""
    z, zb = PolyExpr.var("__z"), PolyExpr.var("__zb")
    half = ExactScalar(Fraction(1, 2))
    x_sub = RationalExpr((z + zb) * PolyExpr.const(half))
    y_sub = RationalExpr((z - zb) * PolyExpr.const(half * I))
    moved = poly.subst({x_name: x_sub, y_name: y_sub})
    if not moved.den.is_constant():
        raise MalformedExpressionError("unexpected denominator in decomposition")
    moved_poly = moved.as_poly()
    out = {}
    for mono, coeff in moved_poly.terms.items():
        d = dict(mono)
        m = d.pop("__z", 0)
        n = d.pop("__zb", 0)
        if d:
            raise MalformedExpressionError("leftover variables in decomposition")
        out[(m, n)] = out.get((m, n), ZERO) + coeff
    return out


def fs_integral(expr: RationalExpr, x_name="x", y_name="y") -> ExactScalar:
    """Exact integral against the unit Fubini-Study density.

    Accepts P(x, y) / (1 + x^2 + y^2)^N; the density (1/pi)(1+r^2)^-2 dx dy is
    included, so the result is (1/pi) int P (1+r^2)^(-N-2).
    """
    expr = expr.simplify()
    q = PolyExpr.var(x_name, 2) + PolyExpr.var(y_name, 2) + PolyExpr.const(1)
    den = expr.den
    n_pow = 0
    while not den.is_constant():
        divided = den.exact_div(q)
        if divided is None:
            raise UnsupportedFiberError("denominator is not a power of 1 + r^2")
        den = divided
        n_pow += 1
    scale = den.constant_value().inverse()
    num = expr.num * PolyExpr.const(scale)
    total = ZERO
    for (m, n), coeff in _zz_decompose(num, x_name, y_name).items():
        total = total + coeff * fs_monomial_integral(m, n, n_pow + 2)
    return total


def inner_product(bundle: LineBundleData, elem1, elem2, base_point=None,
                  patch=None, method="exact", tolerance=1e-9):
    """Hermitian pairing <sigma1, sigma2> integrated over the fiber.

    The exact path covers the projective-line model (rational data over the
    two-chart atlas); conjugation is in the first slot.
    """
    cover = bundle.cover
    patch = patch or cover.index_set[0]
    chart_name = bundle.patch_chart(patch)
    chart = cover.atlas.chart(chart_name)
    f = coerce_rational(elem1[patch] if isinstance(elem1, dict) else elem1)
    g = coerce_rational(elem2[patch] if isinstance(elem2, dict) else elem2)
    h = bundle.weight(patch)
    if base_point:
        f, g, h = (v.subst({k: coerce_rational(val) for k, val in base_point.items()})
                   for v in (f, g, h))
    integrand = (f.conj() * g * h).simplify()
    if not chart.fiber_coords:
        return integrand.constant_value() if method == "exact" else \
            complex(integrand.constant_value())
    if len(chart.fiber_coords) != 2:
        raise UnsupportedFiberError("exact inner products need a 2-dimensional fiber")
    x_name, y_name = chart.fiber_coords
    if method == "exact":
        return fs_integral(integrand, x_name, y_name)
    return _numeric_fs_integral(integrand, x_name, y_name, tolerance)


def _numeric_fs_integral(expr, x_name, y_name, tolerance):
    from scipy import integrate

    def density(r, theta):
        x = r * math.cos(theta)
        y = r * math.sin(theta)
        val = expr.numeric({x_name: x, y_name: y})
        return val * r / math.pi / (1 + r * r) ** 2

    def real_part(r, theta):
        return density(r, theta).real

    def imag_part(r, theta):
        return density(r, theta).imag

    re_val, _ = integrate.dblquad(real_part, 0, 2 * math.pi, 0, math.inf,
                                  epsabs=tolerance / 10, epsrel=tolerance / 10)
    im_val, _ = integrate.dblquad(imag_part, 0, 2 * math.pi, 0, math.inf,
                                  epsabs=tolerance / 10, epsrel=tolerance / 10)
    return complex(re_val, im_val)


def gram_matrix(bundle: LineBundleData, basis: HolomorphicBasis, base_point=None,
                patch=None):
    n = basis.dimension
    return [[inner_product(bundle, basis.elements[i], basis.elements[j],
                           base_point=base_point, patch=patch)
             for j in range(n)] for i in range(n)]


def leading_minors_positive(gram) -> bool:
    n = len(gram)
    for size in range(1, n + 1):
        sub = [[gram[i][j] for j in range(size)] for i in range(size)]
        det = _scalar_det(sub)
        if not det.is_positive():
            return False
    return True


def _scalar_det(rows):
    n = len(rows)
    if n == 0:
        return ONE
    if n == 1:
        return rows[0][0]
    total = ZERO
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _scalar_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


# ---------------------------------------------------------------------------
# the induced representation on the solution space
# ---------------------------------------------------------------------------

class QuantizationResult:
    def __init__(self, bundle, basis, gram, matrices, generator_names):
        self.bundle = bundle
        self.basis = basis
        self.gram = gram
        self.matrices = matrices
        self.generator_names = tuple(generator_names)

    @property
    def dimension(self):
        return self.basis.dimension


def induced_representation(scenario: ActionScenario, bundle: LineBundleData,
                           basis: HolomorphicBasis) -> QuantizationResult:
    """Matrices of the momentum operators in the holomorphic basis."""
    model = scenario.model
    n = basis.dimension
    patches = list(bundle.cover.index_set)
    matrices = []
    for g in range(model.n):
        op = kostant_operator(scenario, bundle, model.basis_section(g))
        images = {p: [op.apply(p, basis.elements[e][p]) for e in range(n)]
                  for p in patches}
        # solve for constant matrix entries using the first patch
        p0 = patches[0]
        mat = _expand_in_basis(images[p0], [basis.elements[e][p0] for e in range(n)])
        # consistency on the remaining patches
        for p in patches[1:]:
            alt = _expand_in_basis(images[p], [basis.elements[e][p] for e in range(n)])
            for i in range(n):
                for j in range(n):
                    if not (mat[i][j] - alt[i][j]).is_zero():
                        raise MalformedExpressionError(
                            "representation matrices differ between patches")
        matrices.append(mat)
    gram = gram_matrix(bundle, basis)
    return QuantizationResult(bundle, basis, gram, matrices, model.generator_names)


def _split_twopii(poly: PolyExpr):
    """{twopii degree: coordinate polynomial}."""
    out = {}
    for mono, coeff in poly.terms.items():
        d = dict(mono)
        deg = d.pop(TWO_PI_I, 0)
        rest = tuple(sorted(d.items()))
        table = out.setdefault(deg, {})
        table[rest] = table.get(rest, ZERO) + coeff
    return {deg: PolyExpr(t) for deg, t in out.items()}


def _expand_in_basis(images, basis_exprs):
    """images[e] = sum_i M[i][e] basis_exprs[i]; entries polynomial in twopii.

    Basis coefficient functions must be free of the twopii token; images may
    carry it (momentum potentials do), so each twopii degree is matched
    separately over the Gaussian rationals.
    """
    n = len(basis_exprs)
    den = PolyExpr.const(1)
    for expr in list(images) + list(basis_exprs):
        den = den * coerce_rational(expr).simplify().den
    basis_polys = []
    for expr in basis_exprs:
        expr = coerce_rational(expr).simplify()
        poly = expr.num * den.exact_div(expr.den)
        if TWO_PI_I in poly.variables():
            raise MalformedExpressionError("basis elements must not carry twopii")
        basis_polys.append(poly)
    monomials = sorted({m for p in basis_polys for m in p.terms},
                       key=lambda m: tuple(sorted(m)))
    rows = [[p.terms.get(m, ZERO) for p in basis_polys] for m in monomials]
    matrix = [[RationalExpr.zero()] * len(images) for _ in range(n)]
    for e, expr in enumerate(images):
        expr = coerce_rational(expr).simplify()
        target = expr.num * den.exact_div(expr.den)
        for deg, part in _split_twopii(target).items():
            extra = set(part.terms) - set(monomials)
            if extra:
                raise MalformedExpressionError(
                    "operator image leaves the holomorphic solution space")
            rhs = [part.terms.get(m, ZERO) for m in monomials]
            sol = solve_linear(rows, rhs)
            if sol is None:
                raise MalformedExpressionError(
                    "operator image leaves the holomorphic solution space")
            token = RationalExpr.var(TWO_PI_I) ** deg
            for i in range(n):
                if not sol[i].is_zero():
                    matrix[i][e] = matrix[i][e] + token * sol[i]
    return matrix


def commutation_check(result: QuantizationResult, model) -> CheckResult:
    """[M_i, M_j] equals the matrix of the bracket section, exactly."""
    failures = []
    n = result.dimension
    for i in range(model.n):
        for j in range(i + 1, model.n):
            bracket = model.generator_bracket(i, j)
            expected = [[RationalExpr.zero()] * n for _ in range(n)]
            for k, coeff in enumerate(bracket):
                if coeff.is_zero():
                    continue
                if not coeff.is_constant():
                    raise MalformedExpressionError(
                        "commutation check needs constant structure functions")
                for a in range(n):
                    for b in range(n):
                        expected[a][b] = expected[a][b] + \
                            coeff * coerce_rational(result.matrices[k][a][b])
            comm = _mat_commutator(result.matrices[i], result.matrices[j])
            if any(not (comm[a][b] - expected[a][b]).is_zero()
                   for a in range(n) for b in range(n)):
                failures.append((f"{result.generator_names[i]},"
                                 f"{result.generator_names[j]}", "commutator mismatch"))
    return CheckResult("matrix-commutation", not failures, failures)


def unitarity_check(result: QuantizationResult) -> CheckResult:
    """M^dagger G + G M = 0 for every generator matrix (conj flips twopii)."""
    failures = []
    g = result.gram
    n = result.dimension
    for idx, m in enumerate(result.matrices):
        m_dag = [[coerce_rational(m[j][i]).conj() for j in range(n)] for i in range(n)]
        lhs = _mat_add(_mat_mul(m_dag, g), _mat_mul(g, m))
        if any(not v.is_zero() for row in lhs for v in row):
            failures.append((result.generator_names[idx], "M*G + GM != 0"))
    return CheckResult("infinitesimal-unitarity", not failures, failures)


def _mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((coerce_rational(a[i][k]) * coerce_rational(b[k][j])
                  for k in range(m)), RationalExpr.zero())
             for j in range(p)] for i in range(n)]


def _mat_add(a, b):
    return [[coerce_rational(x) + coerce_rational(y) for x, y in zip(ra, rb)]
            for ra, rb in zip(a, b)]


def _mat_commutator(a, b):
    ab = _mat_mul(a, b)
    ba = _mat_mul(b, a)
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(ab, ba)]


# ---------------------------------------------------------------------------
# scenario-specific integration of representations
# ---------------------------------------------------------------------------

class IntegratedRep:
    def __init__(self, kind, description, data):
        self.kind = kind
        self.description = description
        self.data = data


def integrate_representation(scenario: ActionScenario, result=None):
    """Closed-form integrated action for the catalog scenarios."""
    kind = scenario.extras.get("integration")
    if kind == "u1-weights":
        if result is None:
            raise UnsupportedIntegrationError("need a quantization result to integrate")
        mat = result.matrices[0]
        n = result.dimension
        weights = []
        for a in range(n):
            entry = coerce_rational(mat[a][a]).simplify()
            for b in range(n):
                if a != b and not coerce_rational(mat[a][b]).is_zero():
                    raise UnsupportedIntegrationError("generator matrix is not diagonal")
            # eigenvalue -i w: the circle element at angle t acts by exp(i w t)
            weights.append((entry * I).constant_value())
        return IntegratedRep(
            "u1-weights",
            "circle action by phases exp(i w t) on the monomial basis",
            {"weights": weights})
    if kind == "s1-plane":
        f = scenario.extras["plane_function"]
        cb, sb = RationalExpr.var("cb"), RationalExpr.var("sb")
        rotated = f.subst({"x": cb * RationalExpr.var("x") - sb * RationalExpr.var("y"),
                           "y": sb * RationalExpr.var("x") + cb * RationalExpr.var("y")})
        exponent = _reduce_rotation(rotated - f)
        return IntegratedRep(
            "s1-plane",
            "(beta,(r,alpha)) -> ((r,alpha+beta), phase exp(twopii (f(r,alpha+beta)-f(r,alpha))), (r,alpha))",
            {"phase_exponent": exponent,
             "carrier": ("rotate", "phase", "source")})
    if kind == "sphere-family":
        level = scenario.extras["level"]
        return IntegratedRep(
            "sphere-family",
            "(x, arc s) -> exp(twopii mu(x) s) with mu = level on the open interval, 0 at the poles",
            {"level": level,
             "probe": lambda deltas: _sphere_family_probe(level, deltas)})
    raise UnsupportedIntegrationError(
        f"scenario {scenario.name} has no closed-form integration")


def _reduce_rotation(expr: RationalExpr) -> RationalExpr:
    """Reduce modulo cb^2 + sb^2 = 1 (rotation tokens), eliminating sb powers."""
    expr = expr.simplify()
    if not expr.den.is_constant():
        raise UnsupportedIntegrationError("rotation reduction expects polynomials")
    poly = expr.as_poly()
    changed = True
    while changed:
        changed = False
        out = PolyExpr()
        for mono, coeff in poly.terms.items():
            d = dict(mono)
            s_pow = d.get("sb", 0)
            if s_pow >= 2:
                d["sb"] = s_pow - 2
                if d["sb"] == 0:
                    del d["sb"]
                rest = PolyExpr({tuple(sorted(d.items())): coeff})
                one_minus = PolyExpr.const(1) - PolyExpr.var("cb", 2)
                out = out + rest * one_minus
                changed = True
            else:
                out = out + PolyExpr({mono: coeff})
        poly = out
    return RationalExpr(poly).simplify()


def _sphere_family_probe(level, deltas):
    """Max |phase - 1| over the shrinking fiber, at distance delta from a pole.

    The grid is given as distances 1 - |x| so points far closer to the poles
    than float spacing around 1.0 remain representable; the circumference is
    2 pi sqrt(delta (2 - delta)).
    """
    out = []
    for delta in deltas:
        circumference = 2 * math.pi * math.sqrt(delta * (2 - delta))
        worst = 0.0
        steps = 64
        for s_idx in range(steps + 1):
            s = circumference * s_idx / steps
            phase = complex(math.cos(2 * math.pi * level * s),
                            math.sin(2 * math.pi * level * s))
            worst = max(worst, abs(phase - 1))
        out.append(worst)
    return out
