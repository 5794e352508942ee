"""Charted fibered manifolds, differential forms, vector fields.

A chart splits coordinates into base and fiber; ``orbit_coords`` marks the
base directions tangent to the symmetry orbits.  Three leafwise classes order
the calculus: ``J`` (fiber directions only), ``Jtilde`` (fiber + orbit
directions) and ``full``.  The exterior derivative at class ``c`` acts on the
restriction of a form to the ``c``-directions, so requesting a class coarser
than the form carries is an error while finer requests restrict first.
"""

from __future__ import annotations

from itertools import combinations

from .errors import (
    AtlasMismatchError,
    DegreeError,
    LeafwiseClassError,
    MalformedExpressionError,
    NotClosedError,
    UnsupportedPrimitiveError,
)
from .exprs import PolyExpr, RationalExpr, coerce_rational
from .scalars import ExactScalar

LEAF_J = "J"
LEAF_JTILDE = "Jtilde"
LEAF_FULL = "full"
_CLASS_ORDER = {LEAF_J: 0, LEAF_JTILDE: 1, LEAF_FULL: 2}


class Chart:
    def __init__(self, name, base_coords=(), fiber_coords=(), orbit_coords=(),
                 star_shaped=False):
        self.name = name
        self.base_coords = tuple(base_coords)
        self.fiber_coords = tuple(fiber_coords)
        self.orbit_coords = tuple(orbit_coords)
        self.star_shaped = bool(star_shaped)
        coords = self.base_coords + self.fiber_coords
        if len(set(coords)) != len(coords):
            raise MalformedExpressionError(f"duplicate coordinates in chart {name}")
        if not set(self.orbit_coords) <= set(self.base_coords):
            raise MalformedExpressionError("orbit coordinates must be base coordinates")

    @property
    def coords(self):
        return self.base_coords + self.fiber_coords

    def coords_for(self, leafwise_class):
        if leafwise_class == LEAF_J:
            allowed = set(self.fiber_coords)
        elif leafwise_class == LEAF_JTILDE:
            allowed = set(self.fiber_coords) | set(self.orbit_coords)
        else:
            allowed = set(self.coords)
        return tuple(c for c in self.coords if c in allowed)

    def coord_index(self, coord):
        return self.coords.index(coord)

    def __repr__(self):
        return f"Chart({self.name})"


class Transition:
    """Coordinate map source -> target; exprs give target coords in source coords."""

    def __init__(self, source, target, exprs, overlap="", sample_point=None):
        self.source = source
        self.target = target
        self.exprs = {k: coerce_rational(v) for k, v in exprs.items()}
        self.overlap = overlap
        self.sample_point = sample_point

    def jacobian_entry(self, target_coord, source_coord):
        return self.exprs[target_coord].derivative(source_coord)

    def compose_into(self, expr: RationalExpr) -> RationalExpr:
        """Pull a target-chart expression back to source coordinates."""
        return expr.subst(self.exprs)

    def __repr__(self):
        return f"Transition({self.source}->{self.target})"


class FiberedAtlas:
    def __init__(self, charts, transitions=(), leaf_structure=""):
        self.charts = {c.name: c for c in charts}
        self.transitions = {}
        self.leaf_structure = leaf_structure
        for t in transitions:
            self.add_transition(t)

    def add_transition(self, t: Transition):
        src, tgt = self.charts[t.source], self.charts[t.target]
        if set(t.exprs) != set(tgt.coords):
            raise MalformedExpressionError(
                f"transition {t.source}->{t.target} must map every target coordinate")
        for coord in tgt.base_coords:
            extra = t.exprs[coord].variables() - set(src.base_coords)
            extra.discard("twopii")
            if extra:
                raise MalformedExpressionError(
                    f"transition {t.source}->{t.target} is not fiber-preserving "
                    f"({coord} depends on {sorted(extra)})")
        self.transitions[(t.source, t.target)] = t

    def transition(self, source, target) -> Transition:
        try:
            return self.transitions[(source, target)]
        except KeyError:
            raise AtlasMismatchError(f"no transition {source}->{target}") from None

    def chart(self, name) -> Chart:
        return self.charts[name]

    def check_transition_consistency(self):
        """T_ba o T_ab = id on declared two-way overlaps, as rational maps."""
        bad = []
        for (a, b), t_ab in self.transitions.items():
            t_ba = self.transitions.get((b, a))
            if t_ba is None:
                continue
            for coord in self.charts[a].coords:
                roundtrip = t_ab.compose_into(t_ba.exprs[coord])
                if not (roundtrip - RationalExpr.var(coord)).is_zero():
                    bad.append((a, b, coord))
        return bad


def _check_class(requested, available):
    if _CLASS_ORDER[requested] > _CLASS_ORDER[available]:
        raise LeafwiseClassError(
            f"requested class {requested} is coarser than operand class {available}")


class DifferentialForm:
    """Chartwise alternating form; indices are strictly increasing coordinate tuples."""

    def __init__(self, atlas, degree, leafwise_class, coefficients):
        self.atlas = atlas
        self.degree = int(degree)
        self.leafwise_class = leafwise_class
        if self.degree < 0:
            raise DegreeError("negative form degree")
        coeffs = {}
        for chart_name, table in coefficients.items():
            chart = atlas.chart(chart_name)
            allowed = chart.coords_for(leafwise_class)
            clean = {}
            for idx, value in table.items():
                idx = tuple(idx)
                value = coerce_rational(value)
                if len(idx) != self.degree:
                    raise DegreeError(f"index {idx} has wrong length for degree {self.degree}")
                if any(c not in allowed for c in idx):
                    raise LeafwiseClassError(
                        f"differential {idx} leaves class {leafwise_class} on chart {chart_name}")
                order = [chart.coord_index(c) for c in idx]
                if sorted(order) != order or len(set(order)) != len(order):
                    raise MalformedExpressionError(f"index {idx} is not strictly increasing")
                if not value.is_zero():
                    clean[idx] = value
            coeffs[chart_name] = clean
        self.coefficients = coeffs

    # -- accessors -----------------------------------------------------------
    def charts(self):
        return set(self.coefficients)

    def coefficient(self, chart, idx) -> RationalExpr:
        return self.coefficients.get(chart, {}).get(tuple(idx), RationalExpr.zero())

    def terms(self, chart):
        return self.coefficients.get(chart, {})

    def is_zero(self) -> bool:
        return all(v.is_zero()
                   for table in self.coefficients.values() for v in table.values())

    # -- algebra ------------------------------------------------------------
    def _binary_class(self, other):
        return max(self.leafwise_class, other.leafwise_class, key=lambda c: _CLASS_ORDER[c])

    def __add__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if other.atlas is not self.atlas:
            raise AtlasMismatchError("forms on different atlases")
        if other.degree != self.degree:
            raise DegreeError("cannot add forms of different degree")
        charts = self.charts() | other.charts()
        out = {}
        for ch in charts:
            table = dict(self.coefficients.get(ch, {}))
            for idx, v in other.coefficients.get(ch, {}).items():
                table[idx] = table.get(idx, RationalExpr.zero()) + v
            out[ch] = table
        return DifferentialForm(self.atlas, self.degree, self._binary_class(other), out)

    def __neg__(self):
        return self * ExactScalar(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, factor):
        """Multiply by a scalar, an expression, or a chartwise function (0-form)."""
        if isinstance(factor, DifferentialForm):
            if factor.degree != 0:
                return NotImplemented
            out = {}
            for ch, table in self.coefficients.items():
                f = factor.coefficient(ch, ())
                out[ch] = {idx: v * f for idx, v in table.items()}
            return DifferentialForm(self.atlas, self.degree,
                                    self._binary_class(factor), out)
        factor = coerce_rational(factor)
        out = {ch: {idx: v * factor for idx, v in table.items()}
               for ch, table in self.coefficients.items()}
        return DifferentialForm(self.atlas, self.degree, self.leafwise_class, out)

    __rmul__ = __mul__

    def restrict(self, leafwise_class) -> "DifferentialForm":
        """Keep only differentials inside the requested (finer) class."""
        _check_class(leafwise_class, self.leafwise_class)
        out = {}
        for ch, table in self.coefficients.items():
            allowed = set(self.atlas.chart(ch).coords_for(leafwise_class))
            out[ch] = {idx: v for idx, v in table.items() if set(idx) <= allowed}
        return DifferentialForm(self.atlas, self.degree, leafwise_class, out)

    def conj(self) -> "DifferentialForm":
        out = {ch: {idx: v.conj() for idx, v in table.items()}
               for ch, table in self.coefficients.items()}
        return DifferentialForm(self.atlas, self.degree, self.leafwise_class, out)

    def simplify(self) -> "DifferentialForm":
        out = {ch: {idx: v.simplify() for idx, v in table.items()}
               for ch, table in self.coefficients.items()}
        return DifferentialForm(self.atlas, self.degree, self.leafwise_class, out)

    def light(self) -> "DifferentialForm":
        out = {ch: {idx: v.light() for idx, v in table.items()}
               for ch, table in self.coefficients.items()}
        return DifferentialForm(self.atlas, self.degree, self.leafwise_class, out)

    def apply(self, *fields) -> dict:
        """Evaluate on vector fields; returns {chart: RationalExpr}."""
        if len(fields) != self.degree:
            raise DegreeError("wrong number of vector arguments")
        out = {}
        for ch, table in self.coefficients.items():
            if any(ch not in f.components for f in fields):
                continue
            total = RationalExpr.zero()
            for idx, coeff in table.items():
                det = _component_determinant([f.components[ch] for f in fields], idx)
                total = total + coeff * det
            out[ch] = total
        return out

    def __repr__(self):
        bits = []
        for ch, table in self.coefficients.items():
            for idx, v in table.items():
                label = "^".join(f"d{c}" for c in idx) or "1"
                bits.append(f"[{ch}] ({v}) {label}")
        return "Form(" + "; ".join(bits) + ")" if bits else "Form(0)"


def _component_determinant(comp_dicts, idx):
    """det of the matrix (field_a components along idx coords)."""
    n = len(idx)
    if n == 0:
        return RationalExpr.const(1)
    if n == 1:
        return comp_dicts[0].get(idx[0], RationalExpr.zero())
    total = RationalExpr.zero()
    for perm, sign in _signed_permutations(n):
        term = RationalExpr.const(sign)
        for row, col in enumerate(perm):
            term = term * comp_dicts[row].get(idx[col], RationalExpr.zero())
        total = total + term
    return total


def _signed_permutations(n):
    import itertools
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i, j in combinations(range(n), 2):
            if perm[i] > perm[j]:
                sign = -sign
        yield perm, sign


class VectorField:
    def __init__(self, atlas, leafwise_class, components):
        self.atlas = atlas
        self.leafwise_class = leafwise_class
        comps = {}
        for chart_name, table in components.items():
            chart = atlas.chart(chart_name)
            allowed = set(chart.coords_for(leafwise_class))
            clean = {}
            for coord, value in table.items():
                value = coerce_rational(value)
                if coord not in chart.coords:
                    raise MalformedExpressionError(f"unknown coordinate {coord}")
                if coord not in allowed and not value.is_zero():
                    raise LeafwiseClassError(
                        f"component along {coord} leaves class {leafwise_class}")
                if not value.is_zero():
                    clean[coord] = value
            comps[chart_name] = clean
        self.components = comps

    def component(self, chart, coord) -> RationalExpr:
        return self.components.get(chart, {}).get(coord, RationalExpr.zero())

    def __add__(self, other):
        if other.atlas is not self.atlas:
            raise AtlasMismatchError("fields on different atlases")
        cls = max(self.leafwise_class, other.leafwise_class, key=lambda c: _CLASS_ORDER[c])
        charts = set(self.components) | set(other.components)
        out = {}
        for ch in charts:
            table = dict(self.components.get(ch, {}))
            for coord, v in other.components.get(ch, {}).items():
                table[coord] = table.get(coord, RationalExpr.zero()) + v
            out[ch] = table
        return VectorField(self.atlas, cls, out)

    def __neg__(self):
        return self * ExactScalar(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, factor):
        factor = coerce_rational(factor)
        out = {ch: {coord: v * factor for coord, v in table.items()}
               for ch, table in self.components.items()}
        return VectorField(self.atlas, self.leafwise_class, out)

    __rmul__ = __mul__

    def scale_chartwise(self, functions: dict) -> "VectorField":
        out = {}
        for ch, table in self.components.items():
            f = coerce_rational(functions[ch])
            out[ch] = {coord: v * f for coord, v in table.items()}
        return VectorField(self.atlas, self.leafwise_class, out)

    def derive(self, function, chart=None):
        """Directional derivative of a chartwise function dict or expression."""
        if isinstance(function, DifferentialForm):
            if function.degree != 0:
                raise DegreeError("derive expects a function")
            return {ch: self.derive(function.coefficient(ch, ()), ch)
                    for ch in function.charts() if ch in self.components}
        if isinstance(function, dict):
            return {ch: self.derive(expr, ch) for ch, expr in function.items()
                    if ch in self.components}
        expr = coerce_rational(function)
        if chart is None:
            if len(self.components) != 1:
                raise AtlasMismatchError("chart must be named for multi-chart fields")
            chart = next(iter(self.components))
        total = RationalExpr.zero()
        for coord, comp in self.components[chart].items():
            total = total + comp * expr.derivative(coord)
        return total

    def is_zero(self) -> bool:
        return all(v.is_zero()
                   for table in self.components.values() for v in table.values())

    def __repr__(self):
        bits = []
        for ch, table in self.components.items():
            for coord, v in table.items():
                bits.append(f"[{ch}] ({v}) d/d{coord}")
        return "Field(" + "; ".join(bits) + ")" if bits else "Field(0)"


def commutator(v: VectorField, w: VectorField) -> VectorField:
    """[v, w] chartwise."""
    if v.atlas is not w.atlas:
        raise AtlasMismatchError("fields on different atlases")
    cls = max(v.leafwise_class, w.leafwise_class, key=lambda c: _CLASS_ORDER[c])
    out = {}
    for ch in set(v.components) & set(w.components):
        chart = v.atlas.chart(ch)
        table = {}
        for coord in chart.coords:
            total = RationalExpr.zero()
            for c2 in chart.coords:
                total = total + v.component(ch, c2) * w.component(ch, coord).derivative(c2)
                total = total - w.component(ch, c2) * v.component(ch, coord).derivative(c2)
            table[coord] = total
        out[ch] = table
    return VectorField(v.atlas, cls, out)


# ---------------------------------------------------------------------------
# form operations
# ---------------------------------------------------------------------------

def form_function(atlas, values, leafwise_class=LEAF_FULL) -> DifferentialForm:
    """Wrap chartwise expressions as a degree-0 form."""
    return DifferentialForm(atlas, 0, leafwise_class,
                            {ch: {(): v} for ch, v in values.items()})


def exterior_derivative(form: DifferentialForm, leafwise_class=None) -> DifferentialForm:
    cls = leafwise_class or form.leafwise_class
    _check_class(cls, form.leafwise_class)
    restricted = form.restrict(cls) if cls != form.leafwise_class else form
    out = {}
    for ch, table in restricted.coefficients.items():
        chart = form.atlas.chart(ch)
        allowed = chart.coords_for(cls)
        order = {c: i for i, c in enumerate(chart.coords)}
        new_table = {}
        for idx, coeff in table.items():
            for coord in allowed:
                if coord in idx:
                    continue
                partial = coeff.derivative(coord)
                if partial.is_zero():
                    continue
                merged = sorted(idx + (coord,), key=order.__getitem__)
                sign = (-1) ** merged.index(coord)
                key = tuple(merged)
                cur = new_table.get(key, RationalExpr.zero())
                new_table[key] = cur + partial * sign
        out[ch] = new_table
    return DifferentialForm(form.atlas, form.degree + 1, cls, out)


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    if a.atlas is not b.atlas:
        raise AtlasMismatchError("wedge of forms on different atlases")
    cls = max(a.leafwise_class, b.leafwise_class, key=lambda c: _CLASS_ORDER[c])
    out = {}
    for ch in a.charts() & b.charts():
        chart = a.atlas.chart(ch)
        order = {c: i for i, c in enumerate(chart.coords)}
        table = {}
        for idx_a, ca in a.coefficients[ch].items():
            for idx_b, cb in b.coefficients[ch].items():
                if set(idx_a) & set(idx_b):
                    continue
                merged = idx_a + idx_b
                perm_sorted = tuple(sorted(merged, key=order.__getitem__))
                sign = _sort_sign(merged, order)
                cur = table.get(perm_sorted, RationalExpr.zero())
                table[perm_sorted] = cur + ca * cb * sign
        out[ch] = table
    return DifferentialForm(a.atlas, a.degree + b.degree, cls, out)


def _sort_sign(names, order):
    keys = [order[n] for n in names]
    sign = 1
    for i, j in combinations(range(len(keys)), 2):
        if keys[i] > keys[j]:
            sign = -sign
    return sign


def interior_product(v: VectorField, form: DifferentialForm) -> DifferentialForm:
    """Contraction; the field must be tangent to the form's leaf directions."""
    if form.degree == 0:
        raise DegreeError("interior product with a 0-form")
    out = {}
    for ch in form.charts():
        if ch not in v.components:
            continue
        has_terms = any(not val.is_zero() for val in form.coefficients[ch].values())
        allowed = set(form.atlas.chart(ch).coords_for(form.leafwise_class))
        for coord, comp in v.components[ch].items():
            if has_terms and coord not in allowed and not comp.is_zero():
                raise LeafwiseClassError(
                    f"field component along {coord} is outside the form's "
                    f"{form.leafwise_class} directions on chart {ch}")
        table = {}
        for idx, coeff in form.coefficients[ch].items():
            for pos, coord in enumerate(idx):
                comp = v.component(ch, coord)
                if comp.is_zero():
                    continue
                rest = idx[:pos] + idx[pos + 1:]
                sign = (-1) ** pos
                cur = table.get(rest, RationalExpr.zero())
                table[rest] = cur + coeff * comp * sign
        out[ch] = table
    return DifferentialForm(form.atlas, form.degree - 1, form.leafwise_class, out)


def lie_derivative(v: VectorField, form: DifferentialForm) -> DifferentialForm:
    cls = form.leafwise_class
    if form.degree == 0:
        out = {ch: {(): v.derive(form.coefficient(ch, ()), ch)}
               for ch in form.charts() if ch in v.components}
        return DifferentialForm(form.atlas, 0, cls, out)
    return exterior_derivative(interior_product(v, form), cls) + \
        interior_product(v, exterior_derivative(form, cls))


def pullback(transition: Transition, form: DifferentialForm) -> DifferentialForm:
    """Pull a target-chart form back to the source chart along the transition."""
    if transition.target not in form.charts():
        raise AtlasMismatchError(
            f"form has no coefficients on chart {transition.target}")
    atlas = form.atlas
    src_chart = atlas.chart(transition.source)
    order = {c: i for i, c in enumerate(src_chart.coords)}
    table = {}
    for idx, coeff in form.coefficients[transition.target].items():
        pulled_coeff = transition.compose_into(coeff)
        # wedge of pulled-back coordinate differentials
        partial_terms = [(tuple(), pulled_coeff)]
        for target_coord in idx:
            new_terms = []
            for prefix, val in partial_terms:
                for src_coord in src_chart.coords:
                    jac = transition.jacobian_entry(target_coord, src_coord)
                    if jac.is_zero() or src_coord in prefix:
                        continue
                    new_terms.append((prefix + (src_coord,), val * jac))
            partial_terms = new_terms
        for names, val in partial_terms:
            key = tuple(sorted(names, key=order.__getitem__))
            sign = _sort_sign(names, order)
            cur = table.get(key, RationalExpr.zero())
            table[key] = cur + val * sign
    out = DifferentialForm(form.atlas, form.degree, LEAF_FULL,
                           {transition.source: table})
    return out


class GlueReport:
    def __init__(self, ok, residuals):
        self.ok = ok
        self.residuals = residuals

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"GlueReport(ok={self.ok}, residuals={len(self.residuals)})"


def glue_check(atlas: FiberedAtlas, form: DifferentialForm) -> GlueReport:
    """Chart expressions agree under every declared transition."""
    residuals = []
    for (src, tgt), transition in atlas.transitions.items():
        if src not in form.charts() or tgt not in form.charts():
            residuals.append((src, tgt, "missing chart coefficients"))
            continue
        pulled = pullback(transition, form)
        local = DifferentialForm(atlas, form.degree, LEAF_FULL,
                                 {src: form.coefficients[src]})
        diff = pulled - local
        for idx, value in diff.coefficients.get(src, {}).items():
            value = value.simplify()
            if not value.is_zero():
                residuals.append((src, tgt, f"d{idx}: {value}"))
    return GlueReport(not residuals, residuals)


def glue_check_field(atlas: FiberedAtlas, field: VectorField) -> GlueReport:
    """Pushforward consistency of chartwise components along transitions."""
    residuals = []
    for (src, tgt), transition in atlas.transitions.items():
        if src not in field.components or tgt not in field.components:
            continue
        tgt_chart = atlas.chart(tgt)
        for coord in tgt_chart.coords:
            pushed = RationalExpr.zero()
            for src_coord in atlas.chart(src).coords:
                pushed = pushed + transition.jacobian_entry(coord, src_coord) * \
                    field.component(src, src_coord)
            declared = transition.compose_into(field.component(tgt, coord))
            diff = (pushed - declared).simplify()
            if not diff.is_zero():
                residuals.append((src, tgt, coord, str(diff)))
    return GlueReport(not residuals, residuals)


def poincare_primitive(form: DifferentialForm, chart: Chart,
                       leafwise_class=None) -> DifferentialForm:
    """Radial-homotopy primitive on a star-shaped chart, exact for polynomials."""
    cls = leafwise_class or form.leafwise_class
    if not chart.star_shaped:
        raise UnsupportedPrimitiveError(f"chart {chart.name} is not star-shaped")
    if form.degree == 0:
        raise DegreeError("no primitive for 0-forms")
    block = chart.coords_for(cls)
    table = form.coefficients.get(chart.name, {})
    d_form = exterior_derivative(
        DifferentialForm(form.atlas, form.degree, cls, {chart.name: table}), cls)
    if not d_form.is_zero():
        raise NotClosedError(f"form is not closed on chart {chart.name}")
    k = form.degree
    out = {}
    for idx, coeff in table.items():
        coeff = coeff.simplify()
        if not coeff.den.is_constant():
            raise UnsupportedPrimitiveError(
                "radial integration requires polynomial coefficients")
        poly = coeff.as_poly()
        for mono, scal in poly.terms.items():
            block_deg = sum(e for v, e in mono if v in block)
            weight = RationalExpr.const(scal) / (block_deg + k)
            base = PolyExpr({mono: ExactScalar(1)})
            for pos, coord in enumerate(idx):
                rest = idx[:pos] + idx[pos + 1:]
                sign = (-1) ** pos
                contrib = weight * base * PolyExpr.var(coord) * sign
                cur = out.get(rest, RationalExpr.zero())
                out[rest] = cur + contrib
    return DifferentialForm(form.atlas, k - 1, cls, {chart.name: out})
