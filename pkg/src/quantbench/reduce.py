"""Marsden-Weinstein quotients at desk scale, quantum reduction by fixed
vectors, the descent obstruction for the reduced line bundle, and the
comparison between quantizing and reducing.

Transversality, properness and freeness are scenario declarations; the module
verifies what is decidable exactly (defining equations, tangency, dimension
counts, weights) and echoes the declarations in its reports.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MalformedExpressionError
from .exprs import coerce_rational
from .hamiltonian import ActionScenario, CheckResult
from .bundles import LineBundleData, kostant_operator
from .linalg import kernel_basis, rref
from .quantize import QuantizationResult, _mat_mul
from .scalars import ExactScalar, I, ONE, ZERO


class ZeroLevelData:
    """Parametrized zero level of the internal momentum map."""

    def __init__(self, scenario: ActionScenario, chart, equations, parametrization,
                 param_names, isotropy_indices=None, orbit_dimension=0,
                 free=True, proper=True, note=""):
        self.scenario = scenario
        self.chart = chart
        self.equations = [coerce_rational(e) for e in equations]
        self.parametrization = {c: coerce_rational(v)
                                for c, v in parametrization.items()}
        self.param_names = tuple(param_names)
        self.isotropy_indices = tuple(
            isotropy_indices if isotropy_indices is not None
            else scenario.isotropy_indices())
        self.orbit_dimension = int(orbit_dimension)
        self.free = bool(free)
        self.proper = bool(proper)
        self.note = note

    @property
    def level_dimension(self):
        return len(self.param_names)

    def verify(self) -> CheckResult:
        """Equations vanish on the parametrization; momentum vanishes too."""
        failures = []
        for eq in self.equations:
            resid = eq.subst(self.parametrization).simplify()
            if not resid.is_zero():
                failures.append(("defining-equation", str(resid)))
        for i in self.isotropy_indices:
            pairing = self.scenario.momentum.pairing(i).get(self.chart)
            if pairing is None:
                continue
            resid = pairing.subst(self.parametrization).simplify()
            if not resid.is_zero():
                failures.append(("momentum-vanishing",
                                 f"generator {i}: {resid}"))
        # isotropy orbit directions are tangent to the zero level
        for i in self.isotropy_indices:
            field = self.scenario.generator_field(i)
            for eq in self.equations:
                derived = field.derive(eq, self.chart).subst(self.parametrization)
                if not derived.is_zero():
                    failures.append(("tangency", f"generator {i}"))
        return CheckResult("zero-level", not failures, failures,
                           notes=[f"freeness declared: {self.free}",
                                  f"properness declared: {self.proper}"])


class ReducedSpace:
    def __init__(self, kind, dimension, omega0=None, note="", declarations=None):
        self.kind = kind  # "point" or "symplectic"
        self.dimension = dimension
        self.omega0 = omega0
        self.note = note
        self.declarations = dict(declarations or {})

    def __repr__(self):
        return f"ReducedSpace({self.kind}, dim {self.dimension})"


def internal_mw_quotient(z: ZeroLevelData) -> ReducedSpace:
    """Per-fiber symplectic quotient of the zero level by the isotropy orbits."""
    check = z.verify()
    if not check.ok:
        raise MalformedExpressionError(f"zero level data inconsistent: {check.failures}")
    quotient_dim = z.level_dimension - z.orbit_dimension
    if quotient_dim < 0:
        raise MalformedExpressionError("orbit dimension exceeds the zero level")
    if quotient_dim == 0:
        return ReducedSpace("point", 0, note=z.note,
                            declarations={"free": z.free, "proper": z.proper})
    if z.orbit_dimension == 0:
        # trivial isotropy: the quotient is the zero level with restricted form
        omega0 = z.scenario.presymplectic.omega
        return ReducedSpace("symplectic", quotient_dim, omega0=omega0,
                            note="trivial isotropy: quotient equals the zero level; "
                                 "the restricted form is the reduced form",
                            declarations={"free": z.free, "proper": z.proper})
    raise MalformedExpressionError(
        "positive-dimensional quotients with nontrivial isotropy need a declared model")


class FullQuotient:
    def __init__(self, orbit_classes, fibers, hausdorff, note=""):
        self.orbit_classes = orbit_classes
        self.fibers = fibers
        self.hausdorff = hausdorff
        self.note = note

    def __repr__(self):
        return (f"FullQuotient({len(self.orbit_classes)} orbit classes, "
                f"hausdorff={self.hausdorff})")


def full_mw_quotient(z: ZeroLevelData, internal: ReducedSpace, base_points,
                     identifications, hausdorff=True, note="") -> FullQuotient:
    """Glue internal quotients along declared groupoid arrows.

    identifications: iterable of pairs of base points declared to lie in one
    orbit; the fiber models are identified by the declared symplectomorphism
    (identity in the trivialized catalog).
    """
    parents = {p: p for p in base_points}

    def find(p):
        while parents[p] != p:
            parents[p] = parents[parents[p]]
            p = parents[p]
        return p

    for a, b in identifications:
        parents[find(a)] = find(b)
    classes = {}
    for p in base_points:
        classes.setdefault(find(p), []).append(p)
    orbit_classes = sorted(classes.values(), key=lambda c: str(c))
    fibers = {tuple(c): internal for c in orbit_classes}
    return FullQuotient(orbit_classes, fibers, hausdorff, note)


# ---------------------------------------------------------------------------
# quantum reduction
# ---------------------------------------------------------------------------

class QuantumReduction:
    def __init__(self, source: QuantizationResult, basis_columns, projector,
                 weights, weight_integral):
        self.source = source
        self.basis = basis_columns
        self.projector = projector
        self.weights = weights
        self.weight_integral = weight_integral

    @property
    def dimension(self):
        return len(self.basis)


def quantum_fixed_subspace(result: QuantizationResult,
                           isotropy_indices) -> QuantumReduction:
    """Joint kernel of the isotropy generator matrices, with metric projector."""
    n = result.dimension
    stacked = []
    weights = []
    weight_integral = True
    for idx in isotropy_indices:
        mat = [[coerce_rational(v) for v in row] for row in result.matrices[idx]]
        stacked.extend(mat)
        diagonal = all(mat[a][b].is_zero() for a in range(n) for b in range(n) if a != b)
        if diagonal:
            for a in range(n):
                w = (mat[a][a] * I).simplify()
                if not w.is_constant():
                    continue
                value = w.constant_value()
                weights.append(value)
                if not value.is_integer():
                    weight_integral = False
    if stacked:
        kernel = kernel_basis(stacked, n)
    else:
        kernel = [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    projector = _metric_projector(kernel, result.gram, n)
    return QuantumReduction(result, kernel, projector, weights, weight_integral)


def _metric_projector(columns, gram, n):
    if not columns:
        return [[ZERO] * n for _ in range(n)]
    k = len(columns)
    b = [[columns[j][i] for j in range(k)] for i in range(n)]  # n x k
    b_dag = [[b[i][j].conj() for i in range(n)] for j in range(k)]  # k x n
    gb = _mat_mul(gram, b)
    small = _mat_mul(b_dag, gb)  # k x k, Hermitian positive
    small_inv = _invert(small)
    return _mat_mul(_mat_mul(b, small_inv), _mat_mul(b_dag, gram))


def _invert(mat):
    n = len(mat)
    aug = [[mat[i][j] for j in range(n)] + [ONE if i == j else ZERO for j in range(n)]
           for i in range(n)]
    red, piv = rref(aug)
    if piv != list(range(n)):
        raise MalformedExpressionError("singular Gram restriction")
    return [[red[i][n + j] for j in range(n)] for i in range(n)]


def projector_checks(red: QuantumReduction) -> CheckResult:
    """Idempotence and commutation with the full representation matrices."""
    failures = []
    p = red.projector
    pp = _mat_mul(p, p)
    if any(not (pp[i][j] - p[i][j]).is_zero()
           for i in range(len(p)) for j in range(len(p))):
        failures.append(("idempotent", "P^2 != P"))
    for idx, mat in enumerate(red.source.matrices):
        lhs = _mat_mul(p, mat)
        rhs = _mat_mul(mat, p)
        if any(not (lhs[i][j] - rhs[i][j]).is_zero()
               for i in range(len(p)) for j in range(len(p))):
            failures.append(("invariance",
                             f"projector does not commute with generator {idx}"))
    return CheckResult("quantum-projector", not failures, failures)


# ---------------------------------------------------------------------------
# descent obstruction and the quantization/reduction comparison
# ---------------------------------------------------------------------------

def descent_obstruction_check(scenario: ActionScenario, bundle: LineBundleData,
                              z: ZeroLevelData) -> CheckResult:
    """Isotropy weight on the frame along the zero level; descends iff integral."""
    check = z.verify()
    if not check.ok:
        raise MalformedExpressionError(f"zero level data inconsistent: {check.failures}")
    weights = {}
    failures = []
    patch = None
    for idx in bundle.cover.index_set:
        if bundle.patch_chart(idx) == z.chart:
            patch = idx
            break
    if patch is None:
        raise MalformedExpressionError("no bundle patch covers the zero-level chart")
    for i in z.isotropy_indices:
        op = kostant_operator(scenario, bundle, scenario.model.basis_section(i))
        potential = op.potential_part(patch)
        restricted = potential.subst(z.parametrization).simplify()
        if not restricted.is_constant():
            failures.append(("weight", f"generator {i}: non-constant along the level"))
            continue
        eigen = restricted.constant_value()
        weight = eigen * (-I)  # eigenvalue = i * weight for the circle generator
        weights[scenario.model.generator_names[i]] = weight
    obstructions = {name: ExactScalar(w.re - Fraction(int(w.re // 1)))
                    for name, w in weights.items() if w.is_real()}
    descends = all(w.is_integer() for w in weights.values()) and not failures
    notes = [f"weights: {[f'{k}: {v}' for k, v in weights.items()]}",
             f"obstruction (weight mod 1): {[f'{k}: {v}' for k, v in obstructions.items()]}"]
    status = "pass" if descends else "hypotheses-not-met"
    result = CheckResult("descent-obstruction", not failures, failures, notes,
                         status=status)
    result.weights = weights
    result.obstructions = obstructions
    result.descends = descends
    return result


class QRReport:
    def __init__(self, status, fixed_dimension, reduced_dimension,
                 intertwiner=None, scale_squared=None, obstruction=None,
                 notes=None):
        self.status = status
        self.fixed_dimension = fixed_dimension
        self.reduced_dimension = reduced_dimension
        self.intertwiner = intertwiner
        self.scale_squared = scale_squared
        self.obstruction = obstruction
        self.notes = list(notes or [])

    @property
    def ok(self):
        return self.status in ("pass", "hypotheses-not-met")

    def __repr__(self):
        return (f"QRReport({self.status}: fixed {self.fixed_dimension}, "
                f"reduced {self.reduced_dimension})")


def qr_commute_check(scenario: ActionScenario, bundle: LineBundleData,
                     result: QuantizationResult, z: ZeroLevelData,
                     reduced_quantization=None) -> QRReport:
    """Compare the reduced quantization with the fixed subspace.

    reduced_quantization: declared description of Q(reduced); for point
    quotients in the catalog this is dimension 1 with unit Gram and trivial
    representation.
    """
    descent = descent_obstruction_check(scenario, bundle, z)
    fixed = quantum_fixed_subspace(result, z.isotropy_indices)
    if not descent.descends:
        return QRReport("hypotheses-not-met", fixed.dimension,
                        None, obstruction=descent.obstructions,
                        notes=["line bundle does not descend; "
                               "comparison hypotheses not met",
                               f"fixed-subspace dimension {fixed.dimension}"])
    if reduced_quantization is None:
        internal = internal_mw_quotient(z)
        if internal.kind == "point":
            reduced_quantization = {"dimension": 1, "gram": [[ONE]],
                                    "matrices": {}}
        else:
            raise MalformedExpressionError(
                "declare the reduced quantization for positive-dimensional quotients")
    red_dim = reduced_quantization["dimension"]
    if red_dim != fixed.dimension:
        return QRReport("fail", fixed.dimension, red_dim,
                        notes=["dimension mismatch"])
    # restricted data on the fixed subspace
    n = result.dimension
    cols = fixed.basis
    k = len(cols)
    b = [[cols[j][i] for j in range(k)] for i in range(n)]
    b_dag = [[b[i][j].conj() for i in range(n)] for j in range(k)]
    g_fixed = _mat_mul(b_dag, _mat_mul(result.gram, b))
    notes = []
    intertwiner = [[ONE if i == j else ZERO for j in range(red_dim)]
                   for i in range(red_dim)]
    # intertwining: any non-isotropy generators must agree with the declared
    # reduced matrices through the identity map on the chosen bases
    red_mats = reduced_quantization.get("matrices", {})
    residual = []
    for idx in range(len(result.matrices)):
        if idx in z.isotropy_indices:
            continue
        restricted = _mat_mul(b_dag, _mat_mul(result.gram,
                                              _mat_mul(result.matrices[idx], b)))
        target = red_mats.get(idx, [[ZERO] * red_dim for _ in range(red_dim)])
        g_target = _mat_mul(g_fixed, target)
        if any(not (restricted[i][j] - g_target[i][j]).is_zero()
               for i in range(k) for j in range(k)):
            residual.append(idx)
    if residual:
        return QRReport("fail", fixed.dimension, red_dim,
                        notes=[f"intertwiner fails on generators {residual}"])
    scale_squared = None
    if red_dim == 1:
        ratio = (coerce_rational(reduced_quantization["gram"][0][0]) /
                 coerce_rational(g_fixed[0][0])).simplify()
        if not (ratio.is_constant() and ratio.constant_value().is_positive()):
            return QRReport("fail", fixed.dimension, red_dim,
                            notes=["Gram ratio not positive"])
        scale_squared = ratio.constant_value()
        notes.append("unitary normalizer: scale^2 = reduced Gram / fixed Gram "
                     f"= {ratio}")
    return QRReport("pass", fixed.dimension, red_dim, intertwiner=intertwiner,
                    scale_squared=scale_squared, obstruction=descent.obstructions,
                    notes=notes)
