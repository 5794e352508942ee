"""Exact verification workbench for momentum maps on fibered spaces with
Lie-algebroid symmetry: presymplectic data, prequantization line bundles,
fiberwise Kahler quantization and symplectic/quantum reduction, all over the
Gaussian rationals (with a formal 2*pi*i token), so every identity is decided
exactly."""

from .scalars import ExactScalar, rational
from .exprs import PolyExpr, RationalExpr, parse_expr, simplify
from .geometry import (
    Chart,
    DifferentialForm,
    FiberedAtlas,
    Transition,
    VectorField,
    exterior_derivative,
    glue_check,
    interior_product,
    lie_derivative,
    poincare_primitive,
    pullback,
    wedge,
)
from .liealg import (
    ActionMap,
    Ad,
    AlgebroidModel,
    GroupElement,
    LieAlgebra,
    SectionRep,
    action_algebroid,
    coAd,
    jacobi_check,
    morphism_check,
    su2,
    u1,
)
from .cech import (
    Cochain,
    CohomologyClass,
    GoodCover,
    IntegralityReport,
    OverlapFunction,
    cech_delta,
    cohomology_compute,
    derham_to_cech,
    integrality_test,
)
from .hamiltonian import (
    ActionScenario,
    MomentumMapRep,
    PresymplecticData,
    algebroid_differential,
    equivariance_check,
    internal_momentum_check,
    perturb,
    prequantization_condition_check,
    presymplectic_check,
    quantization_condition_check,
)
from .bundles import (
    KostantOperator,
    LineBundleData,
    chern_class_algebroid,
    connection_equivariance_check,
    construct_from_integral_class,
    curvature,
    kostant_operator,
    pic_dual,
    pic_tensor,
    rep_flatness_check,
    rep_hermitian_check,
    validate_bundle,
)
from .quantize import (
    ComplexStructureData,
    QuantizationResult,
    SectionAnsatz,
    holomorphic_solve,
    induced_representation,
    inner_product,
    integrate_representation,
    polarization_equivariance_check,
)
from .reduce import (
    QRReport,
    QuantumReduction,
    ReducedSpace,
    ZeroLevelData,
    descent_obstruction_check,
    full_mw_quotient,
    internal_mw_quotient,
    qr_commute_check,
    quantum_fixed_subspace,
)
from .gauge import (
    FiberPackage,
    GaugeScenario,
    PrincipalBundleData,
    build_gauge_scenario,
    gauge_momentum_verify,
    integrated_rep_check,
    quantization_isomorphism_check,
)
from .catalog import build_scenario, list_scenarios
from .runner import run_scenario
from .reports import Report

__version__ = "0.1.0"
