"""Check orchestration: run a scenario's verification stack in dependency
order (structure -> momentum conditions -> prequantization -> quantization ->
reduction) and assemble a report."""

from __future__ import annotations

import random
import time

from . import bundles, hamiltonian, quantize, reduce as reduce_mod
from .catalog import build_scenario, zero_level_data
from .errors import QuantbenchError
from .gauge import (
    GaugeScenario,
    gauge_momentum_verify,
    quantization_isomorphism_check,
)
from .hamiltonian import CheckResult
from .quantize import SectionAnsatz, holomorphic_solve, induced_representation
from .reports import CheckRecord, Report

STAGES = ("structure", "hamiltonian", "prequantize", "quantize", "reduce")


def _timed(report, check_id, fn, details=None):
    start = time.perf_counter()
    try:
        result = fn()
    except QuantbenchError as exc:
        record = CheckRecord(check_id, "fail", failures=[(type(exc).__name__, str(exc))],
                             seconds=time.perf_counter() - start)
        report.add(record)
        return None
    seconds = time.perf_counter() - start
    if isinstance(result, CheckResult):
        record = CheckRecord.from_result(result, details, seconds)
        report.add(record)
        return result
    record = CheckRecord(check_id, "pass", details=details or {}, seconds=seconds)
    if isinstance(result, dict):
        record.details.update(result)
    report.add(record)
    return result


def run_scenario(scenario, checks=None, seed=1729) -> Report:
    """Run the verification stack; `checks` filters by check id or stage name."""
    if isinstance(scenario, str):
        scenario = build_scenario(scenario)
    gauge = None
    if isinstance(scenario, GaugeScenario):
        gauge = scenario
        scenario = gauge.scenario
    elif "gauge" in scenario.extras:
        gauge = scenario.extras["gauge"]
    rng = random.Random(seed)
    report = Report(scenario.name)

    def wanted(check_id, stage):
        if not checks:
            return True
        return check_id in checks or stage in checks

    # -- structure ---------------------------------------------------------
    if wanted("transition-consistency", "structure"):
        def transitions():
            bad = scenario.atlas.check_transition_consistency()
            return CheckResult("transition-consistency", not bad,
                               [(f"{a}->{b}", c) for a, b, c in bad])
        _timed(report, "transition-consistency", transitions)
    if wanted("action-morphism", "structure"):
        _timed(report, "action-morphism",
               lambda: _as_result("action-morphism",
                                  scenario.action.morphism_report(rng)))
    if wanted("bracket-structure", "structure"):
        def bracket_structure():
            jac = scenario.action_model.jacobi_on_generators()
            lei = scenario.action_model.leibniz_report(rng)
            failures = [("jacobi", str(f)) for f in jac.failures]
            failures += [("leibniz", str(f)) for f in lei.failures]
            return CheckResult("bracket-structure", not failures, failures)
        _timed(report, "bracket-structure", bracket_structure)

    # -- momentum conditions -------------------------------------------------
    degenerate = bool(scenario.extras.get("degenerate_level"))

    def _degenerate_downgrade(result, kinds=None):
        """Declared degenerate levels (point orbits modeled with the zero
        form) report failed nondegeneracy/positivity as unmet hypotheses."""
        if degenerate and not result.ok and \
                (kinds is None or all(f[0] in kinds for f in result.failures)):
            result.status = "hypotheses-not-met"
            result.ok = True
            result.notes.append("level 0 is the point orbit; the sphere model "
                                "carries the zero form by declaration")
        return result

    if wanted("presymplectic", "hamiltonian"):
        _timed(report, "presymplectic",
               lambda: _degenerate_downgrade(
                   hamiltonian.presymplectic_check(scenario.presymplectic),
                   {"nondegeneracy", "nondegeneracy-sample"}))
    if wanted("internal-momentum", "hamiltonian"):
        _timed(report, "internal-momentum",
               lambda: hamiltonian.internal_momentum_check(scenario))
    if wanted("coadjoint-equivariance", "hamiltonian"):
        _timed(report, "coadjoint-equivariance",
               lambda: hamiltonian.equivariance_check(scenario))
    if wanted("prequantization-condition", "hamiltonian"):
        _timed(report, "prequantization-condition",
               lambda: hamiltonian.prequantization_condition_check(scenario))
    if wanted("quantization-condition", "hamiltonian"):
        _timed(report, "quantization-condition",
               lambda: hamiltonian.quantization_condition_check(scenario))
    if wanted("differential-squares-to-zero", "hamiltonian"):
        _timed(report, "differential-squares-to-zero",
               lambda: hamiltonian.dd_zero_report(scenario, rng, samples=2))
    if gauge is not None and wanted("gauge-momentum", "hamiltonian"):
        _timed(report, "gauge-curvature-formula",
               lambda: _as_result("gauge-curvature-formula",
                                  gauge.bundle_data.curvature_reverify()))
        _timed(report, "gauge-momentum", lambda: gauge_momentum_verify(gauge))

    # -- prequantization -------------------------------------------------------
    bundle = scenario.extras.get("bundle")
    if gauge is not None and gauge.line_bundle is not None:
        bundle = gauge.line_bundle
    if bundle is not None:
        if wanted("bundle-data", "prequantize"):
            _timed(report, "bundle-data", lambda: bundles.validate_bundle(bundle))
        if wanted("curvature-match", "prequantize"):
            def curvature_match():
                k_form = bundles.curvature(bundle)
                diff = (k_form - scenario.presymplectic.omega_tilde).simplify()
                ok = diff.is_zero()
                return CheckResult("curvature-match", ok,
                                   [] if ok else [("curvature", repr(diff))])
            _timed(report, "curvature-match", curvature_match)
        if wanted("representation-flatness", "prequantize"):
            _timed(report, "representation-flatness",
                   lambda: bundles.rep_flatness_check(scenario, bundle, rng))
        if wanted("representation-hermitian", "prequantize"):
            _timed(report, "representation-hermitian",
                   lambda: bundles.rep_hermitian_check(scenario, bundle, rng))
        if wanted("connection-equivariance", "prequantize"):
            _timed(report, "connection-equivariance",
                   lambda: bundles.connection_equivariance_check(scenario, bundle, rng))
        if wanted("chern-witness", "prequantize"):
            _timed(report, "chern-witness",
                   lambda: bundles.chern_class_algebroid(scenario, bundle))

    # -- quantization ---------------------------------------------------------
    result = None
    structure = gauge.complex_structure if gauge is not None else \
        scenario.extras.get("complex_structure")
    has_fibers = any(scenario.atlas.chart(ch).fiber_coords
                     for ch in scenario.atlas.charts)
    if not has_fibers and wanted("holomorphic-dimension", "quantize"):
        note = scenario.extras.get("quantization_note",
                                   "fibers are points; quantization empty")
        report.add(CheckRecord("scenario-note", "pass", notes=[note]))
    if bundle is not None and structure is not None and has_fibers:
        if wanted("complex-structure", "quantize"):
            _timed(report, "complex-structure", lambda: structure.validate())
            _timed(report, "kahler-positivity",
                   lambda: _degenerate_downgrade(
                       structure.positivity_check(scenario.presymplectic.omega)))
        if wanted("polarization-equivariance", "quantize"):
            _timed(report, "polarization-equivariance",
                   lambda: quantize.polarization_equivariance_check(scenario, structure))
        coords = gauge.fiber.holomorphic_coords if gauge is not None else \
            scenario.extras.get("holomorphic_coords")
        cap = gauge.fiber.ansatz_cap if gauge is not None else \
            scenario.extras.get("ansatz_cap", 2)
        basis = None
        if coords is not None and wanted("holomorphic-dimension", "quantize"):
            def dims():
                nonlocal basis
                ansatz = SectionAnsatz.monomial(bundle, coords, cap)
                basis = holomorphic_solve(bundle, structure, ansatz)
                bigger = holomorphic_solve(
                    bundle, structure, SectionAnsatz.monomial(bundle, coords, cap + 2))
                ok = bigger.dimension == basis.dimension
                return CheckResult(
                    "holomorphic-dimension", ok,
                    [] if ok else [("robustness", f"{basis.dimension} vs "
                                    f"{bigger.dimension}")],
                    notes=[f"dimension {basis.dimension} at caps {cap} and {cap + 2}"])
            _timed(report, "holomorphic-dimension", dims)
        if basis is not None:
            def representation():
                nonlocal result
                result = induced_representation(scenario, bundle, basis)
                return {"dimension": result.dimension,
                        "gram": [[str(v) for v in row] for row in result.gram],
                        "matrices": {name: [[str(v) for v in row] for row in mat]
                                     for name, mat in zip(result.generator_names,
                                                          result.matrices)}}
            _timed(report, "quantization", representation)
            if wanted("gram-positivity", "quantize"):
                def gram_pos():
                    ok = quantize.leading_minors_positive(result.gram)
                    return CheckResult("gram-positivity", ok)
                _timed(report, "gram-positivity", gram_pos)
            if wanted("matrix-commutation", "quantize"):
                _timed(report, "matrix-commutation",
                       lambda: quantize.commutation_check(result, scenario.model))
            if wanted("infinitesimal-unitarity", "quantize"):
                _timed(report, "infinitesimal-unitarity",
                       lambda: quantize.unitarity_check(result))
    if gauge is not None and wanted("quantization-isomorphism", "quantize"):
        _timed(report, "quantization-isomorphism",
               lambda: quantization_isomorphism_check(gauge))
    if scenario.extras.get("integration") and wanted("integrated-representation",
                                                     "quantize"):
        def integration():
            rep = quantize.integrate_representation(scenario, result)
            details = {"kind": rep.kind, "description": rep.description}
            if "weights" in rep.data:
                details["weights"] = [str(w) for w in rep.data["weights"]]
            if "phase_exponent" in rep.data:
                details["phase_exponent"] = str(rep.data["phase_exponent"])
            if rep.kind == "sphere-family":
                grid = [10.0 ** (-n) for n in range(8, 24, 4)]
                probe = rep.data["probe"](grid)
                details["endpoint_probe"] = [f"{p:.3e}" for p in probe]
                decreasing = all(a >= b for a, b in zip(probe, probe[1:]))
                if probe[-1] > 1e-6 or not decreasing:
                    return CheckResult("integrated-representation", False,
                                       [("continuity", str(details))])
            return details
        _timed(report, "integrated-representation", integration)

    # -- reduction --------------------------------------------------------------
    if "zero_level" in scenario.extras and result is not None:
        zdata = zero_level_data(scenario)
        if wanted("zero-level", "reduce"):
            _timed(report, "zero-level", zdata.verify)
        if wanted("internal-quotient", "reduce"):
            def quotient():
                space = reduce_mod.internal_mw_quotient(zdata)
                return {"reduced": repr(space)}
            _timed(report, "internal-quotient", quotient)
        if wanted("descent-obstruction", "reduce"):
            _timed(report, "descent-obstruction",
                   lambda: reduce_mod.descent_obstruction_check(scenario, bundle, zdata))
        if wanted("quantum-projector", "reduce"):
            def projector():
                fixed = reduce_mod.quantum_fixed_subspace(result,
                                                          zdata.isotropy_indices)
                res = reduce_mod.projector_checks(fixed)
                res.notes.append(f"fixed-subspace dimension {fixed.dimension}")
                return res
            _timed(report, "quantum-projector", projector)
        if wanted("qr-comparison", "reduce"):
            def comparison():
                qr = reduce_mod.qr_commute_check(scenario, bundle, result, zdata)
                failures = [] if qr.ok else [("qr", str(qr))]
                notes = list(qr.notes)
                notes.append(f"fixed dimension {qr.fixed_dimension}, "
                             f"reduced dimension {qr.reduced_dimension}")
                if qr.obstruction:
                    notes.append("obstruction weights: " + ", ".join(
                        f"{k}: {v}" for k, v in qr.obstruction.items()))
                if qr.intertwiner is not None:
                    notes.append("intertwiner: " + str(
                        [[str(v) for v in row] for row in qr.intertwiner]))
                if qr.scale_squared is not None:
                    notes.append(f"intertwiner scale^2 = {qr.scale_squared}")
                return CheckResult("qr-comparison", qr.status != "fail",
                                   failures, notes, status=qr.status)
            _timed(report, "qr-comparison", comparison)
    if scenario.extras.get("full_quotient") and wanted("internal-quotient", "reduce"):
        report.add(CheckRecord("scenario-note", "pass",
                               notes=[f"full quotient: "
                                      f"{scenario.extras['full_quotient']}"]))
    return report


def _as_result(check_id, report_obj) -> CheckResult:
    return CheckResult(check_id, report_obj.ok,
                       [(str(f),) if not isinstance(f, (tuple, list)) else f
                        for f in report_obj.failures])
