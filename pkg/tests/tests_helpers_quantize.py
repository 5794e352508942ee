"""Shared quantization helper for gauge test modules."""

from quantbench.quantize import SectionAnsatz, holomorphic_solve, induced_representation


def quantize_gauge(gauge):
    bundle = gauge.line_bundle
    ansatz = SectionAnsatz.monomial(bundle, gauge.fiber.holomorphic_coords,
                                    gauge.fiber.ansatz_cap)
    basis = holomorphic_solve(bundle, gauge.complex_structure, ansatz)
    return induced_representation(gauge.scenario, bundle, basis)
