import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from quantbench import catalog
from quantbench.quantize import SectionAnsatz, holomorphic_solve, induced_representation


@pytest.fixture(scope="session")
def sphere():
    return catalog.sphere_atlas()


@pytest.fixture(scope="session")
def orbit_scenarios():
    return {k: catalog.su2_orbit_scenario(k) for k in range(4)}


@pytest.fixture(scope="session")
def rotation_scenarios():
    return {k: catalog.u1_rotation_scenario(k) for k in (2, 3, 4)}


def quantize_scenario(scenario, cap=None):
    bundle = scenario.extras["bundle"]
    cap = cap if cap is not None else scenario.extras["ansatz_cap"]
    ansatz = SectionAnsatz.monomial(bundle, scenario.extras["holomorphic_coords"], cap)
    basis = holomorphic_solve(bundle, scenario.extras["complex_structure"], ansatz)
    return induced_representation(scenario, bundle, basis)


@pytest.fixture(scope="session")
def orbit_quantizations(orbit_scenarios):
    return {k: quantize_scenario(s) for k, s in orbit_scenarios.items()}


@pytest.fixture(scope="session")
def rotation_quantizations(rotation_scenarios):
    return {k: quantize_scenario(s) for k, s in rotation_scenarios.items()}


@pytest.fixture(scope="session")
def gauge_su2_1():
    return catalog.gauge_su2_scenario(1)
