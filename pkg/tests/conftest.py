import pytest

from dircops.construction import ConstructionParams, assemble
from dircops.oracle import ConstructionOracle


@pytest.fixture(scope="session")
def tiny():
    """Small fast arena: inadmissible, but structurally complete."""
    return assemble(ConstructionParams(green_len=12, spoke_len=2, chain_len=3))


@pytest.fixture(scope="session")
def tiny_oracle(tiny):
    return ConstructionOracle(tiny)


@pytest.fixture(scope="session")
def small():
    """Admissible small arena (threshold at S=2,C=3 is 43)."""
    return assemble(ConstructionParams(green_len=50, spoke_len=2, chain_len=3))


@pytest.fixture(scope="session")
def small_oracle(small):
    return ConstructionOracle(small)
