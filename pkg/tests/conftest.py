import pytest
from helpers import CORRELATION_COMBOS, correlation_scenario

from twdpsim import generate_ensemble
from twdpsim.harness import default_correlation_grid


@pytest.fixture(scope="session")
def corr_ensembles_m500():
    """One 500-trial ensemble per fading severity, shared across the suite."""
    return {
        (k, g): generate_ensemble(correlation_scenario(k, g, 500))
        for (k, g) in CORRELATION_COMBOS
    }


@pytest.fixture(scope="session")
def corr_grid(corr_ensembles_m500):
    scn = corr_ensembles_m500[(0.0, 0.0)].scenario
    return default_correlation_grid(scn)
