"""Session fixtures: one group context per desk-scale parameter set."""

from __future__ import annotations

import pytest

from spreadforge import assemble_spread, build_group, validate_params

# The four desk-scale parameter sets used throughout the suite.
PARAM_SETS = [(2, 1, 1, 2), (2, 1, 1, 3), (2, 1, 2, 2), (2, 2, 1, 2)]


@pytest.fixture(scope="session")
def contexts():
    """pekt tuple -> built GroupContext, shared by the whole session."""
    return {pekt: build_group(validate_params(*pekt)) for pekt in PARAM_SETS}


@pytest.fixture(scope="session")
def ctx_2112(contexts):
    return contexts[(2, 1, 1, 2)]


@pytest.fixture(scope="session")
def ctx_2113(contexts):
    return contexts[(2, 1, 1, 3)]


@pytest.fixture(scope="session")
def ctx_2122(contexts):
    return contexts[(2, 1, 2, 2)]


@pytest.fixture(scope="session")
def ctx_2212(contexts):
    return contexts[(2, 2, 1, 2)]


@pytest.fixture(scope="session")
def spreads(contexts):
    """Default-choice spread at every parameter set (i=1, j=t+1)."""
    return {
        pekt: assemble_spread(ctx, 1, ctx.params.t + 1)
        for pekt, ctx in contexts.items()
    }
