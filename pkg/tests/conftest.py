import pytest

from quenchfront import acceptance, continuation


@pytest.fixture(scope="session")
def hm_profile():
    """Converged front at c = 0 (the best-conditioned anchor)."""
    return continuation.solve_front(0.0)


@pytest.fixture(scope="session")
def accept_ctx():
    """Shared acceptance context; branches are computed once per session."""
    return acceptance.AcceptanceContext()
