import pytest

from app.services.classify import elliptic_windows


@pytest.fixture(scope="session")
def m10_windows():
    return elliptic_windows(10)


@pytest.fixture(scope="session")
def m10_alpha(m10_windows):
    """An alpha well inside the first elliptic window of m = 10."""
    return m10_windows[0].midpoint
