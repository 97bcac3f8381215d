import pytest

from klstab.kl import KLContext


@pytest.fixture(scope="session")
def ctx():
    """One context shared by the whole run; its tables are rank agnostic."""
    c = KLContext(8)
    c.ensure_rank(5)
    return c
