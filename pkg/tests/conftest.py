import pytest

from divsum import dirichlet


@pytest.fixture(scope="session")
def product_1e6():
    """Shared s=1 Euler product at a mid-size truncation (tail <= 1e-6)."""
    return dirichlet.euler_product_C(1.0, 10**6)
