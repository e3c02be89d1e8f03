import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from securenc.field import make_extension_field, make_prime_field

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def F2():
    return make_prime_field(2)


@pytest.fixture
def F3():
    return make_prime_field(3)


@pytest.fixture
def F4():
    return make_extension_field(make_prime_field(2), 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def small_fields():
    """Every field of order <= 16 (the canonical modulus for extensions)."""
    out = []
    for p in (2, 3, 5, 7, 11, 13):
        out.append(make_prime_field(p))
    two, three = make_prime_field(2), make_prime_field(3)
    out += [make_extension_field(two, 2), make_extension_field(two, 3), make_extension_field(two, 4), make_extension_field(three, 2)]
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
