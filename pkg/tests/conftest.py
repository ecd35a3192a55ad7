import numpy as np
import pytest

from lpdendro.codes import hamming_7_4, random_code

ACCEPTANCE = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE, [])


@pytest.fixture
def hamming():
    return hamming_7_4()


@pytest.fixture(scope="session")
def small_codes():
    """Hamming plus a dozen random codes with N <= 16 whose dendro forms stay
    within 22 bits, each with at least one check of degree four or more."""
    rng = np.random.default_rng(20240611)
    codes = [hamming_7_4()]
    while len(codes) < 13:
        n = int(rng.integers(8, 17))
        m = int(rng.integers(3, n // 2 + 2))
        H = random_code(n, m, rng, min_degree=3, max_degree=6)
        extra = sum(max(q - 3, 0) for q in H.row_degrees)
        if extra and n + extra <= 22:
            codes.append(H)
    return codes
