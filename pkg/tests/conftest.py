import numpy as np
import pytest


def simple_prime_sieve(n: int) -> np.ndarray:
    """Plain Eratosthenes, kept separate from the library sieve."""
    s = np.ones(n, dtype=bool)
    s[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if s[p]:
            s[p * p::p] = False
    return s


def simple_squarefree_sieve(n: int) -> np.ndarray:
    s = np.ones(n, dtype=bool)
    s[0] = False
    for p in np.flatnonzero(simple_prime_sieve(int(n**0.5) + 2)):
        s[p * p::p * p] = False
    return s


@pytest.fixture(scope="session")
def prime_oracle():
    return simple_prime_sieve(10**6)


@pytest.fixture(scope="session")
def squarefree_oracle():
    return simple_squarefree_sieve(10**6)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_line():
    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
