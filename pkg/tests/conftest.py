import pytest

from abelspc.abelian import canonicalize, subgroup_from_generators

ACCEPTANCE_LINES = []


def grp(*factors):
    return canonicalize(list(factors))


def sub(G, *gens):
    return subgroup_from_generators(G, list(gens))


def two_groups(max_order):
    """Abelian 2-groups of order <= max_order, trivial group included."""
    out = [canonicalize([])]

    def parts(n, largest):
        if n == 0:
            yield []
            return
        for k in range(min(n, largest), 0, -1):
            for rest in parts(n - k, k):
                yield [k] + rest

    e = 1
    while 2**e <= max_order:
        out += [canonicalize([2**k for k in lam]) for lam in parts(e, e)]
        e += 1
    return out


@pytest.fixture
def acceptance_line():
    def record(number, passed, detail=""):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}".rstrip())
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
