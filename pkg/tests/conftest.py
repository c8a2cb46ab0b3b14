import sys

import pytest

from trinitymaps import certificate as certmod
from trinitymaps.flagmap import from_group_triple
from trinitymaps.psl2 import build_seed, enumerate_group, psl_order


@pytest.fixture(scope="session")
def seed5():
    return build_seed(5)


@pytest.fixture(scope="session")
def map5(seed5):
    alg = seed5.alg
    G = enumerate_group([seed5.R, seed5.S], alg, 10**5, psl_order(seed5.p))
    return from_group_triple(G.elements, *seed5.triple, alg.pmul, identity=alg.one)


@pytest.fixture(scope="session")
def construction5():
    return certmod.construct(5)


@pytest.fixture(scope="session")
def cert5(construction5):
    return certmod.to_certificate(construction5)


@pytest.fixture(scope="session")
def construction7():
    return certmod.construct(7)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, title, seconds = results[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.2f}s)")
