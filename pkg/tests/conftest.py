import itertools
import json
from functools import lru_cache
from pathlib import Path

import pytest

from quasifree.chartab import compute_table
from quasifree.cyclo import zeta
from quasifree.permgrp import group_from_document
from quasifree.repring import Representation, is_faithful

DATA = Path(__file__).parent / "data"
CORPUS = ["C2", "C3", "C4", "C5", "C6", "S3", "D4", "Q8", "A4", "S4", "A5"]
SMALL = ["trivial", "C2", "C3", "C4", "V4", "C5", "C6", "S3"]  # all groups of order <= 6


def group_doc(name):
    return json.loads((DATA / "groups" / f"{name}.json").read_text())


def group(name):
    return group_from_document(group_doc(name))


@lru_cache(maxsize=None)
def table(name):
    return compute_table(group(name))


def reps_of_dimension(t, dims):
    """Every genuine representation whose dimension lies in ``dims``."""
    degrees = t.degrees
    top = max(dims)
    ranges = [range(top // d + 1) for d in degrees]
    for mults in itertools.product(*ranges):
        n = sum(m * d for m, d in zip(mults, degrees))
        if n in dims:
            yield Representation(t, mults)


def faithful_reps(t, dims):
    return [r for r in reps_of_dimension(t, dims) if is_faithful(r)]


@pytest.fixture(scope="session")
def tables():
    return {name: table(name) for name in CORPUS + ["trivial", "V4"]}


@pytest.fixture
def C2():
    return table("C2")


@pytest.fixture
def C3():
    return table("C3")


@pytest.fixture
def C5():
    return table("C5")


@pytest.fixture
def S3():
    return table("S3")


def cyclic_rows(t):
    """Row indices of rho^0, rho^1, ... for a cyclic table, rho sending a fixed generator to zeta."""
    n = t.group_order
    gen = t.element_orders.index(n)
    z = zeta(n)
    return [next(i for i, row in enumerate(t.irreducibles) if row[gen] == z**j) for j in range(n)]


def cyclic_rep(t, powers):
    """Representation rho^a + rho^b + ... of a cyclic group, given the exponents."""
    idx = cyclic_rows(t)
    mults = [0] * t.num_classes
    for a in powers:
        mults[idx[a % t.group_order]] += 1
    return Representation(t, mults)


def cyclic_coords(t, coeffs):
    """Coordinates in table order for sum_j coeffs[j] rho^j."""
    idx = cyclic_rows(t)
    out = [0] * t.num_classes
    for j, c in enumerate(coeffs):
        out[idx[j]] = c
    return tuple(out)


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {text}")
