"""Acceptance criteria, one test each.

Every test records PASS or FAIL with a short summary; the lines are printed
as the test finishes and again in the terminal summary.
"""

import ast
import itertools
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import sympy

import quasifree
from conftest import ACCEPTANCE, CORPUS, SMALL, cyclic_coords, cyclic_rep, faithful_reps, group, table
from quasifree.chartab import compute_table, validate_table
from quasifree.cyclo import Cyclotomic, galois
from quasifree.decider import (
    Conjugate,
    ForcedUnitNotUnit,
    NormMismatch,
    NotConjugate,
    VanishingSetMismatch,
    decide,
    enumerate_units,
    verify_witness,
)
from quasifree.repring import Representation, equivariant_k_groups, fock_coverage, one

from test_chartab import golden, same_up_to_permutation


@contextmanager
def criterion(n, title):
    note = {"detail": ""}
    try:
        yield note
    except BaseException as exc:
        ACCEPTANCE[n] = ("FAIL", f"{title}: {exc}".splitlines()[0][:200])
        print(f"\ncriterion {n}: FAIL  {title}: {exc}")
        raise
    ACCEPTANCE[n] = ("PASS", f"{title} {note['detail']}".strip())
    print(f"\ncriterion {n}: PASS  {title} {note['detail']}")


def test_criterion_01_golden_tables():
    with criterion(1, "character tables match golden tables and validate") as note:
        start = time.perf_counter()
        for name in CORPUS:
            t = compute_table(group(name))
            assert same_up_to_permutation(t, golden(name)), name
            report = validate_table(t)
            assert {"row_orthogonality", "column_orthogonality", "degrees"} <= set(report["checks"])
            assert sum(d * d for d in t.degrees) == t.group_order
        elapsed = time.perf_counter() - start
        assert elapsed < 10, f"took {elapsed:.2f}s"
        note["detail"] = f"({len(CORPUS)} groups in {elapsed:.2f}s)"


def test_criterion_02_forced_unit_not_unit():
    with criterion(2, "C2 triv+sign vs 2sign is NotConjugate(ForcedUnitNotUnit (2,-1))") as note:
        start = time.perf_counter()
        t = compute_table(group("C2"))
        v = decide(t, Representation(t, (1, 1)), Representation(t, (0, 2)))
        elapsed = time.perf_counter() - start
        assert isinstance(v, NotConjugate)
        assert isinstance(v.obstruction, ForcedUnitNotUnit)
        assert v.obstruction.coords == (2, -1)
        assert elapsed < 0.1, f"took {elapsed:.3f}s"
        note["detail"] = f"({elapsed * 1000:.1f} ms)"


def test_criterion_03_norm_mismatch():
    with criterion(3, "C3 rho+rho^2 vs 2rho is NotConjugate(NormMismatch 4 vs 7)"):
        t = table("C3")
        v = decide(t, cyclic_rep(t, [1, 2]), cyclic_rep(t, [1, 1]))
        assert isinstance(v, NotConjugate) and isinstance(v.obstruction, NormMismatch)
        assert (v.obstruction.norm1, v.obstruction.norm2) == (4, 7)


def test_criterion_04_c5_witness():
    with criterion(4, "C5 rho+rho^4 vs rho^2+rho^3 is Conjugate with the expected witness"):
        t = table("C5")
        r1, r2 = cyclic_rep(t, [1, 4]), cyclic_rep(t, [2, 3])
        v = decide(t, r1, r2)
        assert isinstance(v, Conjugate)
        assert v.witness.coords == cyclic_coords(t, (3, 1, -2, -2, 1))
        assert v.inverse.coords == cyclic_coords(t, (3, -2, 1, 1, -2))
        assert verify_witness(v.witness, r1, r2)
        assert max(map(abs, v.witness.coords)) <= 3


def test_criterion_05_vanishing_mismatch():
    with criterion(5, "C2 2triv+sign vs triv+2sign is NotConjugate(VanishingSetMismatch)"):
        t = table("C2")
        v = decide(t, Representation(t, (2, 1)), Representation(t, (1, 2)))
        assert isinstance(v, NotConjugate) and isinstance(v.obstruction, VanishingSetMismatch)


def test_criterion_06_lattice_reflexivity():
    with criterion(6, "C2 2triv+sign vs itself is Conjugate via the lattice path with witness 1"):
        t = table("C2")
        r = Representation(t, (2, 1))
        v = decide(t, r, r)
        assert isinstance(v, Conjugate) and v.path == "lattice" and v.witness == one(t)


# -- criterion 7: brute-force oracle -----------------------------------------


def oracle_structure_constants(t):
    """N[i][j][k] = <chi_i chi_j, chi_k>, computed from the table by direct sums."""
    k = t.num_classes
    conj = [[galois(v, -1) for v in row] for row in t.irreducibles]
    N = np.zeros((k, k, k), dtype=np.int64)
    for i, j in itertools.product(range(k), repeat=2):
        prod = [a * b for a, b in zip(t.irreducibles[i], t.irreducibles[j])]
        for l in range(k):
            s = Cyclotomic.from_rational(0, t.exponent)
            for c in range(k):
                s = s + prod[c] * conj[l][c] * t.class_sizes[c]
            q = s.rational_value() * Fraction(1, t.group_order)
            assert q.denominator == 1 and q >= 0
            N[i, j, l] = int(q)
    return N


def oracle_mult_matrix(N, coords):
    # column j = coords * chi_j
    return np.einsum("i,ijl->lj", np.array(coords, dtype=np.int64), N)


def oracle_is_unit(N, coords, cache):
    key = tuple(int(x) for x in coords)
    if key not in cache:
        cache[key] = abs(sympy.Matrix(oracle_mult_matrix(N, key).tolist()).det()) == 1
    return cache[key]


class OracleScan:
    """Images ``u * d1`` of every ``u`` in the height-4 box, encoded as integers."""

    def __init__(self, N, box, d1):
        images = box @ oracle_mult_matrix(N, d1).T
        self.shift = int(np.abs(images).max()) + 1
        self.radix = 2 * self.shift + 1
        self.codes = self.encode(images)
        self.N, self.box = N, box

    def encode(self, rows):
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
        if np.abs(rows).max() >= self.shift:
            return np.full(len(rows), -1, dtype=np.int64)
        code = np.zeros(len(rows), dtype=np.int64)
        for col in range(rows.shape[1]):
            code = code * self.radix + rows[:, col] + self.shift
        return code

    def witnesses(self, d2, cache):
        target = self.encode([d2])[0]
        if target < 0:
            return []
        hits = np.nonzero(self.codes == target)[0]
        return [tuple(int(x) for x in self.box[h]) for h in hits if oracle_is_unit(self.N, self.box[h], cache)]


def test_criterion_07_oracle_equivalence():
    with criterion(7, "decide agrees with the height-4 unit-scan oracle") as note:
        counts = {"pairs": 0, "Conjugate": 0, "NotConjugate": 0, "Unknown": 0}
        disagreements = []
        for name in SMALL:
            t = table(name)
            k = t.num_classes
            N = oracle_structure_constants(t)
            box = np.array(list(itertools.product(range(-4, 5), repeat=k)), dtype=np.int64)
            reps = faithful_reps(t, {2, 3})
            e1 = np.zeros(k, dtype=np.int64)
            e1[0] = 1
            cache = {}
            for r1 in reps:
                d1 = e1 - np.array(r1.mults)
                scan = OracleScan(N, box, d1)
                for r2 in reps:
                    if r1.dimension != r2.dimension:
                        continue
                    counts["pairs"] += 1
                    d2 = e1 - np.array(r2.mults)
                    found = scan.witnesses(d2, cache)
                    v = decide(t, r1, r2)
                    counts[v.kind] += 1
                    label = (name, r1.mults, r2.mults, v.kind, found[:1])
                    if isinstance(v, Conjugate):
                        # the oracle must accept decide's witness and find one itself
                        ok = (oracle_mult_matrix(N, v.witness.coords) @ d1 == d2).all() and oracle_is_unit(
                            N, v.witness.coords, cache
                        )
                        if not ok or not found:
                            disagreements.append(label)
                    elif isinstance(v, NotConjugate):
                        if found:
                            disagreements.append(("SOUNDNESS",) + label)
                    elif found:
                        disagreements.append(("UNKNOWN_WITH_WITNESS",) + label)
        assert not disagreements, f"{len(disagreements)} disagreements, first {disagreements[:3]}"
        assert counts["Unknown"] == 0, f"{counts['Unknown']} Unknown verdicts"
        note["detail"] = (
            f"({counts['pairs']} pairs: {counts['Conjugate']} Conjugate, "
            f"{counts['NotConjugate']} NotConjugate, 100% agreement)"
        )


# -- criterion 8 -------------------------------------------------------------


def test_criterion_08_fock_coverage():
    with criterion(8, "faithful reps reach every irreducible within the Burnside-Brauer bound") as note:
        total = 0
        for name in CORPUS + ["trivial", "V4"]:
            t = table(name)
            for rep in faithful_reps(t, set(range(1, 7))):
                cov = fock_coverage(rep)
                assert not cov.missing, (name, rep.mults, cov.missing)
                assert not cov.inconsistent
                total += 1
        note["detail"] = f"({total} faithful reps of dimension <= 6)"


# -- criterion 9 -------------------------------------------------------------


def test_criterion_09_k_groups():
    with criterion(9, "Conjugate pairs have isomorphic K-groups; the C2 pair differs") as note:
        pairs = 0
        for name in CORPUS + ["trivial", "V4"]:
            t = table(name)
            dims = {2, 3} if t.group_order <= 12 else {3, 4}
            reps = faithful_reps(t, dims)
            for r1, r2 in itertools.product(reps, repeat=2):
                if r1.dimension != r2.dimension:
                    continue
                v = decide(t, r1, r2)
                if isinstance(v, Conjugate):
                    pairs += 1
                    assert equivariant_k_groups(r1).same_groups(equivariant_k_groups(r2)), (name, r1.mults, r2.mults)
        t = table("C2")
        k1 = equivariant_k_groups(Representation(t, (1, 1)))
        k2 = equivariant_k_groups(Representation(t, (0, 2)))
        assert k1.torsion == () and k1.free_rank == 0
        assert k2.torsion == (3,) and k2.free_rank == 0
        assert not k1.same_groups(k2)
        note["detail"] = f"({pairs} Conjugate pairs checked)"


# -- criterion 10: exactness -------------------------------------------------

CORE = ["permgrp", "cyclo", "zlalg", "chartab", "repring", "decider"]
DISPLAY_ONLY = {("cyclo", "approx")}
EXACT_MATH = {"gcd", "lcm", "isqrt", "comb", "factorial", "prod"}


def float_sites(module):
    """Source locations outside display helpers that could produce a float."""
    path = Path(quasifree.__file__).parent / f"{module}.py"
    tree = ast.parse(path.read_text())
    bad = []

    def visit(node, func):
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            func = node.name
        if (module, func) not in DISPLAY_ONLY:
            what = None
            if isinstance(node, (ast.BinOp, ast.AugAssign)) and isinstance(node.op, ast.Div):
                what = "true division"
            elif isinstance(node, ast.Constant) and isinstance(node.value, (float, complex)):
                what = f"literal {node.value!r}"
            elif isinstance(node, ast.Name) and node.id in ("float", "complex", "cmath"):
                what = node.id
            elif isinstance(node, ast.Attribute) and isinstance(node.value, ast.Name):
                if node.value.id == "math" and node.attr not in EXACT_MATH:
                    what = f"math.{node.attr}"
                if node.value.id == "cmath":
                    what = f"cmath.{node.attr}"
            if what:
                bad.append(f"{module}.py:{node.lineno} in {func}: {what}")
        for child in ast.iter_child_nodes(node):
            visit(child, func)

    visit(tree, None)
    return bad


def contains_float(obj, seen=None):
    seen = set() if seen is None else seen
    if id(obj) in seen:
        return False
    seen.add(id(obj))
    if isinstance(obj, (float, complex)):
        return True
    if isinstance(obj, (str, bytes, int, Fraction)) or obj is None:
        return False
    if isinstance(obj, dict):
        return any(contains_float(k, seen) or contains_float(v, seen) for k, v in obj.items())
    if isinstance(obj, (list, tuple, set, frozenset)):
        return any(contains_float(x, seen) for x in obj)
    if isinstance(obj, Cyclotomic):
        return contains_float(obj.num, seen) or contains_float(obj.den, seen)
    if hasattr(obj, "__dataclass_fields__"):
        # the table is shared context, scanned separately
        return any(
            contains_float(getattr(obj, f), seen) for f in obj.__dataclass_fields__ if f not in ("table", "memo")
        )
    return False


@contextmanager
def float_tripwire():
    """Fail on any call into float-producing builtins while active."""
    calls = []

    def prof(frame, event, arg):
        if event == "c_call":
            mod = getattr(arg, "__module__", None) or ""
            name = getattr(arg, "__name__", "")
            if mod == "cmath" or (mod == "math" and name not in EXACT_MATH):
                calls.append(f"{mod}.{name}")

    def poisoned(name):
        def stub(*a, **k):
            calls.append(name)
            raise AssertionError(f"{name}() called in exact code")

        return stub

    modules = [sys.modules[f"quasifree.{m}"] for m in CORE]
    for m in modules:
        m.float = poisoned("float")
        m.complex = poisoned("complex")
    sys.setprofile(prof)
    try:
        yield calls
    finally:
        sys.setprofile(None)
        for m in modules:
            del m.float
            del m.complex


def test_criterion_10_exactness():
    with criterion(10, "no floating-point value influences any verdict") as note:
        sites = [s for m in CORE for s in float_sites(m)]
        assert not sites, sites
        verdicts = 0
        with float_tripwire() as calls:
            tables = {name: compute_table(group(name)) for name in SMALL + ["D4", "Q8", "A4"]}
            for name, t in tables.items():
                assert not contains_float(t.irreducibles)
                reps = faithful_reps(t, {2, 3})
                for r1, r2 in itertools.product(reps, repeat=2):
                    if r1.dimension == r2.dimension:
                        v = decide(t, r1, r2)
                        assert not contains_float(v), (name, r1.mults, r2.mults)
                        verdicts += 1
            enumerate_units(tables["C5"], 2, 2000)
        assert not calls, sorted(set(calls))
        # the tripwire itself works
        with pytest.raises(AssertionError):
            with float_tripwire():
                sys.modules["quasifree.cyclo"].float(1)
        note["detail"] = f"(static scan of {len(CORE)} modules, {verdicts} verdicts under the tripwire)"
