"""Character tables of finite groups.

``compute_table`` runs Dixon-Schneider: class-algebra matrices are diagonalized
simultaneously over F_p for a prime ``p = 1 (mod exp G)``, and the resulting
class functions mod p are lifted to exact cyclotomic integers through the
power maps.  ``load_table`` accepts externally supplied tables, which are only
trusted after ``validate_table`` has checked every invariant exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .cyclo import Cyclotomic, CyclotomicParseError, format_cyclotomic, galois, parse
from .permgrp import (
    DEFAULT_LIMIT,
    ConjugacyData,
    PermGroup,
    Permutation,
    conjugacy_data,
    enumerate_elements,
)
from .zlalg import SplitFailure, common_eigenvectors

__all__ = [
    "CharacterTable",
    "ValidationFailure",
    "TableDocumentError",
    "class_constants",
    "dixon_prime",
    "dixon_primes",
    "primitive_root",
    "compute_table",
    "validate_table",
    "load_table",
    "table_to_document",
]

RETRY_PRIMES = 5


class ValidationFailure(ValueError):
    """A character table violates ``invariant``."""

    def __init__(self, invariant: str, detail: str = ""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant
        self.detail = detail


class TableDocumentError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class CharacterTable:
    """Irreducible characters of a finite group on its conjugacy classes.

    ``irreducibles[r][j]`` is the value of character ``r`` on class ``j``, held
    at the group exponent.  ``power_maps[k][j]`` is the class of ``g_j^k`` for
    every residue ``k`` modulo the exponent.
    """

    group_order: int
    class_sizes: tuple[int, ...]
    element_orders: tuple[int, ...]
    power_maps: tuple[tuple[int, ...], ...]
    irreducibles: tuple[tuple[Cyclotomic, ...], ...]
    memo: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    @property
    def exponent(self) -> int:
        return len(self.power_maps)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(row[0].rational_value()) for row in self.irreducibles)

    @property
    def linear_indices(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.degrees) if d == 1)

    @property
    def inverse_classes(self) -> tuple[int, ...]:
        return self.power_maps[-1 % self.exponent]

    def power_map(self, k: int) -> tuple[int, ...]:
        return self.power_maps[k % self.exponent]


# -- Dixon-Schneider ---------------------------------------------------------


def class_constants(data: ConjugacyData) -> list[list[list[int]]]:
    """``a[i][j][k] = #{(x, y) in C_i x C_j : x y = z}`` for a fixed ``z`` in ``C_k``."""
    k = data.num_classes
    members = [[] for _ in range(k)]
    for idx, c in enumerate(data.class_of):
        members[c].append(idx)
    inverses = [data.index_of(g.inverse()) for g in data.elements]
    a = [[[0] * k for _ in range(k)] for _ in range(k)]
    for kk in range(k):
        z = data.elements[data.class_reps[kk]]
        for i in range(k):
            row = a[i]
            for x in members[i]:
                y = data.elements[inverses[x]] * z
                row[data.class_of[data.index_of(y)]][kk] += 1
    return a


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    f = 17
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def dixon_primes(group_order: int, exponent: int, count: int = RETRY_PRIMES) -> list[int]:
    """The first ``count`` primes ``p = 1 (mod exponent)`` with ``p > 2 sqrt(|G|)``."""
    if exponent < 1:
        raise ValueError("exponent must be positive")
    out = []
    p = 1
    while len(out) < count:
        p += exponent
        if p * p > 4 * group_order and _is_prime(p):
            out.append(p)
    return out


def dixon_prime(group_order: int, exponent: int) -> int:
    return dixon_primes(group_order, exponent, 1)[0]


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod ``p``."""
    if p == 2:
        return 1
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ValueError(f"{p} is not prime")


def _characters_mod_p(a, data: ConjugacyData, p: int) -> list[tuple[int, list[int]]]:
    """(degree, class values mod p) for every irreducible character."""
    k = data.num_classes
    n = data.order
    mats = [[[a[i][j][kk] for kk in range(k)] for j in range(k)] for i in range(1, k)]
    vectors = common_eigenvectors(mats, p, require_split=True)
    if len(vectors) != k:
        raise SplitFailure(f"found {len(vectors)} eigenvectors, expected {k}")
    inv_class = [data.class_of[data.index_of(data.elements[r].inverse())] for r in data.class_reps]
    size_inv = [pow(s, -1, p) for s in data.class_sizes]
    out = []
    for w in vectors:
        if w[0] != 1:
            raise SplitFailure("eigenvector vanishes on the identity class")
        s = sum(w[j] * w[inv_class[j]] * size_inv[j] for j in range(k)) % p
        if s == 0:
            raise SplitFailure("degenerate central character")
        target = (n * pow(s, -1, p)) % p
        degs = [d for d in range(1, math.isqrt(n) + 1) if (d * d) % p == target]
        if len(degs) != 1:
            raise SplitFailure(f"cannot recover degree from {target} mod {p}")
        d = degs[0]
        out.append((d, [(d * w[j] * size_inv[j]) % p for j in range(k)]))
    return out


def _lift(theta: list[int], degree: int, power_maps, e: int, p: int, z: int) -> list[Cyclotomic]:
    """Exact values from values mod p, via multiplicities of each e-th root of unity."""
    e_inv = pow(e, -1, p)
    zinv = pow(z, -1, p)
    values = []
    for c in range(len(theta)):
        orbit = [theta[power_maps[j][c]] for j in range(e)]
        mults = {}
        for l in range(e):
            step = pow(zinv, l, p)
            acc, w = 0, 1
            for j in range(e):
                acc += orbit[j] * w
                w = (w * step) % p
            m = (acc * e_inv) % p
            if m > degree:
                raise SplitFailure(f"multiplicity {m} exceeds degree {degree} mod {p}")
            if m:
                mults[l] = m
        values.append(Cyclotomic.from_exponents(e, mults))
    return values


def _row_key(row: Sequence[Cyclotomic]):
    degree = row[0].rational_value()
    trivial = all(v == 1 for v in row)
    return (degree, not trivial, tuple(-c for v in row for c in v.coeffs))


def _power_maps(data: ConjugacyData) -> tuple[tuple[int, ...], ...]:
    e = data.exponent
    maps = []
    for r in data.class_reps:
        g = data.elements[r]
        col, h = [], Permutation.identity(g.degree)
        for _ in range(e):
            col.append(data.class_of[data.index_of(h)])
            h = h * g
        maps.append(col)
    return tuple(tuple(maps[c][j] for c in range(data.num_classes)) for j in range(e))


def compute_table(
    group: PermGroup,
    limit: int = DEFAULT_LIMIT,
    prime_override: int | Sequence[int] | None = None,
) -> CharacterTable:
    elements = enumerate_elements(group, limit)
    data = conjugacy_data(elements, group.generators)
    return table_from_conjugacy_data(data, prime_override)


def table_from_conjugacy_data(
    data: ConjugacyData, prime_override: int | Sequence[int] | None = None
) -> CharacterTable:
    n, e, k = data.order, data.exponent, data.num_classes
    pmaps = _power_maps(data)
    if k == 1:
        rows = [[Cyclotomic.from_rational(1, e)]]
    else:
        primes = dixon_primes(n, e)
        if prime_override is not None:
            extra = [prime_override] if isinstance(prime_override, int) else list(prime_override)
            for p in extra:
                if not _is_prime(p) or p % e != 1 or p * p <= 4 * n:
                    raise ValueError(f"override {p} is not a prime = 1 mod {e} exceeding 2*sqrt({n})")
            primes = extra + primes
        a = class_constants(data)
        failures = []
        rows = None
        for p in primes:
            try:
                chars = _characters_mod_p(a, data, p)
                z = pow(primitive_root(p), (p - 1) // e, p)
                rows = [_lift(theta, d, pmaps, e, p, z) for d, theta in chars]
                break
            except SplitFailure as exc:
                failures.append(f"p={p}: {exc}")
        if rows is None:
            raise SplitFailure("; ".join(failures))
    rows.sort(key=_row_key)
    table = CharacterTable(
        group_order=n,
        class_sizes=data.class_sizes,
        element_orders=data.element_orders,
        power_maps=pmaps,
        irreducibles=tuple(tuple(r) for r in rows),
    )
    validate_table(table)
    return table


# -- validation --------------------------------------------------------------


def _fail(invariant: str, detail: str = ""):
    raise ValidationFailure(invariant, detail)


def validate_table(table: CharacterTable) -> dict[str, Any]:
    """Check every table invariant exactly; raises ValidationFailure on the first violation."""
    n = table.group_order
    k = table.num_classes
    e = table.exponent
    sizes, orders = table.class_sizes, table.element_orders
    checks = []

    if len(orders) != k or k == 0:
        _fail("shape", "class_sizes and element_orders must be nonempty and equally long")
    if any(s < 1 or n % s for s in sizes) or sum(sizes) != n:
        _fail("class_sizes", f"sizes {sizes} must divide and sum to {n}")
    if sizes[0] != 1 or orders[0] != 1:
        _fail("identity_class", "class 0 must be the identity class")
    if any(o < 1 for o in orders) or math.lcm(*orders) != e:
        _fail("exponent", f"lcm of element orders must be {e}")
    checks.append("class_sizes")

    for j, pm in enumerate(table.power_maps):
        if len(pm) != k or any(not 0 <= c < k for c in pm):
            _fail("power_maps", f"map for {j} is malformed")
        for c in range(k):
            if orders[pm[c]] != orders[c] // math.gcd(orders[c], j):
                _fail("power_maps", f"class {c} to the power {j} has the wrong order")
    if any(table.power_maps[0]) or table.power_maps[1 % e] != tuple(range(k)):
        _fail("power_maps", "maps for 0 and 1 must be constant-identity and identity")
    for i in range(e):
        for j in range(i, e):
            comp = tuple(table.power_maps[j][table.power_maps[i][c]] for c in range(k))
            if comp != table.power_maps[(i * j) % e]:
                _fail("power_maps", f"maps for {i} and {j} do not compose to {(i * j) % e}")
    checks.append("power_maps")

    rows = table.irreducibles
    if len(rows) != k or any(len(r) != k for r in rows):
        _fail("shape", f"irreducibles must be {k} x {k}")
    for r, row in enumerate(rows):
        for j, v in enumerate(row):
            if e % v.order:
                _fail("value_field", f"value ({r}, {j}) lives at order {v.order}, not dividing {e}")
            if v.den != 1:
                _fail("algebraic_integer", f"value ({r}, {j}) = {v} is not an algebraic integer")
    if any(v != 1 for v in rows[0]):
        _fail("trivial_row", "row 0 must be the trivial character")
    degrees = []
    for r, row in enumerate(rows):
        d = row[0]
        if not d.is_rational() or d.rational_value() < 1:
            _fail("degrees", f"row {r} has degree {d}")
        degrees.append(d.rational_value())
    if sum(d * d for d in degrees) != n:
        _fail("degree_sum", f"sum of squared degrees is {sum(d * d for d in degrees)}, expected {n}")
    checks.append("degrees")

    conj_rows = [[galois(v, -1) for v in row] for row in rows]
    for r in range(k):
        for s in range(r, k):
            total = sum((rows[r][j] * conj_rows[s][j] * sizes[j] for j in range(k)), Cyclotomic.from_rational(0, e))
            if total != (n if r == s else 0):
                _fail("row_orthogonality", f"rows {r} and {s}")
    checks.append("row_orthogonality")
    for i in range(k):
        for j in range(i, k):
            total = sum((rows[r][i] * conj_rows[r][j] for r in range(k)), Cyclotomic.from_rational(0, e))
            expected = n // sizes[i] if i == j else 0
            if total != expected:
                _fail("column_orthogonality", f"columns {i} and {j}")
    checks.append("column_orthogonality")

    for kk in range(1, e):
        if math.gcd(kk, e) != 1:
            continue
        pm = table.power_maps[kk]
        for r, row in enumerate(rows):
            for j in range(k):
                if galois(row[j], kk) != row[pm[j]]:
                    _fail("galois_power_maps", f"row {r}, class {j}, k={kk}")
    checks.append("galois_power_maps")
    return {"valid": True, "checks": checks, "num_classes": k, "group_order": n}


# -- documents ---------------------------------------------------------------


def table_to_document(table: CharacterTable) -> dict:
    return {
        "type": "character_table",
        "group_order": table.group_order,
        "class_sizes": list(table.class_sizes),
        "element_orders": list(table.element_orders),
        "power_maps": {str(j): list(pm) for j, pm in enumerate(table.power_maps)},
        "irreducibles": [[format_cyclotomic(v) for v in row] for row in table.irreducibles],
    }


def _int_list(doc, key: str) -> list[int]:
    v = doc.get(key)
    if not isinstance(v, list) or not v or any(not isinstance(x, int) or isinstance(x, bool) for x in v):
        raise TableDocumentError(f"$.{key}", "expected a nonempty list of integers")
    return v


def load_table(doc: Any) -> CharacterTable:
    """Build and validate a table from its JSON document.

    Power maps for residues 0 and 1 are implicit.  Missing maps for residues
    prime to the exponent are read off the Galois action on columns; the rest
    are derived by composing known maps.
    """
    if not isinstance(doc, dict):
        raise TableDocumentError("$", "expected an object")
    if doc.get("type") != "character_table":
        raise TableDocumentError("$.type", f"expected 'character_table', got {doc.get('type')!r}")
    n = doc.get("group_order")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise TableDocumentError("$.group_order", "expected a positive integer")
    sizes = _int_list(doc, "class_sizes")
    orders = _int_list(doc, "element_orders")
    k = len(sizes)
    if len(orders) != k:
        raise TableDocumentError("$.element_orders", f"expected {k} entries")
    if any(o < 1 for o in orders):
        raise TableDocumentError("$.element_orders", "orders must be positive")
    e = math.lcm(*orders)

    raw_maps = doc.get("power_maps", {})
    if not isinstance(raw_maps, dict):
        raise TableDocumentError("$.power_maps", "expected an object keyed by residue")
    known: dict[int, tuple[int, ...]] = {0: tuple([0] * k), 1 % e: tuple(range(k))}
    for key, pm in raw_maps.items():
        path = f"$.power_maps.{key}"
        try:
            res = int(key) % e
        except ValueError:
            raise TableDocumentError(path, "key must be an integer residue") from None
        if not isinstance(pm, list) or len(pm) != k or any(
            not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < k for c in pm
        ):
            raise TableDocumentError(path, f"expected {k} class indices")
        if res in known and known[res] != tuple(pm):
            raise ValidationFailure("power_maps", f"conflicting maps for residue {res}")
        known[res] = tuple(pm)
    rows_doc = doc.get("irreducibles")
    if not isinstance(rows_doc, list) or len(rows_doc) != k:
        raise TableDocumentError("$.irreducibles", f"expected {k} rows")
    rows = []
    for r, row in enumerate(rows_doc):
        if not isinstance(row, list) or len(row) != k:
            raise TableDocumentError(f"$.irreducibles[{r}]", f"expected {k} values")
        vals = []
        for j, text in enumerate(row):
            try:
                v = parse(text)
            except CyclotomicParseError as exc:
                raise TableDocumentError(f"$.irreducibles[{r}][{j}]", str(exc)) from None
            if e % v.order:
                raise ValidationFailure("value_field", f"value ({r}, {j}) = {text!r} has order not dividing {e}")
            vals.append(v.lift(e))
        rows.append(tuple(vals))

    # unit residues act on columns as the Galois group acts on values
    columns = {tuple(row[j] for row in rows): j for j in range(k)}
    for r in range(2, e):
        if r in known or math.gcd(r, e) != 1:
            continue
        image = []
        for j in range(k):
            c = columns.get(tuple(galois(row[j], r) for row in rows))
            if c is None:
                raise ValidationFailure("galois_power_maps", f"column {j} has no Galois image for k={r}")
            image.append(c)
        known[r] = tuple(image)
    grew = True
    while grew and len(known) < e:
        grew = False
        for i, pi in list(known.items()):
            for j, pj in list(known.items()):
                r = (i * j) % e
                if r not in known:
                    known[r] = tuple(pj[pi[c]] for c in range(k))
                    grew = True
    if len(known) < e:
        missing = sorted(set(range(e)) - set(known))
        raise ValidationFailure("power_maps", f"cannot derive maps for residues {missing}")

    table = CharacterTable(
        group_order=n,
        class_sizes=tuple(sizes),
        element_orders=tuple(orders),
        power_maps=tuple(known[j] for j in range(e)),
        irreducibles=tuple(rows),
    )
    validate_table(table)
    return table
