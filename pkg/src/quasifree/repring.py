"""The representation ring R(G) over an exact character table.

Elements are integer coordinate vectors over the irreducible characters.
Multiplication uses the integer structure constants of R(G), which are
themselves obtained by decomposing pointwise products of irreducibles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .chartab import CharacterTable
from .cyclo import Cyclotomic, CyclotomicParseError, galois, invert, parse
from .zlalg import SmithForm, det, snf

__all__ = [
    "VirtualCharacter",
    "Representation",
    "ClassFunction",
    "NotVirtual",
    "NotUnit",
    "RepresentationDocumentError",
    "FockCoverage",
    "KGroups",
    "inner_product",
    "from_class_function",
    "to_class_function",
    "mul",
    "one",
    "one_minus",
    "is_faithful",
    "unit_inverse",
    "is_unit",
    "determinant_is_unit",
    "multiplication_matrix",
    "structure_constants",
    "fock_coverage",
    "equivariant_k_groups",
    "representation_from_document",
    "representation_to_document",
]


class NotVirtual(ValueError):
    """A class function has a non-integral coordinate over the irreducibles."""

    def __init__(self, index: int, coordinate: Fraction | Cyclotomic):
        super().__init__(f"coordinate {index} is {coordinate}, not a rational integer")
        self.index = index
        self.coordinate = coordinate


class NotUnit(ValueError):
    """``reason`` is ``"ZeroValue"`` (with ``class_index``) or ``"NonIntegralInverse"``."""

    def __init__(self, reason: str, class_index: int | None = None, detail: str = ""):
        msg = reason if class_index is None else f"{reason} at class {class_index}"
        super().__init__(f"{msg}: {detail}" if detail else msg)
        self.reason = reason
        self.class_index = class_index


class RepresentationDocumentError(ValueError):
    """``kind`` is ``"parse"`` for malformed documents and ``"validation"`` when
    the document is well formed but does not describe a representation of the table."""

    def __init__(self, path: str, message: str, kind: str = "parse"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
        self.kind = kind


@dataclass(frozen=True)
class ClassFunction:
    table: CharacterTable = field(repr=False)
    values: tuple[Cyclotomic, ...]

    def __post_init__(self):
        if len(self.values) != self.table.num_classes:
            raise ValueError(f"expected {self.table.num_classes} values, got {len(self.values)}")


@dataclass(frozen=True, eq=False)
class VirtualCharacter:
    table: CharacterTable = field(repr=False)
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.table.num_classes:
            raise ValueError(f"expected {self.table.num_classes} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def _check(self, other: VirtualCharacter):
        if other.table is not self.table and other.table != self.table:
            raise ValueError("virtual characters belong to different tables")

    def __eq__(self, other):
        if not isinstance(other, VirtualCharacter):
            return NotImplemented
        return self.coords == other.coords and (self.table is other.table or self.table == other.table)

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other: VirtualCharacter) -> VirtualCharacter:
        self._check(other)
        return VirtualCharacter(self.table, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: VirtualCharacter) -> VirtualCharacter:
        self._check(other)
        return VirtualCharacter(self.table, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> VirtualCharacter:
        return VirtualCharacter(self.table, tuple(-a for a in self.coords))

    def __mul__(self, other: VirtualCharacter) -> VirtualCharacter:
        return mul(self, other)

    def values(self) -> tuple[Cyclotomic, ...]:
        return to_class_function(self).values

    def augmentation(self) -> int:
        """Value at the identity, i.e. the virtual dimension."""
        return sum(c * d for c, d in zip(self.coords, self.table.degrees))


@dataclass(frozen=True, eq=False)
class Representation(VirtualCharacter):
    """A genuine representation, up to equivalence, as irreducible multiplicities."""

    def __post_init__(self):
        super().__post_init__()
        if any(c < 0 for c in self.coords):
            raise ValueError("multiplicities must be non-negative")
        if self.dimension < 1:
            raise ValueError("a representation has dimension at least 1")

    @property
    def mults(self) -> tuple[int, ...]:
        return self.coords

    @property
    def dimension(self) -> int:
        return self.augmentation()

    def virtual(self) -> VirtualCharacter:
        return VirtualCharacter(self.table, self.coords)


def one(table: CharacterTable) -> VirtualCharacter:
    return VirtualCharacter(table, (1,) + (0,) * (table.num_classes - 1))


def to_class_function(v: VirtualCharacter) -> ClassFunction:
    t = v.table
    e = t.exponent
    width = len(Cyclotomic.from_rational(0, e).num)
    vals = []
    for j in range(t.num_classes):
        # table values are algebraic integers at the exponent, so sum numerators
        acc = [0] * width
        for c, row in zip(v.coords, t.irreducibles):
            if c:
                x = row[j] if row[j].order == e else row[j].lift(e)
                if x.den != 1:
                    raise ValueError(f"table value {x} is not an algebraic integer")
                acc = [a + c * b for a, b in zip(acc, x.num)]
        vals.append(Cyclotomic(e, acc))
    return ClassFunction(t, tuple(vals))


def _conj_rows(table: CharacterTable):
    rows = table.memo.get("conj_rows")
    if rows is None:
        rows = tuple(tuple(galois(v, -1) for v in row) for row in table.irreducibles)
        table.memo["conj_rows"] = rows
    return rows


def inner_product(table: CharacterTable, values: Sequence[Cyclotomic], i: int) -> Cyclotomic:
    """``<f, chi_i> = (1/|G|) sum_j |C_j| f(g_j) conj(chi_i(g_j))`` exactly."""
    conj = _conj_rows(table)[i]
    acc = Cyclotomic.from_rational(0, table.exponent)
    for f, c, s in zip(values, conj, table.class_sizes):
        if not f.is_zero():
            acc = acc + f * c * s
    return acc * Fraction(1, table.group_order)


def from_class_function(f: ClassFunction) -> VirtualCharacter:
    t = f.table
    coords = []
    for i in range(t.num_classes):
        c = inner_product(t, f.values, i)
        if not c.is_rational() or c.den != 1:
            raise NotVirtual(i, c)
        coords.append(c.num[0])
    return VirtualCharacter(t, tuple(coords))


def structure_constants(table: CharacterTable) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """``N[i][j]`` = coordinates of ``chi_i * chi_j``."""
    N = table.memo.get("structure_constants")
    if N is None:
        k = table.num_classes
        rows = table.irreducibles
        N = [[None] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                prod = ClassFunction(table, tuple(a * b for a, b in zip(rows[i], rows[j])))
                coords = from_class_function(prod).coords
                N[i][j] = N[j][i] = coords
        N = tuple(tuple(r) for r in N)
        table.memo["structure_constants"] = N
    return N


def mul(a: VirtualCharacter, b: VirtualCharacter) -> VirtualCharacter:
    a._check(b)
    N = structure_constants(a.table)
    k = a.table.num_classes
    out = [0] * k
    for i, x in enumerate(a.coords):
        if x:
            Ni = N[i]
            for j, y in enumerate(b.coords):
                if y:
                    xy = x * y
                    for l, n in enumerate(Ni[j]):
                        if n:
                            out[l] += xy * n
    return VirtualCharacter(a.table, tuple(out))


def multiplication_matrix(v: VirtualCharacter) -> list[list[int]]:
    """Integer matrix of ``x -> v * x`` on the irreducible basis (column j = v * chi_j)."""
    N = structure_constants(v.table)
    k = v.table.num_classes
    M = [[0] * k for _ in range(k)]
    for i, c in enumerate(v.coords):
        if c:
            for j in range(k):
                for l, n in enumerate(N[i][j]):
                    if n:
                        M[l][j] += c * n
    return M


def one_minus(rep: Representation) -> VirtualCharacter:
    return one(rep.table) - rep.virtual()


def is_faithful(rep: Representation) -> bool:
    vals = rep.values()
    n = vals[0]
    return [j for j, v in enumerate(vals) if v == n] == [0]


def unit_inverse(v: VirtualCharacter) -> VirtualCharacter:
    """Inverse of ``v`` in R(G); raises NotUnit otherwise.

    ``v`` is a unit iff no class value vanishes and the pointwise inverse is
    again a virtual character.
    """
    vals = v.values()
    for j, x in enumerate(vals):
        if x.is_zero():
            raise NotUnit("ZeroValue", j)
    try:
        inv = from_class_function(ClassFunction(v.table, tuple(invert(x) for x in vals)))
    except NotVirtual as exc:
        raise NotUnit("NonIntegralInverse", detail=str(exc)) from None
    return inv


def is_unit(v: VirtualCharacter) -> bool:
    try:
        unit_inverse(v)
    except NotUnit:
        return False
    return True


def determinant_is_unit(v: VirtualCharacter) -> bool:
    """Integer-only unit test: R(G) is free of finite rank, so ``v`` is a unit
    exactly when multiplication by ``v`` has determinant +-1.  Used to prune
    candidate scans before the class-function test."""
    if abs(v.augmentation()) != 1:
        return False
    return abs(det(multiplication_matrix(v))) == 1


# -- tensor powers and K-theory ----------------------------------------------


@dataclass(frozen=True)
class FockCoverage:
    """First tensor power of ``rep`` containing each irreducible (``None`` = Missing)."""

    first_power: tuple[int | None, ...]
    kmax: int
    default_bound: int
    faithful: bool

    @property
    def missing(self) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.first_power) if k is None)

    @property
    def complete(self) -> bool:
        return not self.missing

    @property
    def inconsistent(self) -> bool:
        # a faithful character must reach every irreducible within the bound
        return self.faithful and self.kmax >= self.default_bound and bool(self.missing)


def _distinct_count(values: Sequence[Cyclotomic]) -> int:
    seen: list[Cyclotomic] = []
    for v in values:
        if all(v != w for w in seen):
            seen.append(v)
    return len(seen)


def fock_coverage(rep: Representation, kmax: int | None = None) -> FockCoverage:
    t = rep.table
    chi = rep.values()
    bound = _distinct_count(chi) - 1
    if kmax is None:
        kmax = bound
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    first: list[int | None] = [None] * t.num_classes
    power = one(t)
    r = rep.virtual()
    for k in range(kmax + 1):
        if k:
            power = mul(power, r)
        for i, c in enumerate(power.coords):
            if c > 0 and first[i] is None:
                first[i] = k
        if all(f is not None for f in first):
            break
    return FockCoverage(tuple(first), kmax, bound, is_faithful(rep))


@dataclass(frozen=True)
class KGroups:
    """Cokernel and kernel of multiplication by ``1 - [pi]`` on R(G) = Z^k.

    ``k0`` is ``Z^free_rank + sum Z/d`` over ``torsion``; ``k1_rank`` is the
    rank of the (free) kernel.
    """

    invariant_factors: tuple[int, ...]
    free_rank: int
    k1_rank: int

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d != 1)

    def same_groups(self, other: KGroups) -> bool:
        return (self.torsion, self.free_rank, self.k1_rank) == (other.torsion, other.free_rank, other.k1_rank)

    def describe(self) -> str:
        parts = ([f"Z^{self.free_rank}"] if self.free_rank else []) + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    @classmethod
    def from_smith(cls, form: SmithForm) -> KGroups:
        return cls(form.factors, form.cokernel_free_rank, form.kernel_rank)


def equivariant_k_groups(rep: Representation) -> KGroups:
    return KGroups.from_smith(snf(multiplication_matrix(one_minus(rep))))


# -- documents ---------------------------------------------------------------


def representation_from_document(doc: Any, table: CharacterTable, path: str = "$") -> Representation:
    """Parse ``{"rep": [{"irr": i, "mult": m}, ...]}`` or ``{"values": [...]}``.

    The ``values`` form is a class function in the cyclotomic text grammar; it
    is decomposed and rejected unless every multiplicity is a non-negative integer.
    """
    if not isinstance(doc, dict):
        raise RepresentationDocumentError(path, "expected an object")
    k = table.num_classes
    if "rep" in doc:
        entries = doc["rep"]
        if not isinstance(entries, list) or not entries:
            raise RepresentationDocumentError(f"{path}.rep", "expected a nonempty list")
        mults = [0] * k
        for n, item in enumerate(entries):
            ipath = f"{path}.rep[{n}]"
            if not isinstance(item, dict):
                raise RepresentationDocumentError(ipath, "expected an object with 'irr' and 'mult'")
            irr, mult = item.get("irr"), item.get("mult")
            if not isinstance(irr, int) or isinstance(irr, bool):
                raise RepresentationDocumentError(f"{ipath}.irr", "expected an integer index")
            if not 0 <= irr < k:
                raise RepresentationDocumentError(f"{ipath}.irr", f"index out of range 0..{k - 1}", "validation")
            if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
                raise RepresentationDocumentError(f"{ipath}.mult", "expected a positive integer")
            mults[irr] += mult
        return Representation(table, tuple(mults))
    if "values" in doc:
        vals = doc["values"]
        if not isinstance(vals, list) or len(vals) != k:
            raise RepresentationDocumentError(f"{path}.values", f"expected {k} cyclotomic strings")
        parsed = []
        for j, s in enumerate(vals):
            try:
                parsed.append(parse(s))
            except CyclotomicParseError as exc:
                raise RepresentationDocumentError(f"{path}.values[{j}]", str(exc)) from None
        try:
            v = from_class_function(ClassFunction(table, tuple(parsed)))
        except NotVirtual as exc:
            raise RepresentationDocumentError(f"{path}.values", str(exc), "validation") from None
        if any(c < 0 for c in v.coords) or v.augmentation() < 1:
            raise RepresentationDocumentError(
                f"{path}.values", f"not a genuine character: coords {v.coords}", "validation"
            )
        return Representation(table, v.coords)
    raise RepresentationDocumentError(path, "expected a 'rep' or 'values' field")


def representation_to_document(rep: Representation) -> dict:
    return {"rep": [{"irr": i, "mult": m} for i, m in enumerate(rep.mults) if m]}
