"""Decide whether ``1 - [pi1]`` and ``1 - [pi2]`` are associated in R(G).

For faithful representations of equal dimension ``n >= 2`` of a finite group,
associatedness is equivalent to conjugacy of the quasi-free actions on O_n.
Every verdict carries exact, re-checkable evidence: a unit ``u`` with
``u * (1 - [pi1]) = 1 - [pi2]``, or an obstruction certificate.  A bounded
search that finds nothing is reported as Unknown, never as NotConjugate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .chartab import CharacterTable
from .cyclo import Cyclotomic, absolute_norm, invert
from .repring import (
    ClassFunction,
    KGroups,
    NotUnit,
    NotVirtual,
    Representation,
    VirtualCharacter,
    determinant_is_unit,
    equivariant_k_groups,
    from_class_function,
    is_faithful,
    mul,
    one_minus,
    unit_inverse,
)
from .zlalg import NoSolution, solve_integral

__all__ = [
    "DecideConfig",
    "InvalidInput",
    "VanishingSetMismatch",
    "NormMismatch",
    "KTheoryMismatch",
    "ForcedUnitNotVirtual",
    "ForcedUnitNotUnit",
    "NoIntegralSolution",
    "Conjugate",
    "NotConjugate",
    "Unknown",
    "decide",
    "verify_witness",
    "recheck_obstruction",
    "trivial_units",
    "enumerate_units",
    "graded_vectors",
]


@dataclass(frozen=True)
class DecideConfig:
    height_bound: int = 8
    candidate_limit: int = 200_000

    def __post_init__(self):
        if self.height_bound < 1 or self.candidate_limit < 1:
            raise ValueError("height_bound and candidate_limit must be positive")


class InvalidInput(ValueError):
    """The inputs are outside the hypotheses, so no verdict is asserted.

    ``reason`` is one of ``DimensionMismatch``, ``NotFaithful``, ``DimensionTooSmall``.
    """

    def __init__(self, reason: str, detail: str):
        super().__init__(f"{reason}: {detail}")
        self.reason = reason
        self.detail = detail


# -- obstructions ------------------------------------------------------------


@dataclass(frozen=True)
class VanishingSetMismatch:
    """``1 - [pi1]`` and ``1 - [pi2]`` vanish on different classes; units never vanish."""

    vanishing1: tuple[int, ...]
    vanishing2: tuple[int, ...]
    kind = "VanishingSetMismatch"


@dataclass(frozen=True)
class NormMismatch:
    """Absolute norms differ at one class; unit values have norm +-1."""

    class_index: int
    norm1: int
    norm2: int
    kind = "NormMismatch"


@dataclass(frozen=True)
class KTheoryMismatch:
    groups1: KGroups
    groups2: KGroups
    kind = "KTheoryMismatch"


@dataclass(frozen=True)
class ForcedUnitNotVirtual:
    """The only possible ``u`` (pointwise quotient) is not a virtual character."""

    values: tuple[Cyclotomic, ...]
    coordinate_index: int
    coordinate: Cyclotomic
    kind = "ForcedUnitNotVirtual"


@dataclass(frozen=True)
class ForcedUnitNotUnit:
    """The only possible ``u`` lies in R(G) but is not invertible there."""

    coords: tuple[int, ...]
    reason: str
    class_index: int | None = None
    kind = "ForcedUnitNotUnit"


@dataclass(frozen=True)
class NoIntegralSolution:
    """No virtual character solves ``u * d1 = d2`` on the non-vanishing classes."""

    classes: tuple[int, ...]
    kind = "NoIntegralSolution"


Obstruction = Union[
    VanishingSetMismatch,
    NormMismatch,
    KTheoryMismatch,
    ForcedUnitNotVirtual,
    ForcedUnitNotUnit,
    NoIntegralSolution,
]

# Which certificate is reported first when several hold.  A forced quotient
# that is virtual but not invertible is the sharpest statement and implies the
# norm failure, so it outranks the class-local checks.
PRIORITY = (
    "VanishingSetMismatch",
    "ForcedUnitNotUnit",
    "NormMismatch",
    "KTheoryMismatch",
    "ForcedUnitNotVirtual",
    "NoIntegralSolution",
)


# -- verdicts ----------------------------------------------------------------


@dataclass(frozen=True)
class Conjugate:
    witness: VirtualCharacter
    inverse: VirtualCharacter
    path: str  # "fast" or "lattice"
    candidates_tested: int = 0
    kind = "Conjugate"


@dataclass(frozen=True)
class NotConjugate:
    obstruction: Obstruction
    obstructions: tuple[Obstruction, ...] = field(default=())
    kind = "NotConjugate"

    def find(self, kind: str) -> Obstruction | None:
        return next((o for o in self.obstructions if o.kind == kind), None)


@dataclass(frozen=True)
class Unknown:
    candidates_tested: int
    height_bound: int
    lattice_rank: int
    kind = "Unknown"


Verdict = Union[Conjugate, NotConjugate, Unknown]


# -- helpers -----------------------------------------------------------------


def _check_hypotheses(rep1: Representation, rep2: Representation) -> None:
    if rep1.table is not rep2.table and rep1.table != rep2.table:
        raise ValueError("representations belong to different tables")
    n1, n2 = rep1.dimension, rep2.dimension
    if n1 != n2:
        raise InvalidInput("DimensionMismatch", f"dimensions {n1} and {n2} differ")
    if n1 < 2:
        raise InvalidInput("DimensionTooSmall", f"dimension {n1} < 2")
    for which, rep in ((1, rep1), (2, rep2)):
        if not is_faithful(rep):
            raise InvalidInput("NotFaithful", f"representation {which} is not faithful")


def _vanishing(values) -> tuple[int, ...]:
    return tuple(j for j, v in enumerate(values) if v.is_zero())


def _abs_norm(v: Cyclotomic) -> int:
    n = absolute_norm(v)
    # d values are algebraic integers
    return abs(n.numerator)


def graded_vectors(rank: int, height: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors with sup-norm at most ``height``, shell by shell.

    Shell ``h`` holds the vectors whose largest absolute entry is exactly ``h``,
    listed lexicographically; shells come in increasing ``h``.
    """
    if rank == 0:
        yield ()
        return
    for h in range(height + 1):
        if h == 0:
            yield (0,) * rank
            continue
        prefix = [0] * rank

        def rec(pos: int, hit: bool):
            if pos == rank - 1:
                choices = range(-h, h + 1) if hit else (-h, h)
                for c in choices:
                    prefix[pos] = c
                    yield tuple(prefix)
                return
            for c in range(-h, h + 1):
                prefix[pos] = c
                yield from rec(pos + 1, hit or abs(c) == h)

        yield from rec(0, False)


def _confirmed_inverse(u: VirtualCharacter) -> VirtualCharacter | None:
    if not determinant_is_unit(u):
        return None
    try:
        return unit_inverse(u)
    except NotUnit:
        return None


# -- main entry points -------------------------------------------------------


def verify_witness(u: VirtualCharacter, rep1: Representation, rep2: Representation) -> bool:
    try:
        unit_inverse(u)
    except NotUnit:
        return False
    return mul(u, one_minus(rep1)) == one_minus(rep2)


def _primary(obstructions: list) -> Obstruction:
    return min(obstructions, key=lambda o: PRIORITY.index(o.kind))


def decide(
    table: CharacterTable,
    rep1: Representation,
    rep2: Representation,
    config: DecideConfig | None = None,
) -> Verdict:
    """Exact associatedness decision for ``1 - [rep1]`` and ``1 - [rep2]``.

    Raises InvalidInput when the representations are not faithful, differ in
    dimension, or have dimension below 2.
    """
    config = config or DecideConfig()
    if rep1.table is not table and rep1.table != table:
        raise ValueError("rep1 does not belong to the given table")
    _check_hypotheses(rep1, rep2)

    d1, d2 = one_minus(rep1), one_minus(rep2)
    vals1, vals2 = d1.values(), d2.values()
    V1, V2 = _vanishing(vals1), _vanishing(vals2)
    obstructions: list = []

    if V1 != V2:
        obstructions.append(VanishingSetMismatch(V1, V2))
    for j in range(table.num_classes):
        if j in V1 or j in V2:
            continue
        n1, n2 = _abs_norm(vals1[j]), _abs_norm(vals2[j])
        if n1 != n2:
            obstructions.append(NormMismatch(j, n1, n2))
            break
    k1, k2 = equivariant_k_groups(rep1), equivariant_k_groups(rep2)
    if not k1.same_groups(k2):
        obstructions.append(KTheoryMismatch(k1, k2))

    if V1 == V2 and not V1:
        forced = tuple(b * invert(a) for a, b in zip(vals1, vals2))
        try:
            u = from_class_function(ClassFunction(table, forced))
        except NotVirtual as exc:
            obstructions.append(ForcedUnitNotVirtual(forced, exc.index, exc.coordinate))
        else:
            try:
                inv = unit_inverse(u)
            except NotUnit as exc:
                obstructions.append(ForcedUnitNotUnit(u.coords, exc.reason, exc.class_index))
            else:
                if obstructions:
                    raise AssertionError(f"unit witness {u.coords} contradicts {obstructions}")
                if not verify_witness(u, rep1, rep2):
                    raise AssertionError(f"forced witness {u.coords} fails verification")
                return Conjugate(u, inv, "fast", 1)

    if obstructions:
        return NotConjugate(_primary(obstructions), tuple(obstructions))
    return _lattice_search(table, rep1, rep2, vals1, vals2, V1, config)


def _quotient_system(table: CharacterTable, vals1, vals2, vanishing) -> tuple[list[list[int]], list[int], tuple[int, ...]]:
    """Integer system for ``sum_i c_i chi_i(g_j) = d2(g_j) / d1(g_j)`` over the
    non-vanishing classes, expanded over the power basis at the exponent."""
    e = table.exponent
    classes = tuple(j for j in range(table.num_classes) if j not in vanishing)
    rows, rhs = [], []
    for j in classes:
        q = (vals2[j] * invert(vals1[j])).lift(e)
        chis = [table.irreducibles[i][j].lift(e) for i in range(table.num_classes)]
        for t in range(len(q.num)):
            # character values are algebraic integers: den == 1
            row = [chi.num[t] * q.den for chi in chis]
            if any(row) or q.num[t]:
                rows.append(row)
                rhs.append(q.num[t])
    return rows, rhs, classes


def _lattice_search(table, rep1, rep2, vals1, vals2, vanishing, config: DecideConfig) -> Verdict:
    rows, rhs, classes = _quotient_system(table, vals1, vals2, vanishing)
    try:
        sol = solve_integral(rows, rhs)
    except NoSolution:
        return NotConjugate(NoIntegralSolution(classes), (NoIntegralSolution(classes),))
    basis = sol.kernel_basis
    rank = len(basis)
    tested = 0
    for m in graded_vectors(rank, config.height_bound):
        if tested >= config.candidate_limit:
            break
        tested += 1
        coords = list(sol.particular)
        for mb, b in zip(m, basis):
            if mb:
                coords = [c + mb * x for c, x in zip(coords, b)]
        u = VirtualCharacter(table, tuple(coords))
        inv = _confirmed_inverse(u)
        if inv is not None:
            if not verify_witness(u, rep1, rep2):
                raise AssertionError(f"lattice witness {u.coords} fails verification")
            return Conjugate(u, inv, "lattice", tested)
    return Unknown(tested, config.height_bound, rank)


# -- certificates ------------------------------------------------------------


def recheck_obstruction(obstruction: Obstruction, rep1: Representation, rep2: Representation) -> bool:
    """Re-derive the contradiction recorded in ``obstruction`` from scratch."""
    table = rep1.table
    d1, d2 = one_minus(rep1), one_minus(rep2)
    vals1, vals2 = d1.values(), d2.values()
    kind = obstruction.kind
    if kind == "VanishingSetMismatch":
        return (
            _vanishing(vals1) == obstruction.vanishing1
            and _vanishing(vals2) == obstruction.vanishing2
            and obstruction.vanishing1 != obstruction.vanishing2
        )
    if kind == "NormMismatch":
        j = obstruction.class_index
        if vals1[j].is_zero() or vals2[j].is_zero():
            return False
        return (
            _abs_norm(vals1[j]) == obstruction.norm1
            and _abs_norm(vals2[j]) == obstruction.norm2
            and obstruction.norm1 != obstruction.norm2
        )
    if kind == "KTheoryMismatch":
        g1, g2 = equivariant_k_groups(rep1), equivariant_k_groups(rep2)
        return g1 == obstruction.groups1 and g2 == obstruction.groups2 and not g1.same_groups(g2)
    if kind == "ForcedUnitNotVirtual":
        if _vanishing(vals1):
            return False
        if any(q * a != b for q, a, b in zip(obstruction.values, vals1, vals2)):
            return False
        try:
            from_class_function(ClassFunction(table, obstruction.values))
        except NotVirtual as exc:
            return exc.index == obstruction.coordinate_index
        return False
    if kind == "ForcedUnitNotUnit":
        if _vanishing(vals1):
            return False
        u = VirtualCharacter(table, obstruction.coords)
        if mul(u, d1) != d2:
            return False
        try:
            unit_inverse(u)
        except NotUnit:
            return True
        return False
    if kind == "NoIntegralSolution":
        rows, rhs, classes = _quotient_system(table, vals1, vals2, _vanishing(vals1))
        if classes != obstruction.classes:
            return False
        try:
            solve_integral(rows, rhs)
        except NoSolution:
            return True
        return False
    raise ValueError(f"unknown obstruction {kind!r}")


# -- unit exploration --------------------------------------------------------


def trivial_units(table: CharacterTable) -> list[VirtualCharacter]:
    """``+lambda`` and ``-lambda`` for every linear character ``lambda``."""
    out = []
    k = table.num_classes
    for i in table.linear_indices:
        e = [0] * k
        e[i] = 1
        lam = VirtualCharacter(table, tuple(e))
        out.extend([lam, -lam])
    return out


def enumerate_units(table: CharacterTable, height: int, limit: int) -> list[VirtualCharacter]:
    """All units among the first ``limit`` nonzero coordinate vectors of
    sup-norm at most ``height``, in graded lexicographic order."""
    if height < 1 or limit < 1:
        raise ValueError("height and limit must be positive")
    found = []
    tested = 0
    for coords in graded_vectors(table.num_classes, height):
        if not any(coords):
            continue
        if tested >= limit:
            break
        tested += 1
        u = VirtualCharacter(table, coords)
        if _confirmed_inverse(u) is not None:
            found.append(u)
    return found
