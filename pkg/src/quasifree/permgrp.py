"""Finite permutation groups: element closure, conjugacy classes, power maps."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Sequence

__all__ = [
    "Permutation",
    "PermGroup",
    "ConjugacyData",
    "GroupTooLarge",
    "GroupDocumentError",
    "DEFAULT_LIMIT",
    "enumerate_elements",
    "conjugacy_data",
    "power_map",
    "group_from_document",
    "group_to_document",
]

DEFAULT_LIMIT = 100_000


class GroupTooLarge(RuntimeError):
    pass


class GroupDocumentError(ValueError):
    """Malformed group document; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{0, ..., degree-1}``; ``images[i]`` is the image of ``i``.

    Products compose right to left: ``(p * q)(i) == p(q(i))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if not imgs:
            raise ValueError("permutation of degree 0")
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a bijection on 0..{len(imgs) - 1}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Permutation:
        imgs = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                imgs[a] = b
        return cls(tuple(imgs))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        a = self.images
        return Permutation(tuple(a[j] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        seen = [False] * self.degree
        result = 1
        for start in range(self.degree):
            if seen[start]:
                continue
            length, j = 0, start
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            result = math.lcm(result, length)
        return result


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Permutation, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("at least one generator is required")
        for g in gens:
            if g.degree != self.degree:
                raise ValueError(f"generator {g.images} has degree {g.degree}, expected {self.degree}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_images(cls, degree: int, generators: Sequence[Sequence[int]]) -> PermGroup:
        return cls(degree, tuple(Permutation(tuple(g)) for g in generators))


def enumerate_elements(group: PermGroup, limit: int = DEFAULT_LIMIT) -> list[Permutation]:
    """All elements of ``group``, identity first, breadth-first over right multiplication."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    ident = Permutation.identity(group.degree)
    elements = [ident]
    seen = {ident.images}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in group.generators:
            h = g * s
            if h.images not in seen:
                if len(elements) >= limit:
                    raise GroupTooLarge(f"group has more than {limit} elements")
                seen.add(h.images)
                elements.append(h)
                queue.append(h)
    return elements


@dataclass(frozen=True)
class ConjugacyData:
    elements: tuple[Permutation, ...]
    class_of: tuple[int, ...]
    class_reps: tuple[int, ...]
    class_sizes: tuple[int, ...]
    element_orders: tuple[int, ...]
    exponent: int
    index: dict[tuple[int, ...], int] = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def num_classes(self) -> int:
        return len(self.class_reps)

    def index_of(self, g: Permutation) -> int:
        return self.index[g.images]

    def class_members(self, c: int) -> list[int]:
        return [i for i, k in enumerate(self.class_of) if k == c]


def conjugacy_data(
    elements: Sequence[Permutation], generators: Sequence[Permutation] | None = None
) -> ConjugacyData:
    """Conjugacy classes of the group formed by ``elements``.

    Orbits are taken under conjugation by ``generators`` when given (they must
    generate the group), otherwise by every element.  Classes are numbered by
    their smallest element index, so the identity class comes first provided
    ``elements[0]`` is the identity.
    """
    elements = tuple(elements)
    if not elements or not elements[0].is_identity():
        raise ValueError("elements must start with the identity")
    index = {g.images: i for i, g in enumerate(elements)}
    if len(index) != len(elements):
        raise ValueError("duplicate elements")
    conj_by = list(generators) if generators else list(elements)
    conj_pairs = [(x, x.inverse()) for x in conj_by]
    class_of = [-1] * len(elements)
    reps, sizes = [], []
    for start in range(len(elements)):
        if class_of[start] >= 0:
            continue
        c = len(reps)
        reps.append(start)
        class_of[start] = c
        orbit = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for i in frontier:
                g = elements[i]
                for x, xi in conj_pairs:
                    try:
                        j = index[(x * g * xi).images]
                    except KeyError:
                        raise ValueError("elements are not closed under conjugation") from None
                    if class_of[j] < 0:
                        class_of[j] = c
                        orbit.append(j)
                        nxt.append(j)
            frontier = nxt
        sizes.append(len(orbit))
    orders = tuple(elements[r].order() for r in reps)
    exponent = math.lcm(*orders)
    return ConjugacyData(
        elements=elements,
        class_of=tuple(class_of),
        class_reps=tuple(reps),
        class_sizes=tuple(sizes),
        element_orders=orders,
        exponent=exponent,
        index=index,
    )


def power_map(data: ConjugacyData, k: int) -> tuple[int, ...]:
    """Class of ``g^k`` for each class of ``g``; ``k`` is read modulo the exponent."""
    k %= data.exponent
    out = []
    for r in data.class_reps:
        out.append(data.class_of[data.index[(data.elements[r] ** k).images]])
    return tuple(out)


# -- documents ---------------------------------------------------------------


def group_from_document(doc: Any) -> PermGroup:
    """Parse ``{"type": "permutation", "degree": d, "generators": [[...], ...]}``."""
    if not isinstance(doc, dict):
        raise GroupDocumentError("$", "expected an object")
    if doc.get("type") != "permutation":
        raise GroupDocumentError("$.type", f"expected 'permutation', got {doc.get('type')!r}")
    degree = doc.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise GroupDocumentError("$.degree", "expected a positive integer")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise GroupDocumentError("$.generators", "expected a nonempty list")
    perms = []
    for gi, g in enumerate(gens):
        path = f"$.generators[{gi}]"
        if not isinstance(g, list):
            raise GroupDocumentError(path, "expected a list of images")
        if len(g) != degree:
            raise GroupDocumentError(path, f"expected {degree} images, got {len(g)}")
        for pi, v in enumerate(g):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < degree:
                raise GroupDocumentError(f"{path}[{pi}]", f"image must be an integer in 0..{degree - 1}")
        if len(set(g)) != degree:
            raise GroupDocumentError(path, "images are not a bijection")
        perms.append(Permutation(tuple(g)))
    return PermGroup(degree, tuple(perms))


def group_to_document(group: PermGroup) -> dict:
    return {
        "type": "permutation",
        "degree": group.degree,
        "generators": [list(g.images) for g in group.generators],
    }
