"""Exact linear algebra over Z and F_p.

Matrices are plain lists of rows.  Integer routines use unbounded Python ints
and elementary row/column operations; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "NoSolution",
    "SplitFailure",
    "SmithForm",
    "IntegralSolution",
    "hnf",
    "snf",
    "det",
    "solve_integral",
    "mat_mul",
    "mat_vec",
    "identity",
    "nullspace_mod",
    "common_eigenvectors",
    "poly_roots_mod",
]

Matrix = list[list[int]]


class NoSolution(ValueError):
    pass


class SplitFailure(ArithmeticError):
    pass


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(M: Sequence[Sequence[int]]) -> Matrix:
    return [[int(x) for x in row] for row in M]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row) if a) for j in range(cols)] for row in A]


def mat_vec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


# -- Hermite / Smith ---------------------------------------------------------


def hnf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H == U @ M``, ``U`` unimodular, ``H`` in row echelon
    form with positive pivots and entries above each pivot reduced into
    ``[0, pivot)``.  Zero rows sit at the bottom.
    """
    H = _copy(M)
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclid down column c until a single nonzero entry remains at row r
        while True:
            nz = [i for i in range(r, m) if H[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(H[i][c]), i))
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if not H[r][c]:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors ``d1 | d2 | ... | d_r`` of an ``rows x cols`` matrix."""

    factors: tuple[int, ...]
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d != 1)

    @property
    def cokernel_free_rank(self) -> int:
        return self.rows - self.rank

    @property
    def kernel_rank(self) -> int:
        return self.cols - self.rank


def snf(M: Sequence[Sequence[int]]) -> SmithForm:
    A = _copy(M)
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        changed = True
            if not changed:
                # pivot must divide the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                changed = True
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, pi, pj = min(cands)
            if pi != t:
                A[t], A[pi] = A[pi], A[t]
            if pj != t:
                for row in A:
                    row[t], row[pj] = row[pj], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return SmithForm(tuple(diag), m, n)


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    A = _copy(M)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        akk = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


# -- integral systems --------------------------------------------------------


@dataclass(frozen=True)
class IntegralSolution:
    particular: tuple[int, ...]
    kernel_basis: tuple[tuple[int, ...], ...]


def solve_integral(M: Sequence[Sequence[int]], b: Sequence[int]) -> IntegralSolution:
    """All integer ``x`` with ``M x = b``: ``particular + Z-span(kernel_basis)``.

    Raises NoSolution when no integral solution exists, even if rational ones do.
    """
    rows = len(M)
    if len(b) != rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {rows}")
    cols = len(M[0]) if rows else 0
    if cols == 0:
        if any(b):
            raise NoSolution("no unknowns and nonzero right-hand side")
        return IntegralSolution((), ())
    MT = [[M[i][j] for i in range(rows)] for j in range(cols)]
    H, U = hnf(MT)
    # M = H^T U^{-T}; substitute x = U^T y and solve H^T y = b by forward substitution
    y = []
    residual = [int(v) for v in b]
    rank = 0
    for i in range(cols):
        row = H[i]
        c = next((j for j, a in enumerate(row) if a), None)
        if c is None:
            break
        q, rem = divmod(residual[c], row[c])
        if rem:
            raise NoSolution(f"no integral solution (pivot {row[c]} does not divide {residual[c]})")
        y.append(q)
        residual = [r - q * a for r, a in zip(residual, row)]
        rank += 1
    if any(residual):
        raise NoSolution("inconsistent system")
    particular = [0] * cols
    for i, yi in enumerate(y):
        if yi:
            particular = [p + yi * u for p, u in zip(particular, U[i])]
    kernel = U[rank:]
    if kernel:
        K, _ = hnf(kernel)
        kernel = [r for r in K if any(r)]
    return IntegralSolution(tuple(particular), tuple(tuple(r) for r in kernel))


# -- F_p linear algebra ------------------------------------------------------


def _rref_mod(A: Matrix, p: int) -> tuple[Matrix, list[int]]:
    A = [[x % p for x in row] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def nullspace_mod(A: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> list[list[int]]:
    """Basis of ``{x : A x = 0}`` over F_p, one vector per free column."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    R, pivots = _rref_mod([list(r) for r in A], p) if A else ([], [])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-R[i][f]) % p
        basis.append(v)
    return basis


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * inv) % p
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return _poly_trim(q), _poly_trim(a[: len(b) - 1])


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_divmod(_poly_trim(prod), f, p)[1]


def _poly_powmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_divmod(base, f, p)[1]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(x * inv) % p for x in a]
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _poly_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def poly_roots_mod(f: Sequence[int], p: int) -> list[int]:
    """Distinct roots in F_p of ``f`` (coefficients low -> high), sorted."""
    f = _poly_trim([x % p for x in f])
    if len(f) <= 1:
        return []
    roots = []
    if f[0] == 0:
        roots.append(0)
    # product of (x - a) over the nonzero roots
    xp = _poly_powmod([0, 1], p - 1, f, p)
    g = _poly_gcd(f, _poly_sub(xp, [1], p), p)
    stack = [g]
    while stack:
        h = stack.pop()
        d = len(h) - 1
        if d <= 0:
            continue
        if d == 1:
            roots.append((-h[0] * pow(h[1], -1, p)) % p)
            continue
        if p == 2:
            raise SplitFailure("cannot split over F_2")
        # deterministic equal-degree splitting with shifts a = 0, 1, 2, ...
        for a in range(p):
            s = _poly_powmod([a, 1], (p - 1) // 2, h, p)
            k = _poly_gcd(h, _poly_sub(s, [1], p), p)
            if 0 < len(k) - 1 < d:
                stack.append(k)
                stack.append(_poly_divmod(h, k, p)[0])
                break
        else:
            raise SplitFailure("polynomial did not split")
    return sorted(roots)


def _charpoly_mod(A: Matrix, p: int) -> list[int]:
    """Characteristic polynomial det(xI - A) over F_p via Hessenberg reduction."""
    n = len(A)
    H = [[x % p for x in row] for row in A]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if H[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            H[j + 1], H[piv] = H[piv], H[j + 1]
            for row in H:
                row[j + 1], row[piv] = row[piv], row[j + 1]
        inv = pow(H[j + 1][j], -1, p)
        for i in range(j + 2, n):
            f = (H[i][j] * inv) % p
            if f:
                H[i] = [(a - f * b) % p for a, b in zip(H[i], H[j + 1])]
                for row in H:
                    row[j + 1] = (row[j + 1] + f * row[i]) % p
    # polys[k] = charpoly of leading k x k block
    polys = [[1]]
    for k in range(n):
        nxt = _poly_sub([0] + polys[k], [(H[k][k] * c) % p for c in polys[k]], p)
        prod = 1
        for i in range(k - 1, -1, -1):
            prod = (prod * H[i + 1][i]) % p
            coef = (prod * H[i][k]) % p
            if coef:
                nxt = _poly_sub(nxt, [(coef * c) % p for c in polys[i]], p)
        polys.append(nxt or [0])
    return polys[n]


def _restrict(M: Matrix, basis: list[list[int]], p: int) -> Matrix:
    """Matrix of ``M`` on the invariant subspace spanned by ``basis`` (columns)."""
    d = len(basis)
    n = len(M)
    images = [[sum(M[r][c] * v[c] for c in range(n)) % p for r in range(n)] for v in basis]
    # solve basis @ X = images columnwise; augment [B | MB]
    aug = [[basis[t][r] for t in range(d)] + [images[t][r] for t in range(d)] for r in range(n)]
    R, pivots = _rref_mod(aug, p)
    if pivots[:d] != list(range(d)) or any(c >= d for c in pivots):
        raise SplitFailure("subspace is not invariant")
    return [[R[i][d + t] for t in range(d)] for i in range(d)]


def common_eigenvectors(
    mats: Sequence[Sequence[Sequence[int]]], p: int, require_split: bool = False
) -> list[list[int]]:
    """Split F_p^n into common eigenspaces of commuting matrices.

    Returns a basis adapted to the decomposition, each vector normalized so its
    first nonzero coordinate is 1.  A common eigenspace of dimension above one
    contributes its reduced echelon basis; with ``require_split`` that case
    raises SplitFailure instead.  Order is deterministic: spaces are refined
    matrix by matrix, eigenvalues taken in increasing order.
    """
    if not mats:
        raise ValueError("need at least one matrix")
    n = len(mats[0])
    spaces = [[[int(i == j) for i in range(n)] for j in range(n)]]
    for M in mats:
        M = [[x % p for x in row] for row in M]
        refined = []
        for basis in spaces:
            d = len(basis)
            if d == 1:
                refined.append(basis)
                continue
            A = _restrict(M, basis, p)
            lams = poly_roots_mod(_charpoly_mod(A, p), p)
            pieces = []
            for lam in lams:
                shifted = [[(A[i][j] - (lam if i == j else 0)) % p for j in range(d)] for i in range(d)]
                coords = nullspace_mod(shifted, p, d)
                pieces.append(
                    [[sum(c[t] * basis[t][r] for t in range(d)) % p for r in range(n)] for c in coords]
                )
            if sum(len(x) for x in pieces) != d:
                raise SplitFailure("matrix is not diagonalizable on a common eigenspace")
            refined.extend(pieces)
        spaces = refined
        if all(len(b) == 1 for b in spaces):
            break
    if require_split and any(len(b) != 1 for b in spaces):
        raise SplitFailure("common eigenspaces are not one-dimensional")
    out = []
    for basis in spaces:
        if len(basis) > 1:
            basis, _ = _rref_mod([list(v) for v in basis], p)
            basis = [v for v in basis if any(v)]
        for v in basis:
            out.append(_normalize_mod(v, p))
    return out


def _normalize_mod(v: list[int], p: int) -> list[int]:
    lead = next(x for x in v if x)
    inv = pow(lead, -1, p)
    return [(x * inv) % p for x in v]
