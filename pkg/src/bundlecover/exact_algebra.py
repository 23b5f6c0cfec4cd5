"""
Exact integer/rational linear algebra and permutation primitives.

Everything here works with Python integers and :class:`fractions.Fraction`;
there is no floating point anywhere.  Matrices are plain lists of rows.

Permutations act on ``{1, ..., d}`` from the right: ``p * q`` means "apply
``p`` first, then ``q``", which is the order in which a word of generators
is read along a path in a cover.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from functools import reduce
from typing import Callable, Hashable, Iterable, Sequence

Matrix = list  # list of rows; entries int or Fraction


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------

class Perm:
    """A bijection of ``{1, ..., degree}``.

    ``images[i - 1]`` is the image of the point ``i``.

    >>> p = Perm.from_cycles("(1 2 3 4)", 4)
    >>> (p * p).cycles()
    [[1, 3], [2, 4]]
    >>> str(p.inverse())
    '(1 4 3 2)'
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        d = len(images)
        if d == 0:
            raise ValueError("a permutation needs degree >= 1")
        if sorted(images) != list(range(1, d + 1)):
            raise ValueError(f"not a bijection of 1..{d}: {images}")
        self.images = images
        self._hash = hash(images)

    # construction --------------------------------------------------------
    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(1, degree + 1))

    @classmethod
    def from_cycles(cls, cycles, degree: int | None = None) -> "Perm":
        """Build from cycle notation.

        ``cycles`` is either a string like ``"(1 2 3)(4 5)"`` or a list of
        point lists.  Points not mentioned are fixed; ``degree`` defaults to
        the largest point mentioned.
        """
        if isinstance(cycles, str):
            cycles = parse_cycles(cycles)
        cycles = [list(c) for c in cycles]
        top = max((max(c) for c in cycles if c), default=1)
        if degree is None:
            degree = top
        if top > degree:
            raise ValueError(f"point {top} exceeds degree {degree}")
        img = list(range(1, degree + 1))
        seen = set()
        for c in cycles:
            for a in c:
                if a < 1 or a in seen:
                    raise ValueError(f"cycles are not disjoint or point {a} invalid")
                seen.add(a)
            for k, a in enumerate(c):
                img[a - 1] = c[(k + 1) % len(c)]
        return cls(img)

    @classmethod
    def random(cls, degree: int, rng: random.Random) -> "Perm":
        img = list(range(1, degree + 1))
        rng.shuffle(img)
        return cls(img)

    # basic protocol ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        if not isinstance(other, Perm):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Perm(o[i - 1] for i in self.images)

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Perm.from_cycles({str(self)!r}, {self.degree})"

    def __str__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, start=1))

    def cycles(self) -> list[list[int]]:
        return perm_cycles(self)

    def order(self) -> int:
        return reduce(_lcm, (len(c) for c in self.cycles()), 1)

    def commutes_with(self, other: "Perm") -> bool:
        return self * other == other * self


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    """Parse ``"(1 2 3)(4 5)"`` into ``[[1, 2, 3], [4, 5]]``.

    Points may be separated by whitespace or commas.  ``"()"`` and the
    empty string denote the identity.
    """
    stripped = text.strip()
    if stripped in ("", "()", "id", "e"):
        return []
    rest = _CYCLE_RE.sub("", stripped).strip()
    if rest:
        raise ValueError(f"malformed cycle notation near {rest!r} in {text!r}")
    cycles = []
    for m in _CYCLE_RE.finditer(stripped):
        body = m.group(1).replace(",", " ").split()
        try:
            pts = [int(b) for b in body]
        except ValueError:
            raise ValueError(f"non-integer point in cycle ({m.group(1)}) of {text!r}") from None
        if pts:
            cycles.append(pts)
    return cycles


def perm_cycles(p: Perm) -> list[list[int]]:
    """Disjoint cycles of ``p``, fixed points included as 1-cycles.

    Each cycle starts at its smallest point; cycles are sorted by that point.
    """
    seen = [False] * (p.degree + 1)
    out = []
    for start in range(1, p.degree + 1):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = p(i)
        out.append(cyc)
    return out


def random_commuting(p: Perm, rng: random.Random) -> Perm:
    """A uniformly random element of the centralizer of ``p``.

    Centralizing permutations map cycles to cycles of the same length,
    matching points up to a rotation; choosing the matching and the
    rotations uniformly gives the uniform distribution.
    """
    by_len: dict[int, list[list[int]]] = {}
    for c in p.cycles():
        by_len.setdefault(len(c), []).append(c)
    img = [0] * p.degree
    for L, cycs in by_len.items():
        targets = cycs[:]
        rng.shuffle(targets)
        for src, dst in zip(cycs, targets):
            shift = rng.randrange(L)
            for k in range(L):
                img[src[k] - 1] = dst[(k + shift) % L]
    return Perm(img)


def random_transitive(degree: int, count: int, rng: random.Random) -> list[Perm]:
    """``count`` random permutations generating a transitive group."""
    while True:
        ps = [Perm.random(degree, rng) for _ in range(count)]
        if len(orbits(ps, degree)) == 1:
            return ps


def orbits(perms: Sequence[Perm], degree: int) -> list[list[int]]:
    """Orbits of the group generated by ``perms`` on ``{1..degree}``."""
    seen = [False] * (degree + 1)
    out = []
    for start in range(1, degree + 1):
        if seen[start]:
            continue
        seen[start] = True
        orb = [start]
        k = 0
        while k < len(orb):
            i = orb[k]
            k += 1
            for p in perms:
                j = p(i)
                if not seen[j]:
                    seen[j] = True
                    orb.append(j)
        out.append(sorted(orb))
    return out


# ---------------------------------------------------------------------------
# Finite groups given by multiplication tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group as labels plus a multiplication table.

    ``mult[i][j]`` is the index of ``elements[i] * elements[j]``.
    """

    elements: tuple
    mult: tuple
    identity: int

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise KeyError(f"unknown element {label!r}") from None

    def multiply(self, i: int, j: int) -> int:
        return self.mult[i][j]

    def power(self, i: int, k: int) -> int:
        r = self.identity
        for _ in range(k):
            r = self.mult[r][i]
        return r

    def order_of(self, i: int) -> int:
        k, r = 1, i
        while r != self.identity:
            r = self.mult[r][i]
            k += 1
        return k

    def inverse_of(self, i: int) -> int:
        row = self.mult[i]
        for j, v in enumerate(row):
            if v == self.identity:
                return j
        raise ValueError("element has no inverse; table is not a group")

    def check_axioms(self, samples: int = 200, seed: int = 0) -> bool:
        n = len(self)
        e = self.identity
        for i in range(n):
            if self.mult[e][i] != i or self.mult[i][e] != i:
                return False
            row = self.mult[i]
            if sorted(row) != list(range(n)):
                return False
        rng = random.Random(seed)
        for _ in range(samples):
            a, b, c = (rng.randrange(n) for _ in range(3))
            m = self.mult
            if m[m[a][b]][c] != m[a][m[b][c]]:
                return False
        return True

    @classmethod
    def generated_by(
        cls,
        gens: Sequence[Hashable],
        mul: Callable[[Hashable, Hashable], Hashable],
        identity: Hashable,
        cap: int = 10_000,
    ) -> "FiniteGroupTable":
        """Close ``gens`` under ``mul`` and tabulate the group.

        Raises ``OverflowError`` if the group has more than ``cap`` elements.
        """
        elements = [identity]
        index = {identity: 0}
        k = 0
        while k < len(elements):
            a = elements[k]
            k += 1
            for g in gens:
                b = mul(a, g)
                if b not in index:
                    if len(elements) >= cap:
                        raise OverflowError(f"group exceeds cap of {cap} elements")
                    index[b] = len(elements)
                    elements.append(b)
        mult = tuple(
            tuple(index[mul(a, b)] for b in elements) for a in elements
        )
        return cls(tuple(elements), mult, 0)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroupTable":
        return cls(
            tuple(range(n)),
            tuple(tuple((i + j) % n for j in range(n)) for i in range(n)),
            0,
        )


def left_regular_representation(G: FiniteGroupTable, g) -> Perm:
    """Left translation ``h -> g h`` as a permutation of ``{1..|G|}``.

    ``g`` may be an element label or an integer index; element ``k`` of the
    table is the point ``k + 1``.
    """
    if g in G.elements:
        i = G.index(g)
    elif isinstance(g, int) and 0 <= g < len(G):
        i = g
    else:
        raise KeyError(f"unknown element {g!r}")
    row = G.mult[i]
    return Perm(row[h] + 1 for h in range(len(G)))


# ---------------------------------------------------------------------------
# Rational linear algebra
# ---------------------------------------------------------------------------

def _to_sparse_rows(M: Matrix) -> list[dict]:
    rows = []
    for row in M:
        rows.append({j: Fraction(v) for j, v in enumerate(row) if v != 0})
    return rows


def _eliminate(rows: list[dict], ncols: int, full: bool) -> list[tuple[int, dict]]:
    """Gaussian elimination on sparse rows.

    Returns ``(pivot column, row)`` pairs.  With ``full`` the result is the
    reduced row echelon form with unit pivots.
    """
    pivots: list[tuple[int, dict]] = []
    pivot_of: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        # reduce against existing pivots
        changed = True
        while row and changed:
            changed = False
            for c in sorted(row):
                if c in pivot_of:
                    prow = pivot_of[c]
                    f = row[c]
                    for k, v in prow.items():
                        nv = row.get(k, 0) - f * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    changed = True
                    break
        if not row:
            continue
        c = min(row)
        inv = 1 / row[c]
        row = {k: v * inv for k, v in row.items()}
        if full:
            for _, prow in pivots:
                f = prow.get(c)
                if f:
                    for k, v in row.items():
                        nv = prow.get(k, 0) - f * v
                        if nv:
                            prow[k] = nv
                        else:
                            prow.pop(k, None)
        pivots.append((c, row))
        pivot_of[c] = row
    pivots.sort(key=lambda t: t[0])
    return pivots


def _integer_rows(M: Matrix) -> list[dict]:
    rows = []
    for row in M:
        fr = [Fraction(v) for v in row]
        den = 1
        for v in fr:
            if v.denominator != 1:
                den = den * v.denominator // gcd(den, v.denominator)
        rows.append({j: int(v * den) for j, v in enumerate(fr) if v})
    return rows


def rational_rank(M: Matrix) -> int:
    """Rank of ``M`` over the rationals.

    Rows are cleared of denominators and eliminated with integer row
    operations, dividing each new row by the gcd of its entries.
    """
    if not M or not M[0]:
        return 0
    pivots: dict[int, dict] = {}
    for row in _integer_rows(M):
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                pivots[c] = {k: v // g for k, v in row.items()}
                break
            a, b = prow[c], row[c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {}
            for k in set(row) | set(prow):
                v = fa * row.get(k, 0) - fb * prow.get(k, 0)
                if v:
                    new[k] = v
            row = new
    return len(pivots)


def rref(M: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    ncols = len(M[0]) if M else 0
    piv = _eliminate(_to_sparse_rows(M), ncols, full=True)
    out = [[row.get(j, Fraction(0)) for j in range(ncols)] for _, row in piv]
    return out, [c for c, _ in piv]


def nullspace(M: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}``, one vector per free column."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    piv = _eliminate(_to_sparse_rows(M), ncols, full=True)
    pivcols = {c for c, _ in piv}
    basis = []
    for free in range(ncols):
        if free in pivcols:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for c, row in piv:
            f = row.get(free)
            if f:
                v[c] = -f
        basis.append(v)
    return basis


def solve_linear(M: Matrix, b: Sequence, ncols: int | None = None) -> list[Fraction] | None:
    """One rational solution of ``M v = b`` (free variables set to 0), or
    None when the system is inconsistent."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    aug = [list(row) + [rhs] for row, rhs in zip(M, b)]
    piv = _eliminate(_to_sparse_rows(aug), ncols + 1, full=True)
    v = [Fraction(0)] * ncols
    for c, row in piv:
        if c == ncols:
            return None
        v[c] = row.get(ncols, Fraction(0))
    return v


def primitive_integer_vector(v: Sequence) -> list[int]:
    """Smallest integer multiple of a rational vector with coprime entries."""
    from math import gcd, lcm
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    n = len(B[0]) if B else 0
    # row-by-row accumulation skips zero entries on both sides
    Bs = [[(j, b) for j, b in enumerate(row) if b] for row in B]
    out = []
    for row in A:
        acc = [0] * n
        for k, a in enumerate(row):
            if a:
                for j, b in Bs[k]:
                    acc[j] += a * b
        out.append(acc)
    return out


def matvec(A: Matrix, v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v) if a and b) for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def determinant(A: Matrix) -> Fraction:
    """Exact determinant by fraction elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def fixed_subspace(A: Matrix) -> list[list[Fraction]]:
    """Basis of the kernel of ``A - I``.

    >>> len(fixed_subspace([[1, 1], [0, 1]]))
    1
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("fixed_subspace needs a square matrix")
    shifted = [[A[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    return nullspace(shifted, n)


def in_span(vectors: Sequence[Sequence], w: Sequence) -> bool:
    if not vectors:
        return all(x == 0 for x in w)
    return rational_rank(list(vectors) + [list(w)]) == rational_rank(list(vectors))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_decomposition(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U M V = D`` in Smith normal form.

    ``U`` and ``V`` are unimodular integer matrices.
    """
    return _smith(M, transforms=True)


def smith_normal_form(M: Matrix) -> tuple[list[int], int]:
    """Elementary divisors of an integer matrix and its rank.

    The diagonal has ``min(rows, cols)`` non-negative entries with
    ``d1 | d2 | ...``; zeros come last.

    >>> smith_normal_form([[2, 0], [0, 3]])
    ([1, 6], 2)
    """
    _, D, _ = _smith(M, transforms=False)
    k = min(len(D), len(D[0]) if D else 0)
    diag = [abs(D[i][i]) for i in range(k)]
    return diag, sum(1 for x in diag if x)


def _smith(M: Matrix, transforms: bool):
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    for row in M:
        for x in row:
            if int(x) != x:
                raise ValueError("Smith normal form needs integer entries")
    U = identity_matrix(m) if transforms else None
    V = identity_matrix(n) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row dst += f * row src
        if f:
            rs, rd = A[src], A[dst]
            for k in range(n):
                if rs[k]:
                    rd[k] += f * rs[k]
            if transforms:
                us, ud = U[src], U[dst]
                for k in range(m):
                    if us[k]:
                        ud[k] += f * us[k]

    def add_col(src, dst, f):  # col dst += f * col src
        if f:
            for row in A:
                if row[src]:
                    row[dst] += f * row[src]
            if transforms:
                for row in V:
                    if row[src]:
                        row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        # pick the nonzero entry of least absolute value in the trailing block
        best = None
        for i in range(t, m):
            for j, x in enumerate(A[i][t:], start=t):
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if not dirty:
                # divisibility: pivot must divide the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest nonzero of row/column t into the pivot
            best = (abs(A[t][t]), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if transforms:
                U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def is_unimodular(M: Matrix) -> bool:
    return len(M) == len(M[0]) and abs(determinant(M)) == 1
