"""
Finite quotients of the ``(2n, 2n, n)`` triangle groups.

A quotient is a finite group with two generators ``a, b`` of exact order
``2n`` whose product has exact order ``n``.  Its left regular
representation gives cut permutations ``sigma_1 = a``, ``sigma_3 = b`` (with
``sigma_2, sigma_4`` their inverses) for a grid cover in which every puncture
unwraps a divisor of ``n`` times.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .cover import PermCover, grid_cover
from .exact_algebra import FiniteGroupTable, Perm, left_regular_representation

DEFAULT_CAP = 10_000


class SearchExhausted(RuntimeError):
    """No quotient found within the search budget."""


@dataclass(frozen=True)
class QuotientCertificate:
    n: int
    group: FiniteGroupTable
    a: int  # element indices in the table
    b: int
    source: str  # "cyclic", "SL(2,p)", "GL(2,p)" or "S_k"
    prime: int | None = None
    a_label: str = ""
    b_label: str = ""

    @property
    def order(self) -> int:
        return len(self.group)

    def verified_orders(self) -> tuple[int, int, int]:
        G = self.group
        return (G.order_of(self.a), G.order_of(self.b),
                G.order_of(G.multiply(self.a, self.b)))

    def verify(self) -> bool:
        n = self.n
        if self.verified_orders() != (2 * n, 2 * n, n):
            return False
        gen = FiniteGroupTable.generated_by([self.a, self.b], self.group.multiply,
                                            self.group.identity, cap=len(self.group) + 1)
        return len(gen) == len(self.group)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "group_order": self.order,
            "source": self.source,
            "prime": self.prime,
            "a": self.a_label or str(self.group.elements[self.a]),
            "b": self.b_label or str(self.group.elements[self.b]),
            "verified_orders": list(self.verified_orders()),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# -- 2x2 matrices mod p, stored as (a, b, c, d) ------------------------------

def _mat_mul(p: int):
    def mul(m, n):
        a, b, c, d = m
        e, f, g, h = n
        return ((a * e + b * g) % p, (a * f + b * h) % p,
                (c * e + d * g) % p, (c * f + d * h) % p)
    return mul


def _mat_label(m) -> str:
    return f"[[{m[0]}, {m[1]}], [{m[2]}, {m[3]}]]"


def _order(x, mul, identity, limit: int) -> int | None:
    k, y = 1, x
    while y != identity:
        if k >= limit:
            return None
        y = mul(y, x)
        k += 1
    return k


def _primes():
    p = 2
    while True:
        if all(p % q for q in range(2, int(p ** 0.5) + 1)):
            yield p
        p += 1


def _certificate(n, gens, mul, identity, cap, source, prime, labels):
    G = FiniteGroupTable.generated_by(gens, mul, identity, cap)
    cert = QuotientCertificate(n, G, G.index(gens[0]), G.index(gens[1]),
                               source, prime, *labels)
    if not cert.verify():
        raise AssertionError("quotient certificate failed re-verification")
    return cert


def _matrix_search(n, budget, seed, cap, min_order, max_prime):
    rng = random.Random(seed)
    tried = []
    attempts = 0
    for p in _primes():
        if p > max_prime or attempts >= budget:
            break
        tried.append(p)
        mul = _mat_mul(p)
        one = (1, 0, 0, 1)
        # |GL(2,p)| bounds every element order by p^2 - 1
        limit = p * p
        per_prime = max(1, budget // 8)
        best = None
        for _ in range(per_prime):
            if attempts >= budget:
                break
            attempts += 1
            ms = []
            for _ in range(2):
                while True:
                    m = tuple(rng.randrange(p) for _ in range(4))
                    if (m[0] * m[3] - m[1] * m[2]) % p:
                        break
                ms.append(m)
            x, y = ms
            if _order(x, mul, one, limit) != 2 * n or _order(y, mul, one, limit) != 2 * n:
                continue
            if _order(mul(x, y), mul, one, limit) != n:
                continue
            det1 = all((m[0] * m[3] - m[1] * m[2]) % p == 1 for m in ms)
            # only keep strictly smaller groups than the best so far
            bound = cap if best is None else min(cap, best.order - 1)
            try:
                cert = _certificate(n, [x, y], mul, one, bound,
                                    "SL(2,p)" if det1 else "GL(2,p)", p,
                                    (_mat_label(x), _mat_label(y)))
            except OverflowError:
                continue
            if cert.order >= min_order:
                best = cert
        if best is not None:
            return best
    raise SearchExhausted(f"no ({2 * n},{2 * n},{n}) quotient found; primes tried {tried}")


def _symmetric_search(n, cap, min_order, max_degree=8):
    for k in range(2, max_degree + 1):
        ident = Perm.identity(k)
        elems = [Perm(q) for q in itertools.permutations(range(1, k + 1))]
        good = [e for e in elems if e.order() == 2 * n]
        for x in good:
            for y in good:
                if (x * y).order() != n:
                    continue
                try:
                    cert = _certificate(n, [x, y], lambda u, v: u * v, ident, cap,
                                        f"S_{k}", None, (str(x), str(y)))
                except OverflowError:
                    continue
                if cert.order >= min_order:
                    return cert
    raise SearchExhausted(f"no ({2 * n},{2 * n},{n}) quotient in S_k, k <= {max_degree}")


def find_triangle_quotient(n: int, budget: int = 20_000, seed: int = 0,
                           cap: int = DEFAULT_CAP, min_order: int = 1,
                           max_prime: int = 97) -> QuotientCertificate:
    """A verified quotient with generator orders ``(2n, 2n, n)``.

    ``n = 2`` returns the cyclic group of order 4 with ``a = b``.  Otherwise
    random pairs of invertible 2x2 matrices over increasing primes are tried
    with a seeded generator, and the smallest group of order at least
    ``min_order`` met at the first successful prime is returned.
    For ``n <= 3`` permutation groups of degree at most 8 are the fallback.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n == 2 and min_order <= 4:
        G = FiniteGroupTable.cyclic(4)
        return QuotientCertificate(2, G, 1, 1, "cyclic", None, "1 mod 4", "1 mod 4")
    try:
        return _matrix_search(n, budget, seed, cap, min_order, max_prime)
    except SearchExhausted as first:
        if n > 3:
            raise
        try:
            return _symmetric_search(n, cap, min_order)
        except SearchExhausted:
            raise first from None


def cut_permutations(cert: QuotientCertificate) -> list[Perm]:
    a = left_regular_representation(cert.group, cert.a)
    b = left_regular_representation(cert.group, cert.b)
    return [a, a.inverse(), b, b.inverse()]


def case2_cover(cert: QuotientCertificate) -> PermCover:
    """Grid cover with ``sigma = (a, a^-1, b, b^-1)`` in the regular
    representation; degree ``4 |G|``."""
    c = grid_cover(cert.order, cut_permutations(cert))
    object.__setattr__(c, "name", f"case2(n={cert.n}, |G|={cert.order})")
    return c


def case2_certificates(cert: QuotientCertificate) -> dict:
    """Cycle counts of ``sigma_1, sigma_3, sigma_1 sigma_3``, the genus of the
    row-2 subsurface and the lower bound ``2 + N (1 - 2/n)``."""
    s1, _, s3, _ = cut_permutations(cert)
    N = cert.order
    counts = (len(s1.cycles()), len(s3.cycles()), len((s1 * s3).cycles()))
    twice = 2 + N - sum(counts)
    if twice % 2:
        raise AssertionError("odd Euler characteristic count for the row-2 subsurface")
    return {
        "n": cert.n,
        "group_order": N,
        "cycle_counts": counts,
        "genus_row2": twice // 2,
        "dim_bound": 2 + N * (1 - Fraction(2, cert.n)),
    }
