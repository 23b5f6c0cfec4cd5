"""
Punctured surfaces as one-vertex ribbon graphs and their finite covers.

A :class:`FatSurface` is a rose with a cyclic order of half-edges at its
single vertex.  The half-edge ``(g, +1)`` is the start of generator ``g``
and ``(g, -1)`` its end.  The rotation lists half-edges counter-clockwise;
boundary components are traced by leaving along a half-edge, arriving at the
far end, and leaving again along the counter-clockwise successor.

A :class:`PermCover` is given by one permutation of the sheets
``{1..d}`` per generator.  Paths are read left to right, so a word ``w``
moves sheet ``s`` to ``phi(w)(s)`` with ``phi(uv) = phi(u) * phi(v)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Sequence

from .exact_algebra import Perm, orbits
from .fpgroup import (
    FreeAut,
    FreeWord,
    NotAnAutomorphism,
    SchreierTree,
    torus_boundary_words,
    torus_names,
)

MANIFOLD = "MANIFOLD"
BOUNDARY_CONVENTION = "[x,y] = x y X Y"


class FillError(ValueError):
    """A puncture's unwrapping degree does not divide the cone order."""


class NoLiftingPower(RuntimeError):
    """No power of the monodromy up to the bound lifts to the cover."""


# ---------------------------------------------------------------------------
# Base surfaces
# ---------------------------------------------------------------------------

def trace_faces(rank: int, rotation: Sequence[tuple[int, int]]) -> list[tuple[int, ...]]:
    """Boundary words (signed 1-based letters) of a one-vertex ribbon graph."""
    rotation = [tuple(h) for h in rotation]
    if sorted(rotation) != sorted((g, e) for g in range(rank) for e in (1, -1)):
        raise ValueError("rotation must list every half-edge exactly once")
    pos = {h: i for i, h in enumerate(rotation)}
    L = len(rotation)
    seen = set()
    faces = []
    for h0 in rotation:
        if h0 in seen:
            continue
        word = []
        h = h0
        while h not in seen:
            seen.add(h)
            g, e = h
            word.append((g + 1) * e)
            arrive = (g, -e)
            h = rotation[(pos[arrive] + 1) % L]
        faces.append(tuple(word))
    return faces


def _same_cyclic_word(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    aa = tuple(a) + tuple(a)
    return any(aa[i:i + len(b)] == tuple(b) for i in range(len(a)))


@dataclass(frozen=True)
class FatSurface:
    """A punctured surface with free fundamental group on ``names``."""

    names: tuple
    rotation: tuple
    boundary: tuple = ()
    label: str = ""

    def __post_init__(self):
        faces = trace_faces(len(self.names), self.rotation)
        if not self.boundary:
            object.__setattr__(self, "boundary",
                               tuple(FreeWord(f, self.names) for f in faces))
        else:
            declared = [w.letters for w in self.boundary]
            unmatched = list(faces)
            for w in declared:
                hit = next((f for f in unmatched if _same_cyclic_word(f, w)), None)
                if hit is None:
                    raise ValueError(f"declared boundary word {w} is not a traced face")
                unmatched.remove(hit)
            if unmatched:
                raise ValueError("declared boundary words miss some faces")
        chi = 1 - self.rank
        twice_genus = 2 - chi - self.punctures
        if twice_genus < 0 or twice_genus % 2:
            raise ValueError("inconsistent Euler characteristic")

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def punctures(self) -> int:
        return len(self.boundary)

    @property
    def euler_characteristic(self) -> int:
        return 1 - self.rank

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic - self.punctures) // 2

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "generators": list(self.names),
            "rotation": [[self.names[g], e] for g, e in self.rotation],
            "boundary": [str(w) for w in self.boundary],
            "genus": self.genus,
            "punctures": self.punctures,
        }


def punctured_torus(k: int = 1) -> FatSurface:
    """Torus with ``k`` punctures; generators ``x, y, z1..z_{k-1}``.

    Boundary words are ``z_j`` and ``Z_{k-1} ... Z_1 x y X Y``.
    """
    names = torus_names(k)
    # counter-clockwise: y_out, (z_j in, z_j out for j = k-1..1), x_out, y_in, x_in
    rot = [(1, 1)]
    for j in range(k - 1, 0, -1):
        rot += [(1 + j, -1), (1 + j, 1)]
    rot += [(0, 1), (1, -1), (0, -1)]
    return FatSurface(names, tuple(rot), tuple(torus_boundary_words(k)),
                      "punctured torus" if k == 1 else f"{k}-punctured torus")


# ---------------------------------------------------------------------------
# Covers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PunctureLift:
    base_index: int  # which base boundary word (0-based)
    word: str
    cycle: tuple
    degree: int  # unwrapping degree

    def to_dict(self) -> dict:
        return {"base": self.base_index, "word": self.word,
                "cycle": list(self.cycle), "degree": self.degree}


@dataclass(frozen=True)
class PermCover:
    """A finite connected cover of a :class:`FatSurface`."""

    base: FatSurface
    perms: tuple
    basepoint: int = 1
    labels: tuple | None = field(default=None, compare=False)
    name: str = field(default="", compare=False)
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        perms = tuple(self.perms)
        object.__setattr__(self, "perms", perms)
        if len(perms) != self.base.rank:
            raise ValueError(f"need {self.base.rank} permutations, got {len(perms)}")
        d = perms[0].degree
        if any(p.degree != d for p in perms):
            raise ValueError("permutations have different degrees")
        orb = orbits(list(perms), d)
        if len(orb) > 1:
            raise ValueError(f"representation is not transitive; orbits {orb}")
        if self.labels is not None and len(self.labels) != d:
            raise ValueError("need one label per sheet")

    @property
    def degree(self) -> int:
        return self.perms[0].degree

    @property
    def rank(self) -> int:
        return self.base.rank

    @cached_property
    def inverses(self) -> tuple:
        return tuple(p.inverse() for p in self.perms)

    @cached_property
    def tree(self) -> SchreierTree:
        return SchreierTree.build(self.perms, self.basepoint)

    def step(self, s: int, g: int, e: int) -> int:
        return self.perms[g](s) if e > 0 else self.inverses[g](s)

    def word_perm(self, w) -> Perm:
        """Monodromy of a word (FreeWord or letter tuple)."""
        letters = w.letters if isinstance(w, FreeWord) else tuple(w)
        d = self.degree
        img = list(range(1, d + 1))
        for a in letters:
            p = self.perms[a - 1] if a > 0 else self.inverses[-a - 1]
            img = [p(i) for i in img]
        return Perm(img)

    def walk(self, letters: Sequence[int], start: int) -> tuple[list, int]:
        s = start
        steps = []
        for a in letters:
            g, e = abs(a) - 1, (1 if a > 0 else -1)
            steps.append((s, g, e))
            s = self.step(s, g, e)
        return steps, s

    @cached_property
    def puncture_lifts(self) -> tuple:
        out = []
        for bi, w in enumerate(self.base.boundary):
            p = self.word_perm(w)
            for cyc in p.cycles():
                out.append(PunctureLift(bi, str(w), tuple(cyc), len(cyc)))
        return tuple(out)

    @property
    def punctures(self) -> int:
        return len(self.puncture_lifts)

    @property
    def euler_characteristic(self) -> int:
        return self.degree * self.base.euler_characteristic

    @property
    def genus(self) -> int:
        twice = 2 - self.euler_characteristic - self.punctures
        if twice < 0 or twice % 2:
            raise AssertionError("inconsistent Euler characteristic on cover")
        return twice // 2

    @property
    def num_edges(self) -> int:
        return self.degree * self.rank

    def edge_index(self, s: int, g: int) -> int:
        return (s - 1) * self.rank + g

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "degree": self.degree,
            "perms": {n: str(p) for n, p in zip(self.base.names, self.perms)},
            "punctures": [p.to_dict() for p in self.puncture_lifts],
            "genus": self.genus,
            "euler_characteristic": self.euler_characteristic,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def build_cover(base: FatSurface, perms: Sequence[Perm], basepoint: int = 1,
                labels=None, name: str = "") -> PermCover:
    return PermCover(base, tuple(perms), basepoint, labels, name)


def cover_from_dict(d: dict) -> PermCover:
    """Rebuild a cover of a punctured torus from its JSON descriptor."""
    base = d.get("base", {})
    k = base.get("punctures", 1) if isinstance(base, dict) else 1
    if isinstance(base, dict) and base.get("genus", 1) != 1:
        raise ValueError("only covers of punctured tori can be rebuilt")
    surface = punctured_torus(k)
    degree = int(d["degree"])
    perms = []
    for name in surface.names:
        if name not in d["perms"]:
            raise ValueError(f"descriptor has no permutation for generator {name}")
        try:
            perms.append(Perm.from_cycles(d["perms"][name], degree))
        except ValueError as e:
            raise ValueError(f"perms.{name}: {e}") from None
    return PermCover(surface, tuple(perms), 1, None, d.get("name", ""))


def trivial_cover(base: FatSurface) -> PermCover:
    return PermCover(base, tuple(Perm.identity(1) for _ in base.names), 1, None, "trivial")


def pulled_back_cover(base: FatSurface, cover_plus: PermCover, quotient) -> PermCover:
    """Cover of ``base`` induced from a cover of a filled surface along the
    filling homomorphism ``quotient`` (a FreeHom from base's group)."""
    if quotient.source != base.names or quotient.target != cover_plus.base.names:
        raise ValueError("filling map does not match the two surfaces")
    perms = tuple(cover_plus.word_perm(quotient.images[g]) for g in range(base.rank))
    return PermCover(base, perms, cover_plus.basepoint, cover_plus.labels,
                     f"pullback({cover_plus.name})",
                     {"filled_from": cover_plus, "filling": quotient})


# ---------------------------------------------------------------------------
# Grid covers of the punctured torus
# ---------------------------------------------------------------------------

def grid_sheet(i: int, j: int, r: int) -> int:
    """Sheet number of row ``i`` (1..4), column ``j`` (1..r)."""
    return (i - 1) * r + j


def grid_cover(r: int, sigmas: Sequence[Perm], rows: int = 4) -> PermCover:
    """The ``rows * r``-fold cover of the punctured torus cut and glued by
    ``sigmas``.

    ``y`` moves up one row, ``(i, j) -> (i + 1, j)``, and ``x`` moves along
    row ``i`` by the total horizontal monodromy ``sigma_i``.
    """
    sigmas = tuple(sigmas)
    if r < 1:
        raise ValueError("r must be positive")
    if len(sigmas) != rows:
        raise ValueError(f"need {rows} permutations")
    if any(s.degree != r for s in sigmas):
        raise ValueError(f"all sigma_i must have degree {r}")
    d = rows * r
    X = [0] * d
    Y = [0] * d
    for i in range(1, rows + 1):
        for j in range(1, r + 1):
            s = grid_sheet(i, j, r)
            X[s - 1] = grid_sheet(i, sigmas[i - 1](j), r)
            Y[s - 1] = grid_sheet(i % rows + 1, j, r)
    labels = tuple((i, j) for i in range(1, rows + 1) for j in range(1, r + 1))
    return PermCover(punctured_torus(1), (Perm(X), Perm(Y)), 1, labels,
                     "grid(" + ", ".join(map(str, sigmas)) + ")",
                     {"sigmas": sigmas, "r": r, "rows": rows})


def grid_row_monodromies(sigmas: Sequence[Perm]) -> list[Perm]:
    """Boundary monodromy seen from row ``i``: ``sigma_i`` then
    ``sigma_{i+1}^{-1}``."""
    s = list(sigmas)
    n = len(s)
    return [s[i] * s[(i + 1) % n].inverse() for i in range(n)]


def check_lift_conditions(sigmas: Sequence[Perm], n: int = 2) -> dict:
    """Evaluate the lifting and unwrapping conditions on ``sigma_1..sigma_s``.

    ``lemma_lift``: each prefix product commutes with the next sigma and the
    full product is the identity.  ``condition_I``: ``sigma_2 = sigma_1^-1``
    and ``sigma_4 = sigma_3^-1``.  ``condition_II``:
    ``(sigma_i sigma_{i+1}^-1)^n = 1`` for every ``i`` (cyclically).
    """
    s = list(sigmas)
    if len({p.degree for p in s}) != 1:
        raise ValueError("sigmas have different degrees")
    prefix = s[0]
    lemma = True
    for nxt in s[1:]:
        if not prefix.commutes_with(nxt):
            lemma = False
        prefix = prefix * nxt
    lemma = lemma and prefix.is_identity()
    cond1 = len(s) == 4 and s[1] == s[0].inverse() and s[3] == s[2].inverse()
    cond2 = all((m ** n).is_identity() for m in grid_row_monodromies(s))
    return {"lemma_lift": lemma, "condition_I": cond1, "condition_II": cond2, "n": n}


def canonical_twist_x_lift(c: PermCover) -> Perm:
    """The lift of ``Dx`` acting on row ``i`` by ``sigma_1 ... sigma_i``."""
    sigmas = c.meta["sigmas"]
    r = sigmas[0].degree
    rows = len(sigmas)
    img = [0] * c.degree
    prefix = Perm.identity(r)
    for i in range(1, rows + 1):
        prefix = prefix * sigmas[i - 1]
        for j in range(1, r + 1):
            img[grid_sheet(i, j, r) - 1] = grid_sheet(i, prefix(j), r)
    return Perm(img)


def canonical_twist_lift(c: PermCover, word) -> Perm:
    """Lift of a twist word built from the canonical ``Dx`` lift and the
    identity lift of ``Dy^4`` (which exists because ``phi(y)^4 = 1``).

    ``word`` is a list of ``(name, exponent)`` pairs applied right to left,
    so for ``f = a o b`` the lift is ``lam_b * lam_a``.  Raises ValueError
    when some ``Dy`` exponent is not a multiple of the row count.
    """
    rows = c.meta["rows"]
    if not c.perms[1] ** rows == Perm.identity(c.degree):
        raise ValueError("phi(y) does not have order dividing the row count")
    lx = canonical_twist_x_lift(c)
    lam = Perm.identity(c.degree)
    for name, k in word:
        if name == "Dx":
            lam = (lx ** k) * lam
        elif name == "Dy":
            if k % rows:
                raise ValueError(f"Dy^{k} has no canonical lift; exponent must be a multiple of {rows}")
        else:
            raise ValueError(f"unknown twist {name}")
    return lam


# ---------------------------------------------------------------------------
# Boundary behaviour
# ---------------------------------------------------------------------------

def boundary_lifts(c: PermCover) -> list[PunctureLift]:
    return list(c.puncture_lifts)


def orbifold_fill(c: PermCover, n: int):
    """Cone orders after filling each puncture of ``c`` as a lift of an
    order-``n`` cone point; :data:`MANIFOLD` when every order is 1."""
    if n < 2:
        raise ValueError("cone order must be at least 2")
    orders = []
    for p in c.puncture_lifts:
        if n % p.degree:
            raise FillError(
                f"puncture over boundary {p.base_index} unwraps {p.degree} times, "
                f"which does not divide {n}"
            )
        orders.append(n // p.degree)
    if all(o == 1 for o in orders):
        return MANIFOLD
    return orders


def fill_orders(c: PermCover, n: int | None) -> list[int]:
    """Per-puncture cone orders as a list (1 = filled by a disk)."""
    if n is None:
        return [1] * c.punctures
    res = orbifold_fill(c, n)
    return [1] * c.punctures if res == MANIFOLD else list(res)


# ---------------------------------------------------------------------------
# Lifting automorphisms
# ---------------------------------------------------------------------------

def twisted_perms(c: PermCover, f: FreeAut) -> list[Perm]:
    """``phi(f(g))`` for each generator ``g``."""
    if f.names != c.base.names:
        raise ValueError("automorphism and cover use different generators")
    return [c.word_perm(w) for w in f.images]


def _intertwiners(c: PermCover, target: Sequence[Perm], first_only: bool = False) -> list[Perm]:
    """Bijections ``lam`` with ``lam(phi(g)(s)) = target[g](lam(s))``."""
    tree = c.tree
    d = c.degree
    order = [c.basepoint] + [s for s in _bfs_order(tree) if s != c.basepoint]
    tinv = [p.inverse() for p in target]
    out = []
    for cand in range(1, d + 1):
        lam = [0] * (d + 1)
        lam[c.basepoint] = cand
        ok = True
        for s in order[1:]:
            prev, g, e = tree.parent[s]
            lam[s] = target[g](lam[prev]) if e > 0 else tinv[g](lam[prev])
        if len(set(lam[1:])) != d:
            continue
        for g in range(c.rank):
            p, q = c.perms[g], target[g]
            for s in range(1, d + 1):
                if lam[p(s)] != q(lam[s]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(Perm(lam[1:]))
            if first_only:
                break
    return out


def _bfs_order(tree: SchreierTree) -> list[int]:
    depth = {}

    def dep(s):
        if s in depth:
            return depth[s]
        p = tree.parent[s]
        depth[s] = 0 if p is None else dep(p[0]) + 1
        return depth[s]

    return sorted(range(1, tree.degree + 1), key=lambda s: (dep(s), s))


def find_lifts(c: PermCover, f: FreeAut) -> list[Perm]:
    """All sheet bijections ``lam`` with ``lam(phi(w)(s)) = phi(f(w))(lam(s))``.

    In product notation this reads ``phi(f(w)) = lam^-1 * phi(w) * lam``.
    The list is empty exactly when ``f`` does not lift to ``c``.
    """
    if not f.is_certified():
        raise NotAnAutomorphism("find_lifts needs an automorphism with a certified inverse")
    return _intertwiners(c, twisted_perms(c, f))


def verify_lift(c: PermCover, f: FreeAut, lam: Perm, power: int = 1) -> bool:
    """Check the intertwining identity for ``f^power`` on both generators."""
    target = list(c.perms)
    for _ in range(power):
        target = [_eval_word(w.letters, target) for w in f.images]
    return all(lam(c.perms[g](s)) == target[g](lam(s))
               for g in range(c.rank) for s in range(1, c.degree + 1))


def minimal_lifting_power(c: PermCover, f: FreeAut, bound: int = 64) -> tuple[int, list[Perm]]:
    """Smallest ``m <= bound`` such that ``f^m`` lifts, with its lifts.

    Works on the twisted representations ``g -> phi(f^m(g))`` so that the
    words of ``f^m`` are never expanded.
    """
    if not f.is_certified():
        raise NotAnAutomorphism("minimal_lifting_power needs a certified automorphism")
    rep = list(c.perms)
    seen = set()
    for m in range(1, bound + 1):
        # phi_{f^m}(g) = phi_{f^{m-1}}(f(g))
        rep = [_eval_word(w.letters, rep) for w in f.images]
        lifts = _intertwiners(c, rep)
        if lifts:
            return m, lifts
        key = tuple(p.images for p in rep)
        if key in seen:
            break
        seen.add(key)
    raise NoLiftingPower(
        f"no power f^m with m <= {min(bound, m)} lifts: the f-orbit of the "
        f"representation has {len(seen)} distinct members, none isomorphic to the cover"
    )


def _eval_word(letters: Sequence[int], perms: Sequence[Perm]) -> Perm:
    d = perms[0].degree
    img = list(range(1, d + 1))
    invs = {}
    for a in letters:
        if a > 0:
            p = perms[a - 1]
        else:
            p = invs.get(a)
            if p is None:
                p = invs[a] = perms[-a - 1].inverse()
        img = [p(i) for i in img]
    return Perm(img)


def deck_transformations(c: PermCover) -> list[Perm]:
    """Sheet bijections commuting with the monodromy."""
    return _intertwiners(c, list(c.perms))


# ---------------------------------------------------------------------------
# Fiber products
# ---------------------------------------------------------------------------

def fiber_product(*covers: PermCover) -> PermCover:
    """Cover whose group is the intersection of the covers' groups.

    Realized on the orbit of the tuple of basepoints under the product
    action.  Sheet labels are the tuples of component sheets.
    """
    if not covers:
        raise ValueError("need at least one cover")
    base = covers[0].base
    for c in covers[1:]:
        if c.base != base:
            raise ValueError("covers have different bases")
    start = tuple(c.basepoint for c in covers)
    index = {start: 1}
    tuples = [start]
    k = 0
    while k < len(tuples):
        t = tuples[k]
        k += 1
        for g in range(base.rank):
            for e in (1, -1):
                u = tuple(c.step(s, g, e) for c, s in zip(covers, t))
                if u not in index:
                    index[u] = len(tuples) + 1
                    tuples.append(u)
    perms = []
    for g in range(base.rank):
        perms.append(Perm(index[tuple(c.perms[g](s) for c, s in zip(covers, t))]
                          for t in tuples))
    return PermCover(base, tuple(perms), 1, tuple(tuples),
                     "x".join(c.name or "cover" for c in covers))


def projection(product: PermCover, i: int) -> list[int]:
    """Sheet map from a fiber product to its ``i``-th factor (0-based)."""
    return [t[i] for t in product.labels]


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# Loops and intersection numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverLoop:
    """Closed edge path: steps ``(sheet, generator, sign)`` in order."""

    steps: tuple

    @classmethod
    def from_word(cls, c: PermCover, word, start: int) -> "CoverLoop":
        letters = word.letters if isinstance(word, FreeWord) else tuple(word)
        steps, end = c.walk(letters, start)
        if end != start:
            raise ValueError("word does not close up at the start sheet")
        return cls(tuple(steps))

    def validate(self, c: PermCover) -> None:
        if not self.steps:
            return
        for (s, g, e), nxt in zip(self.steps, self.steps[1:] + self.steps[:1]):
            if c.step(s, g, e) != nxt[0]:
                raise ValueError("path is not closed or steps do not connect")

    def chain(self, c: PermCover) -> dict:
        """Edge coefficients: edge ``(s, g)`` counted with traversal sign."""
        out: dict = {}
        for s, g, e in self.steps:
            edge = (s, g) if e > 0 else (c.inverses[g](s), g)
            out[edge] = out.get(edge, 0) + e
        return {k: v for k, v in out.items() if v}

    def reversed(self, c: PermCover) -> "CoverLoop":
        return CoverLoop(tuple((c.step(s, g, e), g, -e) for s, g, e in reversed(self.steps)))

    def letters(self) -> tuple:
        return tuple((g + 1) * e for _, g, e in self.steps)

    def to_list(self, c: PermCover) -> list:
        return [[s, c.base.names[g], e] for s, g, e in self.steps]


def loop_from_chain_path(steps) -> CoverLoop:
    return CoverLoop(tuple(steps))


def intersection_functional(c: PermCover, b: CoverLoop) -> dict:
    """Weights ``w`` on edges with ``I(a, b) = sum_e a_e w_e`` for every
    cycle ``a``.

    ``b`` is pushed off itself to its left; inside each vertex disk the
    pushed copy runs clockwise from the arrival half-edge to the departure
    half-edge, crossing the half-edges in between.
    """
    b.validate(c)
    rot = c.base.rotation
    L = len(rot)
    pos = {h: i for i, h in enumerate(rot)}
    w: dict = {}
    steps = b.steps
    for (s0, g0, e0), (s1, g1, e1) in zip(steps, steps[1:] + steps[:1]):
        v = s1
        h_in = (g0, -e0)
        h_out = (g1, e1)
        k = (pos[h_in] - 1) % L
        target = pos[h_out]
        while k != target:
            g, e = rot[k]
            # outward use of half-edge (g, e) at v by a cycle a:
            #   e = +1: coefficient of edge (v, g); e = -1: minus coefficient
            #   of the edge arriving at v.  Sign chosen so that I(x, y) = +1
            #   on the base torus.
            if e > 0:
                edge = (v, g)
                w[edge] = w.get(edge, 0) + 1
            else:
                edge = (c.inverses[g](v), g)
                w[edge] = w.get(edge, 0) - 1
            k = (k - 1) % L
    return {k: v for k, v in w.items() if v}


def intersection_number(c: PermCover, a, b: CoverLoop) -> int:
    """Algebraic intersection number ``I(a, b)``.

    ``a`` may be a :class:`CoverLoop` or an edge-chain dict.
    """
    if isinstance(a, CoverLoop):
        a.validate(c)
        a = a.chain(c)
    w = intersection_functional(c, b)
    return sum(coef * w.get(e, 0) for e, coef in a.items())


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

_COLORS = ("red", "blue", "darkgreen", "orange", "purple", "brown", "black")


def to_dot(c: PermCover) -> str:
    """Graphviz description of the Schreier graph; punctures as comments."""
    lines = ["digraph cover {"]
    lines.append(f'  label="{c.name or "cover"} degree {c.degree} genus {c.genus}";')
    for s in range(1, c.degree + 1):
        lab = str(c.labels[s - 1]) if c.labels else str(s)
        lines.append(f'  {s} [label="{s} {lab}"];')
    for g, p in enumerate(c.perms):
        col = _COLORS[g % len(_COLORS)]
        for s in range(1, c.degree + 1):
            lines.append(f'  {s} -> {p(s)} [label="{c.base.names[g]}", color={col}];')
    for pl in c.puncture_lifts:
        lines.append(f"  // puncture over {pl.word}: cycle {list(pl.cycle)} "
                     f"unwraps {pl.degree}")
    lines.append("}")
    return "\n".join(lines) + "\n"
