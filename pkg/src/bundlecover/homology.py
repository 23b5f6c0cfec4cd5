"""
Rational homology of covers and the action of lifted monodromies.

Chains live on the edges of the Schreier graph, indexed by
``PermCover.edge_index``.  A cycle is recorded by its coefficients on the
non-tree edges; those coordinates identify ``H_1`` of the cover.  The
boundary-killed quotient ``H_1(cover) / <puncture loops>`` is the rational
first homology of the filled surface (or of any orbifold obtained by
putting cone points at the punctures) and carries a nondegenerate
intersection form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cover import (
    CoverLoop,
    PermCover,
    fill_orders,
    intersection_functional,
)
from .exact_algebra import (
    Perm,
    determinant,
    fixed_subspace,
    matmul,
    matvec,
    rational_rank,
    rref,
    smith_normal_form,
    transpose,
)
from .fpgroup import (
    FPGroup,
    FreeAut,
    FreeWord,
    free_reduce,
    mapping_torus_presentation,
    subgroup_presentation,
)


class NotALift(ValueError):
    """The supplied sheet bijection does not intertwine the monodromy."""


def _chain_of_steps(c: PermCover, steps, out: list | None = None, sign: int = 1) -> list:
    if out is None:
        out = [0] * c.num_edges
    for s, g, e in steps:
        if e > 0:
            out[c.edge_index(s, g)] += sign
        else:
            out[c.edge_index(c.inverses[g](s), g)] -= sign
    return out


def chain_boundary(c: PermCover, chain: Sequence[int]) -> list[int]:
    """Vertex boundary of an edge chain (index 0 is sheet 1)."""
    bd = [0] * c.degree
    for s in range(1, c.degree + 1):
        for g in range(c.rank):
            a = chain[c.edge_index(s, g)]
            if a:
                bd[s - 1] -= a
                bd[c.perms[g](s) - 1] += a
    return bd


@dataclass
class H1Basis:
    """Cycle basis of a cover: one fundamental loop per non-tree edge."""

    cover: PermCover

    @property
    def tree(self):
        return self.cover.tree

    @property
    def edges(self) -> tuple:
        return self.tree.generators

    @property
    def dim(self) -> int:
        return len(self.edges)

    @cached_property
    def _coord_index(self) -> list[int]:
        return [self.cover.edge_index(s, g) for s, g in self.edges]

    def loop(self, i: int) -> CoverLoop:
        c = self.cover
        s, g = self.edges[i]
        t = c.perms[g](s)
        back = CoverLoop(tuple(self.tree.path_to(t))).reversed(c).steps if t != c.basepoint else ()
        return CoverLoop(tuple(self.tree.path_to(s)) + ((s, g, 1),) + tuple(back))

    @cached_property
    def chains(self) -> list[list[int]]:
        return [_chain_of_steps(self.cover, self.loop(i).steps) for i in range(self.dim)]

    def coords(self, chain: Sequence[int]) -> list[int]:
        """Coordinates of a cycle (dense edge chain, dict, or loop)."""
        if isinstance(chain, CoverLoop):
            chain.validate(self.cover)
            chain = _chain_of_steps(self.cover, chain.steps)
        elif isinstance(chain, dict):
            dense = [0] * self.cover.num_edges
            for (s, g), a in chain.items():
                dense[self.cover.edge_index(s, g)] += a
            chain = dense
        if any(chain_boundary(self.cover, chain)):
            raise ValueError("chain is not a cycle")
        return [chain[k] for k in self._coord_index]

    def chain_of(self, v: Sequence) -> list:
        """Edge chain of the cycle with coordinates ``v``."""
        out = [0] * self.cover.num_edges
        for a, ch in zip(v, self.chains):
            if a:
                for k, x in enumerate(ch):
                    if x:
                        out[k] += a * x
        return out

    @cached_property
    def puncture_loops(self) -> list[CoverLoop]:
        c = self.cover
        out = []
        for p in c.puncture_lifts:
            w = c.base.boundary[p.base_index].letters * p.degree
            out.append(CoverLoop.from_word(c, w, p.cycle[0]))
        return out

    @cached_property
    def boundary_vectors(self) -> list[list[int]]:
        return [self.coords(l) for l in self.puncture_loops]

    def functional(self, b: CoverLoop) -> list[int]:
        """Row vector ``u`` with ``I(a, b) = u . coords(a)`` for cycles ``a``."""
        w = intersection_functional(self.cover, b)
        dense = [0] * self.cover.num_edges
        for (s, g), x in w.items():
            dense[self.cover.edge_index(s, g)] = x
        return [sum(x * dense[k] for k, x in enumerate(ch) if x) for ch in self.chains]

    @cached_property
    def intersection_matrix(self) -> list[list[int]]:
        """``J[i][j] = I(loop_i, loop_j)``."""
        cols = [self.functional(self.loop(j)) for j in range(self.dim)]
        return transpose(cols)

    def intersect(self, a: Sequence, b: Sequence) -> Fraction:
        J = self.intersection_matrix
        return sum((x * J[i][j] * y for i, x in enumerate(a) if x
                    for j, y in enumerate(b) if y), Fraction(0))

    @cached_property
    def quotient(self) -> "BoundaryQuotient":
        return BoundaryQuotient(self)


@dataclass
class BoundaryQuotient:
    """``H_1(cover) / span(puncture classes)`` with a chosen complement.

    Rows of the reduced echelon form of the boundary vectors have pivots
    ``pivots``; the standard basis vectors off the pivots project to a basis
    of the quotient.
    """

    basis: H1Basis
    rows: list = field(init=False)
    pivots: list = field(init=False)
    free: list = field(init=False)

    def __post_init__(self):
        B = self.basis.boundary_vectors
        n = self.basis.dim
        if B:
            self.rows, self.pivots = rref(B)
        else:
            self.rows, self.pivots = [], []
        ps = set(self.pivots)
        self.free = [k for k in range(n) if k not in ps]

    @property
    def dim(self) -> int:
        return len(self.free)

    def project(self, v: Sequence) -> list[Fraction]:
        w = [Fraction(x) for x in v]
        for p, row in zip(self.pivots, self.rows):
            a = w[p]
            if a:
                for k, x in enumerate(row):
                    if x:
                        w[k] -= a * x
        return [w[k] for k in self.free]

    def lift(self, q: Sequence) -> list:
        v = [Fraction(0)] * self.basis.dim
        for k, x in zip(self.free, q):
            v[k] = Fraction(x)
        return v

    @cached_property
    def form(self) -> list[list[int]]:
        J = self.basis.intersection_matrix
        return [[J[i][j] for j in self.free] for i in self.free]

    def is_zero(self, v: Sequence) -> bool:
        return not any(self.project(v))


# ---------------------------------------------------------------------------
# Lifted maps
# ---------------------------------------------------------------------------

def _edge_image_chains(c: PermCover, f: FreeAut, power: int) -> list[list[dict]]:
    """``C[g][u-1]``: sparse chain (edge index -> coefficient) of the path
    spelling ``f^power(g)`` from sheet ``u``.

    Built level by level from ``f^k(g) = f^(k-1)(f(g))`` so that the words
    of the power are never written out.
    """
    d, rank = c.degree, c.rank
    chains = [[{c.edge_index(u, g): 1} for u in range(1, d + 1)] for g in range(rank)]
    rep = list(c.perms)
    for _ in range(power):
        inv = [p.inverse() for p in rep]
        new = []
        for g in range(rank):
            letters = f.images[g].letters
            row = []
            for u in range(1, d + 1):
                ch: dict = {}
                s = u
                for a in letters:
                    h = abs(a) - 1
                    if a > 0:
                        sign, src = 1, chains[h][s - 1]
                        s = rep[h](s)
                    else:
                        s = inv[h](s)
                        sign, src = -1, chains[h][s - 1]
                    for k, x in src.items():
                        v = ch.get(k, 0) + sign * x
                        if v:
                            ch[k] = v
                        else:
                            del ch[k]
                row.append(ch)
            new.append(row)
        chains = new
        rep = [_word_on(rep, w.letters) for w in f.images]
    return chains


def _word_on(perms: Sequence[Perm], letters) -> Perm:
    d = perms[0].degree
    img = list(range(1, d + 1))
    for a in letters:
        p = perms[a - 1] if a > 0 else perms[-a - 1].inverse()
        img = [p(i) for i in img]
    return Perm(img)


def _power_target(c: PermCover, f: FreeAut, power: int) -> list[Perm]:
    rep = list(c.perms)
    for _ in range(power):
        rep = [_word_on(rep, w.letters) for w in f.images]
    return rep


@dataclass
class HomologyAction:
    """Action of the lift ``lam`` of ``f^power`` on homology of ``cover``."""

    cover: PermCover
    f: FreeAut
    lift: Perm
    power: int
    matrix: list  # on H_1(cover), columns are images of basis vectors
    basis: H1Basis

    @cached_property
    def quotient_matrix(self) -> list[list[Fraction]]:
        q = self.basis.quotient
        cols = [q.project([row[k] for row in self.matrix]) for k in q.free]
        # integral entries as ints keep the products fast
        return [[int(x) if x.denominator == 1 else x for x in row]
                for row in transpose(cols)] if cols else []

    def apply(self, v: Sequence) -> list:
        return matvec(self.matrix, v)

    @cached_property
    def fixed_quotient(self) -> list[list[Fraction]]:
        return fixed_subspace(self.quotient_matrix) if self.quotient_matrix else []

    @cached_property
    def fixed_dim(self) -> int:
        A = self.quotient_matrix
        if not A:
            return 0
        n = len(A)
        return n - rational_rank([[A[i][j] - (i == j) for j in range(n)] for i in range(n)])

    def is_symplectic(self) -> bool:
        A = self.quotient_matrix
        J = self.basis.quotient.form
        if not A:
            return True
        return matmul(matmul(transpose(A), J), A) == J

    def preserves_boundary(self) -> bool:
        B = self.basis.boundary_vectors
        if not B:
            return True
        r = rational_rank(B)
        return all(rational_rank(B + [self.apply(b)]) == r for b in B)

    def fixes(self, v: Sequence) -> bool:
        """Whether the class of ``v`` is fixed in the boundary-killed quotient."""
        diff = [a - b for a, b in zip(self.apply(v), v)]
        return self.basis.quotient.is_zero(diff)


def h1_action(c: PermCover, f: FreeAut, lam: Perm, power: int = 1,
              basis: H1Basis | None = None) -> HomologyAction:
    """Matrix of the lift ``lam`` of ``f^power`` on ``H_1(c; Q)``."""
    target = _power_target(c, f, power)
    if not all(lam(c.perms[g](s)) == target[g](lam(s))
               for g in range(c.rank) for s in range(1, c.degree + 1)):
        raise NotALift("sheet map does not intertwine the monodromy with its twist")
    basis = basis or H1Basis(c)
    C = _edge_image_chains(c, f, power)
    pos = {k: i for i, k in enumerate(basis._coord_index)}
    # restricting to non-tree edges is linear, so each edge image can be
    # restricted before summing; the sums are cycles
    restricted = {}
    for s in range(1, c.degree + 1):
        for g in range(c.rank):
            img = C[g][lam(s) - 1]
            restricted[c.edge_index(s, g)] = [(pos[k], x) for k, x in img.items() if k in pos]
    n = basis.dim
    cols = []
    for ch in basis.chains:
        col = [0] * n
        for k, a in enumerate(ch):
            if a:
                for i, x in restricted[k]:
                    col[i] += a * x
        cols.append(col)
    return HomologyAction(c, f, lam, power, transpose(cols) if cols else [], basis)


def betti_mapping_torus(a: HomologyAction, n: int | None = None) -> int:
    """``1 + dim`` of the fixed space on boundary-killed homology.

    ``n`` only validates that the cover fills to an orbifold cover of the
    order-``n`` cone surface; rational homology does not see cone orders.
    """
    if n is not None:
        fill_orders(a.cover, n)
    return 1 + a.fixed_dim


# ---------------------------------------------------------------------------
# Presentation-based oracle
# ---------------------------------------------------------------------------

def _edge_image_words(c: PermCover, f: FreeAut, power: int, tree) -> list[list[tuple]]:
    """Rewritten (Schreier generator) words of the paths ``f^power(g)`` from
    each sheet; same recursion as the chain version, on words."""
    d, rank = c.degree, c.rank
    words = [[free_reduce(tree.rewrite_steps([(u, g, 1)])) for u in range(1, d + 1)]
             for g in range(rank)]
    rep = list(c.perms)
    for _ in range(power):
        inv = [p.inverse() for p in rep]
        new = []
        for g in range(rank):
            row = []
            for u in range(1, d + 1):
                out: list = []
                s = u
                for a in f.images[g].letters:
                    h = abs(a) - 1
                    if a > 0:
                        out.extend(words[h][s - 1])
                        s = rep[h](s)
                    else:
                        s = inv[h](s)
                        out.extend(-x for x in reversed(words[h][s - 1]))
                row.append(free_reduce(out))
            new.append(row)
        words = new
        rep = [_word_on(rep, w.letters) for w in f.images]
    return words


def lifted_automorphism_words(c: PermCover, f: FreeAut, lam: Perm, power: int = 1):
    """Images of the Schreier generators of ``pi_1(c)`` under the lift.

    Returns ``(subgroup FPGroup, tree, images)`` where images are FreeWords
    in the Schreier generators.  The lifted map sends the basepoint to
    ``lam(basepoint)``; conjugating back along the tree path does not change
    the rewritten words since tree edges rewrite to nothing.
    """
    target = _power_target(c, f, power)
    if not all(lam(c.perms[g](s)) == target[g](lam(s))
               for g in range(c.rank) for s in range(1, c.degree + 1)):
        raise NotALift("sheet map does not intertwine the monodromy with its twist")
    H, tree = subgroup_presentation(FPGroup.free(c.base.names), c.perms, c.basepoint)
    W = _edge_image_words(c, f, power, tree)
    def step_image(u, h, e):
        if e > 0:
            return list(W[h][lam(u) - 1])
        src = c.inverses[h](u)
        return [-x for x in reversed(W[h][lam(src) - 1])]

    def path_image(steps):
        out: list = []
        for st in steps:
            out.extend(step_image(*st))
        return out

    images = []
    for s, g in tree.generators:
        t = c.perms[g](s)
        letters = path_image(tree.path_to(s)) + list(W[g][lam(s) - 1])
        letters += [-x for x in reversed(path_image(tree.path_to(t)))]
        images.append(FreeWord(free_reduce(letters), H.names))
    return H, tree, images


def _edge_image_vectors(c: PermCover, f: FreeAut, power: int, tree) -> list[list[dict]]:
    """Abelianized form of :func:`_edge_image_words`: exponent sums over the
    Schreier generators.  Word lengths grow exponentially with ``power`` for
    hyperbolic ``f``; exponent vectors stay the size of the cover."""
    d, rank = c.degree, c.rank
    vecs = []
    for g in range(rank):
        row = []
        for u in range(1, d + 1):
            v: dict = {}
            for a in tree.rewrite_steps([(u, g, 1)]):
                v[abs(a) - 1] = v.get(abs(a) - 1, 0) + (1 if a > 0 else -1)
            row.append(v)
        vecs.append(row)
    rep = list(c.perms)
    for _ in range(power):
        inv = [p.inverse() for p in rep]
        new = []
        for g in range(rank):
            row = []
            for u in range(1, d + 1):
                out: dict = {}
                s = u
                for a in f.images[g].letters:
                    h = abs(a) - 1
                    if a > 0:
                        src, sign = vecs[h][s - 1], 1
                        s = rep[h](s)
                    else:
                        s = inv[h](s)
                        src, sign = vecs[h][s - 1], -1
                    for k, x in src.items():
                        out[k] = out.get(k, 0) + sign * x
                row.append({k: x for k, x in out.items() if x})
            new.append(row)
        vecs = new
        rep = [_word_on(rep, w.letters) for w in f.images]
    return vecs


def _abelian(letters) -> dict:
    v: dict = {}
    for a in letters:
        v[abs(a) - 1] = v.get(abs(a) - 1, 0) + (1 if a > 0 else -1)
    return v


def betti_oracle(c: PermCover, f: FreeAut, lam: Perm, n: int | None = None,
                 power: int = 1) -> int:
    """First Betti number from the abelianized mapping-torus presentation.

    Generators are the Reidemeister-Schreier generators of the cover plus the
    stable letter ``t``.  The relators ``t a T = lift(a)`` abelianize to
    ``a - lift(a)``; a puncture of cone order ``k`` contributes ``k`` times
    its boundary loop and a filled puncture the loop itself.  The rank comes
    from the integer Smith normal form.  ``n=None`` fills every puncture with
    a disk; otherwise cone orders come from :func:`cover.orbifold_fill`.
    """
    orders = fill_orders(c, n)
    target = _power_target(c, f, power)
    if not all(lam(c.perms[g](s)) == target[g](lam(s))
               for g in range(c.rank) for s in range(1, c.degree + 1)):
        raise NotALift("sheet map does not intertwine the monodromy with its twist")
    H, tree = subgroup_presentation(FPGroup.free(c.base.names), c.perms, c.basepoint)
    V = _edge_image_vectors(c, f, power, tree)
    ngens = len(H.names)

    def add_step(acc, u, h, e):
        if e > 0:
            src, sign = V[h][lam(u) - 1], 1
        else:
            src, sign = V[h][lam(c.inverses[h](u)) - 1], -1
        for k, x in src.items():
            acc[k] = acc.get(k, 0) + sign * x

    rows = []
    for i, (s, g) in enumerate(tree.generators):
        img: dict = {}
        for st in tree.path_to(s):
            add_step(img, *st)
        add_step(img, s, g, 1)
        for u, h, e in _reverse_path(c, tree.path_to(c.perms[g](s))):
            add_step(img, u, h, e)
        row = [-img.get(k, 0) for k in range(ngens)]
        row[i] += 1
        rows.append(row)
    for p, m in zip(c.puncture_lifts, orders):
        w = c.base.boundary[p.base_index].letters * p.degree
        steps, _ = tree.walk(w, p.cycle[0])
        v = _abelian(tree.rewrite_steps(steps))
        rows.append([m * v.get(k, 0) for k in range(ngens)])
    rank = smith_normal_form(rows)[1] if rows and ngens else 0
    return ngens + 1 - rank


def hnn_presentation(c: PermCover, f: FreeAut, lam: Perm, n: int | None = None,
                     power: int = 1) -> FPGroup:
    """The mapping-torus presentation of the lift as explicit words.

    Word lengths grow exponentially in ``power`` for hyperbolic ``f``, so
    this is meant for small cases; its abelianization agrees with
    :func:`betti_oracle`.
    """
    orders = fill_orders(c, n)
    H, tree, images = lifted_automorphism_words(c, f, lam, power)
    aut = FreeAut(H.names, tuple(images), None, "lift")
    cones, filled = [], []
    for p, m in zip(c.puncture_lifts, orders):
        w = c.base.boundary[p.base_index].letters * p.degree
        steps, _ = tree.walk(w, p.cycle[0])
        word = FreeWord(tree.rewrite_steps(tree.path_to(p.cycle[0]) + steps
                                           + _reverse_path(c, tree.path_to(p.cycle[0]))),
                        H.names)
        if m == 1:
            filled.append(word)
        else:
            cones.append((word, m))
    return mapping_torus_presentation(aut, cones, filled)


def _reverse_path(c: PermCover, steps):
    return [(c.step(s, g, e), g, -e) for s, g, e in reversed(steps)]


# ---------------------------------------------------------------------------
# Reporting helpers
# ---------------------------------------------------------------------------

def loop_from_coords(basis: H1Basis, v: Sequence[int]) -> CoverLoop:
    """A based loop realizing an integral coordinate vector."""
    steps: list = []
    for i, a in enumerate(v):
        if a != int(a):
            raise ValueError("loop realization needs integral coordinates")
        lp = basis.loop(i)
        piece = lp.steps if a > 0 else lp.reversed(basis.cover).steps
        steps.extend(list(piece) * abs(int(a)))
    return CoverLoop(tuple(steps))


def gram(basis: H1Basis, vectors: Sequence[Sequence]) -> list[list[Fraction]]:
    J = basis.intersection_matrix
    return [[sum((a * J[i][j] * b for i, a in enumerate(u) if a
                  for j, b in enumerate(w) if b), Fraction(0)) for w in vectors]
            for u in vectors]


def nondegenerate(form: list[list]) -> bool:
    return bool(form) and determinant(form) != 0


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=str)


# ---------------------------------------------------------------------------
# Fixed classes of grid covers
# ---------------------------------------------------------------------------

def band_loops(c: PermCover, row: int) -> list[CoverLoop]:
    """Cycle basis of the band between rows ``row`` and ``row + 1``.

    The band uses the ``x`` edges of both rows and the ``y`` edges from
    ``row`` upward.  It is a cover of the torus cut along ``x`` and carries
    the lifts of ``x`` in the two rows on its ends.
    """
    rows, r = c.meta["rows"], c.meta["r"]
    upper = row % rows + 1
    verts = [(i - 1) * r + j for i in (row, upper) for j in range(1, r + 1)]
    edges = [(s, 0) for s in verts] + [(s, 1) for s in verts[:r]]
    adj: dict = {v: [] for v in verts}
    for s, g in edges:
        t = c.perms[g](s)
        adj[s].append((t, (s, g, 1)))
        adj[t].append((s, (t, g, -1)))
    parent: dict = {}
    tree = set()
    for root in verts:
        if root in parent:
            continue
        parent[root] = None
        queue = [root]
        k = 0
        while k < len(queue):
            u = queue[k]
            k += 1
            for t, st in adj[u]:
                if t not in parent:
                    parent[t] = (u, st)
                    tree.add((st[0], st[1]) if st[2] > 0 else (t, st[1]))
                    queue.append(t)

    def path(v):
        out = []
        while parent[v] is not None:
            u, st = parent[v]
            out.append(st)
            v = u
        return out[::-1]

    loops = []
    for s, g in edges:
        if (s, g) in tree:
            continue
        t = c.perms[g](s)
        back = CoverLoop(tuple(path(t))).reversed(c).steps
        loops.append(CoverLoop(tuple(path(s)) + ((s, g, 1),) + tuple(back)))
    return loops


def generator_components(c: PermCover, g: int) -> list[CoverLoop]:
    """Closed lifts of generator ``g``: one loop per cycle of ``phi(g)``."""
    return [CoverLoop.from_word(c, (g + 1,) * len(cyc), cyc[0])
            for cyc in c.perms[g].cycles()]


def realize(basis: H1Basis, terms: Sequence[tuple[int, CoverLoop]]) -> CoverLoop:
    """One based loop homologous to ``sum coef * loop``: each component is
    conjugated into the basepoint along the spanning tree."""
    c = basis.cover
    steps: list = []
    for coef, lp in terms:
        if not coef:
            continue
        start = lp.steps[0][0]
        to = basis.tree.path_to(start)
        piece = lp.steps if coef > 0 else lp.reversed(c).steps
        steps += to + list(piece) * abs(coef) + _reverse_path(c, to)
    return CoverLoop(tuple(steps))


@dataclass
class FixedPairCertificate:
    """Classes ``ell + ell*`` with ``ell`` in the row-2 band and ``ell*`` in
    the row-4 band cancelling every intersection with the lifts of ``y``."""

    basis: H1Basis
    classes: list  # integral coordinate vectors, independent modulo boundary
    terms: list  # per class: list of (coef, CoverLoop)
    delta: int  # indices into classes
    delta_star: int
    intersection: int
    y_intersections: list  # per class, one number per component of y
    fixed: dict  # lift label -> list of bools per class

    @property
    def dim(self) -> int:
        return len(self.classes)

    def loop(self, i: int) -> CoverLoop:
        return realize(self.basis, self.terms[i])

    def passes(self) -> bool:
        return (self.intersection != 0
                and all(not any(row) for row in self.y_intersections)
                and all(all(v) for v in self.fixed.values()))

    def to_dict(self) -> dict:
        c = self.basis.cover
        return {
            "dim": self.dim,
            "delta": self.loop(self.delta).to_list(c),
            "delta_star": self.loop(self.delta_star).to_list(c),
            "intersection": self.intersection,
            "classes": [list(map(int, v)) for v in self.classes],
            "gram": [[int(x) for x in row] for row in gram(self.basis, self.classes)],
            "y_intersections": self.y_intersections,
            "fixed": self.fixed,
        }


def fixed_pair_search(c: PermCover, basis: H1Basis | None = None,
                      lifts: dict | None = None) -> FixedPairCertificate:
    """Certified fixed classes from row-2 loops and row-4 companions.

    For each loop of the row-2 band (in basis order) an exact linear system
    over the row-4 band cycle space gives a companion so that the sum meets
    every lift of ``y`` algebraically zero times.  Sums that are nonzero
    modulo boundary and independent of the earlier ones are kept.  ``lifts``
    maps labels to HomologyActions whose fixing of the classes is recorded;
    by default the canonical lifts of ``Dx`` and ``Dy^4``.
    """
    from .cover import canonical_twist_x_lift
    from .fpgroup import twist_word_aut, twist_x
    from .exact_algebra import primitive_integer_vector, solve_linear

    if not c.meta.get("sigmas"):
        raise ValueError("fixed_pair_search needs a grid cover")
    s = c.meta["sigmas"]
    if not (s[1] == s[0].inverse() and s[3] == s[2].inverse()):
        raise ValueError("grid cover does not satisfy sigma_2 = sigma_1^-1, sigma_4 = sigma_3^-1")
    basis = basis or H1Basis(c)
    q = basis.quotient
    if lifts is None:
        names = c.base.names
        lifts = {
            "Dx": h1_action(c, twist_x(names), canonical_twist_x_lift(c), basis=basis),
            "Dy^4": h1_action(c, twist_word_aut("Dy^4", names), Perm.identity(c.degree),
                              basis=basis),
        }
    L2, L4 = band_loops(c, 2), band_loops(c, 4)
    ys = generator_components(c, 1)
    F = [basis.functional(y) for y in ys]

    def meet(v):
        return [sum(a * b for a, b in zip(f, v) if a and b) for f in F]

    v2 = [basis.coords(l) for l in L2]
    v4 = [basis.coords(l) for l in L4]
    M4 = transpose([meet(v) for v in v4]) if v4 else [[] for _ in F]
    classes, terms, projected = [], [], []
    for i, v in enumerate(v2):
        if not q.project(v) or not any(q.project(v)):
            continue  # peripheral or null-homologous
        sol = solve_linear(M4, [-x for x in meet(v)], len(v4))
        if sol is None:
            raise ArithmeticError("no companion in row 4; grid conventions are inconsistent")
        coefs = primitive_integer_vector([Fraction(1)] + sol)
        vec = [coefs[0] * a for a in v]
        for cf, w in zip(coefs[1:], v4):
            if cf:
                vec = [a + cf * b for a, b in zip(vec, w)]
        p = q.project(vec)
        if rational_rank(projected + [p]) == len(projected):
            continue
        projected.append(p)
        classes.append(vec)
        terms.append([(coefs[0], L2[i])] + [(cf, L4[j]) for j, cf in enumerate(coefs[1:]) if cf])
    if len(classes) < 2:
        raise ArithmeticError("fewer than two independent fixed classes")
    G = gram(basis, classes)
    best = None
    for i in range(len(classes)):
        for j in range(len(classes)):
            x = G[i][j]
            if x > 0 and (best is None or x < best[0]):
                best = (x, i, j)
    if best is None:
        raise ArithmeticError("row-2 classes pair trivially; no nonperipheral pair")
    fixed = {label: [a.fixes(v) for v in classes] for label, a in lifts.items()}
    return FixedPairCertificate(basis, classes, terms, best[1], best[2], int(best[0]),
                                [meet(v) for v in classes], fixed)
