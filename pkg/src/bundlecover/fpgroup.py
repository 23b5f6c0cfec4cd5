"""
Free groups, free-group automorphisms and finite presentations.

Words are stored as tuples of signed, 1-based generator indices: ``+k`` is
the ``k``-th generator and ``-k`` its inverse.  In text, an inverse is
written by upper-casing the first letter of the generator name, so over the
alphabet ``x y`` the commutator is ``x y X Y``.

Composition of automorphisms is right-to-left: ``a.compose(b)`` applies
``b`` first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exact_algebra import Perm, orbits, rational_rank, smith_normal_form

COMPOSITION_ORDER = "right-to-left"


class NotAnAutomorphism(ValueError):
    """Raised when a claimed automorphism fails validation."""


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def _inverse_name(name: str) -> str:
    return name[0].upper() + name[1:]


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word over a named alphabet."""

    letters: tuple
    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))
        n = len(self.names)
        for a in self.letters:
            if a == 0 or abs(a) > n:
                raise ValueError(f"letter {a} outside alphabet of size {n}")

    @classmethod
    def identity(cls, names: Sequence[str]) -> "FreeWord":
        return cls((), tuple(names))

    @classmethod
    def generator(cls, names: Sequence[str], i: int) -> "FreeWord":
        """The ``i``-th generator (0-based)."""
        return cls((i + 1,), tuple(names))

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "FreeWord":
        return cls(parse_letters(text, names), tuple(names))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def _check(self, other: "FreeWord"):
        if self.names != other.names:
            raise ValueError(f"alphabet mismatch: {self.names} vs {other.names}")

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        self._check(other)
        return FreeWord(self.letters + other.letters, self.names)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(-a for a in reversed(self.letters)), self.names)

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        return FreeWord(base.letters * abs(k), self.names)

    def is_identity(self) -> bool:
        return not self.letters

    def exponent_vector(self) -> list[int]:
        v = [0] * len(self.names)
        for a in self.letters:
            v[abs(a) - 1] += 1 if a > 0 else -1
        return v

    def cyclic_reduction(self) -> tuple[int, ...]:
        w = list(self.letters)
        while len(w) > 1 and w[0] == -w[-1]:
            w = w[1:-1]
        return tuple(w)

    def is_conjugate_to(self, other: "FreeWord") -> bool:
        self._check(other)
        a, b = self.cyclic_reduction(), other.cyclic_reduction()
        if len(a) != len(b):
            return False
        if not a:
            return True
        doubled = a + a
        return any(doubled[i:i + len(b)] == b for i in range(len(a)))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(
            self.names[a - 1] if a > 0 else _inverse_name(self.names[-a - 1])
            for a in self.letters
        )

    def __repr__(self) -> str:
        return f"FreeWord({str(self)!r})"


_TOKEN_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_.]*)(?:\^(-?\d+))?$")


def parse_letters(text: str, names: Sequence[str]) -> tuple[int, ...]:
    """Parse whitespace-separated tokens like ``x``, ``Y``, ``x^2``, ``y^-1``.

    For single-character alphabets, juxtaposed letters (``xyXY``) are
    accepted as well.
    """
    lookup = {}
    for i, nm in enumerate(names):
        lookup[nm] = i + 1
        inv = _inverse_name(nm)
        if inv != nm:
            lookup[inv] = -(i + 1)
    single = all(len(nm) == 1 for nm in names)
    out: list[int] = []
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    for tok in text.replace("*", " ").split():
        m = _TOKEN_RE.match(tok)
        if m and m.group(1) in lookup:
            a = lookup[m.group(1)]
            k = int(m.group(2)) if m.group(2) else 1
            out.extend([a if k > 0 else -a] * abs(k))
        elif single and all(ch in lookup for ch in tok):
            out.extend(lookup[ch] for ch in tok)
        else:
            raise ValueError(f"unknown token {tok!r} over alphabet {list(names)}")
    return free_reduce(out)


# ---------------------------------------------------------------------------
# Homomorphisms and automorphisms
# ---------------------------------------------------------------------------

def _substitute(images: Sequence[FreeWord], w: FreeWord, target_names) -> FreeWord:
    letters: list[int] = []
    for a in w.letters:
        img = images[abs(a) - 1].letters
        if a > 0:
            letters.extend(img)
        else:
            letters.extend(-b for b in reversed(img))
    return FreeWord(tuple(letters), tuple(target_names))


@dataclass(frozen=True)
class FreeHom:
    """A homomorphism between free groups, given by generator images."""

    source: tuple
    target: tuple
    images: tuple

    def __call__(self, w: FreeWord) -> FreeWord:
        if w.names != self.source:
            raise ValueError(f"alphabet mismatch: {w.names} vs {self.source}")
        return _substitute(self.images, w, self.target)


@dataclass(frozen=True)
class FreeAut:
    """An automorphism of a free group.

    ``inverse_images`` is an optional certificate: the generator images of
    the inverse automorphism.  It is checked on construction.
    """

    names: tuple
    images: tuple
    inverse_images: tuple | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(self.images) != len(names):
            raise ValueError("need one image per generator")
        for w in self.images:
            if w.names != names:
                raise ValueError("image word over the wrong alphabet")
        if self.inverse_images is not None:
            if len(self.inverse_images) != len(names):
                raise ValueError("need one inverse image per generator")
            for i in range(len(names)):
                g = FreeWord.generator(names, i)
                there = _substitute(self.inverse_images, g, names)
                back = _substitute(self.images, there, names)
                again = _substitute(self.inverse_images, _substitute(self.images, g, names), names)
                if back != g or again != g:
                    raise NotAnAutomorphism(
                        f"inverse certificate fails on generator {names[i]}"
                    )

    @property
    def rank(self) -> int:
        return len(self.names)

    @classmethod
    def identity(cls, names: Sequence[str]) -> "FreeAut":
        gens = tuple(FreeWord.generator(names, i) for i in range(len(names)))
        return cls(tuple(names), gens, gens, "id")

    @classmethod
    def from_strings(cls, names, images: Sequence[str], inverse: Sequence[str] | None = None,
                     label: str = "") -> "FreeAut":
        names = tuple(names)
        imgs = tuple(FreeWord.parse(s, names) for s in images)
        inv = tuple(FreeWord.parse(s, names) for s in inverse) if inverse is not None else None
        return cls(names, imgs, inv, label)

    def __call__(self, w: FreeWord) -> FreeWord:
        return self.apply(w)

    def apply(self, w: FreeWord) -> FreeWord:
        if w.names != self.names:
            raise ValueError(f"alphabet mismatch: {w.names} vs {self.names}")
        return _substitute(self.images, w, self.names)

    def compose(self, other: "FreeAut") -> "FreeAut":
        """``self`` after ``other``."""
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        imgs = tuple(self.apply(w) for w in other.images)
        inv = None
        if self.inverse_images is not None and other.inverse_images is not None:
            inv = tuple(_substitute(other.inverse_images, w, self.names)
                        for w in self.inverse_images)
        label = f"{self.label} {other.label}".strip() if self.label and other.label else ""
        return FreeAut(self.names, imgs, inv, label)

    def __mul__(self, other: "FreeAut") -> "FreeAut":
        return self.compose(other)

    def inverse(self) -> "FreeAut":
        if self.inverse_images is None:
            raise NotAnAutomorphism("no certified inverse available")
        return FreeAut(self.names, self.inverse_images, self.images,
                       f"({self.label})^-1" if self.label else "")

    def __pow__(self, k: int) -> "FreeAut":
        base = self if k >= 0 else self.inverse()
        result = FreeAut.identity(self.names)
        for _ in range(abs(k)):
            result = result.compose(base)
        if self.label:
            result = FreeAut(result.names, result.images, result.inverse_images,
                             f"({self.label})^{k}")
        return result

    def is_certified(self) -> bool:
        return self.inverse_images is not None

    def is_identity(self) -> bool:
        return all(w.letters == (i + 1,) for i, w in enumerate(self.images))

    def abelianized(self) -> list[list[int]]:
        """Integer matrix whose column ``j`` is the exponent-sum vector of the
        image of generator ``j``."""
        cols = [w.exponent_vector() for w in self.images]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def to_text(self) -> str:
        lines = [f"{n} -> {w}" for n, w in zip(self.names, self.images)]
        if self.inverse_images is not None:
            lines.append("inverse:")
            lines += [f"{n} -> {w}" for n, w in zip(self.names, self.inverse_images)]
        return "\n".join(lines)

    def __str__(self) -> str:
        return "; ".join(f"{n} -> {w}" for n, w in zip(self.names, self.images))


def parse_aut(text: str) -> FreeAut:
    """Parse lines like ``y -> y x``; an ``inverse:`` line starts the
    optional inverse certificate in the same format."""
    fwd: list[tuple[str, str]] = []
    inv: list[tuple[str, str]] = []
    cur = fwd
    for lineno, raw in enumerate(text.replace(";", "\n").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.rstrip(":").lower() == "inverse":
            cur = inv
            continue
        if "->" not in line:
            raise ValueError(f"line {lineno}: expected 'gen -> word', got {line!r}")
        lhs, rhs = (s.strip() for s in line.split("->", 1))
        cur.append((lhs, rhs))
    names = tuple(l for l, _ in fwd)
    if len(set(names)) != len(names):
        raise ValueError("generator listed twice")
    if inv and tuple(l for l, _ in inv) != names:
        raise ValueError("inverse block must list the same generators in the same order")
    return FreeAut.from_strings(
        names, [r for _, r in fwd], [r for _, r in inv] if inv else None
    )


def apply_aut(a: FreeAut, w: FreeWord) -> FreeWord:
    return a.apply(w)


def compose_auts(a: FreeAut, b: FreeAut) -> FreeAut:
    """``a`` after ``b``: ``apply(compose(a, b), w) == a(b(w))``."""
    return a.compose(b)


def abelianized_matrix(a: FreeAut) -> list[list[int]]:
    return a.abelianized()


# ---------------------------------------------------------------------------
# Twists on (punctured) tori
# ---------------------------------------------------------------------------

def torus_names(k: int = 1) -> tuple[str, ...]:
    """Generator names of the k-punctured torus: ``x, y, z1, ..., z_{k-1}``."""
    if k < 1:
        raise ValueError("need at least one puncture")
    return ("x", "y") + tuple(f"z{j}" for j in range(1, k))


def twist_x(names: Sequence[str] = ("x", "y")) -> FreeAut:
    """Right-handed twist along x: ``x -> x, y -> y x``; other generators fixed."""
    names = tuple(names)
    imgs = ["x", "y x"] + list(names[2:])
    inv = ["x", "y X"] + list(names[2:])
    return FreeAut.from_strings(names, imgs, inv, "Dx")


def twist_y(names: Sequence[str] = ("x", "y")) -> FreeAut:
    """Right-handed twist along y: ``x -> x Y, y -> y``; other generators fixed."""
    names = tuple(names)
    imgs = ["x Y", "y"] + list(names[2:])
    inv = ["x y", "y"] + list(names[2:])
    return FreeAut.from_strings(names, imgs, inv, "Dy")


_TWIST_RE = re.compile(r"^(D[xy])(?:\^\(?(-?\d+)\)?)?$")


def parse_twist_word(text: str) -> list[tuple[str, int]]:
    """Parse ``"Dx Dy^4 Dx^-1"`` into ``[("Dx", 1), ("Dy", 4), ("Dx", -1)]``."""
    out = []
    text = text.strip()
    if text in ("", "id", "1"):
        return out
    for tok in text.replace("*", " ").split():
        m = _TWIST_RE.match(tok)
        if not m:
            raise ValueError(f"bad twist token {tok!r}; expected Dx, Dy, Dx^k or Dy^k")
        out.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
    return out


def twist_word_aut(text_or_word, names: Sequence[str] = ("x", "y")) -> FreeAut:
    """Automorphism of a product of twists, composed right-to-left."""
    word = parse_twist_word(text_or_word) if isinstance(text_or_word, str) else list(text_or_word)
    names = tuple(names)
    gens = {"Dx": twist_x(names), "Dy": twist_y(names)}
    result = FreeAut.identity(names)
    for g, k in word:
        result = result.compose(gens[g] ** k)
    label = " ".join(g if k == 1 else f"{g}^{k}" for g, k in word) or "id"
    return FreeAut(names, result.images, result.inverse_images, label)


def torus_boundary_words(k: int = 1) -> list[FreeWord]:
    """Boundary words of the k-punctured torus.

    ``beta_j = z_j`` for ``j < k`` and ``beta_k = Z_{k-1} ... Z_1 x y X Y``.
    """
    names = torus_names(k)
    words = [FreeWord.generator(names, 1 + j) for j in range(1, k)]
    last = [-(2 + j) for j in range(k - 1, 0, -1)] + [1, 2, -1, -2]
    words.append(FreeWord(tuple(last), names))
    return words


def filling_map(k: int, keep: int) -> FreeHom:
    """Quotient of the k-punctured torus group obtained by filling every
    puncture except ``keep`` (1-based), landing in ``F(x, y)``.

    The kept puncture becomes the commutator ``x y X Y``.
    """
    if not 1 <= keep <= k:
        raise ValueError(f"puncture index {keep} out of range 1..{k}")
    src = torus_names(k)
    tgt = ("x", "y")
    comm = FreeWord((1, 2, -1, -2), tgt)
    one = FreeWord.identity(tgt)
    imgs = [FreeWord.generator(tgt, 0), FreeWord.generator(tgt, 1)]
    for j in range(1, k):
        imgs.append(comm if j == keep else one)
    return FreeHom(src, tgt, tuple(imgs))


def is_rank2_automorphism(images: Sequence[FreeWord]) -> bool:
    """Nielsen's criterion: an endomorphism of F(x, y) is an automorphism iff
    the images of x, y have commutator conjugate to ``[x, y]^{+-1}``."""
    a, b = images
    comm = a * b * a.inverse() * b.inverse()
    names = a.names
    ref = FreeWord((1, 2, -1, -2), names)
    return comm.is_conjugate_to(ref) or comm.is_conjugate_to(ref.inverse())


def fixes_punctures(f: FreeAut, k: int) -> bool:
    """True if ``f`` maps each boundary word to a conjugate of itself or its
    inverse."""
    for beta in torus_boundary_words(k):
        img = f.apply(beta)
        if not (img.is_conjugate_to(beta) or img.is_conjugate_to(beta.inverse())):
            return False
    return True


def theta(f: FreeAut, i: int) -> FreeAut:
    """Induced automorphism of F(x, y) after filling every puncture but the
    ``i``-th one of the k-punctured torus (k read off from the rank of ``f``).

    Raises :class:`NotAnAutomorphism` if ``f`` does not fix the punctures or
    the induced map fails validation.
    """
    k = f.rank - 1
    if f.names != torus_names(k):
        raise ValueError(f"expected generators {torus_names(k)}, got {f.names}")
    if not f.is_certified():
        raise NotAnAutomorphism("theta needs a certified inverse")
    if not fixes_punctures(f, k):
        raise NotAnAutomorphism("monodromy does not fix every puncture; pass to a power first")
    q = filling_map(k, i)
    imgs = tuple(q(f.images[j]) for j in range(2))
    inv = tuple(q(f.inverse_images[j]) for j in range(2))
    label = f"theta_{i}({f.label})" if f.label else ""
    try:
        g = FreeAut(q.target, imgs, inv, label)
    except NotAnAutomorphism as exc:
        raise NotAnAutomorphism(f"theta_{i} image is not an automorphism: {exc}") from None
    if not is_rank2_automorphism(list(imgs)):
        raise NotAnAutomorphism(f"theta_{i} image fails the commutator test")
    return g


# ---------------------------------------------------------------------------
# Finitely presented groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FPGroup:
    names: tuple
    relators: tuple = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        rels = []
        for r in self.relators:
            if r.names != names:
                raise ValueError("relator over the wrong alphabet")
            if r.is_identity():
                continue
            rels.append(r)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def ngens(self) -> int:
        return len(self.names)

    @classmethod
    def free(cls, names: Sequence[str]) -> "FPGroup":
        return cls(tuple(names), ())

    @classmethod
    def parse(cls, text: str) -> "FPGroup":
        """Parse ``gens: x y t ; rels: t x T X, t y T Y``."""
        m = re.match(r"^\s*gens:\s*(.*?)\s*;\s*rels:\s*(.*)$", text, re.S)
        if not m:
            raise ValueError("expected 'gens: ... ; rels: ...'")
        names = tuple(m.group(1).split())
        rels = [s for s in m.group(2).split(",") if s.strip()]
        return cls(names, tuple(FreeWord.parse(r, names) for r in rels))

    def __str__(self) -> str:
        return f"gens: {' '.join(self.names)} ; rels: " + ", ".join(map(str, self.relators))

    def relation_matrix(self) -> list[list[int]]:
        """One row per relator: exponent sums."""
        return [r.exponent_vector() for r in self.relators]

    def abelian_invariants(self) -> tuple[int, list[int]]:
        """``(free rank, torsion coefficients)`` of the abelianization."""
        if not self.relators:
            return self.ngens, []
        diag, rank = smith_normal_form(self.relation_matrix())
        torsion = [d for d in diag if d > 1]
        return self.ngens - rank, torsion

    def abelianization_rank(self) -> int:
        return self.abelian_invariants()[0]

    def add_relators(self, words: Iterable[FreeWord]) -> "FPGroup":
        return FPGroup(self.names, self.relators + tuple(words))


def abelianization_rank(G: FPGroup) -> int:
    return G.abelianization_rank()


def kill_generators(G: FPGroup, idxs: Iterable[int]) -> FPGroup:
    """Quotient by setting the listed generators (0-based) to 1.

    The killed generators are erased from every relator and dropped from the
    alphabet.
    """
    kill = set(idxs)
    for i in kill:
        if not 0 <= i < G.ngens:
            raise ValueError(f"generator index {i} out of range")
    keep = [i for i in range(G.ngens) if i not in kill]
    new_index = {old: new + 1 for new, old in enumerate(keep)}
    names = tuple(G.names[i] for i in keep)
    rels = []
    for r in G.relators:
        letters = [new_index[abs(a) - 1] * (1 if a > 0 else -1)
                   for a in r.letters if abs(a) - 1 not in kill]
        rels.append(FreeWord(tuple(letters), names))
    return FPGroup(names, tuple(rels))


def eliminate_generator(G: FPGroup, idx: int, word: FreeWord) -> FPGroup:
    """Tietze move: substitute ``word`` (not involving generator ``idx``) for
    generator ``idx`` and drop it."""
    if word.names != G.names:
        raise ValueError("substitution word over the wrong alphabet")
    if any(abs(a) - 1 == idx for a in word.letters):
        raise ValueError("substitution word involves the eliminated generator")
    imgs = [FreeWord.generator(G.names, i) for i in range(G.ngens)]
    imgs[idx] = word
    rels = [_substitute(imgs, r, G.names) for r in G.relators]
    return kill_generators(FPGroup(G.names, tuple(rels)), [idx])


def mapping_torus_presentation(
    f: FreeAut,
    cone_orders: Sequence[tuple] = (),
    filled: Sequence[FreeWord] = (),
    stable_letter: str = "t",
) -> FPGroup:
    """Presentation ``< gens, t | t g T = f(g), c^n = 1, w = 1 >``.

    ``cone_orders`` lists ``(generator index or FreeWord, order)`` pairs with
    order at least 2; ``filled`` lists words killed outright (punctures
    filled by disks).
    """
    names = f.names
    t = stable_letter
    while t in names:
        t = t + "_"
    allnames = names + (t,)
    tl = len(allnames)

    def lift(w: FreeWord) -> FreeWord:
        return FreeWord(w.letters, allnames)

    rels = []
    for i in range(f.rank):
        g = (i + 1,)
        rels.append(FreeWord((tl,) + g + (-tl,), allnames) * lift(f.images[i]).inverse())
    for c, order in cone_orders:
        if order < 2:
            raise ValueError(f"cone order {order} < 2")
        if isinstance(c, int):
            if not 0 <= c < f.rank:
                raise ValueError(f"cone generator index {c} out of range")
            w = FreeWord.generator(names, c)
        else:
            w = c
        rels.append(lift(w) ** order)
    for w in filled:
        rels.append(lift(w))
    return FPGroup(allnames, tuple(rels))


# ---------------------------------------------------------------------------
# Schreier graphs and Reidemeister-Schreier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchreierTree:
    """BFS spanning tree of the Schreier graph of a permutation action.

    Sheets are ``1..degree``.  The edge ``(s, g)`` runs from sheet ``s`` to
    ``perms[g](s)``.  ``generators`` lists the non-tree edges, which form a
    free basis of the stabilizer of ``basepoint``.
    """

    degree: int
    perms: tuple
    basepoint: int
    parent: tuple  # parent[s] = (prev sheet, gen, sign) or None for the root
    tree_edges: frozenset
    generators: tuple
    gen_index: dict = field(compare=False)
    inverses: tuple = field(default=(), compare=False)

    @classmethod
    def build(cls, perms: Sequence[Perm], basepoint: int = 1) -> "SchreierTree":
        perms = tuple(perms)
        if not perms:
            raise ValueError("need at least one permutation")
        d = perms[0].degree
        if any(p.degree != d for p in perms):
            raise ValueError("permutations of different degrees")
        invs = [p.inverse() for p in perms]
        parent: list = [None] * (d + 1)
        seen = [False] * (d + 1)
        seen[basepoint] = True
        order = [basepoint]
        tree = set()
        k = 0
        while k < len(order):
            s = order[k]
            k += 1
            for g, p in enumerate(perms):
                t = p(s)
                if not seen[t]:
                    seen[t] = True
                    parent[t] = (s, g, 1)
                    tree.add((s, g))
                    order.append(t)
                t = invs[g](s)
                if not seen[t]:
                    seen[t] = True
                    parent[t] = (s, g, -1)
                    tree.add((t, g))
                    order.append(t)
        if len(order) != d:
            raise ValueError(
                f"action is not transitive; orbits {orbits(list(perms), d)}"
            )
        gens = tuple((s, g) for s in range(1, d + 1) for g in range(len(perms))
                     if (s, g) not in tree)
        return cls(d, perms, basepoint, tuple(parent), frozenset(tree), gens,
                   {e: i for i, e in enumerate(gens)}, tuple(invs))

    def path_to(self, s: int) -> list[tuple[int, int, int]]:
        """Tree path from the basepoint to ``s`` as steps ``(from, gen, sign)``."""
        steps = []
        while self.parent[s] is not None:
            prev, g, e = self.parent[s]
            steps.append((prev, g, e))
            s = prev
        steps.reverse()
        return steps

    def step(self, s: int, g: int, e: int) -> int:
        if e > 0:
            return self.perms[g](s)
        return (self.inverses[g] if self.inverses else self.perms[g].inverse())(s)

    def walk(self, letters: Sequence[int], start: int) -> tuple[list[tuple[int, int, int]], int]:
        """Follow a word from ``start``; returns the steps and the end sheet."""
        s = start
        steps = []
        for a in letters:
            g, e = abs(a) - 1, (1 if a > 0 else -1)
            steps.append((s, g, e))
            s = self.step(s, g, e)
        return steps, s

    def edge_of(self, step: tuple[int, int, int]) -> tuple[tuple[int, int], int]:
        """Underlying edge and traversal sign of a step."""
        s, g, e = step
        if e > 0:
            return (s, g), 1
        return (self.step(s, g, -1), g), -1

    def rewrite_steps(self, steps: Sequence[tuple[int, int, int]]) -> tuple[int, ...]:
        """Sequence of non-tree edges crossed, as signed 1-based indices."""
        out = []
        for st in steps:
            edge, sign = self.edge_of(st)
            i = self.gen_index.get(edge)
            if i is not None:
                out.append(sign * (i + 1))
        return free_reduce(out)

    def subgroup_names(self, base_names: Sequence[str]) -> tuple[str, ...]:
        return tuple(f"{base_names[g]}_{s}" for s, g in self.generators)


def subgroup_presentation(
    G: FPGroup, rep: Sequence[Perm], basepoint: int = 1
) -> tuple[FPGroup, SchreierTree]:
    """Reidemeister-Schreier presentation of the stabilizer of ``basepoint``.

    ``rep`` gives one permutation per generator of ``G``.  Every relator of
    ``G`` must act trivially and the action must be transitive.
    """
    rep = tuple(rep)
    if len(rep) != G.ngens:
        raise ValueError("need one permutation per generator")
    tree = SchreierTree.build(rep, basepoint)
    for r in G.relators:
        for s in range(1, tree.degree + 1):
            _, end = tree.walk(r.letters, s)
            if end != s:
                raise ValueError(f"relator {r} is not satisfied by the representation")
    names = tree.subgroup_names(G.names)
    rels = []
    for s in range(1, tree.degree + 1):
        prefix = tree.path_to(s)
        for r in G.relators:
            steps, _ = tree.walk(r.letters, s)
            rels.append(FreeWord(tree.rewrite_steps(prefix + steps), names))
    return FPGroup(names, tuple(rels)), tree


def rank_of_relation_matrix(G: FPGroup) -> int:
    """Rank of the relator exponent matrix over Q (cross-check for SNF)."""
    M = G.relation_matrix()
    return rational_rank(M) if M else 0
