"""
End-to-end runs: build a cover, lift a monodromy, and compare first Betti
numbers of mapping tori downstairs and upstairs.

Every run returns a report whose ``checks`` record each claimed inequality
or agreement on the data it carries.  Reports serialize to JSON with sorted
keys and no timing data, so equal inputs give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cover import (
    MANIFOLD,
    CoverLoop,
    PermCover,
    canonical_twist_lift,
    fiber_product,
    grid_cover,
    minimal_lifting_power,
    orbifold_fill,
    projection,
    pulled_back_cover,
    punctured_torus,
    trivial_cover,
)
from .exact_algebra import Perm, rational_rank
from .fpgroup import (
    FPGroup,
    FreeAut,
    FreeWord,
    NotAnAutomorphism,
    eliminate_generator,
    filling_map,
    fixes_punctures,
    kill_generators,
    mapping_torus_presentation,
    parse_twist_word,
    subgroup_presentation,
    theta,
    torus_boundary_words,
    twist_word_aut,
)
from .homology import (
    H1Basis,
    HomologyAction,
    betti_mapping_torus,
    betti_oracle,
    fixed_pair_search,
    gram,
    h1_action,
)
from .triangle import case2_certificates, case2_cover, find_triangle_quotient

SCHEMA = "bundlecover.betti-report/1"
CASE1_SIGMA = "(1 2 3 4)"


class CertificateViolation(AssertionError):
    """A report check failed; indicates a bug, never an expected outcome."""


@dataclass
class BettiReport:
    kind: str
    monodromy: dict
    power: int
    n: int | None
    covers: list
    lifts: list
    base_b1: dict
    cover_b1: dict
    certificates: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failed_checks(self) -> list[str]:
        return sorted(k for k, v in self.checks.items() if not v)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "monodromy": self.monodromy,
            "power": self.power,
            "n": self.n,
            "covers": self.covers,
            "lifts": self.lifts,
            "base_b1": self.base_b1,
            "cover_b1": self.cover_b1,
            "certificates": _plain(self.certificates),
            "checks": self.checks,
            "passed": self.passed,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    def render_text(self) -> str:
        return render_report(self.to_dict())


def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def render_report(d: dict) -> str:
    """Human summary built only from a report's JSON form."""
    lines = [f"{d['kind']}: monodromy {d['monodromy'].get('word') or d['monodromy'].get('label', '?')}"
             f", power m = {d['power']}" + (f", cone order n = {d['n']}" if d.get("n") else "")]
    for c in d["covers"]:
        lines.append(f"  cover {c.get('name', '')}: degree {c['degree']}, genus {c['genus']}, "
                     f"{len(c['punctures'])} punctures")
    lines.append(f"  base b1 = {d['base_b1']['formula']} (oracle {d['base_b1']['oracle']})")
    cb = d["cover_b1"]
    lines.append(f"  cover b1 = {cb['formula']} (oracle {cb['oracle']}) over {len(d['lifts'])} lifts")
    dims = [l["fixed_dim"] for l in d["lifts"]]
    if dims:
        lines.append(f"  fixed dimensions per lift: {dims}")
    for k in sorted(d["checks"]):
        lines.append(f"  [{'ok' if d['checks'][k] else 'FAIL'}] {k}")
    lines.append("PASSED" if d["passed"] else "FAILED")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Shared pieces
# ---------------------------------------------------------------------------

def case1_cover() -> PermCover:
    s = Perm.from_cycles([[1, 2, 3, 4]], 4)
    c = grid_cover(4, [s, s.inverse(), s, s.inverse()])
    return c


def _monodromy(f, names) -> tuple[FreeAut, list | None, dict]:
    """Accept a twist word or a FreeAut; return (aut, parsed word, record)."""
    if isinstance(f, str):
        word = parse_twist_word(f)
        aut = twist_word_aut(word, names)
        return aut, word, {"word": aut.label, "automorphism": aut.to_text()}
    if isinstance(f, FreeAut):
        if tuple(f.names) != tuple(names):
            raise ValueError(f"automorphism uses generators {f.names}, expected {tuple(names)}")
        if not f.is_certified():
            raise NotAnAutomorphism("monodromy needs a certified inverse")
        return f, None, {"label": f.label, "automorphism": f.to_text()}
    raise TypeError("monodromy must be a twist word or a FreeAut")


def _in_twist_subgroup(word, rows: int = 4) -> bool:
    return word is not None and all(k % rows == 0 for g, k in word if g == "Dy")


def _base_b1(base, f: FreeAut, m: int, n: int | None) -> dict:
    c0 = trivial_cover(base)
    lam = Perm.identity(1)
    a = h1_action(c0, f, lam, power=m)
    return {"formula": betti_mapping_torus(a, n), "oracle": betti_oracle(c0, f, lam, n, power=m)}


def _lift_records(c: PermCover, f: FreeAut, m: int, lifts: Sequence[Perm], n, basis: H1Basis,
                  oracle: str = "all") -> tuple[list, list[HomologyAction]]:
    records, actions = [], []
    for lam in lifts:
        a = h1_action(c, f, lam, power=m, basis=basis)
        actions.append(a)
        rec = {
            "lift": str(lam),
            "fixed_dim": a.fixed_dim,
            "b1_formula": betti_mapping_torus(a, n),
            "symplectic": a.is_symplectic(),
        }
        records.append(rec)
    if records:
        best = max(range(len(records)), key=lambda i: (records[i]["fixed_dim"], -i))
        for i, rec in enumerate(records):
            if oracle == "all" or i == best:
                rec["b1_oracle"] = betti_oracle(c, f, lifts[i], n, power=m)
    return records, actions


def _best(records) -> int:
    return max(range(len(records)), key=lambda i: (records[i]["fixed_dim"], -i))


def _cover_b1(records) -> dict:
    i = _best(records)
    return {"formula": records[i]["b1_formula"], "oracle": records[i].get("b1_oracle"),
            "lift": records[i]["lift"]}


def _common_checks(records, base_b1) -> dict:
    return {
        "base_formula_equals_oracle": base_b1["formula"] == base_b1["oracle"],
        "lift_formula_equals_oracle": all(r["b1_formula"] == r["b1_oracle"]
                                          for r in records if "b1_oracle" in r),
        "symplectic_on_every_lift": all(r["symplectic"] for r in records),
        "cover_b1_at_least_base_b1": max(r["b1_formula"] for r in records) >= base_b1["formula"],
    }


def _grid_run(kind, c, f, word, record, n, bound, oracle, extra_certs=None):
    m, lifts = minimal_lifting_power(c, f, bound)
    basis = H1Basis(c)
    records, actions = _lift_records(c, f, m, lifts, n, basis, oracle)
    base = _base_b1(c.base, f, m, n)
    fill = orbifold_fill(c, n)
    certs = dict(extra_certs or {})
    certs["fill"] = fill if fill == MANIFOLD else {"cone_orders": fill}
    # canonical lift from the twist decomposition when f^m lies in <Dx, Dy^4>
    lifts_for_pair = None
    canon_index = None
    if _in_twist_subgroup(word, c.meta["rows"]):
        lam = canonical_twist_lift(c, word) ** m
        canon_index = lifts.index(lam)
        lifts_for_pair = None  # default Dx / Dy^4 lifts
    pair = fixed_pair_search(c, basis, lifts_for_pair)
    fixing = [i for i, a in enumerate(actions) if all(a.fixes(v) for v in pair.classes)]
    certs["fixed_pair"] = pair.to_dict()
    certs["lifts_fixing_all_row_classes"] = [records[i]["lift"] for i in fixing]
    if canon_index is not None:
        certs["canonical_lift"] = records[canon_index]["lift"]
    checks = _common_checks(records, base)
    checks["fixed_pair_certificate"] = pair.passes()
    checks["row_classes_fixed_by_some_lift"] = bool(fixing)
    if canon_index is not None:
        checks["row_classes_fixed_by_canonical_lift"] = canon_index in fixing
    report = BettiReport(kind, record, m, n, [dict(c.to_dict(), name=c.name)], records,
                         base, _cover_b1(records), certs, checks)
    return report, pair, records


def run_case1(f="Dx Dy^4", n: int = 2, bound: int = 64, oracle: str = "all") -> BettiReport:
    """The 16-sheet grid cover with cuts ``(1 2 3 4)`` and its inverse."""
    c = case1_cover()
    aut, word, record = _monodromy(f, c.base.names)
    report, pair, records = _grid_run("case1", c, aut, word, record, n, bound, oracle)
    report.checks["fill_is_manifold"] = report.certificates["fill"] == MANIFOLD or n != 2
    report.checks["intersection_of_pair_is_2"] = pair.intersection == 2
    report.checks["cover_b1_exceeds_base_b1"] = (report.cover_b1["formula"]
                                                 > report.base_b1["formula"])
    report.checks["fixed_dim_at_least_2"] = max(r["fixed_dim"] for r in records) >= 2
    return report


def run_case2(n: int = 3, f="Dx Dy^4", bound: int = 64, seed: int = 0, cap: int = 10_000,
              min_order: int | None = None, budget: int = 20_000,
              oracle: str = "all") -> BettiReport:
    """Grid cover from a verified ``(2n, 2n, n)`` triangle-group quotient."""
    if n < 3:
        raise ValueError("run_case2 needs n >= 3")
    if min_order is None:
        min_order = 2 * n + 1  # skip the cyclic quotient
    cert = find_triangle_quotient(n, budget=budget, seed=seed, cap=cap, min_order=min_order)
    c = case2_cover(cert)
    aut, word, record = _monodromy(f, c.base.names)
    counts = case2_certificates(cert)
    report, pair, records = _grid_run("case2", c, aut, word, record, n, bound, oracle,
                                      {"quotient": cert.to_dict(), "row2": counts})
    N = cert.order
    bound_dim = counts["dim_bound"]
    report.checks["quotient_verified"] = cert.verify()
    report.checks["cycle_counts_match_orders"] = counts["cycle_counts"] == (
        N // (2 * n), N // (2 * n), N // n)
    report.checks["row_classes_reach_2_genus_row2"] = pair.dim >= 2 * counts["genus_row2"]
    report.checks["row_classes_reach_bound"] = pair.dim >= bound_dim
    report.checks["fixed_dim_reaches_bound"] = max(r["fixed_dim"] for r in records) >= bound_dim
    report.certificates["row_class_dim"] = pair.dim
    return report


# ---------------------------------------------------------------------------
# Several punctures
# ---------------------------------------------------------------------------

def pullback_class(c_plus: PermCover, alpha_plus: CoverLoop, c: PermCover,
                   quotient=None) -> CoverLoop:
    """Loop in ``c`` over the unfilled surface with the same sheets and
    ``x, y`` steps as ``alpha_plus``.

    ``c`` must be the cover induced from ``c_plus`` along the filling map
    (taken from ``c.meta`` unless given).
    """
    q = quotient or c.meta.get("filling")
    if q is None:
        raise ValueError("cannot tell which filling map relates the two covers")
    if c.degree != c_plus.degree or any(
            c.perms[g] != c_plus.word_perm(q.images[g]) for g in range(c.rank)):
        raise ValueError("covers do not correspond under the filling map")
    for g in range(c_plus.rank):
        if q.images[g].letters != (g + 1,):
            raise ValueError("filling map must keep the surviving generators")
    alpha_plus.validate(c_plus)
    alpha = CoverLoop(alpha_plus.steps)
    alpha.validate(c)
    return alpha


def transfer(product: PermCover, factor: int, chain_steps: CoverLoop) -> list[int]:
    """Full preimage in a fiber product of a loop in one factor, as a dense
    edge chain of the product."""
    proj = projection(product, factor)
    comp = product.meta["factors"][factor]
    coef: dict = {}
    for s, g, e in chain_steps.steps:
        edge = (s, g) if e > 0 else (comp.inverses[g](s), g)
        coef[edge] = coef.get(edge, 0) + e
    out = [0] * product.num_edges
    for t in range(1, product.degree + 1):
        for g in range(product.rank):
            a = coef.get((proj[t - 1], g))
            if a:
                out[product.edge_index(t, g)] += a
    return out


def multik_covers(k: int) -> tuple[PermCover, list[PermCover], PermCover]:
    """The Case 1 cover of the once-punctured torus, its pullbacks along the
    fillings that keep one puncture each, and their fiber product."""
    base = punctured_torus(k)
    c_plus = case1_cover()
    factors = [pulled_back_cover(base, c_plus, filling_map(k, i)) for i in range(1, k + 1)]
    prod = fiber_product(*factors)
    prod.meta["factors"] = factors
    return c_plus, factors, prod


def run_multik(k: int = 2, f="Dx Dy^4", n: int = 2, bound: int = 64,
               oracle: str = "best") -> BettiReport:
    """Fiber product over the ``k``-punctured torus of covers pulled back
    from the Case 1 cover, with ``2k`` transferred fixed classes."""
    if k < 2:
        raise ValueError("run_multik needs k >= 2")
    base = punctured_torus(k)
    aut, word, record = _monodromy(f, base.names)
    if not fixes_punctures(aut, k):
        raise NotAnAutomorphism("monodromy must fix every puncture")
    thetas = {str(i): theta(aut, i).to_text() for i in range(1, k + 1)}
    c_plus, factors, prod = multik_covers(k)
    m, lifts = minimal_lifting_power(prod, aut, bound)
    pair = fixed_pair_search(c_plus)
    basis = H1Basis(prod)
    vectors, labels = [], []
    for i, fac in enumerate(factors):
        for which, idx in (("delta", pair.delta), ("delta_star", pair.delta_star)):
            loop = pullback_class(c_plus, pair.loop(idx), fac)
            vectors.append(basis.coords(transfer(prod, i, loop)))
            labels.append(f"{which}_{i + 1}")
    q = basis.quotient
    rank = rational_rank([q.project(v) for v in vectors])
    G = gram(basis, vectors)
    records, actions = _lift_records(prod, aut, m, lifts, n, basis, oracle="none")
    fixing = [i for i, a in enumerate(actions) if all(a.fixes(v) for v in vectors)]
    # oracle on the lift certifying the classes and on the best lift
    chosen = sorted(set(fixing[:1] + [_best(records)]))
    for i in chosen:
        records[i]["b1_oracle"] = betti_oracle(prod, aut, lifts[i], n, power=m)
    base_b1 = _base_b1(base, aut, m, n)
    certs = {
        "thetas": thetas,
        "factors": [dict(fc.to_dict(), name=f"filled except puncture {i + 1}")
                    for i, fc in enumerate(factors)],
        "classes": labels,
        "class_rank": rank,
        "gram": [[int(x) for x in row] for row in G],
        "lifts_fixing_classes": [records[i]["lift"] for i in fixing],
        "fill": _fill_record(prod, n),
    }
    checks = _common_checks(records, base_b1)
    checks["classes_independent"] = rank == 2 * k
    checks["pairs_intersect"] = all(G[2 * i][2 * i + 1] != 0 for i in range(k))
    checks["classes_fixed_by_some_lift"] = bool(fixing)
    if fixing:
        certified_b1 = records[fixing[0]]["b1_formula"]
        checks["b1_at_least_2k_plus_1"] = certified_b1 >= 2 * k + 1
        checks["certified_lift_oracle_agrees"] = (records[fixing[0]]["b1_oracle"] == certified_b1)
    else:
        checks["b1_at_least_2k_plus_1"] = False
    cross = [G[a][b] for a in range(2 * k) for b in range(2 * k) if a // 2 != b // 2]
    certs["cross_pairs_zero"] = not any(cross)
    return BettiReport("multik", record, m, n,
                       [dict(prod.to_dict(), name=f"fiber product of {k} pullbacks")],
                       records, base_b1, _cover_b1(records), certs, checks)


def _fill_record(c: PermCover, n):
    res = orbifold_fill(c, n)
    return res if res == MANIFOLD else {"cone_orders": res}


# ---------------------------------------------------------------------------
# Filling all but one cone point
# ---------------------------------------------------------------------------

@dataclass
class ReductionReport:
    k: int
    keep: int
    cones: tuple
    power: int
    monodromy: dict
    theta: str
    b1_full: int
    b1_reduced: int
    checks: dict
    downstream: dict | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) and (
            self.downstream is None or self.downstream.get("passed", False))

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "reduction",
            "k": self.k,
            "keep": self.keep,
            "cones": list(self.cones),
            "power": self.power,
            "monodromy": self.monodromy,
            "theta": self.theta,
            "b1_full": self.b1_full,
            "b1_reduced": self.b1_reduced,
            "checks": self.checks,
            "downstream": self.downstream,
            "passed": self.passed,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    def render_text(self) -> str:
        d = self.to_dict()
        lines = [f"reduction: k = {d['k']}, keep puncture {d['keep']}, cones {d['cones']}, "
                 f"power m = {d['power']}",
                 f"  b1 full = {d['b1_full']}, b1 after filling = {d['b1_reduced']}"]
        for name in sorted(d["checks"]):
            lines.append(f"  [{'ok' if d['checks'][name] else 'FAIL'}] {name}")
        lines.append("PASSED" if d["passed"] else "FAILED")
        return "\n".join(lines)


def _cone_presentation(f: FreeAut, k: int, cones: Sequence[int]) -> FPGroup:
    cone_list, filled = [], []
    for beta, order in zip(torus_boundary_words(k), cones):
        if order == 1:
            filled.append(beta)
        else:
            cone_list.append((beta, order))
    return mapping_torus_presentation(f, cone_list, filled)


def run_reduction(f, keep: int, cones: Sequence[int], bound: int = 64,
                  downstream: bool = False) -> ReductionReport:
    """Compare the mapping torus of ``f`` on the torus with cone points of
    orders ``cones`` to the one obtained by filling all but ``keep``.

    The quotient map sends ``x, y, t`` to themselves and the other puncture
    generators through the filling map; it is a homomorphism because the
    filling map intertwines ``f`` with ``theta_keep(f)`` on every generator,
    which is checked letter for letter.
    """
    k = len(cones)
    if k < 1:
        raise ValueError("need at least one cone order")
    if any(c < 1 for c in cones):
        raise ValueError("cone orders must be positive")
    base = punctured_torus(k)
    aut, word, record = _monodromy(f, base.names)
    m = 1
    power = aut
    while not fixes_punctures(power, k):
        m += 1
        if m > bound:
            raise NotAnAutomorphism(f"no power up to {bound} fixes every puncture")
        power = power.compose(aut)
    if k == 1:
        reduced = power
        qmap = None
    else:
        reduced = theta(power, keep)
        qmap = filling_map(k, keep)
    full = _cone_presentation(power, k, cones)
    small = _cone_presentation(reduced, 1, [cones[keep - 1]])
    checks = {}
    if qmap is not None:
        intertwines = all(
            qmap(power.images[g]) == reduced.apply(qmap(FreeWord.generator(base.names, g)))
            for g in range(base.rank))
        checks["filling_intertwines_monodromy"] = intertwines
        # literal Tietze route: fill the other punctures, then remove z_keep
        drop = [1 + j for j in range(1, k) if j != keep]
        G = kill_generators(full, drop)
        if keep < k:
            zi = G.names.index(f"z{keep}")
            comm = FreeWord((1, 2, -1, -2), G.names)
            G = eliminate_generator(G, zi, comm)
        small_rels = {_cyclic_key(r) for r in small.relators}
        image_rels = {_cyclic_key(r) for r in G.relators}
        checks["reduced_relators_in_image"] = small_rels <= image_rels
        checks["extra_relators_hold"] = _extra_relators_hold(G, small, reduced)
    else:
        checks["filling_intertwines_monodromy"] = True
    b_full = full.abelianization_rank()
    b_small = small.abelianization_rank()
    checks["b1_full_at_least_b1_reduced"] = b_full >= b_small
    report = ReductionReport(k, keep, tuple(cones), m, record, reduced.to_text(),
                             b_full, b_small, checks)
    if downstream:
        nk = cones[keep - 1]
        if nk == 2:
            sub = run_case1(reduced, n=2, bound=bound)
        elif nk >= 3:
            sub = run_case2(nk, reduced, bound=bound)
        else:
            sub = None
        report.downstream = sub.to_dict() if sub else None
    return report


def _cyclic_key(w: FreeWord):
    """Canonical form of a relator up to cyclic permutation and inversion."""
    letters = w.cyclic_reduction()
    if not letters:
        return ()
    cands = []
    for seq in (letters, tuple(-a for a in reversed(letters))):
        for i in range(len(seq)):
            cands.append(seq[i:] + seq[:i])
    return min(cands)


def _extra_relators_hold(G: FPGroup, small: FPGroup, reduced: FreeAut) -> bool:
    """Each relator of ``G`` either is a relator of ``small`` up to cyclic
    order, or has the form ``t u T v^-1`` with ``v = reduced(u)`` freely,
    which the conjugation relators of ``small`` imply."""
    if G.names != small.names:
        return False
    keys = {_cyclic_key(r) for r in small.relators}
    tl = len(G.names)
    names2 = reduced.names
    for r in G.relators:
        if _cyclic_key(r) in keys:
            continue
        L = r.letters
        if not L or L[0] != tl:
            return False
        try:
            close = L.index(-tl)
        except ValueError:
            return False
        u = L[1:close]
        rest = L[close + 1:]
        if any(abs(a) == tl for a in u + rest):
            return False
        v = FreeWord(tuple(-a for a in reversed(rest)), names2)
        if reduced.apply(FreeWord(u, names2)) != v:
            return False
    return True


# ---------------------------------------------------------------------------
# Finite-index subgroups of finitely presented groups
# ---------------------------------------------------------------------------

def transfer_check(G: FPGroup, rep: Sequence[Perm], basepoint: int = 1) -> dict:
    """``b1`` of a finite-index subgroup versus ``b1`` of the group."""
    H, tree = subgroup_presentation(G, rep, basepoint)
    bG, bH = G.abelianization_rank(), H.abelianization_rank()
    return {"index": tree.degree, "b1_group": bG, "b1_subgroup": bH, "holds": bH >= bG}
