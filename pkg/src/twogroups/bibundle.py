"""Finite Hilsum-Skandalis bibundles between finite groupoids.

A bibundle K -> K' is a finite set E with moments J_l: E -> Ob(K),
J_r: E -> Ob(K') and commuting actions: k·e is defined when src(k) = J_l(e)
and moves J_l to tgt(k); e·k' is defined when J_r(e) = tgt(k') and moves J_r
to src(k').  Right principality: J_l is surjective and
(e, k') -> (e, e·k') is a bijection onto pairs with equal left moments.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groupoid import FiniteGroupoid, GroupoidHom
from .reports import ValidationReport


def pair_id(a, b):
    return f"({a}|{b})"


@dataclass
class Bibundle:
    left: FiniteGroupoid
    right: FiniteGroupoid
    total: tuple
    lmom: dict      # e -> object of left
    rmom: dict      # e -> object of right
    lact: dict      # (arrow of left, e) -> e'
    ract: dict      # (e, arrow of right) -> e'


def from_functor(f: GroupoidHom) -> Bibundle:
    """The bibundle of a functor: E = {(x, k') : tgt(k') = f(x)} with
    k·(x,k') = (tgt k, f(k)∘k') and (x,k')·k'' = (x, k'∘k'')."""
    src_g, dst = f.dom, f.cod
    total = []
    lmom, rmom = {}, {}
    for x in src_g.objects:
        for k in dst.arrows:
            if dst.tgt[k] == f.obj_map[x]:
                e = pair_id(x, k)
                total.append(e)
                lmom[e] = x
                rmom[e] = dst.src[k]
    lact, ract = {}, {}
    for x in src_g.objects:
        for k in dst.arrows:
            if dst.tgt[k] != f.obj_map[x]:
                continue
            e = pair_id(x, k)
            for a in src_g.arrows:
                if src_g.src[a] == x:
                    lact[(a, e)] = pair_id(src_g.tgt[a], dst.comp[(f.arr_map[a], k)])
            for b in dst.arrows:
                if dst.tgt[b] == dst.src[k]:
                    ract[(e, b)] = pair_id(x, dst.comp[(k, b)])
    return Bibundle(src_g, dst, tuple(total), lmom, rmom, lact, ract)


def identity_bibundle(g: FiniteGroupoid) -> Bibundle:
    from .groupoid import identity_hom

    return from_functor(identity_hom(g))


@dataclass
class PrincipalityReport:
    structural: list
    action_violations: list
    right_principal: bool
    morita: bool
    right_witness: tuple | None = None
    left_witness: tuple | None = None

    @property
    def ok(self):
        return not self.structural and not self.action_violations and self.right_principal


def validate_principal(b: Bibundle) -> PrincipalityReport:
    structural, bad = [], []
    K, Kp = b.left, b.right
    eset = set(b.total)
    for e in b.total:
        if b.lmom.get(e) not in set(K.objects):
            structural.append(("lmom", e))
        if b.rmom.get(e) not in set(Kp.objects):
            structural.append(("rmom", e))
    for (a, e), e2 in b.lact.items():
        if a not in set(K.arrows) or e not in eset or e2 not in eset:
            structural.append(("lact-dangling", (a, e)))
    for (e, a), e2 in b.ract.items():
        if a not in set(Kp.arrows) or e not in eset or e2 not in eset:
            structural.append(("ract-dangling", (e, a)))
    if structural:
        return PrincipalityReport(structural, [], False, False)

    for e in b.total:
        for a in K.arrows:
            defined = (a, e) in b.lact
            should = K.src[a] == b.lmom[e]
            if defined != should:
                bad.append(("lact-domain", (a, e)))
            elif defined:
                e2 = b.lact[(a, e)]
                if b.lmom[e2] != K.tgt[a] or b.rmom[e2] != b.rmom[e]:
                    bad.append(("lact-moment", (a, e)))
        for a in Kp.arrows:
            defined = (e, a) in b.ract
            should = Kp.tgt[a] == b.rmom[e]
            if defined != should:
                bad.append(("ract-domain", (e, a)))
            elif defined:
                e2 = b.ract[(e, a)]
                if b.rmom[e2] != Kp.src[a] or b.lmom[e2] != b.lmom[e]:
                    bad.append(("ract-moment", (e, a)))
    if bad:
        return PrincipalityReport(structural, bad, False, False)

    for e in b.total:
        if b.lact[(K.ident[b.lmom[e]], e)] != e:
            bad.append(("lact-unital", (e,)))
        if b.ract[(e, Kp.ident[b.rmom[e]])] != e:
            bad.append(("ract-unital", (e,)))
    for (a1, e) in list(b.lact):
        e1 = b.lact[(a1, e)]
        for a2 in K.arrows:
            if K.src[a2] == K.tgt[a1]:
                if b.lact[(a2, e1)] != b.lact[(K.comp[(a2, a1)], e)]:
                    bad.append(("lact-associative", (a2, a1, e)))
    for (e, a1) in list(b.ract):
        e1 = b.ract[(e, a1)]
        for a2 in Kp.arrows:
            if Kp.tgt[a2] == Kp.src[a1]:
                if b.ract[(e1, a2)] != b.ract[(e, Kp.comp[(a1, a2)])]:
                    bad.append(("ract-associative", (e, a1, a2)))
    for (a, e) in list(b.lact):
        for k in Kp.arrows:
            if Kp.tgt[k] == b.rmom[e]:
                if b.ract[(b.lact[(a, e)], k)] != b.lact[(a, b.ract[(e, k)])]:
                    bad.append(("actions-commute", (a, e, k)))
    if bad:
        return PrincipalityReport(structural, bad, False, False)

    right_principal, rw = _principal(b.total, b.lmom, b.rmom,
                                     lambda e, k: b.ract[(e, k)],
                                     Kp, K, lambda k: Kp.tgt[k])
    morita, lw = _principal(b.total, b.rmom, b.lmom,
                            lambda e, k: b.lact[(k, e)],
                            K, Kp, lambda k: K.src[k])
    surj_l = set(b.lmom.values()) == set(K.objects)
    if not surj_l:
        right_principal, rw = False, ("lmom-not-surjective",)
    surj_r = set(b.rmom.values()) == set(Kp.objects)
    if not surj_r:
        morita, lw = False, ("rmom-not-surjective",)
    return PrincipalityReport(structural, bad, right_principal,
                              right_principal and morita, rw, lw)


def _principal(total, base_mom, act_mom, act, gpd, other, anchor):
    """Free and transitive along base_mom-fibers: for e1, e2 with equal base
    moments there is exactly one acting arrow k with act(e1, k) = e2."""
    for e1 in total:
        for e2 in total:
            if base_mom[e1] != base_mom[e2]:
                continue
            hits = [k for k in gpd.arrows
                    if anchor(k) == act_mom[e1] and act(e1, k) == e2]
            if len(hits) != 1:
                return False, (e1, e2, len(hits))
    return True, None


def compose(b1: Bibundle, b2: Bibundle) -> Bibundle:
    """HS composition: the fibred product over the middle groupoid's objects,
    divided by the diagonal middle action; orbit representatives are canonical
    (first constructed member)."""
    if b1.right is not b2.left and b1.right.arrows != b2.left.arrows:
        raise ValueError("middle groupoids do not match")
    mid = b1.right
    pairs = [(e1, e2) for e1 in b1.total for e2 in b2.total
             if b1.rmom[e1] == b2.lmom[e2]]
    # orbit of (e1, e2) under k: (e1·k, k^-1·e2)
    rep = {}
    orbits = {}
    for p in pairs:
        if p in rep:
            continue
        orbit = [p]
        rep[p] = p
        i = 0
        while i < len(orbit):
            e1, e2 = orbit[i]
            i += 1
            for k in mid.arrows:
                if mid.tgt[k] == b1.rmom[e1]:
                    q = (b1.ract[(e1, k)], b2.lact[(mid.inv[k], e2)])
                    if q not in rep:
                        rep[q] = p
                        orbit.append(q)
        orbits[p] = orbit
    total = tuple(pair_id(p[0], p[1]) for p in orbits)
    name = {p: pair_id(p[0], p[1]) for p in orbits}
    lmom = {name[p]: b1.lmom[p[0]] for p in orbits}
    rmom = {name[p]: b2.rmom[p[1]] for p in orbits}
    lact, ract = {}, {}
    for p in orbits:
        e1, e2 = p
        for a in b1.left.arrows:
            if b1.left.src[a] == lmom[name[p]]:
                q = (b1.lact[(a, e1)], e2)
                lact[(a, name[p])] = name[rep[q]]
        for a in b2.right.arrows:
            if b2.right.tgt[a] == rmom[name[p]]:
                q = (e1, b2.ract[(e2, a)])
                ract[(name[p], a)] = name[rep[q]]
    return Bibundle(b1.left, b2.right, total, lmom, rmom, lact, ract)


def reverse(b: Bibundle) -> Bibundle:
    """The opposite bibundle (sensible when b is Morita): actions act through
    inverses, moments swap."""
    lact = {(k, e): b.ract[(e, b.right.inv[k])]
            for e in b.total for k in b.right.arrows
            if b.right.src[k] == b.rmom[e]}
    ract = {(e, k): b.lact[(b.left.inv[k], e)]
            for e in b.total for k in b.left.arrows
            if b.left.tgt[k] == b.lmom[e]}
    return Bibundle(b.right, b.left, b.total, dict(b.rmom), dict(b.lmom), lact, ract)


def find_equivariant_bijection(b1: Bibundle, b2: Bibundle):
    """A bijection of total sets commuting with moments and both actions, or None.

    Backtracking in canonical order; used for the unit-law and functoriality
    isomorphisms of composition.
    """
    if len(b1.total) != len(b2.total):
        return None
    K, Kp = b1.left, b1.right

    def compatible(e, f, m):
        if b1.lmom[e] != b2.lmom[f] or b1.rmom[e] != b2.rmom[f]:
            return False
        for a in K.arrows:
            if K.src[a] == b1.lmom[e]:
                img = b1.lact[(a, e)]
                if img in m and m[img] != b2.lact[(a, f)]:
                    return False
        for a in Kp.arrows:
            if Kp.tgt[a] == b1.rmom[e]:
                img = b1.ract[(e, a)]
                if img in m and m[img] != b2.ract[(f, a)]:
                    return False
        return True

    used = set()
    m = {}

    def rec(i):
        if i == len(b1.total):
            return dict(m)
        e = b1.total[i]
        if e in m:
            return rec(i + 1)
        for f in b2.total:
            if f in used or not compatible(e, f, m):
                continue
            m[e] = f
            used.add(f)
            out = rec(i + 1)
            if out is not None:
                return out
            del m[e]
            used.discard(f)
        return None

    return rec(0)
