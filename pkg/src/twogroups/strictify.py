"""Semistrictness detection, the associator cocycle, strictification, and
crossed-module extraction.

For finite inputs the connectedness hypotheses behind the strictification
lemmas are unavailable, so ``strictify`` checks their conclusions exhaustively
and reports, by name, any conclusion that fails.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConnectednessAnalogError, InternalInconsistencyError, NotSemistrictError
from .groups import GroupTable, group_from_mul
from .monoidal import CoherentTwoGroup, StrictTwoGroup, transpose
from .xmod import CrossedModule


def _object_group(t: CoherentTwoGroup):
    """The object monoid as a GroupTable if it is one, else (None, witness)."""
    objs = t.base.objects
    for x in objs:
        if t.tobj(x, t.unit) != x or t.tobj(t.unit, x) != x:
            return None, f"object {x} is not ⊗-unital against {t.unit}"
    for x in objs:
        for y in objs:
            for z in objs:
                if t.tobj(t.tobj(x, y), z) != t.tobj(x, t.tobj(y, z)):
                    return None, f"⊗ not associative on objects at ({x},{y},{z})"
    inv = {}
    for x in objs:
        for y in objs:
            if t.tobj(x, y) == t.unit and t.tobj(y, x) == t.unit:
                inv[x] = y
                break
        else:
            return None, f"object {x} has no ⊗-inverse"
    mul = {(x, y): t.tobj(x, y) for x in objs for y in objs}
    return GroupTable(tuple(objs), mul, t.unit, inv), None


@dataclass
class SemistrictCheck:
    ok: bool
    witness: str | None = None


def is_semistrict(t: CoherentTwoGroup) -> SemistrictCheck:
    """Objects form a group under ⊗ and every d_x, e_x is the identity at the unit."""
    table, witness = _object_group(t)
    if table is None:
        return SemistrictCheck(False, witness)
    for x in table.elements:
        if t.bar[x] != table.inv[x]:
            return SemistrictCheck(False, f"bar({x}) is not the ⊗-inverse of {x}")
    e1 = t.id_unit()
    for x in table.elements:
        if t.adj_d[x] != e1:
            return SemistrictCheck(False, f"d_{x} is not the identity at the unit")
        if t.adj_e[x] != e1:
            return SemistrictCheck(False, f"e_{x} is not the identity at the unit")
    return SemistrictCheck(True)


@dataclass
class AssociatorCocycle:
    values: dict          # (x, y, z) -> element of Aut(I)
    h0: str               # value at (I, I, I)
    unit_certificate: bool  # h0^2 == h0^3
    constant: bool
    trivial: bool


def associator_cocycle(t: CoherentTwoGroup) -> AssociatorCocycle:
    """h(x,y,z) = a_{x,y,z} ⊗ id of the object-group inverse of x⊗y⊗z.

    Requires the objects to form a group; each value lands in Aut(I).
    """
    table, witness = _object_group(t)
    if table is None:
        raise ValueError(f"objects do not form a group: {witness}")
    g = t.base
    values = {}
    for x in table.elements:
        for y in table.elements:
            for z in table.elements:
                u = table.mul[(table.mul[(x, y)], z)]
                h = t.tarr(t.assoc[(x, y, z)], g.ident[table.inv[u]])
                if g.src[h] != t.unit or g.tgt[h] != t.unit:
                    raise InternalInconsistencyError(
                        f"h({x},{y},{z}) is not an automorphism of the unit")
                values[(x, y, z)] = h
    h0 = values[(t.unit, t.unit, t.unit)]
    square = g.comp[(h0, h0)]
    cube = g.comp[(h0, square)]
    first = next(iter(values.values()))
    e1 = t.id_unit()
    return AssociatorCocycle(
        values=values,
        h0=h0,
        unit_certificate=(square == cube),
        constant=all(v == first for v in values.values()),
        trivial=all(v == e1 for v in values.values()),
    )


@dataclass
class Strictification:
    strict: StrictTwoGroup
    tensor_constraint: dict   # (x, y) -> identity of x⊗y
    unit_constraint: str      # l_I, the unit constraint of the equivalence


def strictify(t: CoherentTwoGroup) -> Strictification:
    """Discard the monoidal constraints after verifying, on the finite input,
    each conclusion that base connectedness would have guaranteed:

      * the associator is trivial and ⊗ is associative on arrows,
      * id_I is a two-sided ⊗-unit for arrows,
      * every arrow is ⊗-invertible via its contragredient transpose(g^-1).

    A failed conclusion raises ConnectednessAnalogError naming the lemma.
    """
    check = is_semistrict(t)
    if not check.ok:
        raise NotSemistrictError(check.witness)
    table, _ = _object_group(t)
    g = t.base
    e1 = t.id_unit()

    for (x, y, z), a in t.assoc.items():
        u = table.mul[(table.mul[(x, y)], z)]
        if a != g.ident[u]:
            raise ConnectednessAnalogError("the associator is trivial", (x, y, z))
    for p in g.arrows:
        for q in g.arrows:
            for r in g.arrows:
                if t.tarr(p, t.tarr(q, r)) != t.tarr(t.tarr(p, q), r):
                    raise ConnectednessAnalogError("the associator is trivial",
                                                   (p, q, r))
    for p in g.arrows:
        if t.tarr(p, e1) != p or t.tarr(e1, p) != p:
            raise ConnectednessAnalogError("g ⊗ unit = g = unit ⊗ g", (p,))

    inv = {}
    for p in g.arrows:
        contra = transpose(t, g.inv[p])
        if t.tarr(p, contra) != e1 or t.tarr(contra, p) != e1:
            raise ConnectednessAnalogError("contragredient inverts", (p, contra))
        inv[p] = contra

    arr_group = GroupTable(tuple(g.arrows), dict(t.tensor_arr), e1, inv)
    strict = StrictTwoGroup(g, table, arr_group)
    constraint = {(x, y): g.ident[table.mul[(x, y)]]
                  for x in g.objects for y in g.objects}
    return Strictification(strict, constraint, t.lunit[t.unit])


def extract_crossed_module(s: StrictTwoGroup) -> CrossedModule:
    """gamma = tgt^-1(I) under ⊗, ∂ = source restricted to gamma,
    and x*γ = id_x ⊗ γ ⊗ id_bar(x); gamma elements stay the arrows themselves."""
    from .xmod import validate_crossed_module

    g = s.base
    unit = s.obj_group.unit
    tens = s.arr_group.mul
    gamma_elems = tuple(a for a in g.arrows if g.tgt[a] == unit)
    mul = {(c1, c2): tens[(c1, c2)] for c1 in gamma_elems for c2 in gamma_elems}
    gamma = group_from_mul(gamma_elems, mul)
    partial = {c: g.src[c] for c in gamma_elems}
    action = {}
    for x in g.objects:
        idx, idbx = g.ident[x], g.ident[s.obj_group.inv[x]]
        for c in gamma_elems:
            action[(x, c)] = tens[(tens[(idx, c)], idbx)]
    out = CrossedModule(gamma, GroupTable(tuple(g.objects), dict(s.obj_group.mul),
                                          unit, dict(s.obj_group.inv)),
                        partial, action)
    report = validate_crossed_module(out)
    if not report.ok:
        raise InternalInconsistencyError(
            f"extracted module fails validation: {report.kinds()[:3]}")
    return out


@dataclass
class WreathData:
    wreath: GroupTable        # gamma ⋊ g0 on pair names
    psi: dict                 # pair name -> arrow (γ ⊗ id_x)
    phi: dict                 # arrow -> pair name (g ⊗ id_bar(t(g)), t(g))
    pair_of: dict             # pair name -> (γ, x)


def arrow_group(s: StrictTwoGroup) -> WreathData:
    """The wreath product on gamma × g0 together with the verified mutually
    inverse bijections Psi(γ,x) = γ⊗x and Phi(g) = (g ⊗ bar(t(g)), t(g))."""
    x = extract_crossed_module(s)
    g = s.base
    gm, hm = x.gamma, x.g0
    tens = s.arr_group.mul

    def pname(c, a):
        return f"({c}|{a})@pair"

    elems = tuple(pname(c, a) for c in gm.elements for a in hm.elements)
    pair_of = {pname(c, a): (c, a) for c in gm.elements for a in hm.elements}
    mul = {}
    for p in elems:
        c1, a1 = pair_of[p]
        for q in elems:
            c2, a2 = pair_of[q]
            mul[(p, q)] = pname(gm.mul[(c1, x.action[(a1, c2)])], hm.mul[(a1, a2)])
    wreath = group_from_mul(elems, mul)

    psi = {p: tens[(pair_of[p][0], g.ident[pair_of[p][1]])] for p in elems}
    phi = {}
    for a in g.arrows:
        tg = g.tgt[a]
        phi[a] = pname(tens[(a, g.ident[s.obj_group.inv[tg]])], tg)
    for p in elems:
        if phi.get(psi[p]) != p:
            raise InternalInconsistencyError(f"Phi∘Psi is not the identity at {p}")
    for a in g.arrows:
        if psi.get(phi[a]) != a:
            raise InternalInconsistencyError(f"Psi∘Phi is not the identity at {a}")
    for a in g.arrows:
        for b in g.arrows:
            if phi[tens[(a, b)]] != wreath.mul[(phi[a], phi[b])]:
                raise InternalInconsistencyError(
                    f"Phi is not a homomorphism at ({a},{b})")
    return WreathData(wreath, psi, phi, pair_of)
