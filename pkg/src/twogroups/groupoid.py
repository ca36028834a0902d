"""Finite groupoids: composition tables, homomorphisms, isomorphism search.

Composition follows the convention comp(h, g) = "first g, then h", so
comp(h, g) is defined exactly when tgt(g) = src(h).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groups import GroupTable
from .reports import ValidationReport


@dataclass
class FiniteGroupoid:
    objects: tuple
    arrows: tuple
    src: dict
    tgt: dict
    comp: dict        # (h, g) -> h after g
    ident: dict       # object -> identity arrow
    inv: dict         # arrow -> inverse arrow

    def hom(self, x, y):
        return tuple(a for a in self.arrows if self.src[a] == x and self.tgt[a] == y)

    def aut(self, x):
        return self.hom(x, x)

    def compose(self, h, g):
        return self.comp[(h, g)]

    def compose_chain(self, chain):
        """Compose a list of arrows given in application order (first acts first)."""
        out = chain[0]
        for a in chain[1:]:
            out = self.comp[(a, out)]
        return out


def from_arrow_records(objects, records, comp, ident, inv):
    """Build a groupoid from (id, src, tgt) records; order of input is canonical."""
    arrows = tuple(r[0] for r in records)
    src = {r[0]: r[1] for r in records}
    tgt = {r[0]: r[2] for r in records}
    return FiniteGroupoid(tuple(objects), arrows, src, tgt, dict(comp), dict(ident), dict(inv))


def one_object_groupoid(group: GroupTable, obj="*"):
    """Delooping: one object whose automorphisms are the given group."""
    comp = {(h, g): group.mul[(h, g)] for h in group.elements for g in group.elements}
    return FiniteGroupoid(
        (obj,), tuple(group.elements),
        {a: obj for a in group.elements}, {a: obj for a in group.elements},
        comp, {obj: group.unit}, dict(group.inv),
    )


def discrete_groupoid(objects):
    objects = tuple(objects)
    arrows = tuple(f"id_{x}" for x in objects)
    return FiniteGroupoid(
        objects, arrows,
        {f"id_{x}": x for x in objects}, {f"id_{x}": x for x in objects},
        {(f"id_{x}", f"id_{x}"): f"id_{x}" for x in objects},
        {x: f"id_{x}" for x in objects},
        {f"id_{x}": f"id_{x}" for x in objects},
    )


def pair_groupoid(objects):
    """Indiscrete groupoid: exactly one arrow between any two objects."""
    objects = tuple(objects)
    name = lambda x, y: f"<{x}->{y}>"
    arrows = tuple(name(x, y) for x in objects for y in objects)
    src = {name(x, y): x for x in objects for y in objects}
    tgt = {name(x, y): y for x in objects for y in objects}
    comp = {}
    for x in objects:
        for y in objects:
            for z in objects:
                comp[(name(y, z), name(x, y))] = name(x, z)
    ident = {x: name(x, x) for x in objects}
    inv = {name(x, y): name(y, x) for x in objects for y in objects}
    return FiniteGroupoid(objects, arrows, src, tgt, comp, ident, inv)


def validate_groupoid(g: FiniteGroupoid) -> ValidationReport:
    """Check every groupoid axiom by enumeration; structural errors short-circuit."""
    report = ValidationReport()
    objs, arrs = set(g.objects), set(g.arrows)
    for a in g.arrows:
        if g.src.get(a) not in objs:
            report.add_structural("src-dangling", (a,))
        if g.tgt.get(a) not in objs:
            report.add_structural("tgt-dangling", (a,))
    for (h, a), c in g.comp.items():
        if h not in arrs or a not in arrs or c not in arrs:
            report.add_structural("comp-dangling", (h, a, c))
    for x in g.objects:
        if g.ident.get(x) not in arrs:
            report.add_structural("ident-dangling", (x,))
    for a in g.arrows:
        if g.inv.get(a) not in arrs:
            report.add_structural("inv-dangling", (a,))
    if report.structural:
        return report

    report.checks_run += ["composition-domain", "endpoints", "associativity",
                          "identity", "inverse"]
    for h in g.arrows:
        for a in g.arrows:
            defined = (h, a) in g.comp
            composable = g.tgt[a] == g.src[h]
            if composable and not defined:
                report.add("composition-domain", (h, a), "composable pair missing")
            if defined and not composable:
                report.add("composition-domain", (h, a), "non-composable pair present")
            if defined and composable:
                c = g.comp[(h, a)]
                if g.src[c] != g.src[a] or g.tgt[c] != g.tgt[h]:
                    report.add("endpoints", (h, a, c))
    if report.by_kind("composition-domain") or report.by_kind("endpoints"):
        return report

    for f in g.arrows:
        for a in g.arrows:
            if g.tgt[f] != g.src[a]:
                continue
            af = g.comp[(a, f)]
            for h in g.arrows:
                if g.tgt[a] != g.src[h]:
                    continue
                if g.comp[(h, af)] != g.comp[(g.comp[(h, a)], f)]:
                    report.add("associativity", (h, a, f))
    for x in g.objects:
        e = g.ident[x]
        if g.src[e] != x or g.tgt[e] != x:
            report.add("identity", (x,), "identity arrow has wrong endpoints")
    for a in g.arrows:
        ex, ey = g.ident[g.src[a]], g.ident[g.tgt[a]]
        if g.comp.get((a, ex)) != a or g.comp.get((ey, a)) != a:
            report.add("identity", (a,), "identity is not a two-sided unit")
        ia = g.inv[a]
        if g.src[ia] != g.tgt[a] or g.tgt[ia] != g.src[a] \
                or g.comp.get((ia, a)) != ex or g.comp.get((a, ia)) != ey:
            report.add("inverse", (a,))
    return report


@dataclass
class GroupoidHom:
    dom: FiniteGroupoid
    cod: FiniteGroupoid
    obj_map: dict
    arr_map: dict

    def is_bijective(self):
        return (len(set(self.obj_map.values())) == len(self.cod.objects)
                and len(set(self.arr_map.values())) == len(self.cod.arrows))


def validate_hom(f: GroupoidHom):
    """Return a list of violated functoriality conditions (empty means valid)."""
    bad = []
    a, b = f.dom, f.cod
    for g in a.arrows:
        if f.arr_map.get(g) is None:
            bad.append(("arr-missing", (g,)))
            continue
        if b.src[f.arr_map[g]] != f.obj_map[a.src[g]] or \
           b.tgt[f.arr_map[g]] != f.obj_map[a.tgt[g]]:
            bad.append(("endpoints", (g,)))
    for x in a.objects:
        if f.arr_map.get(a.ident[x]) != b.ident[f.obj_map[x]]:
            bad.append(("identity", (x,)))
    for (h, g), c in a.comp.items():
        if b.comp.get((f.arr_map[h], f.arr_map[g])) != f.arr_map[c]:
            bad.append(("composition", (h, g)))
    return bad


def identity_hom(g: FiniteGroupoid):
    return GroupoidHom(g, g, {x: x for x in g.objects}, {a: a for a in g.arrows})


def compose_homs(g: GroupoidHom, f: GroupoidHom):
    """g after f."""
    return GroupoidHom(
        f.dom, g.cod,
        {x: g.obj_map[f.obj_map[x]] for x in f.dom.objects},
        {a: g.arr_map[f.arr_map[a]] for a in f.dom.arrows},
    )


def _hom_signature(g: FiniteGroupoid, x):
    outs = sorted(len(g.hom(x, y)) for y in g.objects)
    ins = sorted(len(g.hom(y, x)) for y in g.objects)
    return (tuple(outs), tuple(ins), len(g.aut(x)))


def find_isomorphism(a: FiniteGroupoid, b: FiniteGroupoid):
    """Backtracking search for an invertible homomorphism a -> b.

    Deterministic: objects and arrows are tried in canonical order, so a
    groupoid compared with itself yields the identity.
    """
    if len(a.objects) != len(b.objects) or len(a.arrows) != len(b.arrows):
        return None
    sig_a = {x: _hom_signature(a, x) for x in a.objects}
    sig_b = {x: _hom_signature(b, x) for x in b.objects}
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return None

    homs_a = {}
    for g in a.arrows:
        homs_a.setdefault((a.src[g], a.tgt[g]), []).append(g)
    homs_b = {}
    for g in b.arrows:
        homs_b.setdefault((b.src[g], b.tgt[g]), []).append(g)

    def arrows_ok(obj_map):
        return all(len(homs_a[k]) == len(homs_b.get((obj_map[k[0]], obj_map[k[1]]), []))
                   for k in homs_a)

    def assign_arrows(obj_map):
        arr_map = {}
        for x in a.objects:
            arr_map[a.ident[x]] = b.ident[obj_map[x]]
        todo = [g for g in a.arrows if g not in arr_map]

        def consistent(g, h):
            # check compositions among already-assigned arrows involving g -> h
            trial = dict(arr_map)
            trial[g] = h
            for f in trial:
                for p, q in ((g, f), (f, g)):
                    if (p, q) in a.comp:
                        c = a.comp[(p, q)]
                        if c in trial and b.comp.get((trial[p], trial[q])) != trial[c]:
                            return False
            return True

        used = set(arr_map.values())

        def rec(i):
            if i == len(todo):
                return dict(arr_map)
            g = todo[i]
            for h in homs_b[(obj_map[a.src[g]], obj_map[a.tgt[g]])]:
                if h in used:
                    continue
                if not consistent(g, h):
                    continue
                arr_map[g] = h
                used.add(h)
                out = rec(i + 1)
                if out is not None:
                    return out
                del arr_map[g]
                used.discard(h)
            return None

        return rec(0)

    objs = list(a.objects)

    def rec_obj(i, obj_map, used):
        if i == len(objs):
            if not arrows_ok(obj_map):
                return None
            arr_map = assign_arrows(obj_map)
            if arr_map is None:
                return None
            cand = GroupoidHom(a, b, dict(obj_map), arr_map)
            if not validate_hom(cand) and cand.is_bijective():
                return cand
            return None
        x = objs[i]
        for y in b.objects:
            if y in used or sig_b[y] != sig_a[x]:
                continue
            obj_map[x] = y
            used.add(y)
            out = rec_obj(i + 1, obj_map, used)
            if out is not None:
                return out
            del obj_map[x]
            used.discard(y)
        return None

    return rec_obj(0, {}, set())


def invert_iso(f: GroupoidHom):
    return GroupoidHom(
        f.cod, f.dom,
        {v: k for k, v in f.obj_map.items()},
        {v: k for k, v in f.arr_map.items()},
    )


@dataclass
class NatTransform:
    dom: GroupoidHom
    cod: GroupoidHom
    component: dict   # object of the source groupoid -> arrow of the target


def validate_nat(t: NatTransform):
    bad = []
    a, b = t.dom.dom, t.dom.cod
    for x in a.objects:
        c = t.component.get(x)
        if c is None or b.src[c] != t.dom.obj_map[x] or b.tgt[c] != t.cod.obj_map[x]:
            bad.append(("component", (x,)))
    if bad:
        return bad
    for g in a.arrows:
        x, y = a.src[g], a.tgt[g]
        lhs = b.comp[(t.component[y], t.dom.arr_map[g])]
        rhs = b.comp[(t.cod.arr_map[g], t.component[x])]
        if lhs != rhs:
            bad.append(("naturality", (g,)))
    return bad


def find_natural_iso(f: GroupoidHom, g: GroupoidHom):
    """Search for an invertible natural transformation f => g (same dom/cod)."""
    a, b = f.dom, f.cod
    objs = list(a.objects)

    def rec(i, comp):
        if i == len(objs):
            t = NatTransform(f, g, dict(comp))
            return t if not validate_nat(t) else None
        x = objs[i]
        for c in b.hom(f.obj_map[x], g.obj_map[x]):
            comp[x] = c
            ok = True
            # prune: naturality for arrows between already-assigned objects
            for h in a.arrows:
                sx, sy = a.src[h], a.tgt[h]
                if sx in comp and sy in comp:
                    if b.comp[(comp[sy], f.arr_map[h])] != b.comp[(g.arr_map[h], comp[sx])]:
                        ok = False
                        break
            if ok:
                out = rec(i + 1, comp)
                if out is not None:
                    return out
            del comp[x]
        return None

    return rec(0, {})


def relabel_groupoid(g: FiniteGroupoid, obj_rename, arr_rename):
    """A fresh groupoid with renamed objects/arrows (used to test iso search)."""
    return FiniteGroupoid(
        tuple(obj_rename[x] for x in g.objects),
        tuple(arr_rename[a] for a in g.arrows),
        {arr_rename[a]: obj_rename[g.src[a]] for a in g.arrows},
        {arr_rename[a]: obj_rename[g.tgt[a]] for a in g.arrows},
        {(arr_rename[h], arr_rename[a]): arr_rename[c] for (h, a), c in g.comp.items()},
        {obj_rename[x]: arr_rename[g.ident[x]] for x in g.objects},
        {arr_rename[a]: arr_rename[b] for a, b in g.inv.items()},
    )


def connected_components(g: FiniteGroupoid):
    """Partition of objects; component of the first object comes first."""
    seen = {}
    comps = []
    for x in g.objects:
        if x in seen:
            continue
        comp = [x]
        seen[x] = True
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for a in g.arrows:
                    for z in ((g.tgt[a],) if g.src[a] == y else ()) + \
                             ((g.src[a],) if g.tgt[a] == y else ()):
                        if z not in seen:
                            seen[z] = True
                            comp.append(z)
                            nxt.append(z)
            frontier = nxt
        comps.append(tuple(sorted(comp, key=g.objects.index)))
    return tuple(comps)
