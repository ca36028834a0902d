"""Finite groups as explicit multiplication tables, plus isomorphism search.

Elements are opaque strings; the ``elements`` tuple fixes the canonical order
that every enumeration and search in the library follows, so results are
deterministic for a given construction order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .reports import ValidationReport


@dataclass
class GroupTable:
    elements: tuple
    mul: dict          # (a, b) -> ab
    unit: str
    inv: dict          # a -> a^-1

    def times(self, a, b):
        return self.mul[(a, b)]

    def inverse(self, a):
        return self.inv[a]

    def conjugate(self, a, b):
        """a b a^-1"""
        return self.mul[(self.mul[(a, b)], self.inv[a])]

    def commutator(self, a, b):
        """a b a^-1 b^-1"""
        return self.mul[(self.conjugate(a, b), self.inv[b])]

    def order(self):
        return len(self.elements)

    def element_order(self, a):
        n, x = 1, a
        while x != self.unit:
            x = self.mul[(x, a)]
            n += 1
        return n


def group_from_mul(elements, mul):
    """Derive unit and inverses from a multiplication table; raise if not a group."""
    elements = tuple(elements)
    unit = None
    for e in elements:
        if all(mul[(e, a)] == a and mul[(a, e)] == a for a in elements):
            unit = e
            break
    if unit is None:
        raise ValueError("no two-sided unit")
    inv = {}
    for a in elements:
        for b in elements:
            if mul[(a, b)] == unit and mul[(b, a)] == unit:
                inv[a] = b
                break
        else:
            raise ValueError(f"no inverse for {a}")
    return GroupTable(elements, dict(mul), unit, inv)


def validate_group(g: GroupTable) -> ValidationReport:
    report = ValidationReport()
    elems = g.elements
    eset = set(elems)
    for (a, b), c in g.mul.items():
        if a not in eset or b not in eset or c not in eset:
            report.add_structural("mul-dangling", (a, b, c))
    for a in elems:
        for b in elems:
            if (a, b) not in g.mul:
                report.add_structural("mul-missing", (a, b))
    if g.unit not in eset:
        report.add_structural("unit-dangling", (g.unit,))
    for a in elems:
        if g.inv.get(a) not in eset:
            report.add_structural("inv-dangling", (a,))
    if report.structural:
        return report
    report.checks_run += ["associativity", "unit", "inverse"]
    for a in elems:
        for b in elems:
            for c in elems:
                if g.mul[(g.mul[(a, b)], c)] != g.mul[(a, g.mul[(b, c)])]:
                    report.add("associativity", (a, b, c))
    for a in elems:
        if g.mul[(g.unit, a)] != a or g.mul[(a, g.unit)] != a:
            report.add("unit", (a,))
        if g.mul[(a, g.inv[a])] != g.unit or g.mul[(g.inv[a], a)] != g.unit:
            report.add("inverse", (a,))
    return report


def is_abelian(g: GroupTable):
    return all(g.mul[(a, b)] == g.mul[(b, a)] for a in g.elements for b in g.elements)


def center(g: GroupTable):
    return tuple(a for a in g.elements
                 if all(g.mul[(a, b)] == g.mul[(b, a)] for b in g.elements))


def closure(g: GroupTable, gens):
    seen = {g.unit: None}
    frontier = [g.unit]
    while frontier:
        nxt = []
        for x in frontier:
            for a in gens:
                y = g.mul[(x, a)]
                if y not in seen:
                    seen[y] = None
                    nxt.append(y)
        frontier = nxt
    return tuple(seen)


def minimal_generators(g: GroupTable):
    """Greedy generating set in canonical order (not guaranteed minimum size)."""
    gens = []
    have = {g.unit}
    for a in g.elements:
        if a not in have:
            gens.append(a)
            have = set(closure(g, gens))
    return tuple(gens)


def cyclic_group(n):
    elems = tuple(str(i) for i in range(n))
    mul = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    inv = {str(a): str((-a) % n) for a in range(n)}
    return GroupTable(elems, mul, "0", inv)


def trivial_group():
    return GroupTable(("e",), {("e", "e"): "e"}, "e", {"e": "e"})


def direct_product(g: GroupTable, h: GroupTable, sep="|"):
    elems = tuple(f"{a}{sep}{b}" for a in g.elements for b in h.elements)
    split = {f"{a}{sep}{b}": (a, b) for a in g.elements for b in h.elements}
    mul, inv = {}, {}
    for x in elems:
        a, b = split[x]
        inv[x] = f"{g.inv[a]}{sep}{h.inv[b]}"
        for y in elems:
            c, d = split[y]
            mul[(x, y)] = f"{g.mul[(a, c)]}{sep}{h.mul[(b, d)]}"
    return GroupTable(elems, mul, f"{g.unit}{sep}{h.unit}", inv)


def klein_four():
    return direct_product(cyclic_group(2), cyclic_group(2))


_S3_PERMS = {
    "e": (1, 2, 3),
    "(12)": (2, 1, 3),
    "(13)": (3, 2, 1),
    "(23)": (1, 3, 2),
    "(123)": (2, 3, 1),
    "(132)": (3, 1, 2),
}


def symmetric_3():
    """S3 on points {1,2,3}; (123) maps 1->2->3->1; composition applies the right factor first."""
    names = ("e", "(12)", "(13)", "(23)", "(123)", "(132)")
    by_perm = {p: n for n, p in _S3_PERMS.items()}
    mul, inv = {}, {}
    for a in names:
        pa = _S3_PERMS[a]
        for b in names:
            pb = _S3_PERMS[b]
            comp = tuple(pa[pb[i] - 1] for i in range(3))
            mul[(a, b)] = by_perm[comp]
        ia = tuple(sorted(range(1, 4), key=lambda i: pa[i - 1]))
        inv[a] = by_perm[ia]
    return GroupTable(names, mul, "e", inv)


def iter_isomorphisms(a: GroupTable, b: GroupTable):
    """Yield all isomorphisms a -> b as dicts, in canonical order."""
    if a.order() != b.order():
        return
    orders_a = sorted(a.element_order(x) for x in a.elements)
    orders_b = sorted(b.element_order(x) for x in b.elements)
    if orders_a != orders_b:
        return
    gens = minimal_generators(a)
    # express every element of a as parent * gen, by BFS from the unit
    expr = {a.unit: None}
    frontier = [a.unit]
    order = [a.unit]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, gen in enumerate(gens):
                y = a.mul[(x, gen)]
                if y not in expr:
                    expr[y] = (x, gi)
                    order.append(y)
                    nxt.append(y)
        frontier = nxt
    if len(order) != a.order():
        raise ValueError("generators do not generate")  # cannot happen

    cand = [[y for y in b.elements if b.element_order(y) == a.element_order(g)]
            for g in gens]

    def build(images):
        f = {a.unit: b.unit}
        for x in order[1:]:
            px, gi = expr[x]
            f[x] = b.mul[(f[px], images[gi])]
        if len(set(f.values())) != b.order():
            return None
        for x in a.elements:
            for y in a.elements:
                if f[a.mul[(x, y)]] != b.mul[(f[x], f[y])]:
                    return None
        return f

    def rec(i, images):
        if i == len(gens):
            f = build(images)
            if f is not None:
                yield f
            return
        for c in cand[i]:
            yield from rec(i + 1, images + [c])

    yield from rec(0, [])


def find_group_isomorphism(a, b):
    for f in iter_isomorphisms(a, b):
        return f
    return None


def relabel_group(g: GroupTable, rename):
    elems = tuple(rename[a] for a in g.elements)
    mul = {(rename[a], rename[b]): rename[c] for (a, b), c in g.mul.items()}
    inv = {rename[a]: rename[b] for a, b in g.inv.items()}
    return GroupTable(elems, mul, rename[g.unit], inv)
