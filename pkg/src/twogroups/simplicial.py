"""Truncated simplicial sets: nerves, Kan-condition checking, and the
extraction of a groupoid from a pointed 2-Kan complex.

Simplices are opaque string ids.  Nerve builders join component ids with ","
(level ≤ 2) and ";" (level 3), so component ids must avoid those characters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FillerError
from .groupoid import FiniteGroupoid
from .reports import ValidationReport
from .xmod import CrossedModule


@dataclass
class TruncatedSimplicialSet:
    depth: int
    layers: tuple           # layers[n] = tuple of ids
    faces: dict             # (n, i) -> {id -> id}, for 1 <= n <= depth, 0 <= i <= n
    degeneracies: dict      # (n, i) -> {id -> id}, for 0 <= n < depth, 0 <= i <= n

    def face(self, n, i, s):
        return self.faces[(n, i)][s]

    def degen(self, n, i, s):
        return self.degeneracies[(n, i)][s]


def validate_simplicial(x: TruncatedSimplicialSet) -> ValidationReport:
    report = ValidationReport()
    for n in range(1, x.depth + 1):
        for i in range(n + 1):
            table = x.faces.get((n, i))
            if table is None:
                report.add_structural("face-table-missing", (n, i))
                continue
            lower = set(x.layers[n - 1])
            for s in x.layers[n]:
                if table.get(s) not in lower:
                    report.add_structural("face-dangling", (n, i, s))
    for n in range(x.depth):
        for i in range(n + 1):
            table = x.degeneracies.get((n, i))
            if table is None:
                report.add_structural("degeneracy-table-missing", (n, i))
                continue
            upper = set(x.layers[n + 1])
            for s in x.layers[n]:
                if table.get(s) not in upper:
                    report.add_structural("degeneracy-dangling", (n, i, s))
    if report.structural:
        return report

    report.checks_run += ["dd-identity", "ss-identity", "ds-identity"]
    for n in range(2, x.depth + 1):
        for j in range(n + 1):
            for i in range(j):
                for s in x.layers[n]:
                    if x.face(n - 1, i, x.face(n, j, s)) != \
                       x.face(n - 1, j - 1, x.face(n, i, s)):
                        report.add("dd-identity", (n, i, j, s))
    for n in range(x.depth - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                for s in x.layers[n]:
                    if x.degen(n + 1, i, x.degen(n, j, s)) != \
                       x.degen(n + 1, j + 1, x.degen(n, i, s)):
                        report.add("ss-identity", (n, i, j, s))
    for n in range(x.depth):
        for j in range(n + 1):
            for i in range(n + 2):
                for s in x.layers[n]:
                    got = x.face(n + 1, i, x.degen(n, j, s))
                    if i == j or i == j + 1:
                        want = s
                    elif i < j:
                        want = x.degen(n - 1, j - 1, x.face(n, i, s))
                    else:
                        want = x.degen(n - 1, j, x.face(n, i - 1, s))
                    if got != want:
                        report.add("ds-identity", (n, i, j, s))
    return report


def _join(parts):
    for p in parts:
        assert "," not in p, f"id {p!r} may not contain a comma"
    return ",".join(parts)


def nerve_of_groupoid(g: FiniteGroupoid, depth: int) -> TruncatedSimplicialSet:
    """X_n = composable n-strings; d_0/d_n drop an end, inner faces compose."""
    strings = {0: [()], 1: [(a,) for a in g.arrows]}
    for n in range(2, depth + 1):
        strings[n] = [s + (a,) for s in strings[n - 1] for a in g.arrows
                      if g.tgt[s[-1]] == g.src[a]]
    layers = [tuple(g.objects)]
    ids = {1: {s: _join(s) for s in strings[1]}}
    layers.append(tuple(ids[1][s] for s in strings[1]))
    for n in range(2, depth + 1):
        ids[n] = {s: _join(s) for s in strings[n]}
        layers.append(tuple(ids[n][s] for s in strings[n]))

    def vertex(s, k):
        return g.src[s[k]] if k < len(s) else g.tgt[s[-1]]

    faces = {}
    for n in range(1, depth + 1):
        for i in range(n + 1):
            table = {}
            for s in strings[n]:
                if n == 1:
                    table[ids[1][s]] = vertex(s, 1 - i)
                    continue
                if i == 0:
                    out = s[1:]
                elif i == n:
                    out = s[:-1]
                else:
                    out = s[:i - 1] + (g.comp[(s[i], s[i - 1])],) + s[i + 1:]
                table[ids[n][s]] = ids[n - 1][out]
            faces[(n, i)] = table
    degeneracies = {}
    for n in range(depth):
        for i in range(n + 1):
            table = {}
            if n == 0:
                for x in g.objects:
                    table[x] = ids[1][(g.ident[x],)]
            else:
                for s in strings[n]:
                    out = s[:i] + (g.ident[vertex(s, i)],) + s[i:]
                    table[ids[n][s]] = ids[n + 1][out]
            degeneracies[(n, i)] = table
    return TruncatedSimplicialSet(depth, tuple(layers), faces, degeneracies)


@dataclass
class PartialGroup:
    """A group whose product is only partially defined: m maps carrier pairs
    into the ambient set, and the usual axioms hold whenever they make sense."""
    carrier: tuple
    ambient: tuple
    mul: dict          # (a, b) -> ambient element, for a, b in carrier
    inv: dict
    unit: str


def validate_partial_group(p: PartialGroup) -> ValidationReport:
    report = ValidationReport()
    amb, car = set(p.ambient), set(p.carrier)
    if not car <= amb:
        report.add_structural("carrier-not-in-ambient", ())
    if p.unit not in car:
        report.add_structural("unit-missing", (p.unit,))
    for a in p.carrier:
        if p.inv.get(a) not in car:
            report.add_structural("inv-missing", (a,))
    for (a, b), c in p.mul.items():
        if a not in car or b not in car or c not in amb:
            report.add_structural("mul-dangling", (a, b))
    if report.structural:
        return report
    report.checks_run += ["unit", "inverse", "partial-associativity"]
    for a in p.carrier:
        if p.mul.get((p.unit, a), a) != a or p.mul.get((a, p.unit), a) != a:
            report.add("unit", (a,))
        got = p.mul.get((a, p.inv[a]))
        if got is not None and got != p.unit:
            report.add("inverse", (a,))
    for a in p.carrier:
        for b in p.carrier:
            ab = p.mul.get((a, b))
            for c in p.carrier:
                bc = p.mul.get((b, c))
                if ab in car and bc in car:
                    lhs = p.mul.get((ab, c))
                    rhs = p.mul.get((a, bc))
                    if lhs is not None and rhs is not None and lhs != rhs:
                        report.add("partial-associativity", (a, b, c))
    return report


def _runs_in_carrier(p: PartialGroup, word):
    """All consecutive sub-products g_i ... g_{i+j} lie in the carrier."""
    car = set(p.carrier)
    for i in range(len(word)):
        prod = word[i]
        if prod not in car:
            return False
        for j in range(i + 1, len(word)):
            prod = p.mul.get((prod, word[j]))
            if prod is None or prod not in car:
                return False
    return True


def nerve_of_partial_group(p: PartialGroup, depth: int) -> TruncatedSimplicialSet:
    """X_n = tuples whose consecutive sub-products all stay in the carrier."""
    pt = "*"
    tuples = {0: [()], 1: [(a,) for a in p.carrier]}
    for n in range(2, depth + 1):
        tuples[n] = [s + (a,) for s in tuples[n - 1] for a in p.carrier
                     if _runs_in_carrier(p, s + (a,))]
    ids = {n: {s: _join(s) for s in tuples[n]} for n in range(1, depth + 1)}
    layers = [(pt,)] + [tuple(ids[n][s] for s in tuples[n]) for n in range(1, depth + 1)]
    faces = {}
    for n in range(1, depth + 1):
        for i in range(n + 1):
            table = {}
            for s in tuples[n]:
                if n == 1:
                    table[ids[1][s]] = pt
                    continue
                if i == 0:
                    out = s[1:]
                elif i == n:
                    out = s[:-1]
                else:
                    out = s[:i - 1] + (p.mul[(s[i - 1], s[i])],) + s[i + 1:]
                table[ids[n][s]] = ids[n - 1][out]
            faces[(n, i)] = table
    degeneracies = {}
    for n in range(depth):
        for i in range(n + 1):
            table = {}
            if n == 0:
                table[pt] = ids[1][(p.unit,)]
            else:
                for s in tuples[n]:
                    out = s[:i] + (p.unit,) + s[i:]
                    table[ids[n][s]] = ids[n + 1][out]
            degeneracies[(n, i)] = table
    return TruncatedSimplicialSet(depth, tuple(layers), faces, degeneracies)


def bar_nerve(x: CrossedModule, depth: int = 3) -> TruncatedSimplicialSet:
    """Classifying nerve of the crossed module's 2-group: one vertex, edges g0,
    a 2-simplex (γ; x, y) has faces d2 = x, d0 = y, d1 = ∂(γ)xy, and
    3-simplices are the tetrahedra whose two pastings agree."""
    if not 0 <= depth <= 3:
        raise ValueError("bar nerve is truncated at depth 3")
    pt = "*"
    gm, hm = x.gamma, x.g0
    pd = x.partial

    def id2(c, a, b):
        return _join((c, a, b))

    layers = [(pt,)]
    faces = {}
    degeneracies = {}
    if depth >= 1:
        layers.append(tuple(hm.elements))
        faces[(1, 0)] = {a: pt for a in hm.elements}
        faces[(1, 1)] = {a: pt for a in hm.elements}
        degeneracies[(0, 0)] = {pt: hm.unit}
    if depth >= 2:
        two = [(c, a, b) for c in gm.elements for a in hm.elements for b in hm.elements]
        layers.append(tuple(id2(*s) for s in two))
        d0, d1, d2 = {}, {}, {}
        for c, a, b in two:
            s = id2(c, a, b)
            d2[s] = a
            d0[s] = b
            d1[s] = hm.mul[(pd[c], hm.mul[(a, b)])]
        faces[(2, 0)], faces[(2, 1)], faces[(2, 2)] = d0, d1, d2
        degeneracies[(1, 0)] = {a: id2(gm.unit, hm.unit, a) for a in hm.elements}
        degeneracies[(1, 1)] = {a: id2(gm.unit, a, hm.unit) for a in hm.elements}
    if depth >= 3:
        three = []
        d = {0: {}, 1: {}, 2: {}, 3: {}}
        for x01 in hm.elements:
            for x12 in hm.elements:
                for x23 in hm.elements:
                    for g3 in gm.elements:
                        x02 = hm.mul[(pd[g3], hm.mul[(x01, x12)])]
                        for g0 in gm.elements:
                            x13 = hm.mul[(pd[g0], hm.mul[(x12, x23)])]
                            for g2 in gm.elements:
                                g1 = gm.mul[(gm.mul[(g2, x.action[(x01, g0)])],
                                             gm.inv[g3])]
                                f0 = id2(g0, x12, x23)
                                f1 = id2(g1, x02, x23)
                                f2 = id2(g2, x01, x13)
                                f3 = id2(g3, x01, x12)
                                s = ";".join((f0, f1, f2, f3))
                                three.append(s)
                                d[0][s], d[1][s], d[2][s], d[3][s] = f0, f1, f2, f3
        layers.append(tuple(three))
        for i in range(4):
            faces[(3, i)] = d[i]
        known = set(three)

        def build(f0, f1, f2, f3):
            s = ";".join((f0, f1, f2, f3))
            if s not in known:
                raise FillerError(f"degenerate tetrahedron {s} missing from X3")
            return s

        s20, s21, s22 = {}, {}, {}
        s_edge = degeneracies[(1, 0)], degeneracies[(1, 1)]
        for c, a, b in two:
            s = id2(c, a, b)
            e0, e1, e2 = faces[(2, 0)][s], faces[(2, 1)][s], faces[(2, 2)][s]
            s20[s] = build(s, s, s_edge[0][e1], s_edge[0][e2])
            s21[s] = build(s_edge[0][e0], s, s, s_edge[1][e2])
            s22[s] = build(s_edge[1][e0], s_edge[1][e1], s, s)
        degeneracies[(2, 0)], degeneracies[(2, 1)], degeneracies[(2, 2)] = s20, s21, s22
    return TruncatedSimplicialSet(depth, tuple(layers), faces, degeneracies)


@dataclass
class KanReport:
    n: int
    max_m: int
    results: dict          # (m, j) -> {"horns": int, "missing": int, "ambiguous": int}
    first_failure: tuple | None   # (m, j, horn-description, kind)

    @property
    def ok(self):
        return self.first_failure is None

    def as_dict(self):
        return {
            "n": self.n,
            "max_m": self.max_m,
            "ok": self.ok,
            "results": {f"m={m},j={j}": v for (m, j), v in sorted(self.results.items())},
            "first_failure": list(self.first_failure) if self.first_failure else None,
        }


def _horns(x: TruncatedSimplicialSet, m, j):
    """Yield compatible families (dict position -> (m-1)-simplex) for Λ[m, j].

    Position k must satisfy d_i(σ_k) = d_{k-1}(σ_i) against every earlier
    position i; candidates are looked up in an index keyed by the demanded
    face projections, so enumeration is linear in the number of horns.
    """
    present = [i for i in range(m + 1) if i != j]
    candidates = x.layers[m - 1]
    demand_sets = [tuple(present[:idx]) for idx in range(len(present))]
    indexes = {}
    if m - 1 >= 1:
        for ds in set(demand_sets):
            if not ds:
                continue
            table = {}
            for c in candidates:
                key = tuple(x.face(m - 1, i, c) for i in ds)
                table.setdefault(key, []).append(c)
            indexes[ds] = table

    def rec(idx, chosen):
        if idx == len(present):
            yield dict(chosen)
            return
        k = present[idx]
        ds = demand_sets[idx]
        if not ds or m - 1 < 1:
            pool = candidates
        else:
            key = tuple(x.face(m - 1, k - 1, chosen[i]) for i in ds)
            pool = indexes[ds].get(key, ())
        for c in pool:
            chosen[k] = c
            yield from rec(idx + 1, chosen)
            del chosen[k]

    yield from rec(0, {})


def kan_check(x: TruncatedSimplicialSet, n: int, max_m: int | None = None) -> KanReport:
    """Horn-filling conditions: fillers exist for every m <= max_m, and are
    unique for m > n.  Reports the first missing or ambiguous horn."""
    max_m = x.depth if max_m is None else min(max_m, x.depth)
    results = {}
    first_failure = None
    for m in range(1, max_m + 1):
        index = {}
        for s in x.layers[m]:
            for j in range(m + 1):
                key = (j,) + tuple(x.face(m, i, s) for i in range(m + 1) if i != j)
                index.setdefault(key, []).append(s)
        for j in range(m + 1):
            horns = missing = ambiguous = 0
            for horn in _horns(x, m, j):
                horns += 1
                key = (j,) + tuple(horn[i] for i in sorted(horn))
                fillers = index.get(key, [])
                if not fillers:
                    missing += 1
                    if first_failure is None:
                        first_failure = (m, j, tuple(horn[i] for i in sorted(horn)),
                                         "missing")
                elif m > n and len(fillers) > 1:
                    ambiguous += 1
                    if first_failure is None:
                        first_failure = (m, j, tuple(horn[i] for i in sorted(horn)),
                                         "ambiguous")
            results[(m, j)] = {"horns": horns, "missing": missing,
                               "ambiguous": ambiguous}
    return KanReport(n, max_m, results, first_failure)


def two_kan_to_groupoid(x: TruncatedSimplicialSet) -> FiniteGroupoid:
    """Objects X1, arrows the 2-simplices whose d2-face is degenerate, source
    d0 and target d1; composition is recovered from unique Λ[3,1] fillers."""
    if len(x.layers[0]) != 1:
        raise ValueError("input must be pointed: |X0| = 1")
    if x.depth < 3:
        raise ValueError("need 3-simplices to compose arrows")
    pt = x.layers[0][0]
    unit_edge = x.degen(0, 0, pt)
    objects = tuple(x.layers[1])
    arrows = tuple(s for s in x.layers[2] if x.face(2, 2, s) == unit_edge)
    src = {s: x.face(2, 0, s) for s in arrows}
    tgt = {s: x.face(2, 1, s) for s in arrows}
    ident = {}
    for v in objects:
        e = x.degen(1, 0, v)
        if e not in set(arrows):
            raise FillerError(f"degenerate 2-simplex of {v} is not an arrow")
        ident[v] = e

    index = {}
    for s in x.layers[3]:
        key = (x.face(3, 0, s), x.face(3, 2, s), x.face(3, 3, s))
        index.setdefault(key, []).append(s)
    degenerate_unit = x.degen(1, 0, unit_edge)
    comp = {}
    for alpha in arrows:
        for beta in arrows:
            if src[beta] != tgt[alpha]:
                continue
            fillers = index.get((alpha, beta, degenerate_unit), [])
            if len(fillers) != 1:
                raise FillerError(
                    f"horn (d0={alpha}, d2={beta}, d3=degenerate) has "
                    f"{len(fillers)} fillers")
            comp[(beta, alpha)] = x.face(3, 1, fillers[0])
    inv = {}
    for alpha in arrows:
        hits = [b for b in arrows
                if src[b] == tgt[alpha] and tgt[b] == src[alpha]
                and comp.get((b, alpha)) == ident[src[alpha]]
                and comp.get((alpha, b)) == ident[tgt[alpha]]]
        if len(hits) != 1:
            raise FillerError(f"arrow {alpha} has {len(hits)} two-sided inverses")
        inv[alpha] = hits[0]
    return FiniteGroupoid(objects, arrows, src, tgt, comp, ident, inv)
