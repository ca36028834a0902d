"""Crossed modules of finite groups and the translation-groupoid construction.

A crossed module (gamma, g0, ∂, *) is a homomorphism ∂: gamma -> g0 together
with a left g0-action on gamma by automorphisms satisfying

  (Eq)  ∂(x*γ)  = x ∂(γ) x^-1
  (Pf)  ∂(γ)*γ' = γ γ' γ^-1
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInconsistencyError
from .groups import GroupTable, center, group_from_mul, iter_isomorphisms, validate_group
from .groupoid import FiniteGroupoid
from .monoidal import StrictTwoGroup
from .reports import ValidationReport


@dataclass
class CrossedModule:
    gamma: GroupTable
    g0: GroupTable
    partial: dict       # γ -> ∂(γ)
    action: dict        # (x, γ) -> x*γ


def trivial_action(gamma: GroupTable, g0: GroupTable):
    return {(x, c): c for x in g0.elements for c in gamma.elements}


def conjugation_action(g: GroupTable):
    return {(x, c): g.conjugate(x, c) for x in g.elements for c in g.elements}


def inner_crossed_module(g: GroupTable):
    """The inner crossed module id: G -> G acting by conjugation."""
    return CrossedModule(g, g, {a: a for a in g.elements}, conjugation_action(g))


def validate_crossed_module(x: CrossedModule) -> ValidationReport:
    report = ValidationReport()
    for name, table in (("gamma", x.gamma), ("g0", x.g0)):
        sub = validate_group(table)
        for v in sub.structural + sub.violations:
            report.add_structural(f"{name}-{v.kind}", v.witness)
    if report.structural:
        return report
    gset, hset = set(x.gamma.elements), set(x.g0.elements)
    for c in x.gamma.elements:
        if x.partial.get(c) not in hset:
            report.add_structural("partial-missing", (c,))
    for a in x.g0.elements:
        for c in x.gamma.elements:
            if x.action.get((a, c)) not in gset:
                report.add_structural("action-missing", (a, c))
    if report.structural:
        return report

    gm, hm = x.gamma, x.g0
    report.checks_run += ["partial-homomorphism", "action-unit", "action-composition",
                          "action-automorphism", "equivariance", "pfeiffer"]
    for c1 in gm.elements:
        for c2 in gm.elements:
            lhs = x.partial[gm.mul[(c1, c2)]]
            rhs = hm.mul[(x.partial[c1], x.partial[c2])]
            if lhs != rhs:
                report.add("partial-homomorphism", (c1, c2),
                           f"∂({c1}·{c2})={lhs} but ∂({c1})∂({c2})={rhs}")
    for c in gm.elements:
        if x.action[(hm.unit, c)] != c:
            report.add("action-unit", (c,))
    for a in hm.elements:
        for b in hm.elements:
            for c in gm.elements:
                if x.action[(hm.mul[(a, b)], c)] != x.action[(a, x.action[(b, c)])]:
                    report.add("action-composition", (a, b, c))
    for a in hm.elements:
        for c1 in gm.elements:
            for c2 in gm.elements:
                lhs = x.action[(a, gm.mul[(c1, c2)])]
                rhs = gm.mul[(x.action[(a, c1)], x.action[(a, c2)])]
                if lhs != rhs:
                    report.add("action-automorphism", (a, c1, c2))
    for a in hm.elements:
        for c in gm.elements:
            if x.partial[x.action[(a, c)]] != hm.conjugate(a, x.partial[c]):
                report.add("equivariance", (a, c))
    for c1 in gm.elements:
        for c2 in gm.elements:
            lhs = x.action[(x.partial[c1], c2)]
            rhs = gm.conjugate(c1, c2)
            if lhs != rhs:
                report.add("pfeiffer", (c1, c2), f"∂({c1})*{c2}={lhs} but conjugate={rhs}")
    return report


def arrow_id(c, a):
    return f"({c}|{a})"


def to_strict_two_group(x: CrossedModule) -> StrictTwoGroup:
    """Translation groupoid gamma⋉g0 with the wreath product on arrows.

    Arrow (γ|x) runs x -> ∂(γ)x; composition is (γ'|∂(γ)x) ∘ (γ|x) = (γ'γ|x);
    the tensor of arrows is (γ1|x1)⊗(γ2|x2) = (γ1 (x1*γ2) | x1 x2).
    """
    gm, hm = x.gamma, x.g0
    objects = tuple(hm.elements)
    arrows = tuple(arrow_id(c, a) for c in gm.elements for a in hm.elements)
    pair = {arrow_id(c, a): (c, a) for c in gm.elements for a in hm.elements}
    src = {g: pair[g][1] for g in arrows}
    tgt = {g: hm.mul[(x.partial[pair[g][0]], pair[g][1])] for g in arrows}
    comp = {}
    for g in arrows:
        c1, a1 = pair[g]
        for h in arrows:
            c2, a2 = pair[h]
            if a2 == tgt[g]:
                comp[(h, g)] = arrow_id(gm.mul[(c2, c1)], a1)
    ident = {a: arrow_id(gm.unit, a) for a in hm.elements}
    inv = {g: arrow_id(gm.inv[pair[g][0]], tgt[g]) for g in arrows}
    base = FiniteGroupoid(objects, arrows, src, tgt, comp, ident, inv)

    mul = {}
    for g in arrows:
        c1, a1 = pair[g]
        for h in arrows:
            c2, a2 = pair[h]
            mul[(g, h)] = arrow_id(gm.mul[(c1, x.action[(a1, c2)])], hm.mul[(a1, a2)])
    arr_group = group_from_mul(arrows, mul)
    return StrictTwoGroup(base, GroupTable(objects, dict(hm.mul), hm.unit, dict(hm.inv)),
                          arr_group)


@dataclass
class KernelCenterReport:
    kernel: tuple
    central: bool
    commutators_checked: int
    orbits: tuple          # partition of g0 under left translation by im ∂
    kernel_order: int
    orbit_count: int


def kernel_center_check(x: CrossedModule) -> KernelCenterReport:
    """ker ∂ ⊆ Z(gamma) certificate plus the orbit set g0/im∂.

    ker ∂ and the orbit set are the combinatorial π1/π0 of the presented
    quotient; Pf forces centrality, so a failure here means corrupt input.
    """
    gm, hm = x.gamma, x.g0
    kernel = tuple(c for c in gm.elements if x.partial[c] == hm.unit)
    zc = set(center(gm))
    central = all(c in zc for c in kernel)
    if not central:
        raise InternalInconsistencyError(
            "ker ∂ is not central in gamma; Pfeiffer identity must be broken")
    image = tuple(dict.fromkeys(x.partial[c] for c in gm.elements))
    seen, orbits = set(), []
    for a in hm.elements:
        if a in seen:
            continue
        orbit = tuple(dict.fromkeys(hm.mul[(b, a)] for b in image))
        seen.update(orbit)
        orbits.append(orbit)
    return KernelCenterReport(kernel, central, len(kernel) * gm.order(),
                              tuple(orbits), len(kernel), len(orbits))


def find_xmod_isomorphism(a: CrossedModule, b: CrossedModule):
    """A pair of group isomorphisms commuting with ∂ and the actions, or None."""
    for f0 in iter_isomorphisms(a.g0, b.g0):
        for fg in iter_isomorphisms(a.gamma, b.gamma):
            if any(f0[a.partial[c]] != b.partial[fg[c]] for c in a.gamma.elements):
                continue
            if any(fg[a.action[(x, c)]] != b.action[(f0[x], fg[c])]
                   for x in a.g0.elements for c in a.gamma.elements):
                continue
            return fg, f0
    return None
