"""Compact extended formulation of the core and exact LP membership checks.

For each graph in the family (the capacity-2 subgraph plus every st-variant),
the no-negative-cycle condition is expressed through the dual of a compact
flow LP over the cycle cone: cut/cycle inequalities for a fixed edge are
max-flow feasibility, flows become per-edge conservation blocks, and the dual
of the whole thing is a feasibility system whose right-hand sides are affine
in the allocation. Gluing those blocks onto the total-value, vertex, and edge
constraints yields a polynomial-size system whose projection onto the
allocation variables is exactly the core.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import matching, separation
from .linsys import ConstraintSystem, simplex_feasible, simplex_solve
from .model import Allocation, Instance
from .negcycle import CostEdge, CostedGraph


@dataclass(frozen=True)
class AffineCost:
    """Edge cost affine in the allocation: const + sum coeffs[v] * p_v."""

    const: Fraction
    coeffs: tuple[tuple[int, Fraction], ...]

    def evaluate(self, p: Allocation) -> Fraction:
        return self.const + sum((c * p[v] for v, c in self.coeffs), Fraction(0))


Cost = Union[Fraction, AffineCost]


def _transfer_affine(u: int, v: int, w: Fraction) -> AffineCost:
    half = Fraction(1, 2)
    return AffineCost(const=-w, coeffs=((u, half), (v, half)))


@dataclass(frozen=True)
class GraphFamily:
    """The capacity-2 subgraph followed by the kept st-variants, with labels
    describing each member's origin."""

    members: tuple[CostedGraph, ...]
    labels: tuple[str, ...]


def _symbolic_g2(inst: Instance) -> CostedGraph:
    members = set(inst.n2)
    edges = tuple(
        CostEdge(e.u, e.v, _transfer_affine(e.u, e.v, e.w), i)
        for i, e in enumerate(inst.edges)
        if e.u in members and e.v in members
    )
    return CostedGraph(vertices=inst.n2, edges=edges)


def enumerate_family(inst: Instance, p: Optional[Allocation] = None) -> GraphFamily:
    """The graph family behind the formulation; costs are affine expressions
    in the allocation when p is None, otherwise concrete rationals.

    Variants whose st edge cannot lie on any cycle (an endpoint of degree < 2)
    are dropped: their cycles are already the capacity-2 subgraph's, and
    keeping them would break the family-size bound.
    """
    members: list[CostedGraph] = []
    labels: list[str] = []

    if p is None:
        members.append(_symbolic_g2(inst))
    else:
        members.append(separation.build_g2(inst, p))
    labels.append("g2")

    for s in range(inst.n):
        for t in range(s + 1, inst.n):
            for struct in separation.variant_structures(inst, s, t):
                deg_s = sum(
                    1 for i in struct.edge_ids if s in (inst.edges[i].u, inst.edges[i].v)
                ) + 1
                deg_t = sum(
                    1 for i in struct.edge_ids if t in (inst.edges[i].u, inst.edges[i].v)
                ) + 1
                if deg_s < 2 or deg_t < 2:
                    continue
                if p is None:
                    edges = [
                        CostEdge(
                            inst.edges[i].u,
                            inst.edges[i].v,
                            _transfer_affine(
                                inst.edges[i].u, inst.edges[i].v, inst.edges[i].w
                            ),
                            i,
                        )
                        for i in struct.edge_ids
                    ]
                    half = Fraction(1, 2)
                    edges.append(
                        CostEdge(
                            s, t,
                            AffineCost(const=Fraction(0), coeffs=((s, half), (t, half))),
                            None,
                        )
                    )
                    graph = CostedGraph(
                        vertices=struct.vertices,
                        edges=tuple(edges),
                        marker=len(edges) - 1,
                    )
                else:
                    graph = separation.realize_variant(inst, p, struct).base
                members.append(graph)
                labels.append(
                    f"variant s={s} t={t} kept_s={struct.kept_s} kept_t={struct.kept_t}"
                )
    return GraphFamily(members=tuple(members), labels=tuple(labels))


def family_size_bound(inst: Instance) -> int:
    """1 + sum over ordered endpoint pairs of (d_s - 1)(d_t - 1), degrees taken
    in the st-augmented auxiliary graph."""
    total = 1
    for s in range(inst.n):
        for t in range(inst.n):
            if s == t:
                continue
            members = set(inst.n2) | {s, t}
            d_s = sum(
                1
                for e in inst.edges
                if s in (e.u, e.v)
                and e.u in members
                and e.v in members
                and {e.u, e.v} != {s, t}
            ) + 1
            d_t = sum(
                1
                for e in inst.edges
                if t in (e.u, e.v)
                and e.u in members
                and e.v in members
                and {e.u, e.v} != {s, t}
            ) + 1
            total += (d_s - 1) * (d_t - 1)
    return total


# ---------------------------------------------------------------------------
# Compact flow primal and its mechanical dual, per costed graph.
# ---------------------------------------------------------------------------


def _arcs(g: CostedGraph, skip: int):
    """Both orientations of every edge except `skip`, with owning edge index."""
    for j, e in enumerate(g.edges):
        if j == skip:
            continue
        yield j, e.u, e.v
        yield j, e.v, e.u


def build_flow_primal(g: CostedGraph) -> ConstraintSystem:
    """min sum c_e x_e over the cycle cone, written with one flow block per
    edge: x_ē units must flow from u to v through the rest of the graph,
    every arc capacity bounded by its own x."""
    sys = ConstraintSystem(name="flow-primal")
    for i in range(len(g.edges)):
        sys.add_variable(f"x_e{i}")
    for i in range(len(g.edges)):
        for _, a, b in _arcs(g, i):
            sys.add_variable(f"y_e{i}_{a}_{b}")
    sys.objective = {
        f"x_e{i}": Fraction(e.cost) for i, e in enumerate(g.edges) if e.cost != 0
    }

    for i, ebar in enumerate(g.edges):
        for v in g.vertices:
            coeffs: dict[str, Fraction] = {}
            for j, a, b in _arcs(g, i):
                if a == v:
                    coeffs[f"y_e{i}_{a}_{b}"] = Fraction(1)
                elif b == v:
                    coeffs[f"y_e{i}_{a}_{b}"] = Fraction(-1)
            if v == ebar.u:
                coeffs[f"x_e{i}"] = coeffs.get(f"x_e{i}", Fraction(0)) - 1
            elif v == ebar.v:
                coeffs[f"x_e{i}"] = coeffs.get(f"x_e{i}", Fraction(0)) + 1
            sys.add_constraint(f"flow_e{i}_v{v}", coeffs, "=", 0)
        for j, a, b in _arcs(g, i):
            sys.add_constraint(
                f"cap_e{i}_{a}_{b}",
                {f"y_e{i}_{a}_{b}": Fraction(1), f"x_e{j}": Fraction(-1)},
                "<=",
                0,
            )
    for i in range(len(g.edges)):
        sys.add_constraint(f"nn_x_e{i}", {f"x_e{i}": Fraction(1)}, ">=", 0)
    for i in range(len(g.edges)):
        for _, a, b in _arcs(g, i):
            sys.add_constraint(
                f"nn_y_e{i}_{a}_{b}", {f"y_e{i}_{a}_{b}": Fraction(1)}, ">=", 0
            )
    return sys


def _dual_block(sys: ConstraintSystem, g: CostedGraph, prefix: str,
                cost_of) -> None:
    """Append one graph's dual feasibility block to `sys`.

    `cost_of(edge) -> (const rhs, extra lhs coeffs)` lets the right-hand side
    be a plain rational or an affine function of allocation variables moved to
    the left-hand side.
    """
    m = len(g.edges)
    for i in range(m):
        for v in g.vertices:
            sys.add_variable(f"{prefix}gamma_e{i}_v{v}")
    for i in range(m):
        for _, a, b in _arcs(g, i):
            sys.add_variable(f"{prefix}lam_e{i}_{a}_{b}")

    for i in range(m):
        for j, a, b in _arcs(g, i):
            sys.add_constraint(
                f"{prefix}arc_e{i}_{a}_{b}",
                {
                    f"{prefix}gamma_e{i}_v{a}": Fraction(1),
                    f"{prefix}gamma_e{i}_v{b}": Fraction(-1),
                    f"{prefix}lam_e{i}_{a}_{b}": Fraction(-1),
                },
                "<=",
                0,
            )
    for i, ebar in enumerate(g.edges):
        coeffs: dict[str, Fraction] = {
            f"{prefix}gamma_e{i}_v{ebar.u}": Fraction(-1),
            f"{prefix}gamma_e{i}_v{ebar.v}": Fraction(1),
        }
        # capacity multipliers of edge ē inside every other block
        for k in range(m):
            if k == i:
                continue
            coeffs[f"{prefix}lam_e{k}_{ebar.u}_{ebar.v}"] = Fraction(1)
            coeffs[f"{prefix}lam_e{k}_{ebar.v}_{ebar.u}"] = Fraction(1)
        rhs, extra = cost_of(ebar)
        for var, c in extra.items():
            coeffs[var] = coeffs.get(var, Fraction(0)) + c
        sys.add_constraint(f"{prefix}cost_e{i}", coeffs, "<=", rhs)
    for i in range(m):
        for _, a, b in _arcs(g, i):
            sys.add_constraint(
                f"{prefix}nn_lam_e{i}_{a}_{b}",
                {f"{prefix}lam_e{i}_{a}_{b}": Fraction(1)},
                ">=",
                0,
            )


def build_dual_system(g: CostedGraph, prefix: str = "") -> ConstraintSystem:
    """Mechanical dual of the compact flow primal; feasible iff the primal is
    bounded iff g has no negative-cost cycle."""
    sys = ConstraintSystem(name="flow-dual")

    def cost_of(e: CostEdge):
        return Fraction(e.cost), {}

    _dual_block(sys, g, prefix, cost_of)
    return sys


def build_extended_formulation(inst: Instance) -> ConstraintSystem:
    """The full core system: total value, vertex and edge constraints, plus
    one symbolic dual block per family member. Its projection onto the p
    variables is the core."""
    sys = ConstraintSystem(name=f"core-extform({inst.name or 'instance'})")
    for v in range(inst.n):
        sys.add_variable(f"p_{v}")
    nu_n = matching.b_matching_value(inst)
    sys.add_constraint(
        "total", {f"p_{v}": Fraction(1) for v in range(inst.n)}, "=", nu_n
    )
    for v in range(inst.n):
        sys.add_constraint(f"nn_p_{v}", {f"p_{v}": Fraction(1)}, ">=", 0)
    for i, e in enumerate(inst.edges):
        sys.add_constraint(
            f"edge_e{i}", {f"p_{e.u}": Fraction(1), f"p_{e.v}": Fraction(1)}, ">=", e.w
        )

    family = enumerate_family(inst)
    for k, g in enumerate(family.members):

        def cost_of(e: CostEdge):
            aff: AffineCost = e.cost
            # move the affine p-part to the left-hand side
            return aff.const, {f"p_{v}": -c for v, c in aff.coeffs}

        _dual_block(sys, g, f"g{k}_", cost_of)
    return sys


def check_membership(inst: Instance, p: Allocation) -> bool:
    """Exact core membership through the extended formulation: direct checks
    for the total/vertex/edge constraints, then one phase-I feasibility run
    per family member's dual block."""
    if len(p) != inst.n:
        raise ValueError("allocation length differs from the vertex count")
    if p.total() != matching.b_matching_value(inst):
        return False
    if any(p[v] < 0 for v in range(inst.n)):
        return False
    if any(p[e.u] + p[e.v] < e.w for e in inst.edges):
        return False
    family = enumerate_family(inst, p)
    for g in family.members:
        if not simplex_feasible(build_dual_system(g)).is_feasible:
            return False
    return True


def flow_primal_unbounded(g: CostedGraph) -> bool:
    """Whether min c.x over the cycle-cone flow LP is unbounded below."""
    return simplex_solve(build_flow_primal(g)).status == "unbounded"


@dataclass(frozen=True)
class SizeReport:
    """Exact variable/constraint tallies for the extended formulation, plus
    the closed-form family bound and polynomial size envelopes."""

    n: int
    m: int
    family_size: int
    family_bound: int
    p_vars: int
    gamma_vars: int
    lambda_vars: int
    total_vars: int
    base_constraints: int  # total value + vertex + edge rows
    arc_constraints: int
    cost_constraints: int
    nonneg_constraints: int
    total_constraints: int
    var_envelope: int
    constraint_envelope: int


def size_report(inst: Instance) -> SizeReport:
    family = enumerate_family(inst)
    gamma = 0
    lam = 0
    arc = 0
    cost = 0
    for g in family.members:
        em = len(g.edges)
        nv = len(g.vertices)
        gamma += em * nv
        lam += 2 * em * (em - 1)
        arc += 2 * em * (em - 1)
        cost += em
    n, m = inst.n, inst.m
    envelope_family = 1 + n**4
    block_vars = n * (m + 1) + 2 * (m + 1) * m
    block_cons = 2 * (m + 1) * m + (m + 1) + 2 * (m + 1) * m
    return SizeReport(
        n=n,
        m=m,
        family_size=len(family.members),
        family_bound=family_size_bound(inst),
        p_vars=n,
        gamma_vars=gamma,
        lambda_vars=lam,
        total_vars=n + gamma + lam,
        base_constraints=1 + n + m,
        arc_constraints=arc,
        cost_constraints=cost,
        nonneg_constraints=lam,
        total_constraints=1 + n + m + arc + cost + lam,
        var_envelope=n + envelope_family * block_vars,
        constraint_envelope=1 + n + m + envelope_family * block_cons,
    )
