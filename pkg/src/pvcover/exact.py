"""Exact optimum by branch and bound, for desk-scale instances.

Vertices are decided in descending cost order (include branch first), the
running cost bounds the search, and a group whose remaining reachable weight
drops below its target prunes the subtree.  Among equal-cost optima the
lexicographically smallest chosen set (as a sorted tuple) wins, which keeps
fixtures reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .instance import Instance

__all__ = ["ExactResult", "exact_solve", "DEFAULT_LIMIT"]

DEFAULT_LIMIT = 24


@dataclass(frozen=True)
class ExactResult:
    cost: int
    chosen: tuple[int, ...]
    nodes: int


def exact_solve(inst: Instance, limit: int = DEFAULT_LIMIT) -> ExactResult:
    """Provable optimum; refuses instances with more than limit vertices."""
    n, m, r = inst.n, inst.m, inst.r
    if n > limit:
        raise InputError(f"instance has {n} vertices, exact mode is capped at {limit}")

    costs = inst.costs
    order = sorted(range(n), key=lambda v: (-costs[v], v))
    incident: list[list[int]] = [[] for _ in range(n)]
    for eid, e in enumerate(inst.edges):
        incident[e.u].append(eid)
        incident[e.v].append(eid)
    edge_groups: list[list[int]] = [[] for _ in range(m)]
    for gi, g in enumerate(inst.groups):
        for eid in g.edges:
            edge_groups[eid].append(gi)
    weight = [e.weight for e in inst.edges]
    targets = [g.target for g in inst.groups]
    total = [inst.group_weight(gi) for gi in range(r)]

    chosen_ends = [0] * m  # chosen endpoints per edge
    gone_ends = [0] * m  # excluded endpoints per edge
    covered = [0] * r  # weight covered by the chosen set
    lost = [0] * r  # weight no completion of this node can ever cover

    best: list = [None, None]  # cost, sorted chosen tuple
    nodes = 0

    def include(v):
        for eid in incident[v]:
            chosen_ends[eid] += 1
            if chosen_ends[eid] == 1:
                for gi in edge_groups[eid]:
                    covered[gi] += weight[eid]

    def uninclude(v):
        for eid in incident[v]:
            if chosen_ends[eid] == 1:
                for gi in edge_groups[eid]:
                    covered[gi] -= weight[eid]
            chosen_ends[eid] -= 1

    def exclude(v):
        for eid in incident[v]:
            gone_ends[eid] += 1
            if gone_ends[eid] == 2:
                for gi in edge_groups[eid]:
                    lost[gi] += weight[eid]

    def unexclude(v):
        for eid in incident[v]:
            if gone_ends[eid] == 2:
                for gi in edge_groups[eid]:
                    lost[gi] -= weight[eid]
            gone_ends[eid] -= 1

    def settle(cur_cost, picked, idx):
        # picked is already feasible; the only completions worth a look add
        # free vertices, and those improve the tie key exactly when they sit
        # below the current maximum id
        cand = sorted(picked)
        if cand:
            top = cand[-1]
            extras = [v for v in order[idx:] if costs[v] == 0 and v < top]
            if extras:
                cand = sorted(cand + extras)
        key = (cur_cost, tuple(cand))
        if best[0] is None or key < (best[0], best[1]):
            best[0], best[1] = key

    def rec(idx, cur_cost, picked):
        nonlocal nodes
        nodes += 1
        if best[0] is not None and cur_cost > best[0]:
            return
        for gi in range(r):
            if total[gi] - lost[gi] < targets[gi]:
                return
        if all(covered[gi] >= targets[gi] for gi in range(r)):
            settle(cur_cost, picked, idx)
            return
        if idx == n:
            return
        v = order[idx]
        include(v)
        picked.append(v)
        rec(idx + 1, cur_cost + costs[v], picked)
        picked.pop()
        uninclude(v)
        exclude(v)
        rec(idx + 1, cur_cost, picked)
        unexclude(v)

    rec(0, 0, [])
    if best[0] is None:
        # unreachable while targets respect group weights, kept as a guard
        raise InputError("instance admits no feasible vertex set")
    return ExactResult(cost=best[0], chosen=best[1], nodes=nodes)
