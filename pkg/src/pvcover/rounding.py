"""Randomized threshold rounding with a logarithmic round schedule.

One round takes every vertex at or above the threshold outright and each
other vertex independently with probability scale * x_v.  A single round
covers any fixed group with probability at least 5/8 whenever the clean
point satisfies the normalized cover row of its threshold set, so a union
of O(log r) independent rounds is feasible with high probability at cost
O(log r) times the fractional objective.

Randomness is pinned: Philox streams from numpy, split per attempt and per
round through SeedSequence.spawn, one uniform draw per below-threshold
vertex in vertex id order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .constants import EPS_FEAS, EPS_OPT, ROUNDING_SCALE, ROUNDING_THRESHOLD
from .errors import RoundingFailure, SolverError
from .instance import Instance, coverage, is_feasible
from .relaxation import FractionalSolution, residual, threshold_set, wdeg

__all__ = [
    "VertexSelection",
    "RoundingConfig",
    "SolveReport",
    "GroupRate",
    "RoundSamples",
    "rounds_for",
    "round_once",
    "solve_rounded",
    "simulate_rounds",
    "single_round_success",
    "expected_round_cost",
    "precondition_margins",
]

Z99 = 2.5758293035489004  # two-sided 99% normal quantile


@dataclass(frozen=True)
class VertexSelection:
    """A chosen vertex set with its exact cost and per-group covered weight."""

    chosen: tuple[int, ...]
    cost: int
    covered: tuple[int, ...]

    @classmethod
    def from_set(cls, inst: Instance, chosen) -> "VertexSelection":
        picked = tuple(sorted(set(chosen)))
        return cls(
            chosen=picked,
            cost=sum(inst.costs[v] for v in picked),
            covered=coverage(inst, picked),
        )


@dataclass(frozen=True)
class RoundingConfig:
    """Seed, round budget multiplier, and the threshold coupling.

    rounds_constant scales the ceil(log2(r + 1)) round schedule.  threshold
    and scale must stay inverses of each other or the per-round success
    guarantee is void.
    """

    seed: int = 0
    rounds_constant: int = 4
    threshold: float = ROUNDING_THRESHOLD
    scale: float = ROUNDING_SCALE
    max_restarts: int = 8

    def __post_init__(self):
        if not (0.0 < self.threshold < 1.0):
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        if abs(self.threshold * self.scale - 1.0) > 1e-9:
            raise ValueError("scale must be the inverse of threshold")
        if self.rounds_constant < 1:
            raise ValueError("rounds_constant must be at least 1")
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be at least 1")


@dataclass(frozen=True)
class SolveReport:
    """Everything the CLI and bench harness report about one rounded solve."""

    seed: int
    rounds: int
    restarts: int
    cost: int
    feasible: bool
    lp_objective: float
    cost_over_lp: float
    covered: tuple[int, ...]
    targets: tuple[int, ...]
    pruned_cost: int | None = None
    pruned_chosen: tuple[int, ...] | None = None
    timings: dict = field(default_factory=dict)

    def to_text(self, include_timings: bool = False) -> str:
        lines = [
            f"rounds: {self.rounds}",
            f"restarts: {self.restarts}",
            f"cost: {self.cost}",
            f"feasible: {str(self.feasible).lower()}",
            f"lp_objective: {self.lp_objective:.9g}",
            f"cost_over_lp: {self.cost_over_lp:.9g}",
            "covered: " + ",".join(str(w) for w in self.covered),
            "targets: " + ",".join(str(t) for t in self.targets),
            f"seed: {self.seed}",
        ]
        if self.pruned_cost is not None:
            lines.append(f"pruned_cost: {self.pruned_cost}")
            lines.append("pruned_chosen: " + ",".join(str(v) for v in self.pruned_chosen))
        if include_timings:
            for stage in sorted(self.timings):
                lines.append(f"time_{stage}: {self.timings[stage]:.6f}")
        return "\n".join(lines)


def rounds_for(r: int, rounds_constant: int) -> int:
    """Round budget: rounds_constant * ceil(log2(r + 1)), at least one round."""
    if r < 1:
        raise ValueError("need at least one group")
    return rounds_constant * math.ceil(math.log2(r + 1))


@lru_cache(maxsize=256)
def _mc_arrays(inst: Instance):
    """Edge endpoint/weight arrays per group, cached per instance."""
    per_group = []
    for g in inst.groups:
        eu = np.array([inst.edges[eid].u for eid in g.edges], dtype=np.int64)
        ev = np.array([inst.edges[eid].v for eid in g.edges], dtype=np.int64)
        ew = np.array([inst.edges[eid].weight for eid in g.edges], dtype=np.int64)
        per_group.append((eu, ev, ew))
    return per_group


def _split_by_threshold(x, threshold):
    sure = []
    rest = []
    for v, xv in enumerate(x):
        if xv >= threshold - EPS_FEAS:
            sure.append(v)
        else:
            rest.append(v)
    return sure, rest


def round_once(
    inst: Instance,
    x,
    rng: np.random.Generator,
    threshold: float = ROUNDING_THRESHOLD,
    scale: float = ROUNDING_SCALE,
) -> VertexSelection:
    """One independent rounding round.

    Consumes exactly one uniform draw per below-threshold vertex, in vertex
    id order, so a round can be replayed from its seed alone.
    """
    sure, rest = _split_by_threshold(x, threshold)
    draws = rng.random(len(rest))
    chosen = list(sure)
    for v, d in zip(rest, draws):
        if d < scale * x[v]:
            chosen.append(v)
    return VertexSelection.from_set(inst, chosen)


@dataclass(frozen=True)
class RoundSamples:
    """Vectorized independent rounds: per-trial cost and per-group success."""

    costs: np.ndarray  # shape (trials,)
    success: np.ndarray  # shape (trials, r), boolean

    @property
    def trials(self) -> int:
        return int(self.costs.shape[0])


def simulate_rounds(
    inst: Instance,
    x,
    trials: int,
    rng: np.random.Generator,
    threshold: float = ROUNDING_THRESHOLD,
    scale: float = ROUNDING_SCALE,
) -> RoundSamples:
    """Draw many independent rounds at once.

    Row t of the draw matrix consumes the same stream round_once would in
    its t-th call on the same generator, so the two agree sample for sample.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    sure, rest = _split_by_threshold(x, threshold)
    probs = np.array([scale * x[v] for v in rest])
    picked = rng.random((trials, len(rest))) < probs[None, :]

    col = {v: i for i, v in enumerate(rest)}
    sure_set = set(sure)
    costs = np.full(trials, sum(inst.costs[v] for v in sure), dtype=np.int64)
    rest_costs = np.array([inst.costs[v] for v in rest], dtype=np.int64)
    costs = costs + picked @ rest_costs

    success = np.empty((trials, inst.r), dtype=bool)
    for gi, (eu, ev, ew) in enumerate(_mc_arrays(inst)):
        base = 0
        rand_cols_u = []
        rand_cols_v = []
        rand_w = []
        for u, v, w in zip(eu, ev, ew):
            if int(u) in sure_set or int(v) in sure_set:
                base += int(w)
            else:
                rand_cols_u.append(col[int(u)])
                rand_cols_v.append(col[int(v)])
                rand_w.append(int(w))
        target = inst.groups[gi].target
        if not rand_w:
            success[:, gi] = base >= target
            continue
        cu = picked[:, np.array(rand_cols_u)]
        cv = picked[:, np.array(rand_cols_v)]
        got = base + (cu | cv) @ np.array(rand_w, dtype=np.int64)
        success[:, gi] = got >= target
    return RoundSamples(costs=costs, success=success)


@dataclass(frozen=True)
class GroupRate:
    frequency: float
    radius: float  # 99% normal-approximation confidence radius


def single_round_success(inst: Instance, x, trials: int, seed: int) -> tuple[GroupRate, ...]:
    """Monte Carlo estimate of each group's single-round success probability."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    samples = simulate_rounds(inst, x, trials, rng)
    rates = []
    for gi in range(inst.r):
        p = float(samples.success[:, gi].mean())
        radius = Z99 * math.sqrt(max(p * (1.0 - p), 0.0) / trials)
        rates.append(GroupRate(frequency=p, radius=radius))
    return tuple(rates)


def expected_round_cost(
    inst: Instance,
    x,
    scale: float = ROUNDING_SCALE,
) -> float:
    """Closed-form expected cost of one round: sum of min(1, scale*x_v) * cost_v."""
    return float(sum(c * min(1.0, scale * xv) for c, xv in zip(inst.costs, x)))


def precondition_margins(
    inst: Instance,
    x,
    threshold: float = ROUNDING_THRESHOLD,
) -> tuple[tuple[int, float], ...]:
    """Normalized cover-row values for groups still unsatisfied by the threshold set.

    Entry (group, margin) with margin = sum over outside vertices of
    min(wdeg, residual)/residual * x_v.  A clean point keeps every margin at
    least 1 up to tolerance; the rounding driver refuses to start otherwise.
    """
    picked = threshold_set(x, threshold)
    out = []
    for gi in range(inst.r):
        left = residual(inst, gi, picked)
        if left < 1:
            continue
        margin = 0.0
        for v in range(inst.n):
            if v in picked:
                continue
            d = wdeg(inst, gi, v, picked)
            if d:
                margin += min(d, left) / left * x[v]
        out.append((gi, margin))
    return tuple(out)


def _prune(inst, chosen) -> tuple[int, ...]:
    """Drop redundant vertices, most expensive first; ties drop lower id first."""
    kept = set(chosen)
    for v in sorted(chosen, key=lambda v: (-inst.costs[v], v)):
        trial = kept - {v}
        if is_feasible(inst, trial):
            kept = trial
    return tuple(sorted(kept))


def solve_rounded(
    inst: Instance,
    frac: FractionalSolution,
    cfg: RoundingConfig = RoundingConfig(),
    prune: bool = False,
) -> tuple[VertexSelection, SolveReport]:
    """Union rounds_for(r, c) independent rounds; restart on the rare failure.

    Requires a clean fractional point: every still-unsatisfied group must
    have a normalized cover-row margin of at least 1, which is what makes a
    single round succeed with probability at least 5/8 per group.
    """
    t0 = time.perf_counter()
    for gi, margin in precondition_margins(inst, frac.x, cfg.threshold):
        if margin < 1.0 - EPS_OPT:
            raise SolverError(
                f"rounding precondition violated: group {gi} margin {margin:.9g} < 1"
            )
    rounds = rounds_for(inst.r, cfg.rounds_constant)
    root = np.random.SeedSequence(cfg.seed)
    attempts = root.spawn(cfg.max_restarts)
    for attempt in range(cfg.max_restarts):
        chosen: set[int] = set()
        for round_seed in attempts[attempt].spawn(rounds):
            rng = np.random.Generator(np.random.Philox(round_seed))
            sel = round_once(inst, frac.x, rng, cfg.threshold, cfg.scale)
            chosen.update(sel.chosen)
        union = VertexSelection.from_set(inst, chosen)
        if is_feasible(inst, union.chosen):
            pruned_cost = None
            pruned_chosen = None
            if prune:
                pruned_chosen = _prune(inst, union.chosen)
                pruned_cost = sum(inst.costs[v] for v in pruned_chosen)
            report = SolveReport(
                seed=cfg.seed,
                rounds=rounds,
                restarts=attempt,
                cost=union.cost,
                feasible=True,
                lp_objective=frac.objective,
                cost_over_lp=(union.cost / frac.objective) if frac.objective > 0 else float("inf"),
                covered=union.covered,
                targets=tuple(g.target for g in inst.groups),
                pruned_cost=pruned_cost,
                pruned_chosen=pruned_chosen,
                timings={"round": time.perf_counter() - t0},
            )
            return union, report
    raise RoundingFailure(
        f"no feasible union after {cfg.max_restarts} attempts of {rounds} rounds"
    )
