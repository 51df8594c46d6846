"""Data model for partition vertex cover: validation, text format, generators."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError

__all__ = [
    "Edge",
    "Group",
    "Instance",
    "SetCoverInstance",
    "GeneratorConfig",
    "parse_instance",
    "serialize_instance",
    "parse_set_cover",
    "serialize_set_cover",
    "check_strict_partition",
    "generate_star",
    "generate_random",
    "with_overlapping_groups",
    "reduce_set_cover",
    "coverage",
    "is_feasible",
]


@dataclass(frozen=True)
class Edge:
    """Undirected edge with a positive integer weight."""

    u: int
    v: int
    weight: int


@dataclass(frozen=True)
class Group:
    """Member edge indices (sorted, duplicate-free) plus the coverage target."""

    edges: tuple[int, ...]
    target: int


@dataclass(frozen=True)
class Instance:
    """A covering instance over an undirected graph.

    Vertex ids are dense 0..n-1 and costs[v] is the non-negative integer cost
    of vertex v.  Groups reference edges by index; they may overlap and need
    not exhaust the edge set.  A group target never exceeds the total weight
    of its members, so picking every vertex is always feasible.  Instances
    are immutable and hashable.
    """

    costs: tuple[int, ...]
    edges: tuple[Edge, ...]
    groups: tuple[Group, ...]

    def __post_init__(self):
        n = len(self.costs)
        if n == 0:
            raise InputError("instance needs at least one vertex")
        for v, c in enumerate(self.costs):
            if c < 0:
                raise InputError(f"vertex {v}: cost must be non-negative, got {c}")
        for eid, e in enumerate(self.edges):
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise InputError(f"edge {eid}: endpoint out of range for n={n}")
            if e.u == e.v:
                raise InputError(f"edge {eid}: self-loop at vertex {e.u}")
            if e.weight < 1:
                raise InputError(f"edge {eid}: weight must be a positive integer, got {e.weight}")
        for gi, g in enumerate(self.groups):
            if not g.edges:
                raise InputError(f"group {gi}: empty membership")
            if list(g.edges) != sorted(set(g.edges)):
                raise InputError(f"group {gi}: members must be sorted and duplicate-free")
            for eid in g.edges:
                if not (0 <= eid < len(self.edges)):
                    raise InputError(f"group {gi}: unknown edge index {eid}")
            total = sum(self.edges[eid].weight for eid in g.edges)
            if g.target < 0:
                raise InputError(f"group {gi}: target must be non-negative, got {g.target}")
            if g.target > total:
                raise InputError(
                    f"group {gi}: target {g.target} exceeds total member weight {total}"
                )

    @property
    def n(self) -> int:
        return len(self.costs)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def r(self) -> int:
        return len(self.groups)

    @property
    def total_cost(self) -> int:
        return sum(self.costs)

    def group_weight(self, gi: int) -> int:
        return sum(self.edges[eid].weight for eid in self.groups[gi].edges)


def check_strict_partition(inst: Instance) -> None:
    """Require the groups to be pairwise disjoint and to cover every edge."""
    seen: dict[int, int] = {}
    for gi, g in enumerate(inst.groups):
        for eid in g.edges:
            if eid in seen:
                raise InputError(
                    f"strict partition violated: edge {eid} is in groups {seen[eid]} and {gi}"
                )
            seen[eid] = gi
    missing = [eid for eid in range(inst.m) if eid not in seen]
    if missing:
        raise InputError(f"strict partition violated: edges {missing} belong to no group")


# ----------------------------------------------------------------------
# text format
# ----------------------------------------------------------------------

def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise InputError(f"line {lineno}: {what} must be an integer, got {tok!r}") from None


def _parse_gid(tok: str, lineno: int) -> int:
    # group ids may be written bare ("0") or tagged ("g0")
    if tok[:1] == "g" and tok[1:].isdigit():
        tok = tok[1:]
    return _parse_int(tok, lineno, "group id")


def _record_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_instance(text: str | bytes, strict_partition: bool = False) -> Instance:
    """Parse the line-oriented instance format.

    Records: header "p pvc n m r", vertex lines "v id cost", edge lines
    "e id u v weight", membership lines "g gid eid..." (a group may span
    several), target lines "k gid target".  "#" starts a comment.  Raises
    InputError with a line number on any malformed or incomplete input.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"instance file is not valid UTF-8: {exc}") from None

    lines = _record_lines(text)
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise InputError("empty instance file") from None
    if len(toks) != 5 or toks[0] != "p" or toks[1] != "pvc":
        raise InputError(f"line {lineno}: expected header 'p pvc <n> <m> <r>'")
    n = _parse_int(toks[2], lineno, "vertex count")
    m = _parse_int(toks[3], lineno, "edge count")
    r = _parse_int(toks[4], lineno, "group count")

    costs: dict[int, int] = {}
    edges: dict[int, Edge] = {}
    members: dict[int, list[int]] = {}
    targets: dict[int, int] = {}

    for lineno, toks in lines:
        kind = toks[0]
        if kind == "v":
            if len(toks) != 3:
                raise InputError(f"line {lineno}: vertex record needs 'v <id> <cost>'")
            vid = _parse_int(toks[1], lineno, "vertex id")
            if vid in costs:
                raise InputError(f"line {lineno}: duplicate vertex id {vid}")
            costs[vid] = _parse_int(toks[2], lineno, "vertex cost")
        elif kind == "e":
            if len(toks) != 5:
                raise InputError(f"line {lineno}: edge record needs 'e <id> <u> <v> <weight>'")
            eid = _parse_int(toks[1], lineno, "edge id")
            if eid in edges:
                raise InputError(f"line {lineno}: duplicate edge id {eid}")
            edges[eid] = Edge(
                _parse_int(toks[2], lineno, "endpoint"),
                _parse_int(toks[3], lineno, "endpoint"),
                _parse_int(toks[4], lineno, "edge weight"),
            )
        elif kind == "g":
            if len(toks) < 3:
                raise InputError(f"line {lineno}: membership record needs 'g <gid> <eid>...'")
            gid = _parse_gid(toks[1], lineno)
            bucket = members.setdefault(gid, [])
            for tok in toks[2:]:
                eid = _parse_int(tok, lineno, "edge index")
                if eid in bucket:
                    raise InputError(f"line {lineno}: duplicate edge {eid} in group {gid}")
                bucket.append(eid)
        elif kind == "k":
            if len(toks) != 3:
                raise InputError(f"line {lineno}: target record needs 'k <gid> <target>'")
            gid = _parse_gid(toks[1], lineno)
            if gid in targets:
                raise InputError(f"line {lineno}: duplicate target for group {gid}")
            targets[gid] = _parse_int(toks[2], lineno, "group target")
        elif kind == "p":
            raise InputError(f"line {lineno}: duplicate header")
        else:
            raise InputError(f"line {lineno}: unknown record type {kind!r}")

    if sorted(costs) != list(range(n)):
        missing = sorted(set(range(n)) - set(costs))
        extra = sorted(set(costs) - set(range(n)))
        raise InputError(f"vertex records do not cover 0..{n - 1}: missing {missing}, extra {extra}")
    if sorted(edges) != list(range(m)):
        missing = sorted(set(range(m)) - set(edges))
        extra = sorted(set(edges) - set(range(m)))
        raise InputError(f"edge records do not cover 0..{m - 1}: missing {missing}, extra {extra}")
    for gid in sorted(members):
        if not (0 <= gid < r):
            raise InputError(f"membership for unknown group {gid} (r={r})")
    for gid in sorted(targets):
        if not (0 <= gid < r):
            raise InputError(f"target for unknown group {gid} (r={r})")
    for gid in range(r):
        if gid not in members:
            raise InputError(f"group {gid} has no membership record")
        if gid not in targets:
            raise InputError(f"group {gid} has no target record")

    inst = Instance(
        costs=tuple(costs[v] for v in range(n)),
        edges=tuple(edges[e] for e in range(m)),
        groups=tuple(Group(tuple(sorted(members[g])), targets[g]) for g in range(r)),
    )
    if strict_partition:
        check_strict_partition(inst)
    return inst


def serialize_instance(inst: Instance) -> str:
    """Canonical text form: records in id order, single spaces, one trailing newline."""
    out = [f"p pvc {inst.n} {inst.m} {inst.r}"]
    for v, c in enumerate(inst.costs):
        out.append(f"v {v} {c}")
    for eid, e in enumerate(inst.edges):
        out.append(f"e {eid} {e.u} {e.v} {e.weight}")
    for gi, g in enumerate(inst.groups):
        out.append("g " + str(gi) + " " + " ".join(str(eid) for eid in g.edges))
    for gi, g in enumerate(inst.groups):
        out.append(f"k {gi} {g.target}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class SetCoverInstance:
    """Weighted set cover: n_elements ground elements, sets with member tuples."""

    n_elements: int
    sets: tuple[tuple[int, ...], ...]
    costs: tuple[int, ...]

    def __post_init__(self):
        if self.n_elements < 1:
            raise InputError("set cover needs at least one element")
        if len(self.sets) != len(self.costs):
            raise InputError("set cover: one cost per set required")
        if not self.sets:
            raise InputError("set cover needs at least one set")
        covered = set()
        for si, members in enumerate(self.sets):
            if list(members) != sorted(set(members)):
                raise InputError(f"set {si}: members must be sorted and duplicate-free")
            for el in members:
                if not (0 <= el < self.n_elements):
                    raise InputError(f"set {si}: unknown element {el}")
            if self.costs[si] < 0:
                raise InputError(f"set {si}: cost must be non-negative")
            covered.update(members)
        missing = sorted(set(range(self.n_elements)) - covered)
        if missing:
            raise InputError(f"elements {missing} are not covered by any set")


def parse_set_cover(text: str | bytes) -> SetCoverInstance:
    """Parse 'p sc <elements> <sets>' followed by 's <sid> <cost> <elem>...' lines."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"set cover file is not valid UTF-8: {exc}") from None
    lines = _record_lines(text)
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise InputError("empty set cover file") from None
    if len(toks) != 4 or toks[0] != "p" or toks[1] != "sc":
        raise InputError(f"line {lineno}: expected header 'p sc <elements> <sets>'")
    r = _parse_int(toks[2], lineno, "element count")
    m = _parse_int(toks[3], lineno, "set count")
    sets: dict[int, tuple[int, ...]] = {}
    costs: dict[int, int] = {}
    for lineno, toks in lines:
        if toks[0] != "s":
            raise InputError(f"line {lineno}: unknown record type {toks[0]!r}")
        if len(toks) < 3:
            raise InputError(f"line {lineno}: set record needs 's <sid> <cost> <elem>...'")
        sid = _parse_int(toks[1], lineno, "set id")
        if sid in sets:
            raise InputError(f"line {lineno}: duplicate set id {sid}")
        costs[sid] = _parse_int(toks[2], lineno, "set cost")
        sets[sid] = tuple(sorted(_parse_int(t, lineno, "element") for t in toks[3:]))
    if sorted(sets) != list(range(m)):
        raise InputError(f"set records do not cover 0..{m - 1}")
    return SetCoverInstance(
        n_elements=r,
        sets=tuple(sets[s] for s in range(m)),
        costs=tuple(costs[s] for s in range(m)),
    )


def serialize_set_cover(sc: SetCoverInstance) -> str:
    out = [f"p sc {sc.n_elements} {len(sc.sets)}"]
    for sid, members in enumerate(sc.sets):
        out.append(f"s {sid} {sc.costs[sid]} " + " ".join(str(el) for el in members))
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------

def coverage(inst: Instance, chosen) -> tuple[int, ...]:
    """Per-group weight of member edges touched by the chosen vertex set."""
    picked = set(chosen)
    out = []
    for g in inst.groups:
        w = 0
        for eid in g.edges:
            e = inst.edges[eid]
            if e.u in picked or e.v in picked:
                w += e.weight
        out.append(w)
    return tuple(out)


def is_feasible(inst: Instance, chosen) -> bool:
    """True when every group's covered weight reaches its target."""
    got = coverage(inst, chosen)
    return all(w >= g.target for w, g in zip(got, inst.groups))


# ----------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------

def _rng(seed: int) -> np.random.Generator:
    # Philox is the pinned generator for everything in this package.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def generate_star(degree: int) -> Instance:
    """Star with unit costs and weights: center 0, leaves 1..degree, one group, target 1.

    The canonical family where the natural LP pays only 1/degree while the
    strengthened relaxation and the integral optimum both pay 1.
    """
    if degree < 1:
        raise InputError(f"star degree must be at least 1, got {degree}")
    edges = tuple(Edge(0, leaf, 1) for leaf in range(1, degree + 1))
    return Instance(
        costs=(1,) * (degree + 1),
        edges=edges,
        groups=(Group(tuple(range(degree)), 1),),
    )


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for generate_random.

    cost_range and weight_range are inclusive integer ranges; weights must
    stay positive.  group_assignment is "random" (each group gets one edge,
    the rest land uniformly) or "round_robin".  Targets are drawn uniformly
    from 1..group weight, so generated instances are never degenerate.
    """

    cost_range: tuple[int, int] = (1, 10)
    weight_range: tuple[int, int] = (1, 1)
    group_assignment: str = "random"

    def __post_init__(self):
        lo, hi = self.cost_range
        if lo < 0 or hi < lo:
            raise InputError(f"bad cost_range {self.cost_range}")
        lo, hi = self.weight_range
        if lo < 1 or hi < lo:
            raise InputError(f"bad weight_range {self.weight_range}")
        if self.group_assignment not in ("random", "round_robin"):
            raise InputError(f"unknown group_assignment {self.group_assignment!r}")


def generate_random(
    n: int,
    m: int,
    r: int,
    seed: int,
    config: GeneratorConfig = GeneratorConfig(),
) -> Instance:
    """Random instance with n vertices, m edges, r nonempty groups.

    Deterministic for a fixed (n, m, r, seed, config).  Parallel edges may
    occur; self-loops never do.
    """
    if n < 2:
        raise InputError(f"need at least two vertices to place an edge, got n={n}")
    if not (m >= r >= 1):
        raise InputError(f"need m >= r >= 1, got m={m}, r={r}")
    rng = _rng(seed)
    clo, chi = config.cost_range
    wlo, whi = config.weight_range
    costs = tuple(int(c) for c in rng.integers(clo, chi + 1, size=n))
    edges = []
    for _ in range(m):
        u, v = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        edges.append(Edge(u, v, int(rng.integers(wlo, whi + 1))))
    if config.group_assignment == "round_robin":
        owner = [eid % r for eid in range(m)]
    else:
        owner = [0] * m
        perm = [int(x) for x in rng.permutation(m)]
        for gi, eid in enumerate(perm[:r]):
            owner[eid] = gi
        for eid in perm[r:]:
            owner[eid] = int(rng.integers(r))
    members: list[list[int]] = [[] for _ in range(r)]
    for eid, gi in enumerate(owner):
        members[gi].append(eid)
    groups = []
    for gi in range(r):
        total = sum(edges[eid].weight for eid in members[gi])
        target = int(rng.integers(1, total + 1))
        groups.append(Group(tuple(sorted(members[gi])), target))
    return Instance(costs=costs, edges=tuple(edges), groups=tuple(groups))


def with_overlapping_groups(inst: Instance, extra_prob: float, seed: int) -> Instance:
    """Copy of inst where each edge additionally joins each other group with
    probability extra_prob.  Targets carry over unchanged; they stay valid
    because group weights only grow."""
    if not (0.0 <= extra_prob <= 1.0):
        raise InputError(f"extra_prob must be in [0, 1], got {extra_prob}")
    rng = _rng(seed)
    members = [set(g.edges) for g in inst.groups]
    for eid in range(inst.m):
        for gi in range(inst.r):
            if eid not in members[gi] and rng.random() < extra_prob:
                members[gi].add(eid)
    groups = tuple(
        replace(g, edges=tuple(sorted(members[gi]))) for gi, g in enumerate(inst.groups)
    )
    return replace(inst, groups=groups)


def reduce_set_cover(sc: SetCoverInstance, heavy_cost: int | None = None) -> Instance:
    """Encode weighted set cover as a covering instance on a bipartite graph.

    Left vertex i carries set i's cost; right vertex (m + u) stands for
    element u and carries a sentinel cost high enough that no optimal
    solution ever takes it (default: 1 + total left cost).  Element u
    becomes a group over its incident unit-weight edges with target 1,
    so the groups form a strict partition and optima coincide exactly.
    """
    m = len(sc.sets)
    if heavy_cost is None:
        heavy_cost = 1 + sum(sc.costs)
    if heavy_cost <= max(sc.costs, default=0):
        raise InputError("heavy_cost must exceed every set cost")
    edges = []
    incident: list[list[int]] = [[] for _ in range(sc.n_elements)]
    for si, members in enumerate(sc.sets):
        for el in members:
            incident[el].append(len(edges))
            edges.append(Edge(si, m + el, 1))
    groups = tuple(Group(tuple(hits), 1) for hits in incident)
    return Instance(
        costs=tuple(sc.costs) + (heavy_cost,) * sc.n_elements,
        edges=tuple(edges),
        groups=groups,
    )
