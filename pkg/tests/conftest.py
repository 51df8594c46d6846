import numpy as np
import pytest

import pvcover as pv

PATH_TEXT = """\
p pvc 3 2 1
v 0 1
v 1 1
v 2 1
e 0 0 1 1
e 1 1 2 1
g 0 0 1
k 0 2
"""

LOPSIDED_EDGE_TEXT = """\
p pvc 2 1 1
v 0 3
v 1 5
e 0 0 1 1
g 0 0
k 0 1
"""


@pytest.fixture
def star5():
    return pv.generate_star(5)


@pytest.fixture
def path3():
    """a-b-c with one group that needs both edges covered."""
    return pv.parse_instance(PATH_TEXT)


@pytest.fixture
def lopsided_edge():
    """Single edge, endpoint costs 3 and 5, target 1."""
    return pv.parse_instance(LOPSIDED_EDGE_TEXT)


def random_instances(count, n, m, r, seed0=0, weight_max=1, overlap=0.0):
    """Deterministic family of generator outputs for seeded property tests."""
    cfg = pv.GeneratorConfig(weight_range=(1, weight_max))
    out = []
    for s in range(seed0, seed0 + count):
        inst = pv.generate_random(n, m, r, seed=s, config=cfg)
        if overlap > 0.0:
            inst = pv.with_overlapping_groups(inst, overlap, seed=s + 104729)
        out.append(inst)
    return out


def brute_force_optimum(inst):
    """Reference optimum by full subset enumeration; keeps the lexicographic
    tie rule explicit so the branch-and-bound tie-breaking is pinned too."""
    n = inst.n
    best = None
    for mask in range(1 << n):
        chosen = tuple(v for v in range(n) if mask >> v & 1)
        if not pv.is_feasible(inst, chosen):
            continue
        key = (sum(inst.costs[v] for v in chosen), chosen)
        if best is None or key < best:
            best = key
    return best


def philox(seed):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
