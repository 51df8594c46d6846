"""Greedy baseline: determinism, feasibility, and the stated selection rule."""

import pvcover as pv
from conftest import random_instances


def test_greedy_pinned_examples(star5, lopsided_edge):
    assert pv.greedy_solve(star5).chosen == (0,)
    assert pv.greedy_solve(star5).cost == 1
    assert pv.greedy_solve(lopsided_edge).chosen == (0,)


def test_greedy_tie_goes_to_lower_id():
    inst = pv.parse_instance(
        "p pvc 4 2 2\nv 0 1\nv 1 1\nv 2 1\nv 3 1\n"
        "e 0 0 1 1\ne 1 2 3 1\ng 0 0\ng 1 1\nk 0 1\nk 1 1\n"
    )
    assert pv.greedy_solve(inst).chosen == (0, 2)


def test_greedy_gain_caps_at_remaining_demand():
    # vertex 1 touches weight 6 in the group but only 2 is still needed, so
    # the cheap low-degree vertex 3 (gain 2, cost 1) must beat it on ratio
    inst = pv.parse_instance(
        "p pvc 4 3 1\n"
        "v 0 0\nv 1 3\nv 2 9\nv 3 1\n"
        "e 0 0 1 4\ne 1 1 2 2\ne 2 2 3 2\n"
        "g 0 0 1 2\nk 0 6\n"
    )
    sel = pv.greedy_solve(inst)
    # the free vertex covers weight 4 first, then 3 finishes the job
    assert sel.chosen == (0, 3)
    assert sel.cost == 1


def test_greedy_zero_cost_prepass():
    inst = pv.parse_instance(
        "p pvc 3 2 1\nv 0 0\nv 1 5\nv 2 0\n"
        "e 0 0 1 1\ne 1 1 2 1\ng 0 0 1\nk 0 2\n"
    )
    sel = pv.greedy_solve(inst)
    assert sel.chosen == (0, 2)
    assert sel.cost == 0


def test_greedy_always_feasible_and_never_beats_exact():
    fams = (
        random_instances(15, n=9, m=14, r=3),
        random_instances(8, n=9, m=14, r=3, weight_max=5),
        random_instances(8, n=9, m=14, r=3, overlap=0.35),
    )
    for fam in fams:
        for inst in fam:
            sel = pv.greedy_solve(inst)
            assert pv.is_feasible(inst, sel.chosen)
            assert sel.cost >= pv.exact_solve(inst).cost


def test_greedy_deterministic():
    inst = random_instances(1, n=10, m=16, r=4, seed0=3)[0]
    assert pv.greedy_solve(inst) == pv.greedy_solve(inst)
