import itertools

import pytest

from trinitymaps.flagmap import invariants, is_isomorphic_pointed, tetrahedron, z2_cubed
from trinitymaps.lift import (
    CornerVoltage,
    LiftedFlag,
    add_vectors,
    assign_voltages,
    component_bfs,
    lifted_step,
    normal_subgroup_check,
    orbit_order,
    predicted_counts,
    walk,
)
from trinitymaps.norm import InputError
from trinitymaps.psl2 import ResourceError


def dense_components(cv: CornerVoltage) -> list[int]:
    """Oracle: union-find over dense voltage vectors, independent of the sparse BFS."""
    n, dim, base = cv.n, cv.dim, cv.base_map
    vecs = list(itertools.product(range(n), repeat=dim))
    vid = {v: i for i, v in enumerate(vecs)}
    size = base.n_flags * len(vecs)
    parent = list(range(size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    px, py, pz = (p.tolist() for p in base.perms)
    for g in range(base.n_flags):
        c = cv.corner_of[g]
        sgn = 1 if cv.corners[c][0] == g else -1
        for v in vecs:
            here = g * len(vecs) + vid[v]
            w = list(v)
            w[cv.assignment[c]] = (w[cv.assignment[c]] + sgn) % n
            for other in (px[g] * len(vecs) + vid[v], py[g] * len(vecs) + vid[v], pz[g] * len(vecs) + vid[tuple(w)]):
                ra, rb = find(here), find(other)
                if ra != rb:
                    parent[ra] = rb
    counts = {}
    for a in range(size):
        r = find(a)
        counts[r] = counts.get(r, 0) + 1
    return sorted(counts.values())


def test_toy_lift_n3():
    cv = assign_voltages(z2_cubed(), 3)
    assert cv.dim == 4
    rep = component_bfs(LiftedFlag(0), cv)
    assert rep.total_flags == 648
    assert (rep.component_count, rep.size) == (3, 216)
    assert rep.component_sizes_equal and rep.matches_prediction
    assert dense_components(cv) == [216, 216, 216]
    inv = rep.invariants
    assert (inv.type_k, inv.type_l, inv.petrie_len) == (6, 6, 6)
    assert rep.trinity == (True, True)
    assert not rep.theorem_applies  # even valency base
    tr = normal_subgroup_check(rep.component, cv)
    assert tr.ok and tr.order == tr.expected_order == 27


def test_predicted_counts():
    assert predicted_counts(8, 3) == (3, 216)
    assert predicted_counts(660, 3) == (3**164, 3**166 * 660)
    assert predicted_counts(6, 3) == (None, None)


def test_steps_are_involutions():
    cv = assign_voltages(tetrahedron(), 5)
    f = LiftedFlag(3, ((2, 4),))
    for c in "xyz":
        assert lifted_step(lifted_step(f, c, cv), c, cv) == f
    with pytest.raises(InputError):
        lifted_step(f, "w", cv)


def test_n1_lift_is_base():
    for base in (z2_cubed(), tetrahedron()):
        rep = component_bfs(LiftedFlag(base.base_flag), assign_voltages(base, 1))
        assert rep.size == base.n_flags and rep.component_count == 1
        assert is_isomorphic_pointed(rep.component.map, base)


def test_corrupted_assignment_fails_translation_check():
    cv = assign_voltages(z2_cubed(), 3)
    bad = CornerVoltage(cv.base_map, cv.n, cv.corners, cv.corner_of, (0, 0, 0, 0))
    rep = component_bfs(LiftedFlag(0), bad)
    tr = normal_subgroup_check(rep.component, bad)
    assert not tr.ok
    assert dense_components(bad) != [216, 216, 216]


def test_toy_orbit_orders():
    cv = assign_voltages(z2_cubed(), 3)
    start = LiftedFlag(0)
    assert [orbit_order(start, w, cv) for w in ("yz", "zx", "xy", "xyz")] == [6, 6, 2, 6]
    assert orbit_order(start, "", cv) == 1


def test_k5_orbit_orders(map5):
    d = invariants(map5)
    cv = assign_voltages(map5, 3)
    start = LiftedFlag(map5.base_flag)
    orders = [orbit_order(start, w, cv) for w in ("yz", "zx", "xy", "xyz")]
    assert orders == [15, 15, 2, 15]
    assert orders == [3 * d.type_k, 3 * d.type_l, 2, 3 * d.petrie_len]


def test_k5_exhaustive_over_budget(map5):
    with pytest.raises(ResourceError):
        component_bfs(LiftedFlag(0), assign_voltages(map5, 3))


@pytest.mark.parametrize("n", [0, 2, 4, -3])
def test_bad_modulus(n):
    with pytest.raises(InputError):
        assign_voltages(z2_cubed(), n)


def test_walk_voltage_is_sum_of_crossings():
    cv = assign_voltages(z2_cubed(), 5)
    f = walk(LiftedFlag(0), "zyzxzyz", cv)
    g = walk(f, "zyzxzyz"[::-1], cv)
    assert g == LiftedFlag(0)
    assert add_vectors(((0, 2),), ((0, 3), (1, 1)), 5) == ((1, 1),)
