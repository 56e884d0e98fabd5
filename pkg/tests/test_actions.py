import numpy as np
import pytest

from conftest import ring_action, scenario_action
from kerind.actions import ActionError, RingAction, StarViolation, generator_table
from kerind.groups import build_group, cyclic
from kerind.rings import build_ring

GALOIS = ["f4-frobenius", "f9-frobenius", "f2xf2-swap", "f2cube-rotation", "gr4-frobenius"]
ALL = GALOIS + ["z3-dual-negate", "f3-mixed-negate", "f2-x4-c3", "z9-trivial", "f3-trivial-v4"]


def test_trace_trivial_group():
    S = build_ring("Z/12")
    act = RingAction(S, cyclic(1), [])
    assert np.array_equal(act.trace(np.arange(12)), np.arange(12))
    assert act.trace_witness() == S.one


def test_f4_trace_and_witness(f4):
    S = f4.ring
    w = S.parse_element("x")
    assert f4.trace(w) == S.one
    assert f4.trace_witness() == w


def test_dual_trace_and_witness(dual3):
    S = dual3.ring
    for a in range(3):
        for b in range(3):
            s = S.parse_element(f"{a}+{b}x")
            assert dual3.trace(s) == S.from_int(2 * a)
    assert dual3.trace_witness() == S.from_int(2)


def test_star_violation():
    with pytest.raises(StarViolation, match=r"\(\*\) has no witness"):
        ring_action("Z/8", "C2", ["identity"])
    act = ring_action("Z/8", "C2", ["identity"], require_star=False)
    assert not act.has_star


def test_invariant_subrings(dual3):
    swap = scenario_action("f2xf2-swap")
    R = swap.invariant_subring()
    assert sorted(swap.ring.format(int(r)) for r in R) == ["(0, 0)", "(1, 1)"]
    assert sorted(dual3.ring.format(int(r)) for r in dual3.invariant_subring()) == ["0", "1", "2"]
    triv = ring_action("Z/9", "C2", ["identity"])
    assert len(triv.invariant_subring()) == 9


def test_decomposition_and_inertia(dual3, f4):
    swap = scenario_action("f2xf2-swap")
    S = swap.ring
    M = next(m for m in S.maximal_ideals() if S.parse_element("(0, 1)") in m)
    assert swap.decomposition_group(M).order == 1
    (Mx,) = dual3.ring.maximal_ideals()
    assert dual3.decomposition_group(Mx).order == 2
    assert dual3.inertia_group(Mx).order == 2
    (M0,) = f4.ring.maximal_ideals()
    assert f4.inertia_group(M0).order == 1


def test_j_ideals(dual3):
    G = dual3.group
    whole = G.subgroup(G.generators)
    assert dual3.j_ideal(whole) == dual3.ring.nilradical()
    trivial = G.subgroup([])
    assert dual3.j_ideal(trivial) == dual3.ring.nilradical()
    swap = scenario_action("f2xf2-swap")
    assert swap.j_ideal(swap.group.subgroup(swap.group.generators)).is_unit_ideal


def test_residual_rings(dual3):
    G = dual3.group
    Q, proj, ind = dual3.residual_ring(G.subgroup(G.generators))
    assert Q.size == 3 and ind.is_trivial
    swap = scenario_action("f2xf2-swap")
    Z, _, _ = swap.residual_ring(swap.group.subgroup(swap.group.generators))
    assert Z.is_zero_ring
    f = ring_action("F9", "C2", ["frobenius"])
    S1, _, _ = f.residual_ring(f.group.subgroup([]))
    assert S1.size == 9


def test_galois_detection(dual3):
    for name in GALOIS:
        act = scenario_action(name)
        assert act.is_galois() and act.has_star
    assert not dual3.is_galois()


@pytest.mark.parametrize("name", ALL)
def test_action_invariants(name, rng):
    act = scenario_action(name)
    S, G = act.ring, act.group
    maxes = S.maximal_ideals()
    # conjugacy equivariance of inertia
    for M in maxes:
        T = set(act.inertia_group(M).elements)
        for g in range(G.order):
            gi = int(G.inverses[g])
            conj = {int(G.table[G.table[gi, t], g]) for t in T}
            assert set(act.inertia_group(act.ideal_image(g, M)).elements) == conj
    # H inside inertia of M iff M contains J(H)
    for H in G.subgroups():
        J = act.j_ideal(H)
        for M in maxes:
            assert (set(H.elements) <= set(act.inertia_group(M).elements)) == (J <= M)
        _, _, ind = act.residual_ring(H)
        assert ind.is_trivial
    # trace lands in R and is R-linear
    tr = act.trace(np.arange(S.size))
    assert np.all(act.invariant_mask[tr])
    R = act.invariant_subring()
    r = rng.choice(R, 200)
    s = rng.integers(0, S.size, 200)
    assert np.array_equal(act.trace(S.mul(r, s)), S.mul(r, act.trace(s)))


def test_not_a_homomorphism():
    S = build_ring("F4")
    frob = generator_table(S, "frobenius")
    with pytest.raises(ActionError):
        RingAction(S, cyclic(3), [frob])


def test_not_an_automorphism():
    S = build_ring("Z/9")
    with pytest.raises(ActionError):
        generator_table(S, [0, 2, 4, 6, 8, 1, 3, 5, 7])
