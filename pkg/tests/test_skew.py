import numpy as np
import pytest

from conftest import scenario_action
from kerind.actions import ActionError
from kerind.cohomology import matrix_view
from kerind.skew import SkewGroupRing, TwistedModule, kernel_oracle

FIXTURES = ["f4-frobenius", "f9-frobenius", "f2xf2-swap", "f2cube-rotation", "gr4-frobenius",
            "z3-dual-negate", "f3-mixed-negate", "f2-x4-c3", "z9-trivial", "f3-trivial-v4"]


def test_basis_rule_f4(f4):
    T = SkewGroupRing(f4)
    S = f4.ring
    w = S.parse_element("x")
    sigma = f4.group.generators[0]
    prod = T.multiply(T.basis(sigma, w), T.basis(sigma, S.one))
    assert np.array_equal(prod, T.basis(0, S.mul(w, w)))


def test_identity_element(f4, rng):
    T = SkewGroupRing(f4)
    assert T.check_identity(rng)


def test_trace_idempotents(f4, dual3):
    T = SkewGroupRing(f4)
    w = f4.ring.parse_element("x")
    assert T.trace_idempotent().tolist() == [w, w]
    D = SkewGroupRing(dual3)
    two = dual3.ring.from_int(2)
    assert D.trace_idempotent().tolist() == [two, two]


def test_trivial_group_idempotent():
    from kerind.actions import RingAction
    from kerind.groups import cyclic
    from kerind.rings import build_ring
    S = build_ring("Z/9")
    T = SkewGroupRing(RingAction(S, cyclic(1), []))
    assert T.trace_idempotent().tolist() == [S.one]


@pytest.mark.parametrize("name", FIXTURES)
def test_skew_ring_laws(name, rng):
    T = SkewGroupRing(scenario_action(name))
    assert T.check_associativity(rng, 500)
    assert T.txt_equals_t()
    e = T.trace_idempotent()
    assert np.array_equal(T.multiply(e, e), e)
    assert T.check_et_iso()


@pytest.mark.parametrize("name", ["z3-dual-negate", "f3-mixed-negate", "f2-x4-c3"])
def test_module_axioms(name, rng):
    act = scenario_action(name)
    for a in matrix_view(act, 2).h1():
        assert TwistedModule(act, a.rep.values).check_module_axioms(rng)


def test_unit_cocycle(f4, dual3):
    for act in (f4, dual3):
        P = TwistedModule(act, matrix_view(act, 1).unit_values())
        assert P.pi_equals_p() and P.fiber_criterion()
        Q, span = P.fixed_points()
        assert span and sorted(int(q) for q in Q) == sorted(int(r) for r in act.invariant_subring())


def test_nontrivial_dual_class(dual3):
    c = matrix_view(dual3, 1).h1()[1]
    P = TwistedModule(dual3, c.rep.values)
    pi = P.pi_closure()
    assert not pi.all() and pi.sum() == 3
    assert not P.fiber_criterion()
    (M,) = dual3.ring.maximal_ideals()
    assert not P.fiber_at(M)
    Q, span = P.fixed_points()
    assert len(Q) == 3 and not span
    S = dual3.ring
    xs = {int(S.mul(S.from_int(b), S.parse_element("x"))) for b in range(3)}
    assert {int(P.free.decode(q)[0]) for q in Q} == xs


def test_galois_oracle(f4):
    for n in (1, 2):
        for a in matrix_view(f4, n).h1():
            v = kernel_oracle(f4, a.rep.values)
            assert v.pi_equals_p and v.fiber and v.span
    U = matrix_view(f4, 1)
    for z in U.cocycles():
        Q, span = TwistedModule(f4, z.values).fixed_points()
        assert len(Q) == 2 and span


@pytest.mark.parametrize("name", FIXTURES)
def test_unit_cocycle_free_fixed_points(name):
    act = scenario_action(name)
    R = len(act.invariant_subring())
    for n in (1, 2):
        P = TwistedModule(act, matrix_view(act, n).unit_values())
        Q, span = P.fixed_points()
        assert span and len(Q) == R**n


def test_oracle_needs_star():
    act = scenario_action("z8-trivial-c2")
    with pytest.raises(ActionError):
        kernel_oracle(act, matrix_view(act, 1).unit_values())
