import numpy as np
import pytest

from conftest import ring_action, scenario_action
from kerind.cohomology import (
    AbstractGGroup,
    Cocycle,
    add_classes,
    cocycles_cyclic,
    cohomologous,
    congruence_kernel_test,
    det_push,
    enumerate_cocycles,
    inflate,
    is_unit,
    matrix_view,
    quotient_view,
    radical_push,
    restrict,
    rho_maximal,
    rho_subgroup,
    s_matrix,
    shift,
    stable_equal,
    unit_embed,
)
from kerind.groups import build_group, cyclic
from kerind.rings import block_diag, build_ring, mat_identity, mat_inv, mat_mul, pad_matrix


def _unit_cocycle_values(view, u):
    """Level-one cocycle of C2 with d(g) = u."""
    return np.array([[[view.ring.one]], [[u]]])


def _c(dual3):
    U = matrix_view(dual3, 1)
    return U.h1()[1]


# -- enumeration -----------------------------------------------------------

def test_trivial_c2_on_units_z8():
    act = ring_action("Z/8", "C2", ["identity"], require_star=False)
    U = matrix_view(act, 1)
    assert len(enumerate_cocycles(U)) == 4
    assert len(U.h1()) == 4


def test_u_f4_frobenius(f4):
    U = matrix_view(f4, 1)
    assert U.designation == "U"
    Z = enumerate_cocycles(U)
    assert len(Z) == 3
    assert {z.key for z in Z} == {z.key for z in cocycles_cyclic(U)}
    assert len(U.h1()) == 1
    w = f4.ring.parse_element("x")
    d = Cocycle(U, _unit_cocycle_values(U, w))
    x = cohomologous(d, U.unit_cocycle())
    assert x is not None and U.relates(d.values, U.unit_values(), x)
    assert int(x[0, 0]) == w


def test_u_dual_numbers(dual3):
    U = matrix_view(dual3, 1)
    assert len(cocycles_cyclic(U)) == 6
    assert len(enumerate_cocycles(U)) == 6
    classes = U.h1()
    assert len(classes) == 2 and classes[0].is_neutral() and not classes[1].is_neutral()
    minus = Cocycle(U, _unit_cocycle_values(U, dual3.ring.from_int(-1)))
    assert cohomologous(minus, U.unit_cocycle()) is None
    assert cohomologous(minus, minus) is not None


def test_unit_cocycle_always_present(dual3, f4):
    for act in (dual3, f4, scenario_action("f2-x4-c3")):
        for n in (1, 2):
            V = matrix_view(act, n)
            assert any(z.key == V.unit_cocycle().key for z in V.cocycles())


def test_bad_cocycle_rejected(dual3):
    U = matrix_view(dual3, 1)
    S = dual3.ring
    with pytest.raises(ValueError, match="cocycle"):
        Cocycle(U, np.array([[[S.from_int(2)]], [[S.one]]]))
    with pytest.raises(ValueError, match="cocycle"):
        Cocycle(U, _unit_cocycle_values(U, S.parse_element("x")))


@pytest.mark.parametrize("name", ["f4-frobenius", "z3-dual-negate", "f2-x4-c3", "f2cube-rotation", "z9-trivial"])
@pytest.mark.parametrize("n", [1, 2])
def test_cyclic_fast_path_matches(name, n):
    V = matrix_view(scenario_action(name), n)
    assert {z.key for z in cocycles_cyclic(V)} == {z.key for z in enumerate_cocycles(V)}


def test_canonical_reproducible(dual3):
    fresh = ring_action("(Z/3)[x]/(x^2)", "C2", ["negate"])
    a = [c.rep.values.tolist() for c in matrix_view(dual3, 2).h1()]
    b = [c.rep.values.tolist() for c in matrix_view(fresh, 2).h1()]
    assert a == b


def test_abstract_trivial_c2_on_v4():
    X = build_group("C2xC2")
    view = AbstractGGroup(cyclic(2), X.table)
    assert len(view.h1()) == 4


# -- restriction and inflation ---------------------------------------------

def _v4_on_c2():
    G = build_group("C2xC2")
    view = AbstractGGroup(G, cyclic(2).table)
    a, b = G.generators
    return G, view, a, b


def test_restriction_example():
    G, view, a, b = _v4_on_c2()
    vals = np.zeros(4, dtype=np.int64)
    vals[b] = vals[G.table[a, b]] = 1
    cls = view.classify(vals)
    assert restrict(cls, G.subgroup([a])).is_neutral()
    assert not restrict(cls, G.subgroup([b])).is_neutral()
    assert restrict(cls, G.subgroup([])).is_neutral()
    assert restrict(cls, G.subgroup(G.generators)).rep.values.tolist() == cls.rep.values.tolist()


def test_inflation_example():
    G, view, a, b = _v4_on_c2()
    N = G.subgroup([a])
    qv = quotient_view(view, N)
    nontrivial = [c for c in qv.view.h1() if not c.is_neutral()]
    assert len(nontrivial) == 1
    inf = inflate(nontrivial[0], qv)
    assert inf.rep.values[a] == 0 and inf.rep.values[b] == 1
    assert inflate(qv.view.h1()[0], qv).is_neutral()
    full = quotient_view(view, G.subgroup(G.generators))
    assert all(inflate(c, full).is_neutral() for c in full.view.h1())


# -- block sums -------------------------------------------------------------

def test_s_matrix_examples():
    S = build_ring("Z/5")
    assert s_matrix(1, 1, S).tolist() == [[0, 4], [1, 0]]
    A = np.array([[2, 1], [0, 3]])
    assert np.array_equal(shift(S, A, 0), A)


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)])
def test_s_matrix_swaps_blocks(m, n, rng):
    S = build_ring("(Z/3)[x]/(x^2)")
    A = rng.integers(0, S.size, size=(n, n))
    B = rng.integers(0, S.size, size=(m, m))
    s = s_matrix(m, n, S)
    si, ok = mat_inv(S, s)
    assert ok
    lhs = mat_mul(S, mat_mul(S, si, block_diag(S, A, B)), s)
    assert np.array_equal(lhs, block_diag(S, B, A))
    # x[m] = s^-1 (x padded) s
    pad = mat_mul(S, mat_mul(S, si, pad_matrix(S, A, m + n)), s)
    assert np.array_equal(pad, shift(S, A, m))
    from kerind.rings import mat_det
    assert int(mat_det(S, s)) == S.one


def test_block_sum_and_det(dual3):
    U = matrix_view(dual3, 1)
    S = dual3.ring
    classes = U.h1()
    for a in classes:
        for b in classes:
            ab = add_classes(unit_embed(a), unit_embed(b))
            assert ab.level == 2
            prod = U.classify(S.mul(a.rep.values, b.rep.values))
            assert det_push(ab).key == prod.key
    neutral = U.neutral_class()
    assert det_push(matrix_view(dual3, 2).neutral_class()).key == neutral.key


def test_det_push_unit_embed_identity(dual3, f4):
    for act in (dual3, f4, scenario_action("f3-mixed-negate")):
        for b in matrix_view(act, 1).h1():
            assert det_push(unit_embed(b)).key == b.key


def test_stable_equal_examples(dual3):
    c = _c(dual3)
    assert stable_equal(c, c).equal
    v = stable_equal(c, matrix_view(dual3, 1).neutral_class(), bound=3)
    assert v.status == "not-equal-up-to-bound"
    S = dual3.ring
    u = c.rep.values[:, 0, 0]
    one = np.full_like(u, S.one)
    V2 = matrix_view(dual3, 2)
    left = V2.classify(np.stack([np.stack([np.stack([u, 0 * u], -1), np.stack([0 * u, one], -1)], -2)], 0)[0])
    right = V2.classify(np.stack([np.stack([np.stack([one, 0 * u], -1), np.stack([0 * u, u], -1)], -2)], 0)[0])
    res = stable_equal(left, right)
    assert res.equal and res.level == 2


# -- reductions and the kernel test -----------------------------------------

def test_rho_examples(dual3):
    c = _c(dual3)
    G = dual3.group
    whole = G.subgroup(G.generators)
    r = rho_subgroup(c, whole)
    assert r.view.ring.size == 3 and not r.is_neutral()
    assert int(r.rep.values[1, 0, 0]) == int(r.view.ring.from_int(-1))
    assert rho_subgroup(matrix_view(dual3, 1).neutral_class(), whole).is_neutral()
    (M,) = dual3.ring.maximal_ideals()
    assert not rho_maximal(c, M, "inertia").is_neutral()
    assert not rho_maximal(c, M, "decomposition").is_neutral()


def test_rho_zero_ring_and_galois():
    swap = scenario_action("f2xf2-swap")
    G = swap.group
    for n in (1, 2):
        for a in matrix_view(swap, n).h1():
            r = rho_subgroup(a, G.subgroup(G.generators))
            assert r.view.ring.is_zero_ring and r.is_neutral()
            for M in swap.ring.maximal_ideals():
                assert rho_maximal(a, M).is_neutral()


def test_congruence_examples(dual3, f4):
    c = _c(dual3)
    assert congruence_kernel_test(matrix_view(dual3, 1).neutral_class())
    assert not congruence_kernel_test(c)
    for a in matrix_view(f4, 2).h1():
        assert congruence_kernel_test(a)


def test_is_unit_examples(dual3):
    U = matrix_view(dual3, 1)
    v = is_unit(U.neutral_class(), bound=3)
    assert v.congruence and v.search == "unit" and v.inverse.is_neutral()
    v = is_unit(_c(dual3), bound=3)
    assert v.congruence is False and v.search == "not-unit-up-to-bound"
    assert v.consistent


def test_radical_push_example(dual3):
    c = _c(dual3)
    r = radical_push(c)
    assert r.view.ring.size == 3 and r.view.action.is_trivial and not r.is_neutral()
    assert radical_push(matrix_view(dual3, 1).neutral_class()).is_neutral()


def test_sl_view(dual3):
    V = matrix_view(dual3, 2, "SL")
    assert V.designation == "SL"
    from kerind.rings import mat_det
    assert np.all(mat_det(dual3.ring, V.elements()) == dual3.ring.one)
    assert V.h1()[0].is_neutral()
