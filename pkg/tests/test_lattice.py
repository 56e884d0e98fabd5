import pytest

from kerind.groups import cyclic
from kerind.lattice import (
    LatticeAction,
    LatticeError,
    coinvariants,
    h1_cyclic_lattice,
    h1_lattice,
    mono_check,
    pic_multiplicative,
)
from kerind.scenario import list_fixtures, load_scenario

LATTICES = [f for f in list_fixtures() if f.startswith("lattice-")]


def neg():
    return LatticeAction.from_generators([[[-1]]])


def swap():
    return LatticeAction.from_generators([[[0, 1], [1, 0]]])


def trivial():
    return LatticeAction(cyclic(1), [[[1, 0], [0, 1]]])


def test_h1_examples():
    assert h1_lattice(neg()).invariant_factors == (2,)
    assert h1_lattice(trivial()).is_trivial
    assert h1_lattice(swap()).is_trivial


def test_cyclic_examples():
    assert h1_cyclic_lattice(1, neg()).invariant_factors == (2,)
    assert h1_cyclic_lattice(0, neg()).is_trivial
    assert h1_cyclic_lattice(1, swap()).is_trivial


def test_pic_examples():
    for act in (neg(), trivial(), swap()):
        assert pic_multiplicative(act).is_trivial


def test_coinvariant_examples():
    A = neg()
    co = coinvariants(A, A.group.subgroup(A.group.generators))
    assert co.group.invariant_factors == (2,) and co.group.free_rank == 0 and co.torsion_exponent_ok()
    T = trivial()
    co = coinvariants(T, T.group.subgroup([]))
    assert co.group.free_rank == 2 and not co.group.invariant_factors
    W = swap()
    co = coinvariants(W, W.group.subgroup(W.group.generators))
    assert co.group.free_rank == 1 and not co.group.invariant_factors


def test_mono_examples():
    assert mono_check(1, neg())
    assert mono_check(0, neg())
    assert mono_check(1, swap())


def test_nontrivial_pic_fixture():
    L = load_scenario("lattice-augmentation-v4").lattice
    assert L.group.order == 4 and L.rank == 3
    assert h1_lattice(L).invariant_factors == (4,)
    pic = pic_multiplicative(L)
    assert pic.invariant_factors == (2,)
    # generator cocycles restrict to coboundaries on every cyclic subgroup
    gen = pic.generators[0]
    for C in L.group.cyclic_subgroups():
        sub = L.restrict(C)
        vals = [x for h in C.elements for x in gen[h * L.rank : (h + 1) * L.rank]]
        from kerind.intlinalg import lattice_basis, solve_in_lattice
        B = lattice_basis(sub._coboundary_gens(), C.order * L.rank)
        assert not any(vals) or solve_in_lattice(B, vals, len(vals)) is not None


@pytest.mark.parametrize("name", LATTICES)
def test_lattice_invariants(name):
    L = load_scenario(name).lattice
    G = L.group
    h = h1_lattice(L)
    assert all(G.order % d == 0 for d in h.invariant_factors)
    p = pic_multiplicative(L)
    assert h.order % p.order == 0
    for C in G.cyclic_subgroups():
        c = C.generator()
        assert h1_cyclic_lattice(c, L).invariant_factors == h1_lattice(L.restrict(C)).invariant_factors
        assert mono_check(c, L)
    for H in G.subgroups():
        assert coinvariants(L, H).torsion_exponent_ok()


def test_invalid_matrices():
    with pytest.raises(LatticeError):
        LatticeAction.from_generators([[[2]]])
    with pytest.raises(LatticeError):
        LatticeAction(cyclic(2), [[[1]], [[1, 0], [0, 1]]])
    with pytest.raises(LatticeError):
        LatticeAction(cyclic(2), [[[1, 0], [0, 1]], [[0, 1], [1, 1]]])
