import numpy as np
import pytest

from kerind.groups import GroupError, FiniteGroup, build_group, cyclic, dihedral, symmetric


@pytest.mark.parametrize("spec,order,ncyc,nsub", [("C6", 6, 4, 4), ("C2xC2", 4, 4, 5), ("S3", 6, 5, 6), ("D4", 8, 7, 10)])
def test_orders_and_subgroups(spec, order, ncyc, nsub):
    G = build_group(spec)
    assert G.order == order
    assert len(G.cyclic_subgroups()) == ncyc
    subs = G.subgroups()
    assert len(subs) == nsub
    for H in subs:
        assert H.elements[0] == 0 and G.closure(H.elements) == list(H.elements)


def test_quotient():
    S3 = symmetric(3)
    A3 = next(H for H in S3.subgroups() if H.order == 3)
    assert S3.is_normal(A3)
    Q, proj = S3.quotient(A3)
    assert Q.order == 2 and np.all(proj[list(A3.elements)] == 0)
    C2 = next(H for H in S3.subgroups() if H.order == 2)
    assert not S3.is_normal(C2)
    with pytest.raises(GroupError):
        S3.quotient(C2)


def test_words_cover_group():
    G = dihedral(4)
    words = G.words()
    assert sorted(c for _, _, c in words) == list(range(1, 8))
    for parent, k, child in words:
        assert G.table[parent, G.generators[k]] == child


def test_bad_table():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        build_group("Q8x")


def test_element_orders():
    C = cyclic(6)
    assert [C.element_order(g) for g in range(6)] == [1, 6, 3, 2, 3, 6]
    assert C.power(1, 4) == 4
