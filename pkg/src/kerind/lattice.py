"""Abelian cohomology of finite groups acting on lattices ``Z^r``.

Lattice vectors are rows and ``g`` acts by ``a -> a M_g`` (so ``M_gh =
M_g M_h``).  Everything is exact integer arithmetic via :mod:`kerind.intlinalg`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import FiniteGroup, Subgroup
from .intlinalg import (
    FinAbGroup,
    integer_kernel,
    lattice_basis,
    quotient_group,
    smith_normal_form,
    solve_in_lattice,
)


class LatticeError(ValueError):
    pass


def _key(M: np.ndarray) -> tuple:
    return tuple(int(x) for x in M.ravel())


class LatticeAction:
    """A finite group acting on ``Z^rank`` through integer matrices."""

    def __init__(self, group: FiniteGroup, matrices: Sequence, name: str = ""):
        self.group = group
        self.mats = [np.asarray(m, dtype=object) for m in matrices]
        self.rank = self.mats[0].shape[0] if self.mats else 0
        self.name = name
        self._verify()

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence[Sequence[int]]], name: str = "") -> "LatticeAction":
        """Close the generator matrices into a finite matrix group."""
        gens = [np.asarray(g, dtype=object) for g in generators]
        if not gens:
            raise LatticeError("need at least one generator")
        r = gens[0].shape[0]
        eye = np.eye(r, dtype=object)
        elems = [eye]
        pos = {_key(eye): 0}
        frontier = [eye]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x.dot(g)
                    k = _key(y)
                    if k not in pos:
                        if len(elems) >= 1000:
                            raise LatticeError("generated group is too large or infinite")
                        pos[k] = len(elems)
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
        table = [[pos[_key(a.dot(b))] for b in elems] for a in elems]
        gen_labels = [pos[_key(g)] for g in gens if pos[_key(g)] != 0]
        group = FiniteGroup(table, generators=gen_labels, name=name or "G")
        return cls(group, elems, name=name)

    def _verify(self) -> None:
        G = self.group
        if len(self.mats) != G.order:
            raise LatticeError("need one matrix per group element")
        if any(M.shape != (self.rank, self.rank) for M in self.mats):
            raise LatticeError("matrices must be square of a common size")
        eye = np.eye(self.rank, dtype=object)
        if not np.array_equal(self.mats[0], eye):
            raise LatticeError("identity does not act as the identity matrix")
        for g in range(G.order):
            d = _int_det(self.mats[g])
            if d not in (1, -1):
                raise LatticeError("matrix is not invertible over Z")
            for h in range(G.order):
                if not np.array_equal(self.mats[g].dot(self.mats[h]), self.mats[G.table[g, h]]):
                    raise LatticeError("matrices do not form a representation (M_g M_h != M_gh)")

    def restrict(self, H: Subgroup) -> "LatticeAction":
        return LatticeAction(H.as_group(), [self.mats[h] for h in H.elements], name=f"{self.name}|H")

    # -- cohomology --------------------------------------------------------
    def _coboundary_gens(self) -> list[list[int]]:
        r, G = self.rank, self.group
        out = []
        for i in range(r):
            a = np.zeros(r, dtype=object)
            a[i] = 1
            vec = []
            for g in range(G.order):
                vec.extend(int(x) for x in (a.dot(self.mats[g]) - a))
            out.append(vec)
        return out

    @cached_property
    def cocycle_lattice(self) -> list[list[int]]:
        """Basis of ``Z^1``: vectors ``(d(g))_g`` with ``d(gh) = d(g) M_h + d(h)``."""
        r, G = self.rank, self.group
        nvar = G.order * r
        rows = []
        for g in range(G.order):
            for h in range(G.order):
                gh = G.table[g, h]
                for j in range(r):
                    row = [0] * nvar
                    row[gh * r + j] += 1
                    for i in range(r):
                        row[g * r + i] -= int(self.mats[h][i, j])
                    row[h * r + j] -= 1
                    if any(row):
                        rows.append(row)
        # drop duplicate equations before elimination
        rows = [list(t) for t in sorted(set(tuple(x) for x in rows))]
        kern = integer_kernel(rows, nvar) if rows else [[int(i == j) for i in range(nvar)] for j in range(nvar)]
        return lattice_basis(kern, nvar)

    def h1(self) -> FinAbGroup:
        """``H^1(G, A) = Z^1/B^1``."""
        nvar = self.group.order * self.rank
        grp = quotient_group(self.cocycle_lattice, self._coboundary_gens(), nvar)
        B = lattice_basis(self._coboundary_gens(), nvar)
        for gen in grp.generators:
            mult = [self.group.order * x for x in gen]
            if solve_in_lattice(B, mult, nvar) is None and any(mult):
                raise LatticeError("|G| does not annihilate H^1")
        if grp.free_rank:
            raise LatticeError("H^1 of a finite group must be finite")
        return grp

    def cyclic_h1(self, c: int) -> FinAbGroup:
        """``ker(N_c) / im(M_c - 1)`` for ``N_c = sum_(i<m) M_c^i``."""
        r = self.rank
        m = self.group.element_order(c)
        M = self.mats[c]
        eye = np.eye(r, dtype=object)
        N = np.zeros((r, r), dtype=object)
        P = eye.copy()
        for _ in range(m):
            N = N + P
            P = P.dot(M)
        # row vectors x with x N = 0  <=>  N^T x^T = 0
        ker = integer_kernel([[int(x) for x in row] for row in N.T], r)
        kb = lattice_basis(ker, r)
        im = [[int(x) for x in row] for row in (M - eye)]
        return quotient_group(kb, im, r)

    def restriction_map(self, H: Subgroup) -> list[list[int]]:
        """Matrix sending ``(d(g))_g`` to ``(d(h))_(h in H)`` (rows = outputs)."""
        r = self.rank
        nvar = self.group.order * r
        rows = []
        for h in H.elements:
            for j in range(r):
                row = [0] * nvar
                row[h * r + j] = 1
                rows.append(row)
        return rows

    def pic(self) -> FinAbGroup:
        """Classes of ``H^1(G, A)`` restricting to zero on every cyclic subgroup."""
        nvar = self.group.order * self.rank
        K = self.cocycle_lattice
        for C in self.group.cyclic_subgroups():
            if C.order == 1 or not K:
                continue
            sub = self.restrict(C)
            B_C = lattice_basis(sub._coboundary_gens(), C.order * self.rank)
            R = self.restriction_map(C)
            RK = [[sum(R[i][t] * k[t] for t in range(nvar)) for i in range(len(R))] for k in K]
            # coefficients y, w with sum y_j RK_j = sum w_l B_l
            cols = RK + [[-x for x in b] for b in B_C]
            mat = [[c[i] for c in cols] for i in range(len(R))]
            ker = integer_kernel(mat, len(cols))
            new = []
            for v in ker:
                y = v[: len(K)]
                new.append([sum(y[j] * K[j][t] for j in range(len(K))) for t in range(nvar)])
            K = lattice_basis(new, nvar)
        grp = quotient_group(K, self._coboundary_gens(), nvar) if K else FinAbGroup((), 0, [], lambda v: [])
        if grp.free_rank:
            raise LatticeError("Pic must be finite")
        return grp

    def coinvariants(self, H: Subgroup) -> "Coinvariants":
        """``A_H = A / [A, H]`` with ``[A, H]`` spanned by the rows of ``M_h - 1``."""
        r = self.rank
        eye = np.eye(r, dtype=object)
        rels = []
        for h in H.elements:
            for row in self.mats[h] - eye:
                if any(row):
                    rels.append([int(x) for x in row])
        ident = [[int(i == j) for i in range(r)] for j in range(r)]
        grp = quotient_group(ident, rels, r)
        return Coinvariants(grp, H.order, rels)

    def mono_check(self, c: int) -> bool:
        """Injectivity of ``H^1(C, A) -> Hom(C, A_C)`` for ``C = <c>``, by kernel enumeration."""
        C = self.group.subgroup([c])
        h = self.cyclic_h1(c)
        co = self.coinvariants(C).group
        nonzero_to_zero = 0
        for coeffs in h.elements():
            if not any(coeffs):
                continue
            x = h.element(coeffs)
            img = co.coords(x)
            tors = img[: len(co.invariant_factors)]
            free = img[len(co.invariant_factors) :]
            if not any(tors) and not any(free):
                nonzero_to_zero += 1
        return nonzero_to_zero == 0


@dataclass
class Coinvariants:
    group: FinAbGroup
    order_h: int
    relations: list = field(repr=False, default_factory=list)

    def torsion_exponent_ok(self) -> bool:
        """Every torsion invariant factor divides a power of ``|H|`` (exponent at most the rank)."""
        rank = len(self.group.generators[0]) if self.group.generators else 0
        bound = self.order_h ** max(rank, 1)
        return all(bound % d == 0 for d in self.group.invariant_factors)

    def to_json(self) -> dict:
        return {
            "invariant_factors": list(self.group.invariant_factors),
            "free_rank": self.group.free_rank,
            "subgroup_order": self.order_h,
            "torsion_annihilated": self.torsion_exponent_ok(),
        }


def _int_det(M: np.ndarray) -> int:
    rows = [[int(x) for x in r] for r in M]
    snf = smith_normal_form(rows)
    n = len(rows)
    if snf.rank < n:
        return 0
    d = 1
    for x in snf.diagonal:
        d *= x
    # the Smith form only gives |det|; the sign comes from a fraction-free elimination
    return d * _det_sign(rows)


def _det_sign(rows: list[list[int]]) -> int:
    from fractions import Fraction

    A = [[Fraction(x) for x in r] for r in rows]
    n = len(A)
    sign = 1
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        if A[c][c] < 0:
            sign = -sign
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return sign


def h1_lattice(act: LatticeAction) -> FinAbGroup:
    return act.h1()


def h1_cyclic_lattice(c: int, act: LatticeAction) -> FinAbGroup:
    return act.cyclic_h1(c)


def pic_multiplicative(act: LatticeAction) -> FinAbGroup:
    return act.pic()


def coinvariants(act: LatticeAction, H: Subgroup) -> Coinvariants:
    return act.coinvariants(H)


def mono_check(c: int, act: LatticeAction) -> bool:
    return act.mono_check(c)


def describe(group: FinAbGroup) -> dict:
    return {
        "invariant_factors": list(group.invariant_factors),
        "free_rank": group.free_rank,
        "order": group.order,
        "generators": [list(map(int, g)) for g in group.generators],
    }
