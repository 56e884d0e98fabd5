"""Exact integer linear algebra.

Smith normal form with transforms, integer kernels, lattice bases, and
finite abelian groups presented as quotients of lattices.  Matrices are
lists of lists of Python ints; nothing here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def to_matrix(rows, ncols: int | None = None) -> Matrix:
    M = [[int(x) for x in row] for row in rows]
    if not M and ncols is not None:
        return []
    return M


def shape(M: Matrix, ncols: int = 0) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else ncols)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [
        [sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(len(A))
    ]


def matvec(A: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A: Matrix, nrows: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(nrows)]
    return [list(col) for col in zip(*A)]


def columns(A: Matrix) -> list[list[int]]:
    return transpose(A)


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    if not cols:
        return [[] for _ in range(nrows)]
    return [[int(c[i]) for c in cols] for i in range(nrows)]


@dataclass
class SmithForm:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular.

    ``Uinv`` and ``Vinv`` are the exact inverses, maintained alongside the
    elimination so callers never need rational arithmetic.
    """

    D: Matrix
    U: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.V)))]


def smith_normal_form(M, ncols: int | None = None) -> SmithForm:
    """Smith normal form of an integer matrix.

    Returns the diagonal ``D`` (non-negative, each entry dividing the next
    non-zero one) together with the unimodular transforms.
    """
    A = to_matrix(M)
    r = len(A)
    c = len(A[0]) if A else (ncols or 0)
    U, Uinv = identity(r), identity(r)
    V, Vinv = identity(c), identity(c)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        ra, rs = A[dst], A[src]
        for k in range(c):
            if rs[k]:
                ra[k] += q * rs[k]
        ua, us = U[dst], U[src]
        for k in range(r):
            if us[k]:
                ua[k] += q * us[k]
        for row in Uinv:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if q == 0:
            return
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]
        vs, vd = Vinv[src], Vinv[dst]
        for k in range(c):
            if vd[k]:
                vs[k] -= q * vd[k]

    rank = 0
    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                row = A[i]
                for j in range(t, c):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = A[t][t]
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            if any(A[i][t] for i in range(t + 1, r)) or any(A[t][j] for j in range(t + 1, c)):
                continue
            bad = next(
                (i for i in range(t + 1, r) if any(A[i][j] % p for j in range(t + 1, c))),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if t >= r or t >= c or A[t][t] == 0:
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
            for row in Uinv:
                row[t] = -row[t]
        rank = t + 1
    return SmithForm(A, U, V, Uinv, Vinv, rank)


def invariant_factors(M, ncols: int | None = None) -> list[int]:
    """Non-zero diagonal entries of the Smith form (including 1s)."""
    snf = smith_normal_form(M, ncols)
    return snf.diagonal[: snf.rank]


def integer_kernel(M, ncols: int) -> list[list[int]]:
    """Basis of ``{v in Z^ncols : M v = 0}`` as a list of vectors."""
    if not M:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    snf = smith_normal_form(M, ncols)
    return [[snf.V[i][j] for i in range(ncols)] for j in range(snf.rank, ncols)]


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """A basis for the subgroup of ``Z^dim`` spanned by ``gens``."""
    gens = [list(map(int, g)) for g in gens if any(g)]
    if not gens:
        return []
    snf = smith_normal_form(from_columns(gens, dim))
    return [
        [snf.Uinv[i][j] * snf.D[j][j] for i in range(dim)] for j in range(snf.rank)
    ]


def solve_in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int], dim: int):
    """Integer coordinates ``c`` with ``sum c_i basis_i == v`` or ``None``."""
    if not basis:
        return [] if not any(v) else None
    snf = smith_normal_form(from_columns(basis, dim))
    w = matvec(snf.U, v)
    coeffs = []
    for i, x in enumerate(w):
        if i < snf.rank:
            d = snf.D[i][i]
            if x % d:
                return None
            coeffs.append(x // d)
        elif x:
            return None
    coeffs += [0] * (len(basis) - len(coeffs))
    return matvec(snf.V, coeffs)


@dataclass
class FinAbGroup:
    """A finitely generated abelian group ``Z^f + Z/d_1 + ... + Z/d_k``.

    ``generators`` live in an ambient coordinate space (lattice vectors or
    cocycle vectors); ``invariant_factors`` lists the orders of the torsion
    generators, followed by ``free_rank`` generators of infinite order.
    ``coords`` maps an ambient vector of the represented subquotient to its
    coordinates (torsion entries reduced, free entries exact).
    """

    invariant_factors: tuple[int, ...]
    free_rank: int = 0
    generators: list[list[int]] = field(default_factory=list, repr=False)
    coords: Callable[[Sequence[int]], list[int]] | None = field(default=None, repr=False)

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def orders(self) -> list[int]:
        return list(self.invariant_factors) + [0] * self.free_rank

    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        from math import lcm

        return lcm(1, *self.invariant_factors)

    def elements(self):
        """Iterate coordinate tuples of all elements (finite groups only)."""
        if self.free_rank:
            raise ValueError("infinite group")
        return product(*(range(d) for d in self.invariant_factors))

    def element(self, coeffs: Sequence[int]) -> list[int]:
        dim = len(self.generators[0]) if self.generators else 0
        out = [0] * dim
        for c, g in zip(coeffs, self.generators):
            for i in range(dim):
                out[i] += c * g[i]
        return out

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "0"


def quotient_group(
    basis: Sequence[Sequence[int]],
    relations: Sequence[Sequence[int]],
    dim: int,
) -> FinAbGroup:
    """Structure of ``L / M`` where ``L`` has the given basis and ``M <= L``.

    ``relations`` generate ``M`` (each must lie in ``L``).  Generators of the
    result are vectors of ``L`` in ambient coordinates.
    """
    k = len(basis)
    if k == 0:
        return FinAbGroup((), 0, [], lambda v: [])
    rel_coords = []
    for rel in relations:
        c = solve_in_lattice(basis, rel, dim)
        if c is None:
            raise ValueError("relation does not lie in the lattice")
        if any(c):
            rel_coords.append(c)
    if rel_coords:
        snf = smith_normal_form(from_columns(rel_coords, k))
        diag = [snf.D[i][i] for i in range(snf.rank)] + [0] * (k - snf.rank)
        U, Uinv = snf.U, snf.Uinv
    else:
        diag = [0] * k
        U = Uinv = identity(k)
    B = from_columns(basis, dim)
    gens_all = columns(matmul(B, Uinv))
    torsion = [(i, d) for i, d in enumerate(diag) if d > 1]
    free = [i for i, d in enumerate(diag) if d == 0]
    keep = [i for i, _ in torsion] + free
    factors = tuple(d for _, d in torsion)

    def coords(v):
        c = solve_in_lattice(basis, v, dim)
        if c is None:
            raise ValueError("vector not in the lattice")
        w = matvec(U, c)
        out = []
        for i in keep:
            out.append(w[i] % diag[i] if diag[i] else w[i])
        return out

    gens = []
    for i in keep:
        g = gens_all[i]
        gens.append(g)
    return FinAbGroup(factors, len(free), gens, coords)


def hom_kernel(
    phi: Sequence[Sequence[int]],
    src_orders: Sequence[int],
    dst_orders: Sequence[int],
) -> FinAbGroup:
    """Kernel of a homomorphism between diagonal abelian groups.

    ``phi`` is an integer matrix with ``len(dst_orders)`` rows and
    ``len(src_orders)`` columns mapping ``+Z/src_j`` to ``+Z/dst_i``
    (order 0 stands for ``Z``).  The map must be well defined.  The result's
    generators are vectors of ``Z^len(src_orders)`` reduced mod the orders.
    """
    s = len(src_orders)
    rows = [list(map(int, row)) for row in phi]
    ext_cols = [i for i, d in enumerate(dst_orders) if d]
    if rows:
        big = [row + [(-dst_orders[i] if i == j else 0) for j in ext_cols] for i, row in enumerate(rows)]
        kern = integer_kernel(big, s + len(ext_cols))
        gens = [v[:s] for v in kern]
    else:
        gens = [[int(i == j) for i in range(s)] for j in range(s)]
    relations = [[(d if i == j else 0) for i in range(s)] for j, d in enumerate(src_orders) if d]
    basis = lattice_basis(gens + relations, s)
    grp = quotient_group(basis, relations, s)
    grp.generators = [
        [x % src_orders[i] if src_orders[i] else x for i, x in enumerate(g)]
        for g in grp.generators
    ]
    return grp
