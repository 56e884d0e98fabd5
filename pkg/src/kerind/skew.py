"""Skew group rings, twisted modules and the module-theoretic kernel oracle.

Nothing here calls into :mod:`kerind.cohomology`; only ring arithmetic and
the action tables are shared.  Submodules are computed as additive spans of
encoded vectors, refined under the module operations until stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Sequence

import numpy as np

from . import intlinalg
from .actions import ActionError, RingAction
from .rings import FiniteCommRing, mat_det

SPAN_LIMIT = 1 << 22


class FreeModule:
    """``S^n`` with vectors encoded as integers in ``[0, |S|^n)``."""

    def __init__(self, ring: FiniteCommRing, n: int):
        self.ring = ring
        self.n = n
        self.size = ring.size**n
        if self.size > SPAN_LIMIT:
            raise ValueError(f"|S|^{n} = {self.size} is too large for explicit spans")
        self.weights = np.array([ring.size ** (n - 1 - i) for i in range(n)], dtype=np.int64)

    def encode(self, v) -> np.ndarray:
        return np.asarray(v, dtype=np.int64) @ self.weights

    def decode(self, code) -> np.ndarray:
        code = np.asarray(code, dtype=np.int64)
        return (code[..., None] // self.weights) % self.ring.size

    def add(self, a, b):
        return self.encode(self.ring.add(self.decode(a), self.decode(b)))

    def additive_generators(self) -> list[int]:
        out = []
        for i in range(self.n):
            for b in self.ring.additive_generators:
                v = np.zeros(self.n, dtype=np.int64)
                v[i] = b
                out.append(int(self.encode(v)))
        return out

    def span(self, gens: Sequence[int]) -> np.ndarray:
        """Boolean mask of the additive subgroup generated by ``gens``."""
        mask = np.zeros(self.size, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        gens = [int(g) for g in gens if int(g) != 0]
        while frontier.size:
            new = []
            for g in gens:
                cand = np.unique(self.add(frontier, g))
                cand = cand[~mask[cand]]
                mask[cand] = True
                new.append(cand)
            frontier = np.concatenate(new) if new else np.array([], dtype=np.int64)
        return mask

    def closure(self, gens: Sequence[int], ops: Sequence[Callable[[np.ndarray], np.ndarray]]) -> np.ndarray:
        """Smallest additive subgroup containing ``gens`` and stable under the
        additive maps ``ops``."""
        gens = sorted({int(g) for g in gens})
        mask = self.span(gens)
        while True:
            arr = np.array(gens, dtype=np.int64) if gens else np.zeros(0, dtype=np.int64)
            new = set()
            for op in ops:
                if arr.size == 0:
                    break
                img = np.asarray(op(arr)).ravel()
                new.update(int(x) for x in img[~mask[img]])
            if not new:
                return mask
            gens = sorted(set(gens) | new)
            mask = self.span(gens)


class SkewGroupRing:
    """``T = S*G``: elements are coefficient arrays over ``G`` (``sum_g g a_g``)
    with ``ga . hb = gh . a^h b``."""

    def __init__(self, action: RingAction):
        self.action = action
        self.ring = action.ring
        self.group = action.group

    def basis(self, g: int, a: int) -> np.ndarray:
        u = np.zeros(self.group.order, dtype=np.int64)
        u[g] = a
        return u

    def scalar(self, a: int) -> np.ndarray:
        return self.basis(0, a)

    @property
    def one(self) -> np.ndarray:
        return self.scalar(self.ring.one)

    def add(self, u, v):
        return self.ring.add(u, v)

    def multiply(self, u, v) -> np.ndarray:
        """Product of (batches of) skew elements."""
        S, G, T = self.ring, self.group, self.action.tables
        u, v = np.asarray(u), np.asarray(v)
        shape = np.broadcast_shapes(u.shape, v.shape)
        out = np.zeros(shape, dtype=np.int64)
        for g in range(G.order):
            for h in range(G.order):
                term = S.mul(T[h][u[..., g]], v[..., h])
                gh = G.table[g, h]
                out[..., gh] = S.add(out[..., gh], term)
        return out

    @cached_property
    def t(self) -> np.ndarray:
        """``sum_g g``."""
        return np.full(self.group.order, self.ring.one, dtype=np.int64)

    @cached_property
    def x(self) -> int:
        return self.action.trace_witness()

    def trace_idempotent(self) -> np.ndarray:
        """``e = t x`` with ``e^2 = e`` checked."""
        e = self.multiply(self.t, self.scalar(self.x))
        if not np.array_equal(self.multiply(e, e), e):
            raise ActionError("t x is not idempotent")
        return e

    def txt_equals_t(self) -> bool:
        return bool(np.array_equal(self.multiply(self.multiply(self.t, self.scalar(self.x)), self.t), self.t))

    def random_elements(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.integers(0, self.ring.size, size=(count, self.group.order))

    def check_associativity(self, rng: np.random.Generator, count: int = 500) -> bool:
        a, b, c = (self.random_elements(rng, count) for _ in range(3))
        return bool(np.array_equal(self.multiply(self.multiply(a, b), c), self.multiply(a, self.multiply(b, c))))

    def check_identity(self, rng: np.random.Generator, count: int = 100) -> bool:
        a = self.random_elements(rng, count)
        return bool(np.array_equal(self.multiply(self.one, a), a) and np.array_equal(self.multiply(a, self.one), a))

    def module_action_on_s(self, s, u) -> np.ndarray:
        """``S`` as a right ``T``-module: ``s . (g b) = s^g b``."""
        S, T = self.ring, self.action.tables
        s = np.asarray(s)
        u = np.asarray(u)
        out = np.zeros(np.broadcast_shapes(s.shape, u.shape[:-1]), dtype=np.int64)
        for g in range(self.group.order):
            out = S.add(out, S.mul(T[g][s], u[..., g]))
        return out

    def check_et_iso(self) -> bool:
        """``eT = tT`` is isomorphic to ``S_T`` via ``s -> t s``.

        Checks that ``s -> ts`` is injective, lands exactly on the right ideal
        ``eT`` (as additive spans), and is ``T``-linear on basis elements.
        """
        S, G = self.ring, self.group
        e = self.trace_idempotent()
        F = FreeModule(S, G.order)
        elems = np.arange(S.size)
        ts = self.multiply(self.t, np.stack([self.basis(0, s) for s in elems]))
        img_codes = F.encode(ts)
        if len(np.unique(img_codes)) != S.size:
            return False
        gens = []
        for g in range(G.order):
            for b in S.additive_generators:
                gens.append(int(F.encode(self.multiply(e, self.basis(g, b)))))
        eT = F.span(gens)
        img_mask = np.zeros(F.size, dtype=bool)
        img_mask[img_codes] = True
        if not np.array_equal(eT, img_mask):
            return False
        for g in range(G.order):
            for b in S.additive_generators:
                u = self.basis(g, b)
                lhs = ts[self.module_action_on_s(elems, u)]
                rhs = self.multiply(ts, u)
                if not np.array_equal(lhs, rhs):
                    return False
        return True


class TwistedModule:
    """``P = (S^n)_d`` with ``v . (g s) = v^g d(g) s`` (row vectors).

    ``values`` is the cocycle's value table, shape ``(|G|, n, n)``.
    """

    def __init__(self, action: RingAction, values):
        self.action = action
        self.ring = action.ring
        self.group = action.group
        self.values = np.asarray(values, dtype=np.int64)
        self.n = self.values.shape[-1]
        self.free = FreeModule(self.ring, self.n)
        self.skew = SkewGroupRing(action)

    def _vecmat(self, V, A) -> np.ndarray:
        """Row vectors times a matrix over the ring."""
        S = self.ring
        out = np.zeros(V.shape[:-1] + (A.shape[-1],), dtype=np.int64)
        for j in range(A.shape[-1]):
            acc = np.zeros(V.shape[:-1], dtype=np.int64)
            for k in range(V.shape[-1]):
                acc = S.add(acc, S.mul(V[..., k], A[..., k, j]))
            out[..., j] = acc
        return out

    def act_group(self, V, g: int) -> np.ndarray:
        """``v . g = v^g d(g)``."""
        return self._vecmat(self.action.tables[g][np.asarray(V)], self.values[g])

    def act_scalar(self, V, s: int) -> np.ndarray:
        return self.ring.mul(np.asarray(V), s)

    def act(self, V, u) -> np.ndarray:
        """``v . u`` for a skew element ``u = sum_g g a_g``."""
        V = np.asarray(V)
        out = np.zeros(V.shape, dtype=np.int64)
        for g in range(self.group.order):
            out = self.ring.add(out, self.act_scalar(self.act_group(V, g), u[g]))
        return out

    def check_module_axioms(self, rng: np.random.Generator, count: int = 50) -> bool:
        V = rng.integers(0, self.ring.size, size=(count, self.n))
        T = self.skew
        u, w = T.random_elements(rng, count), T.random_elements(rng, count)
        lhs = np.stack([self.act(self.act(V[i], u[i]), w[i]) for i in range(count)])
        rhs = np.stack([self.act(V[i], T.multiply(u[i], w[i])) for i in range(count)])
        return bool(np.array_equal(lhs, rhs))

    def _ops(self, with_group: bool):
        F = self.free
        ops = []
        if with_group:
            for g in self.group.generators:
                ops.append(lambda c, g=g: F.encode(self.act_group(F.decode(c), g)))
        for b in self.ring.additive_generators:
            ops.append(lambda c, b=b: F.encode(self.act_scalar(F.decode(c), b)))
        return ops

    def pi_closure(self) -> np.ndarray:
        """Mask of ``P I`` with ``I = T e T``: the ``T``-submodule generated by ``P e``."""
        F = self.free
        e = self.skew.trace_idempotent()
        basis = F.decode(np.array(F.additive_generators()))
        pe = F.encode(self.act(basis, e))
        return F.closure(pe.tolist(), self._ops(with_group=True))

    def pi_equals_p(self) -> bool:
        return bool(self.pi_closure().all())

    def fixed_points(self) -> tuple[np.ndarray, bool]:
        """``Q = P^G`` (encoded vectors) and whether ``Q S = P``."""
        S, F, n = self.ring, self.free, self.n
        D = S.dim
        nb = n * D
        basis = np.zeros((nb, n), dtype=np.int64)
        for i in range(n):
            for k, b in enumerate(S.additive_generators):
                basis[i * D + k, i] = b
        cols = []
        for g in self.group.generators:
            diff = S.sub(self.act_group(basis, g), basis)
            cols.append(S.to_coords(diff).reshape(nb, -1))
        phi = np.concatenate(cols, axis=1).T
        src = np.tile(S.orders, n)
        dst = np.tile(S.orders, n * len(self.group.generators))
        K = intlinalg.hom_kernel(phi.tolist(), src.tolist(), dst.tolist())
        gens = []
        for coeffs in K.generators:
            c = np.asarray(coeffs, dtype=np.int64).reshape(n, D)
            gens.append(int(F.encode(S.from_coords(c))))
        Q = F.span(gens)
        qs = F.closure(gens, self._ops(with_group=False))
        return np.flatnonzero(Q), bool(qs.all())

    def fiber_criterion(self, cap: int = 10**6) -> bool:
        """``P/PM = (S/M)^n`` over each decomposition group.

        Looks for an invertible ``A`` over ``S/M`` with ``A = A^g d(g)`` for
        the generators ``g`` of the decomposition group, solving the linear
        conditions over ``F_p`` by elimination and scanning the solutions.
        """
        return all(self.fiber_at(M, cap) for M in self.ring.maximal_ideals())

    def fiber_at(self, M, cap: int = 10**6) -> bool:
        act = self.action
        H = act.decomposition_group(M)
        Hg = H.as_group()
        gens = [H.elements[i] for i in Hg.generators]
        quot, proj = self.ring.quotient(M)
        n = self.n
        p = int(quot.orders[0]) if quot.dim else 1
        if quot.size == 1:
            return True
        if len(set(int(o) for o in quot.orders)) != 1:
            raise ValueError("residue ring is not a field of prime characteristic")
        k = quot.dim
        reps = getattr(quot, "reps", np.arange(quot.size))
        nvar = n * n * k
        # variable j is coordinate (j % k) of entry (j // k)
        basis = np.zeros((nvar, n, n), dtype=np.int64)
        qgens = quot.additive_generators
        for j in range(nvar):
            e = j // k
            basis[j, e // n, e % n] = qgens[j % k]
        rows = []
        for g in gens:
            tg = proj[act.tables[g][reps]]  # induced automorphism of S/M
            dg = proj[self.values[g]]
            Ag = tg[basis]
            prod_ = np.zeros_like(basis)
            for i in range(n):
                for j in range(n):
                    acc = np.zeros(nvar, dtype=np.int64)
                    for t in range(n):
                        acc = quot.add(acc, quot.mul(Ag[:, i, t], dg[t, j]))
                    prod_[:, i, j] = acc
            diff = quot.sub(prod_, basis)
            rows.append(quot.to_coords(diff).reshape(nvar, -1).T)
        if rows:
            A = np.concatenate(rows, axis=0) % p
            null = _nullspace_mod_p(A, p)
        else:
            null = np.eye(nvar, dtype=np.int64)
        dim = len(null)
        if p**dim > cap:
            raise ValueError("fiber solution space exceeds the cap")
        for coeffs in product(range(p), repeat=dim):
            if not any(coeffs):
                continue
            c = (np.asarray(coeffs, dtype=np.int64) @ null) % p
            mat = quot.from_coords(c.reshape(n, n, k))
            if quot.is_unit(mat_det(quot, mat)):
                return True
        return False


def _nullspace_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of ``{x : A x = 0 mod p}``."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    out = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i, f]) % p
        out.append(v)
    return np.array(out, dtype=np.int64).reshape(len(out), cols)


@dataclass
class OracleVerdict:
    pi_equals_p: bool
    fiber: bool
    span: bool
    pi_size: int
    fixed_size: int

    @property
    def agree(self) -> bool:
        return self.pi_equals_p == self.fiber and (self.span or not self.pi_equals_p)

    def to_json(self) -> dict:
        return {
            "pi_equals_p": self.pi_equals_p,
            "fiber": self.fiber,
            "span": self.span,
            "pi_size": self.pi_size,
            "fixed_size": self.fixed_size,
        }


def kernel_oracle(action: RingAction, values) -> OracleVerdict:
    """Module-theoretic verdict for the class of the cocycle ``values``."""
    if not action.has_star:
        raise ActionError("the oracle needs an element of trace 1")
    P = TwistedModule(action, values)
    pi = P.pi_closure()
    Q, span = P.fixed_points()
    return OracleVerdict(bool(pi.all()), P.fiber_criterion(), span, int(pi.sum()), len(Q))
