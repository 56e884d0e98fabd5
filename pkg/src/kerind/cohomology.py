"""Nonabelian first cohomology of finite groups.

Coefficient groups are presented through :class:`GGroupView` objects whose
elements are numpy arrays (``(n, n)`` matrices of ring elements, or scalar
labels for abstract groups).  Cocycles are full value tables over the group;
classes carry a canonical representative (lexicographically least in the
twisted-conjugation orbit) whenever the coefficient group is enumerable.

Twisted conjugation by ``x`` sends ``e`` to ``g -> x^g e(g) x^-1``.  Every
witness returned by this module has been checked against that formula on the
whole group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import intlinalg
from .actions import ActionError, RingAction
from .groups import FiniteGroup, Subgroup
from .rings import (
    CapExceeded,
    FiniteCommRing,
    block_diag,
    enumerate_general_linear,
    gl_order,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    pad_matrix,
)

DEFAULT_CAP = 10**6
DEFAULT_BOUND = 3
WITNESS_SAMPLES = 512
WITNESS_SEED = 20240601
CHUNK = 1 << 15


class Undetermined(RuntimeError):
    """A bounded search ran out of budget before reaching a verdict."""


def _rows_min(flat: np.ndarray) -> int:
    """Index of the lexicographically least row."""
    if flat.shape[1] == 0:
        return 0
    return int(np.lexsort(flat.T[::-1])[0])


def _keys(flat: np.ndarray) -> list[bytes]:
    flat = np.ascontiguousarray(flat, dtype=np.int64)
    return [row.tobytes() for row in flat]


# ----------------------------------------------------------------------------
# coefficient groups


class GGroupView:
    """A finite group ``X`` with a right action of ``group`` by automorphisms."""

    group: FiniteGroup
    elem_shape: tuple[int, ...]
    designation: str
    level: int = 1

    # -- to be provided ----------------------------------------------------
    def identity(self) -> np.ndarray:
        raise NotImplementedError

    def mul(self, a, b) -> np.ndarray:
        raise NotImplementedError

    def inv(self, a) -> np.ndarray:
        raise NotImplementedError

    def act(self, g, a) -> np.ndarray:
        """``a^g``; ``g`` broadcasts against the batch shape of ``a``."""
        raise NotImplementedError

    def size_estimate(self) -> int:
        raise NotImplementedError

    def _enumerate(self, cap: int) -> np.ndarray:
        raise NotImplementedError

    def format(self, a):
        return np.asarray(a).tolist()

    # -- shared ------------------------------------------------------------
    def elements(self, cap: int = DEFAULT_CAP) -> np.ndarray:
        cache = self.__dict__.setdefault("_elements", None)
        if cache is None:
            if self.size_estimate() > cap:
                raise CapExceeded(f"|X| = {self.size_estimate()} exceeds cap {cap}")
            cache = self._enumerate(cap)
            self.__dict__["_elements"] = cache
        return cache

    def element_inverses(self, cap: int = DEFAULT_CAP) -> np.ndarray:
        if "_inverses" not in self.__dict__:
            self.__dict__["_inverses"] = self.inv(self.elements(cap))
        return self.__dict__["_inverses"]

    def enumerable(self, cap: int = DEFAULT_CAP) -> bool:
        return self.size_estimate() <= cap

    def act_all(self, a) -> np.ndarray:
        """``a^g`` for every ``g``; output shape ``batch + (|G|,) + elem``."""
        a = np.asarray(a)
        batch = a.shape[: a.ndim - len(self.elem_shape)]
        g = np.arange(self.group.order).reshape((1,) * len(batch) + (-1,) + (1,) * len(self.elem_shape))
        exp = a.reshape(batch + (1,) + self.elem_shape)
        return self.act(g, exp)

    def is_identity(self, a) -> np.ndarray:
        a = np.asarray(a)
        axes = tuple(range(a.ndim - len(self.elem_shape), a.ndim))
        return np.all(a == self.identity(), axis=axes) if axes else a == self.identity()

    def twist(self, x, values) -> np.ndarray:
        """Twisted conjugates ``g -> x^g values(g) x^-1`` for a batch of ``x``."""
        x = np.asarray(x)
        xg = self.act_all(x)
        xi = self.inv(x)
        nb = x.ndim - len(self.elem_shape)
        xi = xi.reshape(xi.shape[:nb] + (1,) + self.elem_shape)
        return self.mul(self.mul(xg, values), xi)

    def twist_with_inverse(self, x, xinv, values) -> np.ndarray:
        x = np.asarray(x)
        xg = self.act_all(x)
        nb = x.ndim - len(self.elem_shape)
        xi = np.asarray(xinv).reshape(x.shape[:nb] + (1,) + self.elem_shape)
        return self.mul(self.mul(xg, values), xi)

    def unit_values(self) -> np.ndarray:
        return np.broadcast_to(self.identity(), (self.group.order,) + self.elem_shape).copy()

    def unit_cocycle(self) -> "Cocycle":
        return Cocycle(self, self.unit_values(), verify=False)

    def relates(self, d, e, x) -> bool:
        """Whether ``d(g) = x^g e(g) x^-1`` for all ``g``."""
        return bool(np.array_equal(self.twist(np.asarray(x)[None], e)[0], d))

    def find_witness(self, d, e, cap: int = DEFAULT_CAP) -> "WitnessResult":
        """Exhaustive scan of ``X`` in canonical order."""
        d, e = np.asarray(d), np.asarray(e)
        if np.array_equal(d, e):
            return WitnessResult("found", self.identity(), "identity")
        if not self.enumerable(cap):
            return WitnessResult("undetermined", None, "exhaustive")
        X = self.elements(cap)
        Xi = self.element_inverses(cap)
        for start in range(0, len(X), CHUNK):
            orb = self.twist_with_inverse(X[start : start + CHUNK], Xi[start : start + CHUNK], e)
            axes = tuple(range(1, orb.ndim))
            hit = np.flatnonzero(np.all(orb == d[None], axis=axes))
            if hit.size:
                return WitnessResult("found", X[start + hit[0]], "exhaustive")
        return WitnessResult("none", None, "exhaustive")

    # -- cocycles and classes ----------------------------------------------
    def norm_filter(self, cand: np.ndarray, s: int) -> np.ndarray:
        """Mask of candidates with ``x^(s^(m-1)) ... x^s x = 1`` (``m`` the order of ``s``)."""
        m = self.group.element_order(s)
        y = cand
        for _ in range(m - 1):
            y = self.mul(self.act(s, y), cand)
        return self.is_identity(y)

    def cocycles(self, cap: int = DEFAULT_CAP) -> list["Cocycle"]:
        if "_cocycles" not in self.__dict__:
            self.__dict__["_cocycles"] = enumerate_cocycles(self, cap)
        return self.__dict__["_cocycles"]

    def h1(self, cap: int = DEFAULT_CAP) -> list["CohClass"]:
        if "_h1" not in self.__dict__:
            self.__dict__["_h1"] = _orbit_partition(self, cap)
        return self.__dict__["_h1"]

    def classify(self, values, cap: int = DEFAULT_CAP, verify: bool = True) -> "CohClass":
        """Class of a cocycle; canonical when ``X`` is enumerable within ``cap``."""
        coc = values if isinstance(values, Cocycle) else Cocycle(self, values, verify=verify)
        if not self.enumerable(cap):
            return CohClass(self, coc, coc, self.identity(), canonical=False)
        X = self.elements(cap)
        Xi = self.element_inverses(cap)
        best_flat, best_x = None, None
        for start in range(0, len(X), CHUNK):
            orb = self.twist_with_inverse(X[start : start + CHUNK], Xi[start : start + CHUNK], coc.values)
            flat = orb.reshape(len(orb), -1)
            i = _rows_min(flat)
            if best_flat is None or _lex_less(flat[i], best_flat):
                best_flat, best_x = flat[i].copy(), X[start + i]
        rep = Cocycle(self, best_flat.reshape(coc.values.shape), verify=False)
        return CohClass(self, rep, coc, best_x, canonical=True)

    def neutral_class(self, cap: int = DEFAULT_CAP) -> "CohClass":
        if "_neutral" not in self.__dict__:
            self.__dict__["_neutral"] = self.classify(self.unit_values(), cap, verify=False)
        return self.__dict__["_neutral"]


def _lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    diff = np.flatnonzero(a != b)
    return bool(diff.size and a[diff[0]] < b[diff[0]])


@dataclass
class WitnessResult:
    status: str  # "found" | "none" | "undetermined"
    witness: np.ndarray | None
    method: str = ""

    @property
    def found(self) -> bool:
        return self.status == "found"


class MatrixGroupView(GGroupView):
    """``GL_n(S)`` or ``SL_n(S)`` with the entrywise action."""

    def __init__(self, action: RingAction, n: int, kind: str = "GL"):
        if kind not in ("GL", "SL"):
            raise ValueError("kind must be GL or SL")
        self.action = action
        self.ring: FiniteCommRing = action.ring
        self.group = action.group
        self.n = n
        self.level = n
        self.kind = kind
        self.elem_shape = (n, n)
        self.designation = "U" if (n == 1 and kind == "GL") else kind

    def identity(self):
        return mat_identity(self.ring, self.n)

    def mul(self, a, b):
        return mat_mul(self.ring, a, b)

    def inv(self, a):
        inv, ok = mat_inv(self.ring, a)
        if not np.all(ok):
            raise ValueError("matrix is not invertible")
        return inv

    def act(self, g, a):
        return self.action.tables[g, a]

    def contains(self, a) -> np.ndarray:
        det = mat_det(self.ring, a)
        if self.kind == "SL":
            return det == self.ring.one
        return self.ring.is_unit(det)

    def size_estimate(self) -> int:
        total = gl_order(self.ring, self.n)
        if self.kind == "SL":
            total //= max(1, len(self.ring.units()))
        return total

    def _enumerate(self, cap):
        return enumerate_general_linear(self.ring, self.n, cap, kind=self.kind)

    def format(self, a):
        a = np.asarray(a)
        return [[self.ring.format(x) for x in row] for row in a]

    def find_witness(self, d, e, cap: int = DEFAULT_CAP) -> WitnessResult:
        d, e = np.asarray(d), np.asarray(e)
        if np.array_equal(d, e):
            return WitnessResult("found", self.identity(), "identity")
        if self.ring.is_zero_ring:
            return WitnessResult("found", self.identity(), "zero-ring")
        return _linear_witness(self, d, e, cap)

    def padded(self, level: int) -> "MatrixGroupView":
        return matrix_view(self.action, level, self.kind)


def matrix_view(action: RingAction, n: int, kind: str = "GL") -> MatrixGroupView:
    """Cached ``GL_n``/``SL_n`` view for ``action``."""
    cache = action.__dict__.setdefault("_views", {})
    key = (n, kind)
    if key not in cache:
        cache[key] = MatrixGroupView(action, n, kind)
    return cache[key]


class AbstractGGroup(GGroupView):
    """An explicit finite group ``X`` (multiplication table) with a ``G``-action."""

    designation = "abstract"
    elem_shape = ()

    def __init__(self, group: FiniteGroup, x_table, act_tables=None, name: str = "X", verify: bool = True):
        self.group = group
        self.X = FiniteGroup(x_table, name=name, verify=verify)
        k = self.X.order
        if act_tables is None:
            act_tables = np.tile(np.arange(k), (group.order, 1))
        self.tables = np.asarray(act_tables, dtype=np.int64)
        self.name = name
        if verify:
            self._verify()

    def _verify(self):
        T, X = self.tables, self.X.table
        if self.tables.shape != (self.group.order, self.X.order):
            raise ActionError("action table has the wrong shape")
        for g in range(self.group.order):
            t = T[g]
            if len(set(t.tolist())) != self.X.order:
                raise ActionError("action is not bijective")
            if np.any(t[X] != X[t[:, None], t[None, :]]):
                raise ActionError("action is not by group automorphisms")
            for h in range(self.group.order):
                if np.any(T[self.group.table[g, h]] != T[h][t]):
                    raise ActionError("action does not respect the group law")

    def identity(self):
        return np.int64(0)

    def mul(self, a, b):
        return self.X.table[a, b]

    def inv(self, a):
        return self.X.inverses[a]

    def act(self, g, a):
        return self.tables[g, a]

    def size_estimate(self):
        return self.X.order

    def _enumerate(self, cap):
        return np.arange(self.X.order)

    def format(self, a):
        return int(a)

    def restrict(self, H: Subgroup) -> "AbstractGGroup":
        return AbstractGGroup(H.as_group(), self.X.table, self.tables[list(H.elements)], self.name, verify=False)

    def product(self, other: "AbstractGGroup") -> "AbstractGGroup":
        """``X x Y`` with the diagonal action; labels ``x * |Y| + y``."""
        m = other.X.order
        idx = np.arange(self.X.order * m)
        a, b = idx // m, idx % m
        table = self.X.table[a[:, None], a[None, :]] * m + other.X.table[b[:, None], b[None, :]]
        tables = self.tables[:, a] * m + other.tables[:, b]
        return AbstractGGroup(self.group, table, tables, f"{self.name}x{other.name}", verify=False)

    def pair(self, x: int, y: int, other: "AbstractGGroup") -> int:
        return int(x) * other.X.order + int(y)


# ----------------------------------------------------------------------------
# cocycles and classes


class Cocycle:
    """A value table ``d: G -> X`` satisfying ``d(gh) = d(g)^h d(h)``."""

    def __init__(self, view: GGroupView, values, verify: bool = True):
        self.view = view
        self.values = np.ascontiguousarray(np.asarray(values, dtype=np.int64))
        if self.values.shape != (view.group.order,) + view.elem_shape:
            raise ValueError(f"cocycle table has shape {self.values.shape}")
        if verify:
            self.verify()

    def verify(self) -> None:
        v, G, X = self.values, self.view.group, self.view
        if not np.all(X.is_identity(v[0])):
            raise ValueError("cocycle does not send 1 to 1")
        for h in range(G.order):
            lhs = v[G.table[:, h]]
            rhs = X.mul(X.act(h, v), v[h])
            if not np.array_equal(lhs, rhs):
                raise ValueError("cocycle identity d(gh) = d(g)^h d(h) fails")

    @cached_property
    def key(self) -> bytes:
        return self.values.tobytes()

    @property
    def level(self) -> int:
        return self.view.level

    def __eq__(self, other) -> bool:
        return isinstance(other, Cocycle) and other.view is self.view and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def format(self) -> list:
        return [self.view.format(x) for x in self.values]


@dataclass(eq=False)
class CohClass:
    """A cohomology class.

    ``rep`` is canonical when ``canonical`` is set.  ``raw`` is the cocycle
    the class was built from and ``transport`` the element ``x`` with
    ``rep = x . raw`` under twisted conjugation.
    """

    view: GGroupView
    rep: Cocycle
    raw: Cocycle
    transport: np.ndarray
    canonical: bool = True

    @property
    def level(self) -> int:
        return self.view.level

    @property
    def designation(self) -> str:
        return self.view.designation

    @property
    def key(self) -> bytes:
        return self.rep.key

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohClass) or other.view is not self.view:
            return False
        if not (self.canonical and other.canonical):
            raise Undetermined("equality of non-canonical classes needs stable_equal")
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def is_neutral(self, cap: int = DEFAULT_CAP) -> bool:
        if self.canonical:
            return self.key == self.view.neutral_class(cap).key
        res = self.view.find_witness(self.rep.values, self.view.unit_values(), cap)
        if res.status == "undetermined":
            raise Undetermined("neutrality could not be decided within the cap")
        return res.found

    def format(self) -> dict:
        return {
            "level": self.level,
            "designation": self.designation,
            "values": self.rep.format(),
        }


def enumerate_cocycles(view: GGroupView, cap: int = DEFAULT_CAP) -> list[Cocycle]:
    """All cocycles, by backtracking over generator values.

    Candidate values for each generator are prefiltered by the norm condition
    of its cyclic subgroup; the remaining assignments are extended along a BFS
    spanning tree and kept when ``d(gs) = d(g)^s d(s)`` holds for every ``g``
    and generator ``s``.
    """
    G = view.group
    if G.order == 1:
        return [view.unit_cocycle()]
    X = view.elements(cap)
    gens = list(G.generators)
    cands = [np.flatnonzero(view.norm_filter(X, s)) for s in gens]
    sizes = [len(c) for c in cands]
    total = int(np.prod(sizes, dtype=object))
    if total > 50 * cap:
        raise CapExceeded(f"{total} generator assignments exceed the search budget")
    words = [w for w in G.words(gens) if w[2] not in gens]
    out = []
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK))
        digits = np.stack(np.unravel_index(idx, sizes), axis=-1) if len(sizes) > 1 else idx[:, None]
        B = len(idx)
        table = np.zeros((B, G.order) + view.elem_shape, dtype=np.int64)
        table[:, 0] = view.identity()
        for k, s in enumerate(gens):
            table[:, s] = X[cands[k][digits[:, k]]]
        for parent, k, child in words:
            s = gens[k]
            table[:, child] = view.mul(view.act(s, table[:, parent]), table[:, s])
        ok = np.ones(B, dtype=bool)
        axes = tuple(range(1, 1 + 1 + len(view.elem_shape)))
        for s in gens:
            lhs = table[:, G.table[:, s]]
            rhs = view.mul(view.act(s, table), table[:, s : s + 1])
            ok &= np.all(lhs == rhs, axis=axes)
        for row in table[ok]:
            out.append(row)
    if not out:
        raise RuntimeError("no cocycles found; the unit cocycle is always one")
    arr = np.stack(out)
    arr = arr[np.lexsort(arr.reshape(len(arr), -1).T[::-1])]
    return [Cocycle(view, v, verify=False) for v in arr]


def cocycles_cyclic(view: GGroupView, c: int | None = None, cap: int = DEFAULT_CAP) -> list[Cocycle]:
    """Cocycles of a cyclic group via the norm condition on ``d(c)``."""
    G = view.group
    if c is None:
        c = next((g for g in range(G.order) if G.element_order(g) == G.order), None)
        if c is None:
            raise ValueError("group is not cyclic")
    if G.element_order(c) != G.order:
        raise ValueError("element does not generate the group")
    X = view.elements(cap)
    sel = X[view.norm_filter(X, c)]
    powers = [0]
    for _ in range(G.order - 1):
        powers.append(int(G.table[powers[-1], c]))
    table = np.zeros((len(sel), G.order) + view.elem_shape, dtype=np.int64)
    table[:, 0] = view.identity()
    prev = table[:, 0]
    for i in range(1, G.order):
        cur = view.mul(view.act(c, prev), sel)
        table[:, powers[i]] = cur
        prev = cur
    arr = table[np.lexsort(table.reshape(len(table), -1).T[::-1])] if len(table) else table
    return [Cocycle(view, v, verify=False) for v in arr]


def _orbit_partition(view: GGroupView, cap: int) -> list[CohClass]:
    Z = view.cocycles(cap)
    index = {z.key: i for i, z in enumerate(Z)}
    assigned = np.full(len(Z), -1, dtype=np.int64)
    X = view.elements(cap)
    Xi = view.element_inverses(cap)
    classes: list[CohClass] = []
    unit = view.unit_cocycle()
    order = [index[unit.key]] + [i for i in range(len(Z)) if Z[i].key != unit.key]
    for i in order:
        if assigned[i] >= 0:
            continue
        start_coc = Z[i]
        best_flat, best_x = None, None
        members = set()
        for start in range(0, len(X), CHUNK):
            orb = view.twist_with_inverse(X[start : start + CHUNK], Xi[start : start + CHUNK], start_coc.values)
            flat = orb.reshape(len(orb), -1)
            j = _rows_min(flat)
            if best_flat is None or _lex_less(flat[j], best_flat):
                best_flat, best_x = flat[j].copy(), X[start + j]
            members.update(_keys(flat))
        cls_idx = len(classes)
        for key in members:
            pos = index.get(key)
            if pos is None:
                raise RuntimeError("twisted conjugate of a cocycle is not a cocycle")
            assigned[pos] = cls_idx
        rep = Cocycle(view, best_flat.reshape(start_coc.values.shape), verify=False)
        classes.append(CohClass(view, rep, start_coc, best_x, canonical=True))
    neutral = classes[0]
    view.__dict__["_neutral"] = neutral
    rest = sorted(classes[1:], key=lambda c: tuple(c.rep.values.ravel()))
    return [neutral] + rest


def h1(view: GGroupView, cap: int = DEFAULT_CAP) -> list[CohClass]:
    """``H^1(G, X)`` with the neutral class first."""
    return view.h1(cap)


def cohomologous(d: Cocycle, e: Cocycle, cap: int = DEFAULT_CAP):
    """A witness ``x`` with ``d(g) = x^g e(g) x^-1``, or ``None``."""
    if d.view is not e.view:
        raise ValueError("cocycles live in different coefficient groups")
    res = d.view.find_witness(d.values, e.values, cap)
    if res.status == "undetermined":
        raise CapExceeded("witness search space exceeds the cap")
    if res.found and not d.view.relates(d.values, e.values, res.witness):
        raise RuntimeError("witness failed verification")
    return res.witness if res.found else None


# ----------------------------------------------------------------------------
# linear witness solver


def _matrix_coords(ring: FiniteCommRing, mats: np.ndarray) -> np.ndarray:
    """Additive coordinates of a batch of matrices, flattened entry by entry."""
    c = ring.to_coords(mats)
    return c.reshape(mats.shape[:-2] + (-1,))


def _matrices_from_coords(ring: FiniteCommRing, coords: np.ndarray, n: int) -> np.ndarray:
    c = coords.reshape(coords.shape[:-1] + (n, n, ring.dim))
    return ring.from_coords(c)


def _linear_witness(view: MatrixGroupView, d, e, cap) -> WitnessResult:
    ring, n, G = view.ring, view.n, view.group
    gens = list(G.generators)
    D = ring.dim
    nb = n * n * D
    src_orders = np.tile(ring.orders, n * n)
    # basis matrices: one additive generator placed in one entry
    basis = np.zeros((nb, n, n), dtype=np.int64)
    addgens = ring.additive_generators
    for i in range(n):
        for j in range(n):
            for k in range(D):
                basis[(i * n + j) * D + k, i, j] = addgens[k]
    cols = []
    for s in gens:
        img = view.mul(view.act(s, basis), e[s])
        rhs = view.mul(d[s], basis)
        diff = ring.sub(img, rhs)
        cols.append(_matrix_coords(ring, diff))
    phi_cols = np.concatenate(cols, axis=1)  # (nb, dst)
    dst_orders = np.tile(ring.orders, n * n * len(gens))
    W = intlinalg.hom_kernel(phi_cols.T.tolist(), src_orders.tolist(), dst_orders.tolist())
    if W.free_rank:
        raise RuntimeError("solution group of a finite system cannot be infinite")
    Wgens = np.array(W.generators, dtype=np.int64).reshape(len(W.generators), nb)
    Word = np.array(W.invariant_factors, dtype=np.int64)

    Wred = Wgens % src_orders
    exact_float = len(Wred) * int(Word.max(initial=1)) * int(src_orders.max(initial=1)) < 2**52

    def to_mats(coeffs):
        if not len(Wgens):
            return _matrices_from_coords(ring, np.zeros((len(coeffs), nb), dtype=np.int64), n)
        if exact_float:
            # float BLAS is exact here: every partial sum stays below 2**52
            prod = np.rint(coeffs.astype(np.float64) @ Wred.astype(np.float64)).astype(np.int64)
        else:
            prod = coeffs @ Wred
        return _matrices_from_coords(ring, prod % src_orders, n)

    def check(mats):
        det = mat_det(ring, mats)
        if view.kind == "SL":
            return det == ring.one
        return ring.is_unit(det)

    def accept(x, method):
        if not view.relates(d, e, x):
            raise RuntimeError("linear witness failed verification")
        return WitnessResult("found", x, method)

    if len(Wgens) == 0:
        return WitnessResult("none", None, "linear")
    rng = np.random.default_rng(WITNESS_SEED)
    sample = rng.integers(0, Word, size=(WITNESS_SAMPLES, len(Word)))
    mats = to_mats(sample)
    hit = np.flatnonzero(check(mats))
    if hit.size:
        return accept(mats[hit[0]], "linear+sample")
    # exhaustive: over lifts of the image mod the nilradical (GL) or all of W (SL)
    lift_gens, lift_orders = _reduction_lifts(view, Wgens, Word, src_orders)
    if view.kind == "SL":
        lift_gens, lift_orders = np.eye(len(Word), dtype=np.int64), Word
    total = int(np.prod(lift_orders, dtype=object)) if len(lift_orders) else 1
    if total > cap:
        return WitnessResult("undetermined", None, "linear")
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK))
        digits = np.stack(np.unravel_index(idx, lift_orders), axis=-1) if len(lift_orders) else np.zeros((len(idx), 0), dtype=np.int64)
        wc = digits @ lift_gens if len(lift_orders) else np.zeros((len(idx), len(Word)), dtype=np.int64)
        mats = to_mats(wc)
        hit = np.flatnonzero(check(mats))
        if hit.size:
            return accept(mats[hit[0]], "linear+exhaustive")
    return WitnessResult("none", None, "linear+exhaustive")


def _reduction_lifts(view: MatrixGroupView, Wgens, Word, src_orders):
    """Generators (in ``W``-coordinates) of a transversal of ``W`` modulo the
    solutions that vanish mod the nilradical.  Invertibility only depends on
    the residue mod the nilradical, so scanning the transversal suffices."""
    ring, n = view.ring, view.n
    nil = ring.nilradical()
    k = len(Word)
    if nil.size == 1:
        return np.eye(k, dtype=np.int64), Word
    red, _ = ring.quotient(nil)
    U = red._U  # rows map parent coordinates to quotient coordinates
    qd = red.dim
    P = np.zeros((n * n * qd, n * n * ring.dim), dtype=np.int64)
    for t in range(n * n):
        P[t * qd : (t + 1) * qd, t * ring.dim : (t + 1) * ring.dim] = U
    qorders = np.tile(red.orders, n * n)
    phi = (P @ Wgens.T) % qorders[:, None]
    K = intlinalg.hom_kernel(phi.tolist(), Word.tolist(), qorders.tolist())
    rel = [list(g) for g in K.generators] + [[int(Word[i]) if i == j else 0 for i in range(k)] for j in range(k)]
    quo = intlinalg.quotient_group(intlinalg.identity(k), rel, k)
    if quo.free_rank:
        raise RuntimeError("unexpected free part in a finite quotient")
    gens = np.array(quo.generators, dtype=np.int64).reshape(len(quo.generators), k)
    return gens, np.array(quo.invariant_factors, dtype=np.int64)


# ----------------------------------------------------------------------------
# block sums and stabilization


def s_matrix(m: int, n: int, ring: FiniteCommRing) -> np.ndarray:
    """``(-1)^((m+1)n) [[0, -1_n], [1_m, 0]]`` of size ``m + n``."""
    one, mone = ring.one, int(ring.neg(ring.one))
    sign_neg = ((m + 1) * n) % 2 == 1
    out = np.zeros((m + n, m + n), dtype=np.int64)
    for i in range(n):
        out[i, m + i] = one if sign_neg else mone
    for i in range(m):
        out[n + i, i] = mone if sign_neg else one
    return out


def shift(ring: FiniteCommRing, x: np.ndarray, m: int) -> np.ndarray:
    """``x[m] = diag(1_m, x)``."""
    x = np.asarray(x)
    if m == 0:
        return x.copy()
    eye = np.broadcast_to(mat_identity(ring, m), x.shape[:-2] + (m, m))
    return block_diag(ring, eye, x)


def pad_class(a: CohClass, t: int, cap: int = DEFAULT_CAP, canonicalize: bool = True) -> CohClass:
    """Image of ``a`` under ``X_n -> X_(n+t)``, ``x -> diag(x, 1_t)``."""
    view = a.view
    if not isinstance(view, MatrixGroupView):
        raise TypeError("padding needs a matrix coefficient group")
    target = view.padded(view.n + t)
    vals = pad_matrix(view.ring, a.rep.values, view.n + t)
    return _classify_maybe(target, vals, cap, canonicalize)


def _classify_maybe(view: GGroupView, values, cap, canonicalize) -> CohClass:
    if canonicalize and view.enumerable(cap):
        return view.classify(values, cap, verify=False)
    coc = Cocycle(view, values, verify=False)
    return CohClass(view, coc, coc, view.identity(), canonical=False)


def add_classes(a: CohClass, b: CohClass, cap: int = DEFAULT_CAP, canonicalize: bool = True) -> CohClass:
    """Block sum ``(d +_m e)(g) = d(g) e(g)[m] = diag(d(g), e(g))``."""
    va, vb = a.view, b.view
    if not (isinstance(va, MatrixGroupView) and isinstance(vb, MatrixGroupView)):
        raise TypeError("block sums need matrix coefficient groups")
    if va.action is not vb.action:
        raise ValueError("classes over different actions")
    if va.kind != vb.kind:
        raise ValueError("mixed coefficient designations (GL vs SL)")
    target = matrix_view(va.action, va.n + vb.n, va.kind)
    vals = block_diag(va.ring, a.rep.values, b.rep.values)
    return _classify_maybe(target, vals, cap, canonicalize)


@dataclass
class StableVerdict:
    status: str  # "equal" | "not-equal-up-to-bound" | "undetermined"
    level: int | None = None
    witness: np.ndarray | None = None
    method: str = ""

    @property
    def equal(self) -> bool:
        return self.status == "equal"

    def to_json(self) -> dict:
        return {"status": self.status, "level": self.level, "method": self.method}


def stable_equal(
    a: CohClass,
    b: CohClass,
    bound: int = DEFAULT_BOUND,
    cap: int = DEFAULT_CAP,
    certificate: np.ndarray | None = None,
) -> StableVerdict:
    """Compare two classes after padding to common levels up to ``bound``.

    ``certificate`` (optional) is an element ``x`` at the common level with
    ``a.raw = x . b.raw``; it is composed with the transports and verified
    before any search happens.
    """
    va, vb = a.view, b.view
    if not (isinstance(va, MatrixGroupView) and isinstance(vb, MatrixGroupView)):
        if va is not vb:
            raise ValueError("abstract classes must share the coefficient group")
        res = va.find_witness(a.rep.values, b.rep.values, cap)
        return _verdict_from(res, va.level, "not-equal-up-to-bound")
    if va.action is not vb.action or va.kind != vb.kind:
        raise ValueError("classes over different actions or designations")
    ring = va.ring
    top = max(va.n, vb.n)
    if certificate is not None and va.n == vb.n:
        view = va
        W = view.mul(view.mul(a.transport, certificate), view.inv(b.transport))
        if view.relates(a.rep.values, b.rep.values, W):
            return StableVerdict("equal", top, W, "certificate")
    undetermined = False
    for level in range(top, max(bound, top) + 1):
        view = matrix_view(va.action, level, va.kind)
        da = pad_matrix(ring, a.rep.values, level)
        db = pad_matrix(ring, b.rep.values, level)
        res = view.find_witness(da, db, cap)
        if res.found:
            return StableVerdict("equal", level, res.witness, res.method)
        if res.status == "undetermined":
            undetermined = True
    return StableVerdict("undetermined" if undetermined else "not-equal-up-to-bound", None, None, "search")


def _verdict_from(res: WitnessResult, level: int, negative: str) -> StableVerdict:
    if res.found:
        return StableVerdict("equal", level, res.witness, res.method)
    if res.status == "undetermined":
        return StableVerdict("undetermined", None, None, res.method)
    return StableVerdict(negative, None, None, res.method)


def _diag(ring, *blocks):
    return block_diag(ring, *[np.asarray(b) for b in blocks])


def check_commutativity(a: CohClass, b: CohClass, bound=DEFAULT_BOUND, cap=DEFAULT_CAP) -> StableVerdict:
    """``a + b`` versus ``b + a`` with ``s_(m,n)`` as certificate."""
    ring = a.view.ring
    m, n = a.level, b.level
    ab, ba = add_classes(a, b, cap), add_classes(b, a, cap)
    # diag(d, e) = s^-1 diag(e, d) s with s = s_(m,n); s is invariant
    s = s_matrix(m, n, ring)
    x = mat_inv(ring, s)[0]
    return stable_equal(ab, ba, bound, cap, certificate=x)


def check_padding(a: CohClass, b: CohClass, t: int, bound=DEFAULT_BOUND, cap=DEFAULT_CAP) -> StableVerdict:
    """``d +_(m+t) e`` versus ``(d +_m e)`` padded by ``t``, certified by ``s_(t,n)[m]``."""
    ring = a.view.ring
    m, n = a.level, b.level
    pa = pad_class(a, t, cap)
    lhs = add_classes(pa, b, cap)
    ab = add_classes(a, b, cap)
    rhs = pad_class(ab, t, cap)
    s = shift(ring, s_matrix(t, n, ring), m)
    C = mat_inv(ring, s)[0]
    # lhs.raw = diag(T_pa, 1_n) C diag(T_ab, 1_t)^-1 rhs.raw
    L1 = _diag(ring, pa.transport, mat_identity(ring, n))
    R1 = _diag(ring, ab.transport, mat_identity(ring, t))
    x = mat_mul(ring, mat_mul(ring, L1, C), mat_inv(ring, R1)[0])
    return stable_equal(lhs, rhs, bound, cap, certificate=x)


def check_associativity(a: CohClass, b: CohClass, c: CohClass, bound=DEFAULT_BOUND, cap=DEFAULT_CAP) -> StableVerdict:
    """``(a + b) + c`` versus ``a + (b + c)``, certified by the transports."""
    ring = a.view.ring
    ab = add_classes(a, b, cap)
    bc = add_classes(b, c, cap)
    lhs = add_classes(ab, c, cap)
    rhs = add_classes(a, bc, cap)
    x1 = _diag(ring, ab.transport, mat_identity(ring, c.level))
    x2 = _diag(ring, mat_identity(ring, a.level), bc.transport)
    x = mat_mul(ring, x1, mat_inv(ring, x2)[0])
    return stable_equal(lhs, rhs, bound, cap, certificate=x)


def check_neutrality(a: CohClass, k: int = 1, bound=DEFAULT_BOUND, cap=DEFAULT_CAP) -> tuple[StableVerdict, StableVerdict]:
    """``a + 0_k`` and ``0_k + a`` versus ``a`` padded by ``k``."""
    ring = a.view.ring
    m = a.level
    zero = matrix_view(a.view.action, k, a.view.kind).neutral_class(cap)
    pa = pad_class(a, k, cap)
    right = add_classes(a, zero, cap)
    left = add_classes(zero, a, cap)
    eye_m, eye_k = mat_identity(ring, m), mat_identity(ring, k)
    # right.raw = diag(d, z) with z = T_0 . 1, so right.raw = diag(1, T_0) . pa.raw
    x_r = _diag(ring, eye_m, zero.transport)
    v_r = stable_equal(right, pa, bound, cap, certificate=x_r)
    # left.raw = diag(z, d) = diag(T_0, 1) s^-1 diag(d, 1_k) s with s = s_(k,m)
    s = s_matrix(k, m, ring)
    x_l = mat_mul(ring, _diag(ring, zero.transport, eye_m), mat_inv(ring, s)[0])
    v_l = stable_equal(left, pa, bound, cap, certificate=x_l)
    return v_r, v_l


# ----------------------------------------------------------------------------
# functoriality


def restrict(a: CohClass, H: Subgroup, cap: int = DEFAULT_CAP) -> CohClass:
    """Restriction to ``H``, canonicalized over ``H``."""
    view = a.view
    vals = a.rep.values[list(H.elements)]
    if isinstance(view, MatrixGroupView):
        target = matrix_view(view.action.restrict(H), view.n, view.kind)
    elif isinstance(view, AbstractGGroup):
        key = ("restrict", H.elements)
        cache = view.__dict__.setdefault("_derived", {})
        if key not in cache:
            cache[key] = view.restrict(H)
        target = cache[key]
    else:
        raise TypeError("unsupported coefficient group")
    return _classify_maybe(target, vals, cap, True)


@dataclass
class QuotientView:
    """Coefficients ``X^N`` as a ``G/N``-group together with the data needed
    to inflate back to ``G``."""

    view: GGroupView
    proj: np.ndarray  # G -> G/N
    embed: np.ndarray | None  # X^N labels -> X labels (abstract case)
    source: GGroupView


def quotient_view(view: GGroupView, N: Subgroup) -> QuotientView:
    """The ``G/N``-group ``X^N``."""
    cache = view.__dict__.setdefault("_quotients", {})
    if N.elements in cache:
        return cache[N.elements]
    G = view.group
    if isinstance(view, MatrixGroupView):
        qact, proj = view.action.quotient_group_action(N)
        qv = QuotientView(matrix_view(qact, view.n, view.kind), proj, None, view)
    elif isinstance(view, AbstractGGroup):
        fixed = np.flatnonzero(np.all(view.tables[list(N.elements)] == np.arange(view.X.order)[None, :], axis=0))
        pos = {int(x): i for i, x in enumerate(fixed)}
        table = [[pos[int(view.X.table[a, b])] for b in fixed] for a in fixed]
        Q, proj = G.quotient(N)
        reps = [int(np.flatnonzero(proj == q)[0]) for q in range(Q.order)]
        tables = [[pos[int(view.tables[r, x])] for x in fixed] for r in reps]
        qv = QuotientView(AbstractGGroup(Q, table, tables, f"{view.name}^N"), proj, fixed, view)
    else:
        raise TypeError("unsupported coefficient group")
    cache[N.elements] = qv
    return qv


def inflate(a: CohClass, qv: QuotientView, cap: int = DEFAULT_CAP) -> CohClass:
    """Precompose with ``G -> G/N`` and map ``X^N`` into ``X``."""
    if a.view is not qv.view:
        raise ValueError("class does not live on the quotient view")
    vals = a.rep.values[qv.proj]
    if qv.embed is not None:
        vals = qv.embed[vals]
    return qv.source.classify(vals, cap) if qv.source.enumerable(cap) else _classify_maybe(qv.source, vals, cap, False)


def push_values(a: CohClass, target: MatrixGroupView, proj: np.ndarray, elements: Sequence[int] | None = None, cap: int = DEFAULT_CAP) -> CohClass:
    """Restrict to ``elements`` (labels of a subgroup) and reduce entries through ``proj``."""
    vals = a.rep.values if elements is None else a.rep.values[list(elements)]
    return _classify_maybe(target, proj[vals], cap, True)


def det_push(a: CohClass, cap: int = DEFAULT_CAP) -> CohClass:
    """Entrywise determinant, a class in ``H^1(G, U(S))``."""
    view = a.view
    det = mat_det(view.ring, a.rep.values)
    target = matrix_view(view.action, 1, "GL")
    return target.classify(det[:, None, None], cap)


def unit_embed(b: CohClass, cap: int = DEFAULT_CAP) -> CohClass:
    """Level-one inclusion ``U(S) = GL_1(S)``."""
    if b.view.designation != "U":
        raise ValueError("expected a U(S) class")
    target = matrix_view(b.view.action, 1, "GL")
    return target.classify(b.rep.values, cap)


def multiply_unit_classes(a: CohClass, b: CohClass, cap: int = DEFAULT_CAP) -> CohClass:
    """Pointwise product in the abelian group ``H^1(G, U(S))``."""
    if a.view is not b.view or a.view.designation != "U":
        raise ValueError("expected two U(S) classes on the same action")
    vals = a.view.ring.mul(a.rep.values, b.rep.values)
    return a.view.classify(vals, cap)


def radical_push(a: CohClass, cap: int = DEFAULT_CAP) -> CohClass:
    """Entrywise reduction modulo the nilradical."""
    view = a.view
    quot, proj, act = view.action.induced_on_quotient(view.ring.nilradical())
    return push_values(a, matrix_view(act, view.n, view.kind), proj, None, cap)


def rho_subgroup(a: CohClass, H: Subgroup, cap: int = DEFAULT_CAP) -> CohClass:
    """Restrict to ``H`` and reduce into ``GL_n(S_H)``."""
    view = a.view
    _, proj, induced = view.action.residual_ring(H)
    return push_values(a, matrix_view(induced, view.n, view.kind), proj, H.elements, cap)


def rho_maximal(a: CohClass, M, variant: str = "inertia", cap: int = DEFAULT_CAP) -> CohClass:
    """Restrict to the inertia (``variant="inertia"``) or decomposition group
    of ``M`` and reduce modulo ``M``."""
    view = a.view
    act = view.action
    if variant == "inertia":
        H = act.inertia_group(M)
    elif variant == "decomposition":
        H = act.decomposition_group(M)
    else:
        raise ValueError("variant must be 'inertia' or 'decomposition'")
    sub = act.restrict(H)
    _, proj, induced = sub.induced_on_quotient(M)
    return push_values(a, matrix_view(induced, view.n, view.kind), proj, H.elements, cap)


def congruence_kernel_test(a: CohClass) -> bool:
    """Whether ``d(g) = 1 mod J(<g>)`` for every ``g``."""
    view = a.view
    act = view.action
    if not act.has_star:
        raise ActionError("congruence test needs an action with an element of trace 1")
    ring = view.ring
    eye = mat_identity(ring, view.n)
    for g in range(view.group.order):
        J = act.j_ideal_of_element(g)
        diff = ring.sub(a.rep.values[g], eye)
        if not np.all(J.mask[diff]):
            return False
    return True


@dataclass
class UnitVerdict:
    congruence: bool | None
    search: str  # "unit" | "not-unit-up-to-bound" | "undetermined"
    inverse: CohClass | None = None
    inverse_level: int | None = None

    @property
    def consistent(self) -> bool:
        if self.congruence is None or self.search == "undetermined":
            return True
        return self.congruence == (self.search == "unit")


def is_unit(a: CohClass, bound: int = DEFAULT_BOUND, cap: int = DEFAULT_CAP) -> UnitVerdict:
    """Congruence verdict plus a constructive inverse search.

    The search scans classes ``b`` at levels ``k`` with ``level(a) + k <=
    bound`` (at least ``k = 1``) and asks whether ``a + b`` is stably
    neutral.
    """
    view = a.view
    cong = congruence_kernel_test(a) if view.action.has_star else None
    m = view.n
    undetermined = False
    for k in range(1, max(1, bound - m) + 1):
        bview = matrix_view(view.action, k, view.kind)
        if not bview.enumerable(cap):
            undetermined = True
            continue
        try:
            candidates = bview.h1(cap)
        except CapExceeded:
            undetermined = True
            continue
        for b in candidates:
            s = add_classes(a, b, cap, canonicalize=False)
            zero = matrix_view(view.action, m + k, view.kind)
            unit = CohClass(zero, zero.unit_cocycle(), zero.unit_cocycle(), zero.identity(), canonical=False)
            v = stable_equal(s, unit, max(bound, m + k), cap)
            if v.equal:
                return UnitVerdict(cong, "unit", b, k)
            if v.status == "undetermined":
                undetermined = True
    return UnitVerdict(cong, "undetermined" if undetermined else "not-unit-up-to-bound")


def is_unit_abstract(a: CohClass, cap: int = DEFAULT_CAP) -> UnitVerdict:
    """Cancellation on an abstract coefficient group: ``a`` is a unit when
    some ``b`` makes ``(a, b)`` neutral in ``H^1(G, X x X)``."""
    view = a.view
    if not isinstance(view, AbstractGGroup):
        raise TypeError("expected an abstract coefficient group")
    cache = view.__dict__.setdefault("_derived", {})
    if "pair" not in cache:
        cache["pair"] = view.product(view)
    pair = cache["pair"]
    for b in view.h1(cap):
        vals = a.rep.values * view.X.order + b.rep.values
        res = pair.find_witness(vals, pair.unit_values(), cap)
        if res.found:
            return UnitVerdict(None, "unit", b, 1)
    return UnitVerdict(None, "not-unit-up-to-bound")
