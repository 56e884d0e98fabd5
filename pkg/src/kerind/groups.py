"""Finite groups as Cayley tables, with subgroups and quotients.

Elements are ``0..order-1`` with ``0`` the identity; ``table[g, h] = gh``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, table, generators: Sequence[int] | None = None, labels=None, name: str = "G", verify: bool = True):
        self.table = np.asarray(table, dtype=np.int64)
        n = self.table.shape[0]
        if self.table.shape != (n, n):
            raise GroupError("multiplication table must be square")
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if verify:
            self.verify()
        self.generators = list(generators) if generators is not None else self._greedy_generators()
        if self.closure(self.generators) != list(range(n)):
            raise GroupError("generators do not generate the group")

    def verify(self) -> None:
        T, n = self.table, self.order
        if np.any(T[0] != np.arange(n)) or np.any(T[:, 0] != np.arange(n)):
            raise GroupError("0 is not the identity")
        for row in T:
            if len(set(row.tolist())) != n:
                raise GroupError("table is not a Latin square")
        if np.any(T[T] != _assoc_rhs(T)):
            raise GroupError("multiplication is not associative")

    def _greedy_generators(self) -> list[int]:
        gens: list[int] = []
        span = [0]
        for g in range(1, self.order):
            if g not in span:
                gens.append(g)
                span = self.closure(gens)
                if len(span) == self.order:
                    break
        return gens

    # -- basics ------------------------------------------------------------
    def mul(self, g, h):
        return self.table[g, h]

    @cached_property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == 0, axis=1)

    def inv(self, g):
        return self.inverses[g]

    def power(self, g: int, k: int) -> int:
        out = 0
        k %= self.element_order(g)
        for _ in range(k):
            out = int(self.table[out, g])
        return out

    def element_order(self, g: int) -> int:
        k, x = 1, int(g)
        while x != 0:
            x = int(self.table[x, g])
            k += 1
        return k

    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        return bool(np.all(self.table == self.table.T))

    def closure(self, gens: Sequence[int]) -> list[int]:
        """Sorted elements of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        gens = [int(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def words(self, gens: Sequence[int] | None = None) -> list[tuple[int, int, int]]:
        """BFS spanning tree ``(parent, generator_index, child)`` with
        ``child = parent * gens[generator_index]``, covering the closure."""
        gens = list(self.generators if gens is None else gens)
        seen = {0}
        frontier = [0]
        out = []
        while frontier:
            nxt = []
            for x in frontier:
                for k, g in enumerate(gens):
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        out.append((x, k, y))
            frontier = nxt
        return out

    # -- subgroups ---------------------------------------------------------
    def subgroup(self, gens: Sequence[int]) -> "Subgroup":
        return Subgroup(self, tuple(self.closure(gens)), tuple(int(g) for g in gens))

    def subgroup_from_elements(self, elements: Sequence[int]) -> "Subgroup":
        elems = tuple(sorted(int(e) for e in elements))
        if self.closure(elems) != list(elems):
            raise GroupError("elements do not form a subgroup")
        return Subgroup(self, elems, None)

    @cached_property
    def _cyclic(self) -> list["Subgroup"]:
        seen: dict[tuple, Subgroup] = {}
        for g in range(self.order):
            elems = tuple(self.closure([g]))
            if elems not in seen:
                seen[elems] = Subgroup(self, elems, (g,))
        return sorted(seen.values(), key=lambda H: (H.order, H.elements))

    def cyclic_subgroups(self) -> list["Subgroup"]:
        return list(self._cyclic)

    @cached_property
    def _all_subgroups(self) -> list["Subgroup"]:
        found: dict[tuple, Subgroup] = {H.elements: H for H in self._cyclic}
        frontier = list(found.values())
        while frontier:
            nxt = []
            for H in frontier:
                for C in self._cyclic:
                    if set(C.elements) <= set(H.elements):
                        continue
                    elems = tuple(self.closure(list(H.elements) + list(C.elements)))
                    if elems not in found:
                        gens = tuple(H.gens) + tuple(C.gens) if H.gens else None
                        found[elems] = Subgroup(self, elems, gens)
                        nxt.append(found[elems])
            frontier = nxt
        return sorted(found.values(), key=lambda H: (H.order, H.elements))

    def subgroups(self) -> list["Subgroup"]:
        return list(self._all_subgroups)

    def is_normal(self, H: "Subgroup") -> bool:
        S = set(H.elements)
        for g in range(self.order):
            gi = int(self.inverses[g])
            for h in H.elements:
                if int(self.table[self.table[g, h], gi]) not in S:
                    return False
        return True

    def quotient(self, N: "Subgroup") -> tuple["FiniteGroup", np.ndarray]:
        """``G/N`` and the projection array."""
        if not self.is_normal(N):
            raise GroupError("subgroup is not normal")
        label = np.full(self.order, -1, dtype=np.int64)
        cosets = []
        for g in range(self.order):
            if label[g] < 0:
                members = self.table[g, list(N.elements)]
                label[members] = len(cosets)
                cosets.append(g)
        k = len(cosets)
        table = np.array([[label[self.table[a, b]] for b in cosets] for a in cosets])
        gens = sorted({int(label[g]) for g in self.generators} - {0}) or []
        Q = FiniteGroup(table, generators=gens, name=f"{self.name}/N")
        return Q, label

    def __repr__(self):
        return f"<FiniteGroup {self.name} order={self.order}>"


def _assoc_rhs(T):
    # (gh)k compared with g(hk): returns the g(hk) tensor
    n = T.shape[0]
    return T[np.arange(n)[:, None, None], T[None, :, :]]


@dataclass(eq=False)
class Subgroup:
    """A subgroup of ``parent``; ``elements`` is sorted and starts with ``0``."""

    parent: FiniteGroup
    elements: tuple[int, ...]
    gens: tuple[int, ...] | None = None
    _group: FiniteGroup | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_cyclic(self) -> bool:
        return any(self.parent.element_order(g) == self.order for g in self.elements)

    def generator(self) -> int:
        """A generator of a cyclic subgroup (the smallest label)."""
        for g in self.elements:
            if self.parent.element_order(g) == self.order:
                return g
        raise GroupError("subgroup is not cyclic")

    def contains(self, g: int) -> bool:
        return int(g) in self.elements

    def as_group(self) -> FiniteGroup:
        """The subgroup as a group on ``0..order-1`` in the order of ``elements``."""
        if self._group is None:
            pos = {e: i for i, e in enumerate(self.elements)}
            T = self.parent.table
            table = [[pos[int(T[a, b])] for b in self.elements] for a in self.elements]
            gens = [pos[g] for g in self.gens] if self.gens else None
            self._group = FiniteGroup(table, generators=gens, name=f"{self.parent.name}.H", verify=False)
        return self._group

    @property
    def embedding(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64)

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.parent.name}>"


def cyclic(n: int, name: str | None = None) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, generators=[1] if n > 1 else [], name=name or f"C{n}", verify=False)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Elements ``(g, h)`` labelled ``g * |H| + h``."""
    n, m = G.order, H.order
    g = np.arange(n * m) // m
    h = np.arange(n * m) % m
    table = G.table[g[:, None], g[None, :]] * m + H.table[h[:, None], h[None, :]]
    gens = [x * m for x in G.generators] + list(H.generators)
    return FiniteGroup(table, generators=gens, name=name or f"{G.name}x{H.name}", verify=False)


def from_permutations(perms: Sequence[Sequence[int]], name: str = "G") -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """Group generated by permutations composed as ``(p q)(i) = q(p(i))``.

    That is, ``p`` acts first, which matches right actions.  Returns the
    group and its elements as permutation tuples (identity first, then
    lexicographic order).
    """
    perms = [tuple(int(x) for x in p) for p in perms]
    if not perms:
        raise GroupError("need at least one permutation")
    k = len(perms[0])
    ident = tuple(range(k))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for p in perms:
                y = tuple(p[x[i]] for i in range(k))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elems = [ident] + sorted(seen - {ident})
    pos = {e: i for i, e in enumerate(elems)}
    table = [[pos[tuple(b[a[i]] for i in range(k))] for b in elems] for a in elems]
    gens = [pos[p] for p in perms if p != ident]
    return FiniteGroup(table, generators=gens, name=name), elems


def symmetric(k: int) -> FiniteGroup:
    if k < 2:
        return cyclic(1, name=f"S{k}")
    perms = [tuple([1, 0] + list(range(2, k))), tuple(list(range(1, k)) + [0])]
    G, _ = from_permutations(perms, name=f"S{k}")
    return G


def dihedral(n: int) -> FiniteGroup:
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    G, _ = from_permutations([rot, ref], name=f"D{n}")
    return G


def coprime(G: FiniteGroup, m: int) -> bool:
    return gcd(G.order, m) == 1


_BUILDERS = {"C": cyclic, "S": symmetric, "D": dihedral}


def build_group(spec) -> FiniteGroup:
    """Group from a descriptor: ``"C4"``, ``"C2xC2"``, ``"S3"``, ``"D4"``, or
    ``{"permutations": [[...], ...]}``."""
    if isinstance(spec, dict):
        if "permutations" in spec:
            G, _ = from_permutations(spec["permutations"], name=spec.get("name", "G"))
            return G
        if "table" in spec:
            return FiniteGroup(spec["table"], name=spec.get("name", "G"))
        raise GroupError(f"unsupported group spec {spec!r}")
    text = str(spec).replace(" ", "").replace("×", "x")
    parts = text.split("x")
    groups = []
    for part in parts:
        if not part or part[0] not in _BUILDERS or not part[1:].isdigit():
            raise GroupError(f"cannot parse group {spec!r}")
        groups.append(_BUILDERS[part[0]](int(part[1:])))
    G = groups[0]
    for H in groups[1:]:
        G = direct_product(G, H)
    G.name = str(spec)
    return G
