"""Finite groups acting on finite rings by automorphisms.

Actions are on the right: ``s^(gh) = (s^g)^h``.  Every group element carries
a full element table ``tables[g][s] = s^g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import FiniteGroup, GroupError, Subgroup
from .rings import (
    FiniteCommRing,
    Ideal,
    PresentedRing,
    RingError,
    intersect_ideals,
    parse_polynomial,
)


class ActionError(ValueError):
    pass


class StarViolation(ActionError):
    """No element of trace one exists."""

    def __init__(self, image: Sequence[int], ring: FiniteCommRing):
        self.image = sorted(int(x) for x in image)
        shown = ", ".join(ring.format(x) for x in self.image)
        super().__init__(f"(*) has no witness: no element of trace 1; image of tr = {{{shown}}}")


def check_automorphism(ring: FiniteCommRing, table: np.ndarray) -> None:
    """Raise unless ``table`` is a ring automorphism of ``ring``."""
    table = np.asarray(table)
    if table.shape != (ring.size,):
        raise ActionError("automorphism table has the wrong length")
    if len(np.unique(table)) != ring.size:
        raise ActionError("map is not a bijection")
    if table[ring.one] != ring.one:
        raise ActionError("map does not preserve 1")
    idx = np.arange(ring.size)
    gens = ring.additive_generators
    for b in gens:
        if np.any(table[ring.add(idx, b)] != ring.add(table, table[b])):
            raise ActionError("map is not additive")
    for a in gens:
        for b in gens:
            if table[ring.mul(a, b)] != ring.mul(table[a], table[b]):
                raise ActionError("map is not multiplicative")


def additive_extension(ring: FiniteCommRing, basis_images: Sequence[int]) -> np.ndarray:
    """Table of the additive map sending additive generator ``k`` to ``basis_images[k]``."""
    coords = ring.coords_table
    out = np.zeros(ring.size, dtype=np.int64)
    for k, img in enumerate(basis_images):
        out = ring.add(out, ring.scale(coords[:, k], int(img)))
    return np.asarray(out, dtype=np.int64)


def atom_map(ring: PresentedRing, images: Sequence[tuple[int, Sequence[int]]]) -> np.ndarray:
    """Automorphism sending ``x`` of atom ``i`` to polynomial ``images[i][1]``
    placed in atom ``images[i][0]``."""
    if len(images) != len(ring.atoms):
        raise ActionError(f"need one image per atom ({len(ring.atoms)})")
    basis_images = []
    for (target, coeffs), atom in zip(images, ring.atoms):
        if ring.atoms[target].modulus != atom.modulus or ring.atoms[target].degree != atom.degree:
            raise ActionError("atoms can only map to atoms of the same shape")
        e = ring.atom_idempotent(target)
        p = ring.atom_element(target, coeffs)
        power = e
        for _ in range(atom.degree):
            basis_images.append(power)
            power = int(ring.mul(power, p))
    table = additive_extension(ring, basis_images)
    check_automorphism(ring, table)
    return table


def generator_table(ring: FiniteCommRing, spec) -> np.ndarray:
    """Build one generator's automorphism from a scenario rule.

    Accepted forms: ``"identity"``, ``"frobenius"``, ``"negate"``
    (``x -> -x`` in every atom), an explicit element table (list of ints), or
    a mapping with optional ``atoms`` (target atom per atom) and ``images``
    (polynomial for ``x`` per atom, default ``"x"``).
    """
    idx = np.arange(ring.size)
    if isinstance(spec, str):
        rule = spec.strip().lower()
        if rule in ("identity", "trivial", "id"):
            return idx.copy()
        if rule == "frobenius":
            orders = set(int(o) for o in ring.orders)
            if len(orders) != 1 or not _is_prime(next(iter(orders))):
                raise ActionError("frobenius needs a ring of prime characteristic")
            table = np.asarray(ring.power(idx, next(iter(orders))), dtype=np.int64)
            check_automorphism(ring, table)
            return table
        if rule in ("negate", "x -> -x", "x->-x"):
            spec = {"images": ["-x"] * len(ring.atoms)}
        else:
            raise ActionError(f"unknown action rule {spec!r}")
    if isinstance(spec, (list, tuple)):
        table = np.asarray(spec, dtype=np.int64)
        check_automorphism(ring, table)
        return table
    if isinstance(spec, dict):
        if not isinstance(ring, PresentedRing):
            raise ActionError("algebraic rules need a presented ring")
        k = len(ring.atoms)
        targets = [int(t) for t in spec.get("atoms", range(k))]
        images = spec.get("images", ["x"] * k)
        if isinstance(images, str):
            images = [images] * k
        if len(targets) != k or len(images) != k:
            raise ActionError(f"need {k} atom targets and images")
        pairs = []
        for t, img in zip(targets, images):
            pairs.append((t, parse_polynomial(str(img), ring.atoms[t].modulus)))
        return atom_map(ring, pairs)
    raise ActionError(f"cannot interpret action rule {spec!r}")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class InertiaData:
    maximal: Ideal
    decomposition: Subgroup
    inertia: Subgroup


class RingAction:
    """A homomorphism from ``group`` into the automorphisms of ``ring``.

    ``generator_tables[k]`` is the automorphism of ``group.generators[k]``.
    With ``require_star`` (the default) construction fails unless some
    element has trace one.
    """

    def __init__(
        self,
        ring: FiniteCommRing,
        group: FiniteGroup,
        generator_tables: Sequence[np.ndarray] | None = None,
        *,
        tables: np.ndarray | None = None,
        require_star: bool = True,
        verify: bool = True,
        name: str = "",
    ):
        self.ring = ring
        self.group = group
        self.name = name
        if tables is None:
            if generator_tables is None or len(generator_tables) != len(group.generators):
                raise ActionError("need one automorphism table per group generator")
            gt = [np.asarray(t, dtype=np.int64) for t in generator_tables]
            if verify:
                for t in gt:
                    check_automorphism(ring, t)
            tables = np.zeros((group.order, ring.size), dtype=np.int64)
            tables[0] = np.arange(ring.size)
            for parent, k, child in group.words():
                tables[child] = gt[k][tables[parent]]
        self.tables = np.asarray(tables, dtype=np.int64)
        if verify:
            self._verify_homomorphism()
        self.star_required = require_star
        if require_star:
            self.trace_witness()

    def _verify_homomorphism(self) -> None:
        T, G = self.tables, self.group
        if np.any(T[0] != np.arange(self.ring.size)):
            raise ActionError("identity does not act trivially")
        for g in range(G.order):
            for h in G.generators:
                if np.any(T[G.table[g, h]] != T[h][T[g]]):
                    raise ActionError("assignment g -> automorphism is not a homomorphism")

    @classmethod
    def trivial(cls, ring: FiniteCommRing, group: FiniteGroup, require_star: bool = False) -> "RingAction":
        tables = np.tile(np.arange(ring.size), (group.order, 1))
        return cls(ring, group, tables=tables, require_star=require_star, verify=False, name="trivial")

    # -- basic maps --------------------------------------------------------
    def act(self, g, s):
        return self.tables[g, s]

    @cached_property
    def trace_table(self) -> np.ndarray:
        return np.asarray(self.ring.sum(self.tables, axis=0), dtype=np.int64)

    def trace(self, s):
        return self.trace_table[np.asarray(s)]

    @cached_property
    def has_star(self) -> bool:
        return bool(np.any(self.trace_table == self.ring.one))

    def trace_witness(self) -> int:
        """Smallest ``x`` with ``tr(x) = 1``."""
        hits = np.flatnonzero(self.trace_table == self.ring.one)
        if hits.size == 0:
            raise StarViolation(np.unique(self.trace_table), self.ring)
        return int(hits[0])

    @cached_property
    def invariant_mask(self) -> np.ndarray:
        idx = np.arange(self.ring.size)
        return np.all(self.tables == idx[None, :], axis=0)

    def invariant_subring(self) -> np.ndarray:
        """Sorted elements of ``R = S^G`` (closure under the ring operations verified)."""
        R = np.flatnonzero(self.invariant_mask)
        A, B = np.meshgrid(R, R, indexing="ij")
        if not (self.invariant_mask[self.ring.add(A, B)].all() and self.invariant_mask[self.ring.mul(A, B)].all()):
            raise ActionError("fixed points are not a subring")
        return R

    @property
    def is_trivial(self) -> bool:
        return bool(self.invariant_mask.all())

    # -- maximal ideals and inertia -----------------------------------------
    def ideal_image(self, g: int, ideal: Ideal) -> Ideal:
        """``I^g``."""
        return Ideal.from_elements(self.ring, self.tables[g][ideal.elements])

    def decomposition_group(self, M: Ideal) -> Subgroup:
        """Stabilizer of ``M``."""
        elems = [g for g in range(self.group.order) if np.all(M.mask[self.tables[g][M.elements]])]
        return self.group.subgroup_from_elements(elems)

    def inertia_group(self, M: Ideal) -> Subgroup:
        """``{g : s^g - s in M for all s}``."""
        idx = np.arange(self.ring.size)
        elems = [
            g for g in range(self.group.order) if np.all(M.mask[self.ring.sub(self.tables[g], idx)])
        ]
        return self.group.subgroup_from_elements(elems)

    @cached_property
    def inertia_data(self) -> list[InertiaData]:
        if self.ring.is_zero_ring:
            return []
        return [InertiaData(M, self.decomposition_group(M), self.inertia_group(M)) for M in self.ring.maximal_ideals()]

    def j_ideal(self, H: Subgroup) -> Ideal:
        """Intersection of the maximal ideals whose inertia contains ``H``.

        The empty intersection is the unit ideal.
        """
        key = H.elements
        cache = self.__dict__.setdefault("_j_cache", {})
        if key not in cache:
            hs = set(H.elements)
            chosen = [d.maximal for d in self.inertia_data if hs <= set(d.inertia.elements)]
            cache[key] = intersect_ideals(self.ring, chosen)
        return cache[key]

    def j_ideal_of_element(self, g: int) -> Ideal:
        return self.j_ideal(self.group.subgroup([g]))

    def residual_ring(self, H: Subgroup) -> tuple[FiniteCommRing, np.ndarray, "RingAction"]:
        """``S_H = S/J(H)``, the projection, and the induced (trivial) ``H``-action."""
        J = self.j_ideal(H)
        sub = self.restrict(H)
        quot, proj, induced = sub.induced_on_quotient(J)
        if not induced.is_trivial:
            raise ActionError("H does not act trivially on S_H")
        return quot, proj, induced

    def is_galois(self) -> bool:
        """True iff every maximal ideal has trivial inertia."""
        return all(d.inertia.order == 1 for d in self.inertia_data)

    # -- derived actions ---------------------------------------------------
    def restrict(self, H: Subgroup) -> "RingAction":
        key = H.elements
        cache = self.__dict__.setdefault("_restrict_cache", {})
        if key not in cache:
            if H.order == self.group.order:
                cache[key] = self
            else:
                cache[key] = RingAction(
                    self.ring,
                    H.as_group(),
                    tables=self.tables[list(H.elements)],
                    require_star=False,
                    verify=False,
                    name=f"{self.name}|H",
                )
        return cache[key]

    def induced_on_quotient(self, ideal: Ideal) -> tuple[FiniteCommRing, np.ndarray, "RingAction"]:
        """Action on ``S/I`` for a ``G``-stable ideal ``I``."""
        key = ideal.key
        cache = self.__dict__.setdefault("_quot_cache", {})
        if key not in cache:
            for g in self.group.generators:
                if not np.all(ideal.mask[self.tables[g][ideal.elements]]):
                    raise ActionError("ideal is not stable under the group")
            quot, proj = self.ring.quotient(ideal)
            if quot is self.ring:
                cache[key] = (quot, proj, self)
            else:
                reps = quot.reps
                tables = proj[self.tables[:, reps]]
                act = RingAction(quot, self.group, tables=tables, require_star=False, verify=False, name=f"{self.name}/I")
                cache[key] = (quot, proj, act)
        return cache[key]

    def quotient_group_action(self, N: Subgroup) -> tuple["RingAction", np.ndarray]:
        """Action of ``G/N`` when ``N`` acts trivially on the ring."""
        idx = np.arange(self.ring.size)
        if not all(np.array_equal(self.tables[n], idx) for n in N.elements):
            raise ActionError("normal subgroup does not act trivially")
        Q, proj = self.group.quotient(N)
        reps = [int(np.flatnonzero(proj == q)[0]) for q in range(Q.order)]
        act = RingAction(self.ring, Q, tables=self.tables[reps], require_star=False, verify=True, name=f"{self.name}/N")
        return act, proj

    def __repr__(self):
        return f"<RingAction {self.group.name} on {self.ring.name}>"


def build_action(ring: FiniteCommRing, group: FiniteGroup, rules: Sequence, require_star: bool = True) -> RingAction:
    """Action from one rule per group generator (see :func:`generator_table`)."""
    if len(rules) != len(group.generators):
        raise ActionError(f"group has {len(group.generators)} generators but {len(rules)} rules were given")
    tables = [generator_table(ring, r) for r in rules]
    return RingAction(ring, group, tables, require_star=require_star)
