"""Finite commutative rings, their ideals and quotients, and matrices over them.

A ring is a carrier ``0..size-1`` of element indices in a fixed total order
(lexicographic on coefficient tuples for presented rings).  All arithmetic is
vectorized over numpy integer arrays, so the same call adds two elements or
two million.  Presented rings are finite products of atoms
``(Z/m)[x]/(f)`` with ``f`` monic; quotients of those by arbitrary ideals are
:class:`QuotientRing` instances whose elements are canonical coset
representatives.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import product
from typing import Sequence

import numpy as np

from . import intlinalg

DEFAULT_SIZE_BOUND = 65536
TABLE_LIMIT = 1024
EXHAUSTIVE_AXIOM_LIMIT = 256


class RingError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured cap."""


class NotInvertible(RingError):
    pass


# ----------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class Atom:
    """``(Z/modulus)[x]/(poly)``; ``poly`` lists coefficients low to high."""

    modulus: int
    poly: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise RingError(f"modulus must be >= 2, got {self.modulus}")
        if len(self.poly) < 2:
            raise RingError("polynomial must have degree >= 1")
        if self.poly[-1] % self.modulus != 1:
            raise RingError(f"polynomial {self.poly} is not monic mod {self.modulus}")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def size(self) -> int:
        return self.modulus**self.degree


def _factor_int(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _polymod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - q * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _is_irreducible(p: int, poly: Sequence[int]) -> bool:
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for tail in product(range(p), repeat=d):
            if not _polymod_p(list(poly), list(tail) + [1], p):
                return False
    return True


def conway_like_polynomial(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree ``k`` over ``F_p`` in lexicographic
    order of its coefficient tuple ``(c_0, ..., c_{k-1})``."""
    if k == 1:
        return (0, 1)
    for tail in product(range(p), repeat=k):
        poly = tuple(tail) + (1,)
        if _is_irreducible(p, poly):
            return poly
    raise RingError(f"no irreducible polynomial of degree {k} over F_{p}")


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(x(?:\s*\^\s*(\d+))?)?")


def parse_polynomial(text: str, modulus: int | None = None) -> list[int]:
    """Parse ``"x^2+2x+1"``-style polynomials into low-to-high coefficients."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise RingError("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise RingError(f"cannot parse polynomial {text!r} at position {pos}")
        sign, num, xpart, exp = m.groups()
        if not num and not xpart:
            raise RingError(f"cannot parse polynomial {text!r} at position {pos}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if xpart else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    deg = max(coeffs)
    out = [coeffs.get(i, 0) for i in range(deg + 1)]
    if modulus:
        out = [c % modulus for c in out]
    return out


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and (ch == "×" or text[i : i + 3] == " x "):
            parts.append(cur)
            cur = ""
            i += 1 if ch == "×" else 3
            continue
        cur += ch
        i += 1
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def _prime_power(q: int) -> tuple[int, int]:
    f = _factor_int(q)
    if len(f) != 1:
        raise RingError(f"{q} is not a prime power")
    ((p, k),) = f.items()
    return p, k


_FACTOR_PATTERNS = [
    (re.compile(r"^\(?Z/(\d+)\)?\[x\]/\((.+)\)$"), "poly"),
    (re.compile(r"^F_?(\d+)\[x\]/\((.+)\)$"), "fpoly"),
    (re.compile(r"^Z/(\d+)$"), "zm"),
    (re.compile(r"^(?:F_?(\d+)|GF\((\d+)\))$"), "field"),
]


def parse_atoms(descriptor: str) -> list[Atom]:
    """Parse a ring descriptor such as ``"F2 x F2"`` or ``"(Z/4)[x]/(x^2+x+1)"``."""
    atoms: list[Atom] = []
    for part in _split_top_level(descriptor):
        reps = 1
        m = re.match(r"^(.*?)\^(\d+)$", part)
        if m and "[" not in m.group(1) and "(" not in m.group(1).replace("GF(", ""):
            part, reps = m.group(1).strip(), int(m.group(2))
        for pattern, kind in _FACTOR_PATTERNS:
            hit = pattern.match(part)
            if hit:
                break
        else:
            raise RingError(f"cannot parse ring factor {part!r}")
        if kind == "poly":
            mod = int(hit.group(1))
            atom = Atom(mod, tuple(parse_polynomial(hit.group(2), mod)))
        elif kind == "fpoly":
            mod = int(hit.group(1))
            _prime_power(mod)
            if len(_factor_int(mod)) != 1 or list(_factor_int(mod).values())[0] != 1:
                raise RingError(f"F{mod}[x] needs a prime subscript")
            atom = Atom(mod, tuple(parse_polynomial(hit.group(2), mod)))
        elif kind == "zm":
            atom = Atom(int(hit.group(1)), (0, 1))
        else:
            q = int(hit.group(1) or hit.group(2))
            p, k = _prime_power(q)
            atom = Atom(p, conway_like_polynomial(p, k))
        atoms.extend([atom] * reps)
    if not atoms:
        raise RingError("empty ring descriptor")
    return atoms


# ----------------------------------------------------------------------------
# rings


class FiniteCommRing:
    """Common machinery for finite commutative rings on an index carrier.

    Subclasses provide ``size``, ``orders`` (the additive group is
    ``+ Z/orders[i]``), a coordinate table and a raw multiplication.
    """

    size: int
    orders: np.ndarray
    one: int
    name: str

    zero = 0

    # -- coordinates -------------------------------------------------------
    def _coords_all(self) -> np.ndarray:
        raise NotImplementedError

    def _mul_raw(self, a, b):
        raise NotImplementedError

    @cached_property
    def coords_table(self) -> np.ndarray:
        return self._coords_all()

    @cached_property
    def _weights(self) -> np.ndarray:
        w = np.ones(len(self.orders), dtype=np.int64)
        for i in range(len(self.orders) - 2, -1, -1):
            w[i] = w[i + 1] * self.orders[i + 1]
        return w

    _radix_to_elem: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return len(self.orders)

    def to_coords(self, a) -> np.ndarray:
        return self.coords_table[np.asarray(a)]

    def from_coords(self, c) -> np.ndarray:
        c = np.mod(np.asarray(c, dtype=np.int64), self.orders)
        idx = c @ self._weights if self.dim else np.zeros(c.shape[:-1], dtype=np.int64)
        if self._radix_to_elem is not None:
            return self._radix_to_elem[idx]
        return idx

    @property
    def additive_generators(self) -> list[int]:
        """Elements whose coordinates are the unit vectors."""
        eye = np.eye(self.dim, dtype=np.int64)
        return [int(x) for x in self.from_coords(eye)] if self.dim else []

    # -- arithmetic --------------------------------------------------------
    @cached_property
    def _tables(self):
        if self.size > TABLE_LIMIT:
            return None
        idx = np.arange(self.size)
        A, B = np.meshgrid(idx, idx, indexing="ij")
        dtype = np.int16 if self.size < 2**15 else np.int32
        c = self.to_coords(A) + self.to_coords(B)
        add = self.from_coords(c).astype(dtype)
        mul = np.asarray(self._mul_raw(A, B)).astype(dtype)
        neg = self.from_coords(-self.to_coords(idx)).astype(dtype)
        return add, mul, neg

    def add(self, a, b):
        t = self._tables
        if t is not None:
            return t[0][a, b]
        return self.from_coords(self.to_coords(a) + self.to_coords(b))

    def neg(self, a):
        t = self._tables
        if t is not None:
            return t[2][a]
        return self.from_coords(-self.to_coords(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        t = self._tables
        if t is not None:
            return t[1][a, b]
        return self._mul_raw(np.asarray(a), np.asarray(b))

    def scale(self, k, a):
        """Integer multiple ``k * a``."""
        k = np.asarray(k, dtype=np.int64)
        return self.from_coords(k[..., None] * self.to_coords(a))

    def from_int(self, k: int) -> int:
        return int(self.scale(k, self.one))

    def power(self, a, e: int):
        a = np.asarray(a)
        result = np.full(a.shape, self.one, dtype=np.int64)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def sum(self, values, axis=0):
        values = np.asarray(values)
        values = np.moveaxis(values, axis, 0)
        if values.shape[0] == 0:
            return np.zeros(values.shape[1:], dtype=np.int64)
        return reduce(self.add, list(values))

    def elements(self) -> np.ndarray:
        return np.arange(self.size)

    # -- structure ---------------------------------------------------------
    @property
    def is_zero_ring(self) -> bool:
        return self.size == 1

    def _unit_exponent(self) -> int:
        raise NotImplementedError

    @cached_property
    def _inverse(self) -> np.ndarray:
        """Inverse table; ``-1`` marks non-units."""
        idx = np.arange(self.size)
        t = self._tables
        if t is not None:
            hit = t[1] == self.one
            inv = np.where(hit.any(axis=1), hit.argmax(axis=1), -1)
            return inv.astype(np.int64)
        e = self._unit_exponent()
        unit = self.power(idx, e) == self.one
        inv = np.where(unit, self.power(idx, e - 1), -1)
        return inv.astype(np.int64)

    @property
    def units_mask(self) -> np.ndarray:
        return self._inverse >= 0

    def units(self) -> np.ndarray:
        """All units in canonical order."""
        return np.flatnonzero(self.units_mask)

    def is_unit(self, a):
        return self._inverse[np.asarray(a)] >= 0

    def inv(self, a):
        a = np.asarray(a)
        out = self._inverse[a]
        if np.any(out < 0):
            raise NotInvertible("element is not a unit")
        return out

    @cached_property
    def nilpotent_mask(self) -> np.ndarray:
        a = np.arange(self.size)
        for _ in range(max(1, math.ceil(math.log2(max(self.size, 2))))):
            a = self.mul(a, a)
        return a == self.zero

    def nilradical(self) -> "Ideal":
        """Ideal of nilpotent elements; equals the Jacobson radical here."""
        return self._nilradical

    @cached_property
    def _nilradical(self) -> "Ideal":
        elems = np.flatnonzero(self.nilpotent_mask)
        return Ideal.from_elements(self, elems)

    def ideal(self, generators: Sequence[int]) -> "Ideal":
        gens = [int(g) for g in generators]
        add_gens = [int(self.mul(g, b)) for g in gens for b in self.additive_generators]
        elems = additive_span(self, add_gens)
        return Ideal(self, tuple(gens), elems, _small_generating_set(self, elems, add_gens))

    @cached_property
    def unit_ideal(self) -> "Ideal":
        return Ideal.from_elements(self, np.arange(self.size))

    @cached_property
    def zero_ideal(self) -> "Ideal":
        return Ideal(self, (), np.array([0]), [])

    def idempotents(self) -> np.ndarray:
        idx = np.arange(self.size)
        return idx[self.mul(idx, idx) == idx]

    def maximal_ideals(self) -> list["Ideal"]:
        """All maximal ideals, via primitive idempotents of ``S/nil``."""
        if self.is_zero_ring:
            raise RingError("the zero ring has no maximal ideals")
        return self._maximal_ideals

    @cached_property
    def _maximal_ideals(self) -> list["Ideal"]:
        reduced, proj = self.quotient(self.nilradical())
        idem = reduced.idempotents()
        idem = idem[idem != reduced.zero]
        primitive = [
            int(e)
            for e in idem
            if all(int(reduced.mul(e, f)) in (reduced.zero, int(e)) for f in idem)
        ]
        out = []
        for e in primitive:
            comp = int(reduced.sub(reduced.one, e))
            mbar = reduced.ideal([comp])
            elems = np.flatnonzero(mbar.mask[proj])
            out.append(Ideal.from_elements(self, elems))
        out.sort(key=lambda I: tuple(I.elements[:64]))
        return out

    def quotient(self, ideal: "Ideal") -> tuple["FiniteCommRing", np.ndarray]:
        """Quotient ring and the projection as an element lookup array."""
        if ideal.ring is not self:
            raise RingError("ideal belongs to a different ring")
        key = ideal.key
        cache = self.__dict__.setdefault("_quotients", {})
        if key not in cache:
            if ideal.size == 1:
                cache[key] = (self, np.arange(self.size))
            else:
                ideal.verify()
                q = QuotientRing(self, ideal)
                cache[key] = (q, q.proj)
        return cache[key]

    def residue_field(self, maximal: "Ideal") -> tuple["FiniteCommRing", np.ndarray]:
        return self.quotient(maximal)

    @property
    def is_field(self) -> bool:
        return self.size > 1 and int(self.units_mask.sum()) == self.size - 1

    # -- presentation ------------------------------------------------------
    def format(self, a) -> str:
        return str(int(a))

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} size={self.size}>"

    def verify_axioms(self, rng: np.random.Generator | None = None, samples: int = 2000) -> None:
        """Check the commutative ring axioms.

        Addition is verified through the coordinate encoding; multiplication
        is checked commutative and distributive on all pairs against additive
        generators, and associative on generator triples, which together pin
        down every triple by bilinearity.  Rings above the exhaustive limit
        are sampled instead.
        """
        n = self.size
        if n == 1:
            return
        gens = np.array(self.additive_generators, dtype=np.int64)
        if n <= EXHAUSTIVE_AXIOM_LIMIT:
            a = np.arange(n)
        else:
            rng = rng or np.random.default_rng(0)
            a = rng.integers(0, n, size=samples)
        b = a[::-1] if n > EXHAUSTIVE_AXIOM_LIMIT else None
        if b is None:
            A, B = np.meshgrid(a, a, indexing="ij")
        else:
            A, B = a, b
        if np.any(self.mul(A, B) != self.mul(B, A)):
            raise RingError("multiplication is not commutative")
        if np.any(self.mul(self.one, a) != a):
            raise RingError("one is not a multiplicative identity")
        if self.one == self.zero:
            raise RingError("1 = 0 in a non-zero ring")
        for g in gens:
            lhs = self.mul(A, self.add(B, g))
            rhs = self.add(self.mul(A, B), self.mul(A, g))
            if np.any(lhs != rhs):
                raise RingError("multiplication is not distributive")
        G1, G2, G3 = np.meshgrid(gens, gens, gens, indexing="ij")
        if np.any(self.mul(self.mul(G1, G2), G3) != self.mul(G1, self.mul(G2, G3))):
            raise RingError("multiplication is not associative")


class PresentedRing(FiniteCommRing):
    """Finite product of atoms ``(Z/m)[x]/(f)``."""

    def __init__(self, atoms: Sequence[Atom], name: str | None = None, bound: int = DEFAULT_SIZE_BOUND):
        self.atoms = tuple(atoms)
        size = 1
        for atom in self.atoms:
            size *= atom.size
        if size > bound:
            raise RingError(f"ring of size {size} exceeds the size bound {bound}")
        self.size = size
        self.orders = np.array(
            [atom.modulus for atom in self.atoms for _ in range(atom.degree)], dtype=np.int64
        )
        self.offsets = []
        off = 0
        for atom in self.atoms:
            self.offsets.append(off)
            off += atom.degree
        self.name = name or " x ".join(_atom_name(a) for a in self.atoms)
        one = np.zeros(len(self.orders), dtype=np.int64)
        for off in self.offsets:
            one[off] = 1
        self.one = int(self.from_coords(one)) if self.atoms else 0

    def _coords_all(self):
        idx = np.arange(self.size, dtype=np.int64)
        return (idx[:, None] // self._weights[None, :]) % self.orders[None, :]

    def _mul_raw(self, a, b):
        ca, cb = self.to_coords(a), self.to_coords(b)
        out = np.zeros(np.broadcast_shapes(ca.shape, cb.shape), dtype=np.int64)
        for atom, off in zip(self.atoms, self.offsets):
            k, m = atom.degree, atom.modulus
            A = ca[..., off : off + k]
            B = cb[..., off : off + k]
            prod = np.zeros(out.shape[:-1] + (2 * k - 1,), dtype=np.int64)
            for i in range(k):
                for j in range(k):
                    prod[..., i + j] += A[..., i] * B[..., j]
                prod %= m
            f = np.array(atom.poly[:k], dtype=np.int64)
            for d in range(2 * k - 2, k - 1, -1):
                c = prod[..., d]
                prod[..., d - k : d] = (prod[..., d - k : d] - c[..., None] * f) % m
            out[..., off : off + k] = prod[..., :k]
        return self.from_coords(out)

    def _unit_exponent(self) -> int:
        lam = 1
        for atom in self.atoms:
            for p, e in _factor_int(atom.modulus).items():
                lam = math.lcm(lam, *(p**d - 1 for d in range(1, atom.degree + 1)))
                lam = math.lcm(lam, p ** (e + e * atom.degree))
        return lam

    def atom_element(self, index: int, coeffs: Sequence[int]) -> int:
        """Element equal to ``coeffs`` in atom ``index`` and zero elsewhere."""
        c = np.zeros(self.dim, dtype=np.int64)
        off, k = self.offsets[index], self.atoms[index].degree
        coeffs = list(coeffs)
        if len(coeffs) > k:
            # reduce a longer polynomial through the ring arithmetic
            x = self.atom_element(index, [0, 1]) if k > 1 else self.atom_element(index, [int(-self.atoms[index].poly[0])])
            acc = 0
            for cf in reversed(coeffs):
                acc = int(self.add(self.mul(acc, x), self.scale(cf, self.atom_idempotent(index))))
            return acc
        c[off : off + len(coeffs)] = coeffs
        return int(self.from_coords(c))

    def atom_idempotent(self, index: int) -> int:
        return self.atom_element(index, [1])

    def parse_element(self, text: str) -> int:
        """Parse ``"1+x"`` (single atom) or ``"(1, x)"`` (one entry per atom)."""
        text = text.strip()
        if len(self.atoms) > 1:
            if not (text.startswith("(") and text.endswith(")")):
                raise RingError(f"expected a tuple of {len(self.atoms)} entries: {text!r}")
            parts = [p.strip() for p in text[1:-1].split(",")]
            if len(parts) != len(self.atoms):
                raise RingError(f"expected {len(self.atoms)} entries: {text!r}")
        else:
            parts = [text]
        acc = 0
        for i, part in enumerate(parts):
            acc = int(self.add(acc, self.atom_element(i, parse_polynomial(part, self.atoms[i].modulus))))
        return acc

    def format(self, a) -> str:
        c = self.to_coords(int(a))
        parts = []
        for atom, off in zip(self.atoms, self.offsets):
            parts.append(_format_poly(c[off : off + atom.degree]))
        if len(parts) == 1:
            return parts[0]
        return "(" + ", ".join(parts) + ")"


def _atom_name(atom: Atom) -> str:
    if atom.degree == 1 and atom.poly[0] == 0:
        return f"Z/{atom.modulus}"
    return f"(Z/{atom.modulus})[x]/({_format_poly(atom.poly)})"


def _format_poly(coeffs) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        c = int(c)
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mon = "x" if i == 1 else f"x^{i}"
            terms.append(mon if c == 1 else f"{c}{mon}")
    return "+".join(terms) if terms else "0"


class QuotientRing(FiniteCommRing):
    """``parent / ideal`` with minimal coset representatives as elements."""

    def __init__(self, parent: FiniteCommRing, ideal: "Ideal"):
        self.parent = parent
        self.kernel_ideal = ideal
        reps, proj = _coset_labels(parent, ideal)
        self.reps = reps
        self.proj = proj
        self.size = len(reps)
        self.name = f"{parent.name} / <{ideal.size}>"
        # additive coordinates from the Smith form of the relation lattice
        dp = parent.dim
        rel_cols = [[int(parent.orders[i]) if i == j else 0 for i in range(dp)] for j in range(dp)]
        rel_cols += [[int(x) for x in parent.to_coords(g)] for g in ideal.additive_gens]
        snf = intlinalg.smith_normal_form(intlinalg.from_columns(rel_cols, dp))
        diag = snf.diagonal
        keep = [i for i in range(dp) if diag[i] != 1]
        self._keep = keep
        self.orders = np.array([diag[i] for i in keep], dtype=np.int64)
        U = np.array([[x % diag[i] for x in snf.U[i]] for i in keep], dtype=np.int64).reshape(len(keep), dp)
        self._U = U
        pc = parent.to_coords(reps)
        coords = (pc @ U.T) % self.orders if keep else np.zeros((self.size, 0), dtype=np.int64)
        self._coords = coords
        radix = coords @ self._weights if keep else np.zeros(self.size, dtype=np.int64)
        r2e = np.full(self.size, -1, dtype=np.int64)
        r2e[radix] = np.arange(self.size)
        if np.any(r2e < 0):
            raise RingError("quotient coordinate system is not bijective")
        self._radix_to_elem = r2e
        self.one = int(proj[parent.one])

    def _coords_all(self):
        return self._coords

    def _mul_raw(self, a, b):
        return self.proj[self.parent.mul(self.reps[a], self.reps[b])]

    def _unit_exponent(self) -> int:
        return self.parent._unit_exponent()

    def lift(self, a):
        return self.reps[np.asarray(a)]

    def format(self, a) -> str:
        if self.size == 1:
            return "0"
        return f"[{self.parent.format(self.reps[int(a)])}]"


def _coset_labels(parent: FiniteCommRing, ideal: "Ideal") -> tuple[np.ndarray, np.ndarray]:
    n = parent.size
    idx = np.arange(n)
    if ideal.size <= n // ideal.size:
        lab = idx.copy()
        for i in ideal.elements:
            lab = np.minimum(lab, parent.add(idx, int(i)))
    else:
        lab = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            if lab[a] >= 0:
                continue
            lab[parent.add(a, ideal.elements)] = a
    reps = np.unique(lab)
    proj = np.searchsorted(reps, lab)
    return reps, proj


def additive_span(ring: FiniteCommRing, gens: Sequence[int]) -> np.ndarray:
    """Sorted elements of the additive subgroup generated by ``gens``."""
    mask = np.zeros(ring.size, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int64)
    gens = [int(g) for g in gens if int(g) != 0]
    while frontier.size:
        new = []
        for g in gens:
            cand = np.asarray(ring.add(frontier, g)).ravel()
            cand = np.unique(cand[~mask[cand]])
            mask[cand] = True
            new.append(cand)
        frontier = np.concatenate(new) if new else np.array([], dtype=np.int64)
    return np.flatnonzero(mask)


def _small_generating_set(ring: FiniteCommRing, elements: np.ndarray, candidates=()) -> list[int]:
    target = len(elements)
    gens: list[int] = []
    span = np.array([0])
    pool = list(candidates) + [int(e) for e in elements]
    for c in pool:
        if len(span) == target:
            break
        if c in set(span.tolist()) if len(span) < 64 else np.isin(c, span):
            continue
        gens.append(int(c))
        span = additive_span(ring, gens)
    return gens


class Ideal:
    """An ideal with its full element set materialized."""

    def __init__(self, ring: FiniteCommRing, generators, elements, additive_gens):
        self.ring = ring
        self.generators = tuple(int(g) for g in generators)
        self.elements = np.asarray(elements, dtype=np.int64)
        self.additive_gens = [int(g) for g in additive_gens]
        mask = np.zeros(ring.size, dtype=bool)
        mask[self.elements] = True
        self.mask = mask

    @classmethod
    def from_elements(cls, ring: FiniteCommRing, elements) -> "Ideal":
        elements = np.unique(np.asarray(elements, dtype=np.int64))
        gens = _small_generating_set(ring, elements)
        return cls(ring, tuple(gens), elements, gens)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def key(self) -> bytes:
        return self.mask.tobytes()

    @property
    def is_unit_ideal(self) -> bool:
        return self.size == self.ring.size

    def contains(self, a):
        return self.mask[np.asarray(a)]

    def __contains__(self, a) -> bool:
        return bool(self.mask[int(a)])

    def __le__(self, other: "Ideal") -> bool:
        return bool(np.all(other.mask[self.elements]))

    def __eq__(self, other) -> bool:
        return isinstance(other, Ideal) and other.ring is self.ring and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def intersection(self, other: "Ideal") -> "Ideal":
        return Ideal.from_elements(self.ring, self.elements[other.mask[self.elements]])

    def verify(self) -> None:
        """Closure under addition and ring multiplication."""
        ring = self.ring
        if not self.mask[0]:
            raise RingError("not an ideal: missing 0")
        gens = ring.additive_generators
        for g in self.additive_gens or [0]:
            if not np.all(self.mask[ring.add(self.elements, g)]):
                raise RingError("not an ideal: not closed under addition")
        for g in gens:
            if not np.all(self.mask[ring.mul(self.elements, g)]):
                raise RingError("not an ideal: not closed under multiplication")

    def format(self) -> str:
        return "{" + ", ".join(self.ring.format(e) for e in self.elements) + "}"

    def __repr__(self):
        return f"<Ideal of size {self.size} in {self.ring.name}>"


def intersect_ideals(ring: FiniteCommRing, ideals: Sequence[Ideal]) -> Ideal:
    """Intersection; the empty intersection is the unit ideal."""
    mask = np.ones(ring.size, dtype=bool)
    for I in ideals:
        mask &= I.mask
    if mask.all():
        return ring.unit_ideal
    return Ideal.from_elements(ring, np.flatnonzero(mask))


def build_ring(spec, bound: int = DEFAULT_SIZE_BOUND, verify: bool = True) -> PresentedRing:
    """Build a ring from a descriptor string or a list of atoms."""
    if isinstance(spec, str):
        atoms = parse_atoms(spec)
        name = spec
    else:
        atoms = [a if isinstance(a, Atom) else Atom(int(a[0]), tuple(int(c) for c in a[1])) for a in spec]
        name = None
    size = 1
    for a in atoms:
        size *= a.size
    if size > bound:
        raise RingError(f"ring of size {size} exceeds the size bound {bound}")
    ring = PresentedRing(atoms, name=name, bound=bound)
    if verify:
        ring.verify_axioms()
    return ring


# ----------------------------------------------------------------------------
# matrices


def mat_identity(ring: FiniteCommRing, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=np.int64)
    out[np.arange(n), np.arange(n)] = ring.one
    return out


def mat_mul(ring: FiniteCommRing, A, B) -> np.ndarray:
    """Batched matrix product over ``ring`` (shapes ``(..., n, k) @ (..., k, m)``)."""
    A, B = np.asarray(A), np.asarray(B)
    n, k = A.shape[-2:]
    m = B.shape[-1]
    out = np.zeros(np.broadcast_shapes(A.shape[:-2], B.shape[:-2]) + (n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            acc = ring.mul(A[..., i, 0], B[..., 0, j])
            for t in range(1, k):
                acc = ring.add(acc, ring.mul(A[..., i, t], B[..., t, j]))
            out[..., i, j] = acc
    return out


def mat_det(ring: FiniteCommRing, A) -> np.ndarray:
    """Batched determinant by Laplace expansion over column subsets."""
    A = np.asarray(A)
    n = A.shape[-1]
    if n == 0:
        return np.full(A.shape[:-2], ring.one, dtype=np.int64)
    # minors[mask] = det of rows (n-popcount..n-1) restricted to columns in mask
    minors = {0: np.full(A.shape[:-2], ring.one, dtype=np.int64)}
    for size in range(1, n + 1):
        row = n - size
        nxt = {}
        for mask in _masks_of_size(n, size):
            acc = None
            sign_pos = 0
            for col in range(n):
                if not mask >> col & 1:
                    continue
                term = ring.mul(A[..., row, col], minors[mask & ~(1 << col)])
                if sign_pos % 2:
                    term = ring.neg(term)
                acc = term if acc is None else ring.add(acc, term)
                sign_pos += 1
            nxt[mask] = acc
        minors = nxt
    return np.asarray(minors[(1 << n) - 1])


def _masks_of_size(n: int, size: int):
    from itertools import combinations

    for cols in combinations(range(n), size):
        yield sum(1 << c for c in cols)


def mat_adjugate(ring: FiniteCommRing, A) -> np.ndarray:
    A = np.asarray(A)
    n = A.shape[-1]
    if n == 1:
        return np.full(A.shape, ring.one, dtype=np.int64)
    adj = np.zeros(A.shape, dtype=np.int64)
    idx = np.arange(n)
    for i in range(n):
        for j in range(n):
            sub = A[..., idx != i, :][..., :, idx != j]
            d = mat_det(ring, sub)
            if (i + j) % 2:
                d = ring.neg(d)
            adj[..., j, i] = d
    return adj


def mat_inv(ring: FiniteCommRing, A) -> tuple[np.ndarray, np.ndarray]:
    """Batched inverse; returns ``(inverse, invertible_mask)``.

    Rows that are not invertible get an all-zero placeholder.
    """
    A = np.asarray(A)
    det = mat_det(ring, A)
    ok = ring.is_unit(det)
    dinv = np.where(ok, ring._inverse[det], ring.zero)
    adj = mat_adjugate(ring, A)
    inv = ring.mul(adj, dinv[..., None, None])
    inv = np.where(ok[..., None, None], inv, 0)
    return inv, ok


def mat_act(table: np.ndarray, A) -> np.ndarray:
    """Apply an element map (automorphism table) entrywise."""
    return table[np.asarray(A)]


def block_diag(ring: FiniteCommRing, *blocks) -> np.ndarray:
    """Batched block-diagonal matrix of square blocks sharing a batch shape."""
    blocks = [np.asarray(b) for b in blocks]
    batch = np.broadcast_shapes(*(b.shape[:-2] for b in blocks))
    n = sum(b.shape[-1] for b in blocks)
    out = np.zeros(batch + (n, n), dtype=np.int64)
    off = 0
    for b in blocks:
        k = b.shape[-1]
        out[..., off : off + k, off : off + k] = b
        off += k
    return out


def pad_matrix(ring: FiniteCommRing, A, total: int) -> np.ndarray:
    """``diag(A, 1)`` padded up to ``total``."""
    A = np.asarray(A)
    n = A.shape[-1]
    if total < n:
        raise ValueError("cannot pad to a smaller size")
    if total == n:
        return A.copy()
    return block_diag(ring, A, np.broadcast_to(mat_identity(ring, total - n), A.shape[:-2] + (total - n, total - n)))


def gl_order(ring: FiniteCommRing, n: int) -> int:
    """``|GL_n(S)| = |nil|^(n^2) * prod over residue fields of |GL_n(F_q)|``."""
    if ring.is_zero_ring:
        return 1
    nil = ring.nilradical().size
    out = nil ** (n * n)
    for M in ring.maximal_ideals():
        q = ring.size // M.size
        for i in range(n):
            out *= q**n - q**i
    return out


def enumerate_general_linear(ring: FiniteCommRing, n: int, cap: int = 10**6, kind: str = "GL") -> np.ndarray:
    """All invertible ``n x n`` matrices in lexicographic order.

    Built as lifts ``A + N`` of invertible matrices over ``S/nil`` with ``N``
    ranging over matrices with nilpotent entries.  ``kind="SL"`` keeps only
    determinant one.
    """
    total = gl_order(ring, n)
    if total > cap:
        raise CapExceeded(f"|GL_{n}| = {total} exceeds cap {cap}")
    if ring.is_zero_ring:
        return np.zeros((1, n, n), dtype=np.int64)
    reduced, proj = ring.quotient(ring.nilradical())
    rs = reduced.size
    if rs ** (n * n) > 50 * max(cap, 10**6):
        raise CapExceeded(f"search space {rs}^{n*n} over S/nil is too large")
    cand = _all_matrices(rs, n)
    ok = reduced.is_unit(mat_det(reduced, cand))
    base = cand[ok]
    lifts = reduced.lift(base) if reduced is not ring else base
    nil = ring.nilradical().elements
    if len(nil) > 1:
        N = _all_matrices(len(nil), n)
        N = nil[N]
        lifts = ring.add(lifts[:, None], N[None, :]).reshape(-1, n, n)
    if kind == "SL":
        lifts = lifts[mat_det(ring, lifts) == ring.one]
    flat = lifts.reshape(len(lifts), -1)
    order = np.lexsort(flat.T[::-1])
    return lifts[order]


def _all_matrices(base: int, n: int) -> np.ndarray:
    k = n * n
    idx = np.arange(base**k, dtype=np.int64)
    digits = np.stack([(idx // base ** (k - 1 - i)) % base for i in range(k)], axis=-1)
    return digits.reshape(-1, n, n)


@dataclass
class RingMatrix:
    """A square matrix over a finite commutative ring."""

    ring: FiniteCommRing
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.int64)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("RingMatrix must be square")
        if self.entries.size and (self.entries.min() < 0 or self.entries.max() >= self.ring.size):
            raise ValueError("entries are not ring elements")

    @classmethod
    def identity(cls, ring: FiniteCommRing, n: int) -> "RingMatrix":
        return cls(ring, mat_identity(ring, n))

    @classmethod
    def from_ints(cls, ring: FiniteCommRing, rows) -> "RingMatrix":
        return cls(ring, np.array([[ring.from_int(int(x)) for x in row] for row in rows]))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        return RingMatrix(self.ring, mat_mul(self.ring, self.entries, other.entries))

    def __eq__(self, other) -> bool:
        return isinstance(other, RingMatrix) and other.ring is self.ring and np.array_equal(self.entries, other.entries)

    def det(self) -> int:
        return int(mat_det(self.ring, self.entries))

    def is_invertible(self) -> bool:
        return bool(self.ring.is_unit(self.det()))

    def inverse(self) -> "RingMatrix":
        inv, ok = mat_inv(self.ring, self.entries)
        if not ok:
            raise NotInvertible(f"not in GL_{self.n}(S): determinant {self.ring.format(self.det())} is not a unit")
        out = RingMatrix(self.ring, inv)
        assert out @ self == RingMatrix.identity(self.ring, self.n)
        return out

    def format(self) -> list[list[str]]:
        return [[self.ring.format(x) for x in row] for row in self.entries]


def determinant(M: RingMatrix) -> int:
    return M.det()


def invert_matrix(M: RingMatrix) -> RingMatrix:
    return M.inverse()
