"""Finite-ring nonabelian H^1, skew group rings, and lattice cohomology."""

__version__ = "0.1.0"

from .actions import ActionError, RingAction, StarViolation, build_action
from .cohomology import (
    AbstractGGroup,
    CohClass,
    Cocycle,
    add_classes,
    cohomologous,
    congruence_kernel_test,
    det_push,
    enumerate_cocycles,
    h1,
    is_unit,
    matrix_view,
    radical_push,
    stable_equal,
)
from .groups import FiniteGroup, build_group
from .lattice import LatticeAction, h1_cyclic_lattice, h1_lattice, pic_multiplicative
from .rings import build_ring
from .skew import SkewGroupRing, TwistedModule, kernel_oracle

__all__ = [
    "AbstractGGroup",
    "ActionError",
    "CohClass",
    "Cocycle",
    "FiniteGroup",
    "LatticeAction",
    "RingAction",
    "SkewGroupRing",
    "StarViolation",
    "TwistedModule",
    "add_classes",
    "build_action",
    "build_group",
    "build_ring",
    "cohomologous",
    "congruence_kernel_test",
    "det_push",
    "enumerate_cocycles",
    "h1",
    "h1_cyclic_lattice",
    "h1_lattice",
    "is_unit",
    "kernel_oracle",
    "matrix_view",
    "pic_multiplicative",
    "radical_push",
    "stable_equal",
]
