"""Scenario files (YAML, schema ``kerind-scenario/1``).

A scenario names one coefficient setting and a list of tasks::

    schema: kerind-scenario/1
    name: f4-frobenius
    ring: F4
    group: C2
    action:
      generators: [frobenius]
    require_star: true
    tasks:
      - command: h1
        n: [1, 2]

Instead of ``ring``/``action`` a scenario may carry ``coefficients`` (an
abstract finite group with a ``G``-action) or ``lattice`` (integer generator
matrices acting on row vectors).  See the README for every key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .actions import ActionError, RingAction, generator_table
from .cohomology import DEFAULT_BOUND, DEFAULT_CAP, AbstractGGroup
from .groups import FiniteGroup, GroupError, build_group, from_permutations
from .lattice import LatticeAction, LatticeError
from .rings import RingError, build_ring

SCHEMA = "kerind-scenario/1"
COMMANDS = ("h1", "kernel", "oracle", "verify-theorem", "pic", "coinvariants", "all")
_TOP_KEYS = {"schema", "name", "description", "ring", "group", "action", "require_star", "coefficients", "lattice", "tasks"}
_TASK_KEYS = {"command", "n", "cap", "bound"}


class ScenarioError(ValueError):
    """Parse or validation failure; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


@dataclass
class Task:
    command: str
    levels: list[int] = field(default_factory=lambda: [1])
    cap: int = DEFAULT_CAP
    bound: int = DEFAULT_BOUND

    def to_json(self) -> dict:
        return {"command": self.command, "n": self.levels, "cap": self.cap, "bound": self.bound}


@dataclass
class Scenario:
    name: str
    kind: str  # "ring" | "abstract" | "lattice"
    group: FiniteGroup | None
    tasks: list[Task]
    action: RingAction | None = None
    coefficients: AbstractGGroup | None = None
    lattice: LatticeAction | None = None
    require_star: bool = True
    source: dict = field(default_factory=dict, repr=False)

    def summary(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "kind": self.kind}
        if self.group is not None:
            out["group_order"] = self.group.order
        if self.action is not None:
            out["ring"] = self.action.ring.name
            out["ring_size"] = self.action.ring.size
            out["star"] = self.action.has_star
        if self.coefficients is not None:
            out["coefficient_order"] = self.coefficients.X.order
        if self.lattice is not None:
            out["rank"] = self.lattice.rank
        return out


def _mark(node) -> tuple[int | None, int | None]:
    m = getattr(node, "start_mark", None)
    return (m.line + 1, m.column + 1) if m is not None else (None, None)


def _locate(root, path: list) -> tuple[int | None, int | None]:
    """Line/column of the YAML node at ``path`` (best effort)."""
    node = root
    for key in path:
        if isinstance(node, yaml.MappingNode):
            hit = next((v for k, v in node.value if k.value == key), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            hit = node.value[key]
        else:
            hit = None
        if hit is None:
            break
        node = hit
    return _mark(node)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario text."""
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line, col = (mark.line + 1, mark.column + 1) if mark is not None else (None, None)
        raise ScenarioError(f"parse error: {getattr(exc, 'problem', exc)}", line, col) from None
    if data is None:
        raise ScenarioError("empty scenario")
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a mapping", *_mark(root))

    def fail(msg: str, *path):
        raise ScenarioError(msg, *_locate(root, list(path)))

    unknown = set(data) - _TOP_KEYS
    if unknown:
        fail(f"unknown keys {sorted(unknown)}", sorted(unknown)[0])
    schema = data.get("schema", SCHEMA)
    if schema != SCHEMA:
        fail(f"unsupported schema {schema!r}", "schema")
    name = data.get("name")
    if not name:
        fail("scenario needs a name")
    tasks = _parse_tasks(data.get("tasks") or [], fail)
    try:
        return _build(str(name), data, tasks, fail)
    except ScenarioError:
        raise
    except (RingError, GroupError, ActionError, LatticeError) as exc:
        raise ScenarioError(f"validation error: {exc}") from None


def _parse_tasks(raw, fail) -> list[Task]:
    if not isinstance(raw, list):
        fail("tasks must be a list", "tasks")
    out = []
    for i, t in enumerate(raw):
        if isinstance(t, str):
            t = {"command": t}
        if not isinstance(t, dict):
            fail("task must be a mapping or a command name", "tasks", i)
        unknown = set(t) - _TASK_KEYS
        if unknown:
            fail(f"unknown task keys {sorted(unknown)}", "tasks", i)
        cmd = t.get("command")
        if cmd not in COMMANDS:
            fail(f"unknown command {cmd!r}", "tasks", i, "command")
        levels = t.get("n", [1])
        levels = [levels] if isinstance(levels, int) else list(levels)
        if not levels or any(not isinstance(n, int) or n < 1 for n in levels):
            fail("levels must be positive integers", "tasks", i, "n")
        cap = t.get("cap", DEFAULT_CAP)
        bound = t.get("bound", DEFAULT_BOUND)
        if not isinstance(cap, int) or cap <= 0:
            fail("cap must be positive", "tasks", i, "cap")
        if not isinstance(bound, int) or bound <= 0:
            fail("bound must be positive", "tasks", i, "bound")
        out.append(Task(cmd, levels, cap, bound))
    return out


def _build(name: str, data: dict, tasks: list[Task], fail) -> Scenario:
    kinds = [k for k in ("ring", "coefficients", "lattice") if k in data]
    if len(kinds) != 1:
        fail("exactly one of ring, coefficients, lattice is required")
    kind = kinds[0]
    if kind == "lattice":
        lat = data["lattice"]
        if not isinstance(lat, dict) or "generators" not in lat:
            fail("lattice needs generators", "lattice")
        act = LatticeAction.from_generators(lat["generators"], name=name)
        if "group" in data and build_group(data["group"]).order != act.group.order:
            fail("lattice generators do not generate a group of the stated order", "group")
        return Scenario(name, "lattice", act.group, tasks, lattice=act, source=data)

    if "group" not in data:
        fail("scenario needs a group")
    group = build_group(data["group"])
    if kind == "coefficients":
        coeff = _build_abstract(group, data["coefficients"], fail)
        return Scenario(name, "abstract", group, tasks, coefficients=coeff, require_star=False, source=data)

    ring = build_ring(str(data["ring"]))
    rules = (data.get("action") or {}).get("generators", ["identity"] * len(group.generators))
    if len(rules) != len(group.generators):
        fail(f"need {len(group.generators)} generator rules, got {len(rules)}", "action", "generators")
    tables = [generator_table(ring, r) for r in rules]
    star = bool(data.get("require_star", True))
    action = RingAction(ring, group, tables, require_star=star, name=name)
    return Scenario(name, "ring", group, tasks, action=action, require_star=star, source=data)


def _build_abstract(group: FiniteGroup, spec, fail) -> AbstractGGroup:
    if not isinstance(spec, dict) or "group" not in spec:
        fail("coefficients need a group", "coefficients")
    gspec = spec["group"]
    if isinstance(gspec, dict) and "permutations" in gspec:
        X, _ = from_permutations(gspec["permutations"])
    else:
        X = build_group(gspec)
    act = spec.get("action", "trivial")
    if act == "trivial":
        return AbstractGGroup(group, X.table, name=str(gspec))
    if not isinstance(act, dict) or "generators" not in act:
        fail("coefficient action must be 'trivial' or carry generator tables", "coefficients", "action")
    gens = [np.asarray(t, dtype=np.int64) for t in act["generators"]]
    if len(gens) != len(group.generators):
        fail("one automorphism table per group generator", "coefficients", "action")
    tables = np.zeros((group.order, X.order), dtype=np.int64)
    tables[0] = np.arange(X.order)
    for parent, k, child in group.words():
        tables[child] = gens[k][tables[parent]]
    return AbstractGGroup(group, X.table, tables, name=str(gspec))


def load_scenario(path_or_name: str | Path) -> Scenario:
    """Load a scenario from a path or a bundled fixture name."""
    p = Path(path_or_name)
    if not p.exists():
        p = fixture_path(str(path_or_name))
    return parse_scenario(p.read_text())


def fixture_dir() -> Path:
    return Path(str(resources.files("kerind") / "fixtures"))


def fixture_path(name: str) -> Path:
    base = fixture_dir()
    for cand in (base / name, base / f"{name}.yaml"):
        if cand.exists():
            return cand
    raise ScenarioError(f"no scenario file or fixture named {name!r}")


def list_fixtures() -> list[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.yaml"))
