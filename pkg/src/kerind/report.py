"""Command execution and deterministic reports (schema ``kerind-report/1``)."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from .actions import ActionError
from .cohomology import (
    CapExceeded,
    CohClass,
    Undetermined,
    congruence_kernel_test,
    is_unit,
    is_unit_abstract,
    matrix_view,
    radical_push,
    rho_maximal,
    rho_subgroup,
)
from .lattice import describe
from .scenario import Scenario, Task
from .skew import SkewGroupRing, kernel_oracle

SCHEMA = "kerind-report/1"


class AssertionFailure(Exception):
    """An executed check produced a result contradicting the theory."""


@dataclass
class TaskResult:
    index: int
    command: str
    status: str  # "ok" | "failed" | "cap-exceeded" | "error"
    result: dict = field(default_factory=dict)
    message: str = ""

    def to_json(self) -> dict:
        out = {"index": self.index, "command": self.command, "status": self.status, "result": self.result}
        if self.message:
            out["message"] = self.message
        return out


@dataclass
class Report:
    scenario: dict
    tasks: list[TaskResult]
    wall_clock: float = 0.0
    version: str = __version__

    @property
    def ok(self) -> bool:
        return all(t.status in ("ok", "cap-exceeded") for t in self.tasks)

    def canonical(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": self.version,
            "scenario": self.scenario,
            "tasks": [t.to_json() for t in self.tasks],
        }

    @property
    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self) -> dict:
        out = self.canonical()
        out["digest"] = self.digest
        out["wall_clock_seconds"] = round(self.wall_clock, 3)
        return out

    def table(self) -> str:
        lines = [f"scenario {self.scenario.get('name')}  ({self.scenario.get('kind')})"]
        for t in self.tasks:
            lines.append(f"  [{t.index}] {t.command:<15} {t.status:<13} {_headline(t)}")
        lines.append(f"digest {self.digest}")
        return "\n".join(lines)


def _headline(t: TaskResult) -> str:
    r = t.result
    if t.message:
        return t.message
    if "levels" in r:
        parts = []
        for lv in r["levels"]:
            bits = [f"n={lv['n']}"]
            for key in ("classes", "unit_classes", "agree", "disagreements"):
                if key in lv:
                    val = lv[key]
                    bits.append(f"{key}={len(val) if isinstance(val, list) else val}")
            parts.append(" ".join(bits))
        return "; ".join(parts)
    bits = [f"{k}={_group_text(v)}" for k, v in r.items() if isinstance(v, dict) and "invariant_factors" in v]
    if "cyclic" in r:
        bits.append(f"subgroups={len(r['subgroups'])} mono={all(c['mono'] for c in r['cyclic'])}")
    return ", ".join(bits)


def _group_text(g: dict) -> str:
    parts = [f"Z/{d}" for d in g["invariant_factors"]] + ["Z"] * g.get("free_rank", 0)
    return " x ".join(parts) if parts else "0"


# ----------------------------------------------------------------------------
# ring commands


def _classes(sc: Scenario, n: int, cap: int) -> list[CohClass]:
    if sc.kind == "abstract":
        return sc.coefficients.h1(cap)
    return matrix_view(sc.action, n).h1(cap)


def _class_json(i: int, a: CohClass) -> dict:
    return {"index": i, "neutral": a.is_neutral(), **a.format()}


def cmd_h1(sc: Scenario, task: Task, seed: int) -> dict:
    if sc.kind == "lattice":
        return {"h1": describe(sc.lattice.h1())}
    levels = [1] if sc.kind == "abstract" else task.levels
    out = []
    for n in levels:
        cl = _classes(sc, n, task.cap)
        out.append({"n": n, "classes": [_class_json(i, a) for i, a in enumerate(cl)]})
    return {"levels": out}


def cmd_kernel(sc: Scenario, task: Task, seed: int) -> dict:
    _need_coefficients(sc)
    out = []
    failures = []
    levels = [1] if sc.kind == "abstract" else task.levels
    for n in levels:
        rows = []
        for i, a in enumerate(_classes(sc, n, task.cap)):
            if sc.kind == "abstract":
                v = is_unit_abstract(a, task.cap)
            else:
                v = is_unit(a, task.bound, task.cap)
            row = {"index": i, "neutral": a.is_neutral(), "congruence": v.congruence, "search": v.search}
            if v.inverse_level is not None:
                row["inverse_level"] = v.inverse_level
            if sc.kind == "ring" and sc.action.ring.nilradical().size > 1:
                row["radical_push_neutral"] = radical_push(a, task.cap).is_neutral()
                # the reduction lemma assumes an element of trace one
                if row["radical_push_neutral"] and not row["neutral"] and sc.action.has_star:
                    failures.append(f"n={n} class {i}: nontrivial class in the kernel of radical_push")
            if not v.consistent:
                failures.append(f"n={n} class {i}: congruence and inverse search disagree")
            rows.append(row)
        units = [r["index"] for r in rows if r["search"] == "unit" or (r["congruence"] and r["search"] != "not-unit-up-to-bound")]
        out.append({"n": n, "classes": rows, "unit_classes": units})
    res = {"levels": out}
    if failures:
        raise AssertionFailure("; ".join(failures), res)
    return res


def cmd_oracle(sc: Scenario, task: Task, seed: int) -> dict:
    _need_ring(sc)
    out = []
    for n in task.levels:
        rows = []
        for i, a in enumerate(_classes(sc, n, task.cap)):
            v = kernel_oracle(sc.action, a.rep.values)
            rows.append({"index": i, "in_kernel": v.pi_equals_p, **v.to_json()})
        out.append({"n": n, "classes": rows})
    return {"levels": out}


def agreement_row(a: CohClass, bound: int, cap: int, unit_search: bool = True) -> dict:
    """Every kernel criterion for one class, with the agreement verdict."""
    act = a.view.action
    cong = congruence_kernel_test(a)
    rho_h = all(rho_subgroup(a, H, cap).is_neutral(cap) for H in act.group.subgroups())
    maxes = act.ring.maximal_ideals()
    rho_t = all(rho_maximal(a, M, "inertia", cap).is_neutral(cap) for M in maxes)
    rho_z = all(rho_maximal(a, M, "decomposition", cap).is_neutral(cap) for M in maxes)
    orc = kernel_oracle(act, a.rep.values)
    row: dict[str, Any] = {
        "congruence": cong,
        "rho_subgroups": rho_h,
        "rho_inertia": rho_t,
        "rho_decomposition": rho_z,
        "pi_equals_p": orc.pi_equals_p,
        "fiber": orc.fiber,
        "span": orc.span,
    }
    verdicts = [cong, rho_h, rho_t, rho_z, orc.pi_equals_p, orc.fiber]
    if unit_search:
        v = is_unit(a, bound, cap)
        row["unit_search"] = v.search
        if v.search != "undetermined":
            verdicts.append(v.search == "unit")
    agree = len(set(verdicts)) == 1 and (orc.span or not orc.pi_equals_p)
    row["span_without_pi"] = bool(orc.span and not orc.pi_equals_p)
    row["agree"] = agree
    return row


def _idempotent(T: SkewGroupRing) -> bool:
    try:
        e = T.trace_idempotent()
    except ActionError:
        return False
    return bool(np.array_equal(T.multiply(e, e), e))


def cmd_verify_theorem(sc: Scenario, task: Task, seed: int) -> dict:
    _need_ring(sc)
    act = sc.action
    if not act.has_star:
        raise ActionError("verify-theorem needs an element of trace 1")
    rng = np.random.default_rng(seed)
    T = SkewGroupRing(act)
    skew = {
        "associativity": T.check_associativity(rng, 500),
        "identity": T.check_identity(rng),
        "txt_equals_t": T.txt_equals_t(),
        "idempotent": _idempotent(T),
        "et_iso": T.check_et_iso(),
    }
    out = []
    failures = [k for k, v in skew.items() if not v]
    for n in task.levels:
        classes = _classes(sc, n, task.cap)
        rows = []
        for i, a in enumerate(classes):
            row = {"index": i, "neutral": a.is_neutral(), **agreement_row(a, task.bound, task.cap, unit_search=n == 1)}
            rows.append(row)
            if not row["agree"]:
                failures.append(f"n={n} class {i}")
            if row["congruence"] and not row["neutral"]:
                failures.append(f"n={n} class {i}: nontrivial class passes the congruence test in Krull dimension 0")
        bad = [r["index"] for r in rows if not r["agree"]]
        out.append({"n": n, "classes": rows, "agree": not bad, "disagreements": bad})
    res = {"skew_ring": skew, "levels": out}
    if failures:
        raise AssertionFailure("agreement failed: " + ", ".join(failures), res)
    return res


# ----------------------------------------------------------------------------
# lattice commands


def cmd_pic(sc: Scenario, task: Task, seed: int) -> dict:
    _need_lattice(sc)
    L = sc.lattice
    h = L.h1()
    p = L.pic()
    res = {"h1": describe(h), "pic": describe(p)}
    if h.order % p.order:
        raise AssertionFailure("Pic is not a subgroup of H^1", res)
    return res


def cmd_coinvariants(sc: Scenario, task: Task, seed: int) -> dict:
    _need_lattice(sc)
    L = sc.lattice
    G = L.group
    subgroups = []
    failures = []
    for H in G.subgroups():
        co = L.coinvariants(H)
        entry = {"elements": list(H.elements), **co.to_json()}
        if not co.torsion_exponent_ok():
            failures.append(f"torsion of A_H not annihilated for H={list(H.elements)}")
        subgroups.append(entry)
    cyclic = []
    for C in G.cyclic_subgroups():
        c = C.generator()
        direct = L.cyclic_h1(c).invariant_factors
        restricted = L.restrict(C).h1().invariant_factors
        mono = L.mono_check(c)
        cyclic.append({"generator": c, "order": C.order, "cyclic_h1": list(direct), "restricted_h1": list(restricted), "mono": mono})
        if direct != restricted:
            failures.append(f"cyclic formula disagrees on <{c}>")
        if not mono:
            failures.append(f"H^1(C, A) -> H^1(C, A_C) not injective on <{c}>")
    res = {"subgroups": subgroups, "cyclic": cyclic}
    if failures:
        raise AssertionFailure("; ".join(failures), res)
    return res


# ----------------------------------------------------------------------------

COMMAND_TABLE: dict[str, Callable[[Scenario, Task, int], dict]] = {
    "h1": cmd_h1,
    "kernel": cmd_kernel,
    "oracle": cmd_oracle,
    "verify-theorem": cmd_verify_theorem,
    "pic": cmd_pic,
    "coinvariants": cmd_coinvariants,
}

APPLICABLE = {
    "ring": ("h1", "kernel", "oracle", "verify-theorem"),
    "abstract": ("h1", "kernel"),
    "lattice": ("h1", "pic", "coinvariants"),
}


def _need_ring(sc: Scenario) -> None:
    if sc.kind != "ring":
        raise ActionError("command needs a ring scenario")


def _need_coefficients(sc: Scenario) -> None:
    if sc.kind == "lattice":
        raise ActionError("command needs a ring or abstract scenario")


def _need_lattice(sc: Scenario) -> None:
    if sc.kind != "lattice":
        raise ActionError("command needs a lattice scenario")


def _expand(sc: Scenario, task: Task) -> list[Task]:
    if task.command != "all":
        return [task]
    cmds = list(APPLICABLE[sc.kind])
    if sc.kind == "ring" and not sc.action.has_star:
        cmds = ["h1", "kernel"]
    return [Task(c, task.levels, task.cap, task.bound) for c in cmds]


def run_task(sc: Scenario, task: Task, index: int, seed: int = 0) -> TaskResult:
    try:
        return TaskResult(index, task.command, "ok", COMMAND_TABLE[task.command](sc, task, seed))
    except AssertionFailure as exc:
        msg, res = exc.args if len(exc.args) == 2 else (exc.args[0], {})
        return TaskResult(index, task.command, "failed", res, msg)
    except (CapExceeded, Undetermined) as exc:
        return TaskResult(index, task.command, "cap-exceeded", {}, str(exc))
    except (ActionError, ValueError, TypeError) as exc:
        return TaskResult(index, task.command, "error", {}, str(exc))


def run(sc: Scenario, command: str | None = None, levels: list[int] | None = None, cap: int | None = None,
        bound: int | None = None, seed: int = 0) -> Report:
    """Execute the scenario's tasks (or a single ``command``) and build a report.

    Tasks run in order; results keep their task index so the report is the
    same however they are scheduled.
    """
    start = time.perf_counter()
    tasks = [Task(command)] if command else list(sc.tasks)
    queue: list[Task] = []
    for t in tasks:
        t = Task(t.command, levels or t.levels, cap or t.cap, bound or t.bound)
        queue.extend(_expand(sc, t))
    results = [run_task(sc, t, i, seed) for i, t in enumerate(queue)]
    return Report(sc.summary(), results, time.perf_counter() - start)
