"""Static guards that keep resolution terminating and the axiom set sound.

Three checks: the superclass relation must be a DAG, instance contexts must
be decreasing (occurrence and size restrictions), and instance heads of the
same class must not overlap. Programs passing all three cannot drive the
closure or the simplifier into a loop, and cannot generate family axioms
with unifiable left-hand sides.
"""

from __future__ import annotations

from .diagnostics import (
    CYCLIC_SUPERCLASSES,
    OVERLAPPING_INSTANCES,
    PATERSON_VIOLATION,
    Diagnostic,
)
from .engine import UnifyError, unify
from .surface import ast as s
from .surface.ast import MonoType, TArrow, TCon, TVar
from .surface.pretty import pretty_source


def check_superclass_dag(classes) -> Diagnostic | None:
    """The class -> superclass edge relation must be acyclic; on failure the
    diagnostic carries one witnessing cycle."""
    edges: dict[str, list[str]] = {}
    positions = {}
    for cls in classes:
        edges[cls.name] = [q.cls for q in cls.supers]
        positions[cls.name] = cls.pos

    WHITE, GREY, BLACK = 0, 1, 2
    colour = {name: WHITE for name in edges}
    stack: list[str] = []

    def visit(name: str) -> list[str] | None:
        colour[name] = GREY
        stack.append(name)
        for succ in edges.get(name, ()):
            if succ not in colour:
                continue
            if colour[succ] == GREY:
                cycle = stack[stack.index(succ):] + [succ]
                return cycle
            if colour[succ] == WHITE:
                found = visit(succ)
                if found is not None:
                    return found
        stack.pop()
        colour[name] = BLACK
        return None

    for name in edges:
        if colour[name] == WHITE:
            cycle = visit(name)
            if cycle is not None:
                path = " => ".join(cycle)
                return Diagnostic(
                    CYCLIC_SUPERCLASSES,
                    f"superclass cycle: {path}",
                    positions.get(cycle[0]),
                )
    return None


def type_size(t: MonoType) -> int:
    """Constructors and variable occurrences, counted together; an arrow
    counts as one constructor."""
    match t:
        case TVar(_):
            return 1
        case TArrow(d, c):
            return 1 + type_size(d) + type_size(c)
        case TCon(_, args):
            return 1 + sum(type_size(a) for a in args)
    raise TypeError(f"type_size: unsupported type {t!r}")


def var_occurrences(t: MonoType) -> dict[str, int]:
    counts: dict[str, int] = {}

    def go(ty: MonoType) -> None:
        match ty:
            case TVar(name):
                counts[name] = counts.get(name, 0) + 1
            case TArrow(d, c):
                go(d)
                go(c)
            case TCon(_, args):
                for a in args:
                    go(a)

    go(t)
    return counts


def check_paterson(instance: s.InstanceDecl) -> Diagnostic | None:
    """Decreasing-context conditions for one instance declaration.

    For every context constraint: (i) no variable occurs more often than in
    the head, and (ii) the constraint is strictly smaller than the head.
    The class constructor itself is not counted on either side.
    """
    head_counts = var_occurrences(instance.head)
    head_size = type_size(instance.head)
    for q in instance.context:
        q_counts = var_occurrences(q.arg)
        for var, count in q_counts.items():
            if count > head_counts.get(var, 0):
                return Diagnostic(
                    PATERSON_VIOLATION,
                    f"variable {var!r} occurs {count} time(s) in context "
                    f"constraint {pretty_source(q)!r} but only "
                    f"{head_counts.get(var, 0)} time(s) in the instance head "
                    f"(occurrence condition)",
                    instance.pos,
                )
        if type_size(q.arg) >= head_size:
            return Diagnostic(
                PATERSON_VIOLATION,
                f"context constraint {pretty_source(q)!r} is not smaller "
                f"than the instance head (size condition)",
                instance.pos,
            )
    return None


def check_overlap(instances) -> Diagnostic | None:
    """Reject any two same-class instance heads that unify after freshening
    both quantifier sets."""
    by_class: dict[str, list[s.InstanceDecl]] = {}
    for ins in instances:
        by_class.setdefault(ins.cls, []).append(ins)
    for cls, group in by_class.items():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                first, second = group[i], group[j]
                left = _freshen_head(first, "$l")
                right = _freshen_head(second, "$r")
                try:
                    unify(set(), [(left, right)])
                except UnifyError:
                    continue
                where = ""
                if first.pos is not None and second.pos is not None:
                    where = f" (at {first.pos} and {second.pos})"
                return Diagnostic(
                    OVERLAPPING_INSTANCES,
                    f"overlapping instances for class {cls!r}: "
                    f"{pretty_source(Constraint_(cls, first.head))!r} and "
                    f"{pretty_source(Constraint_(cls, second.head))!r}{where}",
                    second.pos,
                )
    return None


def Constraint_(cls: str, head: MonoType) -> s.Constraint:
    return s.Constraint(cls, head)


def _freshen_head(instance: s.InstanceDecl, prefix: str) -> MonoType:
    mapping = {v: TVar(f"{prefix}{i}") for i, v in enumerate(instance.vars)}
    return s.apply_mono(mapping, instance.head)


def run_guards(classes, instances) -> list[Diagnostic]:
    """All three guards; reports every violation found."""
    diags: list[Diagnostic] = []
    cycle = check_superclass_dag(classes)
    if cycle is not None:
        diags.append(cycle)
    for ins in instances:
        paterson = check_paterson(ins)
        if paterson is not None:
            diags.append(paterson)
    overlap = check_overlap(instances)
    if overlap is not None:
        diags.append(overlap)
    return diags
