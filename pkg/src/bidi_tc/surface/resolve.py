"""Name resolution and static well-formedness for parsed programs.

Resolution runs in two passes around the guard checks:

* `collect_program` builds the class/constructor tables with whole-module
  scope and validates names, arities, and declaration-shape invariants.
  Whole-module scope here is what lets a cyclic superclass graph survive
  long enough to be rejected by the dedicated guard instead of by an
  unbound-name error.
* `check_order` then enforces strict declare-before-use order (the
  pipeline threads its environments left to right) and scope-checks every
  expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..diagnostics import (
    ARITY_MISMATCH,
    DECLARATION_ORDER,
    DUPLICATE_NAME,
    METHOD_MISMATCH,
    RESERVED_NAME,
    UNBOUND_TYVAR,
    UNBOUND_VAR,
    UNKNOWN_CLASS,
    UNKNOWN_TYCON,
    VACUOUS_QUANTIFIER,
    Diagnostic,
    Pos,
)
from . import ast

# Names the elaborator generates for itself; user programs must avoid them
# or the emitted core would contain captures and constructor clashes.
_RESERVED_UPPER = re.compile(r"^(D_|F_|K_|MkTup|Tup[0-9]|MkUnit$|Unit$)")
_RESERVED_LOWER = re.compile(r"^(sc[0-9]+_|d[0-9]+_)")


@dataclass
class ClassInfo:
    name: str
    var: str
    supers: tuple[ast.Constraint, ...]
    method: str
    method_sig: ast.PolyType
    pos: Pos | None
    index: int


@dataclass
class Tables:
    tycons: dict[str, int] = field(default_factory=dict)
    classes: dict[str, ClassInfo] = field(default_factory=dict)
    instances: list[ast.InstanceDecl] = field(default_factory=list)


def collect_program(program: ast.Program) -> tuple[Tables, list[Diagnostic]]:
    tables = Tables()
    diags: list[Diagnostic] = []
    term_names: dict[str, Pos | None] = {}

    def claim_upper(name: str, pos: Pos | None) -> None:
        if _RESERVED_UPPER.match(name):
            diags.append(Diagnostic(RESERVED_NAME, f"name {name!r} is reserved for generated code", pos))
        if name in tables.tycons or name in tables.classes:
            diags.append(Diagnostic(DUPLICATE_NAME, f"duplicate declaration of {name!r}", pos))

    def claim_term(name: str, pos: Pos | None) -> None:
        if _RESERVED_LOWER.match(name):
            diags.append(Diagnostic(RESERVED_NAME, f"name {name!r} is reserved for generated code", pos))
        if name in term_names:
            diags.append(Diagnostic(DUPLICATE_NAME, f"duplicate declaration of {name!r}", pos))
        term_names[name] = pos

    for index, decl in enumerate(program.decls):
        match decl:
            case ast.DataDecl(name, arity, pos):
                claim_upper(name, pos)
                tables.tycons.setdefault(name, arity)
            case ast.ClassDecl(var, supers, name, method, method_sig, pos):
                claim_upper(name, pos)
                claim_term(method, pos)
                if name not in tables.classes:
                    tables.classes[name] = ClassInfo(
                        name, var, supers, method, method_sig, pos, index
                    )
            case ast.InstanceDecl():
                tables.instances.append(decl)
            case ast.PrimDecl(name, _, pos):
                claim_term(name, pos)
            case ast.ValDecl(name, _, _, pos):
                claim_term(name, pos)

    for decl in program.decls:
        diags.extend(_check_decl_shapes(decl, tables))
    return tables, diags


def _check_types_in(node, tables: Tables, pos: Pos | None) -> list[Diagnostic]:
    """Constructor existence/arity and class existence, module-scoped."""
    diags: list[Diagnostic] = []

    def go_mono(t: ast.MonoType) -> None:
        match t:
            case ast.TVar(_):
                pass
            case ast.TArrow(d, c):
                go_mono(d)
                go_mono(c)
            case ast.TCon(name, args):
                if name not in tables.tycons:
                    diags.append(Diagnostic(UNKNOWN_TYCON, f"unknown type constructor {name!r}", pos))
                elif tables.tycons[name] != len(args):
                    diags.append(
                        Diagnostic(
                            ARITY_MISMATCH,
                            f"{name!r} expects {tables.tycons[name]} argument(s), got {len(args)}",
                            pos,
                        )
                    )
                for a in args:
                    go_mono(a)

    def go(n) -> None:
        if isinstance(n, ast.MonoType):
            go_mono(n)
        elif isinstance(n, ast.Constraint):
            if n.cls not in tables.classes:
                diags.append(Diagnostic(UNKNOWN_CLASS, f"unknown class {n.cls!r}", pos))
            go_mono(n.arg)
        elif isinstance(n, ast.QualType):
            for q in n.context:
                go(q)
            go_mono(n.body)
        elif isinstance(n, ast.PolyType):
            go(n.qual)

    go(node)
    return diags


def _check_sigma_scope(
    sigma: ast.PolyType, outer: tuple[str, ...], pos: Pos | None
) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    free = ast.free_tyvars(sigma)
    for v in free:
        if v not in outer:
            diags.append(Diagnostic(UNBOUND_TYVAR, f"unbound type variable {v!r}", pos))
    used = ast.free_tyvars(sigma.qual)
    for v in sigma.vars:
        if v not in used:
            diags.append(
                Diagnostic(
                    VACUOUS_QUANTIFIER,
                    f"quantified variable {v!r} does not occur in the type",
                    pos,
                )
            )
    return diags


def _check_decl_shapes(decl: ast.Decl, tables: Tables) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    match decl:
        case ast.ClassDecl(var, supers, name, _method, method_sig, pos):
            for q in supers:
                diags.extend(_check_types_in(q, tables, pos))
                for v in ast.free_tyvars(q):
                    if v != var:
                        diags.append(
                            Diagnostic(
                                UNBOUND_TYVAR,
                                f"superclass context of {name!r} mentions {v!r}, "
                                f"which is not the class variable",
                                pos,
                            )
                        )
            diags.extend(_check_types_in(method_sig, tables, pos))
            diags.extend(_check_sigma_scope(method_sig, (var,), pos))
        case ast.InstanceDecl(_, context, cls, head, method, _, pos):
            diags.extend(_check_types_in(head, tables, pos))
            for q in context:
                diags.extend(_check_types_in(q, tables, pos))
            if cls not in tables.classes:
                diags.append(Diagnostic(UNKNOWN_CLASS, f"unknown class {cls!r}", pos))
            elif tables.classes[cls].method != method:
                diags.append(
                    Diagnostic(
                        METHOD_MISMATCH,
                        f"instance defines {method!r} but class {cls!r} "
                        f"declares method {tables.classes[cls].method!r}",
                        pos,
                    )
                )
        case ast.PrimDecl(_, sig, pos):
            diags.extend(_check_types_in(sig, tables, pos))
            diags.extend(_check_sigma_scope(sig, (), pos))
        case ast.ValDecl(_, sig, _, pos):
            if sig is not None:
                diags.extend(_check_types_in(sig, tables, pos))
                diags.extend(_check_sigma_scope(sig, (), pos))
    return diags


def check_order(program: ast.Program, tables: Tables) -> list[Diagnostic]:
    """Declare-before-use ordering plus expression scope checking."""
    diags: list[Diagnostic] = []
    seen_tycons: set[str] = set()
    seen_classes: set[str] = set()
    seen_terms: set[str] = set()

    def check_type_order(node, pos: Pos | None) -> None:
        def go_mono(t: ast.MonoType) -> None:
            match t:
                case ast.TCon(name, args):
                    if name in tables.tycons and name not in seen_tycons:
                        diags.append(
                            Diagnostic(
                                DECLARATION_ORDER,
                                f"type constructor {name!r} used before its declaration",
                                pos,
                            )
                        )
                    for a in args:
                        go_mono(a)
                case ast.TArrow(d, c):
                    go_mono(d)
                    go_mono(c)
                case _:
                    pass

        if isinstance(node, ast.MonoType):
            go_mono(node)
        elif isinstance(node, ast.Constraint):
            if node.cls in tables.classes and node.cls not in seen_classes:
                diags.append(
                    Diagnostic(
                        DECLARATION_ORDER,
                        f"class {node.cls!r} used before its declaration",
                        pos,
                    )
                )
            go_mono(node.arg)
        elif isinstance(node, ast.QualType):
            for q in node.context:
                check_type_order(q, pos)
            go_mono(node.body)
        elif isinstance(node, ast.PolyType):
            check_type_order(node.qual, pos)

    def check_expr(e: ast.Expr, scope: frozenset[str]) -> None:
        match e:
            case ast.EVar(name, pos):
                if name not in scope and name not in seen_terms:
                    diags.append(Diagnostic(UNBOUND_VAR, f"unbound variable {name!r}", pos))
            case ast.ELam(binder, body):
                check_expr(body, scope | {binder})
            case ast.EApp(fn, arg):
                check_expr(fn, scope)
                check_expr(arg, scope)
            case ast.ELet(binder, bound, body):
                inner = scope | {binder}
                check_expr(bound, inner)
                check_expr(body, inner)

    for decl in program.decls:
        match decl:
            case ast.DataDecl(name, _, _):
                seen_tycons.add(name)
            case ast.ClassDecl(_, supers, name, method, method_sig, pos):
                for q in supers:
                    check_type_order(q, pos)
                check_type_order(method_sig, pos)
                seen_classes.add(name)
                seen_terms.add(method)
            case ast.InstanceDecl(_, context, cls, head, _, body, pos):
                if cls in tables.classes and cls not in seen_classes:
                    diags.append(
                        Diagnostic(
                            DECLARATION_ORDER,
                            f"class {cls!r} used before its declaration",
                            pos,
                        )
                    )
                check_type_order(head, pos)
                for q in context:
                    check_type_order(q, pos)
                check_expr(body, frozenset())
            case ast.PrimDecl(name, sig, pos):
                check_type_order(sig, pos)
                seen_terms.add(name)
            case ast.ValDecl(name, sig, body, pos):
                if sig is not None:
                    check_type_order(sig, pos)
                check_expr(body, frozenset({name}))
                seen_terms.add(name)
    return diags


def resolve_program(program: ast.Program) -> tuple[Tables, list[Diagnostic]]:
    """Full resolution (both passes), for callers that do not interleave guards."""
    tables, diags = collect_program(program)
    if not diags:
        diags = check_order(program, tables)
    return tables, diags
