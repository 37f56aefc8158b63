"""Independent type checker for core programs.

This is the pipeline's soundness oracle: everything the elaborator emits is
re-checked here, from scratch, with no type inference. Types are compared
with alpha-equality only; type families are never reduced by the checker,
so two family applications are equal exactly when an explicit coercion says
so. Every error names the typing rule that failed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import core
from .core import (
    Alt,
    Case,
    Cast,
    CoApp,
    CoApplied,
    CoAx,
    CoFam,
    CoForall,
    CoInst,
    CoLam,
    CoLeft,
    CoQInst,
    CoQual,
    CoRefl,
    CoRight,
    CoSym,
    CoTrans,
    CoVar,
    Coercion,
    Con,
    CoreAxiom,
    CoreData,
    CoreFamily,
    CorePrim,
    CoreProgram,
    CoreTerm,
    CoreType,
    CoreValue,
    CTApp,
    CTCon,
    CTFam,
    CTForall,
    CTQual,
    CTVar,
    Lam,
    Let,
    Lit,
    Prop,
    TmApp,
    TyApp,
    TyLam,
    Var,
    alpha_eq,
    dump_coercion,
    dump_term,
    dump_type,
)

LIT_TYPES = {bool: "Bool", int: "Int"}


class FcTypeError(Exception):
    """Core-level type error, tagged with the violated rule."""

    def __init__(self, rule: str, message: str):
        super().__init__(f"[{rule}] {message}")
        self.rule = rule
        self.message = message


@dataclass(frozen=True)
class CoreEnv:
    """Core typing environment; extension is persistent, lookup innermost."""

    tyvars: frozenset[str] = frozenset()
    terms: dict[str, CoreType] = field(default_factory=dict)
    tycons: dict[str, int] = field(default_factory=lambda: {core.ARROW_CON: 2})
    datacons: dict[str, tuple[str, CoreType]] = field(default_factory=dict)
    covars: dict[str, Prop] = field(default_factory=dict)
    axioms: dict[str, tuple[tuple[str, ...], Prop]] = field(default_factory=dict)
    families: dict[str, int] = field(default_factory=dict)

    def add_tyvar(self, name: str) -> CoreEnv:
        return replace(self, tyvars=self.tyvars | {name})

    def add_tyvars(self, names) -> CoreEnv:
        return replace(self, tyvars=self.tyvars | frozenset(names))

    def add_term(self, name: str, ty: CoreType) -> CoreEnv:
        return replace(self, terms={**self.terms, name: ty})

    def add_tycon(self, name: str, params: int) -> CoreEnv:
        return replace(self, tycons={**self.tycons, name: params})

    def add_datacon(self, name: str, parent: str, ty: CoreType) -> CoreEnv:
        return replace(self, datacons={**self.datacons, name: (parent, ty)})

    def add_covar(self, name: str, prop: Prop) -> CoreEnv:
        return replace(self, covars={**self.covars, name: prop})

    def add_axiom(self, name: str, params: tuple[str, ...], prop: Prop) -> CoreEnv:
        return replace(self, axioms={**self.axioms, name: (params, prop)})

    def add_family(self, name: str, arity: int) -> CoreEnv:
        return replace(self, families={**self.families, name: arity})


# --------------------------------------------------------------------------
# Type and proposition well-formedness


def check_type(env: CoreEnv, t: CoreType) -> None:
    match t:
        case CTVar(name):
            if name not in env.tyvars:
                raise FcTypeError("TyVar", f"unbound type variable {name!r}")
        case CTCon(name):
            if name not in env.tycons:
                raise FcTypeError("TyCon", f"unknown type constructor {name!r}")
        case CTApp(fn, arg):
            check_type(env, fn)
            check_type(env, arg)
        case CTForall(var, body):
            check_type(env.add_tyvar(var), body)
        case CTFam(fam, args):
            arity = env.families.get(fam)
            if arity is None:
                raise FcTypeError("TyFam", f"unknown type family {fam!r}")
            if arity != len(args):
                raise FcTypeError(
                    "TyFam",
                    f"family {fam!r} expects {arity} argument(s), got {len(args)}",
                )
            for a in args:
                check_type(env, a)
        case CTQual(prop, body):
            check_prop(env, prop)
            check_type(env, body)
        case _:
            raise FcTypeError("TyVar", f"malformed type {t!r}")


def check_prop(env: CoreEnv, p: Prop) -> None:
    check_type(env, p.left)
    check_type(env, p.right)


# --------------------------------------------------------------------------
# Coercion typing


def check_coercion(env: CoreEnv, co: Coercion) -> Prop:
    match co:
        case CoVar(name):
            prop = env.covars.get(name)
            if prop is None:
                raise FcTypeError("CoVar", f"unbound coercion variable {name!r}")
            return prop
        case CoAx(name, args):
            entry = env.axioms.get(name)
            if entry is None:
                raise FcTypeError("CoAx", f"unknown axiom {name!r}")
            params, prop = entry
            if len(params) != len(args):
                raise FcTypeError(
                    "CoAx",
                    f"axiom {name!r} expects {len(params)} argument(s), "
                    f"got {len(args)}",
                )
            for a in args:
                check_type(env, a)
            mapping = dict(zip(params, args))
            return core.subst_prop(mapping, prop)
        case CoRefl(ty):
            check_type(env, ty)
            return Prop(ty, ty)
        case CoSym(inner):
            p = check_coercion(env, inner)
            return Prop(p.right, p.left)
        case CoTrans(first, second):
            p1 = check_coercion(env, first)
            p2 = check_coercion(env, second)
            if not alpha_eq(p1.right, p2.left):
                raise FcTypeError(
                    "CoTrans",
                    f"middle types differ: {dump_type(p1.right)} "
                    f"vs {dump_type(p2.left)}",
                )
            return Prop(p1.left, p2.right)
        case CoApp(fn, arg):
            p1 = check_coercion(env, fn)
            p2 = check_coercion(env, arg)
            check_type(env, CTApp(p1.left, p2.left))
            return Prop(CTApp(p1.left, p2.left), CTApp(p1.right, p2.right))
        case CoLeft(inner):
            p = check_coercion(env, inner)
            if not (isinstance(p.left, CTApp) and isinstance(p.right, CTApp)):
                raise FcTypeError(
                    "CoL", f"operand does not relate type applications: {p}"
                )
            return Prop(p.left.fn, p.right.fn)
        case CoRight(inner):
            p = check_coercion(env, inner)
            if not (isinstance(p.left, CTApp) and isinstance(p.right, CTApp)):
                raise FcTypeError(
                    "CoR", f"operand does not relate type applications: {p}"
                )
            return Prop(p.left.arg, p.right.arg)
        case CoFam(fam, args):
            arity = env.families.get(fam)
            if arity is None:
                raise FcTypeError("CoFam", f"unknown type family {fam!r}")
            if arity != len(args):
                raise FcTypeError(
                    "CoFam",
                    f"family {fam!r} expects {arity} coercion(s), got {len(args)}",
                )
            props = [check_coercion(env, a) for a in args]
            return Prop(
                CTFam(fam, tuple(p.left for p in props)),
                CTFam(fam, tuple(p.right for p in props)),
            )
        case CoForall(var, inner):
            p = check_coercion(env.add_tyvar(var), inner)
            return Prop(CTForall(var, p.left), CTForall(var, p.right))
        case CoInst(fn, arg):
            p1 = check_coercion(env, fn)
            if not (isinstance(p1.left, CTForall) and isinstance(p1.right, CTForall)):
                raise FcTypeError(
                    "CoIns", f"operand does not relate quantified types: {p1}"
                )
            p2 = check_coercion(env, arg)
            check_type(env, p2.left)
            return Prop(
                core.subst_type({p1.left.var: p2.left}, p1.left.body),
                core.subst_type({p1.right.var: p2.right}, p1.right.body),
            )
        case CoQual(prop, inner):
            check_prop(env, prop)
            p = check_coercion(env, inner)
            return Prop(CTQual(prop, p.left), CTQual(prop, p.right))
        case CoQInst(fn, arg):
            p1 = check_coercion(env, fn)
            if not (isinstance(p1.left, CTQual) and isinstance(p1.right, CTQual)):
                raise FcTypeError(
                    "CoQInst", f"operand does not relate qualified types: {p1}"
                )
            if not alpha_eq(p1.left.prop, p1.right.prop):
                raise FcTypeError(
                    "CoQInst", "qualified sides carry different propositions"
                )
            p2 = check_coercion(env, arg)
            if not alpha_eq(p2, p1.left.prop):
                raise FcTypeError(
                    "CoQInst",
                    f"argument proves {dump_type(p2.left)} ~ {dump_type(p2.right)}, "
                    f"which is not the qualifying proposition",
                )
            return Prop(p1.left.body, p1.right.body)
    raise FcTypeError("CoVar", f"malformed coercion {co!r}")


# --------------------------------------------------------------------------
# Term typing


def check_term(env: CoreEnv, t: CoreTerm) -> CoreType:
    match t:
        case Var(name):
            ty = env.terms.get(name)
            if ty is None:
                raise FcTypeError("TmVar", f"unbound variable {name!r}")
            return ty
        case Con(name):
            entry = env.datacons.get(name)
            if entry is None:
                raise FcTypeError("TmCon", f"unknown data constructor {name!r}")
            return entry[1]
        case Lit(value):
            tycon = LIT_TYPES.get(type(value))
            if tycon is None:
                raise FcTypeError("TmLit", f"unsupported literal {value!r}")
            if tycon not in env.tycons:
                raise FcTypeError(
                    "TmLit", f"literal type {tycon!r} is not declared"
                )
            return CTCon(tycon)
        case TyLam(var, body):
            inner = check_term(env.add_tyvar(var), body)
            return CTForall(var, inner)
        case TyApp(fn, ty):
            fn_ty = check_term(env, fn)
            if not isinstance(fn_ty, CTForall):
                raise FcTypeError(
                    "TmTyApp",
                    f"type application of non-quantified type {dump_type(fn_ty)}",
                )
            check_type(env, ty)
            return core.subst_type({fn_ty.var: ty}, fn_ty.body)
        case Lam(var, ty, body):
            check_type(env, ty)
            body_ty = check_term(env.add_term(var, ty), body)
            return core.arrow(ty, body_ty)
        case TmApp(fn, arg):
            fn_ty = check_term(env, fn)
            split = core.split_arrow(fn_ty)
            if split is None:
                raise FcTypeError(
                    "TmApp", f"application of non-function type {dump_type(fn_ty)}"
                )
            expected, result = split
            actual = check_term(env, arg)
            if not alpha_eq(expected, actual):
                raise FcTypeError(
                    "TmApp",
                    f"argument type mismatch: expected {dump_type(expected)}, "
                    f"got {dump_type(actual)} in {dump_term(t)}",
                )
            return result
        case CoLam(var, prop, body):
            check_prop(env, prop)
            body_ty = check_term(env.add_covar(var, prop), body)
            return CTQual(prop, body_ty)
        case CoApplied(fn, co):
            fn_ty = check_term(env, fn)
            if not isinstance(fn_ty, CTQual):
                raise FcTypeError(
                    "TmCoApp",
                    f"coercion application of non-qualified type {dump_type(fn_ty)}",
                )
            proved = check_coercion(env, co)
            if not alpha_eq(proved, fn_ty.prop):
                raise FcTypeError(
                    "TmCoApp", "coercion does not prove the qualifying proposition"
                )
            return fn_ty.body
        case Cast(term, co):
            term_ty = check_term(env, term)
            prop = check_coercion(env, co)
            if not alpha_eq(prop.left, term_ty):
                raise FcTypeError(
                    "TmCast",
                    f"cast of {dump_type(term_ty)} by a proof of "
                    f"{dump_type(prop.left)} ~ {dump_type(prop.right)}",
                )
            return prop.right
        case Let(var, ty, bound, body):
            check_type(env, ty)
            inner = env.add_term(var, ty)
            bound_ty = check_term(inner, bound)
            if not alpha_eq(bound_ty, ty):
                raise FcTypeError(
                    "TmLet",
                    f"binding annotated {dump_type(ty)} but body has type "
                    f"{dump_type(bound_ty)}",
                )
            return check_term(inner, body)
        case Case(scrutinee, alts):
            if not alts:
                raise FcTypeError("TmCase", "case with no alternatives")
            scrut_ty = check_term(env, scrutinee)
            tycon, ty_args = _spine(scrut_ty)
            if tycon is None or tycon == core.ARROW_CON:
                raise FcTypeError(
                    "TmCase", f"scrutinee has non-data type {dump_type(scrut_ty)}"
                )
            result: CoreType | None = None
            for alt in alts:
                alt_ty = _check_alt(env, alt, tycon, ty_args)
                if result is None:
                    result = alt_ty
                elif not alpha_eq(result, alt_ty):
                    raise FcTypeError(
                        "TmCase",
                        f"alternatives disagree: {dump_type(result)} "
                        f"vs {dump_type(alt_ty)}",
                    )
            assert result is not None
            return result
    raise FcTypeError("TmVar", f"malformed term {t!r}")


def _spine(t: CoreType) -> tuple[str | None, tuple[CoreType, ...]]:
    args: list[CoreType] = []
    while isinstance(t, CTApp):
        args.append(t.arg)
        t = t.fn
    if isinstance(t, CTCon):
        return t.name, tuple(reversed(args))
    return None, ()


def _telescope(
    ty: CoreType,
) -> tuple[list[str], list[Prop], list[CoreType], CoreType]:
    """Split a constructor type into foralls, qualifiers, arguments, result."""
    binders: list[str] = []
    while isinstance(ty, CTForall):
        binders.append(ty.var)
        ty = ty.body
    quals: list[Prop] = []
    while isinstance(ty, CTQual):
        quals.append(ty.prop)
        ty = ty.body
    args: list[CoreType] = []
    while (split := core.split_arrow(ty)) is not None:
        args.append(split[0])
        ty = split[1]
    return binders, quals, args, ty


def _check_alt(
    env: CoreEnv, alt: Alt, tycon: str, ty_args: tuple[CoreType, ...]
) -> CoreType:
    pat = alt.pattern
    entry = env.datacons.get(pat.con)
    if entry is None:
        raise FcTypeError("Pat", f"unknown data constructor {pat.con!r}")
    parent, con_ty = entry
    if parent != tycon:
        raise FcTypeError(
            "Pat",
            f"constructor {pat.con!r} belongs to {parent!r}, "
            f"but the scrutinee is a {tycon!r}",
        )
    binders, quals, args, _result = _telescope(con_ty)
    n_universal = env.tycons[tycon]
    universals = binders[:n_universal]
    existentials = binders[n_universal:]
    if len(ty_args) != n_universal:
        raise FcTypeError("Pat", f"scrutinee type is not fully applied {tycon!r}")
    if len(pat.ty_binders) != len(existentials):
        raise FcTypeError(
            "Pat",
            f"pattern for {pat.con!r} binds {len(pat.ty_binders)} type "
            f"variable(s), constructor has {len(existentials)} existential(s)",
        )
    if len(pat.co_binders) != len(quals) or len(pat.tm_binders) != len(args):
        raise FcTypeError(
            "Pat", f"pattern binder counts do not match {pat.con!r}'s telescope"
        )
    mapping: dict[str, CoreType] = dict(zip(universals, ty_args))
    mapping.update(
        {old: CTVar(new) for old, new in zip(existentials, pat.ty_binders)}
    )
    inner = env.add_tyvars(pat.ty_binders)
    for (w, stated), declared in zip(pat.co_binders, quals):
        expected = Prop(
            core.subst_type(mapping, declared.left),
            core.subst_type(mapping, declared.right),
        )
        if not alpha_eq(stated, expected):
            raise FcTypeError(
                "Pat",
                f"coercion binder {w!r} annotated with the wrong proposition",
            )
        inner = inner.add_covar(w, expected)
    for (x, stated_ty), declared in zip(pat.tm_binders, args):
        expected_ty = core.subst_type(mapping, declared)
        if not alpha_eq(stated_ty, expected_ty):
            raise FcTypeError(
                "Pat",
                f"term binder {x!r} annotated {dump_type(stated_ty)}, "
                f"expected {dump_type(expected_ty)}",
            )
        inner = inner.add_term(x, expected_ty)
    return check_term(inner, alt.rhs)


# --------------------------------------------------------------------------
# Declaration and program typing


def check_decl(env: CoreEnv, decl) -> CoreEnv:
    match decl:
        case CoreData(name, params, ctors):
            if name in env.tycons:
                raise FcTypeError("Data", f"duplicate type constructor {name!r}")
            env = env.add_tycon(name, len(params))
            for con_name, con_ty in ctors:
                if con_name in env.datacons:
                    raise FcTypeError(
                        "Data", f"duplicate data constructor {con_name!r}"
                    )
                check_type(env, con_ty)
                binders, _quals, _args, result = _telescope(con_ty)
                expected = CTCon(name)
                for var in binders[: len(params)]:
                    expected = CTApp(expected, CTVar(var))
                if len(binders) < len(params) or not alpha_eq(result, expected):
                    raise FcTypeError(
                        "Data",
                        f"constructor {con_name!r} does not produce "
                        f"{name} applied to its universal parameters",
                    )
                env = env.add_datacon(con_name, name, con_ty)
            return env
        case CoreFamily(name, arity):
            if name in env.families:
                raise FcTypeError("Family", f"duplicate type family {name!r}")
            return env.add_family(name, arity)
        case CoreAxiom(name, params, fam, lhs_args, rhs):
            if name in env.axioms:
                raise FcTypeError("Axiom", f"duplicate axiom {name!r}")
            scoped = env.add_tyvars(params)
            arity = env.families.get(fam)
            if arity is None:
                raise FcTypeError("Axiom", f"unknown type family {fam!r}")
            if arity != len(lhs_args):
                raise FcTypeError(
                    "Axiom", f"axiom {name!r} does not saturate family {fam!r}"
                )
            for u in lhs_args:
                if not core.is_type_pattern(u):
                    raise FcTypeError(
                        "Axiom",
                        f"axiom {name!r} left-hand side argument "
                        f"{dump_type(u)} is not a type pattern",
                    )
                check_type(scoped, u)
            check_type(scoped, rhs)
            return env.add_axiom(name, params, decl.prop())
        case CoreValue(name, ty, term):
            if name in env.terms:
                raise FcTypeError("Value", f"duplicate binding {name!r}")
            check_type(env, ty)
            inner = env.add_term(name, ty)
            actual = check_term(inner, term)
            if not alpha_eq(actual, ty):
                raise FcTypeError(
                    "Value",
                    f"binding {name!r} declared {dump_type(ty)} but its body "
                    f"has type {dump_type(actual)}",
                )
            return inner
        case CorePrim(name, ty):
            if name in env.terms:
                raise FcTypeError("Value", f"duplicate binding {name!r}")
            check_type(env, ty)
            return env.add_term(name, ty)
    raise FcTypeError("Value", f"malformed declaration {decl!r}")


def check_program(program: CoreProgram | list) -> CoreEnv:
    """Thread the environment through the declarations left to right."""
    decls = program.decls if isinstance(program, CoreProgram) else program
    env = CoreEnv()
    for decl in decls:
        env = check_decl(env, decl)
    return env
