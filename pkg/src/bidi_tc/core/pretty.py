"""Deterministic textual dump of core programs.

The grammar is stable and reparseable (the test suite carries a reader for
it): ``/\\a.`` binds types, ``@t`` applies them, ``\\(x:t).`` binds terms,
``|> c`` casts, ``<t>`` is reflexivity, ``;`` is transitivity, and
``g @t1 @t2`` instantiates an axiom.
"""

from __future__ import annotations

from . import ast
from .ast import (
    ARROW_CON,
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
    CorePattern,
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
)

# precedence levels: 0 binders, 1 arrows/casts/transitivity, 2 application, 3 atoms


def dump_core(program: CoreProgram) -> str:
    return "\n".join(dump_decl(d) for d in program.decls) + (
        "\n" if program.decls else ""
    )


def dump_decl(decl) -> str:
    match decl:
        case CoreData(name, params, ctors):
            head = " ".join([name, *params])
            if not ctors:
                return f"data {head} where {{ }}"
            body = " ; ".join(f"{k} : {dump_type(t)}" for k, t in ctors)
            return f"data {head} where {{ {body} }}"
        case CoreFamily(name, arity):
            return f"type {name}/{arity}"
        case CoreAxiom(name, params, fam, lhs_args, rhs):
            binder = (" " + " ".join(params)) if params else ""
            lhs = " ".join([fam, *(_ty(a, 3) for a in lhs_args)])
            return f"axiom {name}{binder} : {lhs} ~ {dump_type(rhs)}"
        case CoreValue(name, ty, term):
            return f"let {name} : {dump_type(ty)} = {dump_term(term)}"
        case CorePrim(name, ty):
            return f"primitive {name} : {dump_type(ty)}"
    raise TypeError(f"dump_decl: unsupported declaration {decl!r}")


def dump_type(t: CoreType) -> str:
    return _ty(t, 0)


def dump_term(t: CoreTerm) -> str:
    return _tm(t, 0)


def dump_coercion(c: Coercion) -> str:
    return _co(c, 0)


def dump_prop(p: Prop) -> str:
    return f"{_ty(p.left, 2)} ~ {_ty(p.right, 2)}"


def _wrap(text: str, need: bool) -> str:
    return f"({text})" if need else text


def _ty(t: CoreType, prec: int) -> str:
    split = ast.split_arrow(t)
    if split is not None:
        domain, codomain = split
        return _wrap(f"{_ty(domain, 2)} -> {_ty(codomain, 1)}", prec > 1)
    match t:
        case CTVar(name) | CTCon(name) if name != ARROW_CON:
            return name
        case CTCon(_):
            return ARROW_CON
        case CTForall(var, body):
            return _wrap(f"forall {var}. {_ty(body, 0)}", prec > 0)
        case CTQual(p, body):
            return _wrap(f"({dump_prop(p)}) => {_ty(body, 0)}", prec > 0)
        case CTApp(fn, arg):
            return _wrap(f"{_ty(fn, 2)} {_ty(arg, 3)}", prec > 2)
        case CTFam(fam, args):
            text = " ".join([fam, *(_ty(a, 3) for a in args)])
            return _wrap(text, prec > 2)
    raise TypeError(f"_ty: unsupported type {t!r}")


def _tm(t: CoreTerm, prec: int) -> str:
    match t:
        case Var(name) | Con(name):
            return name
        case Lit(value):
            if value is True:
                return "true"
            if value is False:
                return "false"
            return str(value)
        case TyLam(var, body):
            return _wrap(f"/\\{var}. {_tm(body, 0)}", prec > 0)
        case Lam(var, ty, body):
            return _wrap(f"\\({var} : {dump_type(ty)}). {_tm(body, 0)}", prec > 0)
        case CoLam(var, p, body):
            return _wrap(f"/\\({var} : {dump_prop(p)}). {_tm(body, 0)}", prec > 0)
        case Let(var, ty, bound, body):
            return _wrap(
                f"let {var} : {dump_type(ty)} = {_tm(bound, 1)} in {_tm(body, 0)}",
                prec > 0,
            )
        case Case(scrutinee, alts):
            body = " ; ".join(_alt(a) for a in alts)
            return _wrap(f"case {_tm(scrutinee, 1)} of {{ {body} }}", prec > 0)
        case Cast(term, co):
            return _wrap(f"{_tm(term, 1)} |> {_co(co, 2)}", prec > 1)
        case TyApp(fn, ty):
            return _wrap(f"{_tm(fn, 2)} @{_ty(ty, 3)}", prec > 2)
        case CoApplied(fn, co):
            return _wrap(f"{_tm(fn, 2)} [{_co(co, 0)}]", prec > 2)
        case TmApp(fn, arg):
            return _wrap(f"{_tm(fn, 2)} {_tm(arg, 3)}", prec > 2)
    raise TypeError(f"_tm: unsupported term {t!r}")


def _alt(alt) -> str:
    pat = alt.pattern
    parts = [pat.con]
    parts.extend(pat.ty_binders)
    parts.extend(f"({w} : {dump_prop(p)})" for w, p in pat.co_binders)
    parts.extend(f"({x} : {dump_type(ty)})" for x, ty in pat.tm_binders)
    return f"{' '.join(parts)} -> {_tm(alt.rhs, 0)}"


def _co(c: Coercion, prec: int) -> str:
    match c:
        case CoVar(name):
            return name
        case CoRefl(ty):
            return f"<{dump_type(ty)}>"
        case CoAx(name, args):
            if not args:
                return name
            text = " ".join([name, *(f"@{_ty(a, 3)}" for a in args)])
            return _wrap(text, prec > 1)
        case CoTrans(first, second):
            return _wrap(f"{_co(first, 1)} ; {_co(second, 0)}", prec > 0)
        case CoApp(fn, arg):
            return _wrap(f"{_co(fn, 1)} {_co(arg, 3)}", prec > 1)
        case CoSym(inner):
            return _wrap(f"sym {_co(inner, 2)}", prec > 2)
        case CoLeft(inner):
            return _wrap(f"left {_co(inner, 2)}", prec > 2)
        case CoRight(inner):
            return _wrap(f"right {_co(inner, 2)}", prec > 2)
        case CoFam(fam, args):
            return f"{fam} {{{', '.join(_co(a, 0) for a in args)}}}"
        case CoForall(var, inner):
            return _wrap(f"forall {var}. {_co(inner, 0)}", prec > 0)
        case CoQual(p, inner):
            return _wrap(f"({dump_prop(p)}) => {_co(inner, 0)}", prec > 0)
        case CoInst(fn, arg):
            return f"inst({_co(fn, 0)}, {_co(arg, 0)})"
        case CoQInst(fn, arg):
            return f"qinst({_co(fn, 0)}, {_co(arg, 0)})"
    raise TypeError(f"_co: unsupported coercion {c!r}")
