"""Substitution, free variables, and alpha-equality for core syntax."""

from __future__ import annotations

from . import ast
from .ast import (
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
    CorePattern,
    CoreTerm,
    CoreType,
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


def free_type_vars(t: CoreType) -> frozenset[str]:
    match t:
        case CTVar(name):
            return frozenset([name])
        case CTCon(_):
            return frozenset()
        case CTApp(fn, arg):
            return free_type_vars(fn) | free_type_vars(arg)
        case CTForall(var, body):
            return free_type_vars(body) - {var}
        case CTFam(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= free_type_vars(a)
            return out
        case CTQual(prop, body):
            return (
                free_type_vars(prop.left)
                | free_type_vars(prop.right)
                | free_type_vars(body)
            )
    raise TypeError(f"free_type_vars: unsupported type {t!r}")


def subst_type(mapping: dict[str, CoreType], t: CoreType) -> CoreType:
    """Capture-avoiding substitution; clashing binders get primed."""
    if not mapping:
        return t
    match t:
        case CTVar(name):
            return mapping.get(name, t)
        case CTCon(_):
            return t
        case CTApp(fn, arg):
            return CTApp(subst_type(mapping, fn), subst_type(mapping, arg))
        case CTFam(fam, args):
            return CTFam(fam, tuple(subst_type(mapping, a) for a in args))
        case CTQual(prop, body):
            return CTQual(subst_prop(mapping, prop), subst_type(mapping, body))
        case CTForall(var, body):
            live = {k: v for k, v in mapping.items() if k != var}
            if not live:
                return t
            image_vars: set[str] = set()
            for v in live.values():
                image_vars |= free_type_vars(v)
            if var in image_vars:
                fresh = var
                taken = image_vars | free_type_vars(body)
                while fresh in taken:
                    fresh = fresh + "'"
                body = subst_type({var: CTVar(fresh)}, body)
                var = fresh
            return CTForall(var, subst_type(live, body))
    raise TypeError(f"subst_type: unsupported type {t!r}")


def subst_prop(mapping: dict[str, CoreType], p: Prop) -> Prop:
    return Prop(subst_type(mapping, p.left), subst_type(mapping, p.right))


def subst_type_in_coercion(mapping: dict[str, CoreType], co: Coercion) -> Coercion:
    if not mapping:
        return co
    go = lambda c: subst_type_in_coercion(mapping, c)
    match co:
        case CoRefl(ty):
            return CoRefl(subst_type(mapping, ty))
        case CoSym(inner):
            return CoSym(go(inner))
        case CoTrans(a, b):
            return CoTrans(go(a), go(b))
        case CoApp(a, b):
            return CoApp(go(a), go(b))
        case CoLeft(inner):
            return CoLeft(go(inner))
        case CoRight(inner):
            return CoRight(go(inner))
        case CoFam(fam, args):
            return CoFam(fam, tuple(go(a) for a in args))
        case CoForall(var, inner):
            live = {k: v for k, v in mapping.items() if k != var}
            return CoForall(var, subst_type_in_coercion(live, inner))
        case CoInst(a, b):
            return CoInst(go(a), go(b))
        case CoQual(prop, inner):
            return CoQual(subst_prop(mapping, prop), go(inner))
        case CoQInst(a, b):
            return CoQInst(go(a), go(b))
        case CoAx(name, args):
            return CoAx(name, tuple(subst_type(mapping, a) for a in args))
        case CoVar(_):
            return co
    raise TypeError(f"subst_type_in_coercion: unsupported coercion {co!r}")


def subst_type_in_term(mapping: dict[str, CoreType], t: CoreTerm) -> CoreTerm:
    """Apply a type substitution to every type annotation inside a term.

    Type binders shadow; generated type binders never collide with the
    metavariable names this is used for, but shadowing is handled anyway.
    """
    if not mapping:
        return t
    go = lambda x: subst_type_in_term(mapping, x)
    goty = lambda ty: subst_type(mapping, ty)
    match t:
        case Var(_) | Con(_) | Lit(_):
            return t
        case TyLam(var, body):
            live = {k: v for k, v in mapping.items() if k != var}
            return TyLam(var, subst_type_in_term(live, body))
        case TyApp(fn, ty):
            return TyApp(go(fn), goty(ty))
        case Lam(var, ty, body):
            return Lam(var, goty(ty), go(body))
        case TmApp(fn, arg):
            return TmApp(go(fn), go(arg))
        case CoLam(var, prop, body):
            return CoLam(var, subst_prop(mapping, prop), go(body))
        case CoApplied(fn, co):
            return CoApplied(go(fn), subst_type_in_coercion(mapping, co))
        case Cast(term, co):
            return Cast(go(term), subst_type_in_coercion(mapping, co))
        case Case(scrutinee, alts):
            new_alts = []
            for alt in alts:
                pat = alt.pattern
                live = {k: v for k, v in mapping.items() if k not in pat.ty_binders}
                new_pat = CorePattern(
                    pat.con,
                    pat.ty_binders,
                    tuple((w, subst_prop(live, p)) for w, p in pat.co_binders),
                    tuple((x, subst_type(live, ty)) for x, ty in pat.tm_binders),
                )
                new_alts.append(Alt(new_pat, subst_type_in_term(live, alt.rhs)))
            return Case(go(scrutinee), tuple(new_alts))
        case Let(var, ty, bound, body):
            return Let(var, goty(ty), go(bound), go(body))
    raise TypeError(f"subst_type_in_term: unsupported term {t!r}")


def subst_term_vars(mapping: dict[str, CoreTerm], t: CoreTerm) -> CoreTerm:
    """Substitute terms for term variables, respecting binder shadowing."""
    if not mapping:
        return t

    def go(term: CoreTerm, live: dict[str, CoreTerm]) -> CoreTerm:
        if not live:
            return term
        match term:
            case Var(name):
                return live.get(name, term)
            case Con(_) | Lit(_):
                return term
            case TyLam(var, body):
                return TyLam(var, go(body, live))
            case TyApp(fn, ty):
                return TyApp(go(fn, live), ty)
            case Lam(var, ty, body):
                inner = {k: v for k, v in live.items() if k != var}
                return Lam(var, ty, go(body, inner))
            case TmApp(fn, arg):
                return TmApp(go(fn, live), go(arg, live))
            case CoLam(var, prop, body):
                return CoLam(var, prop, go(body, live))
            case CoApplied(fn, co):
                return CoApplied(go(fn, live), co)
            case Cast(inner_t, co):
                return Cast(go(inner_t, live), co)
            case Case(scrutinee, alts):
                new_alts = []
                for alt in alts:
                    bound = {x for x, _ in alt.pattern.tm_binders}
                    inner = {k: v for k, v in live.items() if k not in bound}
                    new_alts.append(Alt(alt.pattern, go(alt.rhs, inner)))
                return Case(go(scrutinee, live), tuple(new_alts))
            case Let(var, ty, bound_t, body):
                inner = {k: v for k, v in live.items() if k != var}
                return Let(var, ty, go(bound_t, inner), go(body, inner))
        raise TypeError(f"subst_term_vars: unsupported term {term!r}")

    return go(t, dict(mapping))


# --------------------------------------------------------------------------
# Alpha-equality


def alpha_eq(x, y) -> bool:
    """Equality up to consistent renaming of bound names.

    Works for core types, propositions, coercions, terms, and patterns.
    """
    return _alpha(x, y, {}, {})


def _alpha(x, y, lmap: dict[str, str], rmap: dict[str, str]) -> bool:
    if type(x) is not type(y):
        return False

    def var_eq(a: str, b: str) -> bool:
        # Bound names must map to each other; free names must be identical
        # and not shadowed on either side.
        if a in lmap or b in rmap:
            return lmap.get(a) == b and rmap.get(b) == a
        return a == b

    def under(a: str, b: str):
        l2 = dict(lmap)
        r2 = dict(rmap)
        l2[a] = b
        r2[b] = a
        return l2, r2

    match x:
        # ---- types
        case CTVar(a):
            return var_eq(a, y.name)
        case CTCon(a):
            return a == y.name
        case CTApp(f, s):
            return _alpha(f, y.fn, lmap, rmap) and _alpha(s, y.arg, lmap, rmap)
        case CTForall(v, body):
            l2, r2 = under(v, y.var)
            return _alpha(body, y.body, l2, r2)
        case CTFam(f, args):
            return (
                f == y.fam
                and len(args) == len(y.args)
                and all(_alpha(a, b, lmap, rmap) for a, b in zip(args, y.args))
            )
        case CTQual(p, body):
            return _alpha(p, y.prop, lmap, rmap) and _alpha(body, y.body, lmap, rmap)
        case Prop(l, r):
            return _alpha(l, y.left, lmap, rmap) and _alpha(r, y.right, lmap, rmap)

        # ---- coercions
        case CoRefl(t):
            return _alpha(t, y.ty, lmap, rmap)
        case CoSym(i) | CoLeft(i) | CoRight(i):
            return _alpha(i, y.inner, lmap, rmap)
        case CoTrans(a, b):
            return _alpha(a, y.first, lmap, rmap) and _alpha(b, y.second, lmap, rmap)
        case CoApp(a, b) | CoInst(a, b) | CoQInst(a, b):
            return _alpha(a, y.fn, lmap, rmap) and _alpha(b, y.arg, lmap, rmap)
        case CoFam(f, args):
            return (
                f == y.fam
                and len(args) == len(y.args)
                and all(_alpha(a, b, lmap, rmap) for a, b in zip(args, y.args))
            )
        case CoForall(v, i):
            l2, r2 = under(v, y.var)
            return _alpha(i, y.inner, l2, r2)
        case CoQual(p, i):
            return _alpha(p, y.prop, lmap, rmap) and _alpha(i, y.inner, lmap, rmap)
        case CoAx(g, args):
            return (
                g == y.axiom
                and len(args) == len(y.args)
                and all(_alpha(a, b, lmap, rmap) for a, b in zip(args, y.args))
            )
        case CoVar(a):
            return var_eq(a, y.name)

        # ---- terms
        case Var(a):
            return var_eq(a, y.name)
        case Con(a):
            return a == y.name
        case Lit(v):
            return v == y.value and type(v) is type(y.value)
        case TyLam(v, body):
            l2, r2 = under(v, y.var)
            return _alpha(body, y.body, l2, r2)
        case TyApp(fn, ty):
            return _alpha(fn, y.fn, lmap, rmap) and _alpha(ty, y.ty, lmap, rmap)
        case Lam(v, ty, body):
            if not _alpha(ty, y.ty, lmap, rmap):
                return False
            l2, r2 = under(v, y.var)
            return _alpha(body, y.body, l2, r2)
        case TmApp(fn, arg):
            return _alpha(fn, y.fn, lmap, rmap) and _alpha(arg, y.arg, lmap, rmap)
        case CoLam(v, prop, body):
            if not _alpha(prop, y.prop, lmap, rmap):
                return False
            l2, r2 = under(v, y.var)
            return _alpha(body, y.body, l2, r2)
        case CoApplied(fn, co):
            return _alpha(fn, y.fn, lmap, rmap) and _alpha(co, y.co, lmap, rmap)
        case Cast(t, co):
            return _alpha(t, y.term, lmap, rmap) and _alpha(co, y.co, lmap, rmap)
        case Let(v, ty, bound, body):
            if not _alpha(ty, y.ty, lmap, rmap):
                return False
            l2, r2 = under(v, y.var)
            return _alpha(bound, y.bound, l2, r2) and _alpha(body, y.body, l2, r2)
        case Case(scrut, alts):
            if not _alpha(scrut, y.scrutinee, lmap, rmap):
                return False
            if len(alts) != len(y.alts):
                return False
            return all(
                _alpha_alt(a, b, lmap, rmap) for a, b in zip(alts, y.alts)
            )
    raise TypeError(f"alpha_eq: unsupported node {x!r}")


def _alpha_alt(a: Alt, b: Alt, lmap, rmap) -> bool:
    pa, pb = a.pattern, b.pattern
    if pa.con != pb.con:
        return False
    if (
        len(pa.ty_binders) != len(pb.ty_binders)
        or len(pa.co_binders) != len(pb.co_binders)
        or len(pa.tm_binders) != len(pb.tm_binders)
    ):
        return False
    l2, r2 = dict(lmap), dict(rmap)
    for va, vb in zip(pa.ty_binders, pb.ty_binders):
        l2[va] = vb
        r2[vb] = va
    for (wa, propa), (wb, propb) in zip(pa.co_binders, pb.co_binders):
        if not _alpha(propa, propb, l2, r2):
            return False
        l2[wa] = wb
        r2[wb] = wa
    for (xa, tya), (xb, tyb) in zip(pa.tm_binders, pb.tm_binders):
        if not _alpha(tya, tyb, l2, r2):
            return False
        l2[xa] = xb
        r2[xb] = xa
    return _alpha(a.rhs, b.rhs, l2, r2)
