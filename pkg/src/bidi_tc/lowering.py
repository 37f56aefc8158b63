"""Lowering of surface types and constraints into core types.

Qualified types become arrows from dictionary types; a class constraint
``TC t`` becomes an application of the class's generated dictionary
constructor ``D_TC``.
"""

from __future__ import annotations

from . import core
from .surface import ast as s


def dict_tycon(cls: str) -> str:
    return f"D_{cls}"


def dict_con(cls: str) -> str:
    return f"K_{cls}"


def family_name(cls: str) -> str:
    return f"F_{cls}"


def elab_ty(t) -> core.CoreType:
    """Lower a monotype, qualified type, or polytype."""
    if isinstance(t, s.MonoType):
        return _mono(t)
    if isinstance(t, s.QualType):
        out = _mono(t.body)
        for q in reversed(t.context):
            out = core.arrow(elab_ct(q), out)
        return out
    if isinstance(t, s.PolyType):
        out = elab_ty(t.qual)
        for v in reversed(t.vars):
            out = core.CTForall(v, out)
        return out
    raise TypeError(f"elab_ty: unsupported type {t!r}")


def elab_ct(q: s.Constraint) -> core.CoreType:
    return core.CTApp(core.CTCon(dict_tycon(q.cls)), _mono(q.arg))


def _mono(t: s.MonoType) -> core.CoreType:
    match t:
        case s.TVar(name):
            return core.CTVar(name)
        case s.TArrow(domain, codomain):
            return core.arrow(_mono(domain), _mono(codomain))
        case s.TCon(name, args):
            out: core.CoreType = core.CTCon(name)
            for a in args:
                out = core.CTApp(out, _mono(a))
            return out
    raise TypeError(f"elab_ty: unsupported monotype {t!r}")
