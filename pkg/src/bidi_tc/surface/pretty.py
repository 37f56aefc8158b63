"""Deterministic rendering of surface syntax.

`parse_program(pretty_source(p))` is structurally equal to `p` (positions
excluded), which the test suite checks by round-tripping generated ASTs.
"""

from __future__ import annotations

from . import ast


def pretty_source(node) -> str:
    if isinstance(node, ast.Program):
        return "\n\n".join(_decl(d) for d in node.decls) + ("\n" if node.decls else "")
    if isinstance(node, ast.Decl):
        return _decl(node)
    if isinstance(node, (ast.PolyType, ast.QualType)):
        return _poly(_as_poly(node))
    if isinstance(node, ast.MonoType):
        return _mono(node, 0)
    if isinstance(node, ast.Constraint):
        return _constraint(node)
    if isinstance(node, ast.Scheme):
        return _scheme(node)
    if isinstance(node, ast.Expr):
        return _expr(node, 0)
    raise TypeError(f"pretty_source: unsupported node {node!r}")


def _as_poly(node) -> ast.PolyType:
    if isinstance(node, ast.PolyType):
        return node
    return ast.PolyType((), node)


# --------------------------------------------------------------------------
# Types; precedence: 0 = top, 1 = arrow argument, 2 = application argument


def _mono(t: ast.MonoType, prec: int) -> str:
    match t:
        case ast.TVar(name):
            return name
        case ast.TCon(name, args):
            if not args:
                return name
            text = name + " " + " ".join(_mono(a, 2) for a in args)
            return f"({text})" if prec >= 2 else text
        case ast.TArrow(domain, codomain):
            text = f"{_mono(domain, 1)} -> {_mono(codomain, 0)}"
            return f"({text})" if prec >= 1 else text
    raise TypeError(f"unsupported type {t!r}")


def _constraint(q: ast.Constraint) -> str:
    return f"{q.cls} {_mono(q.arg, 2)}"


def _context(context: tuple[ast.Constraint, ...]) -> str:
    return "(" + ", ".join(_constraint(q) for q in context) + ") => "


def _poly(sigma: ast.PolyType) -> str:
    prefix = f"forall {' '.join(sigma.vars)}. " if sigma.vars else ""
    ctx = _context(sigma.context) if sigma.context else ""
    return prefix + ctx + _mono(sigma.body, 0)


def _scheme(s: ast.Scheme) -> str:
    prefix = f"forall {' '.join(s.vars)}. " if s.vars else ""
    ctx = _context(s.context) if s.context else ""
    return prefix + ctx + _constraint(s.head)


# --------------------------------------------------------------------------
# Expressions; precedence: 0 = top, 1 = application head, 2 = argument


def _expr(e: ast.Expr, prec: int) -> str:
    match e:
        case ast.EVar(name):
            return name
        case ast.ELam(binder, body):
            text = f"\\{binder}. {_expr(body, 0)}"
            return f"({text})" if prec >= 1 else text
        case ast.ELet(binder, bound, body):
            text = f"let {binder} = {_expr(bound, 0)} in {_expr(body, 0)}"
            return f"({text})" if prec >= 1 else text
        case ast.EApp(fn, arg):
            text = f"{_expr(fn, 1)} {_expr(arg, 2)}"
            return f"({text})" if prec >= 2 else text
    raise TypeError(f"unsupported expression {e!r}")


# --------------------------------------------------------------------------
# Declarations


def _decl(d: ast.Decl) -> str:
    match d:
        case ast.DataDecl(name, arity):
            params = " ".join(_data_params(arity))
            return f"data {name} {params}".rstrip()
        case ast.PrimDecl(name, sig):
            return f"primitive {name} :: {_poly(sig)}"
        case ast.ClassDecl(var, supers, name, method, method_sig):
            ctx = _context(supers) if supers else ""
            return (
                f"class {ctx}{name} {var} where "
                f"{{ {method} :: {_poly(method_sig)} }}"
            )
        case ast.InstanceDecl(_, context, cls, head, method, body):
            ctx = _context(context) if context else ""
            return (
                f"instance {ctx}{cls} {_mono(head, 2)} where "
                f"{{ {method} = {_expr(body, 0)} }}"
            )
        case ast.ValDecl(name, sig, body):
            if sig is None:
                return f"let {name} = {_expr(body, 0)}"
            return f"let {name} :: {_poly(sig)} = {_expr(body, 0)}"
    raise TypeError(f"unsupported declaration {d!r}")


def _data_params(arity: int) -> list[str]:
    names = "abcdefghijklmnopqrstuvwxyz"
    return [names[i] if i < 26 else f"a{i}" for i in range(arity)]
