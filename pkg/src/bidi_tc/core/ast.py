"""Abstract syntax of the explicitly-typed core calculus.

Terms carry enough type and coercion structure to be re-checked without
inference; coercions are proof terms for type equalities and are erased at
runtime. Function types are the curried application of the builtin ``(->)``
constructor, so coercion decomposition (left/right) works uniformly on
them.
"""

from __future__ import annotations

from dataclasses import dataclass

ARROW_CON = "(->)"


# --------------------------------------------------------------------------
# Types


class CoreType:
    pass


@dataclass(frozen=True)
class CTVar(CoreType):
    name: str


@dataclass(frozen=True)
class CTCon(CoreType):
    name: str


@dataclass(frozen=True)
class CTApp(CoreType):
    fn: CoreType
    arg: CoreType


@dataclass(frozen=True)
class CTForall(CoreType):
    var: str
    body: CoreType


@dataclass(frozen=True)
class CTFam(CoreType):
    """Saturated type-family application F(t1, ..., tn)."""

    fam: str
    args: tuple[CoreType, ...]


@dataclass(frozen=True)
class CTQual(CoreType):
    """Equality-qualified type: (t1 ~ t2) => t."""

    prop: Prop
    body: CoreType


@dataclass(frozen=True)
class Prop:
    """Type-equality proposition t1 ~ t2."""

    left: CoreType
    right: CoreType


def arrow(domain: CoreType, codomain: CoreType) -> CoreType:
    return CTApp(CTApp(CTCon(ARROW_CON), domain), codomain)


def arrows(domains, codomain: CoreType) -> CoreType:
    out = codomain
    for d in reversed(list(domains)):
        out = arrow(d, out)
    return out


def split_arrow(t: CoreType) -> tuple[CoreType, CoreType] | None:
    match t:
        case CTApp(CTApp(CTCon(name), domain), codomain) if name == ARROW_CON:
            return domain, codomain
    return None


def is_type_pattern(t: CoreType) -> bool:
    """Type patterns exclude families, quantifiers, and qualifiers."""
    match t:
        case CTVar(_) | CTCon(_):
            return True
        case CTApp(fn, arg):
            return is_type_pattern(fn) and is_type_pattern(arg)
    return False


# --------------------------------------------------------------------------
# Coercions


class Coercion:
    pass


@dataclass(frozen=True)
class CoRefl(Coercion):
    ty: CoreType


@dataclass(frozen=True)
class CoSym(Coercion):
    inner: Coercion


@dataclass(frozen=True)
class CoTrans(Coercion):
    first: Coercion
    second: Coercion


@dataclass(frozen=True)
class CoApp(Coercion):
    """Congruence of type application."""

    fn: Coercion
    arg: Coercion


@dataclass(frozen=True)
class CoLeft(Coercion):
    inner: Coercion


@dataclass(frozen=True)
class CoRight(Coercion):
    inner: Coercion


@dataclass(frozen=True)
class CoFam(Coercion):
    """Congruence of family application."""

    fam: str
    args: tuple[Coercion, ...]


@dataclass(frozen=True)
class CoForall(Coercion):
    var: str
    inner: Coercion


@dataclass(frozen=True)
class CoInst(Coercion):
    """Instantiation of a quantified equality."""

    fn: Coercion
    arg: Coercion


@dataclass(frozen=True)
class CoQual(Coercion):
    prop: Prop
    inner: Coercion


@dataclass(frozen=True)
class CoQInst(Coercion):
    fn: Coercion
    arg: Coercion


@dataclass(frozen=True)
class CoAx(Coercion):
    """Use of a top-level axiom at the given type arguments."""

    axiom: str
    args: tuple[CoreType, ...]


@dataclass(frozen=True)
class CoVar(Coercion):
    name: str


# --------------------------------------------------------------------------
# Terms


class CoreTerm:
    pass


@dataclass(frozen=True)
class Var(CoreTerm):
    name: str


@dataclass(frozen=True)
class Con(CoreTerm):
    name: str


@dataclass(frozen=True)
class Lit(CoreTerm):
    """Opaque host constant (int or bool), used by the evaluator."""

    value: object


@dataclass(frozen=True)
class TyLam(CoreTerm):
    var: str
    body: CoreTerm


@dataclass(frozen=True)
class TyApp(CoreTerm):
    fn: CoreTerm
    ty: CoreType


@dataclass(frozen=True)
class Lam(CoreTerm):
    var: str
    ty: CoreType
    body: CoreTerm


@dataclass(frozen=True)
class TmApp(CoreTerm):
    fn: CoreTerm
    arg: CoreTerm


@dataclass(frozen=True)
class CoLam(CoreTerm):
    var: str
    prop: Prop
    body: CoreTerm


@dataclass(frozen=True)
class CoApplied(CoreTerm):
    fn: CoreTerm
    co: Coercion


@dataclass(frozen=True)
class Cast(CoreTerm):
    term: CoreTerm
    co: Coercion


@dataclass(frozen=True)
class CorePattern:
    """Constructor pattern with existential, coercion, and term binders."""

    con: str
    ty_binders: tuple[str, ...]
    co_binders: tuple[tuple[str, Prop], ...]
    tm_binders: tuple[tuple[str, CoreType], ...]


@dataclass(frozen=True)
class Alt:
    pattern: CorePattern
    rhs: CoreTerm


@dataclass(frozen=True)
class Case(CoreTerm):
    scrutinee: CoreTerm
    alts: tuple[Alt, ...]


@dataclass(frozen=True)
class Let(CoreTerm):
    """Recursive binding: var scopes over both bound and body."""

    var: str
    ty: CoreType
    bound: CoreTerm
    body: CoreTerm


def ty_lams(vars_, body: CoreTerm) -> CoreTerm:
    for v in reversed(list(vars_)):
        body = TyLam(v, body)
    return body


def lams(binders, body: CoreTerm) -> CoreTerm:
    for name, ty in reversed(list(binders)):
        body = Lam(name, ty, body)
    return body


def ty_apps(fn: CoreTerm, tys) -> CoreTerm:
    for t in tys:
        fn = TyApp(fn, t)
    return fn


def tm_apps(fn: CoreTerm, args) -> CoreTerm:
    for a in args:
        fn = TmApp(fn, a)
    return fn


# --------------------------------------------------------------------------
# Declarations


class CoreDecl:
    pass


@dataclass(frozen=True)
class CoreData(CoreDecl):
    """data T a1 .. an where { K : sigma ; ... }"""

    name: str
    params: tuple[str, ...]
    ctors: tuple[tuple[str, CoreType], ...] = ()


@dataclass(frozen=True)
class CoreFamily(CoreDecl):
    """type F/arity"""

    name: str
    arity: int


@dataclass(frozen=True)
class CoreAxiom(CoreDecl):
    """axiom g a1 .. an : F(u1, ..., uk) ~ rhs"""

    name: str
    params: tuple[str, ...]
    fam: str
    lhs_args: tuple[CoreType, ...]
    rhs: CoreType

    def prop(self) -> Prop:
        return Prop(CTFam(self.fam, self.lhs_args), self.rhs)


@dataclass(frozen=True)
class CoreValue(CoreDecl):
    """let x : t = term  (recursive)"""

    name: str
    ty: CoreType
    term: CoreTerm


@dataclass(frozen=True)
class CorePrim(CoreDecl):
    """primitive x : t  (no body; bound by the host at evaluation time)"""

    name: str
    ty: CoreType


@dataclass(frozen=True)
class CoreProgram:
    decls: tuple[CoreDecl, ...]
