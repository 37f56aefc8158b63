"""Source-language abstract syntax.

Types are stratified: monotypes, qualified types (a constraint context over
a monotype), and polytypes (a quantifier prefix over a qualified type).
Positions never participate in structural equality, so pretty/parse
round-trips compare clean.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import Pos


# --------------------------------------------------------------------------
# Types


class MonoType:
    pass


@dataclass(frozen=True)
class TVar(MonoType):
    """Type variable: a"""

    name: str


@dataclass(frozen=True)
class TArrow(MonoType):
    """Function type: t1 -> t2"""

    domain: MonoType
    codomain: MonoType


@dataclass(frozen=True)
class TCon(MonoType):
    """Saturated application of a declared constructor: List a, Int"""

    name: str
    args: tuple[MonoType, ...] = ()


@dataclass(frozen=True)
class Constraint:
    """Class constraint: TC t"""

    cls: str
    arg: MonoType


@dataclass(frozen=True)
class QualType:
    """Qualified type: (Q1, ..., Qn) => t"""

    context: tuple[Constraint, ...]
    body: MonoType


@dataclass(frozen=True)
class PolyType:
    """Polytype: forall a1 .. ak. qual"""

    vars: tuple[str, ...]
    qual: QualType

    @property
    def context(self) -> tuple[Constraint, ...]:
        return self.qual.context

    @property
    def body(self) -> MonoType:
        return self.qual.body


def mono_scheme(t: MonoType) -> PolyType:
    return PolyType((), QualType((), t))


@dataclass(frozen=True)
class Scheme:
    """Constraint scheme: forall as. (Q1, ..., Qn) => Q"""

    vars: tuple[str, ...]
    context: tuple[Constraint, ...]
    head: Constraint


# --------------------------------------------------------------------------
# Expressions


class Expr:
    pass


@dataclass(frozen=True)
class EVar(Expr):
    name: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ELam(Expr):
    binder: str
    body: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class EApp(Expr):
    fn: Expr
    arg: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ELet(Expr):
    """Monomorphic, possibly recursive local binding."""

    binder: str
    bound: Expr
    body: Expr
    pos: Pos | None = field(default=None, compare=False)


# --------------------------------------------------------------------------
# Declarations


class Decl:
    pass


@dataclass(frozen=True)
class ClassDecl(Decl):
    """class (C1 a, ..., Cn a) => TC a where { f :: sig }"""

    var: str
    supers: tuple[Constraint, ...]
    name: str
    method: str
    method_sig: PolyType
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class InstanceDecl(Decl):
    """instance (Q1, ..., Qm) => TC head where { f = body }

    Quantified variables are implicit: the free variables of head and
    context, in first-occurrence order (head first).
    """

    vars: tuple[str, ...]
    context: tuple[Constraint, ...]
    cls: str
    head: MonoType
    method: str
    body: Expr
    pos: Pos | None = field(default=None, compare=False)

    def scheme_head(self) -> Constraint:
        return Constraint(self.cls, self.head)


@dataclass(frozen=True)
class DataDecl(Decl):
    """data T a1 .. ak  (an opaque constructor of the given arity)"""

    name: str
    arity: int
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class PrimDecl(Decl):
    """primitive x :: sig  (an opaque typed constant)"""

    name: str
    sig: PolyType
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ValDecl(Decl):
    """let x = e  or  let x :: sig = e"""

    name: str
    sig: PolyType | None
    body: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Program:
    decls: tuple[Decl, ...]


# --------------------------------------------------------------------------
# Typing environment


class TypeEnv:
    """Ordered environment of bound type variables and term bindings.

    Lookup returns the innermost entry, so shadowing behaves as expected.
    Extension is persistent: existing environments are never mutated.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: tuple = ()) -> None:
        self._entries = entries

    def extend_tyvar(self, name: str) -> TypeEnv:
        return TypeEnv(self._entries + (("tyvar", name),))

    def extend_tyvars(self, names) -> TypeEnv:
        env = self
        for name in names:
            env = env.extend_tyvar(name)
        return env

    def extend_term(self, name: str, sigma: PolyType) -> TypeEnv:
        return TypeEnv(self._entries + (("term", name, sigma),))

    def lookup_term(self, name: str) -> PolyType | None:
        for entry in reversed(self._entries):
            if entry[0] == "term" and entry[1] == name:
                return entry[2]
        return None

    def has_tyvar(self, name: str) -> bool:
        return any(e[0] == "tyvar" and e[1] == name for e in self._entries)

    def tyvars(self) -> tuple[str, ...]:
        return tuple(e[1] for e in self._entries if e[0] == "tyvar")

    def term_names(self) -> tuple[str, ...]:
        return tuple(e[1] for e in self._entries if e[0] == "term")


# --------------------------------------------------------------------------
# Free variables and substitution over surface types


def free_tyvars(t) -> tuple[str, ...]:
    """Free type variables in first-occurrence order."""
    out: list[str] = []

    def go_mono(m: MonoType, bound: frozenset[str]) -> None:
        match m:
            case TVar(name):
                if name not in bound and name not in out:
                    out.append(name)
            case TArrow(d, c):
                go_mono(d, bound)
                go_mono(c, bound)
            case TCon(_, args):
                for a in args:
                    go_mono(a, bound)

    def go(node, bound: frozenset[str]) -> None:
        if isinstance(node, MonoType):
            go_mono(node, bound)
        elif isinstance(node, Constraint):
            go_mono(node.arg, bound)
        elif isinstance(node, QualType):
            for q in node.context:
                go(q, bound)
            go_mono(node.body, bound)
        elif isinstance(node, PolyType):
            go(node.qual, bound | frozenset(node.vars))
        elif isinstance(node, Scheme):
            inner = bound | frozenset(node.vars)
            for q in node.context:
                go(q, inner)
            go(node.head, inner)
        else:
            raise TypeError(f"free_tyvars: unsupported node {node!r}")

    go(t, frozenset())
    return tuple(out)


def apply_mono(mapping: dict[str, MonoType], t: MonoType) -> MonoType:
    match t:
        case TVar(name):
            return mapping.get(name, t)
        case TArrow(d, c):
            return TArrow(apply_mono(mapping, d), apply_mono(mapping, c))
        case TCon(name, args):
            return TCon(name, tuple(apply_mono(mapping, a) for a in args))
    raise TypeError(f"apply_mono: unsupported type {t!r}")


def apply_constraint(mapping: dict[str, MonoType], q: Constraint) -> Constraint:
    return Constraint(q.cls, apply_mono(mapping, q.arg))


def apply_qual(mapping: dict[str, MonoType], rho: QualType) -> QualType:
    return QualType(
        tuple(apply_constraint(mapping, q) for q in rho.context),
        apply_mono(mapping, rho.body),
    )


def apply_poly(mapping: dict[str, MonoType], sigma: PolyType) -> PolyType:
    """Capture-avoiding substitution into a polytype.

    Binders shadow the mapping; binders that would capture a variable of a
    substituted image are renamed with primes.
    """
    live = {k: v for k, v in mapping.items() if k not in sigma.vars}
    if not live:
        return sigma
    image_vars: set[str] = set()
    for v in live.values():
        image_vars.update(free_tyvars(v))
    renaming: dict[str, MonoType] = {}
    new_vars: list[str] = []
    taken = image_vars | set(sigma.vars)
    for b in sigma.vars:
        if b in image_vars:
            fresh = b
            while fresh in taken:
                fresh = fresh + "'"
            taken.add(fresh)
            renaming[b] = TVar(fresh)
            new_vars.append(fresh)
        else:
            new_vars.append(b)
    qual = sigma.qual if not renaming else apply_qual(renaming, sigma.qual)
    return PolyType(tuple(new_vars), apply_qual(live, qual))
