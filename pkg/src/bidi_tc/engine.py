"""Constraint machinery: unification, simplification, and closure.

Three related judgments live here.

* `unify` solves equality constraints between monotypes, producing an
  idempotent most-general substitution that never binds an untouchable
  (signature-bound) variable.
* `simplify_one`/`simplify_all` rewrite wanted class constraints backwards
  through axiom heads, building an evidence substitution. Axiom heads are
  *matched*, not unified: only the axiom's quantified variables are
  substitutable, so a touchable wanted variable is never committed during
  entailment.
* `mp_step`/`closure` saturate given constraints forwards under
  single-premise schemes (superclass projections and inverted instance
  axioms), emitting the dictionary let-context that binds each derived
  dictionary. `sc_closure` and `inv_sc_closure` package this for the two
  pipeline modes.

`entail_oracle` is a depth-bounded backward-chaining prover over the whole
program theory. It exists to cross-check the simplifier in tests and is
not part of the compilation pipeline.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import core
from .lowering import elab_ct, elab_ty
from .names import NameSupply
from .surface import ast as s
from .surface.ast import Constraint, MonoType, Scheme, TArrow, TCon, TVar

DEFENSIVE_FUEL = 10_000
ORACLE_DEFAULT_FUEL = 8


class EngineError(Exception):
    pass


class FuelExhausted(EngineError):
    """The defensive step bound tripped; indicates a guard bug upstream."""


class AmbiguousMatch(EngineError):
    """Two instance axiom heads matched one wanted; precluded by the
    overlap guard, reported defensively."""


class UnifyError(EngineError):
    pass


class Clash(UnifyError):
    def __init__(self, left: MonoType, right: MonoType):
        from .surface.pretty import pretty_source

        super().__init__(
            f"cannot match {pretty_source(left)!r} with {pretty_source(right)!r}"
        )
        self.left = left
        self.right = right


class OccursCheck(UnifyError):
    def __init__(self, var: str, ty: MonoType):
        from .surface.pretty import pretty_source

        super().__init__(f"occurs check: {var!r} appears in {pretty_source(ty)!r}")
        self.var = var
        self.ty = ty


class UntouchableBind(UnifyError):
    def __init__(self, var: str, ty: MonoType):
        from .surface.pretty import pretty_source

        super().__init__(
            f"cannot instantiate the rigid type variable {var!r} "
            f"to {pretty_source(ty)!r}"
        )
        self.var = var
        self.ty = ty


# --------------------------------------------------------------------------
# Substitutions


@dataclass(frozen=True)
class TypeSubst:
    mapping: dict[str, MonoType] = field(default_factory=dict)

    def apply(self, t: MonoType) -> MonoType:
        return s.apply_mono(self.mapping, t)

    def apply_constraint(self, q: Constraint) -> Constraint:
        return s.apply_constraint(self.mapping, q)

    def apply_ann(self, anns: list[AnnConstraint]) -> list[AnnConstraint]:
        return [AnnConstraint(a.var, self.apply_constraint(a.constraint)) for a in anns]

    def core_mapping(self) -> dict[str, core.CoreType]:
        return {k: elab_ty(v) for k, v in self.mapping.items()}

    def apply_term(self, t: core.CoreTerm) -> core.CoreTerm:
        return core.subst_type_in_term(self.core_mapping(), t)

    def domain(self) -> frozenset[str]:
        return frozenset(self.mapping)


@dataclass(frozen=True)
class EvidenceSubst:
    mapping: dict[str, core.CoreTerm] = field(default_factory=dict)

    def apply(self, t: core.CoreTerm) -> core.CoreTerm:
        return core.subst_term_vars(self.mapping, t)

    @staticmethod
    def compose(later: EvidenceSubst, earlier: EvidenceSubst) -> EvidenceSubst:
        out = {k: later.apply(v) for k, v in earlier.mapping.items()}
        for k, v in later.mapping.items():
            if k not in out:
                out[k] = v
        return EvidenceSubst(out)


# --------------------------------------------------------------------------
# Annotated constraints, axioms, theories, dictionary contexts


@dataclass(frozen=True)
class AnnConstraint:
    """Evidence-annotated wanted or given constraint."""

    var: str
    constraint: Constraint


@dataclass(frozen=True)
class Axiom:
    """Evidence-annotated constraint scheme, usable for entailment.

    `local` marks schemes that arose from given constraints rather than
    instance declarations; simplification prefers them.
    """

    var: str
    scheme: Scheme
    local: bool = False


def local_axiom(ann: AnnConstraint) -> Axiom:
    return Axiom(ann.var, Scheme((), (), ann.constraint), local=True)


@dataclass(frozen=True)
class ProgramTheory:
    """The four-component axiom store: inverted, superclass, instance, local."""

    inverted: tuple[Axiom, ...] = ()
    superclass: tuple[Axiom, ...] = ()
    instance: tuple[Axiom, ...] = ()
    local: tuple[AnnConstraint, ...] = ()

    def with_locals(self, anns) -> ProgramTheory:
        return ProgramTheory(
            self.inverted, self.superclass, self.instance, self.local + tuple(anns)
        )

    def add_instance(self, axiom: Axiom) -> ProgramTheory:
        return ProgramTheory(
            self.inverted, self.superclass, self.instance + (axiom,), self.local
        )

    def add_superclass(self, axioms) -> ProgramTheory:
        return ProgramTheory(
            self.inverted, self.superclass + tuple(axioms), self.instance, self.local
        )

    def add_inverted(self, axioms) -> ProgramTheory:
        return ProgramTheory(
            self.inverted + tuple(axioms), self.superclass, self.instance, self.local
        )

    def conflated(self) -> list[Axiom]:
        return (
            list(self.inverted)
            + list(self.superclass)
            + list(self.instance)
            + [local_axiom(a) for a in self.local]
        )


@dataclass(frozen=True)
class DictContext:
    """let-bindings with a hole; each entry may use earlier entries only."""

    entries: tuple[tuple[str, core.CoreType, core.CoreTerm], ...] = ()

    def push(self, name: str, ty: core.CoreType, term: core.CoreTerm) -> DictContext:
        return DictContext(self.entries + ((name, ty, term),))

    def concat(self, other: DictContext) -> DictContext:
        return DictContext(self.entries + other.entries)

    def wrap(self, term: core.CoreTerm) -> core.CoreTerm:
        for name, ty, bound in reversed(self.entries):
            term = core.Let(name, ty, bound, term)
        return term

    def __len__(self) -> int:
        return len(self.entries)


# --------------------------------------------------------------------------
# Unification


def unify(untouchables, pairs) -> TypeSubst:
    """Most general unifier of the given equalities.

    `untouchables` are rigid: they unify with themselves only.
    """
    untouch = frozenset(untouchables)
    theta: dict[str, MonoType] = {}
    work = deque(pairs)

    def bind(name: str, t: MonoType) -> None:
        one = {name: t}
        for k in list(theta):
            theta[k] = s.apply_mono(one, theta[k])
        theta[name] = t

    while work:
        left, right = work.popleft()
        left = s.apply_mono(theta, left)
        right = s.apply_mono(theta, right)
        if left == right:
            continue
        if isinstance(left, TVar) and left.name not in untouch:
            if left.name in _fv(right):
                raise OccursCheck(left.name, right)
            bind(left.name, right)
        elif isinstance(right, TVar) and right.name not in untouch:
            if right.name in _fv(left):
                raise OccursCheck(right.name, left)
            bind(right.name, left)
        elif isinstance(left, TVar):
            raise UntouchableBind(left.name, right)
        elif isinstance(right, TVar):
            raise UntouchableBind(right.name, left)
        elif isinstance(left, TArrow) and isinstance(right, TArrow):
            work.append((left.domain, right.domain))
            work.append((left.codomain, right.codomain))
        elif (
            isinstance(left, TCon)
            and isinstance(right, TCon)
            and left.name == right.name
            and len(left.args) == len(right.args)
        ):
            work.extend(zip(left.args, right.args))
        else:
            raise Clash(left, right)
    return TypeSubst(theta)


def _fv(t: MonoType) -> frozenset[str]:
    return frozenset(s.free_tyvars(t))


def match_type(vars_, pattern: MonoType, target: MonoType) -> dict[str, MonoType] | None:
    """One-way matching: only `vars_` (the pattern's own quantified
    variables) are substitutable; every variable of the target is rigid."""
    subst: dict[str, MonoType] = {}
    substitutable = frozenset(vars_)

    def go(p: MonoType, t: MonoType) -> bool:
        match p:
            case TVar(name) if name in substitutable:
                if name in subst:
                    return subst[name] == t
                subst[name] = t
                return True
            case TVar(name):
                return isinstance(t, TVar) and t.name == name
            case TArrow(d1, c1):
                return (
                    isinstance(t, TArrow) and go(d1, t.domain) and go(c1, t.codomain)
                )
            case TCon(name, args):
                return (
                    isinstance(t, TCon)
                    and t.name == name
                    and len(t.args) == len(args)
                    and all(go(a, b) for a, b in zip(args, t.args))
                )
        raise TypeError(f"match_type: unsupported type {p!r}")

    return subst if go(pattern, target) else None


def _match_scheme(axiom: Axiom, wanted: Constraint) -> dict[str, MonoType] | None:
    if axiom.scheme.head.cls != wanted.cls:
        return None
    theta = match_type(axiom.scheme.vars, axiom.scheme.head.arg, wanted.arg)
    if theta is None:
        return None
    # A variable quantified but matched nowhere cannot be instantiated; the
    # Paterson guard precludes such schemes, so refuse the match defensively.
    if any(v not in theta for v in axiom.scheme.vars):
        return None
    return theta


# --------------------------------------------------------------------------
# Simplification of wanted constraints (backwards)


def _instantiate(
    axiom: Axiom, theta: dict[str, MonoType], supply: NameSupply
) -> tuple[list[AnnConstraint], core.CoreTerm]:
    new_wanteds = [
        AnnConstraint(supply.fresh_evidence(), s.apply_constraint(theta, q))
        for q in axiom.scheme.context
    ]
    evidence: core.CoreTerm = core.Var(axiom.var)
    evidence = core.ty_apps(evidence, (elab_ty(theta[v]) for v in axiom.scheme.vars))
    evidence = core.tm_apps(evidence, (core.Var(w.var) for w in new_wanteds))
    return new_wanteds, evidence


def simplify_one(
    untouchables, axioms, wanted: AnnConstraint, supply: NameSupply
) -> tuple[list[AnnConstraint], EvidenceSubst] | None:
    """Rewrite one wanted through a matching axiom head, or report no match.

    Given constraints (local axioms) take precedence over instance axioms;
    two matching instance heads indicate overlap and raise.
    """
    local_hit: tuple[Axiom, dict[str, MonoType]] | None = None
    instance_hits: list[tuple[Axiom, dict[str, MonoType]]] = []
    for axiom in axioms:
        theta = _match_scheme(axiom, wanted.constraint)
        if theta is None:
            continue
        if axiom.local:
            if local_hit is None:
                local_hit = (axiom, theta)
        else:
            instance_hits.append((axiom, theta))
    if local_hit is not None:
        axiom, theta = local_hit
    elif len(instance_hits) > 1:
        names = ", ".join(ax.var for ax, _ in instance_hits)
        raise AmbiguousMatch(
            f"multiple axiom heads match wanted constraint "
            f"({names}); overlapping instances slipped past the guard"
        )
    elif instance_hits:
        axiom, theta = instance_hits[0]
    else:
        return None
    new_wanteds, evidence = _instantiate(axiom, theta, supply)
    return new_wanteds, EvidenceSubst({wanted.var: evidence})


def simplify_all(
    untouchables, axioms, wanteds, supply: NameSupply
) -> tuple[list[AnnConstraint], EvidenceSubst]:
    """Exhaustive FIFO fixpoint of `simplify_one`.

    Returns the residual constraints (which admit no further step) and the
    composed evidence substitution.
    """
    queue = deque(wanteds)
    residual: list[AnnConstraint] = []
    eta = EvidenceSubst({})
    fuel = DEFENSIVE_FUEL
    while queue:
        fuel -= 1
        if fuel < 0:
            raise FuelExhausted("simplification did not terminate")
        wanted = queue.popleft()
        step = simplify_one(untouchables, axioms, wanted, supply)
        if step is None:
            residual.append(wanted)
        else:
            new_wanteds, step_eta = step
            queue.extend(new_wanteds)
            eta = EvidenceSubst.compose(step_eta, eta)
    return residual, eta


# --------------------------------------------------------------------------
# Modus-ponens closure of given constraints (forwards)


def mp_step(
    untouchables, axioms, given: AnnConstraint, supply: NameSupply
) -> tuple[list[AnnConstraint], DictContext]:
    """One round of modus ponens: the premise of every single-premise scheme
    is matched against `given`; each hit derives the scheme's conclusion and
    a let-binding for its dictionary."""
    derived: list[AnnConstraint] = []
    ctx = DictContext()
    for axiom in axioms:
        if len(axiom.scheme.context) != 1:
            raise EngineError(
                f"mp_step requires single-premise schemes, got {axiom.var!r}"
            )
        premise = axiom.scheme.context[0]
        if premise.cls != given.constraint.cls:
            continue
        theta = match_type(axiom.scheme.vars, premise.arg, given.constraint.arg)
        if theta is None or any(v not in theta for v in axiom.scheme.vars):
            continue
        conclusion = s.apply_constraint(theta, axiom.scheme.head)
        name = supply.fresh_evidence()
        evidence: core.CoreTerm = core.Var(axiom.var)
        evidence = core.ty_apps(evidence, (elab_ty(theta[v]) for v in axiom.scheme.vars))
        evidence = core.TmApp(evidence, core.Var(given.var))
        derived.append(AnnConstraint(name, conclusion))
        ctx = ctx.push(name, elab_ct(conclusion), evidence)
    return derived, ctx


def closure(
    untouchables, axioms, locals_, supply: NameSupply
) -> tuple[list[AnnConstraint], DictContext]:
    """Transitive closure of `mp_step` starting from the given constraints.

    The result contains the originals; derived constraints are deduplicated
    (first derivation wins and keeps its evidence binding).
    """
    result: list[AnnConstraint] = list(locals_)
    seen = {(ann.constraint.cls, ann.constraint.arg) for ann in result}
    ctx = DictContext()
    queue = deque(result)
    fuel = DEFENSIVE_FUEL
    while queue:
        fuel -= 1
        if fuel < 0:
            raise FuelExhausted("closure did not terminate")
        given = queue.popleft()
        derived, step_ctx = mp_step(untouchables, axioms, given, supply)
        for ann, entry in zip(derived, step_ctx.entries):
            key = (ann.constraint.cls, ann.constraint.arg)
            if key in seen:
                continue
            seen.add(key)
            result.append(ann)
            ctx = ctx.push(*entry)
            queue.append(ann)
    return result, ctx


def sc_closure(
    untouchables, theory: ProgramTheory, supply: NameSupply
) -> tuple[list[Axiom], DictContext]:
    """Saturate the locals under superclass schemes; the usable axiom set is
    the instance axioms plus the closed locals, superclass schemes dropped."""
    closed, ctx = closure(untouchables, theory.superclass, theory.local, supply)
    usable = list(theory.instance) + [local_axiom(a) for a in closed]
    return usable, ctx


def inv_sc_closure(
    untouchables, theory: ProgramTheory, supply: NameSupply
) -> tuple[list[Axiom], DictContext]:
    """As `sc_closure`, but saturating under inverted instance axioms as
    well as superclass schemes."""
    base = tuple(theory.inverted) + tuple(theory.superclass)
    closed, ctx = closure(untouchables, base, theory.local, supply)
    usable = list(theory.instance) + [local_axiom(a) for a in closed]
    return usable, ctx


# --------------------------------------------------------------------------
# Declarative entailment oracle (tests only)


class _Sentinel:
    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name


FAIL = _Sentinel("Fail")
OUT_OF_FUEL = _Sentinel("OutOfFuel")


def entail_oracle(theory: ProgramTheory, gamma, wanted: Constraint, fuel: int):
    """Depth-bounded backward chaining over the whole (conflated) theory.

    Returns evidence on success, FAIL if the search space is exhausted, or
    OUT_OF_FUEL if some branch was cut off by the depth bound.
    """
    schemes = theory.conflated()
    hit_bound = False

    def derive(goal: Constraint, depth: int) -> core.CoreTerm | None:
        nonlocal hit_bound
        for axiom in schemes:
            theta = _match_scheme(axiom, goal)
            if theta is None:
                continue
            if depth <= 0:
                hit_bound = True
                continue
            evidence: core.CoreTerm = core.Var(axiom.var)
            evidence = core.ty_apps(
                evidence, (elab_ty(theta[v]) for v in axiom.scheme.vars)
            )
            ok = True
            for premise in axiom.scheme.context:
                sub = derive(s.apply_constraint(theta, premise), depth - 1)
                if sub is None:
                    ok = False
                    break
                evidence = core.TmApp(evidence, sub)
            if ok:
                return evidence
        return None

    term = derive(wanted, fuel)
    if term is not None:
        return term
    return OUT_OF_FUEL if hit_bound else FAIL
