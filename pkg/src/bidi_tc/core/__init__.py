from .ast import (
    ARROW_CON,
    Alt,
    CTApp,
    CTCon,
    CTFam,
    CTForall,
    CTQual,
    CTVar,
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
    CoreDecl,
    CoreFamily,
    CorePattern,
    CorePrim,
    CoreProgram,
    CoreTerm,
    CoreType,
    CoreValue,
    Lam,
    Let,
    Lit,
    Prop,
    TmApp,
    TyApp,
    TyLam,
    Var,
    arrow,
    arrows,
    is_type_pattern,
    lams,
    split_arrow,
    tm_apps,
    ty_apps,
    ty_lams,
)
from .pretty import dump_coercion, dump_core, dump_decl, dump_term, dump_type
from .subst import (
    alpha_eq,
    free_type_vars,
    subst_prop,
    subst_term_vars,
    subst_type,
    subst_type_in_coercion,
    subst_type_in_term,
)
