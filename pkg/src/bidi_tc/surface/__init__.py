from .ast import (
    Constraint,
    ClassDecl,
    DataDecl,
    EApp,
    ELam,
    ELet,
    EVar,
    Expr,
    InstanceDecl,
    MonoType,
    PolyType,
    PrimDecl,
    Program,
    QualType,
    Scheme,
    TArrow,
    TCon,
    TVar,
    TypeEnv,
    ValDecl,
)
from .parser import ParseError, parse_program
from .pretty import pretty_source
from .resolve import resolve_program

__all__ = [
    "Constraint",
    "ClassDecl",
    "DataDecl",
    "EApp",
    "ELam",
    "ELet",
    "EVar",
    "Expr",
    "InstanceDecl",
    "MonoType",
    "ParseError",
    "PolyType",
    "PrimDecl",
    "Program",
    "QualType",
    "Scheme",
    "TArrow",
    "TCon",
    "TVar",
    "TypeEnv",
    "ValDecl",
    "parse_program",
    "pretty_source",
    "resolve_program",
]
