"""Recursive-descent parser for the surface language.

Grammar sketch (keywords reserved, so declarations are self-delimiting):

    program  ::= decl*
    decl     ::= "data" UPPER lower*
               | "primitive" lower "::" poly
               | "class" [context "=>"] UPPER lower "where" "{" lower "::" poly "}"
               | "instance" [context "=>"] UPPER atype "where" "{" lower "=" expr "}"
               | "let" lower ["::" poly] "=" expr
    poly     ::= ("forall" lower+ ".")* qual
    qual     ::= [context "=>"] mono
    context  ::= constraint | "(" constraint ("," constraint)* ")"
    constraint ::= UPPER atype
    mono     ::= btype ["->" mono]
    btype    ::= UPPER atype* | atype
    atype    ::= lower | UPPER | "(" mono ")"
    expr     ::= "\\" lower "." expr
               | "let" lower "=" expr "in" expr
               | aexpr+
    aexpr    ::= lower | "(" expr ")"
"""

from __future__ import annotations

from ..diagnostics import PARSE, Diagnostic, Pos
from . import ast
from .lexer import EOF, KEYWORD, LOWER, PUNCT, UPPER, LexError, Token, tokenize


class ParseError(Exception):
    def __init__(self, message: str, pos: Pos):
        super().__init__(f"{message} at {pos}")
        self.message = message
        self.pos = pos

    def diagnostic(self) -> Diagnostic:
        return Diagnostic(PARSE, self.message, self.pos)


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.index + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != EOF:
            self.index += 1
        return tok

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == PUNCT and tok.text == text

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == KEYWORD and tok.text == word

    def expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind != PUNCT or tok.text != text:
            raise ParseError(f"expected {text!r}, found {_describe(tok)}", tok.pos)
        return self.next()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != KEYWORD or tok.text != word:
            raise ParseError(f"expected {word!r}, found {_describe(tok)}", tok.pos)
        return self.next()

    def expect_lower(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != LOWER:
            raise ParseError(f"expected {what}, found {_describe(tok)}", tok.pos)
        return self.next()

    def expect_upper(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != UPPER:
            raise ParseError(f"expected {what}, found {_describe(tok)}", tok.pos)
        return self.next()


def _describe(tok: Token) -> str:
    if tok.kind == EOF:
        return "end of input"
    return repr(tok.text)


def parse_program(text: str) -> ast.Program:
    """Parse a whole source file; raises ParseError at the first problem."""
    try:
        tokens = tokenize(text)
    except LexError as err:
        raise ParseError(err.message, err.pos) from None
    stream = _Stream(tokens)
    decls: list[ast.Decl] = []
    while stream.peek().kind != EOF:
        decls.append(_decl(stream))
    return ast.Program(tuple(decls))


def parse_type(text: str) -> ast.PolyType:
    """Parse a single polytype (handy for tests and tooling)."""
    try:
        tokens = tokenize(text)
    except LexError as err:
        raise ParseError(err.message, err.pos) from None
    stream = _Stream(tokens)
    sigma = _poly(stream)
    tok = stream.peek()
    if tok.kind != EOF:
        raise ParseError(f"trailing input {_describe(tok)}", tok.pos)
    return sigma


def parse_expr(text: str) -> ast.Expr:
    try:
        tokens = tokenize(text)
    except LexError as err:
        raise ParseError(err.message, err.pos) from None
    stream = _Stream(tokens)
    expr = _expr(stream)
    tok = stream.peek()
    if tok.kind != EOF:
        raise ParseError(f"trailing input {_describe(tok)}", tok.pos)
    return expr


# --------------------------------------------------------------------------
# Declarations


def _decl(stream: _Stream) -> ast.Decl:
    tok = stream.peek()
    if tok.kind != KEYWORD:
        raise ParseError(f"expected a declaration, found {_describe(tok)}", tok.pos)
    if tok.text == "data":
        return _data_decl(stream)
    if tok.text == "primitive":
        return _prim_decl(stream)
    if tok.text == "class":
        return _class_decl(stream)
    if tok.text == "instance":
        return _instance_decl(stream)
    if tok.text == "let":
        return _val_decl(stream)
    raise ParseError(f"expected a declaration, found {_describe(tok)}", tok.pos)


def _data_decl(stream: _Stream) -> ast.DataDecl:
    pos = stream.expect_keyword("data").pos
    name = stream.expect_upper("a type constructor name").text
    params: list[str] = []
    while stream.peek().kind == LOWER:
        param = stream.next().text
        if param in params:
            raise ParseError(f"duplicate type parameter {param!r}", stream.peek().pos)
        params.append(param)
    return ast.DataDecl(name, len(params), pos)


def _prim_decl(stream: _Stream) -> ast.PrimDecl:
    pos = stream.expect_keyword("primitive").pos
    name = stream.expect_lower("a primitive name").text
    stream.expect_punct("::")
    sig = _poly(stream)
    return ast.PrimDecl(name, sig, pos)


def _class_decl(stream: _Stream) -> ast.ClassDecl:
    pos = stream.expect_keyword("class").pos
    supers = _optional_context(stream)
    name = stream.expect_upper("a class name").text
    var = stream.expect_lower("the class variable").text
    stream.expect_keyword("where")
    stream.expect_punct("{")
    method = stream.expect_lower("a method name").text
    stream.expect_punct("::")
    sig = _poly(stream)
    stream.expect_punct("}")
    return ast.ClassDecl(var, supers, name, method, sig, pos)


def _instance_decl(stream: _Stream) -> ast.InstanceDecl:
    pos = stream.expect_keyword("instance").pos
    context = _optional_context(stream)
    cls = stream.expect_upper("a class name").text
    head = _atype(stream)
    stream.expect_keyword("where")
    stream.expect_punct("{")
    method = stream.expect_lower("a method name").text
    stream.expect_punct("=")
    body = _expr(stream)
    stream.expect_punct("}")
    vars_ = ast.free_tyvars(ast.QualType(context, head))
    # head variables come first in the implicit quantifier list
    head_vars = ast.free_tyvars(head)
    ordered = tuple(head_vars) + tuple(v for v in vars_ if v not in head_vars)
    return ast.InstanceDecl(ordered, context, cls, head, method, body, pos)


def _val_decl(stream: _Stream) -> ast.ValDecl:
    pos = stream.expect_keyword("let").pos
    name = stream.expect_lower("a binding name").text
    sig: ast.PolyType | None = None
    if stream.at_punct("::"):
        stream.next()
        sig = _poly(stream)
    stream.expect_punct("=")
    body = _expr(stream)
    return ast.ValDecl(name, sig, body, pos)


# --------------------------------------------------------------------------
# Types


def _poly(stream: _Stream) -> ast.PolyType:
    vars_: list[str] = []
    while stream.at_keyword("forall"):
        stream.next()
        got_one = False
        while stream.peek().kind == LOWER:
            name = stream.next().text
            if name in vars_:
                raise ParseError(f"duplicate quantifier {name!r}", stream.peek().pos)
            vars_.append(name)
            got_one = True
        if not got_one:
            tok = stream.peek()
            raise ParseError("expected type variables after 'forall'", tok.pos)
        stream.expect_punct(".")
    qual = _qual(stream)
    return ast.PolyType(tuple(vars_), qual)


def _qual(stream: _Stream) -> ast.QualType:
    context = _optional_context(stream)
    body = _mono(stream)
    if stream.at_punct("=>"):
        # right-nested context: Q => Q' => t
        stream.next()
        head = _mono_as_constraint(body, stream)
        rest = _qual(stream)
        return ast.QualType(context + (head,) + rest.context, rest.body)
    return ast.QualType(context, body)


def _optional_context(stream: _Stream) -> tuple[ast.Constraint, ...]:
    """Parse ``(Q1, ..., Qn) =>`` or ``Q =>`` if present; backtracks otherwise."""
    mark = stream.index
    try:
        if stream.at_punct("("):
            stream.next()
            constraints = [_constraint(stream)]
            while stream.at_punct(","):
                stream.next()
                constraints.append(_constraint(stream))
            stream.expect_punct(")")
            stream.expect_punct("=>")
            return tuple(constraints)
        if stream.peek().kind == UPPER:
            constraint = _constraint(stream)
            stream.expect_punct("=>")
            return (constraint,)
    except ParseError:
        pass
    stream.index = mark
    return ()


def _constraint(stream: _Stream) -> ast.Constraint:
    cls = stream.expect_upper("a class name").text
    arg = _atype(stream)
    return ast.Constraint(cls, arg)


def _mono_as_constraint(t: ast.MonoType, stream: _Stream) -> ast.Constraint:
    """Reinterpret an already-parsed monotype as a single-constraint context."""
    if isinstance(t, ast.TCon) and len(t.args) == 1:
        return ast.Constraint(t.name, t.args[0])
    tok = stream.peek()
    raise ParseError("malformed constraint before '=>'", tok.pos)


def _mono(stream: _Stream) -> ast.MonoType:
    left = _btype(stream)
    if stream.at_punct("->"):
        stream.next()
        right = _mono(stream)
        return ast.TArrow(left, right)
    return left


def _btype(stream: _Stream) -> ast.MonoType:
    tok = stream.peek()
    if tok.kind == UPPER:
        name = stream.next().text
        args: list[ast.MonoType] = []
        while _at_atype(stream):
            args.append(_atype(stream))
        return ast.TCon(name, tuple(args))
    return _atype(stream)


def _at_atype(stream: _Stream) -> bool:
    tok = stream.peek()
    return tok.kind in (LOWER, UPPER) or (tok.kind == PUNCT and tok.text == "(")


def _atype(stream: _Stream) -> ast.MonoType:
    tok = stream.peek()
    if tok.kind == LOWER:
        stream.next()
        return ast.TVar(tok.text)
    if tok.kind == UPPER:
        stream.next()
        return ast.TCon(tok.text, ())
    if stream.at_punct("("):
        stream.next()
        inner = _mono(stream)
        stream.expect_punct(")")
        return inner
    raise ParseError(f"expected a type, found {_describe(tok)}", tok.pos)


# --------------------------------------------------------------------------
# Expressions


def _expr(stream: _Stream) -> ast.Expr:
    tok = stream.peek()
    if stream.at_punct("\\"):
        pos = stream.next().pos
        binder = stream.expect_lower("a lambda binder").text
        stream.expect_punct(".")
        body = _expr(stream)
        return ast.ELam(binder, body, pos)
    if stream.at_keyword("let"):
        pos = stream.next().pos
        binder = stream.expect_lower("a binding name").text
        stream.expect_punct("=")
        bound = _expr(stream)
        stream.expect_keyword("in")
        body = _expr(stream)
        return ast.ELet(binder, bound, body, pos)
    fn = _aexpr(stream)
    while _at_aexpr(stream):
        argpos = stream.peek().pos
        arg = _aexpr(stream)
        fn = ast.EApp(fn, arg, argpos)
    return fn


def _at_aexpr(stream: _Stream) -> bool:
    tok = stream.peek()
    return tok.kind == LOWER or (tok.kind == PUNCT and tok.text == "(")


def _aexpr(stream: _Stream) -> ast.Expr:
    tok = stream.peek()
    if tok.kind == LOWER:
        stream.next()
        return ast.EVar(tok.text, tok.pos)
    if stream.at_punct("("):
        stream.next()
        inner = _expr(stream)
        stream.expect_punct(")")
        return inner
    raise ParseError(f"expected an expression, found {_describe(tok)}", tok.pos)
