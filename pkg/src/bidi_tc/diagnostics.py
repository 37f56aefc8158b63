"""Structured diagnostics shared by the whole pipeline.

Error codes are stable per family so tools can match on them:

  E0xx  parse errors                 (exit code 2)
  E1xx  name resolution errors       (exit code 1)
  E2xx  type errors                  (exit code 1)
  E3xx  guard violations             (exit code 3)
  E9xx  internal errors              (exit code 4)
"""

from __future__ import annotations

import json
from dataclasses import dataclass

PARSE = "E001"

UNBOUND_VAR = "E101"
UNBOUND_TYVAR = "E102"
UNKNOWN_TYCON = "E103"
UNKNOWN_CLASS = "E104"
ARITY_MISMATCH = "E105"
DUPLICATE_NAME = "E106"
VACUOUS_QUANTIFIER = "E107"
METHOD_MISMATCH = "E108"
DECLARATION_ORDER = "E109"
RESERVED_NAME = "E110"

UNIFY_CLASH = "E201"
OCCURS_CHECK = "E202"
UNTOUCHABLE_BIND = "E203"
RESIDUAL_CONSTRAINTS = "E204"
AMBIGUOUS_TYPE = "E205"

CYCLIC_SUPERCLASSES = "E301"
PATERSON_VIOLATION = "E302"
OVERLAPPING_INSTANCES = "E303"

FUEL_EXHAUSTED = "E901"
VERIFY_FAILED = "E902"
AMBIGUOUS_MATCH = "E903"

EXIT_OK = 0
EXIT_TYPE_ERROR = 1
EXIT_PARSE_ERROR = 2
EXIT_GUARD_ERROR = 3
EXIT_INTERNAL_ERROR = 4


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    pos: Pos | None = None

    def exit_code(self) -> int:
        return exit_code_for(self.code)

    def render(self, filename: str | None = None) -> str:
        text = f"error[{self.code}]: {self.message}"
        if self.pos is not None:
            where = filename or "<input>"
            text += f"\n --> {where}:{self.pos.line}:{self.pos.col}"
        return text

    def to_json(self, filename: str | None = None) -> str:
        payload: dict[str, object] = {"code": self.code, "message": self.message}
        if self.pos is not None:
            payload["file"] = filename or "<input>"
            payload["line"] = self.pos.line
            payload["col"] = self.pos.col
        return json.dumps(payload, sort_keys=True)


def exit_code_for(code: str) -> int:
    family = code[:2]
    if family == "E0":
        return EXIT_PARSE_ERROR
    if family in ("E1", "E2"):
        return EXIT_TYPE_ERROR
    if family == "E3":
        return EXIT_GUARD_ERROR
    return EXIT_INTERNAL_ERROR


class BidiError(Exception):
    """Base for pipeline failures that carry a diagnostic."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic
