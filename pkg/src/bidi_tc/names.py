"""Deterministic fresh-name generation.

One supply is created per elaboration run; every generated name carries a
``$`` prefix, which the source lexer rejects, so generated names can never
collide with user-written ones.
"""

from __future__ import annotations


class NameSupply:
    """Monotonic counter shared by all name families of one run."""

    def __init__(self) -> None:
        self._next = 0

    def fresh(self, prefix: str) -> str:
        name = f"${prefix}{self._next}"
        self._next += 1
        return name

    def fresh_tyvar(self) -> str:
        return self.fresh("a")

    def fresh_evidence(self) -> str:
        return self.fresh("d")


def prime_away(name: str, taken: set[str]) -> str:
    """Append primes until `name` avoids everything in `taken`."""
    while name in taken:
        name = name + "'"
    return name
