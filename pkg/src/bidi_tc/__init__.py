"""bidi-tc: a compiler frontend for a small class-based language.

The pipeline parses ``.btc`` source, checks the termination/coherence
guards, infers and elaborates into an explicitly-typed core calculus via
dictionary passing, re-verifies the core with an independent checker, and
can evaluate the result.
"""

__version__ = "0.1.0"
