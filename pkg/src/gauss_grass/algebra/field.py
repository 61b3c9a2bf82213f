"""Coefficient fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any

from sympy.polys.domains import FF, QQ

from gauss_grass.errors import FieldError

#: Largest admissible modulus (exclusive).
MODULUS_BOUND = 2**61

# Domain element of the backing sympy domain (gmpy2 mpq or a ModularInteger).
FieldElem = Any


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Exact coefficient field.

    ``kind`` is ``"QQ"`` for the rationals or ``"GF"`` for a prime field, in
    which case ``modulus`` holds the prime.
    """

    kind: str = "QQ"
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "QQ":
            if self.modulus is not None:
                raise FieldError("the rationals take no modulus")
        elif self.kind == "GF":
            p = self.modulus
            if not isinstance(p, int) or isinstance(p, bool):
                raise FieldError(f"modulus must be an integer, got {p!r}")
            if p >= MODULUS_BOUND:
                raise FieldError(f"modulus {p} exceeds 2^61")
            if not is_prime(p):
                raise FieldError(f"modulus not prime: {p}")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("QQ")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("GF", p)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Accepts ``QQ``, ``GF 5``, ``GF:5`` and ``GF(5)``."""
        s = text.strip()
        if s.upper() in ("QQ", "Q"):
            return cls.rationals()
        m = re.fullmatch(r"(?:GF|F)\s*(?:[:(]\s*|\s+)?(-?\d+)\s*\)?", s, re.IGNORECASE)
        if not m:
            raise FieldError(f"cannot parse field {text!r} (expected QQ or GF <p>)")
        return cls.prime(int(m.group(1)))

    @property
    def is_rational(self) -> bool:
        return self.kind == "QQ"

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    @cached_property
    def domain(self):
        if self.kind == "QQ":
            return QQ
        return FF(self.modulus, symmetric=False)

    def elem(self, value: int | Fraction | str) -> FieldElem:
        """Convert an int, Fraction or ``"a/b"`` string to a field element."""
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if self.kind == "GF" and value.denominator % self.modulus == 0:
                raise FieldError(f"{value} has no residue mod {self.modulus}")
            dom = self.domain
            return dom.quo(dom(value.numerator), dom(value.denominator))
        return self.domain(value)

    def to_python(self, a: FieldElem) -> int | Fraction:
        """Exact Python value: a Fraction over QQ, a residue in [0, p) over GF(p)."""
        if self.kind == "QQ":
            return Fraction(int(a.numerator), int(a.denominator))
        return int(a) % self.modulus

    def format(self, a: FieldElem) -> str:
        return str(self.to_python(a))

    def __str__(self) -> str:
        return "QQ" if self.kind == "QQ" else f"GF {self.modulus}"
