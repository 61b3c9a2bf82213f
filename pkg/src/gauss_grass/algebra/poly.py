"""Sparse multivariate polynomials and canonical rational functions.

Arithmetic, exact division and GCDs are delegated to sympy's sparse
``PolyRing`` (a dict from exponent tuples to domain coefficients).  This
module owns everything with a contract attached to it: parameter
bookkeeping, differentiation, canonical forms, evaluation and printing in
the package's expression grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import flint
from sympy import Symbol
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from gauss_grass.algebra.field import FieldElem, FieldSpec
from gauss_grass.errors import (
    ChartError,
    DimensionError,
    DivisionByZeroError,
    RingMismatchError,
    UnknownParameterError,
)

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Ring:
    """Polynomial ring ``K[params]`` (and its fraction field) over ``field``."""

    params: tuple[str, ...]
    field: FieldSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params):
            raise DimensionError(f"duplicate parameter names in {self.params}")
        for name in self.params:
            if not IDENT_RE.match(name):
                raise DimensionError(f"invalid parameter name {name!r}")

    @cached_property
    def sp(self) -> PolyRing:
        return PolyRing(tuple(Symbol(p) for p in self.params), self.field.domain, grlex)

    @property
    def n(self) -> int:
        return len(self.params)

    def index(self, name: str) -> int:
        try:
            return self.params.index(name)
        except ValueError:
            raise UnknownParameterError(f"unknown parameter {name!r}") from None

    def extend(self, names: Iterable[str]) -> Ring:
        return Ring(self.params + tuple(names), self.field)

    def fresh(self, stem: str, count: int, start: int = 1, avoid: Iterable[str] = ()) -> list[str]:
        """``count`` names ``stem<k>`` not clashing with this ring's params."""
        taken = set(self.params) | set(avoid)
        suffix = ""
        while True:
            names = [f"{stem}{k}{suffix}" for k in range(start, start + count)]
            if not taken.intersection(names):
                return names
            suffix += "_"

    # constructors
    def poly(self, value: int | FieldElem = 0) -> MultiPoly:
        return MultiPoly(self, self.sp(value))

    def gen(self, name: str) -> MultiPoly:
        return MultiPoly(self, self.sp.gens[self.index(name)])

    def rat(self, value: int | FieldElem = 0) -> RatFunc:
        return RatFunc._make(self, self.sp(value), self.sp.one)

    def rat_gen(self, name: str) -> RatFunc:
        return RatFunc._make(self, self.sp.gens[self.index(name)], self.sp.one)

    def point(self, values: Sequence) -> tuple[FieldElem, ...]:
        if len(values) != self.n:
            raise DimensionError(f"point has {len(values)} coordinates, expected {self.n}")
        return tuple(self.field.elem(v) if isinstance(v, (int, str)) or _is_fraction(v) else v
                     for v in values)


def _is_fraction(v) -> bool:
    from fractions import Fraction

    return isinstance(v, Fraction)


# raw-level helpers (operate on sympy PolyElements)


def raw_diff(p, i: int):
    """Formal partial derivative in generator ``i``; drops zero coefficients."""
    ring = p.ring
    dom = ring.domain
    out = {}
    for mon, c in p.items():
        e = mon[i]
        if e:
            c2 = c * dom(e)
            if c2:
                out[mon[:i] + (e - 1,) + mon[i + 1:]] = c2
    return ring.from_dict(out) if out else ring.zero


def raw_eval(p, point):
    ring = p.ring
    if not ring.ngens:
        return p.coeff(1) if p else ring.domain.zero
    if not p:
        return ring.domain.zero
    return ring.domain.convert(p(*point))


def format_raw(p, names: Sequence[str], field: FieldSpec) -> str:
    if not p:
        return "0"
    out = []
    for mon, c in p.terms():
        v = field.to_python(c)
        neg = v < 0
        a = -v if neg else v
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, mon) if e)
        if not mono:
            s = str(a)
        elif a == 1:
            s = mono
        else:
            s = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + s)
        else:
            out.append((" - " if neg else " + ") + s)
    return "".join(out)


def _is_single_power(p) -> bool:
    if len(p) != 1:
        return False
    (mon, c), = p.items()
    return c == p.ring.domain.one and sum(1 for e in mon if e) == 1


class MultiPoly:
    """Polynomial over ``ring.field`` in ``ring.params``; immutable."""

    __slots__ = ("ring", "raw")

    def __init__(self, ring: Ring, raw):
        self.ring = ring
        self.raw = raw

    @classmethod
    def from_terms(cls, ring: Ring, terms: Mapping[tuple[int, ...], object]) -> MultiPoly:
        for mon in terms:
            if len(mon) != ring.n:
                raise DimensionError(f"exponent vector {mon} has wrong length")
        d = {tuple(m): ring.field.elem(c) if isinstance(c, (int, str)) or _is_fraction(c) else c
             for m, c in terms.items()}
        return cls(ring, ring.sp.from_dict({m: c for m, c in d.items() if c}) if d else ring.sp.zero)

    @property
    def params(self) -> tuple[str, ...]:
        return self.ring.params

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    @property
    def terms(self) -> dict[tuple[int, ...], FieldElem]:
        return dict(self.raw.items())

    def is_zero(self) -> bool:
        return not self.raw

    def total_degree(self) -> int:
        return max((sum(m) for m in self.raw), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.raw}) <= 1

    def _check(self, other: MultiPoly) -> None:
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other.raw
        if isinstance(other, int):
            return self.ring.sp(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MultiPoly(self.ring, self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MultiPoly(self.ring, self.raw - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MultiPoly(self.ring, o - self.raw)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MultiPoly(self.ring, self.raw * o)

    __rmul__ = __mul__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.ring, -self.raw)

    def __pow__(self, k: int) -> MultiPoly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        return MultiPoly(self.ring, self.raw**k)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.raw == other.raw
        if isinstance(other, int):
            return self.raw == self.ring.sp(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, self.raw))

    def diff(self, var: str) -> MultiPoly:
        return MultiPoly(self.ring, raw_diff(self.raw, self.ring.index(var)))

    def eval(self, point: Sequence) -> FieldElem:
        return raw_eval(self.raw, self.ring.point(point))

    def to_ratfunc(self) -> RatFunc:
        return RatFunc._make(self.ring, self.raw, self.ring.sp.one)

    def __str__(self) -> str:
        return format_raw(self.raw, self.ring.params, self.ring.field)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


class RatFunc:
    """Quotient ``num/den`` in lowest terms, ``den`` with leading coefficient 1.

    The leading coefficient is taken in graded-lexicographic order on the
    ring's declared parameter order, so canonical forms (and hence ``==``)
    are structural.
    """

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: Ring, num, den=None):
        sp = ring.sp
        if isinstance(num, MultiPoly):
            num = num.raw
        if isinstance(den, MultiPoly):
            den = den.raw
        num = sp(num) if not hasattr(num, "ring") else num
        den = sp.one if den is None else (sp(den) if not hasattr(den, "ring") else den)
        self.ring = ring
        self.num, self.den = _canonical(num, den)

    @classmethod
    def _make(cls, ring: Ring, num, den) -> RatFunc:
        # Trusted constructor: (num, den) already canonical.
        obj = object.__new__(cls)
        obj.ring = ring
        obj.num = num
        obj.den = den
        return obj

    @property
    def params(self) -> tuple[str, ...]:
        return self.ring.params

    @property
    def numerator(self) -> MultiPoly:
        return MultiPoly(self.ring, self.num)

    @property
    def denominator(self) -> MultiPoly:
        return MultiPoly(self.ring, self.den)

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == 1

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def is_one(self) -> bool:
        return self.den == 1 and self.num == 1

    def _coerce(self, other) -> RatFunc:
        if isinstance(other, RatFunc):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other.to_ratfunc()
        if isinstance(other, int):
            return self.ring.rat(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _add(self.ring, self.num, self.den, o.num, o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _add(self.ring, self.num, self.den, -o.num, o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _add(self.ring, o.num, o.den, -self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _mul(self.ring, self.num, self.den, o.num, o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise DivisionByZeroError("division by the zero rational function")
        return _mul(self.ring, self.num, self.den, o.den, o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self) -> RatFunc:
        return RatFunc._make(self.ring, -self.num, self.den)

    def __pow__(self, k: int) -> RatFunc:
        if not isinstance(k, int):
            raise ValueError("exponent must be an integer")
        if k < 0:
            return self.ring.rat(1) / self ** (-k)
        return RatFunc._make(self.ring, self.num**k, self.den**k)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.ring == other.ring and self.num == other.num and self.den == other.den
        if isinstance(other, (int, MultiPoly)):
            try:
                o = self._coerce(other)
            except RingMismatchError:
                return False
            return self == o
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def diff(self, var: str) -> RatFunc:
        i = self.ring.index(var)
        dn = raw_diff(self.num, i)
        if self.den == 1:
            return RatFunc._make(self.ring, dn, self.den)
        dd = raw_diff(self.den, i)
        return RatFunc(self.ring, dn * self.den - self.num * dd, self.den**2)

    def eval(self, point: Sequence) -> FieldElem:
        pt = self.ring.point(point)
        d = raw_eval(self.den, pt)
        if not d:
            raise ChartError(f"denominator {self.denominator} vanishes at {tuple(pt)}")
        return raw_eval(self.num, pt) / d if d != 1 else raw_eval(self.num, pt)

    def lift(self, ring: Ring) -> RatFunc:
        """Same function viewed over a ring with more parameters."""
        if ring == self.ring:
            return self
        if ring.field != self.ring.field or not set(self.ring.params) <= set(ring.params):
            raise RingMismatchError(f"cannot lift {self.ring} into {ring}")
        num = self.num.set_ring(ring.sp)
        den = self.den.set_ring(ring.sp)
        lc = den.LC
        if lc != 1:
            num, den = num.quo_ground(lc), den.quo_ground(lc)
        return RatFunc._make(ring, num, den)

    def __str__(self) -> str:
        names, field = self.ring.params, self.ring.field
        num = format_raw(self.num, names, field)
        if self.den == 1:
            return num
        if len(self.num) > 1:
            num = f"({num})"
        den = format_raw(self.den, names, field)
        if not _is_single_power(self.den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def _flint_ctx(nvars: int, p: int):
    return flint.nmod_mpoly_ctx.get(tuple(f"x{i}" for i in range(nvars)), modulus=p)


def cofactors(a, b):
    """``(g, a/g, b/g)`` with ``g = gcd(a, b)`` for raw ring elements.

    Over a prime field the gcd runs in flint: sympy's dense subresultant
    route is orders of magnitude slower there.
    """
    sp = a.ring
    dom = sp.domain
    if not dom.is_FiniteField or not a or not b or a.is_ground or b.is_ground:
        return a.cofactors(b)
    ctx = _flint_ctx(sp.ngens, dom.mod)
    fa = ctx.from_dict({m: int(c) for m, c in a.items()})
    fb = ctx.from_dict({m: int(c) for m, c in b.items()})
    g = fa.gcd(fb)
    back = lambda x: sp.from_dict({m: dom(int(c)) for m, c in x.to_dict().items()})
    return back(g), back(fa // g), back(fb // g)


def _normalize(num, den):
    lc = den.LC
    if lc != 1:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


def _canonical(num, den):
    if not den:
        raise DivisionByZeroError("zero denominator")
    if not num:
        return num, den.ring.one
    if den.is_ground:
        return _normalize(num, den)
    _, num, den = cofactors(num, den)
    return _normalize(num, den)


def _add(ring: Ring, n1, d1, n2, d2) -> RatFunc:
    if d1 == d2:
        if d1 == 1:
            return RatFunc._make(ring, n1 + n2, d1)
        return RatFunc._make(ring, *_canonical(n1 + n2, d1))
    if d1 == 1:
        return RatFunc._make(ring, n1 * d2 + n2, d2)
    if d2 == 1:
        return RatFunc._make(ring, n1 + n2 * d1, d1)
    g, c1, c2 = cofactors(d1, d2)
    num = n1 * c2 + n2 * c1
    den = c1 * d2
    if g == 1:
        # Coprime denominators: num is coprime to den already.
        if not num:
            return ring.rat(0)
        return RatFunc._make(ring, *_normalize(num, den))
    return RatFunc._make(ring, *_canonical(num, den))


def _mul(ring: Ring, n1, d1, n2, d2) -> RatFunc:
    if not n1 or not n2:
        return ring.rat(0)
    if d1 == 1 and d2 == 1:
        return RatFunc._make(ring, n1 * n2, d1)
    if d2 != 1:
        _, n1, d2 = cofactors(n1, d2)
    if d1 != 1:
        _, n2, d1 = cofactors(n2, d1)
    return RatFunc._make(ring, *_normalize(n1 * n2, d1 * d2))
