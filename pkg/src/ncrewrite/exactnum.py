"""Exact scalars: univariate polynomials, square-root radicals and the
trigonometric quotient ring Q[c, s]/(c^2 + s^2 - 1).

Rationals are plain :class:`fractions.Fraction` values.  Every other scalar
type here interoperates with ``int`` and ``Fraction`` on both sides of the
arithmetic operators, so they can be used directly as coefficients of
:class:`ncrewrite.freealg.NCPoly`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

Rational = Fraction
RationalLike = Union[int, Fraction]

_RATIONAL_TYPES = (int, Fraction)


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_sum(parts: Iterable[Tuple[Fraction, str]]) -> str:
    """Format (coefficient, monomial) pairs as ``a*m1 - b*m2 + c``."""
    out = []
    for coef, mono in parts:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        if mono == "":
            body = _fmt_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_rational(mag)}*{mono}"
        out.append((sign, body))
    if not out:
        return "0"
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def _power(sym: str, e: int) -> str:
    if e == 0:
        return ""
    return sym if e == 1 else f"{sym}^{e}"


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Univariate polynomial with rational coefficients.

    ``Poly({2: 1, 0: -1})`` is ``t^2 - 1``.  The zero polynomial has
    ``degree`` ``None``.
    """

    __slots__ = ("_c", "var")

    def __init__(self, coeffs: Mapping[int, RationalLike] | None = None, var: str = "t"):
        c: Dict[int, Fraction] = {}
        for d, v in (coeffs or {}).items():
            if d < 0:
                raise ValueError("negative exponent")
            v = as_rational(v)
            if v:
                c[d] = c.get(d, Fraction(0)) + v
                if not c[d]:
                    del c[d]
        self._c = c
        self.var = var

    @classmethod
    def const(cls, a: RationalLike, var: str = "t") -> "Poly":
        return cls({0: a}, var)

    @classmethod
    def t(cls, var: str = "t") -> "Poly":
        return cls({1: 1}, var)

    @classmethod
    def from_list(cls, coeffs: Iterable[RationalLike], var: str = "t") -> "Poly":
        """Coefficients listed from the constant term upwards."""
        return cls(dict(enumerate(coeffs)), var)

    @property
    def degree(self):
        return max(self._c) if self._c else None

    def coeff(self, d: int) -> Fraction:
        return self._c.get(d, Fraction(0))

    def items(self):
        return sorted(self._c.items())

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return Poly.const(other, self.var)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for d, v in o._c.items():
            c[d] = c.get(d, 0) + v
        return Poly(c, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly({d: -v for d, v in self._c.items()}, self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c: Dict[int, Fraction] = {}
        for d1, v1 in self._c.items():
            for d2, v2 in o._c.items():
                c[d1 + d2] = c.get(d1 + d2, 0) + v1 * v2
        return Poly(c, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def __call__(self, x):
        """Horner evaluation; ``x`` may be any ring element that adds
        and multiplies with rationals (a rational, a Poly, an NCPoly, ...)."""
        if not self._c:
            return 0 * x if not isinstance(x, _RATIONAL_TYPES) else Fraction(0)
        deg = self.degree
        acc = self.coeff(deg)
        if not isinstance(x, _RATIONAL_TYPES):
            # keep the result in the ring of x, also for constants
            acc = 0 * x + acc
        for d in range(deg - 1, -1, -1):
            acc = acc * x + self.coeff(d)
        return acc

    def l1(self) -> Fraction:
        return sum((abs(v) for v in self._c.values()), Fraction(0))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        parts = [(v, _power(self.var, d)) for d, v in sorted(self._c.items(), reverse=True)]
        return _fmt_sum(parts)


def rising(n: int, var: str = "t") -> Poly:
    """t (t+1) ... (t+n-1); the empty product for n = 0."""
    out = Poly.const(1, var)
    for r in range(n):
        out = out * Poly({1: 1, 0: r}, var)
    return out


# ---------------------------------------------------------------------------
# Radicals  sum_d c_d sqrt(d)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def split_square(n: int) -> Tuple[int, int]:
    """Return (s, d) with n = s^2 * d and d squarefree."""
    if n <= 0:
        raise ValueError("need a positive integer")
    s, d, p = 1, 1, 2
    m = n
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return s, d * m


class Radical:
    """Exact element of the real field generated by square roots of integers."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        t: Dict[int, Fraction] = {}
        for d, c in (terms or {}).items():
            c = as_rational(c)
            if not c:
                continue
            s, sq = split_square(d)
            c = c * s
            t[sq] = t.get(sq, Fraction(0)) + c
            if not t[sq]:
                del t[sq]
        self._t = t

    @classmethod
    def sqrt(cls, q: RationalLike) -> "Radical":
        """sqrt of a non-negative rational p/r, stored as sqrt(p r)/r."""
        q = as_rational(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        return cls({q.numerator * q.denominator: Fraction(1, q.denominator)})

    @classmethod
    def rational(cls, q: RationalLike) -> "Radical":
        return cls({1: q})

    def terms(self):
        return sorted(self._t.items())

    @property
    def is_rational(self) -> bool:
        return set(self._t) <= {1}

    def to_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self._t.get(1, Fraction(0))

    def _coerce(self, other):
        if isinstance(other, Radical):
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return Radical.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self._t)
        for d, c in o._t.items():
            t[d] = t.get(d, 0) + c
        return Radical(t)

    __radd__ = __add__

    def __neg__(self):
        return Radical({d: -c for d, c in self._t.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t: Dict[int, Fraction] = {}
        for d1, c1 in self._t.items():
            for d2, c2 in o._t.items():
                # both squarefree: d1 d2 = g^2 (d1/g)(d2/g), and the cofactor is squarefree
                g = math.gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                t[d] = t.get(d, 0) + c1 * c2 * g
        return Radical({d: c for d, c in t.items() if c})

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._t == o._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __bool__(self):
        return bool(self._t)

    def __float__(self):
        return float(sum(float(c) * math.sqrt(d) for d, c in self._t.items()))

    def __repr__(self):
        return f"Radical({self})"

    def __str__(self):
        parts = [(c, "" if d == 1 else f"sqrt({d})") for d, c in sorted(self._t.items())]
        return _fmt_sum(parts)


def radical_mul(a: Radical, b: Radical) -> Radical:
    return a * b


# ---------------------------------------------------------------------------
# Trigonometric scalars  Q[c, s] / (c^2 + s^2 - 1)
# ---------------------------------------------------------------------------

def _reduce_trig(raw: Mapping[Tuple[int, int], RationalLike]) -> Dict[Tuple[int, int], Fraction]:
    # convention: s^2 -> 1 - c^2, so canonical monomials are c^i and c^i s
    out: Dict[Tuple[int, int], Fraction] = {}
    stack = [(i, j, as_rational(v)) for (i, j), v in raw.items()]
    while stack:
        i, j, v = stack.pop()
        if not v:
            continue
        if j >= 2:
            stack.append((i, j - 2, v))
            stack.append((i + 2, j - 2, -v))
            continue
        out[(i, j)] = out.get((i, j), Fraction(0)) + v
        if not out[(i, j)]:
            del out[(i, j)]
    return out


class TrigScalar:
    """Polynomial in c = cos t and s = sin t modulo c^2 + s^2 = 1.

    Canonical form reduces every s^2 to 1 - c^2, so each stored monomial is
    c^i or c^i * s.  Two scalars are equal iff their canonical forms agree.
    """

    __slots__ = ("_t",)

    def __init__(self, raw: Mapping[Tuple[int, int], RationalLike] | None = None):
        self._t = _reduce_trig(raw or {})

    @classmethod
    def cos(cls) -> "TrigScalar":
        return cls({(1, 0): 1})

    @classmethod
    def sin(cls) -> "TrigScalar":
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, a: RationalLike) -> "TrigScalar":
        return cls({(0, 0): a})

    def monomials(self):
        return sorted(self._t.items())

    def _coerce(self, other):
        if isinstance(other, TrigScalar):
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return TrigScalar.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self._t)
        for k, v in o._t.items():
            t[k] = t.get(k, 0) + v
        return TrigScalar(t)

    __radd__ = __add__

    def __neg__(self):
        return TrigScalar({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t: Dict[Tuple[int, int], Fraction] = {}
        for (i1, j1), v1 in self._t.items():
            for (i2, j2), v2 in o._t.items():
                k = (i1 + i2, j1 + j2)
                t[k] = t.get(k, 0) + v1 * v2
        return TrigScalar(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = TrigScalar.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._t == o._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __bool__(self):
        return bool(self._t)

    @property
    def is_constant(self) -> bool:
        return set(self._t) <= {(0, 0)}

    def constant(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} depends on t")
        return self._t.get((0, 0), Fraction(0))

    def at(self, c: RationalLike, s: RationalLike) -> Fraction:
        """Evaluate at a rational point of the circle, e.g. (1, 0) for t = 0."""
        c, s = as_rational(c), as_rational(s)
        if c * c + s * s != 1:
            raise ValueError("(c, s) is not on the unit circle")
        return sum((v * c ** i * s ** j for (i, j), v in self._t.items()), Fraction(0))

    def negate_angle(self) -> "TrigScalar":
        """Substitute t -> -t, i.e. s -> -s."""
        return TrigScalar({(i, j): (-v if j % 2 else v) for (i, j), v in self._t.items()})

    def __float__(self):
        raise TypeError("TrigScalar has no value without a parameter")

    def __repr__(self):
        return f"TrigScalar({self})"

    def __str__(self):
        def mono(i, j):
            return "*".join(p for p in (_power("c", i), _power("s", j)) if p)
        parts = [(v, mono(i, j)) for (i, j), v in sorted(self._t.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))]
        return _fmt_sum(parts)


def trig_reduce(p: Mapping[Tuple[int, int], RationalLike]) -> TrigScalar:
    """Canonical representative of a bivariate polynomial ``{(i, j): coef}``
    meaning ``sum coef * c^i * s^j``."""
    return TrigScalar(p)
