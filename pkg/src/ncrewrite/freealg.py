"""Noncommutative polynomials over a finite alphabet.

A word is a tuple of letters (generator names); the empty tuple is the unit
and only appears in unitized alphabets.  Coefficients are duck-typed: any
exact scalar from :mod:`ncrewrite.exactnum` works, and mixing ``Fraction``
with ``TrigScalar`` coefficients inside one polynomial is fine.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Mapping, Sequence, Tuple

from .exactnum import Poly, Radical, TrigScalar

Word = Tuple[Hashable, ...]

_SCALAR_TYPES = (int, Fraction, Poly, Radical, TrigScalar)
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*'*\Z")


class AlphabetMismatch(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class UnknownGenerator(ValueError):
    def __init__(self, name: str):
        super().__init__(f"unknown generator {name!r}")
        self.name = name


class MissingGenerator(KeyError):
    pass


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of generator names.

    The order doubles as the printing order of terms of equal degree.
    ``display`` maps names to human-facing aliases (``vstar`` -> ``v*``);
    aliases are only used by :meth:`NCPoly.pretty`, never by the parseable
    printer.
    """

    names: Tuple[str, ...]
    unitized: bool = True
    display: Tuple[Tuple[str, str], ...] = ()
    _rank: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        for n in self.names:
            if not _IDENT.match(n) or n == "one":
                raise ValueError(f"bad generator name {n!r}")
        object.__setattr__(self, "_rank", {n: i for i, n in enumerate(self.names)})

    def __contains__(self, letter) -> bool:
        return letter in self._rank

    def rank(self, letter) -> int:
        return self._rank[letter]

    def word_key(self, word: Word):
        return (-len(word), tuple(self._rank[a] for a in word))

    def letter_str(self, letter, pretty: bool = False) -> str:
        if pretty:
            return dict(self.display).get(letter, letter)
        return letter

    def format_word(self, word: Word, pretty: bool = False) -> str:
        if not word:
            return "1"
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            name = self.letter_str(word[i], pretty)
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)

    def union(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(self.names + other.names, self.unitized and other.unitized,
                        self.display + other.display)


def _fmt_coef(c) -> Tuple[str, str]:
    """Return (sign, magnitude text) for a coefficient; magnitude '' means 1."""
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        mag = abs(c)
        text = "" if mag == 1 else (str(mag.numerator) if mag.denominator == 1
                                    else f"{mag.numerator}/{mag.denominator}")
        return ("-" if c < 0 else "+"), text
    return "+", f"({c})"


class NCPoly:
    """Finitely supported linear combination of words."""

    __slots__ = ("terms", "alphabet")

    def __init__(self, terms: Mapping[Word, object], alphabet: Alphabet):
        self.alphabet = alphabet
        self.terms: Dict[Word, object] = {w: c for w, c in terms.items() if c}

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, alphabet: Alphabet) -> "NCPoly":
        return cls({}, alphabet)

    @classmethod
    def one(cls, alphabet: Alphabet, coef=1) -> "NCPoly":
        if not alphabet.unitized:
            raise ValueError("alphabet has no unit")
        return cls({(): coef}, alphabet)

    @classmethod
    def gen(cls, alphabet: Alphabet, name) -> "NCPoly":
        if name not in alphabet:
            raise UnknownGenerator(str(name))
        return cls({(name,): Fraction(1)}, alphabet)

    @classmethod
    def word(cls, alphabet: Alphabet, word: Sequence, coef=1) -> "NCPoly":
        return cls({tuple(word): coef}, alphabet)

    # -- inspection ---------------------------------------------------------
    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, word: Sequence):
        return self.terms.get(tuple(word), 0)

    @property
    def degree(self):
        return max((len(w) for w in self.terms), default=None)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda wc: self.alphabet.word_key(wc[0]))

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "NCPoly | None":
        if isinstance(other, NCPoly):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatch(f"{self.alphabet.names} vs {other.alphabet.names}")
            return other
        if isinstance(other, _SCALAR_TYPES):
            if not other:
                return NCPoly.zero(self.alphabet)
            return NCPoly.one(self.alphabet, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for w, c in o.terms.items():
            t[w] = t[w] + c if w in t else c
        return NCPoly(t, self.alphabet)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()}, self.alphabet)

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

    def scale(self, k) -> "NCPoly":
        return NCPoly({w: k * c for w, c in self.terms.items()}, self.alphabet)

    def __mul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return NCPoly({w: c * other for w, c in self.terms.items()}, self.alphabet)
        if not isinstance(other, NCPoly):
            return NotImplemented
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet.names} vs {other.alphabet.names}")
        t: Dict[Word, object] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                t[w] = t[w] + c if w in t else c
        return NCPoly(t, self.alphabet)

    def __rmul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return NCPoly({w: other * c for w, c in self.terms.items()}, self.alphabet)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        if n == 0:
            return NCPoly.one(self.alphabet)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            other = self._coerce(other) if (other or self.alphabet.unitized) else NCPoly.zero(self.alphabet)
        if not isinstance(other, NCPoly):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[w] == other.terms[w] for w in self.terms)

    __hash__ = None

    def map_coefficients(self, fn: Callable) -> "NCPoly":
        return NCPoly({w: fn(c) for w, c in self.terms.items()}, self.alphabet)

    # -- printing -----------------------------------------------------------
    def _render(self, pretty: bool) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for w, c in self.sorted_terms():
            sign, mag = _fmt_coef(c)
            if not w:
                body = mag or "1"
            else:
                ws = self.alphabet.format_word(w, pretty)
                body = ws if not mag else f"{mag}*{ws}"
            pieces.append((sign, body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self._render(False)

    def pretty(self) -> str:
        return self._render(True)

    def __repr__(self):
        return f"NCPoly({self})"


def mul(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9]*'*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + (len(rest) - len(rest.lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, alphabet, scalars):
        self.toks = _tokenize(text)
        self.i = 0
        self.alphabet = alphabet
        self.scalars = scalars or {}

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def unit(self, coef=1):
        return NCPoly({(): coef}, self.alphabet)

    def expr(self):
        acc = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        neg = False
        if self.peek()[1] in ("+", "-"):
            neg = self.take()[1] == "-"
        acc = self.factor()
        while self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return -acc if neg else acc

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("expected a natural-number exponent", pos)
            n = int(val)
            base = self.unit() if n == 0 else base ** n
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            q = Fraction(int(val))
            if self.peek()[1] == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num":
                    raise ParseError("expected a denominator", p2)
                if int(v2) == 0:
                    raise ParseError("zero denominator", p2)
                q = q / int(v2)
            return self.unit(q)
        if kind == "ident":
            self.take()
            if val in self.alphabet:
                return NCPoly({(val,): Fraction(1)}, self.alphabet)
            if val == "one" and self.alphabet.unitized:
                return self.unit()
            if val in self.scalars:
                return self.unit(self.scalars[val])
            raise UnknownGenerator(val)
        if val == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str, alphabet: Alphabet, scalars: Mapping[str, object] | None = None) -> NCPoly:
    """Parse an expression such as ``"(x'*y' - y'*x')*y' - y'"``.

    ``scalars`` names extra scalar symbols, e.g. ``{"c": TrigScalar.cos()}``.
    Multiplication is always written with ``*``.
    """
    p = _Parser(text, alphabet, scalars)
    out = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    if not alphabet.unitized and () in out.terms:
        raise ParseError("constant term in an algebra without unit", 0)
    return out


TRIG_SYMBOLS = {"c": TrigScalar.cos(), "s": TrigScalar.sin()}


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

def apply_hom(assignment: Mapping[Hashable, NCPoly], p: NCPoly, target: Alphabet | None = None) -> NCPoly:
    """Multiplicative-linear extension of ``assignment`` applied to ``p``.

    No reduction is performed; pass the result through a rewrite system to
    normalise it.
    """
    if target is None:
        if not assignment:
            raise ValueError("empty assignment needs an explicit target alphabet")
        target = next(iter(assignment.values())).alphabet
    cache: Dict[Word, NCPoly] = {}

    def image(word: Word) -> NCPoly:
        if word in cache:
            return cache[word]
        if not word:
            img = NCPoly.one(target)
        else:
            head = word[0]
            if head not in assignment:
                raise MissingGenerator(head)
            img = assignment[head] * image(word[1:]) if len(word) > 1 else assignment[head]
        cache[word] = img
        return img

    out = NCPoly.zero(target)
    for w, c in p.terms.items():
        out = out + image(w).scale(c) if not isinstance(c, int) or c != 1 else out + image(w)
    return out


def compose_assignments(g: Mapping, h: Mapping, target: Alphabet | None = None) -> Dict:
    """Assignment of g o h (apply h first)."""
    return {a: apply_hom(g, img, target) for a, img in h.items()}


# ---------------------------------------------------------------------------
# Exact linear algebra on NCPoly spans
# ---------------------------------------------------------------------------

def solve_in_span(target: NCPoly, vectors: Sequence[NCPoly]):
    """Return rational coefficients x with sum x_i v_i == target, or None.

    Plain Gaussian elimination over the rationals on the word coordinates.
    """
    words = sorted({w for v in list(vectors) + [target] for w in v.terms},
                   key=target.alphabet.word_key)
    n = len(vectors)
    rows = [[Fraction(v.terms.get(w, 0)) for v in vectors] + [Fraction(target.terms.get(w, 0))]
            for w in words]
    piv_cols = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, col in enumerate(piv_cols):
        x[col] = rows[i][n]
    return x
