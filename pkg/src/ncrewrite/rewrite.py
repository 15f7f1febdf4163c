"""Ordered rewriting to normal forms.

A :class:`RewriteSystem` is a list of rules ``lhs word -> rhs polynomial``
together with a degree-lexicographic order whose letter precedence is part
of the system.  Reduction works letter by letter: the normal form of a word
is built by appending one letter at a time to an already irreducible word,
so the only possible redex sits at the right end.  ``_append`` is memoised
per system, which makes repeated reductions (the oracle sweeps) cheap.
"""
from __future__ import annotations

import itertools
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Hashable, List, Mapping, Sequence, Tuple

from .exactnum import Poly
from .freealg import Alphabet, NCPoly, Word, apply_hom, parse

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class BudgetExceeded(RuntimeError):
    pass


class NonTerminating(ValueError):
    pass


class NotInWPrime(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    max_terms: int = 10 ** 6
    max_word_length: int = 64


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: NCPoly

    def __str__(self):
        return f"{self.rhs.alphabet.format_word(self.lhs)} -> {self.rhs}"


def deglex_key(word: Word, rank: Mapping) -> tuple:
    # larger key = larger word; rank[a] larger means a has higher precedence
    return (len(word), tuple(rank[a] for a in word))


class RewriteSystem:
    """Terminating rewrite system over an alphabet.

    ``precedence`` lists letters from highest to lowest.  ``relations`` are
    the defining relations of the algebra in its generators (used to check
    that an assignment defines a homomorphism), ``derived`` maps letters
    that abbreviate expressions in other letters (``f`` in the unitisation
    of W', ``e`` in the Toeplitz algebra) to those expressions.
    """

    def __init__(self, name: str, alphabet: Alphabet, rules: Sequence[Tuple[Word, NCPoly]],
                 precedence: Sequence[Hashable], relations: Sequence[NCPoly] = (),
                 derived: Mapping[Hashable, NCPoly] | None = None, budget: Budget = Budget()):
        self.name = name
        self.alphabet = alphabet
        if sorted(map(str, precedence)) != sorted(map(str, alphabet.names)):
            raise ValueError("precedence must list every generator exactly once")
        self.precedence = tuple(precedence)
        n = len(self.precedence)
        self._rank = {a: n - i for i, a in enumerate(self.precedence)}
        self.rules: Tuple[RewriteRule, ...] = tuple(RewriteRule(tuple(l), r) for l, r in rules)
        self.relations = tuple(relations)
        self.derived = dict(derived or {})
        self.budget = budget
        for r in self.rules:
            if r.rhs.alphabet != alphabet:
                raise ValueError(f"rule {r} is over another alphabet")
            top = self.key(r.lhs)
            for w in r.rhs.terms:
                if self.key(w) >= top:
                    raise NonTerminating(f"rule {r}: rhs word {alphabet.format_word(w)} is not smaller than lhs")
        self._by_last: Dict[Hashable, List[RewriteRule]] = {}
        for r in self.rules:
            self._by_last.setdefault(r.lhs[-1], []).append(r)
        self._memo: Dict[Tuple[Word, Hashable], Dict[Word, Fraction]] = {}

    def __repr__(self):
        return f"RewriteSystem({self.name!r}, {len(self.rules)} rules)"

    def key(self, word: Word):
        return deglex_key(word, self._rank)

    @property
    def max_lhs_length(self) -> int:
        return max((len(r.lhs) for r in self.rules), default=0)

    def parse(self, text: str, scalars=None) -> NCPoly:
        return parse(text, self.alphabet, scalars)

    def gen(self, name) -> NCPoly:
        return NCPoly.gen(self.alphabet, name)

    def one(self) -> NCPoly:
        return NCPoly.one(self.alphabet)

    # -- reduction ----------------------------------------------------------
    def _match(self, w: Word):
        for r in self._by_last.get(w[-1], ()):
            k = len(r.lhs)
            if len(w) >= k and w[-k:] == r.lhs:
                return r
        return None

    def _append(self, u: Word, a) -> Dict[Word, Fraction]:
        """Normal form of u*a for irreducible u."""
        key = (u, a)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        w = u + (a,)
        if len(w) > self.budget.max_word_length:
            raise BudgetExceeded(f"word length {len(w)} exceeds {self.budget.max_word_length}")
        r = self._match(w)
        if r is None:
            out = {w: Fraction(1)}
        else:
            prefix = w[:len(w) - len(r.lhs)]
            out: Dict[Word, Fraction] = {}
            for rw, rc in r.rhs.terms.items():
                for nw, nc in self._fold(prefix, rw).items():
                    v = out.get(nw, 0) + rc * nc
                    if v:
                        out[nw] = v
                    else:
                        out.pop(nw, None)
        self._memo[key] = out
        return out

    def _fold(self, u: Word, letters: Word) -> Dict[Word, Fraction]:
        cur = {u: Fraction(1)}
        for a in letters:
            nxt: Dict[Word, Fraction] = {}
            for w, c in cur.items():
                for nw, nc in self._append(w, a).items():
                    v = nxt.get(nw, 0) + c * nc
                    if v:
                        nxt[nw] = v
                    else:
                        nxt.pop(nw, None)
            if len(nxt) > self.budget.max_terms:
                raise BudgetExceeded(f"more than {self.budget.max_terms} intermediate terms")
            cur = nxt
        return cur

    def nf_word(self, word: Sequence) -> Dict[Word, Fraction]:
        return self._fold((), tuple(word))

    def normal_form(self, p: NCPoly) -> NCPoly:
        if p.alphabet != self.alphabet:
            raise ValueError(f"polynomial is not over the alphabet of {self.name}")
        out: Dict[Word, object] = {}
        for w, c in p.terms.items():
            for nw, nc in self.nf_word(w).items():
                v = c * nc
                out[nw] = out[nw] + v if nw in out else v
            if len(out) > self.budget.max_terms:
                raise BudgetExceeded(f"more than {self.budget.max_terms} terms")
        return NCPoly(out, self.alphabet)

    def mul(self, p: NCPoly, q: NCPoly) -> NCPoly:
        return self.normal_form(p * q)

    def is_irreducible(self, word: Word) -> bool:
        return all(self._match(word[:i]) is None for i in range(1, len(word) + 1))

    def clear_cache(self):
        self._memo.clear()

    # -- homomorphism helpers ------------------------------------------------
    def extend_assignment(self, assignment: Mapping) -> Dict:
        """Add images of derived letters computed from the given images."""
        full = dict(assignment)
        for a, expr in self.derived.items():
            if a not in full:
                full[a] = apply_hom(full, expr)
        return full


def normal_form(p: NCPoly, sys_: RewriteSystem) -> NCPoly:
    return sys_.normal_form(p)


@dataclass
class IdentityReport:
    passed: bool
    residual: NCPoly

    def __str__(self):
        return "pass" if self.passed else f"fail: residual {self.residual}"


def verify_identity(lhs: NCPoly, rhs: NCPoly, sys_: RewriteSystem) -> IdentityReport:
    res = sys_.normal_form(lhs - rhs)
    return IdentityReport(not res, res)


# ---------------------------------------------------------------------------
# Critical pairs
# ---------------------------------------------------------------------------

@dataclass
class CriticalPair:
    word: Word
    rules: Tuple[str, str]
    left: NCPoly
    right: NCPoly

    @property
    def joinable(self) -> bool:
        return self.left == self.right


@dataclass
class ConfluenceReport:
    system: str
    degree_bound: int
    pairs: List[CriticalPair] = field(default_factory=list)

    @property
    def unresolved(self) -> List[CriticalPair]:
        return [p for p in self.pairs if not p.joinable]

    @property
    def ok(self) -> bool:
        return not self.unresolved


def critical_pairs(sys_: RewriteSystem, degree_bound: int = 8) -> ConfluenceReport:
    """Enumerate overlaps and inclusions of rule left sides and test joinability."""
    if degree_bound < sys_.max_lhs_length:
        raise ValueError("degree_bound must be at least the longest left side")
    A = sys_.alphabet
    rep = ConfluenceReport(sys_.name, degree_bound)

    def word_poly(w):
        return NCPoly.word(A, w, Fraction(1))

    for r1, r2 in itertools.product(sys_.rules, repeat=2):
        l1, l2 = r1.lhs, r2.lhs
        # overlap: proper suffix of l1 equals proper prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] != l2[:k]:
                continue
            w = l1 + l2[k:]
            if len(w) > degree_bound:
                continue
            left = r1.rhs * word_poly(l2[k:])
            right = word_poly(l1[:-k]) * r2.rhs
            rep.pairs.append(CriticalPair(w, (str(r1), str(r2)),
                                          sys_.normal_form(left), sys_.normal_form(right)))
        # inclusion: l2 occurs inside l1
        if r1 is not r2 and len(l2) <= len(l1):
            for i in range(len(l1) - len(l2) + 1):
                if l1[i:i + len(l2)] != l2:
                    continue
                left = r1.rhs
                right = word_poly(l1[:i]) * r2.rhs * word_poly(l1[i + len(l2):])
                rep.pairs.append(CriticalPair(l1, (str(r1), str(r2)),
                                              sys_.normal_form(left), sys_.normal_form(right)))
    return rep


# ---------------------------------------------------------------------------
# Builtin presentations
# ---------------------------------------------------------------------------

XP, YP = "x'", "y'"


def _rules(alpha: Alphabet, spec: Sequence[Tuple[str, str]]):
    out = []
    for lhs, rhs in spec:
        lw = parse(lhs, alpha)
        (w, c), = lw.terms.items()
        out.append((w, parse(rhs, alpha)))
    return out


def make_weyl() -> RewriteSystem:
    A = Alphabet(("x", "y"))
    return RewriteSystem("weyl", A, _rules(A, [("x*y", "y*x + 1")]), ("x", "y"),
                         relations=[parse("x*y - y*x - 1", A)])


def make_weyl_n(n: int) -> RewriteSystem:
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    A = Alphabet(tuple(xs + ys))
    prec = tuple(reversed(xs)) + tuple(reversed(ys))
    spec, rels = [], []
    for a, b in itertools.combinations(prec, 2):
        # a has higher precedence than b: a*b -> b*a (+1 for a matching pair)
        extra = " + 1" if a[0] == "x" and b[0] == "y" and a[1:] == b[1:] else ""
        spec.append((f"{a}*{b}", f"{b}*{a}{extra}"))
        rels.append(parse(f"{a}*{b} - {b}*{a}{' - 1' if extra else ''}", A))
    return RewriteSystem(f"weyl{n}", A, _rules(A, spec), prec, relations=rels)


def make_wprime() -> RewriteSystem:
    A = Alphabet(("f", XP, YP))
    spec = [("f*y'", "0"), ("x'*f", "0"), ("x'*y'", "y'*x' + 1 + f")]
    rels = [parse("(x'*y' - y'*x')*y' - y'", A), parse("x'*(x'*y' - y'*x') - x'", A)]
    return RewriteSystem("wprime", A, _rules(A, spec), ("f", XP, YP), relations=rels,
                         derived={"f": parse("x'*y' - y'*x' - 1", A)})


def _toeplitz_parts(suffix: str = ""):
    v, vs, e = f"v{suffix}", f"vstar{suffix}", f"e{suffix}"
    spec = [(f"{vs}*{v}", "1"), (f"{v}*{vs}", f"1 - {e}"), (f"{e}*{v}", "0"),
            (f"{vs}*{e}", "0"), (f"{e}*{e}", e)]
    display = ((vs, f"v{suffix}*"),)
    return (v, vs, e), spec, display


def make_toeplitz() -> RewriteSystem:
    names, spec, display = _toeplitz_parts()
    A = Alphabet(names, display=display)
    return RewriteSystem("toeplitz", A, _rules(A, spec), ("e", "vstar", "v"),
                         relations=[parse("vstar*v - 1", A)],
                         derived={"e": parse("1 - v*vstar", A)})


def make_laurent() -> RewriteSystem:
    A = Alphabet(("z", "zinv"))
    spec = [("z*zinv", "1"), ("zinv*z", "1")]
    return RewriteSystem("laurent", A, _rules(A, spec), ("zinv", "z"),
                         relations=[parse("z*zinv - 1", A), parse("zinv*z - 1", A)])


def make_skew(a: Fraction = Fraction(1), b: Fraction = Fraction(-1)) -> RewriteSystem:
    """Skew-Laurent ring C[D] x Z with u p(D) u^-1 = p(aD + b).

    The default ``a=1, b=-1`` is the commutation relation u D u^-1 = D - 1.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0:
        raise ValueError("the automorphism D -> aD + b needs a != 0")
    A = Alphabet(("D", "u", "uinv"))
    D = parse("D", A)
    u, ui = parse("u", A), parse("uinv", A)
    fwd = D * a + b
    bwd = (D - b) * (1 / a)
    rules = [(("u", "uinv"), NCPoly.one(A)), (("uinv", "u"), NCPoly.one(A)),
             (("u", "D"), fwd * u), (("uinv", "D"), bwd * ui)]
    rels = [u * ui - 1, ui * u - 1, u * D - fwd * u]
    name = "skew" if (a, b) == (1, -1) else f"skew[{a},{b}]"
    sys_ = RewriteSystem(name, A, rules, ("uinv", "u", "D"), relations=rels)
    sys_.automorphism = (a, b)
    return sys_


def tensor_system(left: RewriteSystem, right: RewriteSystem, name: str | None = None) -> RewriteSystem:
    """Presentation of left (x) right: disjoint alphabets plus commutation.

    Right-factor letters get higher precedence and commute to the right, so
    normal words are (left word)(right word).
    """
    if set(left.alphabet.names) & set(right.alphabet.names):
        raise ValueError("tensor factors must have disjoint alphabets")
    A = left.alphabet.union(right.alphabet)

    def lift(p: NCPoly) -> NCPoly:
        return NCPoly(p.terms, A)

    rules = [(r.lhs, lift(r.rhs)) for r in left.rules + right.rules]
    for b in right.alphabet.names:
        for a in left.alphabet.names:
            rules.append(((b, a), NCPoly.word(A, (a, b), Fraction(1))))
    rels = [lift(r) for r in left.relations + right.relations]
    derived = {k: lift(v) for k, v in {**left.derived, **right.derived}.items()}
    sys_ = RewriteSystem(name or f"{left.name}*{right.name}", A, rules,
                         right.precedence + left.precedence, relations=rels, derived=derived)
    sys_.factors = (left, right)
    return sys_


def renamed(sys_: RewriteSystem, suffix: str, name: str | None = None) -> RewriteSystem:
    """Copy of a system with every letter suffixed (``v`` -> ``v2``)."""
    old = sys_.alphabet
    ren = {a: f"{a}{suffix}" for a in old.names}
    A = Alphabet(tuple(ren[a] for a in old.names), old.unitized,
                 tuple((ren[k], f"{v}{suffix}") for k, v in old.display))

    def mv(p: NCPoly) -> NCPoly:
        return NCPoly({tuple(ren[a] for a in w): c for w, c in p.terms.items()}, A)

    return RewriteSystem(name or f"{sys_.name}{suffix}", A,
                         [(tuple(ren[a] for a in r.lhs), mv(r.rhs)) for r in sys_.rules],
                         tuple(ren[a] for a in sys_.precedence),
                         relations=[mv(r) for r in sys_.relations],
                         derived={ren[k]: mv(v) for k, v in sys_.derived.items()})


def embed(p: NCPoly, sys_: RewriteSystem) -> NCPoly:
    """View a factor element inside a tensor system (letters unchanged)."""
    return NCPoly(p.terms, sys_.alphabet)


@lru_cache(maxsize=None)
def builtin(name: str) -> RewriteSystem:
    if name == "weyl":
        return make_weyl()
    m = re.fullmatch(r"weyl(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return make_weyl_n(int(m.group(1)))
    if name == "wprime":
        return make_wprime()
    if name == "toeplitz":
        return make_toeplitz()
    if name == "laurent":
        return make_laurent()
    if name == "skew":
        return make_skew()
    if name == "wprime_toeplitz":
        return tensor_system(builtin("wprime"), builtin("toeplitz"), "wprime_toeplitz")
    if name == "toeplitz2":
        return tensor_system(renamed(builtin("toeplitz"), "1"), renamed(builtin("toeplitz"), "2"),
                             "toeplitz2")
    raise KeyError(name)


BUILTIN_NAMES = ("weyl", "weyl2", "wprime", "toeplitz", "laurent", "skew", "wprime_toeplitz", "toeplitz2")


def get_system(name: str) -> RewriteSystem:
    try:
        return builtin(name)
    except KeyError:
        raise KeyError(f"unknown system {name!r}; builtins are {', '.join(BUILTIN_NAMES)}") from None


# ---------------------------------------------------------------------------
# W' decomposition
# ---------------------------------------------------------------------------

@dataclass
class WPrimeDecomp:
    """``sum y'^k P_kl(x'y') f x'^l + sum c_nm y'^n (1+f) x'^m``."""

    i_part: Dict[Tuple[int, int], Poly]
    w_part: Dict[Tuple[int, int], Fraction]

    def __eq__(self, other):
        return (isinstance(other, WPrimeDecomp) and self.i_part == other.i_part
                and self.w_part == other.w_part)

    @property
    def is_ideal(self) -> bool:
        return not self.w_part

    def __str__(self):
        i = ", ".join(f"({k},{l}): {P}" for (k, l), P in sorted(self.i_part.items()))
        w = ", ".join(f"({n},{m}): {c}" for (n, m), c in sorted(self.w_part.items()))
        return f"I {{{i}}}  W {{{w}}}"


def _wprime_word_shape(w: Word) -> Tuple[int, int, int]:
    a = 0
    while a < len(w) and w[a] == YP:
        a += 1
    b = a
    while b < len(w) and w[b] == "f":
        b += 1
    if any(x != XP for x in w[b:]):
        raise ValueError(f"word {w} is not a W' normal word")
    return a, b - a, len(w) - b


def wprime_decompose(p: NCPoly, allow_unit: bool = False) -> WPrimeDecomp:
    """Split an element of W' into its I part and its s(W) part.

    Normal words of the W' system are y'^a f^b x'^c.  Using f P(x'y') =
    P(1+f) f, a run of f-powers q_1 f + q_2 f^2 + ... between y'^a and x'^c
    is y'^a P(x'y') f x'^c with P(t) = Q(t-1), Q(f) = q_1 + q_2 f + ...
    """
    sys_ = builtin("wprime")
    if p.alphabet != sys_.alphabet:
        raise ValueError("not a W' polynomial")
    nf = sys_.normal_form(p)
    w_part: Dict[Tuple[int, int], Fraction] = {}
    fcoef: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for w, c in nf.terms.items():
        a, b, k = _wprime_word_shape(w)
        if b == 0:
            w_part[(a, k)] = w_part.get((a, k), 0) + c
            # s(y^a x^k) = y'^a x'^k + y'^a f x'^k
            fcoef.setdefault((a, k), {})
            fcoef[(a, k)][0] = fcoef[(a, k)].get(0, 0) - c
        else:
            fcoef.setdefault((a, k), {})
            fcoef[(a, k)][b - 1] = fcoef[(a, k)].get(b - 1, 0) + c
    tm1 = Poly({1: 1, 0: -1})
    i_part = {}
    for key, q in fcoef.items():
        P = Poly(q)(tm1)
        if P:
            i_part[key] = P
    w_part = {k: Fraction(v) for k, v in w_part.items() if v}
    if not allow_unit and (0, 0) in i_part and i_part[(0, 0)].coeff(0) != 0:
        raise NotInWPrime(f"constant term {i_part[(0, 0)].coeff(0)} in the (0,0) entry: element needs the unit")
    return WPrimeDecomp(i_part, w_part)


def wprime_basis(k: int, l: int, P: Poly) -> NCPoly:
    """The element y'^k P(x'y') f x'^l."""
    sys_ = builtin("wprime")
    A = sys_.alphabet
    xy = parse("x'*y'", A)
    Pxy = P(xy) if P.degree is not None else NCPoly.zero(A)
    if isinstance(Pxy, Fraction) or isinstance(Pxy, int):
        Pxy = NCPoly.one(A, Pxy)
    return NCPoly.word(A, (YP,) * k) * Pxy * NCPoly.word(A, ("f",) + (XP,) * l)


def s_image(n: int, m: int) -> NCPoly:
    """The splitting s(y^n x^m) = y'^n (1+f) x'^m."""
    A = builtin("wprime").alphabet
    return NCPoly.word(A, (YP,) * n) * (NCPoly.one(A) + NCPoly.gen(A, "f")) * NCPoly.word(A, (XP,) * m)


def wprime_reassemble(d: WPrimeDecomp) -> NCPoly:
    sys_ = builtin("wprime")
    out = NCPoly.zero(sys_.alphabet)
    for (k, l), P in d.i_part.items():
        out = out + wprime_basis(k, l, P)
    for (n, m), c in d.w_part.items():
        out = out + s_image(n, m).scale(c)
    return sys_.normal_form(out)


# ---------------------------------------------------------------------------
# Toeplitz split
# ---------------------------------------------------------------------------

def toeplitz_split(p: NCPoly, sys_: RewriteSystem | None = None,
                   letters: Tuple[str, str, str] = ("v", "vstar", "e")):
    """Return (matrix part {(i, j): a}, Laurent part {k: b}) of a Toeplitz element."""
    sys_ = sys_ or builtin("toeplitz")
    v, vs, e = letters
    nf = sys_.normal_form(p)
    mat: Dict[Tuple[int, int], object] = {}
    lau: Dict[int, object] = {}
    for w, c in nf.terms.items():
        if e in w:
            i = w.index(e)
            key = (i, len(w) - i - 1)
            mat[key] = mat[key] + c if key in mat else c
        elif all(a == v for a in w):
            lau[len(w)] = lau[len(w)] + c if len(w) in lau else c
        else:
            lau[-len(w)] = lau[-len(w)] + c if -len(w) in lau else c
    return {k: c for k, c in mat.items() if c}, {k: c for k, c in lau.items() if c}


def e_ij(i: int, j: int, sys_: RewriteSystem | None = None, letters=("v", "vstar", "e")) -> NCPoly:
    A = (sys_ or builtin("toeplitz")).alphabet
    v, vs, e = letters
    return NCPoly.word(A, (v,) * i + (e,) + (vs,) * j)


def toeplitz_assemble(mat: Mapping, lau: Mapping, sys_: RewriteSystem | None = None,
                      letters=("v", "vstar", "e")) -> NCPoly:
    A = (sys_ or builtin("toeplitz")).alphabet
    v, vs, e = letters
    out = NCPoly.zero(A)
    for (i, j), c in mat.items():
        out = out + e_ij(i, j, sys_, letters).scale(c)
    for k, c in lau.items():
        out = out + NCPoly.word(A, (v,) * k if k >= 0 else (vs,) * (-k)).scale(c)
    return out


# ---------------------------------------------------------------------------
# Skew-Laurent multiplication
# ---------------------------------------------------------------------------

def _alpha_power(a: Fraction, b: Fraction, n: int) -> Poly:
    """alpha^n(D) as a polynomial in D for alpha(D) = aD + b."""
    D = Poly.t("D")
    out = D
    if n >= 0:
        for _ in range(n):
            out = out(Poly({1: a, 0: b}, "D"))
    else:
        for _ in range(-n):
            out = out(Poly({1: 1 / a, 0: -b / a}, "D"))
    return out


def skew_to_dict(p: NCPoly, sys_: RewriteSystem) -> Dict[int, Poly]:
    """Normal form sum p_n(D) u^n as {n: p_n}."""
    out: Dict[int, Dict[int, Fraction]] = {}
    for w, c in sys_.normal_form(p).terms.items():
        d = 0
        while d < len(w) and w[d] == "D":
            d += 1
        rest = w[d:]
        n = len(rest) if all(x == "u" for x in rest) else -len(rest)
        out.setdefault(n, {})
        out[n][d] = out[n].get(d, 0) + c
    return {n: Poly(cs, "D") for n, cs in out.items() if Poly(cs, "D")}


def skew_from_dict(d: Mapping[int, Poly], sys_: RewriteSystem) -> NCPoly:
    A = sys_.alphabet
    out = NCPoly.zero(A)
    for n, p in d.items():
        uw = ("u",) * n if n >= 0 else ("uinv",) * (-n)
        for deg, c in p.items():
            out = out + NCPoly.word(A, ("D",) * deg + uw, c)
    return out


def skew_mul(a: NCPoly, b: NCPoly, sys_: RewriteSystem | None = None) -> NCPoly:
    """Product via u^n q(D) = q(alpha^n(D)) u^n, independent of the rewrite rules."""
    sys_ = sys_ or builtin("skew")
    al, be = getattr(sys_, "automorphism", (Fraction(1), Fraction(-1)))
    da, db = skew_to_dict(a, sys_), skew_to_dict(b, sys_)
    out: Dict[int, Poly] = {}
    for n, p in da.items():
        shift = _alpha_power(al, be, n)
        for m, q in db.items():
            term = p * q(shift)
            out[n + m] = out.get(n + m, Poly({}, "D")) + term
    return skew_from_dict({k: v for k, v in out.items() if v}, sys_)


# ---------------------------------------------------------------------------
# Presentation files
# ---------------------------------------------------------------------------

class PresentationError(ValueError):
    pass


def parse_presentation(text: str, name: str = "user") -> RewriteSystem:
    """Read the line format ``alphabet: / unitized: / order: deglex a > b / rule: l -> r``."""
    names: List[str] = []
    unitized = True
    order: List[str] | None = None
    rule_texts: List[Tuple[int, str]] = []
    relations: List[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise PresentationError(f"line {lineno}: expected 'key: value'")
        k, v = (s.strip() for s in line.split(":", 1))
        if k == "alphabet":
            names = v.split()
        elif k == "unitized":
            if v not in ("true", "false"):
                raise PresentationError(f"line {lineno}: unitized must be true or false")
            unitized = v == "true"
        elif k == "order":
            parts = v.split(None, 1)
            if not parts or parts[0] != "deglex":
                raise PresentationError(f"line {lineno}: only 'deglex' orders are supported")
            order = [s.strip() for s in parts[1].split(">")] if len(parts) > 1 else None
        elif k == "rule":
            rule_texts.append((lineno, v))
        elif k == "relation":
            relations.append(v)
        elif k == "name":
            name = v
        else:
            raise PresentationError(f"line {lineno}: unknown key {k!r}")
    if not names:
        raise PresentationError("missing alphabet")
    A = Alphabet(tuple(names), unitized)
    order = order or names
    rules = []
    for lineno, rt in rule_texts:
        if "->" not in rt:
            raise PresentationError(f"line {lineno}: rule needs '->'")
        lt, rhs_t = rt.split("->", 1)
        lhs = parse(lt, A)
        if len(lhs.terms) != 1 or next(iter(lhs.terms.values())) != 1 or not next(iter(lhs.terms)):
            raise PresentationError(f"line {lineno}: left side must be a single word")
        rules.append((next(iter(lhs.terms)), parse(rhs_t, A)))
        relations.append(f"{lt} - ({rhs_t})")
    try:
        return RewriteSystem(name, A, rules, order, relations=[parse(r, A) for r in relations])
    except NonTerminating as exc:
        raise PresentationError(str(exc)) from exc


def make_free(names: Sequence[str], unitized: bool = False, name: str | None = None) -> RewriteSystem:
    """Free algebra with no relations (non-unital by default)."""
    A = Alphabet(tuple(names), unitized)
    return RewriteSystem(name or "free" + "".join(names), A, [], tuple(names))
