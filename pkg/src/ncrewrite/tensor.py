"""Truncated tensor algebras, differential forms and classifying maps.

Tensors over a base algebra A are NCPolys whose letters are normal-form
words of A; ``sigma(a)`` is the degree-one tensor.  Forms over a base B are
dicts ``{(x0, (x1, ..., xn)): coef}`` meaning x0 dx1 ... dxn, with ``x0 =
None`` for the adjoined unit.

The Fedosov product is ``w1 o w2 = w1 w2 + sign * (-1)^deg(w1) dw1 dw2``.
Which ``sign`` makes ``alpha_iso`` multiplicative is decided by
:func:`calibrate`, a self-test on a small free algebra; see
:func:`calibrated_sign`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .freealg import Alphabet, NCPoly, Word, apply_hom
from .rewrite import RewriteSystem, make_free

FormKey = Tuple[Optional[Word], Tuple[Word, ...]]


class TruncationExceeded(ValueError):
    pass


class NotInJ(ValueError):
    """The tensor does not lie in the kernel of the multiplication map."""


class MembershipFailure(AssertionError):
    pass


# ---------------------------------------------------------------------------
# Tensor algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TensorAlphabet:
    """Letters are normal-form words of a base alphabet."""

    base: Alphabet
    unitized: bool = False

    def __contains__(self, letter) -> bool:
        return isinstance(letter, tuple) and all(a in self.base for a in letter)

    def word_key(self, word):
        return (-len(word), tuple(self.base.word_key(l) for l in word))

    def format_word(self, word, pretty: bool = False) -> str:
        return "*".join(f"[{self.base.format_word(l, pretty)}]" for l in word)


class TensorAlgebra:
    """T A truncated at tensor degree ``N`` over the base rewrite system."""

    def __init__(self, base: RewriteSystem, N: int = 6):
        self.base = base
        self.N = N
        self.alphabet = TensorAlphabet(base.alphabet)

    def zero(self) -> NCPoly:
        return NCPoly.zero(self.alphabet)

    def sigma(self, a) -> NCPoly:
        """Degree-one tensor of a base word (tuple) or base polynomial."""
        if isinstance(a, NCPoly):
            nf = self.base.normal_form(a)
            return NCPoly({(w,): c for w, c in nf.terms.items()}, self.alphabet)
        return NCPoly({(tuple(a),): Fraction(1)}, self.alphabet)

    def check(self, t: NCPoly) -> NCPoly:
        if t.degree is not None and t.degree > self.N:
            raise TruncationExceeded(f"tensor degree {t.degree} exceeds truncation {self.N}")
        return t

    def mul(self, s: NCPoly, t: NCPoly) -> NCPoly:
        if s.degree is not None and t.degree is not None and s.degree + t.degree > self.N:
            raise TruncationExceeded(f"product degree {s.degree + t.degree} exceeds {self.N}")
        return s * t

    def prod(self, factors: Iterable[NCPoly]) -> NCPoly:
        out = None
        for f in factors:
            out = f if out is None else self.mul(out, f)
        if out is None:
            raise ValueError("empty product in a non-unital algebra")
        return out

    def curvature(self, a, b) -> NCPoly:
        """omega(a, b) = sigma(ab) - sigma(a) sigma(b) for base words a, b."""
        a, b = tuple(a), tuple(b)
        ab = NCPoly(self.base.nf_word(a + b), self.base.alphabet)
        return self.sigma(ab) - self.mul(self.sigma(a), self.sigma(b))

    def pi_multiply(self, t: NCPoly) -> NCPoly:
        """Collapse x1 (x) ... (x) xn to the product x1 ... xn in the base."""
        out: Dict[Word, object] = {}
        for word, c in t.terms.items():
            flat = tuple(a for letter in word for a in letter)
            for w, k in self.base.nf_word(flat).items():
                out[w] = out[w] + c * k if w in out else c * k
        return NCPoly(out, self.base.alphabet)

    def basis_words(self, max_len: int) -> List[Word]:
        """Irreducible base words of length 1..max_len (plus the unit if any)."""
        out = [()] if self.base.alphabet.unitized else []
        layer = [()]
        for _ in range(max_len):
            layer = [w + (a,) for w in layer for a in self.base.alphabet.names
                     if self.base.is_irreducible(w + (a,))]
            out.extend(layer)
        return out


# ---------------------------------------------------------------------------
# Differential forms and the Fedosov product
# ---------------------------------------------------------------------------

class FormElem:
    """Finite sum of x0 dx1 ... dxn (x0 None means the adjoined unit)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[FormKey, object] | None = None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def basic(cls, x0: Optional[Sequence], ds: Sequence[Sequence] = (), coef=1) -> "FormElem":
        key = (None if x0 is None else tuple(x0), tuple(tuple(d) for d in ds))
        return cls({key: coef})

    def __add__(self, other: "FormElem") -> "FormElem":
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return FormElem(t)

    def scale(self, c) -> "FormElem":
        return FormElem({k: v * c for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, FormElem) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degrees(self):
        return sorted({len(ds) for _, ds in self.terms})

    @property
    def degree(self) -> int:
        return max((len(ds) for _, ds in self.terms), default=0)

    @property
    def is_even(self) -> bool:
        return all(len(ds) % 2 == 0 for _, ds in self.terms)

    def __repr__(self):
        def one(k):
            x0, ds = k
            head = "" if x0 is None else "".join(map(str, x0))
            return head + "".join("d" + "".join(map(str, d)) for d in ds) or "1"
        return "FormElem(" + " + ".join(f"{c}*{one(k)}" for k, c in sorted(self.terms.items(), key=str)) + ")"


class FormAlgebra:
    """Omega B over a base rewrite system, truncated at form degree ``N``."""

    def __init__(self, base: RewriteSystem, N: int = 6):
        self.base = base
        self.N = N
        self._cache: Dict[Tuple[FormKey, Word], Dict[FormKey, Fraction]] = {}

    def _nf(self, w: Word) -> Dict[Word, Fraction]:
        return self.base.nf_word(w)

    def _times_word(self, key: FormKey, b: Word) -> Dict[FormKey, Fraction]:
        """(x0 dx1 ... dxn) * b via (w dx) b = w d(xb) - (w x) db."""
        hit = self._cache.get((key, b))
        if hit is not None:
            return hit
        x0, ds = key
        out: Dict[FormKey, Fraction] = {}

        def add(k, c):
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)

        if not ds:
            if x0 is None:
                add((b, ()), Fraction(1))
            else:
                for w, c in self._nf(x0 + b).items():
                    add((w, ()), c)
        else:
            head = (x0, ds[:-1])
            xn = ds[-1]
            # a unit of B is an ordinary element here: d(1) is not zero
            for w, c in self._nf(xn + b).items():
                add((x0, ds[:-1] + (w,)), c)
            for k2, c2 in self._times_word(head, xn).items():
                add((k2[0], k2[1] + (b,)), -c2)
        self._cache[(key, b)] = out
        return out

    def mul(self, w1: FormElem, w2: FormElem) -> FormElem:
        """Ordinary product of forms (Leibniz rule, d^2 = 0)."""
        out: Dict[FormKey, Fraction] = {}
        for k1, c1 in w1.terms.items():
            for (y0, ys), c2 in w2.terms.items():
                if len(k1[1]) + len(ys) > self.N:
                    raise TruncationExceeded(f"form degree {len(k1[1]) + len(ys)} exceeds {self.N}")
                left = self._times_word(k1, y0) if y0 is not None else {k1: Fraction(1)}
                for (x0, xs), c in left.items():
                    k = (x0, xs + ys)
                    out[k] = out.get(k, 0) + c * c1 * c2
        return FormElem(out)

    def d(self, w: FormElem) -> FormElem:
        out: Dict[FormKey, Fraction] = {}
        for (x0, ds), c in w.terms.items():
            if x0 is None:
                continue
            if len(ds) + 1 > self.N:
                raise TruncationExceeded("d leaves the truncation")
            k = (None, (x0,) + ds)
            out[k] = out.get(k, 0) + c
        return FormElem(out)

    def fedosov_mul(self, w1: FormElem, w2: FormElem, sign: int | None = None) -> FormElem:
        """w1 o w2 = w1 w2 + sign (-1)^deg(w1) dw1 dw2 (homogeneous pieces)."""
        if sign is None:
            sign = calibrated_sign()
        out = self.mul(w1, w2)
        dw2 = self.d(w2)
        for k, c in w1.terms.items():
            piece = FormElem({k: c})
            eps = sign * (-1) ** len(k[1])
            out = out + self.mul(self.d(piece), dw2).scale(eps)
        return out

    def even_basis(self, letters: Sequence[Word], max_degree: int, with_unit_at_zero: bool = False) -> List[FormElem]:
        """Basis forms x0 dx1 ... dx2k (k <= max_degree/2) with x_i from ``letters``."""
        out = []
        for deg in range(0, max_degree + 1, 2):
            heads = list(letters) + ([None] if deg > 0 or with_unit_at_zero else [])
            for x0 in heads:
                for ds in itertools.product(letters, repeat=deg):
                    out.append(FormElem.basic(x0, ds))
        return out


def alpha_iso(forms: FormAlgebra, tensors: TensorAlgebra, w: FormElem) -> NCPoly:
    """x0 dx1 ... dx2n  ->  sigma(x0) omega(x1, x2) ... omega(x_{2n-1}, x_{2n})."""
    out = tensors.zero()
    for (x0, ds), c in w.terms.items():
        if len(ds) % 2:
            raise ValueError("alpha_iso is defined on even forms")
        factors = [] if x0 is None else [tensors.sigma(x0)]
        factors += [tensors.curvature(ds[i], ds[i + 1]) for i in range(0, len(ds), 2)]
        if not factors:
            raise ValueError("the unit has no image in the non-unital tensor algebra")
        out = out + tensors.prod(factors).scale(c)
    return tensors.check(out)


def alpha_inverse(forms: FormAlgebra, tensors: TensorAlgebra, t: NCPoly, sign: int | None = None) -> FormElem:
    """sigma(x1) ... sigma(xn)  ->  x1 o ... o xn."""
    out = FormElem()
    for word, c in t.terms.items():
        acc = FormElem.basic(word[0])
        for letter in word[1:]:
            acc = forms.fedosov_mul(acc, FormElem.basic(letter), sign)
        out = out + acc.scale(c)
    return out


def multiplicativity_failures(forms: FormAlgebra, tensors: TensorAlgebra, pairs, sign: int,
                              stop_after: int | None = None):
    """Pairs (w1, w2) with alpha(w1 o w2) != alpha(w1) alpha(w2)."""
    bad = []
    for w1, w2 in pairs:
        lhs = alpha_iso(forms, tensors, forms.fedosov_mul(w1, w2, sign))
        rhs = tensors.mul(alpha_iso(forms, tensors, w1), alpha_iso(forms, tensors, w2))
        if lhs != rhs:
            bad.append((w1, w2, lhs - rhs))
            if stop_after is not None and len(bad) >= stop_after:
                break
    return bad


@dataclass
class Calibration:
    sign: int
    counterexample: Tuple[FormElem, FormElem, NCPoly]


@lru_cache(maxsize=None)
def calibrate() -> Calibration:
    """Try both signs on the free algebra on a, b up to form degree 2.

    Exactly one sign must make alpha multiplicative; the other yields a
    counterexample that is kept for the record.
    """
    base = make_free(("a", "b"))
    forms, tensors = FormAlgebra(base, 6), TensorAlgebra(base, 6)
    letters = [("a",), ("b",)]
    basis = forms.even_basis(letters, 2)
    pairs = [(w1, w2) for w1 in basis for w2 in basis if w1.degree + w2.degree <= 2]
    results = {s: multiplicativity_failures(forms, tensors, pairs, s, stop_after=1) for s in (1, -1)}
    good = [s for s, bad in results.items() if not bad]
    if len(good) != 1:
        raise AssertionError(f"sign calibration is ambiguous: {sorted(good)} both work")
    sign = good[0]
    return Calibration(sign, results[-sign][0])


def calibrated_sign() -> int:
    return calibrate().sign


@dataclass
class SweepResult:
    sign: int
    pairs: int
    failures: List[Tuple[FormElem, FormElem, NCPoly]]


def calibration_sweep(n_generators: int = 3, max_degree: int = 4, N: int = 6,
                      stop_after: int | None = 1) -> Dict[int, SweepResult]:
    """Both signs over all basis-form pairs of total degree <= max_degree.

    The free algebra has generators a, b, c, ...; ``stop_after`` bounds the
    number of failures recorded per sign (None scans everything).
    """
    names = tuple("abcdefgh"[:n_generators])
    base = make_free(names)
    forms, tensors = FormAlgebra(base, N), TensorAlgebra(base, N)
    basis = forms.even_basis([(a,) for a in names], max_degree)
    pairs = [(w1, w2) for w1 in basis for w2 in basis if w1.degree + w2.degree <= max_degree]
    return {s: SweepResult(s, len(pairs), multiplicativity_failures(forms, tensors, pairs, s, stop_after))
            for s in (1, -1)}


# ---------------------------------------------------------------------------
# Split extensions and classifying maps
# ---------------------------------------------------------------------------

@dataclass
class SplitExtension:
    """0 -> I -> E -> B -> 0 with a linear splitting on B's normal basis."""

    name: str
    total: RewriteSystem
    quotient: RewriteSystem
    projection: Dict[str, NCPoly]
    splitting: Callable[[Word], NCPoly]
    in_ideal: Callable[[NCPoly], bool]

    def project(self, p: NCPoly) -> NCPoly:
        full = self.total.extend_assignment(self.projection)
        return self.quotient.normal_form(apply_hom(full, p, self.quotient.alphabet))

    def lift(self, b: NCPoly) -> NCPoly:
        out = NCPoly.zero(self.total.alphabet)
        for w, c in self.quotient.normal_form(b).terms.items():
            out = out + self.splitting(w).scale(c)
        return out

    def projection_is_hom(self) -> List[NCPoly]:
        """Images of the defining relations of E (all zero when consistent)."""
        return [self.project(r) for r in self.total.relations]

    def splitting_is_section(self, words: Iterable[Word]) -> List[Word]:
        """Basis words b with projection(s(b)) != b."""
        bad = []
        for w in words:
            if self.project(self.splitting(w)) != NCPoly.word(self.quotient.alphabet, w, Fraction(1)):
                bad.append(w)
        return bad


def tau(ext: SplitExtension, t: NCPoly, precompose: Callable[[Word], NCPoly] | None = None) -> NCPoly:
    """The homomorphism T B -> E, x1 (x) ... (x) xn -> s'(x1) ... s'(xn)."""
    E = ext.total
    cache: Dict[Word, NCPoly] = {}

    def s(letter):
        if letter not in cache:
            if precompose is None:
                cache[letter] = ext.splitting(letter)
            else:
                cache[letter] = ext.lift(precompose(letter))
        return cache[letter]

    out = NCPoly.zero(E.alphabet)
    for word, c in t.terms.items():
        img = s(word[0])
        for letter in word[1:]:
            img = img * s(letter)
        out = out + img.scale(c)
    return E.normal_form(out)


def classifying_map(ext: SplitExtension, tensors: TensorAlgebra, t: NCPoly,
                    precompose: Callable[[Word], NCPoly] | None = None) -> NCPoly:
    """Restriction of tau to J B; the result must lie in the ideal I."""
    if tensors.pi_multiply(t):
        raise NotInJ(f"pi(t) = {tensors.pi_multiply(t)} is not zero")
    img = tau(ext, t, precompose)
    if not ext.in_ideal(img):
        raise MembershipFailure(f"classifying map left the ideal: {img}")
    return img


def diagram_defect(ext: SplitExtension, tensors: TensorAlgebra, t: NCPoly) -> NCPoly:
    """projection(tau(t)) - pi(t); zero when the square commutes."""
    return ext.project(tau(ext, t)) - tensors.pi_multiply(t)


def fundamental_extension() -> SplitExtension:
    """0 -> I -> W' -> W -> 0 with s(y^n x^m) = y'^n (1+f) x'^m."""
    from .rewrite import XP, YP, builtin, s_image, wprime_decompose

    E, B = builtin("wprime"), builtin("weyl")
    proj = {XP: B.gen("x"), YP: B.gen("y"), "f": NCPoly.zero(B.alphabet)}

    def split(w: Word) -> NCPoly:
        n = sum(1 for a in w if a == "y")
        m = len(w) - n
        if w != ("y",) * n + ("x",) * m:
            raise ValueError(f"{w} is not a W normal word")
        return s_image(n, m)

    def member(p: NCPoly) -> bool:
        return not wprime_decompose(p, allow_unit=True).w_part

    return SplitExtension("fundamental", E, B, proj, split, member)


def toeplitz_extension() -> SplitExtension:
    """0 -> span(e-words) -> Toeplitz -> Laurent -> 0, z^k -> v^k, zinv^k -> vstar^k."""
    from .rewrite import builtin

    E, B = builtin("toeplitz"), builtin("laurent")
    proj = {"v": B.gen("z"), "vstar": B.gen("zinv"), "e": NCPoly.zero(B.alphabet)}

    def split(w: Word) -> NCPoly:
        return NCPoly.word(E.alphabet, tuple("v" if a == "z" else "vstar" for a in w), Fraction(1))

    def member(p: NCPoly) -> bool:
        return all("e" in w for w in E.normal_form(p).terms)

    return SplitExtension("toeplitz", E, B, proj, split, member)


def random_j_tensor(rng, tensors: TensorAlgebra, words: Sequence[Word], max_degree: int = 3,
                    max_terms: int = 3) -> NCPoly:
    """T - sigma(pi(T)) for a random tensor T, which lies in J by construction."""
    terms: Dict[Tuple[Word, ...], Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        word = tuple(rng.choice(words) for _ in range(rng.randint(1, max_degree)))
        terms[word] = terms.get(word, 0) + rng.choice((-3, -2, -1, 1, 2, 3))
    t = NCPoly(terms, tensors.alphabet)
    return t - tensors.sigma(tensors.pi_multiply(t))


def square_sweep(ext: SplitExtension, trials: int = 200, seed: int = 0, max_word: int = 2,
                 max_degree: int = 3) -> List[str]:
    """Classifying map stays in the ideal and the square commutes on random J tensors."""
    import random

    tensors = TensorAlgebra(ext.quotient, max(6, max_degree))
    words = [w for w in tensors.basis_words(max_word) if w]
    rng = random.Random(seed)
    problems = []
    for k in range(trials):
        t = random_j_tensor(rng, tensors, words, max_degree)
        try:
            classifying_map(ext, tensors, t)
        except MembershipFailure as exc:
            problems.append(f"trial {k}: {exc}")
            continue
        d = diagram_defect(ext, tensors, t)
        if d:
            problems.append(f"trial {k}: defect {d}")
    return problems
