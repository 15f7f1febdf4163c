"""Independent models used as oracles for the rewrite engine.

* :class:`IdealElem` multiplies elements of the ideal I of W' through
  explicit structure constants, never touching the rewrite rules.
* :func:`rep_W` and :func:`rep_Wprime` are the shift-operator
  representations, on the Fock basis e_0, e_1, ... and on the lattice
  t0, t0+1, ... respectively, with exact square-root entries.
* :class:`KMatrix` is a finitely supported rational matrix.

The representations are computed path by path: every generator moves a
basis vector to a single neighbour and multiplies it by a scalar, so a word
maps e_j to a multiple of one e_i.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Mapping, Optional, Tuple

from .exactnum import Poly, Radical, rising
from .freealg import NCPoly
from .rewrite import (XP, YP, WPrimeDecomp, builtin, wprime_basis, wprime_decompose)

T = Poly.t()
T_MINUS_1 = Poly({1: 1, 0: -1})


class OracleDisagreement(AssertionError):
    pass


def sparse_matmul(a: Mapping[Tuple[int, int], object], b: Mapping[Tuple[int, int], object]) -> Dict:
    """Product of finitely supported matrices with entries in any ring."""
    rows: Dict[int, list] = {}
    for (k, j), v in b.items():
        rows.setdefault(k, []).append((j, v))
    out: Dict[Tuple[int, int], object] = {}
    for (i, k), u in a.items():
        for j, v in rows.get(k, ()):
            key = (i, j)
            out[key] = out[key] + u * v if key in out else u * v
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# The ideal I
# ---------------------------------------------------------------------------

class IdealElem:
    """sum_{k,l} y'^k P_kl(x'y') f x'^l, stored as {(k, l): P_kl}."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[Tuple[int, int], Poly] | None = None, check: bool = True):
        self.entries = {k: p for k, p in (entries or {}).items() if p}
        if check and (0, 0) in self.entries and self.entries[(0, 0)].coeff(0) != 0:
            raise ValueError("P_00 must vanish at t = 0")

    @classmethod
    def basis(cls, k: int, l: int, P: Poly) -> "IdealElem":
        return cls({(k, l): P})

    @classmethod
    def from_decomp(cls, d: WPrimeDecomp) -> "IdealElem":
        if d.w_part:
            raise ValueError("element has a component outside I")
        return cls(d.i_part)

    @classmethod
    def from_ncpoly(cls, p: NCPoly) -> "IdealElem":
        return cls.from_decomp(wprime_decompose(p))

    def to_ncpoly(self) -> NCPoly:
        A = builtin("wprime").alphabet
        out = NCPoly.zero(A)
        for (k, l), P in self.entries.items():
            out = out + wprime_basis(k, l, P)
        return out

    def __add__(self, other: "IdealElem") -> "IdealElem":
        e = dict(self.entries)
        for k, p in other.entries.items():
            e[k] = e[k] + p if k in e else p
        return IdealElem(e, check=False)

    def __neg__(self):
        return IdealElem({k: -p for k, p in self.entries.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "IdealElem":
        return IdealElem({k: p * c for k, p in self.entries.items()}, check=False)

    def __mul__(self, other: "IdealElem") -> "IdealElem":
        return ideal_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, IdealElem) and self.entries == other.entries

    def __bool__(self):
        return bool(self.entries)

    @property
    def max_degree(self) -> int:
        return max((p.degree for p in self.entries.values()), default=0)

    def __repr__(self):
        body = ", ".join(f"({k},{l}): {p}" for (k, l), p in sorted(self.entries.items()))
        return f"IdealElem({{{body}}})"


def ideal_mul(a: IdealElem, b: IdealElem) -> IdealElem:
    """Structure constants of I in the basis y'^k P(x'y') f x'^l.

    f x'^l y'^i f vanishes for l != i and equals f_l(x'y') f^2 otherwise,
    and f^2 = (x'y' - 1) f.  Under x'y' -> t the product of the (k, l) and
    (l, j) entries is P Q (t - 1) f_l(t) in position (k, j).
    """
    out: Dict[Tuple[int, int], Poly] = {}
    for (k, l), P in a.entries.items():
        for (i, j), Q in b.entries.items():
            if l != i:
                continue
            R = P * Q * T_MINUS_1 * rising(l)
            out[(k, j)] = out[(k, j)] + R if (k, j) in out else R
    return IdealElem(out, check=False)


# ---------------------------------------------------------------------------
# Shift representations
# ---------------------------------------------------------------------------

@dataclass
class RadMatrix:
    """Square matrix of size D with exact Radical entries (sparse)."""

    D: int
    entries: Dict[Tuple[int, int], Radical] = field(default_factory=dict)

    def __getitem__(self, ij) -> Radical:
        return self.entries.get(ij, Radical())

    def __mul__(self, other: "RadMatrix") -> "RadMatrix":
        if self.D != other.D:
            raise ValueError("size mismatch")
        return RadMatrix(self.D, sparse_matmul(self.entries, other.entries))

    def __add__(self, other: "RadMatrix") -> "RadMatrix":
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e[k] + v if k in e else v
        return RadMatrix(self.D, {k: v for k, v in e.items() if v})

    def __sub__(self, other: "RadMatrix") -> "RadMatrix":
        return self + RadMatrix(other.D, {k: -v for k, v in other.entries.items()})

    def __eq__(self, other):
        return isinstance(other, RadMatrix) and self.D == other.D and self.entries == other.entries

    def block(self, n: int) -> Dict[Tuple[int, int], Radical]:
        """Entries with both indices < n."""
        return {(i, j): v for (i, j), v in self.entries.items() if i < n and j < n}

    def diagonal(self):
        return [self[(i, i)] for i in range(self.D)]

    @property
    def is_zero(self) -> bool:
        return not self.entries


FockMatrix = RadMatrix
CosetMatrix = RadMatrix

# An action sends a lattice index m to (new index, rational factor, radicand),
# or to None when the basis vector is killed.
Action = Callable[[int], Optional[Tuple[int, Fraction, Fraction]]]


def _shift_rep(p: NCPoly, D: int, actions: Mapping[str, Action], mode: str) -> RadMatrix:
    if D < 1:
        raise ValueError("dimension must be positive")
    if mode not in ("truncated", "compressed"):
        raise ValueError(f"unknown mode {mode!r}")
    acc: Dict[Tuple[int, int], Radical] = {}
    for w, c in p.terms.items():
        for j in range(D):
            idx, rat, rad = j, Fraction(1), Fraction(1)
            for letter in reversed(w):
                step = actions[letter](idx)
                if step is None:
                    break
                idx, r, s = step
                rat *= r
                rad *= s
                if not rat or not rad or (mode == "truncated" and idx >= D):
                    break
            else:
                if idx < D:
                    v = Radical.sqrt(rad) * (rat * c)
                    acc[(idx, j)] = acc[(idx, j)] + v if (idx, j) in acc else v
    return RadMatrix(D, {k: v for k, v in acc.items() if v})


def _fock_actions(convention: str) -> Dict[str, Action]:
    if convention == "annihilation":
        # x e_n = sqrt(n) e_{n-1}, y e_n = sqrt(n+1) e_{n+1}
        return {"x": lambda m: (m - 1, Fraction(1), Fraction(m)) if m >= 1 else None,
                "y": lambda m: (m + 1, Fraction(1), Fraction(m + 1))}
    if convention == "literal":
        # sqrt(N) applied after the shift: x e_n = sqrt(n-1) e_{n-1}, y e_n = sqrt(n) e_{n+1}
        return {"x": lambda m: (m - 1, Fraction(1), Fraction(m - 1)) if m >= 1 else None,
                "y": lambda m: (m + 1, Fraction(1), Fraction(m))}
    raise ValueError(f"unknown convention {convention!r}")


def rep_W(p: NCPoly, D: int, mode: str = "truncated", convention: str = "annihilation") -> RadMatrix:
    """Fock representation of a W element on span(e_0, ..., e_{D-1}).

    ``truncated`` multiplies the D x D generator matrices (so the top index
    feels the cut); ``compressed`` applies the exact operator and projects.
    Both agree on interior entries.
    """
    return _shift_rep(p, D, _fock_actions(convention), mode)


def _lattice_actions(t0: Fraction) -> Dict[str, Action]:
    t0 = Fraction(t0)
    if not 0 <= t0 <= 1:
        raise ValueError("base point must lie in [0, 1]")
    return {
        # x' = sqrt(t) U_{-1}: e_m -> sqrt(t0 + m - 1) e_{m-1}
        XP: lambda m: (m - 1, Fraction(1), t0 + m - 1) if m >= 1 else None,
        # y' = U_1 sqrt(t): e_m -> sqrt(t0 + m) e_{m+1}
        YP: lambda m: (m + 1, Fraction(1), t0 + m),
        # f = x'y' - y'x' - 1 is multiplication by t - 1 on [0, 1), zero beyond
        "f": lambda m: (m, t0 - 1, Fraction(1)) if m == 0 else None,
    }


def rep_Wprime(p: NCPoly, t0, D: int, mode: str = "compressed") -> RadMatrix:
    """Action of a W' element on the lattice t0, t0+1, ..., t0+D-1.

    Base points live in (0, 1]; t0 = 0 is accepted as the continuous
    extension of every matrix entry.
    """
    return _shift_rep(p, D, _lattice_actions(t0), mode)


def faithful_zero_test(a: IdealElem) -> bool:
    """True iff ``a`` is zero, cross-checked on the lattice model.

    The (k, l) entry of the lattice image is (t0 - 1) P_kl(t0) times a
    nonzero radical for t0 in (0, 1), so vanishing at deg + 2 distinct base
    points forces every P_kl to vanish.
    """
    direct = not a.entries
    if not a.entries:
        return True
    D = 1 + max(max(k, l) for k, l in a.entries)
    p = a.to_ncpoly()
    points = [Fraction(1, n + 2) for n in range(a.max_degree + 2)]
    via_rep = all(rep_Wprime(p, t0, D).is_zero for t0 in points)
    if via_rep != direct:
        raise OracleDisagreement(f"lattice model says zero={via_rep} for {a}")
    return direct


# ---------------------------------------------------------------------------
# Finite matrices
# ---------------------------------------------------------------------------

class KMatrix:
    """Finitely supported rational matrix indexed by N x N."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[Tuple[int, int], object] | None = None):
        self.entries = {k: Fraction(v) for k, v in (entries or {}).items() if v}

    @classmethod
    def unit(cls, i: int, j: int) -> "KMatrix":
        return cls({(i, j): 1})

    def __add__(self, other):
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e.get(k, 0) + v
        return KMatrix(e)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "KMatrix":
        return KMatrix({k: v * c for k, v in self.entries.items()})

    def __mul__(self, other):
        return kmatrix_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, KMatrix) and self.entries == other.entries

    def __repr__(self):
        return f"KMatrix({dict(sorted(self.entries.items()))})"


def _integral(entries: Mapping[Tuple[int, int], Fraction]):
    den = math.lcm(*(v.denominator for v in entries.values())) if entries else 1
    return den, {k: v.numerator * (den // v.denominator) for k, v in entries.items()}


def kmatrix_mul(a: KMatrix, b: KMatrix) -> KMatrix:
    # clear denominators once so the inner loop runs on machine-sized ints
    da, ia = _integral(a.entries)
    db, ib = _integral(b.entries)
    prod = sparse_matmul(ia, ib)
    return KMatrix({k: Fraction(v, da * db) for k, v in prod.items()})


# ---------------------------------------------------------------------------
# Seeded oracle sweeps
# ---------------------------------------------------------------------------

@dataclass
class OracleSweep:
    name: str
    trials: int
    seed: int
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        head = f"{self.name}: {self.trials} trials, seed {self.seed}, {len(self.mismatches)} mismatches"
        return head if self.ok else f"{head}; first: {self.mismatches[0]}"


def random_word_poly(rng: random.Random, alphabet, letters, max_degree: int, max_terms: int = 3,
                     max_coef: int = 3) -> NCPoly:
    terms: Dict[Tuple, Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_degree)))
        terms[w] = terms.get(w, 0) + rng.choice([c for c in range(-max_coef, max_coef + 1) if c])
    return NCPoly(terms, alphabet)


def weyl_oracle_sweep(trials: int = 500, seed: int = 0, max_degree: int = 5, D: int = 32) -> OracleSweep:
    """Normal form of p*q against rep_W(p) rep_W(q) on the interior block.

    Indices below D - 2*max_degree never see the truncation, so the two
    sides must agree exactly there.
    """
    sys_ = builtin("weyl")
    rng = random.Random(seed)
    inner = D - 2 * max_degree
    out = OracleSweep("weyl vs Fock model", trials, seed)
    for k in range(trials):
        p = random_word_poly(rng, sys_.alphabet, ("x", "y"), max_degree)
        q = random_word_poly(rng, sys_.alphabet, ("x", "y"), max_degree)
        lhs = rep_W(sys_.normal_form(p * q), D).block(inner)
        rhs = (rep_W(p, D) * rep_W(q, D)).block(inner)
        if lhs != rhs:
            out.mismatches.append(f"trial {k}: p = {p}, q = {q}")
    return out


def random_ideal_basis(rng: random.Random, max_kl: int = 4, max_degree: int = 4) -> IdealElem:
    k, l = rng.randint(0, max_kl), rng.randint(0, max_kl)
    coeffs = {d: rng.randint(-3, 3) for d in range(rng.randint(0, max_degree) + 1)}
    if k == l == 0:
        coeffs[0] = 0
    P = Poly(coeffs)
    if not P:
        P = Poly({1: 1}) if k == l == 0 else Poly.const(1)
    return IdealElem.basis(k, l, P)


def ideal_oracle_sweep(trials: int = 500, seed: int = 0, max_kl: int = 4, max_degree: int = 4) -> OracleSweep:
    """ideal_mul against wprime_decompose of the reduced word product."""
    sys_ = builtin("wprime")
    rng = random.Random(seed)
    out = OracleSweep("ideal_mul vs rewriting", trials, seed)
    for k in range(trials):
        a = random_ideal_basis(rng, max_kl, max_degree)
        b = random_ideal_basis(rng, max_kl, max_degree)
        d = wprime_decompose(sys_.normal_form(a.to_ncpoly() * b.to_ncpoly()))
        direct = ideal_mul(a, b)
        if d.w_part or IdealElem(d.i_part, check=False) != direct:
            out.mismatches.append(f"trial {k}: {a} * {b}")
        elif (0, 0) in direct.entries and direct.entries[(0, 0)].coeff(0) != 0:
            out.mismatches.append(f"trial {k}: P_00 has a constant term")
    return out
