"""Exact seminorms on finitely supported elements and submultiplicativity sweeps.

Kinds:

* ``WEIGHTED_L1``  sum |a_w| weight(w) on a monomial basis
* ``P_N``          sum (1+i)^n (1+j)^n |a_ij| on finite matrices
* ``Q_N``          sum (1+|k|)^n |a_k| on Laurent polynomials
* ``BETA_PHI``     sum phi(k) phi(l) beta(z_kl) on the ideal I of W'
* ``ALPHA_PSI``    sum psi(i) psi(j) |c_ij| on s(W)
* ``HAT``          sum |c| prod p(x_i) on tensors (projective powers of a weighted l1 norm)
* ``ALPHA_BAR``    weighted l1 norm of the even form alpha^{-1}(t)

Every weight sequence is exact: square roots in thresholds are replaced by
the least integer above them.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exactnum import Poly
from .freealg import NCPoly, Word
from .models import IdealElem, KMatrix, T_MINUS_1, _integral, ideal_mul, kmatrix_mul
from .rewrite import WPrimeDecomp, builtin, s_image, wprime_decompose

KINDS = ("WEIGHTED_L1", "P_N", "Q_N", "BETA_PHI", "ALPHA_PSI", "HAT", "ALPHA_BAR")


class KindMismatch(TypeError):
    pass


class CertificationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Weight sequences
# ---------------------------------------------------------------------------

def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


class PhiSeq:
    """Lazily evaluated, cached weight sequence N -> Q.

    ``monotone`` records whether nondecreasing is known for every argument
    (by construction), which PSI needs to bound its supremum.
    """

    def __init__(self, fn: Callable[[int], Fraction], tag: str, parent: "PhiSeq | None" = None,
                 monotone: bool = False):
        self._fn = fn
        self.tag = tag
        self.parent = parent
        self.monotone = monotone
        self._cache: Dict[int, Fraction] = {}

    def __call__(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("weight sequences live on N")
        v = self._cache.get(k)
        if v is None:
            v = Fraction(self._fn(k))
            self._cache[k] = v
        return v

    def __repr__(self):
        return f"PhiSeq({self.tag})"


def phi0() -> PhiSeq:
    """Least integer >= sqrt(2 (k+2)!)."""
    return PhiSeq(lambda k: ceil_sqrt(2 * math.factorial(k + 2)), "PHI0", monotone=True)


def phi_prime(parent: PhiSeq) -> PhiSeq:
    """phi'(k) = 4 (k+1)! phi(2k)."""
    return PhiSeq(lambda k: 4 * math.factorial(k + 1) * parent(2 * k), f"PHI_PRIME({parent.tag})",
                  parent, monotone=parent.monotone)


def psi(parent: PhiSeq) -> PhiSeq:
    """psi(j) = sup_l parent(l+j) / parent(2l), certified exactly.

    For l >= j we have l + j <= 2l, so a nondecreasing parent gives a ratio
    <= 1, which is attained at l = j.  The supremum is therefore the maximum
    over the finite prefix 0 <= l <= j.  Without known monotonicity no
    crossover can be certified and construction fails.
    """
    if not parent.monotone:
        raise CertificationError(f"cannot certify sup for {parent.tag}: monotonicity unknown")
    return PhiSeq(lambda j: max(parent(l + j) / parent(2 * l) for l in range(j + 1)),
                  f"PSI({parent.tag})", parent, monotone=False)


def custom(fn: Callable[[int], object], tag: str = "CUSTOM", monotone: bool = False) -> PhiSeq:
    return PhiSeq(lambda k: Fraction(fn(k)), tag, monotone=monotone)


def phi_make(kind: str, parent: PhiSeq | None = None) -> PhiSeq:
    if kind == "PHI0":
        return phi0()
    if parent is None:
        raise ValueError(f"{kind} needs a parent sequence")
    if kind == "PHI_PRIME":
        return phi_prime(parent)
    if kind == "PSI":
        return psi(parent)
    raise ValueError(f"unknown sequence kind {kind!r}")


def certify_monotone(seq: PhiSeq, upto: int) -> bool:
    return all(seq(k) <= seq(k + 1) for k in range(upto))


# ---------------------------------------------------------------------------
# Seminorm specifications
# ---------------------------------------------------------------------------

@dataclass
class SeminormSpec:
    kind: str
    n: int = 0
    weight: Optional[Callable[[Word], Fraction]] = None
    phi: Optional[PhiSeq] = None
    beta: Optional[Callable[[Poly], Fraction]] = None
    degree_bound: Optional[int] = None
    displayed_q_weight: bool = False
    context: object = None  # (FormAlgebra, TensorAlgebra) for ALPHA_BAR

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown seminorm kind {self.kind!r}")


def l1_poly(p: Poly) -> Fraction:
    return p.l1()


def weighted_l1(weight: Callable[[Word], object]) -> SeminormSpec:
    return SeminormSpec("WEIGHTED_L1", weight=weight)


def p_n(n: int) -> SeminormSpec:
    return SeminormSpec("P_N", n=n)


def q_n(n: int, displayed: bool = False) -> SeminormSpec:
    return SeminormSpec("Q_N", n=n, displayed_q_weight=displayed)


def beta_phi(phi: PhiSeq, beta: Callable[[Poly], Fraction] = l1_poly) -> SeminormSpec:
    return SeminormSpec("BETA_PHI", phi=phi, beta=beta)


def alpha_psi(psi_seq: PhiSeq) -> SeminormSpec:
    return SeminormSpec("ALPHA_PSI", phi=psi_seq)


def hat(weight: Callable[[Word], object], degree_bound: int | None = None) -> SeminormSpec:
    return SeminormSpec("HAT", weight=weight, degree_bound=degree_bound)


def alpha_bar(weight: Callable[[Word], object], forms, tensors) -> SeminormSpec:
    return SeminormSpec("ALPHA_BAR", weight=weight, context=(forms, tensors))


def _q_weight(spec: SeminormSpec, k: int) -> int:
    if spec.displayed_q_weight:
        return abs(1 + k) ** spec.n
    return (1 + abs(k)) ** spec.n


def _ideal_entries(elem) -> Mapping[Tuple[int, int], Poly]:
    if isinstance(elem, IdealElem):
        return elem.entries
    if isinstance(elem, WPrimeDecomp):
        if elem.w_part:
            raise KindMismatch("BETA_PHI is evaluated on elements of I only")
        return elem.i_part
    raise KindMismatch(f"BETA_PHI expects an ideal element, got {type(elem).__name__}")


def eval_seminorm(spec: SeminormSpec, elem) -> Fraction:
    k = spec.kind
    if k == "P_N":
        if not isinstance(elem, KMatrix):
            raise KindMismatch("P_N expects a KMatrix")
        den, ints = _integral(elem.entries)
        n = spec.n
        return Fraction(sum((1 + i) ** n * (1 + j) ** n * abs(a) for (i, j), a in ints.items()), den)
    if k == "Q_N":
        if not isinstance(elem, Mapping) or not all(isinstance(x, int) for x in elem):
            raise KindMismatch("Q_N expects a Laurent part {k: a_k}")
        return sum((_q_weight(spec, j) * abs(Fraction(a)) for j, a in elem.items()), Fraction(0))
    if k == "BETA_PHI":
        # z_kl = P_kl(x'y') f is the function (t - 1) P_kl(t)
        return sum((spec.phi(a) * spec.phi(b) * spec.beta(P * T_MINUS_1)
                    for (a, b), P in _ideal_entries(elem).items()), Fraction(0))
    if k == "ALPHA_PSI":
        if isinstance(elem, WPrimeDecomp):
            if elem.i_part:
                raise KindMismatch("ALPHA_PSI is evaluated on s(W) only")
            elem = elem.w_part
        if not isinstance(elem, Mapping):
            raise KindMismatch("ALPHA_PSI expects {(i, j): c}")
        return sum((spec.phi(i) * spec.phi(j) * abs(Fraction(c)) for (i, j), c in elem.items()),
                   Fraction(0))
    if k in ("WEIGHTED_L1", "HAT"):
        if not isinstance(elem, NCPoly):
            raise KindMismatch(f"{k} expects an NCPoly")
        if k == "WEIGHTED_L1":
            return sum((Fraction(spec.weight(w)) * abs(Fraction(c)) for w, c in elem.terms.items()),
                       Fraction(0))
        if spec.degree_bound is not None and (elem.degree or 0) > spec.degree_bound:
            raise ValueError("tensor degree above the HAT degree bound")
        total = Fraction(0)
        for word, c in elem.terms.items():
            w = abs(Fraction(c))
            for letter in word:
                w *= Fraction(spec.weight(letter))
            total += w
        return total
    if k == "ALPHA_BAR":
        from .tensor import alpha_inverse
        forms, tensors = spec.context
        form = alpha_inverse(forms, tensors, elem)
        total = Fraction(0)
        for (x0, ds), c in form.terms.items():
            w = abs(c) * (1 if x0 is None else Fraction(spec.weight(x0)))
            for d in ds:
                w *= Fraction(spec.weight(d))
            total += w
        return total
    raise KindMismatch(k)


# public alias matching the operation name
eval = eval_seminorm  # noqa: A001


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

@dataclass
class SamplerConfig:
    trials: int = 1000
    seed: int = 0
    max_degree: int = 4
    max_kl: int = 4
    max_entry: int = 5
    dim: int = 16


def _rational(rng: random.Random, m: int) -> Fraction:
    return Fraction(rng.randint(-m, m), rng.randint(1, m))


def sample_kmatrix(rng: random.Random, cfg: SamplerConfig) -> KMatrix:
    density = rng.choice((0.1, 0.5, 1.0))
    return KMatrix({(i, j): _rational(rng, cfg.max_entry)
                    for i in range(cfg.dim) for j in range(cfg.dim) if rng.random() < density})


def sample_laurent(rng: random.Random, cfg: SamplerConfig) -> Dict[int, Fraction]:
    r = cfg.max_kl
    return {k: _rational(rng, cfg.max_entry) for k in range(-r, r + 1) if rng.random() < 0.5}


def sample_poly(rng: random.Random, cfg: SamplerConfig, zero_constant: bool = False) -> Poly:
    d = rng.randint(0, cfg.max_degree)
    cs = [rng.randint(-cfg.max_entry, cfg.max_entry) for _ in range(d + 1)]
    if zero_constant:
        cs[0] = 0
    return Poly.from_list(cs)


def sample_ideal(rng: random.Random, cfg: SamplerConfig, max_terms: int = 3) -> IdealElem:
    entries: Dict[Tuple[int, int], Poly] = {}
    for _ in range(rng.randint(1, max_terms)):
        k, l = rng.randint(0, cfg.max_kl), rng.randint(0, cfg.max_kl)
        entries[(k, l)] = sample_poly(rng, cfg, zero_constant=(k, l) == (0, 0))
    return IdealElem(entries)


def sample_sw(rng: random.Random, cfg: SamplerConfig, max_terms: int = 3) -> Dict[Tuple[int, int], Fraction]:
    return {(rng.randint(0, cfg.max_kl), rng.randint(0, cfg.max_kl)): Fraction(rng.randint(-cfg.max_entry, cfg.max_entry) or 1)
            for _ in range(rng.randint(1, max_terms))}


def laurent_mul(a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def sw_element(w_part: Mapping[Tuple[int, int], Fraction]) -> NCPoly:
    A = builtin("wprime").alphabet
    out = NCPoly.zero(A)
    for (i, j), c in w_part.items():
        out = out + s_image(i, j).scale(c)
    return out


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass
class Violation:
    a: object
    b: object
    lhs: Fraction
    rhs: Fraction


@dataclass
class SweepReport:
    name: str
    trials: int
    seed: int
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violations"
        return f"{self.name}: {self.trials} trials, seed {self.seed}: {status}"


_DEFAULT_SAMPLERS = {"P_N": sample_kmatrix, "Q_N": sample_laurent, "BETA_PHI": sample_ideal}
_DEFAULT_MULS = {"P_N": kmatrix_mul, "Q_N": laurent_mul, "BETA_PHI": ideal_mul}


def submult_check(spec: SeminormSpec, sampler: Callable | None = None, trials: int = 1000, seed: int = 0,
                  cfg: SamplerConfig | None = None, mul: Callable | None = None,
                  name: str | None = None) -> SweepReport:
    """Check eval(ab) <= eval(a) eval(b) on random pairs; deterministic in seed."""
    cfg = cfg or SamplerConfig(trials=trials, seed=seed)
    sampler = sampler or _DEFAULT_SAMPLERS[spec.kind]
    mul = mul or _DEFAULT_MULS[spec.kind]
    rng = random.Random(seed)
    rep = SweepReport(name or f"submult {spec.kind}", trials, seed)
    for _ in range(trials):
        a, b = sampler(rng, cfg), sampler(rng, cfg)
        lhs = eval_seminorm(spec, mul(a, b))
        rhs = eval_seminorm(spec, a) * eval_seminorm(spec, b)
        if lhs > rhs:
            rep.violations.append(Violation(a, b, lhs, rhs))
    return rep


def find_submult_witness(spec: SeminormSpec, max_kl: int = 4) -> Optional[Violation]:
    """Deterministic search over basis pairs E_kl(t) * E_lj(t) for a violation."""
    one = Poly.t()
    for l in range(max_kl + 1):
        for k in range(max_kl + 1):
            a = IdealElem.basis(k, l, one)
            b = IdealElem.basis(l, 0, one)
            lhs = eval_seminorm(spec, ideal_mul(a, b))
            rhs = eval_seminorm(spec, a) * eval_seminorm(spec, b)
            if lhs > rhs:
                return Violation(a, b, lhs, rhs)
    return None


def mul_ideal_sw(a: IdealElem, b: Mapping[Tuple[int, int], Fraction], left: bool = True) -> IdealElem:
    """a * s(b) (left=True) or s(b) * a, computed by the rewrite engine."""
    sys_ = builtin("wprime")
    an, bn = a.to_ncpoly(), sw_element(b)
    prod = an * bn if left else bn * an
    d = wprime_decompose(sys_.normal_form(prod))
    return IdealElem.from_decomp(d)


def mixed_check(phi: PhiSeq, trials: int = 1000, seed: int = 0, cfg: SamplerConfig | None = None,
                pairs: Sequence[Tuple[IdealElem, Mapping]] | None = None) -> SweepReport:
    """beta_phi(ab) <= beta_phi'(a) alpha_psi(b) and beta_phi(ba) <= alpha_psi(b) beta_phi'(a)."""
    cfg = cfg or SamplerConfig(trials=trials, seed=seed)
    bp, bpp, ap = beta_phi(phi), beta_phi(phi_prime(phi)), alpha_psi(psi(phi))
    rng = random.Random(seed)
    rep = SweepReport(f"mixed {phi.tag}", trials if pairs is None else len(pairs), seed)
    if pairs is None:
        pairs = [(sample_ideal(rng, cfg), sample_sw(rng, cfg)) for _ in range(trials)]
    for a, b in pairs:
        bound = eval_seminorm(bpp, a) * eval_seminorm(ap, b)
        for left in (True, False):
            val = eval_seminorm(bp, mul_ideal_sw(a, b, left))
            if val > bound:
                rep.violations.append(Violation(a, b, val, bound))
    return rep


# ---------------------------------------------------------------------------
# Tensor-algebra bound
# ---------------------------------------------------------------------------

@dataclass
class HatReport:
    hypothesis_failures: List[str]
    value: Fraction
    bound: Fraction

    @property
    def hypotheses_ok(self) -> bool:
        return not self.hypothesis_failures

    @property
    def conclusion_ok(self) -> bool:
        return self.value <= self.bound


def hat_hypotheses(alpha: Callable[[NCPoly], Fraction], beta: Callable[[Word], Fraction], tensors,
                   letters: Sequence[Word]) -> List[str]:
    """alpha(s x) <= b(x), alpha(w(x,y)) <= b(x)b(y), alpha(s(x) w(y,z)) <= b(x)b(y)b(z)."""
    bad = []
    for x in letters:
        if alpha(tensors.sigma(x)) > beta(x):
            bad.append(f"sigma({x})")
        for y in letters:
            if alpha(tensors.curvature(x, y)) > beta(x) * beta(y):
                bad.append(f"omega({x},{y})")
            for z in letters:
                t = tensors.mul(tensors.sigma(x), tensors.curvature(y, z))
                if alpha(t) > beta(x) * beta(y) * beta(z):
                    bad.append(f"sigma({x})omega({y},{z})")
    return bad


def hat_compare(beta: Callable[[Word], object], elem: NCPoly, alpha: Callable[[NCPoly], Fraction],
                tensors, letters: Sequence[Word]) -> HatReport:
    """Check alpha <= HAT(2 beta) at ``elem`` after checking the three hypotheses."""
    b = lambda w: Fraction(beta(w))  # noqa: E731
    failures = hat_hypotheses(alpha, b, tensors, letters)
    bound = eval_seminorm(hat(lambda w: 2 * b(w)), elem)
    return HatReport(failures, alpha(elem), bound)


def laurent_weight(n: int) -> Callable[[Word], int]:
    """(1 + |k|)^n for the Laurent normal word z^k."""
    def w(word: Word) -> int:
        k = sum(1 if a == "z" else -1 for a in word)
        return (1 + abs(k)) ** n
    return w


def tensor_bound_sweep(trials: int = 200, seed: int = 0, n: int = 1, max_power: int = 2,
                   max_degree: int = 3) -> SweepReport:
    """alpha <= HAT(2 beta) on random tensors over the Laurent polynomials.

    beta is the l1 norm with weight (1+|k|)^n, which is submultiplicative.
    alpha = max(beta o pi, HAT(beta/2)) is submultiplicative on all of T B
    and meets the three hypotheses; those are checked on basis letters,
    which suffices because beta is an l1 norm over that basis.  The sweep
    also spot-checks submultiplicativity of alpha on random pairs from J B.
    """
    from .tensor import TensorAlgebra, random_j_tensor

    base = builtin("laurent")
    tensors = TensorAlgebra(base, 2 * max_degree)
    weight = laurent_weight(n)
    beta_spec = weighted_l1(weight)
    half = hat(lambda w: Fraction(weight(w), 2))

    def alpha(t: NCPoly) -> Fraction:
        return max(eval_seminorm(beta_spec, tensors.pi_multiply(t)), eval_seminorm(half, t))

    letters = [()] + [(a,) * k for a in ("z", "zinv") for k in range(1, max_power + 1)]
    rep = SweepReport(f"tensor bound laurent n={n}", trials, seed)
    for bad in hat_hypotheses(alpha, lambda w: Fraction(weight(w)), tensors, letters):
        rep.violations.append(Violation(bad, None, Fraction(0), Fraction(0)))
    rng = random.Random(seed)
    for _ in range(trials):
        terms: Dict[Tuple[Word, ...], Fraction] = {}
        for _ in range(rng.randint(1, 3)):
            word = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_degree)))
            terms[word] = terms.get(word, 0) + _rational(rng, 5)
        t = NCPoly(terms, tensors.alphabet)
        res = hat_compare(weight, t, alpha, tensors, [])
        if not res.conclusion_ok:
            rep.violations.append(Violation(t, None, res.value, res.bound))
        a = random_j_tensor(rng, tensors, letters, max_degree)
        b = random_j_tensor(rng, tensors, letters, max_degree)
        lhs, rhs = alpha(tensors.mul(a, b)), alpha(a) * alpha(b)
        if lhs > rhs:
            rep.violations.append(Violation(a, b, lhs, rhs))
    return rep
