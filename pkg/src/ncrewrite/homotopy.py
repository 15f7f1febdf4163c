"""One-parameter families of homomorphisms and the checks built on them.

A :class:`HomFamily` stores images of the source generators as NCPolys over
a tensor-product presentation.  The parameter t enters only through the
coefficients cos t and sin t (:class:`TrigScalar`), so every check below is
carried out for symbolic t; endpoints are obtained by substituting
(c, s) = (1, 0) or (0, 1).

Only the algebraic content is verified.  Growth conditions that make the
families continuous or differentiable for the Frechet topologies are not
checked here.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exactnum import Poly, Radical, TrigScalar, rising
from .freealg import NCPoly, TRIG_SYMBOLS, Word, apply_hom, parse, solve_in_span
from .models import RadMatrix, rep_Wprime, sparse_matmul
from .rewrite import XP, YP, RewriteSystem, builtin, make_free, wprime_basis

FAMILY_NAMES = ("PAIR_PHI", "PAIR_PHI_PRIME", "PAIR_PSI", "PAIR_UT", "PAIR_UT_PRIME",
                "WPRIME_PHI_T", "WPRIME_PHIBAR", "HOMCOMP_ROTATION")

# u_t over T (x) T as a 2x2 block of matrix units of the first factor, plus
# v^2 v*^2 (x) 1.  Block entries: e + c vv*, s v, -s v*, c.
U_PAIR = ("v1^2*vstar1^2 + e1*e2 + c*e1*v2*vstar2 + s*e1*vstar1*v2"
          " - s*v1*e1*vstar2 + c*v1*e1*vstar1")
U_PAIR_PRIME = "v1^2*vstar1^2 + c*e1 + s*e1*vstar1 - s*v1*e1 + c*v1*e1*vstar1"
# u_t inside T: v^2 v*^2 plus the rotation block on e_00, e_01, e_10, e_11.
U_WPRIME = "v^2*vstar^2 + c*e + s*e*vstar - s*v*e + c*v*e*vstar"

ROTATION_DIM = 4


class NotInB(ValueError):
    """The element is not in the span of y'^n c(x'y') x'^m (x) e_nm."""


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class CheckItem:
    label: str
    passed: bool
    residual: str = ""


@dataclass
class CheckReport:
    name: str
    items: List[CheckItem] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def add(self, label: str, passed: bool, residual="") -> None:
        self.items.append(CheckItem(label, bool(passed), "" if passed else str(residual)))

    def failures(self) -> List[CheckItem]:
        return [i for i in self.items if not i.passed]

    def __str__(self):
        head = f"{self.name}: {'pass' if self.passed else 'FAIL'} ({len(self.items)} items)"
        return "\n".join([head] + [f"  {i.label}: {i.residual}" for i in self.failures()])


# ---------------------------------------------------------------------------
# Coefficient helpers
# ---------------------------------------------------------------------------

def negate_angle(p: NCPoly) -> NCPoly:
    """t -> -t on every coefficient."""
    return p.map_coefficients(lambda a: a.negate_angle() if isinstance(a, TrigScalar) else a)


def at_angle(p: NCPoly, c, s) -> NCPoly:
    """Substitute (cos t, sin t) = (c, s) in every coefficient."""
    return p.map_coefficients(lambda a: a.at(c, s) if isinstance(a, TrigScalar) else a)


def is_symbolic(p: NCPoly) -> bool:
    return any(isinstance(a, TrigScalar) and not a.is_constant for a in p.terms.values())


def _rationalize(p: NCPoly) -> NCPoly:
    return p.map_coefficients(lambda a: a.constant() if isinstance(a, TrigScalar) else a)


# Endpoints of [0, pi/2].
T_ZERO = (1, 0)
T_HALF_PI = (0, 1)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

@dataclass
class HomFamily:
    """Images of the source generators in the target presentation.

    ``kind`` is ``"hom"`` for algebra homomorphisms and ``"form"`` for the
    rotation of bilinear-form preserving maps, where letters are basis
    vectors and only the pairing is meaningful.
    """

    name: str
    source: RewriteSystem
    target: RewriteSystem
    assignment: Dict[str, NCPoly]
    kind: str = "hom"

    def __post_init__(self):
        for g, img in self.assignment.items():
            if g not in self.source.alphabet:
                raise ValueError(f"{g!r} is not a generator of {self.source.name}")
            if img.alphabet != self.target.alphabet:
                raise ValueError(f"image of {g!r} is not over the target alphabet")

    def full_assignment(self) -> Dict:
        return self.source.extend_assignment(self.assignment)

    def image(self, p: NCPoly) -> NCPoly:
        return self.target.normal_form(apply_hom(self.full_assignment(), p, self.target.alphabet))

    def __call__(self, g: str) -> NCPoly:
        return self.image(self.source.gen(g))

    def at(self, c, s) -> "HomFamily":
        return HomFamily(f"{self.name}@({c},{s})", self.source, self.target,
                         {g: self.target.normal_form(at_angle(p, c, s)) for g, p in self.assignment.items()},
                         self.kind)

    @property
    def symbolic(self) -> bool:
        return any(is_symbolic(p) for p in self.assignment.values())

    def printed(self) -> Dict[str, str]:
        return {g: str(p) for g, p in self.assignment.items()}


def _difference(a: HomFamily, b: HomFamily, g: str) -> NCPoly:
    return a.target.normal_form(a(g) - b(g))


def unitary(name: str) -> Tuple[NCPoly, RewriteSystem]:
    """The invertible element u_t behind a family, with its ambient system."""
    if name in ("PAIR_UT", "U_PAIR"):
        sys_ = builtin("toeplitz2")
        return sys_.normal_form(parse(U_PAIR, sys_.alphabet, TRIG_SYMBOLS)), sys_
    if name in ("PAIR_UT_PRIME", "U_PAIR_PRIME"):
        sys_ = builtin("toeplitz2")
        return sys_.normal_form(parse(U_PAIR_PRIME, sys_.alphabet, TRIG_SYMBOLS)), sys_
    if name in ("WPRIME_PHI_T", "U_WPRIME"):
        sys_ = builtin("toeplitz")
        return sys_.normal_form(parse(U_WPRIME, sys_.alphabet, TRIG_SYMBOLS)), sys_
    raise KeyError(name)


def _rotation_family() -> HomFamily:
    # beta_1(a_i) = a_{2i}, beta_2(a_i) = a_{2i+1}: isometries with orthogonal ranges
    src = make_free([f"a{i}" for i in range(ROTATION_DIM)], name="vectors")
    tgt = make_free([f"a{i}" for i in range(2 * ROTATION_DIM)], name="vectors2")
    assignment = {f"a{i}": parse(f"c*a{2 * i} + s*a{2 * i + 1}", tgt.alphabet, TRIG_SYMBOLS)
                  for i in range(ROTATION_DIM)}
    return HomFamily("HOMCOMP_ROTATION", src, tgt, assignment, kind="form")


def build_family(name: str) -> HomFamily:
    if name not in FAMILY_NAMES:
        raise KeyError(f"unknown family {name!r}; choose from {', '.join(FAMILY_NAMES)}")
    if name == "HOMCOMP_ROTATION":
        return _rotation_family()
    if name.startswith("PAIR_"):
        src, tgt = builtin("toeplitz"), builtin("toeplitz2")
        P = lambda text: tgt.normal_form(parse(text, tgt.alphabet, TRIG_SYMBOLS))
        if name == "PAIR_PHI":
            imgs = {"v": P("v1*(1 - e1) + e1*v2"), "vstar": P("(1 - e1)*vstar1 + e1*vstar2")}
        elif name == "PAIR_PHI_PRIME":
            imgs = {"v": P("v1*(1 - e1) + e1"), "vstar": P("(1 - e1)*vstar1 + e1")}
        elif name == "PAIR_PSI":
            imgs = {"v": P("v1"), "vstar": P("vstar1")}
        else:
            u, _ = unitary(name)
            imgs = {"v": tgt.normal_form(u * P("v1")),
                    "vstar": tgt.normal_form(P("vstar1") * negate_angle(u))}
        return HomFamily(name, src, tgt, imgs)
    src, tgt = builtin("wprime"), builtin("wprime_toeplitz")
    P = lambda text: tgt.normal_form(parse(text, tgt.alphabet, TRIG_SYMBOLS))
    if name == "WPRIME_PHIBAR":
        imgs = {XP: P("x'*(1 - e)*vstar"), YP: P("y'*v*(1 - e)")}
    else:
        u = NCPoly(unitary(name)[0].terms, tgt.alphabet)
        imgs = {XP: tgt.normal_form(P("x'*vstar") * negate_angle(u)),
                YP: tgt.normal_form(P("y'") * u * P("v"))}
    return HomFamily(name, src, tgt, imgs)


def roundtrip_ok(fam: HomFamily) -> bool:
    """Printed images parse back to the same NCPolys."""
    return all(parse(str(p), fam.target.alphabet, TRIG_SYMBOLS) == p for p in fam.assignment.values())


# ---------------------------------------------------------------------------
# Checks on families
# ---------------------------------------------------------------------------

def invert_check(u: NCPoly, candidate: NCPoly, sys_: RewriteSystem) -> CheckReport:
    rep = CheckReport("invert")
    one = sys_.one()
    left = sys_.normal_form(u * candidate - one)
    right = sys_.normal_form(candidate * u - one)
    rep.add("u*c == 1", not left, left)
    rep.add("c*u == 1", not right, right)
    return rep


def _form(p: NCPoly, q: NCPoly):
    """Standard pairing of degree-one elements: sum of coefficient products."""
    total = 0
    for w, a in p.terms.items():
        if len(w) != 1:
            raise ValueError("pairing is defined on vectors only")
        b = q.terms.get(w)
        if b is not None:
            total = a * b + total
    return total


def _form_check(fam: HomFamily) -> CheckReport:
    rep = CheckReport(f"{fam.name}: bilinear form")
    names = list(fam.source.alphabet.names)
    beta1 = fam.at(*T_ZERO)
    beta2 = fam.at(*T_HALF_PI)
    for a, b in itertools.product(names, repeat=2):
        cross = _form(beta1(a), beta2(b))
        rep.add(f"<b1 {a}|b2 {b}> == 0", not cross, cross)
    for a, b in itertools.product(names, repeat=2):
        lhs = _form(fam(a), fam(b))
        rhs = 1 if a == b else 0
        ok = lhs == rhs if not isinstance(lhs, TrigScalar) else lhs == TrigScalar.const(rhs)
        rep.add(f"<phi {a}|phi {b}> == <{a}|{b}>", ok, lhs)
    return rep


def hom_relations_check(fam: HomFamily) -> CheckReport:
    """Defining relations and rewrite rules of the source map to zero."""
    if fam.kind == "form":
        return _form_check(fam)
    rep = CheckReport(f"{fam.name}: relations")
    full = fam.full_assignment()
    tgt = fam.target
    for r in fam.source.relations:
        res = tgt.normal_form(apply_hom(full, r, tgt.alphabet))
        rep.add(f"relation {r}", not res, res)
    for rule in fam.source.rules:
        lhs = NCPoly.word(fam.source.alphabet, rule.lhs)
        res = tgt.normal_form(apply_hom(full, lhs - rule.rhs, tgt.alphabet))
        rep.add(f"rule {rule}", not res, res)
    return rep


def families_equal(a: HomFamily, b: HomFamily) -> Tuple[bool, str]:
    for g in a.assignment:
        d = _difference(a, b, g)
        if d:
            return False, f"{g}: {d}"
    return True, ""


def _contains_letter(word: Word, letter) -> bool:
    return letter in word


def in_compact_part(p: NCPoly, letter) -> bool:
    """Every term contains the matrix-unit generator ``letter``.

    On Toeplitz normal forms the e-containing words v^i e v*^j span the
    compact ideal and the rest are independent modulo it.
    """
    return all(_contains_letter(w, letter) for w in p.terms)


def interpolation_check() -> CheckReport:
    """The two legs phi_t, phi'_t through psi connect phi and phi'.

    Leg ends are computed by substituting the endpoint values, and every
    phi_t(g) - phi(g) must lie in K (x) T for symbolic t.
    """
    rep = CheckReport("psi_t interpolation")
    phi, phip, psi_ = (build_family(n) for n in ("PAIR_PHI", "PAIR_PHI_PRIME", "PAIR_PSI"))
    for leg, end in (("PAIR_UT", phi), ("PAIR_UT_PRIME", phip)):
        fam = build_family(leg)
        ok, res = families_equal(fam.at(*T_ZERO), psi_)
        rep.add(f"{leg} at t=0 is psi", ok, res)
        ok, res = families_equal(fam.at(*T_HALF_PI), end)
        rep.add(f"{leg} at t=pi/2 is {end.name}", ok, res)
        for g in ("v", "vstar"):
            d = _difference(fam, phi, g)
            rep.add(f"{leg}({g}) - phi({g}) in K(x)T", in_compact_part(d, "e1"), d)
    return rep


# ---------------------------------------------------------------------------
# The subalgebra B of W' (x) K
# ---------------------------------------------------------------------------

def _split_wt(word: Word, right_letters) -> Tuple[Word, Word]:
    for i, a in enumerate(word):
        if a in right_letters:
            return word[:i], word[i:]
    return word, ()


def _matrix_unit_index(word: Word) -> Optional[Tuple[int, int]]:
    """(n, m) if the Toeplitz word is v^n e vstar^m."""
    if "e" not in word:
        return None
    k = word.index("e")
    head, tail = word[:k], word[k + 1:]
    if set(head) <= {"v"} and set(tail) <= {"vstar"}:
        return len(head), len(tail)
    return None


def b_element(n: int, m: int, c: Poly) -> NCPoly:
    """y'^n c(x'y') x'^m (x) e_nm in normal form."""
    sys_ = builtin("wprime_toeplitz")
    A = sys_.alphabet
    xy = parse("x'*y'", A)
    cxy = c(xy) if c.degree is not None else NCPoly.zero(A)
    if not isinstance(cxy, NCPoly):
        cxy = NCPoly.one(A, cxy)
    word = NCPoly.word(A, (YP,) * n) * cxy * NCPoly.word(A, (XP,) * m)
    unit = NCPoly.word(A, ("v",) * n + ("e",) + ("vstar",) * m)
    return sys_.normal_form(word * unit)


def b_decompose(p: NCPoly) -> Dict[Tuple[int, int], Poly]:
    """Coefficients c_nm with p = sum y'^n c_nm(x'y') x'^m (x) e_nm.

    Raises :class:`NotInB` when p is outside the span.
    """
    sys_ = builtin("wprime_toeplitz")
    p = sys_.normal_form(p)
    if is_symbolic(p):
        raise NotInB("coefficients depend on t")
    p = _rationalize(p)
    right = set(builtin("toeplitz").alphabet.names)
    parts: Dict[Tuple[int, int], Dict[Word, Fraction]] = {}
    for w, c in p.terms.items():
        left, tw = _split_wt(w, right)
        nm = _matrix_unit_index(tw)
        if nm is None:
            raise NotInB(f"term {sys_.alphabet.format_word(w)} has no matrix-unit factor")
        parts.setdefault(nm, {})[left + ("e",)] = c
    out: Dict[Tuple[int, int], Poly] = {}
    for (n, m), terms in parts.items():
        target = NCPoly(terms, sys_.alphabet)
        top = max(len(w) - 1 for w in terms)
        lo = 1 if n == m == 0 else 0
        hi = max(lo, (top - n - m) // 2 + 1)
        vecs = []
        for d in range(lo, hi + 1):
            el = b_element(n, m, Poly({d: 1}))
            vecs.append(NCPoly({_split_wt(w, right)[0] + ("e",): c for w, c in el.terms.items()},
                               sys_.alphabet))
        sol = solve_in_span(target, vecs)
        if sol is None:
            raise NotInB(f"the e_{n}{m} component is not y'^{n} c(x'y') x'^{m}")
        c = Poly({d: x for d, x in zip(range(lo, hi + 1), sol)})
        if c:
            out[(n, m)] = c
    return out


def in_b(p: NCPoly) -> bool:
    try:
        b_decompose(p)
    except NotInB:
        return False
    return True


def b_family(max_index: int = 2, max_degree: int = 2) -> List[NCPoly]:
    """Monomial generators y'^n (x'y')^d x'^m (x) e_nm of B."""
    out = []
    for n, m in itertools.product(range(max_index + 1), repeat=2):
        for d in range(1 if n == m == 0 else 0, max_degree + 1):
            out.append(b_element(n, m, Poly({d: 1})))
    return out


def b_injection(p: NCPoly) -> Dict[Tuple[int, int], Poly]:
    """y'^n c x'^m (x) e_nm  ->  c f_m (x) e_nm, as a matrix of polynomials."""
    return {nm: c * rising(nm[1]) for nm, c in b_decompose(p).items()}


def b_injection_check(pairs: Sequence[Tuple[NCPoly, NCPoly]]) -> CheckReport:
    """Multiplicativity and injectivity of the injection on sampled pairs."""
    sys_ = builtin("wprime_toeplitz")
    rep = CheckReport("B injection")
    for k, (p, q) in enumerate(pairs):
        ip, iq = b_injection(p), b_injection(q)
        ipq = b_injection(sys_.normal_form(p * q))
        prod = sparse_matmul(ip, iq)
        rep.add(f"pair {k}: image(pq) == image(p) image(q)", ipq == prod, f"{ipq} != {prod}")
        for el, img in ((p, ip), (q, iq)):
            rep.add(f"pair {k}: zero image iff zero", (not img) == (not sys_.normal_form(el)), el)
    return rep


# ---------------------------------------------------------------------------
# Quasihomomorphisms
# ---------------------------------------------------------------------------

@dataclass
class QuasiHomSpec:
    name: str
    alpha: HomFamily
    alphabar: HomFamily
    member: Callable[[NCPoly], bool]
    generators: Sequence[str]
    family: Sequence[NCPoly]


def quasihom_check(spec: QuasiHomSpec) -> CheckReport:
    rep = CheckReport(spec.name)
    tgt = spec.alpha.target
    for g in spec.generators:
        d = _difference(spec.alpha, spec.alphabar, g)
        rep.add(f"alpha({g}) - alphabar({g}) in B", spec.member(d), d)
        ag = spec.alpha(g)
        for k, b in enumerate(spec.family):
            left = tgt.normal_form(ag * b)
            right = tgt.normal_form(b * ag)
            rep.add(f"alpha({g}) b{k} in B", spec.member(left), left)
            rep.add(f"b{k} alpha({g}) in B", spec.member(right), right)
    return rep


def orthogonal_difference_check(alpha: HomFamily, alphabar: HomFamily, max_length: int = 4) -> CheckReport:
    """Orthogonality of phi = alpha - alphabar to alphabar, then phi multiplicative."""
    rep = CheckReport(f"{alpha.name} - {alphabar.name} orthogonality")
    tgt = alpha.target
    gens = list(alpha.assignment)
    phi = {g: _difference(alpha, alphabar, g) for g in gens}
    for x, y in itertools.product(gens, repeat=2):
        a = tgt.normal_form(phi[x] * alphabar(y))
        b = tgt.normal_form(alphabar(y) * phi[x])
        rep.add(f"phi({x}) alphabar({y}) == 0", not a, a)
        rep.add(f"alphabar({y}) phi({x}) == 0", not b, b)
    src = alpha.source
    for n in range(2, max_length + 1):
        for w in itertools.product(gens, repeat=n):
            word = NCPoly.word(src.alphabet, w)
            lhs = tgt.normal_form(alpha.image(word) - alphabar.image(word))
            rhs = tgt.one()
            for g in w:
                rhs = tgt.normal_form(rhs * phi[g])
            res = tgt.normal_form(lhs - rhs)
            rep.add(f"phi({src.alphabet.format_word(w)}) multiplicative", not res, res)
    return rep


def canonical_embedding_check() -> CheckReport:
    """phi_{pi/2}(g) - phibar(g) == g (x) e for both generators of W'."""
    rep = CheckReport("phi_pi/2 - phibar is the canonical embedding")
    end = build_family("WPRIME_PHI_T").at(*T_HALF_PI)
    bar = build_family("WPRIME_PHIBAR")
    tgt = end.target
    for g in (XP, YP):
        d = _difference(end, bar, g)
        want = NCPoly.word(tgt.alphabet, (g, "e"))
        rep.add(f"{g}", d == want, d)
    return rep


def compact_member(p: NCPoly) -> bool:
    return in_compact_part(p, "e")


def compact_family(max_index: int = 1) -> List[NCPoly]:
    """Monomials g (x) e_nm spanning (a generating part of) W' (x) K."""
    sys_ = builtin("wprime_toeplitz")
    out = []
    for g in (XP, YP, "f"):
        for n, m in itertools.product(range(max_index + 1), repeat=2):
            out.append(sys_.normal_form(NCPoly.word(sys_.alphabet, (g,) + ("v",) * n + ("e",) + ("vstar",) * m)))
    return out


def wprime_quasihom_specs() -> List[QuasiHomSpec]:
    phi_t = build_family("WPRIME_PHI_T")
    bar = build_family("WPRIME_PHIBAR")
    return [
        QuasiHomSpec("(phi_0, phibar) into B", phi_t.at(*T_ZERO), bar, in_b, (XP, YP), b_family()),
        QuasiHomSpec("(phi_t, phibar) into W'(x)K", phi_t, bar, compact_member, (XP, YP), compact_family()),
        QuasiHomSpec("(phi_pi/2, phibar) into W'(x)K", phi_t.at(*T_HALF_PI), bar, compact_member,
                     (XP, YP), compact_family()),
    ]


# ---------------------------------------------------------------------------
# Morita contexts
# ---------------------------------------------------------------------------

class PMatrix:
    """Finitely supported matrix with polynomial entries."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[Tuple[int, int], Poly] | None = None):
        self.entries = {k: v if isinstance(v, Poly) else Poly.const(v) for k, v in (entries or {}).items()}
        self.entries = {k: v for k, v in self.entries.items() if v}

    @classmethod
    def unit(cls, i: int, j: int, p: Poly | None = None) -> "PMatrix":
        return cls({(i, j): p if p is not None else Poly.const(1)})

    def __add__(self, other):
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e[k] + v if k in e else v
        return PMatrix(e)

    def __sub__(self, other):
        return self + PMatrix({k: -v for k, v in other.entries.items()})

    def __mul__(self, other):
        return PMatrix(sparse_matmul(self.entries, other.entries))

    def __eq__(self, other):
        return isinstance(other, PMatrix) and self.entries == other.entries

    def __bool__(self):
        return bool(self.entries)

    def __repr__(self):
        return "PMatrix({" + ", ".join(f"{k}: {v}" for k, v in sorted(self.entries.items())) + "})"


@dataclass
class MoritaContext:
    """Finite families inside an ambient algebra with ``+``, ``-`` and ``*``.

    ``a_family`` is a monomial generating family of A; ``in_a``/``in_b``
    decide membership; ``is_zero`` decides vanishing of residuals.
    """

    name: str
    a_family: Sequence
    in_a: Callable[[object], bool]
    in_b: Callable[[object], bool]
    xi: Sequence
    eta: Sequence
    is_zero: Callable[[object], bool]
    xi_dual: Sequence = ()
    eta_dual: Sequence = ()
    b_family: Sequence = ()


def morita_check(ctx: MoritaContext) -> CheckReport:
    rep = CheckReport(ctx.name)
    for k, a in enumerate(ctx.a_family):
        for (j, eta), (i, xi) in itertools.product(enumerate(ctx.eta), enumerate(ctx.xi)):
            x = eta * a * xi
            rep.add(f"eta{j} a{k} xi{i} in B", ctx.in_b(x), x)
        if ctx.xi:
            proj = ctx.xi[0] * ctx.eta[0]
            for xi, eta in zip(ctx.xi[1:], ctx.eta[1:]):
                proj = proj + xi * eta
            res = proj * a - a
            rep.add(f"(sum xi eta) a{k} == a{k}", ctx.is_zero(res), res)
        else:
            rep.add(f"a{k} == 0 (empty families)", ctx.is_zero(a), a)
        for (i, xi), (l, xid) in itertools.product(enumerate(ctx.xi), enumerate(ctx.xi_dual)):
            x = a * xi * xid
            rep.add(f"a{k} xi{i} xi'{l} in A", ctx.in_a(x), x)
        for (kk, etad), (j, eta) in itertools.product(enumerate(ctx.eta_dual), enumerate(ctx.eta)):
            x = etad * eta * a
            rep.add(f"eta'{kk} eta{j} a{k} in A", ctx.in_a(x), x)
    # the dual context goes from B back to A
    for k, b in enumerate(ctx.b_family):
        for (kk, etad), (l, xid) in itertools.product(enumerate(ctx.eta_dual), enumerate(ctx.xi_dual)):
            x = etad * b * xid
            rep.add(f"eta'{kk} b{k} xi'{l} in A", ctx.in_a(x), x)
        if ctx.xi_dual:
            proj = ctx.xi_dual[0] * ctx.eta_dual[0]
            for xid, etad in zip(ctx.xi_dual[1:], ctx.eta_dual[1:]):
                proj = proj + xid * etad
            res = proj * b - b
            rep.add(f"(sum xi' eta') b{k} == b{k}", ctx.is_zero(res), res)
    return rep


def corner_context(size: int = 4, max_degree: int = 2) -> MoritaContext:
    """A = t C[t] in the (0,0) corner, B = size x size matrices over t C[t].

    xi_0 = eta_0 = e_00, xi'_l = e_l0, eta'_k = e_0k.
    """
    def vanishes_at_0(p: Poly) -> bool:
        return p.coeff(0) == 0

    def in_a(m: PMatrix) -> bool:
        return set(m.entries) <= {(0, 0)} and all(map(vanishes_at_0, m.entries.values()))

    def in_b(m: PMatrix) -> bool:
        return all(i < size and j < size and vanishes_at_0(p) for (i, j), p in m.entries.items())

    a_family = [PMatrix.unit(0, 0, Poly({d: 1})) for d in range(1, max_degree + 1)]
    b_family = [PMatrix.unit(i, j, Poly({d: 1}))
                for i, j in itertools.product(range(size), repeat=2) for d in range(1, max_degree + 1)]
    return MoritaContext(
        "corner context over t C[t]", a_family, in_a, in_b,
        xi=[PMatrix.unit(0, 0)], eta=[PMatrix.unit(0, 0)], is_zero=lambda m: not m,
        xi_dual=[PMatrix.unit(l, 0) for l in range(size)],
        eta_dual=[PMatrix.unit(0, k) for k in range(size)],
        b_family=b_family)


LATTICE_POINTS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1))


def _rad_unit(D: int, i: int, j: int) -> RadMatrix:
    return RadMatrix(D, {(i, j): Radical.rational(1)})


def lattice_context(t0, size: int = 3, D: int | None = None) -> MoritaContext:
    """I acting on the lattice t0 + N, with xi_i = U_1^i chi and eta_j = chi U_{-1}^j.

    eta_j a xi_i is the (j, i) entry of a placed in the (0, 0) corner.  B is
    the corner algebra of functions of t0 vanishing at 0 and 1, so at the
    boundary points membership means the product is zero.
    """
    t0 = Fraction(t0)
    D = D or size + 2
    boundary = t0 in (0, 1)

    def in_b(m: RadMatrix) -> bool:
        if boundary:
            return m.is_zero
        return set(m.entries) <= {(0, 0)}

    def in_a(m: RadMatrix) -> bool:
        return True

    basis = [(k, l, P) for k in range(size) for l in range(size)
             for P in (Poly({1: 1}), Poly({0: 1}), Poly({2: 1, 0: 1}))
             if not (k == l == 0 and P.coeff(0))]
    a_family = [rep_Wprime(wprime_basis(k, l, P), t0, D) for k, l, P in basis]
    return MoritaContext(
        f"lattice context at t0={t0}", a_family, in_a, in_b,
        xi=[_rad_unit(D, i, 0) for i in range(D)], eta=[_rad_unit(D, 0, j) for j in range(D)],
        is_zero=lambda m: m.is_zero)


def builtin_morita_contexts() -> List[MoritaContext]:
    empty = MoritaContext("empty families", [PMatrix()], lambda m: True, lambda m: True, [], [],
                          is_zero=lambda m: not m)
    return [corner_context()] + [lattice_context(t0) for t0 in LATTICE_POINTS] + [empty]
