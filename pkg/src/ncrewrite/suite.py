"""Identity suites: the builtin identity catalogue and user CHECK files.

Every check is a zero-argument callable returning ``(passed, residual)``.
Checks run on a thread pool; the report is sorted by id before it is
emitted, so the output does not depend on scheduling.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Sequence, Tuple

from .exactnum import rising
from .freealg import NCPoly, ParseError, parse
from .rewrite import (BUILTIN_NAMES, BudgetExceeded, builtin, critical_pairs, e_ij, get_system,
                      verify_identity)

SCHEMA_VERSION = "1.0"
SCHEMA_FILE = "report_schema.json"

Outcome = Tuple[bool, str]


@dataclass
class Check:
    id: str
    system: str
    run: Callable[[], Outcome]


@dataclass
class CheckRecord:
    id: str
    system: str
    status: str
    residual: str
    elapsed_ms: float | None = None


@dataclass
class SuiteReport:
    suite: str
    seed: int
    config: Dict[str, object]
    checks: List[CheckRecord] = field(default_factory=list)

    @property
    def summary(self) -> Dict[str, int]:
        counts = {"total": len(self.checks), "pass": 0, "fail": 0, "error": 0}
        for c in self.checks:
            counts[c.status] += 1
        return counts

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_dict(self, timing: bool = True) -> Dict:
        checks = []
        for c in self.checks:
            d = asdict(c)
            if not timing:
                d.pop("elapsed_ms")
            checks.append(d)
        return {"schema_version": SCHEMA_VERSION, "suite": self.suite, "seed": self.seed,
                "config": dict(sorted(self.config.items())), "summary": self.summary, "checks": checks}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, ensure_ascii=False) + "\n"

    def to_text(self, timing: bool = True, verbose: bool = False) -> str:
        lines = []
        for c in self.checks:
            if c.status == "pass" and not verbose:
                continue
            t = f" [{c.elapsed_ms:.1f} ms]" if timing and c.elapsed_ms is not None else ""
            res = f": {c.residual}" if c.residual else ""
            lines.append(f"{c.status.upper():5} {c.id} ({c.system}){t}{res}")
        s = self.summary
        lines.append(f"{self.suite}: {s['pass']}/{s['total']} passed, {s['fail']} failed, {s['error']} errors")
        return "\n".join(lines) + "\n"


def load_schema() -> Dict:
    return json.loads(resources.files("ncrewrite").joinpath(SCHEMA_FILE).read_text(encoding="utf-8"))


def _run_one(check: Check, timing: bool) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        passed, residual = check.run()
        status = "pass" if passed else "fail"
        residual = "" if passed else str(residual)
    except (BudgetExceeded, ParseError, ValueError, KeyError, ArithmeticError, AssertionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        status, residual = "error", f"{type(exc).__name__}: {msg}"
    ms = (time.perf_counter() - t0) * 1000 if timing else None
    return CheckRecord(check.id, check.system, status, residual, ms)


def run_checks(name: str, checks: Sequence[Check], seed: int = 0, config: Dict | None = None,
               jobs: int = 1, timing: bool = True) -> SuiteReport:
    ids = [c.id for c in checks]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate check ids")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda c: _run_one(c, timing), checks))
    else:
        records = [_run_one(c, timing) for c in checks]
    records.sort(key=lambda r: r.id)
    return SuiteReport(name, seed, dict(config or {}), records)


# ---------------------------------------------------------------------------
# Builtin catalogue
# ---------------------------------------------------------------------------

def _identity(system: str, lhs: str, rhs: str) -> Callable[[], Outcome]:
    def run():
        sys_ = builtin(system)
        rep = verify_identity(sys_.parse(lhs), sys_.parse(rhs), sys_)
        return rep.passed, str(rep.residual)
    return run


def _product(factors: Sequence[str]) -> str:
    return "*".join(f"({f})" for f in factors) if factors else "1"


def _poly_at(p, x: str) -> str:
    """Text of the polynomial p evaluated at the element x."""
    parts = [f"({c})*({x})^{d}" if d else f"({c})" for d, c in p.items()]
    return " + ".join(parts) if parts else "0"


def fundamental_checks() -> List[Check]:
    W = "wprime"
    return [
        Check("wprime_rel.f_yp", W, _identity(W, "f*y'", "0")),
        Check("wprime_rel.xp_f", W, _identity(W, "x'*f", "0")),
        Check("wprime_rel.f_xpyp", W, _identity(W, "f*x'*y'", "f + f^2")),
        Check("wprime_rel.xpyp_f", W, _identity(W, "x'*y'*f", "f + f^2")),
        Check("wprime_rel.rel_left", W, _identity(W, "(x'*y' - y'*x')*y'", "y'")),
        Check("wprime_rel.rel_right", W, _identity(W, "x'*(x'*y' - y'*x')", "x'")),
        Check("wprime_rel.weyl", "weyl", _identity("weyl", "x*y - y*x", "1")),
    ]


def shift_checks(max_m: int = 8) -> List[Check]:
    W = "wprime"
    out = [Check("shift.commutator", W, _identity(W, "x'*(x'*y') - (x'*y')*x'", "x'"))]
    for m in range(max_m + 1):
        out.append(Check(f"shift.left.m={m:02d}", W, _identity(W, f"x'^{m}*(x'*y')", f"({m} + x'*y')*x'^{m}")))
        out.append(Check(f"shift.right.m={m:02d}", W, _identity(W, f"(x'*y')*y'^{m}", f"y'^{m}*({m} + x'*y')")))
    return out


def sandwich_checks(max_kl: int = 6, max_n: int = 8) -> List[Check]:
    W = "wprime"
    out = []
    for k in range(max_kl + 1):
        for l in range(max_kl + 1):
            if k != l:
                out.append(Check(f"sandwich.offdiag.k={k},l={l}", W, _identity(W, f"f*x'^{k}*y'^{l}*f", "0")))
    for n in range(max_n + 1):
        out.append(Check(f"sandwich.step.n={n:02d}", W, _identity(
            W, f"f*x'^{n + 1}*y'^{n + 1}*f", f"({n + 1} + f)*f*x'^{n}*y'^{n}*f")))
        fac = _product([f"{n - i} + f" for i in range(n)])
        out.append(Check(f"sandwich.closed.n={n:02d}", W, _identity(W, f"f*x'^{n}*y'^{n}*f", f"{fac}*f^2")))
    return out


def absorb_checks(max_kl: int = 6) -> List[Check]:
    W = "wprime"
    out = []
    for k in range(max_kl + 1):
        for l in range(max_kl + 1):
            if k < l:
                rhs = "0"
            else:
                rhs = f"{_product([f'{k - i} + f' for i in range(l)])}*f*x'^{k - l}"
            out.append(Check(f"absorb.f_left.k={k},l={l}", W, _identity(W, f"f*x'^{k}*y'^{l}", rhs)))
            if l < k:
                rhs = "0"
            else:
                rhs = f"y'^{l - k}*{_product([f'{l - i} + f' for i in range(k)])}*f"
            out.append(Check(f"absorb.f_right.k={k},l={l}", W, _identity(W, f"x'^{k}*y'^{l}*f", rhs)))
    return out


def rising_checks(max_n: int = 8) -> List[Check]:
    out = []
    for n in range(max_n + 1):
        fn = rising(n)
        out.append(Check(f"rising.weyl.n={n:02d}", "weyl", _identity("weyl", f"x^{n}*y^{n}", _poly_at(fn, "x*y"))))
        out.append(Check(f"rising.wprime.n={n:02d}", "wprime",
                         _identity("wprime", f"x'^{n}*y'^{n}", _poly_at(fn, "x'*y'"))))
    return out


def toeplitz_checks(max_index: int = 4) -> List[Check]:
    T = "toeplitz"
    out = [
        Check("toeplitz.vstar_v", T, _identity(T, "vstar*v", "1")),
        Check("toeplitz.v_vstar", T, _identity(T, "v*vstar", "1 - e")),
        Check("toeplitz.e_v", T, _identity(T, "e*v", "0")),
        Check("toeplitz.vstar_e", T, _identity(T, "vstar*e", "0")),
        Check("toeplitz.e_idempotent", T, _identity(T, "e*e", "e")),
        Check("toeplitz.e_derived", T, _identity(T, "e", "1 - v*vstar")),
    ]

    def unit_calculus():
        sys_ = builtin(T)
        bad = []
        rng = range(max_index + 1)
        for i in rng:
            for j in rng:
                for k in rng:
                    for l in rng:
                        lhs = sys_.normal_form(e_ij(i, j) * e_ij(k, l))
                        rhs = e_ij(i, l) if j == k else NCPoly.zero(sys_.alphabet)
                        if lhs != rhs:
                            bad.append(f"e{i}{j} e{k}{l} = {lhs}")
        return not bad, "; ".join(bad[:3])

    out.append(Check("toeplitz.matrix_units", T, unit_calculus))
    return out


def confluence_checks(degree_bound: int = 8) -> List[Check]:
    def run(name):
        def go():
            rep = critical_pairs(builtin(name), degree_bound)
            bad = [str(p.word) for p in rep.pairs if not p.joinable]
            return rep.ok, f"unresolved overlaps: {', '.join(bad[:5])}"
        return go
    return [Check(f"confluence.{n}", n, run(n)) for n in BUILTIN_NAMES]


def fedosov_checks() -> List[Check]:
    from .tensor import calibrate, calibration_sweep

    def small():
        cal = calibrate()
        return cal.sign == -1, f"calibrated sign {cal.sign}"

    def sweep():
        res = calibration_sweep()
        good = [s for s, r in res.items() if not r.failures]
        bad = [s for s, r in res.items() if r.failures]
        return good == [-1] and bad == [1], f"multiplicative for signs {good}"

    return [Check("fedosov.calibration", "free(a,b)", small),
            Check("fedosov.exhaustive", "free(a,b,c)", sweep)]


def _report_outcome(make) -> Callable[[], Outcome]:
    def run():
        rep = make()
        return rep.passed, str(rep)
    return run


def homotopy_checks() -> List[Check]:
    from . import homotopy as H

    out = []
    for name in H.FAMILY_NAMES:
        out.append(Check(f"homotopy.relations.{name}", "family",
                         _report_outcome(lambda n=name: H.hom_relations_check(H.build_family(n)))))

        def roundtrip(n=name):
            fam = H.build_family(n)
            return H.roundtrip_ok(fam), "printed images do not parse back"
        out.append(Check(f"homotopy.roundtrip.{name}", "family", roundtrip))

    for uname in ("U_PAIR", "U_PAIR_PRIME", "U_WPRIME"):
        def inv(n=uname):
            u, sys_ = H.unitary(n)
            return H.invert_check(u, H.negate_angle(u), sys_)
        out.append(Check(f"homotopy.invert.{uname}", "toeplitz", _report_outcome(inv)))

    def not_invertible():
        T = builtin("toeplitz")
        rep = H.invert_check(T.gen("v"), T.gen("vstar"), T)
        return not rep.passed, "v reported invertible"
    out.append(Check("homotopy.invert.v_fails", "toeplitz", not_invertible))

    def endpoint_zero():
        fam = H.build_family("WPRIME_PHI_T").at(*H.T_ZERO)
        sys_ = fam.target
        ok = (fam.assignment["x'"] == sys_.parse("x'*vstar")
              and fam.assignment["y'"] == sys_.parse("y'*v"))
        return ok, str(fam.printed())
    out.append(Check("homotopy.endpoint.phi_0", "wprime_toeplitz", endpoint_zero))
    out.append(Check("homotopy.interpolation", "toeplitz2", _report_outcome(H.interpolation_check)))
    out.append(Check("homotopy.canonical_embedding", "wprime_toeplitz",
                     _report_outcome(H.canonical_embedding_check)))
    return out


def quasihom_checks(trials: int = 20, seed: int = 0) -> List[Check]:
    import random

    from . import homotopy as H

    out = []
    for k, spec in enumerate(H.wprime_quasihom_specs()):
        out.append(Check(f"quasihom.{k}", "wprime_toeplitz", _report_outcome(lambda s=spec: H.quasihom_check(s))))
    out.append(Check("quasihom.difference", "wprime_toeplitz", _report_outcome(
        lambda: H.orthogonal_difference_check(H.build_family("WPRIME_PHI_T").at(*H.T_HALF_PI), H.build_family("WPRIME_PHIBAR")))))

    def injection():
        rng = random.Random(seed)
        fam = H.b_family()
        pairs = [(rng.choice(fam) + rng.choice(fam), rng.choice(fam)) for _ in range(trials)]
        return H.b_injection_check(pairs)
    out.append(Check("quasihom.b_injection", "wprime_toeplitz", _report_outcome(injection)))
    for ctx_k, ctx in enumerate(H.builtin_morita_contexts()):
        out.append(Check(f"morita.{ctx_k}", "matrices", _report_outcome(lambda c=ctx: H.morita_check(c))))
    return out


def oracle_checks(trials: int = 20, seed: int = 0) -> List[Check]:
    from .models import ideal_oracle_sweep, weyl_oracle_sweep

    def run(fn):
        def go():
            r = fn(trials=trials, seed=seed)
            return r.ok, r.summary()
        return go
    return [Check("oracle.weyl_fock", "weyl", run(weyl_oracle_sweep)),
            Check("oracle.ideal_mul", "wprime", run(ideal_oracle_sweep))]


def classifying_checks(trials: int = 20, seed: int = 0) -> List[Check]:
    from .rewrite import wprime_decompose
    from .tensor import (TensorAlgebra, classifying_map, fundamental_extension, square_sweep,
                         toeplitz_extension)

    def curvature_image():
        ext = fundamental_extension()
        tens = TensorAlgebra(ext.quotient, 6)
        img = classifying_map(ext, tens, tens.curvature(("x",), ("y",)))
        d = wprime_decompose(img)
        ok = not d.w_part and ((0, 0) not in d.i_part or d.i_part[(0, 0)].coeff(0) == 0)
        return ok, f"image {img}, decomposition {d}"

    def square(ext_fn):
        def go():
            problems = square_sweep(ext_fn(), trials, seed)
            return not problems, "; ".join(problems[:3])
        return go

    return [Check("classifying.curvature_in_I", "wprime", curvature_image),
            Check("classifying.square.fundamental", "wprime", square(fundamental_extension)),
            Check("classifying.square.toeplitz", "toeplitz", square(toeplitz_extension))]


def builtin_checks(trials: int = 20, seed: int = 0) -> List[Check]:
    return (fundamental_checks() + shift_checks() + sandwich_checks() + absorb_checks() + rising_checks()
            + toeplitz_checks() + confluence_checks() + fedosov_checks() + homotopy_checks()
            + quasihom_checks(trials, seed) + oracle_checks(trials, seed) + classifying_checks(trials, seed))


# Checks required for the builtin identity catalogue proper (used by the
# acceptance gate); the other groups are extras of the builtin suite.
IDENTITY_GROUPS = ("wprime_rel.", "shift.", "sandwich.", "absorb.", "rising.", "toeplitz.")


# ---------------------------------------------------------------------------
# CHECK files
# ---------------------------------------------------------------------------

@dataclass
class CheckLine:
    lineno: int
    system: str
    lhs: str
    rhs: str


def parse_suite(text: str) -> List[CheckLine]:
    """Lines ``CHECK <system>: <lhs> == <rhs>``; ``#`` starts a comment."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("CHECK "):
            raise ParseError(f"line {lineno}: expected 'CHECK <system>: <lhs> == <rhs>'", 0)
        head, sep, body = line[6:].partition(":")
        if not sep or "==" not in body:
            raise ParseError(f"line {lineno}: expected 'CHECK <system>: <lhs> == <rhs>'", 0)
        lhs, _, rhs = body.partition("==")
        if not head.strip() or not lhs.strip() or not rhs.strip():
            raise ParseError(f"line {lineno}: empty system or side", 0)
        out.append(CheckLine(lineno, head.strip(), lhs.strip(), rhs.strip()))
    return out


def file_checks(lines: Sequence[CheckLine], systems: Dict[str, object] | None = None) -> List[Check]:
    systems = systems or {}

    def run(cl: CheckLine):
        def go():
            sys_ = systems.get(cl.system) or get_system(cl.system)
            rep = verify_identity(parse(cl.lhs, sys_.alphabet), parse(cl.rhs, sys_.alphabet), sys_)
            return rep.passed, str(rep.residual)
        return go
    width = len(str(max((cl.lineno for cl in lines), default=1)))
    return [Check(f"line.{cl.lineno:0{width}d}", cl.system, run(cl)) for cl in lines]
