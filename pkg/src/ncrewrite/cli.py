"""Command line: ``python -m ncrewrite {nf,verify,suite,seminorm,family,report}``.

Exit codes: 0 success, 1 parse or input error, 2 unknown system, 3 budget
exceeded, 4 a check or suite failed.
"""
from __future__ import annotations

import argparse
import copy
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence

from .freealg import ParseError, UnknownGenerator
from .rewrite import (BUILTIN_NAMES, Budget, BudgetExceeded, NotInWPrime, PresentationError, RewriteSystem,
                      get_system, parse_presentation, toeplitz_split, wprime_decompose)

EXIT_OK, EXIT_PARSE, EXIT_SYSTEM, EXIT_BUDGET, EXIT_FAIL = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


def _frac(q) -> str:
    return str(Fraction(q))


def _emit(args, text: str, payload: Dict | None = None) -> None:
    out = json.dumps(payload, indent=2, ensure_ascii=False) + "\n" if args.format == "json" else text + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


def _system(args) -> RewriteSystem:
    if getattr(args, "presentation", None):
        try:
            sys_ = parse_presentation(Path(args.presentation).read_text(encoding="utf-8"),
                                      Path(args.presentation).stem)
        except (PresentationError, ParseError) as exc:
            raise CliError(f"presentation: {exc}", EXIT_PARSE)
    else:
        try:
            sys_ = get_system(args.system)
        except KeyError as exc:
            raise CliError(str(exc.args[0]), EXIT_SYSTEM)
    sys_ = copy.copy(sys_)
    sys_.budget = Budget(max_terms=args.max_terms, max_word_length=args.max_degree)
    return sys_


def _parse(sys_: RewriteSystem, text: str, what: str = "expression"):
    try:
        return sys_.parse(text)
    except (ParseError, UnknownGenerator) as exc:
        raise CliError(f"cannot parse {what} {text!r}: {exc}", EXIT_PARSE)


# ---------------------------------------------------------------------------
# nf / verify
# ---------------------------------------------------------------------------

def _decomposition(sys_: RewriteSystem, nf) -> Dict:
    if sys_.name == "wprime":
        try:
            d = wprime_decompose(nf, allow_unit=True)
        except NotInWPrime as exc:
            raise CliError(str(exc), EXIT_PARSE)
        return {"i_part": {f"{k},{l}": str(P) for (k, l), P in sorted(d.i_part.items())},
                "w_part": {f"{n},{m}": _frac(c) for (n, m), c in sorted(d.w_part.items())}}
    if sys_.name == "toeplitz":
        mat, lau = toeplitz_split(nf, sys_)
        return {"matrix": {f"{i},{j}": _frac(a) for (i, j), a in sorted(mat.items())},
                "laurent": {str(k): _frac(b) for k, b in sorted(lau.items())}}
    raise CliError(f"--decompose is available for wprime and toeplitz, not {sys_.name}", EXIT_PARSE)


def cmd_nf(args) -> int:
    sys_ = _system(args)
    p = _parse(sys_, args.expr)
    nf = sys_.normal_form(p)
    text = nf.pretty() if args.pretty else str(nf)
    payload = {"system": sys_.name, "input": args.expr, "normal_form": str(nf)}
    if args.decompose:
        dec = _decomposition(sys_, nf)
        payload["decomposition"] = dec
        text += "\n" + "\n".join(f"{k}: {json.dumps(v)}" for k, v in dec.items())
    _emit(args, text, payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .rewrite import verify_identity

    sys_ = _system(args)
    rep = verify_identity(_parse(sys_, args.lhs, "lhs"), _parse(sys_, args.rhs, "rhs"), sys_)
    _emit(args, str(rep), {"system": sys_.name, "lhs": args.lhs, "rhs": args.rhs,
                           "status": "pass" if rep.passed else "fail", "residual": str(rep.residual)})
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

def cmd_suite(args) -> int:
    from .suite import builtin_checks, file_checks, parse_suite, run_checks

    config = {"trials": args.trials, "max_degree": args.max_degree, "max_terms": args.max_terms}
    if args.suite == "builtin":
        checks, name = builtin_checks(trials=args.trials, seed=args.seed), "builtin"
    else:
        path = Path(args.suite)
        try:
            lines = parse_suite(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise CliError(f"cannot read suite file: {exc}", EXIT_PARSE)
        except ParseError as exc:
            raise CliError(f"{path.name}: {exc}", EXIT_PARSE)
        systems = {}
        for cl in lines:
            if cl.system in systems:
                continue
            try:
                systems[cl.system] = _system(argparse.Namespace(**{**vars(args), "system": cl.system,
                                                                   "presentation": None}))
            except CliError:
                pass  # recorded per check as an error
        checks, name = file_checks(lines, systems), path.name
    report = run_checks(name, checks, seed=args.seed, config=config, jobs=args.jobs,
                        timing=not args.no_timing)
    out = report.to_json(not args.no_timing) if args.format == "json" else report.to_text(
        not args.no_timing, args.verbose)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK if report.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# seminorm
# ---------------------------------------------------------------------------

def _phi(tag: str):
    from .seminorms import custom, phi0, phi_prime, psi

    if tag == "PHI0":
        return phi0()
    if tag == "PHI_PRIME":
        return phi_prime(phi0())
    if tag == "PSI":
        return psi(phi0())
    if tag == "ONE":
        return custom(lambda k: 1, "ONE", monotone=True)
    raise CliError(f"unknown phi {tag!r}", EXIT_PARSE)


def _spec(args):
    from . import seminorms as S

    if args.kind == "P_N":
        return S.p_n(args.n)
    if args.kind == "Q_N":
        return S.q_n(args.n, displayed=args.displayed)
    if args.kind == "BETA_PHI":
        return S.beta_phi(_phi(args.phi))
    if args.kind == "ALPHA_PSI":
        return S.alpha_psi(S.psi(_phi(args.phi)))
    raise CliError(f"kind {args.kind} is not available from the command line", EXIT_PARSE)


def _element(args, spec):
    """Parse --expr in the system that carries the seminorm's domain."""
    from .models import IdealElem, KMatrix
    from .seminorms import KindMismatch

    system = {"P_N": "toeplitz", "Q_N": "laurent", "BETA_PHI": "wprime", "ALPHA_PSI": "wprime"}[spec.kind]
    sys_ = _system(argparse.Namespace(**{**vars(args), "system": system, "presentation": None}))
    nf = sys_.normal_form(_parse(sys_, args.expr))
    if spec.kind == "P_N":
        mat, lau = toeplitz_split(nf, sys_)
        if lau:
            raise KindMismatch("P_N is defined on the compact part (e-words) only")
        return KMatrix(mat)
    if spec.kind == "Q_N":
        return {sum(1 if a == "z" else -1 for a in w): c for w, c in nf.terms.items()}
    d = wprime_decompose(nf, allow_unit=True)
    if spec.kind == "BETA_PHI":
        return IdealElem(d.i_part, check=False) if not d.w_part else d
    return d


def cmd_seminorm(args) -> int:
    from . import seminorms as S

    cfg = S.SamplerConfig(trials=args.trials, seed=args.seed, max_degree=args.max_poly_degree,
                          max_kl=args.max_kl, max_entry=args.max_entry, dim=args.truncation_dim)
    if args.mixed:
        rep = S.mixed_check(_phi(args.phi), trials=args.trials, seed=args.seed, cfg=cfg)
        _emit(args, rep.summary(), {"check": rep.name, "trials": rep.trials, "seed": rep.seed,
                                    "violations": len(rep.violations)})
        return EXIT_OK if rep.ok else EXIT_FAIL
    if args.tensor_bound:
        rep = S.tensor_bound_sweep(trials=args.trials, seed=args.seed, n=args.n)
        _emit(args, rep.summary(), {"check": rep.name, "trials": rep.trials, "seed": rep.seed,
                                    "violations": len(rep.violations)})
        return EXIT_OK if rep.ok else EXIT_FAIL
    if not args.kind:
        raise CliError("--kind is required unless --mixed or --tensor-bound is given", EXIT_PARSE)
    spec = _spec(args)
    if args.witness:
        if spec.kind != "BETA_PHI":
            raise CliError("--witness searches basis pairs of I (BETA_PHI only)", EXIT_PARSE)
        v = S.find_submult_witness(spec, max_kl=args.max_kl)
        if v is None:
            _emit(args, "no witness found", {"witness": None})
            return EXIT_FAIL
        _emit(args, f"witness: {v.a} * {v.b}: {v.lhs} > {v.rhs}",
              {"witness": {"a": repr(v.a), "b": repr(v.b), "lhs": _frac(v.lhs), "rhs": _frac(v.rhs)}})
        return EXIT_OK
    if args.fuzz:
        if spec.kind not in ("P_N", "Q_N", "BETA_PHI"):
            raise CliError(f"no sampler for {spec.kind}", EXIT_PARSE)
        rep = S.submult_check(spec, trials=args.trials, seed=args.seed, cfg=cfg)
        _emit(args, rep.summary(), {"check": rep.name, "trials": rep.trials, "seed": rep.seed,
                                    "violations": len(rep.violations)})
        return EXIT_OK if rep.ok else EXIT_FAIL
    if args.expr is None:
        raise CliError("give --expr, --fuzz, --witness, --mixed or --tensor-bound", EXIT_PARSE)
    try:
        value = S.eval_seminorm(spec, _element(args, spec))
    except S.KindMismatch as exc:
        raise CliError(str(exc), EXIT_PARSE)
    _emit(args, _frac(value), {"kind": spec.kind, "expr": args.expr, "value": _frac(value)})
    return EXIT_OK


# ---------------------------------------------------------------------------
# family / report
# ---------------------------------------------------------------------------

_ANGLES = {"t": None, "0": (1, 0), "pi/2": (0, 1)}


def cmd_family(args) -> int:
    from . import homotopy as H

    fam = H.build_family(args.name)
    if _ANGLES[args.at] is not None:
        fam = fam.at(*_ANGLES[args.at])
    rep = H.hom_relations_check(fam)
    lines = [f"{g} -> {img}" for g, img in fam.printed().items()] + [str(rep)]
    _emit(args, "\n".join(lines), {"family": args.name, "at": args.at, "assignment": fam.printed(),
                                   "relations": "pass" if rep.passed else "fail"})
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_report(args) -> int:
    from .suite import load_schema

    schema = load_schema()
    if args.schema:
        sys.stdout.write(json.dumps(schema, indent=2) + "\n")
        return EXIT_OK
    if not args.input:
        raise CliError("give --input REPORT.json or --schema", EXIT_PARSE)
    import jsonschema

    try:
        data = json.loads(Path(args.input).read_text(encoding="utf-8"))
        jsonschema.validate(data, schema)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as exc:
        raise CliError(f"invalid report: {exc}", EXIT_PARSE)
    s = data["summary"]
    failed = [c["id"] for c in data["checks"] if c["status"] != "pass"]
    text = f"{data['suite']} (seed {data['seed']}): {s['pass']}/{s['total']} passed"
    if failed:
        text += "\nnot passing: " + ", ".join(failed)
    _emit(args, text, {"valid": True, "summary": s, "not_passing": failed})
    return EXIT_OK if not failed else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_GLOBAL_DEFAULTS = {"max_degree": 64, "max_terms": 10 ** 6, "truncation_dim": 16, "format": "text",
                    "jobs": 1, "no_timing": False}


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda k: argparse.SUPPRESS) if suppress else (lambda k: _GLOBAL_DEFAULTS[k])
    p.add_argument("--max-degree", type=int, default=d("max_degree"),
                   help="longest word the rewriter may create")
    p.add_argument("--max-terms", type=int, default=d("max_terms"), help="term budget for one reduction")
    p.add_argument("--truncation-dim", type=int, default=d("truncation_dim"), help="matrix size for finite models")
    p.add_argument("--format", choices=("text", "json"), default=d("format"))
    p.add_argument("--jobs", type=int, default=d("jobs"), help="worker threads for suite checks")
    p.add_argument("--no-timing", action="store_true", default=d("no_timing"),
                   help="omit elapsed times from reports")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncrewrite", description="exact rewriting for W, W', Toeplitz and friends")
    _common(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def system_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--system", help=f"builtin system: {', '.join(BUILTIN_NAMES)} or weylN")
        g.add_argument("--presentation", help="presentation file")

    p = sub.add_parser("nf", help="normal form of an expression")
    system_args(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--decompose", action="store_true", help="also print the W' or Toeplitz decomposition")
    p.add_argument("--pretty", action="store_true", help="use display names (v* for vstar)")
    p.add_argument("--output")
    _common(p, suppress=True)
    p.set_defaults(fn=cmd_nf)

    p = sub.add_parser("verify", help="check lhs == rhs")
    system_args(p)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--output")
    _common(p, suppress=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("suite", help="run the builtin identity suite or a CHECK file")
    p.add_argument("--suite", required=True, help="'builtin' or a path to a CHECK file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20, help="trials for the seeded checks")
    p.add_argument("--verbose", action="store_true", help="list passing checks in text output")
    p.add_argument("--output")
    _common(p, suppress=True)
    p.set_defaults(fn=cmd_suite)

    p = sub.add_parser("seminorm", help="evaluate or fuzz a seminorm")
    p.add_argument("--kind", choices=("P_N", "Q_N", "BETA_PHI", "ALPHA_PSI"))
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--phi", default="PHI0", choices=("PHI0", "PHI_PRIME", "PSI", "ONE"))
    p.add_argument("--displayed", action="store_true", help="Q_N with the |1+k|^n weight")
    p.add_argument("--expr")
    p.add_argument("--fuzz", action="store_true", help="random submultiplicativity sweep")
    p.add_argument("--witness", action="store_true", help="search basis pairs of I for a violation")
    p.add_argument("--mixed", action="store_true", help="the two mixed inequalities on I and s(W)")
    p.add_argument("--tensor-bound", action="store_true", help="alpha <= HAT(2 beta) sweep on tensors")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-poly-degree", type=int, default=4)
    p.add_argument("--max-kl", type=int, default=4)
    p.add_argument("--max-entry", type=int, default=5)
    p.add_argument("--output")
    _common(p, suppress=True)
    p.set_defaults(fn=cmd_seminorm)

    from .homotopy import FAMILY_NAMES
    p = sub.add_parser("family", help="print a homomorphism family and check its relations")
    p.add_argument("--name", required=True, choices=FAMILY_NAMES)
    p.add_argument("--at", choices=tuple(_ANGLES), default="t", help="symbolic t or an endpoint")
    p.add_argument("--output")
    _common(p, suppress=True)
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("report", help="validate a JSON suite report against the schema")
    p.add_argument("--input")
    p.add_argument("--schema", action="store_true", help="print the report schema")
    p.add_argument("--output")
    _common(p, suppress=True)
    p.set_defaults(fn=cmd_report)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, UnknownGenerator) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
