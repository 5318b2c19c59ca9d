"""Command line front end: build, certify, density, betti, metric.

Exit codes: 0 success / all selected certificates passed, 1 a certificate
failed, 2 bad input. Every document is canonical JSON without floats.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import certify as cert
from .cohomology import betti_report
from .errors import SolvlatError
from .jsonio import decode_presentation, decode_spec, decode_vectors, dumps, encode_presentation
from .lattice import BuildSpec, build
from .lie import (build_omega, complex_structure, lcb_verify, lck_obstruction, nijenhuis_check,
                  structure_constants)

CHECKS = ("relations", "discreteness", "toroidal", "algebraic", "nijenhuis", "lcb", "lck",
          "betti", "abelianization")

EXIT_OK, EXIT_FAILED, EXIT_BAD_INPUT = 0, 1, 2


class BadInput(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadInput(f"cannot read {path}: {exc}") from exc


def _emit(doc, out: str | None):
    text = dumps(doc)
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diagnostic(exc: Exception) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def digest(doc) -> str:
    return hashlib.sha256(dumps(doc).encode()).hexdigest()


# ----------------------------------------------------------------- build

def _spec_from_args(args) -> BuildSpec:
    if args.spec:
        return decode_spec(_read_json(args.spec))
    if args.d is None or args.beta is None:
        raise BadInput("give a spec file or both --d and --beta")
    return BuildSpec(args.d, args.beta)


def cmd_build(args) -> int:
    try:
        spec = _spec_from_args(args)
        pres = build(spec)
    except (SolvlatError, BadInput) as exc:
        sys.stderr.write(dumps(_diagnostic(exc)))
        return EXIT_BAD_INPUT
    _emit(encode_presentation(pres), args.out)
    return EXIT_OK


# --------------------------------------------------------------- certify

def _parse_checks(text: str | None) -> list[str]:
    if not text or text == "all":
        return list(CHECKS)
    names = [c.strip() for c in text.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad:
        raise BadInput(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
    return names


def _betti_certificate(report: dict) -> cert.Certificate:
    ok = report["b0"] == 1 and report["b1"] == 1 and report["b2"] == 0
    return cert.Certificate("betti", ok, {k: report[k] for k in ("b0", "b1", "b2")})


def run_certificates(pres, checks) -> tuple[list, dict]:
    out, extra = [], {}
    betti = None
    d = pres.d
    alg = None
    for name in checks:
        t0 = time.perf_counter()
        if name == "relations":
            c = cert.check_relations(pres)
        elif name == "discreteness":
            c = cert.discreteness(pres)
        elif name == "toroidal":
            c = cert.toroidal_type(pres)
        elif name == "algebraic":
            c = cert.algebraic_type(pres)
        elif name == "nijenhuis":
            alg = alg or structure_constants(d)
            c = nijenhuis_check(alg, complex_structure(alg, d))
        elif name == "lcb":
            c = lcb_verify(d)["certificate"]
        elif name in ("betti", "abelianization", "lck"):
            if betti is None:
                betti = betti_report(pres)
                extra["betti"] = betti
            if name == "betti":
                c = _betti_certificate(betti)
            elif name == "abelianization":
                ok = betti["h1_rank"] == betti["b1"] == 1
                c = cert.Certificate("abelianization", ok,
                                     {"rank": betti["h1_rank"], "b1": betti["b1"],
                                      "torsion": betti["h1_torsion"]})
            else:
                c = lck_obstruction(d, b2=betti["b2"], b1=betti["b1"])
        extra.setdefault("timing", {})[name] = f"{time.perf_counter() - t0:.3f}s"
        out.append(c)
    return out, extra


def cmd_certify(args) -> int:
    try:
        checks = _parse_checks(args.checks)
        doc = _read_json(args.presentation)
        pres = decode_presentation(doc)
    except (SolvlatError, BadInput) as exc:
        sys.stderr.write(dumps(_diagnostic(exc)))
        return EXIT_BAD_INPUT
    certs, extra = run_certificates(pres, checks)
    passed = all(c.passed for c in certs)
    report = {
        "presentation_digest": digest(doc),
        "d": pres.d,
        "beta": pres.beta,
        "checks": checks,
        "certificates": [c.to_json() for c in certs],
        "passed": passed,
        "timing": extra.get("timing", {}),
    }
    if "betti" in extra:
        report["betti"] = extra["betti"]
    _emit(report, args.out)
    return EXIT_OK if passed else EXIT_FAILED


# --------------------------------------------------------------- density

def cmd_density(args) -> int:
    try:
        vectors, dim, _ = decode_vectors(_read_json(args.generators))
        if dim is None and not vectors:
            dim = 1
        verdict = cert.kronecker_dense(vectors, dim)
    except (SolvlatError, BadInput, ValueError) as exc:
        sys.stderr.write(dumps(_diagnostic(exc)))
        return EXIT_BAD_INPUT
    doc = {"verdict": "dense" if verdict.dense else "not dense", **verdict.to_json()}
    _emit(doc, args.out)
    return EXIT_OK


# ----------------------------------------------------------------- betti

def _presentation_from_args(args):
    if args.presentation:
        return decode_presentation(_read_json(args.presentation))
    if args.d is None:
        raise BadInput("give a presentation file or --d")
    return build(BuildSpec(args.d, args.beta or 3))


def cmd_betti(args) -> int:
    try:
        pres = _presentation_from_args(args)
    except (SolvlatError, BadInput) as exc:
        sys.stderr.write(dumps(_diagnostic(exc)))
        return EXIT_BAD_INPUT
    _emit(betti_report(pres), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- metric

def metric_report(d: int) -> tuple[dict, bool]:
    alg = structure_constants(d)
    J = complex_structure(alg, d)
    nij = nijenhuis_check(alg, J)
    lcb = lcb_verify(d)
    lck = lck_obstruction(d)
    report = {
        "d": d,
        "omega": alg.form_to_json(build_omega(alg, d)),
        "theta_stated": alg.form_to_json(lcb["theta_expected"]),
        "theta_solved": alg.form_to_json(lcb["theta"]) if lcb["theta"] is not None else None,
        "certificates": [nij.to_json(), lcb["certificate"].to_json(), lck.to_json()],
    }
    ok = nij.passed and lcb["certificate"].passed and lck.passed
    report["passed"] = ok
    return report, ok


def cmd_metric(args) -> int:
    d = args.d
    if d is None and args.presentation:
        try:
            d = decode_presentation(_read_json(args.presentation)).d
        except (SolvlatError, BadInput) as exc:
            sys.stderr.write(dumps(_diagnostic(exc)))
            return EXIT_BAD_INPUT
    if d is None or d < 1 or d % 2 == 0:
        sys.stderr.write(dumps({"error": "InvalidSpec", "message": "--d must be odd and positive"}))
        return EXIT_BAD_INPUT
    report, ok = metric_report(d)
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_FAILED


# ------------------------------------------------------------------ main

def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="solvlat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a lattice presentation from a spec")
    p.add_argument("spec", nargs="?", help="build spec JSON (or use --d/--beta)")
    p.add_argument("--d", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("certify", help="run certificates on a presentation")
    p.add_argument("presentation")
    p.add_argument("--checks", help="comma separated subset of: " + ",".join(CHECKS))
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("density", help="decide density of a finitely generated subgroup of R^r")
    p.add_argument("generators")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("betti", help="Betti numbers b0, b1, b2 and fiber dimensions")
    p.add_argument("presentation", nargs="?")
    p.add_argument("--d", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("metric", help="Nijenhuis, LCB and LCK certificates for dimension d")
    p.add_argument("presentation", nargs="?")
    p.add_argument("--d", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_metric)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
