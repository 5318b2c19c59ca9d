"""Canonical JSON encodings. No floats ever appear in a document.

Rationals are strings ``"p/q"`` (``"p"`` when q = 1); a QuadNum is
``{"r": "p/q", "s": "p/q"}`` with the field tag D stored once per document.
"""
from __future__ import annotations

import json
from dataclasses import is_dataclass

from gmpy2 import mpq

from .errors import ParseError
from .group import GroupElem
from .lattice import BuildSpec, LatticePresentation
from .qfield import QuadNum, Rational, rational


def encode(obj):
    """Recursively convert package values into JSON-ready structures."""
    if type(obj) is QuadNum:
        return obj.to_json()
    if type(obj) is Rational:
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in documents")
    if isinstance(obj, GroupElem):
        return encode_elem(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if is_dataclass(obj):
        return {k: encode(v) for k, v in vars(obj).items()}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(encode(doc), sort_keys=True, indent=2) + "\n"


def _q(x):
    """Scalar as a QuadNum when irrational, else as a rational string."""
    if type(x) is QuadNum:
        return x.to_json()
    return {"r": str(mpq(x)), "s": "0"}


def encode_elem(x: GroupElem) -> dict:
    return {
        "alpha": _q(x.alpha),
        "a": [_q(v) for v in x.a],
        "b": [_q(v) for v in x.b],
        "C": [[_q(v) for v in row] for row in x.C],
    }


def decode_elem(obj, D: int) -> GroupElem:
    try:
        q = lambda v: QuadNum.from_json(v, D)  # noqa: E731
        return GroupElem(q(obj["alpha"]), tuple(q(v) for v in obj["a"]),
                         tuple(q(v) for v in obj["b"]),
                         tuple(tuple(q(v) for v in row) for row in obj["C"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed group element: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc


def encode_presentation(p: LatticePresentation) -> dict:
    return {
        "d": p.d,
        "beta": p.beta,
        "D": p.D,
        "alpha": p.alpha.to_json(),
        "N": p.N,
        "P": p.P,
        "g0": encode_elem(p.g0),
        "g": [encode_elem(x) for x in p.g],
        "h": [encode_elem(x) for x in p.h],
        "index_of_lambdaZ_in_D": p.index_of_lambdaZ_in_D,
        "build_report": encode(p.report),
    }


def decode_presentation(obj) -> LatticePresentation:
    try:
        D = int(obj["D"])
        d = int(obj["d"])
        pres = LatticePresentation(
            d=d,
            beta=int(obj["beta"]),
            alpha=QuadNum.from_json(obj["alpha"], D),
            g0=decode_elem(obj["g0"], D),
            g=tuple(decode_elem(x, D) for x in obj["g"]),
            h=tuple(decode_elem(x, D) for x in obj["h"]),
            N=[[_int(x) for x in row] for row in obj["N"]],
            P=[[_int(x) for x in row] for row in obj["P"]],
            index_of_lambdaZ_in_D=int(obj["index_of_lambdaZ_in_D"]),
            report=obj.get("build_report", {}),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed presentation: {exc!r}") from exc
    if len(pres.g) != 2 * d or len(pres.h) != d * d:
        raise ParseError("presentation needs 2d g's and d^2 h's")
    if any(x.d != d for x in pres.generators()):
        raise ParseError("generator of the wrong dimension")
    if len(pres.N) != 2 * d or len(pres.P) != 2 * d:
        raise ParseError("N and P must have 2d rows")
    return pres


def _int(x) -> int:
    q = rational(x)
    if q.denominator != 1:
        raise ParseError(f"expected integer, got {x!r}")
    return int(q)


def decode_spec(obj) -> BuildSpec:
    if not isinstance(obj, dict):
        raise ParseError("build spec must be a JSON object")
    unknown = set(obj) - {"d", "beta", "N", "K", "L", "P", "D_choice"}
    if unknown:
        raise ParseError(f"unknown spec keys: {sorted(unknown)}")
    if "d" not in obj or "beta" not in obj:
        raise ParseError("spec needs 'd' and 'beta'")
    choice = obj.get("D_choice", "default")
    if isinstance(choice, dict) and "basis" in choice:
        D = obj["beta"] ** 2 - 4
        choice = {"basis": [[[QuadNum.from_json(v, D) for v in row] for row in blk]
                            for blk in choice["basis"]]}
    return BuildSpec(d=obj["d"], beta=obj["beta"], N=obj.get("N"), K=obj.get("K"),
                     L=obj.get("L"), P=obj.get("P"), D_choice=choice)


def encode_spec(spec: BuildSpec) -> dict:
    out = {"d": spec.d, "beta": spec.beta}
    for name in ("N", "K", "L", "P"):
        M = getattr(spec, name)
        if M is not None:
            out[name] = [[str(x) if not isinstance(x, int) else x for x in row] for row in M]
    out["D_choice"] = encode(spec.D_choice)
    return out


def decode_vectors(obj, D: int | None = None):
    """Generator lists for density checks: ``{"D": .., "vectors": [...], "dim": ..}``."""
    dim = None
    if isinstance(obj, dict):
        D = obj.get("D", D)
        dim = obj.get("dim")
        vectors = obj.get("vectors")
    else:
        vectors = obj
    if not isinstance(vectors, list):
        raise ParseError("expected a list of vectors")
    if D is None:
        D = 2  # only used to tag rational entries; irrational entries need D
        if any(isinstance(v, dict) and rational(v.get("s", 0)) for vec in vectors for v in vec):
            raise ParseError("irrational entries need a field tag D")
    out = []
    for vec in vectors:
        if not isinstance(vec, list):
            raise ParseError("each generator must be a list")
        out.append([QuadNum.from_json(v, int(D)) for v in vec])
    if out and len({len(v) for v in out}) != 1:
        raise ParseError("generators of different lengths")
    return out, (int(dim) if dim is not None else None), int(D)
