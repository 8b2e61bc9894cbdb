"""Command-line front end: JSON in, JSON out, deterministic ordering.

Exit codes: 0 success, 1 validation error (machine-readable error
object), 2 broken internal invariant or failed verification, 3 deadline
exhausted (partial-progress report).
"""

from __future__ import annotations

import argparse
import json
import sys

from .equivariant import lambda_poly
from .errors import (
    InternalError,
    RankBoundExceeded,
    TimeoutExceeded,
    UnknownSuite,
    ValidationError,
)
from .fantoric import fan_from_json, fan_to_json, localization_check
from .laurent import poly_from_json, poly_to_json
from .ordinary import kgb_rank, kx_basis_product
from .rootweyl import (
    CartanLabel,
    build_root_system,
    subset_indices,
    weyl_group,
    word_str,
)
from .steinberg import PRODUCT_GATE, TABLE_GATE, steinberg_basis
from .verify import SUITES, Deadline, verify_suites


def _emit(payload, out_path=None):
    text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _root_system(args):
    rs = build_root_system(CartanLabel.parse(args.type))
    weyl_group(rs, max_rank=args.max_rank)
    return rs


def cmd_roots(args, deadline):
    rs = build_root_system(CartanLabel.parse(args.type))
    return {
        "type": str(rs.label),
        "rank": rs.rank,
        "cartan": [list(row) for row in rs.cartan],
        "simple_roots": [list(a) for a in rs.simple_roots],
        "positive_roots": [list(a) for a in rs.positive_roots],
        "positive_root_count": len(rs.positive_roots),
    }


def cmd_weyl(args, deadline):
    rs = _root_system(args)
    grp = weyl_group(rs)
    return {
        "type": str(rs.label),
        "order": grp.order,
        "elements": [
            {
                "w": word_str(w),
                "length": len(w.word),
                "matrix": [list(row) for row in w.matrix],
            }
            for w in grp.elements
        ],
    }


def cmd_csets(args, deadline):
    rs = _root_system(args)
    grp = weyl_group(rs)
    cells = grp.c_sets()
    return {
        "type": str(rs.label),
        "csets": [
            {
                "I": list(subset_indices(mask)),
                "elements": [word_str(w) for w in cells[mask]],
            }
            for mask in sorted(cells)
        ],
    }


def cmd_steinberg(args, deadline):
    rs = _root_system(args)
    basis = steinberg_basis(rs)
    return {
        "type": str(rs.label),
        "basis": [
            {
                "v": word_str(el.v),
                "I": list(subset_indices(el.I)),
                "poly": poly_to_json(el.poly),
            }
            for el in basis.elements
        ],
    }


def cmd_ctable(args, deadline):
    rs = _root_system(args)
    basis = steinberg_basis(rs)
    grp = basis.group
    if grp.order > TABLE_GATE:
        raise RankBoundExceeded(
            f"group order {grp.order} exceeds the table gate {TABLE_GATE}"
        )
    payload = {
        "type": str(rs.label),
        "basis": [
            {"v": word_str(el.v), "I": list(subset_indices(el.I))}
            for el in basis.elements
        ],
        "products": {},
    }
    if deadline is not None:
        deadline.partial = payload
    for v in grp.elements:
        for vp in grp.elements:
            if deadline is not None:
                deadline.poll()
            coords = basis.structure_constants(v, vp)
            payload["products"][f"{word_str(v)}|{word_str(vp)}"] = [
                {"w": word_str(w), "coef": poly_to_json(coords[w])}
                for w in grp.elements
                if w in coords
            ]
    return payload


def _kgb_vector(grp, element):
    return {word_str(w): element.coords.get(w, 0) for w in grp.elements}


def cmd_ktable(args, deadline):
    rs = _root_system(args)
    basis = steinberg_basis(rs)
    grp = basis.group
    if grp.order > TABLE_GATE:
        raise RankBoundExceeded(
            f"group order {grp.order} exceeds the table gate {TABLE_GATE}"
        )
    payload = {
        "type": str(rs.label),
        "kgb_rank": kgb_rank(rs),
        "basis": [word_str(w) for w in grp.elements],
        "products": {},
    }
    if deadline is not None:
        deadline.partial = payload
    for v in grp.elements:
        for vp in grp.elements:
            if deadline is not None:
                deadline.poll()
            prod = kx_basis_product(rs, v, vp)
            payload["products"][f"{word_str(v)}|{word_str(vp)}"] = [
                {"w": word_str(w), "coef": _kgb_vector(grp, c)}
                for w, c in sorted(prod.coords.items(), key=lambda kv: kv[0].key())
            ]
    return payload


def cmd_toric_check(args, deadline):
    rs = _root_system(args)
    if not args.fan:
        raise ValidationError("toric-check requires --fan <path.json>")
    with open(args.fan, encoding="utf-8") as fh:
        fan_obj = json.load(fh)
    fan = fan_from_json(rs, fan_obj)
    payload = {
        "type": str(rs.label),
        "fan": fan_to_json(fan),
        "smooth": True,
        "support_ok": True,
        "localization": None,
    }
    if args.family:
        with open(args.family, encoding="utf-8") as fh:
            fam_obj = json.load(fh)
        family = {
            int(k): poly_from_json(v, rs.rank, 1) for k, v in fam_obj.items()
        }
        payload["localization"] = localization_check(fan, family)
    return payload


def cmd_verify(args, deadline):
    rs = _root_system(args)
    names = [args.suite] if args.suite else None
    if names and names[0] not in SUITES:
        raise UnknownSuite(
            f"unknown suite {names[0]!r}; choose from {sorted(SUITES)}"
        )
    return verify_suites(rs, names, deadline=deadline)


_COMMANDS = {
    "roots": cmd_roots,
    "weyl": cmd_weyl,
    "csets": cmd_csets,
    "steinberg": cmd_steinberg,
    "ctable": cmd_ctable,
    "ktable": cmd_ktable,
    "toric-check": cmd_toric_check,
    "verify": cmd_verify,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="wonderk",
        description=(
            "Exact bases, congruence tests and product tables for the "
            "K-rings of group compactifications."
        ),
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in _COMMANDS:
        p = sub.add_parser(verb)
        p.add_argument("--type", required=True, help="Cartan label, e.g. A2")
        p.add_argument("--out", default=None, help="write JSON to this path")
        p.add_argument("--timeout", type=float, default=None, help="seconds")
        p.add_argument(
            "--max-rank",
            type=int,
            default=4,
            help="enumeration bound on the rank (default 4)",
        )
        if verb == "verify":
            p.add_argument("--suite", default=None, help="suite name; all when omitted")
        if verb == "toric-check":
            p.add_argument("--fan", default=None, help="fan JSON path")
            p.add_argument("--family", default=None, help="family JSON path")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    deadline = Deadline(args.timeout) if args.timeout else None
    handler = _COMMANDS[args.verb]
    try:
        payload = handler(args, deadline)
    except TimeoutExceeded as exc:
        _emit(
            {
                "error": {"code": "TimeoutExceeded", "message": str(exc)},
                "partial": exc.partial,
            },
            args.out,
        )
        return 3
    except ValidationError as exc:
        _emit({"error": {"code": type(exc).__name__, "message": str(exc)}}, args.out)
        return 1
    except InternalError as exc:
        _emit({"error": {"code": type(exc).__name__, "message": str(exc)}}, args.out)
        return 2
    _emit(payload, args.out)
    if args.verb == "verify" and not payload.get("ok", False):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
