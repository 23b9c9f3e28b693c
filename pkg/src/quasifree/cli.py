"""Command-line front end.

Every subcommand writes exactly one JSON document to stdout; diagnostics go
to stderr.  Exit codes: 64 unparsable input, 65 failed validation, 66 group
too large, 67 hypotheses violated (faithful, equal dimension >= 2).  ``decide`` exits 0 / 1 / 2 for
Conjugate / NotConjugate / Unknown, ``fock-cover`` exits 3 when some
irreducible is missing, ``verify`` exits 1 when the witness fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .chartab import (
    CharacterTable,
    TableDocumentError,
    ValidationFailure,
    compute_table,
    load_table,
    table_to_document,
)
from .cyclo import format_cyclotomic
from .decider import (
    Conjugate,
    DecideConfig,
    InvalidInput,
    NotConjugate,
    decide,
    enumerate_units,
    verify_witness,
)
from .permgrp import DEFAULT_LIMIT, GroupDocumentError, GroupTooLarge, group_from_document
from .repring import (
    KGroups,
    Representation,
    RepresentationDocumentError,
    VirtualCharacter,
    equivariant_k_groups,
    fock_coverage,
    one_minus,
    representation_from_document,
)
from .zlalg import SplitFailure

EX_OK = 0
EX_NOT_CONJUGATE = 1
EX_UNKNOWN = 2
EX_MISSING = 3
EX_PARSE = 64
EX_VALIDATION = 65
EX_TOO_LARGE = 66
EX_HYPOTHESIS = 67


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def _load_json(source: str, what: str) -> Any:
    """Read JSON from a file path, or parse ``source`` itself when it looks inline."""
    text = source
    if not source.lstrip().startswith(("{", "[")):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(EX_PARSE, "io", f"cannot read {what} {source!r}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EX_PARSE, "json", f"{what} is not valid JSON: {exc}") from None


def resolve_table(doc: Any, limit: int = DEFAULT_LIMIT, prime_override=None) -> CharacterTable:
    """Character table from a permutation-group document or a table document."""
    kind = doc.get("type") if isinstance(doc, dict) else None
    try:
        if kind == "character_table":
            return load_table(doc)
        group = group_from_document(doc)
        return compute_table(group, limit=limit, prime_override=prime_override)
    except (GroupDocumentError, TableDocumentError) as exc:
        raise CliError(EX_PARSE, "document", str(exc)) from None
    except GroupTooLarge as exc:
        raise CliError(EX_TOO_LARGE, "group_too_large", str(exc)) from None
    except (ValidationFailure, SplitFailure) as exc:
        raise CliError(EX_VALIDATION, "validation", str(exc)) from None
    except ValueError as exc:
        raise CliError(EX_VALIDATION, "validation", str(exc)) from None


def _rep(doc: Any, table: CharacterTable, path: str, label: str = "") -> Representation:
    try:
        return representation_from_document(doc, table, path)
    except RepresentationDocumentError as exc:
        code = EX_VALIDATION if exc.kind == "validation" else EX_PARSE
        msg = f"{label}: {exc}" if label else str(exc)
        raise CliError(code, "representation", msg) from None


def _values(v: VirtualCharacter) -> list[str]:
    return [format_cyclotomic(x) for x in v.values()]


def _kgroups(g: KGroups) -> dict:
    return {
        "invariant_factors": list(g.invariant_factors),
        "k0": g.describe(),
        "k0_free_rank": g.free_rank,
        "k0_torsion": list(g.torsion),
        "k1_rank": g.k1_rank,
    }


def obstruction_to_dict(ob) -> dict:
    out: dict[str, Any] = {"kind": ob.kind}
    if ob.kind == "VanishingSetMismatch":
        out.update(vanishing1=list(ob.vanishing1), vanishing2=list(ob.vanishing2))
    elif ob.kind == "NormMismatch":
        out.update(class_index=ob.class_index, norm1=ob.norm1, norm2=ob.norm2)
    elif ob.kind == "KTheoryMismatch":
        out.update(groups1=_kgroups(ob.groups1), groups2=_kgroups(ob.groups2))
    elif ob.kind == "ForcedUnitNotVirtual":
        out.update(
            forced_values=[format_cyclotomic(v) for v in ob.values],
            coordinate_index=ob.coordinate_index,
            coordinate=format_cyclotomic(ob.coordinate),
        )
    elif ob.kind == "ForcedUnitNotUnit":
        out.update(coords=list(ob.coords), reason=ob.reason)
        if ob.class_index is not None:
            out["class_index"] = ob.class_index
    elif ob.kind == "NoIntegralSolution":
        out.update(classes=list(ob.classes))
    return out


def verdict_to_dict(verdict) -> dict:
    out: dict[str, Any] = {"verdict": verdict.kind}
    if isinstance(verdict, Conjugate):
        out["witness"] = {
            "coords": list(verdict.witness.coords),
            "inverse": list(verdict.inverse.coords),
            "values": _values(verdict.witness),
            "path": verdict.path,
            "candidates_tested": verdict.candidates_tested,
        }
    elif isinstance(verdict, NotConjugate):
        out["obstruction"] = obstruction_to_dict(verdict.obstruction)
        out["obstructions"] = [obstruction_to_dict(o) for o in verdict.obstructions]
    else:
        out["search"] = {
            "candidates_tested": verdict.candidates_tested,
            "height_bound": verdict.height_bound,
            "lattice_rank": verdict.lattice_rank,
        }
    return out


# -- subcommands -------------------------------------------------------------


def cmd_chartab(args) -> int:
    doc = _load_json(args.group, "group document")
    if not isinstance(doc, dict) or doc.get("type") != "permutation":
        raise CliError(EX_PARSE, "document", "chartab expects a permutation-group document")
    table = resolve_table(doc, args.limit, args.prime_override)
    _emit(table_to_document(table))
    print(f"character table: {table.num_classes} classes, degrees {list(table.degrees)}", file=sys.stderr)
    return EX_OK


def cmd_decide(args) -> int:
    job = _load_json(args.job, "job document")
    if not isinstance(job, dict):
        raise CliError(EX_PARSE, "document", "$: expected an object")
    for key in ("group", "pi1", "pi2"):
        if key not in job:
            raise CliError(EX_PARSE, "document", f"$.{key}: missing")
    table = resolve_table(job["group"], args.group_limit, args.prime_override)
    rep1 = _rep(job["pi1"], table, "$.pi1")
    rep2 = _rep(job["pi2"], table, "$.pi2")
    cfg = job.get("config") or {}
    if not isinstance(cfg, dict) or set(cfg) - {"height_bound", "candidate_limit"}:
        raise CliError(EX_PARSE, "document", "$.config: only height_bound and candidate_limit are allowed")
    cfg = dict(cfg)
    if args.height is not None:
        cfg["height_bound"] = args.height
    if args.limit is not None:
        cfg["candidate_limit"] = args.limit
    try:
        config = DecideConfig(**cfg)
    except (TypeError, ValueError) as exc:
        raise CliError(EX_PARSE, "document", f"$.config: {exc}") from None
    try:
        verdict = decide(table, rep1, rep2, config)
    except InvalidInput as exc:
        raise CliError(EX_HYPOTHESIS, exc.reason, str(exc)) from None
    doc = verdict_to_dict(verdict)
    doc["audit"] = {
        "dimension": rep1.dimension,
        "one_minus_pi1": _values(one_minus(rep1)),
        "one_minus_pi2": _values(one_minus(rep2)),
        "k_groups": {
            "pi1": _kgroups(equivariant_k_groups(rep1)),
            "pi2": _kgroups(equivariant_k_groups(rep2)),
        },
        "config": {"height_bound": config.height_bound, "candidate_limit": config.candidate_limit},
    }
    _emit(doc)
    print(f"verdict: {verdict.kind}", file=sys.stderr)
    return {"Conjugate": EX_OK, "NotConjugate": EX_NOT_CONJUGATE, "Unknown": EX_UNKNOWN}[verdict.kind]


def cmd_fock_cover(args) -> int:
    table = resolve_table(_load_json(args.group, "group document"), args.group_limit, args.prime_override)
    rep = _rep(_load_json(args.rep, "representation"), table, "$")
    if args.kmax is not None and args.kmax < 0:
        raise CliError(EX_PARSE, "argument", "--kmax must be non-negative")
    cov = fock_coverage(rep, args.kmax)
    _emit(
        {
            "first_power": list(cov.first_power),
            "missing": list(cov.missing),
            "kmax": cov.kmax,
            "default_bound": cov.default_bound,
            "faithful": cov.faithful,
            "degrees": list(table.degrees),
        }
    )
    if cov.inconsistent:
        print("internal inconsistency: faithful representation misses an irreducible", file=sys.stderr)
    return EX_MISSING if cov.missing else EX_OK


def cmd_ktheory(args) -> int:
    table = resolve_table(_load_json(args.group, "group document"), args.group_limit, args.prime_override)
    rep = _rep(_load_json(args.rep, "representation"), table, "$")
    groups = equivariant_k_groups(rep)
    doc = _kgroups(groups)
    doc["one_minus_pi"] = _values(one_minus(rep))
    _emit(doc)
    return EX_OK


def cmd_units(args) -> int:
    table = resolve_table(_load_json(args.group, "group document"), args.group_limit, args.prime_override)
    if args.height < 1 or args.limit < 1:
        raise CliError(EX_PARSE, "argument", "--height and --limit must be positive")
    units = enumerate_units(table, args.height, args.limit)
    _emit({"height": args.height, "limit": args.limit, "units": [list(u.coords) for u in units]})
    return EX_OK


def _parse_coords(text: str, k: int) -> tuple[int, ...]:
    text = text.strip()
    try:
        raw = json.loads(text) if text.startswith("[") else [int(x) for x in text.split(",")]
    except ValueError:
        raise CliError(EX_PARSE, "argument", f"cannot parse unit coordinates {text!r}") from None
    if not isinstance(raw, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in raw):
        raise CliError(EX_PARSE, "argument", "unit coordinates must be integers")
    if len(raw) != k:
        raise CliError(EX_VALIDATION, "argument", f"expected {k} unit coordinates, got {len(raw)}")
    return tuple(raw)


def cmd_verify(args) -> int:
    table = resolve_table(_load_json(args.group, "group document"), args.group_limit, args.prime_override)
    rep1 = _rep(_load_json(args.rep1, "representation"), table, "$", "rep1")
    rep2 = _rep(_load_json(args.rep2, "representation"), table, "$", "rep2")
    u = VirtualCharacter(table, _parse_coords(args.unit, table.num_classes))
    ok = verify_witness(u, rep1, rep2)
    _emit({"unit": list(u.coords), "verified": ok})
    return EX_OK if ok else EX_NOT_CONJUGATE


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasifree",
        description="Classify quasi-free finite-group actions on Cuntz algebras via R(G).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, group_arg: bool = True):
        if group_arg:
            p.add_argument("group", help="permutation-group or character-table JSON (path or inline)")
        p.add_argument("--prime-override", type=int, action="append", default=None,
                       help="prime tried before the default Dixon primes (repeatable)")
        p.add_argument("--group-limit", type=int, default=DEFAULT_LIMIT,
                       help="maximum number of group elements to enumerate")

    p = sub.add_parser("chartab", help="compute a character table")
    p.add_argument("group", help="permutation-group JSON")
    p.add_argument("--prime-override", type=int, action="append", default=None)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="maximum group order")
    p.set_defaults(func=cmd_chartab)

    p = sub.add_parser("decide", help="decide conjugacy of two quasi-free actions")
    p.add_argument("job", help="job JSON with group, pi1, pi2 and optional config")
    p.add_argument("--height", type=int, default=None)
    p.add_argument("--limit", type=int, default=None)
    common(p, group_arg=False)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("fock-cover", help="first tensor power containing each irreducible")
    common(p)
    p.add_argument("rep")
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=cmd_fock_cover)

    p = sub.add_parser("ktheory", help="cokernel and kernel of multiplication by 1 - [pi]")
    common(p)
    p.add_argument("rep")
    p.set_defaults(func=cmd_ktheory)

    p = sub.add_parser("units", help="scan R(G) for units of bounded height")
    common(p)
    p.add_argument("--height", type=int, default=1)
    p.add_argument("--limit", type=int, default=200_000)
    p.set_defaults(func=cmd_units)

    p = sub.add_parser("verify", help="check a unit witness")
    common(p)
    p.add_argument("rep1")
    p.add_argument("rep2")
    p.add_argument("unit", help="coordinates as '3,1,-2,-2,1' or a JSON list")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EX_PARSE if exc.code else EX_OK
    try:
        return args.func(args)
    except CliError as exc:
        _emit({"error": {"kind": exc.kind, "message": str(exc), "exit_code": exc.code}})
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
