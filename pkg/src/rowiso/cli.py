"""Command-line front end: strict JSON in, deterministic reports out.

Input documents carry exactly the keys m, base, s_edges and optionally
n, theta, t_edges (the last three together describe a commuting pair).
Unknown keys are rejected outright; silent typos have ruined enough
experiments.  Labels are 1-based everywhere, matching the library.

Exit codes: 0 the property holds / success, 1 the property fails (not
commuting, no decomposition, oracle violation), 2 invalid input, 3
resource budget exceeded.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from dataclasses import dataclass, fields, is_dataclass
from typing import Optional

from .errors import ContractViolation, ResourceExceeded, ValidationError
from .lebesgue import classify_unitary
from .oracle import (PREDICATES, SearchSpace, all_thetas, materialize,
                     search, verify_relations)
from .pair import (PairElem, PairPresentation, check_doubly_commute,
                   check_theta_commute, validate_pair)
from .presentation import Elem, Presentation, validate
from .slocinski import (check_hypotheses, s_shift_multiplicity,
                        slocinski, t_shift_multiplicity)
from .wold import SubspaceDesc, is_row_unitary, wold
from .words import Theta

_DOC_KEYS = {"m", "n", "theta", "base", "s_edges", "t_edges"}


@dataclass(frozen=True)
class InputDocument:
    m: int
    base: tuple
    s_edges: tuple
    n: Optional[int] = None
    theta: Optional[Theta] = None
    t_edges: Optional[tuple] = None

    @property
    def is_pair(self) -> bool:
        return self.n is not None

    def build(self):
        if self.is_pair:
            return PairPresentation(
                self.theta, self.base,
                _edge_dict(self.s_edges), _edge_dict(self.t_edges or ()))
        return Presentation(self.m, self.base, _edge_dict(self.s_edges))


def _edge_dict(rows) -> dict:
    out = {}
    for src, lab, dst in rows:
        key = (src, lab)
        if key in out:
            raise ValidationError(f"edge ({src}, {lab}) declared twice")
        out[key] = dst
    return out


def _edge_rows(rows, name: str) -> tuple:
    if not isinstance(rows, list):
        raise ValidationError(f"{name} must be a list of [node, label, node]")
    clean = []
    for row in rows:
        if (not isinstance(row, list) or len(row) != 3
                or not isinstance(row[1], int)):
            raise ValidationError(
                f"{name} rows must be [node, label, node], got {row!r}")
        clean.append((row[0], row[1], row[2]))
    return tuple(clean)


def parse(text: str) -> InputDocument:
    """Parse a strict JSON document into an InputDocument.

    Malformed JSON reports line and column; schema violations name the
    offending key.  Semantic checks (edge targets, label ranges) are
    deferred to the validate machinery.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from None
    if not isinstance(raw, dict):
        raise ValidationError("document must be a JSON object")
    unknown = set(raw) - _DOC_KEYS
    if unknown:
        raise ValidationError(f"unknown keys: {sorted(unknown)}")
    for key in ("m", "base", "s_edges"):
        if key not in raw:
            raise ValidationError(f"missing required key {key!r}")
    if not isinstance(raw["m"], int):
        raise ValidationError("m must be an integer")
    if not isinstance(raw["base"], list):
        raise ValidationError("base must be a list of node names")
    n = raw.get("n")
    if n is not None and not isinstance(n, int):
        raise ValidationError("n must be an integer")
    if (n is None) != ("theta" not in raw):
        raise ValidationError("theta is required exactly when n is present")
    if n is None and "t_edges" in raw:
        raise ValidationError("t_edges requires n")
    theta = None
    if n is not None:
        rows = raw["theta"]
        if (not isinstance(rows, list)
                or any(not isinstance(r, list) or len(r) != 4 for r in rows)):
            raise ValidationError("theta must be a list of quadruples")
        theta = Theta.from_quadruples(raw["m"], n,
                                      [tuple(r) for r in rows])
    if n is None:
        t_edges = None
    elif "t_edges" in raw:
        t_edges = _edge_rows(raw["t_edges"], "t_edges")
    else:
        t_edges = ()
    return InputDocument(
        m=raw["m"],
        base=tuple(raw["base"]),
        s_edges=_edge_rows(raw["s_edges"], "s_edges"),
        n=n,
        theta=theta,
        t_edges=t_edges,
    )


# ---------------------------------------------------------------- rendering

def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (Elem, PairElem)):
        return repr(obj)
    if isinstance(obj, Theta):
        return [list(q) for q in obj.to_quadruples()]
    if isinstance(obj, SubspaceDesc):
        return {"mode": obj.mode, "seeds": [_jsonable(s) for s in obj.seeds]}
    if is_dataclass(obj) and not isinstance(obj, type):
        out = {}
        for f in fields(obj):
            if f.name == "presentation":
                continue
            out[f.name] = _jsonable(getattr(obj, f.name))
        return out
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=repr)
        return [_jsonable(v) for v in items]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(),
                                                        key=lambda kv:
                                                        str(kv[0]))}
    return repr(obj)


def render(payload: dict) -> str:
    """Render a report dict as stable line-oriented text."""
    lines = []
    for key, value in payload.items():
        if isinstance(value, list):
            if not value:
                lines.append(f"{key}: (none)")
            else:
                lines.append(f"{key}:")
                for item in value:
                    lines.append(f"  - {_flat(item)}")
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            for sub, val in value.items():
                lines.append(f"  {sub}: {_flat(val)}")
        else:
            lines.append(f"{key}: {_flat(value)}")
    return "\n".join(lines) + "\n"


def _flat(value) -> str:
    if isinstance(value, dict):
        inner = ", ".join(f"{k}={_flat(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_flat(v) for v in value) + "]"
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def export_dot(doc: InputDocument) -> str:
    """Graphviz rendering: solid s-edges, dashed t-edges, stable order."""
    lines = ["digraph presentation {"]
    for node in doc.base:
        lines.append(f'  "{node}";')
    for src, lab, dst in sorted(doc.s_edges):
        lines.append(f'  "{src}" -> "{dst}" [style=solid, label="s {lab}"];')
    for src, lab, dst in sorted(doc.t_edges or ()):
        lines.append(f'  "{src}" -> "{dst}" [style=dashed, label="t {lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------- subcommands

def _need_pair(built) -> PairPresentation:
    if not isinstance(built, PairPresentation):
        raise ValidationError("this subcommand needs a pair document "
                              "(keys n, theta)")
    return built


def _need_single(built) -> Presentation:
    if isinstance(built, PairPresentation):
        raise ValidationError("this subcommand needs a single-family "
                              "document (no n/theta keys)")
    return built


def _cmd_validate(doc: InputDocument, args) -> tuple:
    built = doc.build()
    if isinstance(built, PairPresentation):
        report = validate_pair(built)
    else:
        report = validate(built)
    payload = {"valid": report.ok,
               "violations": [_jsonable(v) for v in report.violations]}
    return (0 if report.ok else 1), payload


def _cmd_wold(doc: InputDocument, args) -> tuple:
    p = _need_single(doc.build())
    p.require_valid()
    res = wold(p)
    payload = {
        "unitary_part": _jsonable(res.unitary_part),
        "shift_part": _jsonable(res.shift_part),
        "wandering": [_jsonable(x) for x in res.wandering],
        "multiplicity": res.multiplicity,
        "row_unitary": is_row_unitary(p),
    }
    return 0, payload


def _cmd_classify(doc: InputDocument, args) -> tuple:
    p = _need_single(doc.build())
    p.require_valid()
    res = classify_unitary(p)
    payload = {
        "components": [
            {"cycle": [[node, lab] for node, lab in comp.cycle],
             "kind": comp.kind.value,
             "span": _jsonable(comp.span),
             "V": _jsonable(comp.V)}
            for comp in res.components
        ],
        "H_sing": _jsonable(res.H_sing),
        "H_dil": _jsonable(res.H_dil),
        "H_abs": _jsonable(res.H_abs),
        "PH": _jsonable(res.PH),
    }
    return 0, payload


def _cmd_check_commute(doc: InputDocument, args) -> tuple:
    pp = _need_pair(doc.build())
    pp.require_valid()
    report = check_theta_commute(pp)
    payload = {"commuting": report.ok,
               "failures": [_jsonable(f) for f in report.failures]}
    return (0 if report.ok else 1), payload


def _cmd_check_doubly(doc: InputDocument, args) -> tuple:
    pp = _need_pair(doc.build())
    pp.require_valid()
    report = check_doubly_commute(pp)
    payload = {"doubly_commuting": report.ok,
               "failures": [_jsonable(f) for f in report.failures]}
    return (0 if report.ok else 1), payload


def _cmd_slocinski(doc: InputDocument, args) -> tuple:
    pp = _need_pair(doc.build())
    pp.require_valid()
    res = slocinski(pp, order=args.order)
    hyp = check_hypotheses(pp)
    payload = {
        "exists": res.exists,
        "H_uu": _jsonable(res.H_uu),
        "H_us": _jsonable(res.H_us),
        "H_su": _jsonable(res.H_su),
        "H_ss": _jsonable(res.H_ss),
        "failure_witness": _jsonable(res.failure_witness),
        "hypotheses": _jsonable(hyp),
        "s_shift_multiplicity": _jsonable(
            s_shift_multiplicity(pp)),
        "t_shift_multiplicity": _jsonable(
            t_shift_multiplicity(pp)),
    }
    return (0 if res.exists else 1), payload


def _cmd_oracle(doc: InputDocument, args) -> tuple:
    built = doc.build()
    built.require_valid()
    depth = args.depth if args.depth else max(4, len(built.base) + 2)
    model = materialize(built, depth)
    report = verify_relations(model)
    payload = {
        "depth": depth,
        "basis_size": len(model.basis),
        "ok": report.ok,
        "violations": list(report.rows),
    }
    return (0 if report.ok else 1), payload


def _cmd_search(args) -> tuple:
    thetas = (all_thetas(args.m, args.n) if args.theta_all
              else (Theta.identity(args.m, args.n),))
    space = SearchSpace(args.max_base, args.m, args.n, thetas)
    hits = search(space, args.property)
    payload = {
        "property": args.property,
        "candidates": len(hits),
        "hits": [_jsonable(pp.to_dict()) for pp in hits],
    }
    return 0, payload


def _cmd_export_dot(doc: InputDocument, args) -> tuple:
    return 0, {"dot": export_dot(doc)}


def _read_input(args) -> str:
    if args.file == "-":
        return sys.stdin.read()
    with open(args.file, "r", encoding="utf-8") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="rowiso",
        description="permutative row-isometries: decompositions, "
                    "pair criteria, matrix verification")
    subs = top.add_subparsers(dest="command", required=True)

    def file_sub(name: str, help_text: str):
        sub = subs.add_parser(name, help=help_text)
        sub.add_argument("file", help="input document path, or - for stdin")
        sub.add_argument("--json", action="store_true",
                         help="emit machine-readable JSON")
        return sub

    file_sub("validate", "structural validity of a document")
    file_sub("wold", "unitary/shift split of a single family")
    file_sub("classify", "cycle components and spectral kind")
    file_sub("check-commute", "twisted commutation of a pair")
    file_sub("check-doubly", "doubly-commuting displays of a pair")
    sub = file_sub("slocinski", "four-fold decomposition of a pair")
    sub.add_argument("--order", choices=("st", "ts"), default="st",
                     help="which family's split is taken first")
    sub = file_sub("oracle", "matrix verification on a truncation")
    sub.add_argument("--depth", type=int, default=0,
                     help="truncation depth (default max(4, |base|+2))")
    sub = subs.add_parser("search", help="exhaustive sweep for a property")
    sub.add_argument("--max-base", type=int, required=True)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--theta-all", action="store_true",
                     help="sweep every bijective twist, not just identity")
    sub.add_argument("--property", required=True,
                     choices=sorted(PREDICATES))
    sub.add_argument("--json", action="store_true")
    file_sub("export-dot", "Graphviz rendering of the edge graphs")
    return top


_HANDLERS = {
    "validate": _cmd_validate,
    "wold": _cmd_wold,
    "classify": _cmd_classify,
    "check-commute": _cmd_check_commute,
    "check-doubly": _cmd_check_doubly,
    "slocinski": _cmd_slocinski,
    "oracle": _cmd_oracle,
    "export-dot": _cmd_export_dot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "search":
            code, payload = _cmd_search(args)
        else:
            doc = parse(_read_input(args))
            code, payload = _HANDLERS[args.command](doc, args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"property fails: {exc}", file=sys.stderr)
        return 1
    except ResourceExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "export-dot" and not args.json:
        sys.stdout.write(payload["dot"])
        return code
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        sys.stdout.write(render(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
