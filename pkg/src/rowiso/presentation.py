"""Finite presentations of a single permutative row-isometry.

A presentation is a finite labelled graph: a list of base nodes and a
partial edge map (node, label) -> node.  It generates an action of m
isometries on the orthonormal basis named by :class:`Elem` values: the
basis vector ``S_u e_b`` for a free prefix ``u`` and base node ``b``.
Each generator maps basis vectors to basis vectors; the graph encodes
exactly which products collapse back into the base.

The in-degree condition (at most one incoming edge per node, across all
labels) is what makes the family a row-isometry: each generator acts
injectively on the basis and distinct generators have disjoint images.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterable, Optional

from .errors import ValidationError
from .words import Word

# the basis walker below is named enumerate; keep the builtin reachable
_builtin_enumerate = enumerate

Node = str


@dataclass(frozen=True)
class Elem:
    """Canonical name ``S_prefix e_node`` of a basis vector.

    Canonical means fully absorbed: the innermost prefix letter has no
    edge at the node, so no shorter name denotes the same vector.
    """

    prefix: Word
    node: Node

    def __repr__(self) -> str:
        if not self.prefix:
            return f"<{self.node}>"
        letters = " ".join(f"s{i}" for i in self.prefix)
        return f"<{letters}|{self.node}>"

    @property
    def depth(self) -> int:
        return len(self.prefix)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural validation; violations are data, not errors."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __repr__(self) -> str:
        if self.ok:
            return "ValidationReport(ok)"
        body = "; ".join(self.violations)
        return f"ValidationReport({body})"


class Presentation:
    """Immutable single-family presentation data.

    Fields mirror the input document: ``m`` generators, ordered ``base``
    nodes, and ``edges`` mapping (node, label) to a node.  Semantic
    checks live in :func:`validate`; operations that require a valid
    presentation call :meth:`require_valid` and refuse with the report's
    first violation otherwise.
    """

    __slots__ = ("m", "base", "edges", "node_index", "in_edge", "_key",
                 "_report")

    def __init__(self, m: int, base: Iterable[Node], edges: dict):
        if not isinstance(m, int) or isinstance(m, bool):
            raise ValidationError(f"label count {m!r} is not an integer")
        self.m = m
        self.base = tuple(base)
        normalized = {}
        for key, target in dict(edges).items():
            node, label = key
            if not isinstance(label, int) or isinstance(label, bool):
                raise ValidationError(f"edge label {label!r} is not an integer")
            normalized[(node, label)] = target
        self.edges = normalized
        self.node_index = {b: k for k, b in _builtin_enumerate(self.base)}
        in_edge: dict[Node, tuple[Node, int]] = {}
        for (src, label), dst in sorted(normalized.items(),
                                        key=lambda kv: str(kv)):
            in_edge.setdefault(dst, (src, label))
        self.in_edge = in_edge
        self._key = (m, self.base, tuple(sorted(normalized.items())))
        self._report: Optional[ValidationReport] = None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Presentation) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return (f"Presentation(m={self.m}, base={list(self.base)!r}, "
                f"edges={self.edges!r})")

    def require_valid(self) -> None:
        report = validate(self)
        if not report.ok:
            raise ValidationError(report.violations[0])

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "base": list(self.base),
            "s_edges": [[src, label, dst]
                        for (src, label), dst in sorted(self.edges.items())],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Presentation":
        edges = {}
        for row in doc.get("s_edges", []):
            if len(row) != 3:
                raise ValidationError(f"edge row {row!r} is not a triple")
            src, label, dst = row
            if (src, label) in edges:
                raise ValidationError(
                    f"duplicate edge for node {src!r} label {label}")
            edges[(src, label)] = dst
        return cls(doc["m"], doc["base"], edges)


def free_presentation(m: int, base: Iterable[Node] = ("b",)) -> Presentation:
    """The edge-free presentation: the left-regular action on each node."""
    return Presentation(m, base, {})


def validate(p: Presentation) -> ValidationReport:
    """Check the row-isometry invariants; returns all violations found.

    A valid presentation has every edge between declared nodes, labels
    in ``1..m``, at most one edge per (node, label), and global
    in-degree at most one (injectivity plus disjoint ranges).
    """
    if p._report is not None:
        return p._report
    violations = []
    if p.m < 1:
        violations.append(f"label count must be at least 1, got {p.m}")
    seen = set()
    for b in p.base:
        if b in seen:
            violations.append(f"base node {b!r} declared twice")
        seen.add(b)
    in_count: dict[Node, list] = {}
    for (src, label), dst in sorted(p.edges.items(), key=lambda kv: str(kv)):
        if src not in p.node_index:
            violations.append(f"edge source {src!r} is not a base node")
        if dst not in p.node_index:
            violations.append(f"edge target {dst!r} is not a base node")
        if not 1 <= label <= max(p.m, 1):
            violations.append(f"edge label {label} outside 1..{p.m}")
        in_count.setdefault(dst, []).append((src, label))
    for dst, sources in sorted(in_count.items(), key=lambda kv: str(kv)):
        if len(sources) > 1:
            violations.append(
                f"node {dst!r} has in-degree {len(sources)}: "
                + ", ".join(f"({s!r},{l})" for s, l in sources))
    report = ValidationReport(tuple(violations))
    p._report = report
    return report


def _require_canonical(p: Presentation, x: Elem) -> None:
    if x.node not in p.node_index:
        raise ValidationError(f"element node {x.node!r} is not a base node")
    for letter in x.prefix:
        if not 1 <= letter <= p.m:
            raise ValidationError(
                f"element prefix letter {letter} outside 1..{p.m}")
    if x.prefix and (x.node, x.prefix[-1]) in p.edges:
        raise ValidationError(f"element {x!r} is not canonical: "
                              f"letter {x.prefix[-1]} absorbs at {x.node!r}")


def apply(p: Presentation, i: int, x: Elem) -> Elem:
    """The generator image ``S_i e_x`` as a canonical element."""
    p.require_valid()
    if not 1 <= i <= p.m:
        raise ValidationError(f"label {i} outside 1..{p.m}")
    _require_canonical(p, x)
    if not x.prefix and (x.node, i) in p.edges:
        return Elem((), p.edges[(x.node, i)])
    # prepending outermost keeps the innermost letter untouched,
    # so the result is canonical too
    return Elem((i,) + x.prefix, x.node)


def pred(p: Presentation, x: Elem) -> Optional[tuple[int, Elem]]:
    """The unique (label, element) with ``apply(label, element) == x``.

    Returns ``None`` exactly when ``x`` lies in no generator's range,
    i.e. when ``x`` is a wandering vector: empty prefix and in-degree
    zero.
    """
    p.require_valid()
    _require_canonical(p, x)
    if x.prefix:
        return x.prefix[0], Elem(x.prefix[1:], x.node)
    hit = p.in_edge.get(x.node)
    if hit is None:
        return None
    src, label = hit
    return label, Elem((), src)


def enumerate(p: Presentation, depth: int) -> list[Elem]:
    """All canonical elements with prefix length at most ``depth``.

    Ordered by (prefix length, prefix lexicographically, declaration
    order of the node); the listing at depth d is a prefix of the
    listing at depth d+1.
    """
    p.require_valid()
    if depth < 0:
        raise ValidationError("depth must be nonnegative")
    out: list[Elem] = []
    for length in range(depth + 1):
        if length == 0:
            out.extend(Elem((), b) for b in p.base)
            continue
        for prefix in _cartesian(range(1, p.m + 1), repeat=length):
            for b in p.base:
                if (b, prefix[-1]) not in p.edges:
                    out.append(Elem(prefix, b))
    return out
