"""Finer classification of the unitary part of a presented row-isometry.

Within the permutative class the unitary part decomposes along the
directed cycles of the base graph.  Each cycle generates one component:
for one generator the component is a finite permutation unitary
(singular, pure point spectrum); for two or more generators every
cycle node has labels branching off the cycle, so the component is of
dilation type.  Absolutely continuous components do not occur here;
the result record keeps the slot anyway so reports always show all
four summands.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import ContractViolation, NotCommuting, ValidationError
from .presentation import Elem, Node, Presentation, apply
from .presentation import _require_canonical
from .pair import (PairElem, PairPresentation, check_theta_commute, t_apply,
                   t_pred)
from .wold import SubspaceDesc, _on_cycle
from .words import Theta


class UnitaryKind(str, Enum):
    SINGULAR = "singular"
    DILATION_TYPE = "dilation-type"


@dataclass(frozen=True)
class UnitaryComponent:
    """One cycle of the base graph together with what it generates.

    ``cycle`` lists (node, label) pairs tracing the directed cycle;
    ``V`` is the finite span of the cycle nodes themselves and ``span``
    the forward closure of V, i.e. the whole component.
    """

    cycle: tuple[tuple[Node, int], ...]
    span: SubspaceDesc
    kind: UnitaryKind
    V: SubspaceDesc


@dataclass(frozen=True)
class LebesgueResult:
    """All four summands of the refined decomposition of the unitary part.

    ``PH`` is the support of the structure projection: the singular
    part plus, for each dilation-type component, the finite slice V the
    component is dilated from.
    """

    components: tuple[UnitaryComponent, ...]
    H_sing: SubspaceDesc
    H_dil: SubspaceDesc
    H_abs: SubspaceDesc
    PH: SubspaceDesc


def _cycle_from(p: Presentation, b: Node) -> tuple[tuple[Node, int], ...]:
    # backward chain b <- n1 <- n2 ... closes at b; re-read it forward
    backward = []
    cur = b
    while True:
        src, label = p.in_edge[cur]
        backward.append((src, label, cur))
        cur = src
        if cur == b:
            break
    cycle = [(src, label) for src, label, _ in reversed(backward)]
    return tuple(cycle)


def classify_unitary(p: Presentation) -> LebesgueResult:
    """Split the unitary part into its cycle components and summands."""
    p.require_valid()
    components = []
    visited: set[Node] = set()
    kind = (UnitaryKind.SINGULAR if p.m == 1 else UnitaryKind.DILATION_TYPE)
    for b in p.base:
        if b in visited or not _on_cycle(p, b):
            continue
        cycle = _cycle_from(p, b)
        nodes = [node for node, _ in cycle]
        visited.update(nodes)
        seeds = tuple(Elem((), node) for node in nodes)
        components.append(UnitaryComponent(
            cycle=cycle,
            span=SubspaceDesc(seeds, "forward-closure", p),
            kind=kind,
            V=SubspaceDesc(seeds, "explicit-finite", p),
        ))
    sing_seeds = tuple(s for c in components if c.kind is UnitaryKind.SINGULAR
                       for s in c.V.seeds)
    dil_seeds = tuple(s for c in components
                      if c.kind is UnitaryKind.DILATION_TYPE
                      for s in c.V.seeds)
    ph_seeds = tuple(s for c in components for s in c.V.seeds)
    return LebesgueResult(
        components=tuple(components),
        H_sing=SubspaceDesc(sing_seeds, "explicit-finite", p),
        H_dil=SubspaceDesc(dil_seeds, "forward-closure", p),
        H_abs=SubspaceDesc((), "explicit-finite", p),
        PH=SubspaceDesc(ph_seeds, "explicit-finite", p),
    )


def sing_membership_test(p: Presentation, x: Elem, depth: int) -> bool:
    """Does the whole forward orbit of ``x`` stay inside PH?

    That is the executable criterion for membership in the singular
    part, for ``x`` already inside PH.  The exact answer is the kind of
    the component ``x`` sits on; the bounded orbits check up to
    ``depth`` cross-validates it, and the two must agree whenever
    ``depth >= |base| + 1`` (a dilation-type component escapes PH
    within one application).
    """
    p.require_valid()
    _require_canonical(p, x)
    if depth < 0:
        raise ValidationError("depth must be nonnegative")
    result = classify_unitary(p)
    if not result.PH.contains(x):
        raise ValidationError(f"{x!r} lies outside the structure support")
    exact = result.H_sing.contains(x)
    ph = set(result.PH.seeds)
    layer = {x}
    bounded = True
    for _ in range(depth):
        layer = {apply(p, i, y) for y in layer for i in range(1, p.m + 1)}
        if not layer <= ph:
            bounded = False
            break
    if depth >= len(p.base) + 1 and bounded != exact:
        raise ContractViolation(
            f"bounded orbit check at depth {depth} disagrees with the "
            f"component classification of {x!r}")
    return exact


def check_commutant_reduces_sing(p: Presentation, N: Presentation) -> bool:
    """Does a commuting permutative isometry reduce the singular part?

    ``N`` is an overlay: a one-label presentation on the same base
    whose edge map is total, i.e. a permutation of the basis of the
    same space.  A partial overlay would spawn fresh basis vectors and
    map the space into a strictly larger one, so it is not an operator
    here at all and is refused.  Commutation with every generator is
    verified next (on the base and one fresh layer, the region where
    it can fail); a non-commuting overlay is refused too.  Then N and
    its adjoint are applied to the singular seeds directly.  A False
    return contradicts the structure theory and fails the property
    suite.
    """
    p.require_valid()
    N.require_valid()
    if N.m != 1:
        raise ValidationError(
            f"overlay must have exactly one label, got {N.m}")
    if N.base != p.base:
        raise ValidationError("overlay must share the presentation's base")
    for b in N.base:
        if (b, 1) not in N.edges:
            raise ValidationError(
                f"overlay must act on every base node; {b!r} has no edge")
    pp = PairPresentation(Theta.identity(p.m, 1), p.base, p.edges, N.edges)
    report = check_theta_commute(pp)
    if not report.ok:
        f = report.failures[0]
        raise NotCommuting(
            f"overlay does not commute with the family: at {f.element!r} "
            f"label {f.i}, the two orders give {f.lhs!r} and {f.rhs!r}")
    sing = {PairElem((), (), e.node)
            for e in classify_unitary(p).H_sing.seeds}
    for xhat in sing:
        if t_apply(pp, 1, xhat) not in sing:
            return False
        back = t_pred(pp, xhat)
        if back is not None and back[1] not in sing:
            return False
    return True
