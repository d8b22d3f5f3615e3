"""Wold decomposition tests.

Besides the fixed examples, the unitary part computed by cycle
reachability is compared against the defining property it is supposed
to capture: a vector lies in the unitary part iff it stays in the
range of every k-fold product, i.e. iff its backward chain survives k
steps for every k up to a pigeonhole bound.
"""

import random

import pytest

from rowiso.errors import ValidationError
from rowiso.presentation import Elem, Presentation, apply, free_presentation, pred
from rowiso.presentation import enumerate as enumerate_basis
from rowiso.wold import Part, SubspaceDesc, is_row_unitary, membership, wold

from test_presentation import random_presentation

FREE2 = free_presentation(2)
LOOP1 = Presentation(1, ("b",), {("b", 1): "b"})
LOOP2 = Presentation(2, ("b",), {("b", 1): "b"})
MIXED = Presentation(2, ("b", "c"), {("b", 1): "b"})


def backward_chain_survives(p, x, steps):
    cur = x
    for _ in range(steps):
        hit = pred(p, cur)
        if hit is None:
            return False
        cur = hit[1]
    return True


# -- wold ---------------------------------------------------------------------


class TestWold:
    def test_free_is_a_pure_shift(self):
        res = wold(FREE2)
        assert res.unitary_part.is_empty
        assert res.wandering == (Elem((), "b"),)
        assert res.multiplicity == 1
        for x in enumerate_basis(FREE2, 3):
            assert res.shift_part.contains(x)
            assert not res.unitary_part.contains(x)

    def test_cycle_is_purely_unitary(self):
        res = wold(LOOP1)
        assert res.shift_part.is_empty
        assert res.wandering == ()
        assert res.multiplicity == 0
        assert res.unitary_part.contains(Elem((), "b"))

    def test_mixed_presentation(self):
        res = wold(MIXED)
        assert res.unitary_part.seeds == (Elem((), "b"),)
        assert res.wandering == (Elem((), "c"),)
        assert res.multiplicity == 1
        assert res.unitary_part.contains(Elem((2,), "b"))
        assert res.shift_part.contains(Elem((2,), "c"))

    def test_empty_base(self):
        res = wold(Presentation(3, (), {}))
        assert res.unitary_part.is_empty
        assert res.shift_part.is_empty
        assert res.multiplicity == 0

    def test_invalid_presentation_refused(self):
        bad = Presentation(2, ("b", "c"), {("b", 1): "c", ("b", 2): "c"})
        with pytest.raises(ValidationError):
            wold(bad)


class TestPartitionProperties:
    def test_every_element_in_exactly_one_part(self):
        rng = random.Random(101)
        for _ in range(150):
            p = random_presentation(rng)
            if not wold_ok(p):
                continue
            res = wold(p)
            for x in enumerate_basis(p, 3):
                in_u = res.unitary_part.contains(x)
                in_s = res.shift_part.contains(x)
                assert in_u != in_s
                part = membership(p, x)
                assert in_u == (part is Part.UNITARY)

    def test_parts_are_reducing(self):
        rng = random.Random(103)
        for _ in range(150):
            p = random_presentation(rng)
            if not wold_ok(p):
                continue
            res = wold(p)
            for x in enumerate_basis(p, 3):
                mine = (res.unitary_part if res.unitary_part.contains(x)
                        else res.shift_part)
                for i in range(1, p.m + 1):
                    assert mine.contains(apply(p, i, x))
                hit = pred(p, x)
                if hit is None:
                    assert res.shift_part.contains(x)
                else:
                    assert mine.contains(hit[1])

    def test_unitary_part_matches_intersection_formula(self):
        # survive-k-steps for k past the pigeonhole bound == unitary
        rng = random.Random(107)
        for _ in range(150):
            p = random_presentation(rng)
            if not wold_ok(p):
                continue
            res = wold(p)
            bound = len(p.base) + 1
            for x in enumerate_basis(p, 2):
                survives = backward_chain_survives(p, x,
                                                   len(x.prefix) + bound)
                assert survives == res.unitary_part.contains(x)

    def test_multiplicity_survives_relabeling(self):
        rng = random.Random(109)
        for _ in range(80):
            p = random_presentation(rng)
            if not wold_ok(p):
                continue
            names = {b: f"n{k}" for k, b in enumerate(reversed(p.base))}
            q = Presentation(
                p.m, tuple(names[b] for b in p.base),
                {(names[s], i): names[d] for (s, i), d in p.edges.items()})
            assert wold(q).multiplicity == wold(p).multiplicity


def wold_ok(p):
    from rowiso.presentation import validate

    return validate(p).ok


# -- is_row_unitary -----------------------------------------------------------


class TestRowUnitary:
    def test_saturated_loop(self):
        assert is_row_unitary(LOOP1)

    def test_loop_with_free_labels_is_still_surjective(self):
        # every node has in-degree one even though label 2 spawns fresh
        # vectors; the fresh vectors have predecessors too
        assert is_row_unitary(LOOP2)

    def test_free_is_not(self):
        assert not is_row_unitary(FREE2)

    def test_empty_base_vacuously_unitary(self):
        assert is_row_unitary(Presentation(2, (), {}))

    def test_equivalent_to_no_wandering(self):
        rng = random.Random(113)
        for _ in range(150):
            p = random_presentation(rng)
            if not wold_ok(p):
                continue
            res = wold(p)
            assert is_row_unitary(p) == (res.multiplicity == 0)
            assert is_row_unitary(p) == res.shift_part.is_empty


# -- membership ---------------------------------------------------------------


class TestMembership:
    def test_cycle_always_unitary(self):
        two_cycle = Presentation(1, ("a", "b"),
                                 {("a", 1): "b", ("b", 1): "a"})
        for x in enumerate_basis(two_cycle, 4):
            assert membership(two_cycle, x) is Part.UNITARY

    def test_free_always_shift(self):
        for x in enumerate_basis(FREE2, 4):
            assert membership(FREE2, x) is Part.SHIFT

    def test_mixed(self):
        assert membership(MIXED, Elem((2,), "b")) is Part.UNITARY
        assert membership(MIXED, Elem((2,), "c")) is Part.SHIFT

    def test_unknown_node_rejected(self):
        with pytest.raises(ValidationError):
            membership(FREE2, Elem((), "z"))


# -- SubspaceDesc -------------------------------------------------------------


class TestSubspaceDesc:
    def test_explicit_finite(self):
        d = SubspaceDesc((Elem((), "b"),), "explicit-finite", FREE2)
        assert d.contains(Elem((), "b"))
        assert not d.contains(Elem((1,), "b"))

    def test_full_space(self):
        d = SubspaceDesc((), "full-space", FREE2)
        assert d.contains(Elem((1, 2), "b"))
        assert not d.is_empty

    def test_forward_closure_walks_backward(self):
        d = SubspaceDesc((Elem((), "c"),), "forward-closure", MIXED)
        assert d.contains(Elem((2, 1), "c"))
        assert not d.contains(Elem((), "b"))

    def test_forward_closure_terminates_on_cycles(self):
        d = SubspaceDesc((Elem((), "c"),), "forward-closure", MIXED)
        # backward chain from b loops forever at b; must return False
        assert not d.contains(Elem((2,), "b"))

    def test_empty_closure(self):
        d = SubspaceDesc((), "forward-closure", MIXED)
        assert d.is_empty
        assert not d.contains(Elem((), "b"))

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValidationError):
            SubspaceDesc((), "sideways-closure", FREE2)
