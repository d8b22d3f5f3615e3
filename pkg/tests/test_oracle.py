"""Tests for the truncated sparse-matrix verifier.

The verifier re-derives everything from raw edge data, so these tests
lean on hand-countable models: a free family of two isometries, a
one-node self-loop, a two-node cycle, and the four-corner pair fixture
whose decomposition is known node by node.
"""

import numpy as np
import pytest

from rowiso.errors import ResourceExceeded, ValidationError
from rowiso.oracle import (
    SearchSpace,
    all_thetas,
    fault_library,
    materialize,
    run_fault_injection,
    search,
    verify_relations,
    verify_subspace,
    _forge_theta,
)
from rowiso.pair import PairElem, PairPresentation, free_pair, s_apply, t_apply
from rowiso.presentation import Elem, Presentation, apply, free_presentation
from rowiso.slocinski import slocinski
from rowiso.wold import SubspaceDesc, wold
from rowiso.words import Theta

from test_pair import honest_pairs
from test_presentation import random_presentation

import random

FREE2 = free_presentation(2)
SELF_LOOP = Presentation(1, ("b",), {("b", 1): "b"})
TWO_CYCLE = Presentation(1, ("a", "b"), {("a", 1): "b", ("b", 1): "a"})
MIXED = Presentation(2, ("a", "b", "c"), {("a", 1): "b"})

ID11 = Theta.identity(1, 1)
FOUR_CORNERS = PairPresentation(
    ID11, ("a", "b", "c", "d"),
    {("a", 1): "a", ("b", 1): "b"},
    {("a", 1): "a", ("c", 1): "c"})
BILATERAL = PairPresentation(ID11, ("b", "c"), {("b", 1): "c"},
                             {("c", 1): "b"})


# -- materialization ---------------------------------------------------------


class TestMaterialize:
    def test_free_two_generator_counts(self):
        model = materialize(FREE2, 2)
        assert len(model.basis) == 7  # 1 + 2 + 4 words
        for i in (1, 2):
            # depth-2 columns fall off the truncation
            assert model.mats[("s", i)].count_nonzero() == 3
            assert int((model.imgs[("s", i)] >= 0).sum()) == 3
        assert int(model.interior.sum()) == 3

    def test_self_loop_is_the_identity_matrix(self):
        model = materialize(SELF_LOOP, 3)
        assert model.basis == (Elem((), "b"),)
        assert model.mats[("s", 1)].toarray().tolist() == [[1]]
        assert model.interior.tolist() == [True]

    def test_free_pair_basis_count(self):
        model = materialize(free_pair(ID11), 2)
        # t^a s^c b with a + c <= 2
        assert len(model.basis) == 6

    def test_depth_must_be_positive(self):
        with pytest.raises(ValidationError):
            materialize(FREE2, 0)

    def test_basis_budget_enforced(self):
        with pytest.raises(ResourceExceeded):
            materialize(free_presentation(3), 11)

    def test_matrix_agrees_with_symbolic_apply(self):
        model = materialize(MIXED, 3)
        for key in model.keys:
            arr = model.imgs[key]
            for col, x in enumerate(model.basis):
                if arr[col] >= 0:
                    assert model.basis[arr[col]] == apply(MIXED, key[1], x)

    def test_pair_matrix_agrees_with_symbolic_apply(self):
        for pp in (FOUR_CORNERS, BILATERAL):
            model = materialize(pp, 3)
            for kind, lab in model.keys:
                arr = model.imgs[(kind, lab)]
                step = s_apply if kind == "s" else t_apply
                for col, x in enumerate(model.basis):
                    if arr[col] >= 0:
                        assert model.basis[arr[col]] == step(pp, lab, x)

    def test_mask_monotone_in_cost(self):
        model = materialize(FOUR_CORNERS, 5)
        m0 = model.mask()
        m1 = model.mask(forward=1)
        m2 = model.mask(forward=2)
        assert (m1 <= m0).all() and (m2 <= m1).all()
        # four base nodes: one adjoint costs three depth units
        assert model.adjoint_cost == 3
        assert (model.mask(adjoint=1) <= model.mask(forward=2)).all()

    def test_single_family_adjoints_are_free(self):
        model = materialize(FREE2, 3)
        assert model.adjoint_cost == 0
        assert (model.mask(adjoint=4) == model.mask()).all()


# -- relation checks ---------------------------------------------------------


class TestVerifyRelations:
    def test_clean_singles_pass(self):
        for p in (FREE2, SELF_LOOP, TWO_CYCLE, MIXED):
            assert verify_relations(materialize(p, 3)).ok

    def test_clean_pairs_pass(self):
        for pp in (FOUR_CORNERS, BILATERAL, free_pair(Theta.identity(2, 2))):
            assert verify_relations(materialize(pp, 3)).ok

    def test_random_singles_pass(self):
        rng = random.Random(1009)
        for _ in range(10):
            p = random_presentation(rng)
            assert verify_relations(materialize(p, 3)).ok

    def test_random_pairs_pass(self):
        for pp in honest_pairs(1013, 8):
            report = verify_relations(materialize(pp, 3))
            assert report.ok, report

    def test_duplicate_in_edge_caught(self):
        p = Presentation(1, ("a", "b", "c"), {("a", 1): "c", ("b", 1): "c"})
        report = verify_relations(materialize(p, 3))
        assert not report.ok
        assert any("s[1]^T s[1]" in row for row in report.rows)

    def test_report_repr(self):
        good = verify_relations(materialize(FREE2, 2))
        assert repr(good) == "Report(ok)"
        p = Presentation(1, ("a", "b", "c"), {("a", 1): "c", ("b", 1): "c"})
        bad = verify_relations(materialize(p, 3))
        assert "violations" in repr(bad)


# -- subspace claims ---------------------------------------------------------


class TestVerifySubspace:
    def test_unitary_part_of_cycle(self):
        model = materialize(TWO_CYCLE, 3)
        part = wold(TWO_CYCLE).unitary_part
        assert verify_subspace(
            model, part, ("S-invariant", "S-reducing", "unitary-on")).ok

    def test_cycle_flagged_by_shift_claim(self):
        model = materialize(TWO_CYCLE, 3)
        full = SubspaceDesc((), "full-space", TWO_CYCLE)
        report = verify_subspace(model, full, ("shift-on",))
        assert not report.ok
        assert report.rows[0].startswith("shift-on fails: cycle")

    def test_free_family_is_certified_shift(self):
        model = materialize(FREE2, 4)
        full = SubspaceDesc((), "full-space", FREE2)
        assert verify_subspace(model, full, ("shift-on", "S-reducing")).ok

    def test_wandering_vector_breaks_unitary_claim(self):
        model = materialize(FREE2, 4)
        full = SubspaceDesc((), "full-space", FREE2)
        report = verify_subspace(model, full, ("unitary-on",))
        assert not report.ok
        assert "unitary-on fails" in report.rows[0]

    def test_non_invariant_subspace_caught(self):
        model = materialize(FREE2, 3)
        spike = SubspaceDesc((Elem((), "b"),), "explicit-finite", FREE2)
        report = verify_subspace(model, spike, ("S-invariant",))
        assert not report.ok
        assert "S-invariant fails for s[1]" in report.rows[0]

    def test_four_corner_claims(self):
        model = materialize(FOUR_CORNERS, 5)
        res = slocinski(FOUR_CORNERS)
        both = ("S-invariant", "T-invariant", "S-reducing", "T-reducing")
        assert verify_subspace(model, res.H_uu, both + ("unitary-on",)).ok
        assert verify_subspace(
            model, res.H_uu, ("unitary-on",), family="t").ok
        assert verify_subspace(model, res.H_ss, both + ("shift-on",)).ok
        assert verify_subspace(
            model, res.H_ss, ("shift-on",), family="t").ok
        assert verify_subspace(
            model, res.H_us, ("unitary-on",), family="s").ok
        assert verify_subspace(
            model, res.H_us, ("shift-on",), family="t").ok

    def test_unknown_claim_rejected(self):
        model = materialize(FREE2, 2)
        full = SubspaceDesc((), "full-space", FREE2)
        with pytest.raises(ValidationError):
            verify_subspace(model, full, ("invariant",))
        with pytest.raises(ValidationError):
            verify_subspace(model, full, ("unitary-on",), family="x")


# -- search ------------------------------------------------------------------


class TestSearch:
    SPACE11 = SearchSpace(1, 1, 1, (ID11,))

    def test_tiny_space_doubly_commuting(self):
        hits = search(self.SPACE11, "doubly-commuting")
        # free, S-loop, T-loop, twin loops: all four candidates qualify
        assert len(hits) == 4

    def test_tiny_space_has_no_decomposition_failures(self):
        assert search(self.SPACE11, "no-slocinski") == []

    def test_shift_against_unitary_candidates(self):
        space = SearchSpace(1, 1, 2, (Theta.identity(1, 2),))
        hits = search(space, "S-shift-T-unitary")
        assert len(hits) == 2
        for pp in hits:
            assert pp.s_edges == {}
            assert pp.t_edges

    def test_deterministic_order(self):
        space = SearchSpace(1, 2, 1, all_thetas(2, 1))
        assert search(space, "doubly-commuting") == \
            search(space, "doubly-commuting")

    def test_unknown_predicate(self):
        with pytest.raises(ValidationError):
            search(self.SPACE11, "interesting")

    def test_budget_enforced(self):
        big = SearchSpace(4, 2, 2, all_thetas(2, 2))
        with pytest.raises(ResourceExceeded):
            search(big, "doubly-commuting")


class TestAllThetas:
    def test_counts_are_factorials(self):
        assert len(all_thetas(1, 1)) == 1
        assert len(all_thetas(2, 1)) == 2
        assert len(all_thetas(2, 2)) == 24

    def test_first_is_identity(self):
        assert all_thetas(2, 2)[0].is_identity

    def test_all_bijective(self):
        for theta in all_thetas(2, 2):
            assert len(set(theta.map.values())) == 4


# -- fault injection ---------------------------------------------------------


class TestFaultInjection:
    def test_every_fault_detected(self):
        results = run_fault_injection()
        assert len(results) == 4
        assert all(results.values()), results

    def test_library_names(self):
        names = [name for name, _ in fault_library()]
        assert names == ["duplicate-in-edge", "non-bijective-theta",
                         "boundary-as-interior", "non-canonical-element"]

    def test_forged_theta_bypasses_validation(self):
        mapping = {(1, 1): (1, 1), (2, 1): (1, 1)}
        inverse = {(1, 1): (2, 1), (2, 1): (2, 1)}
        with pytest.raises(ValidationError):
            Theta(2, 1, mapping)
        forged = _forge_theta(2, 1, mapping, inverse)
        assert forged.map == mapping
        # and the matrix identities expose the forgery downstream
        pp = PairPresentation(forged, ("b",), {}, {})
        assert not verify_relations(materialize(pp, 3)).ok
