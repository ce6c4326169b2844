"""Filtration levels, saturation, weight series, and limit slopes.

Frozen expected values come from hand computation on P1 and P2 (recorded
in the working notes): level dimensions on P1, v_r(k) = 4 k^2 r^2 + 2 k r
for the point filtration on P1, A_r = 4 with limit slope -1, the limit
slope -1 on P2, and v = k r h0 for the trivial filtration.
"""

from fractions import Fraction
import random

import pytest

import fanokit.filtration as filtration_mod
from fanokit.errors import (CombinatorialBlowup, NoStabilization, R1NotFound,
                            ZeroIdeal)
from fanokit.filtration import (build_saturated_table, compute_d_infty,
                                compute_weight_series, explicit_filtration,
                                filtration_volume, find_r1,
                                ideal_power_filtration,
                                induced_ideal_sequence, saturate,
                                saturate_points)
from fanokit.model import anticanonical_volume, catalog_model
from fanokit.oracles import oracle_h0_quotient
from fanokit.subscheme import (MonomialSubscheme, _subscheme_contains,
                               boundary_divisor_subscheme, point_subscheme)


def _point_filtration(name):
    X = catalog_model(name)
    return X, ideal_power_filtration(X, point_subscheme(X, 0))


def _trivial_filtration(name, r_max=16):
    X = catalog_model(name)
    table = {r: [(0, None)] for r in range(1, r_max + 1)}
    return X, explicit_filtration(X, table, e_plus=1, e_minus=-1)


def _chart_product(A, B, chart_count):
    """Chartwise product ideal of two subschemes, for the product law."""
    gens = {}
    for idx in range(chart_count):
        ga, gb = A.gens_on(idx), B.gens_on(idx)
        if ga is None and gb is None:
            continue
        if ga is None:
            gens[idx] = gb
        elif gb is None:
            gens[idx] = ga
        elif len(ga) == 0 or len(gb) == 0:
            gens[idx] = ()
        else:
            gens[idx] = tuple(tuple(a + b for a, b in zip(g, h))
                              for g in ga for h in gb)
    return MonomialSubscheme(label=f"{A.label}*{B.label}",
                             dimension=A.dimension, chart_gens=gens)


class TestLevels:
    def test_p1_point_window(self):
        X, F = _point_filtration("P1")
        assert (F.e_minus, F.e_plus) == (-1, 3)
        assert F.e_min_est == 0
        assert F.e_max_est == 2

    def test_p1_level_one_keeps_two_of_three(self):
        X, F = _point_filtration("P1")
        assert F.sections(1) == ((-1,), (0,), (1,))
        assert F.value(1, 1) == ((0,), (1,))

    def test_negative_levels_are_full(self):
        X, F = _point_filtration("P1")
        assert F.value(1, -2) == F.sections(1)
        assert F.value(3, Fraction(-1, 2)) == F.sections(3)

    def test_fractional_level_rounds_up(self):
        X, F = _point_filtration("P1")
        assert F.value(1, Fraction(1, 2)) == F.value(1, 1)

    def test_p2_level_four_is_empty(self):
        X, F = _point_filtration("P2")
        assert F.value(1, 4) == ()

    def test_explicit_missing_row(self):
        X = catalog_model("P1")
        F = explicit_filtration(X, {1: [(0, None)]}, e_plus=1, e_minus=-1)
        with pytest.raises(KeyError):
            F.value(2, 0)

    def test_zero_ideal_refused(self):
        X = catalog_model("P1")
        zero = MonomialSubscheme(label="z", dimension=1, chart_gens={0: ()})
        with pytest.raises(ZeroIdeal):
            ideal_power_filtration(X, zero)


class TestExplicitValidation:
    def setup_method(self):
        self.X = catalog_model("P1")
        self.pt = point_subscheme(self.X, 0)

    def test_first_entry_must_be_unit(self):
        with pytest.raises(ValueError, match="unit"):
            explicit_filtration(self.X, {1: [(0, self.pt)]},
                                e_plus=1, e_minus=-1)

    def test_thresholds_must_increase(self):
        with pytest.raises(ValueError, match="increase"):
            explicit_filtration(self.X, {1: [(0, None), (0, self.pt)]},
                                e_plus=1, e_minus=-1)

    def test_entries_must_decrease(self):
        with pytest.raises(ValueError, match="decrease"):
            explicit_filtration(
                self.X,
                {1: [(0, None), (1, self.pt.power(2)), (2, self.pt)]},
                e_plus=3, e_minus=-1)

    def test_window_must_bracket_estimates(self):
        with pytest.raises(ValueError, match="e_plus"):
            explicit_filtration(self.X, {1: [(0, None), (2, self.pt)]},
                                e_plus=2, e_minus=-1)
        with pytest.raises(ValueError, match="e_minus"):
            explicit_filtration(self.X, {1: [(0, None), (2, self.pt)]},
                                e_plus=3, e_minus=0)


class TestSaturate:
    def test_p1_level_one_saturation(self):
        X, F = _point_filtration("P1")
        ideal, closure = saturate(F, 1, 1)
        assert dict(ideal.chart_gens) == {0: ((1,),)}
        assert closure == F.value(1, 1)

    def test_ideal_contained_in_defining_power(self):
        X, F = _point_filtration("P2")
        for r, x in [(1, 1), (1, 2), (2, 3), (2, Fraction(5, 2))]:
            ideal, _ = saturate(F, r, x)
            assert _subscheme_contains(F.level_ideal(r, x), ideal)

    def test_ideal_power_levels_already_saturated(self):
        X, F = _point_filtration("P2")
        for r, x in [(1, 1), (1, 2), (2, 1), (2, 4), (3, Fraction(7, 2))]:
            _, closure = saturate(F, r, x)
            assert closure == F.value(r, x)

    def test_full_level_gives_unit(self):
        X, F = _point_filtration("P1")
        ideal, closure = saturate(F, 2, -2)
        assert ideal.is_empty
        assert closure == F.sections(2)

    def test_empty_level_gives_zero(self):
        X, F = _point_filtration("P2")
        ideal, closure = saturate(F, 1, 4)
        assert closure == ()
        assert ideal.has_zero_chart
        assert set(ideal.active_chart_indices()) == set(range(len(X.charts)))

    def test_idempotent(self):
        X, F = _point_filtration("P2")
        first, closure = saturate(F, 1, 2)
        second, closure2 = saturate_points(X, 1, closure)
        assert dict(second.chart_gens) == dict(first.chart_gens)
        assert closure2 == closure

    def test_table_builder(self):
        X, F = _point_filtration("P1")
        table = build_saturated_table(F, [(1, 1), (1, 2), (2, 2)])
        assert dict(table.ideal(1, 1).chart_gens) == {0: ((1,),)}
        assert table.closure(1, 2) == F.value(1, 2)
        with pytest.raises(KeyError):
            table.ideal(3, 1)


class TestSaturationLaws:
    """Product, monotonicity, vanishing, fullness, closure, idempotence."""

    def _filtrations(self):
        p2 = catalog_model("P2")
        p1 = catalog_model("P1")
        p112 = catalog_model("P112")
        return [
            (p1, ideal_power_filtration(p1, point_subscheme(p1, 0))),
            (p2, ideal_power_filtration(p2, point_subscheme(p2, 0))),
            (p112, ideal_power_filtration(
                p112, boundary_divisor_subscheme(p112, (1, 0)))),
        ]

    def test_product_law(self):
        rng = random.Random(11)
        for X, F in self._filtrations():
            for _ in range(6):
                r1 = rng.randint(1, 2)
                r2 = rng.randint(1, 2)
                x1 = Fraction(rng.randint(-4, 4 * r1), 2)
                x2 = Fraction(rng.randint(-4, 4 * r2), 2)
                a, _ = saturate(F, r1, x1)
                b, _ = saturate(F, r2, x2)
                target, _ = saturate(F, r1 + r2, x1 + x2)
                prod = _chart_product(a, b, len(X.charts))
                assert _subscheme_contains(target, prod), (X.name, x1, x2)

    def test_monotone_in_x(self):
        rng = random.Random(13)
        for X, F in self._filtrations():
            for _ in range(8):
                r = rng.randint(1, 3)
                x1 = Fraction(rng.randint(-4, 4 * r), 2)
                x2 = x1 + Fraction(rng.randint(0, 6), 2)
                small, _ = saturate(F, r, x2)
                big, _ = saturate(F, r, x1)
                assert _subscheme_contains(big, small)
                assert set(F.value(r, x2)) <= set(F.value(r, x1))

    def test_vanishing_beyond_e_max(self):
        for X, F in self._filtrations():
            for r in (1, 2):
                x = r * F.e_max_est + Fraction(1, 2)
                assert F.value(r, x) == ()
                ideal, _ = saturate(F, r, x)
                assert ideal.has_zero_chart

    def test_full_below_e_min(self):
        for X, F in self._filtrations():
            assert find_r1(F) == 1

    def test_value_inside_closure(self):
        rng = random.Random(17)
        for X, F in self._filtrations():
            for _ in range(6):
                r = rng.randint(1, 3)
                x = Fraction(rng.randint(-2, 4 * r), 2)
                _, closure = saturate(F, r, x)
                assert set(F.value(r, x)) <= set(closure)

    def test_idempotence(self):
        rng = random.Random(19)
        for X, F in self._filtrations():
            for _ in range(4):
                r = rng.randint(1, 2)
                x = Fraction(rng.randint(0, 4 * r), 2)
                ideal, closure = saturate(F, r, x)
                again, closure2 = saturate_points(X, r, closure)
                assert dict(again.chart_gens) == dict(ideal.chart_gens)
                assert closure2 == closure


class TestFindR1:
    def test_ideal_power_is_one(self):
        for name in ("P1", "P2"):
            X, F = _point_filtration(name)
            assert find_r1(F) == 1

    def test_requires_e_minus_below_estimate(self):
        X, F = _point_filtration("P1")
        with pytest.raises(ValueError, match="e_min"):
            find_r1(F, e_minus=0)

    def test_shifted_table(self):
        X = catalog_model("P1")
        pt = point_subscheme(X, 0)
        table = {r: [(1, None), (2, pt), (3, pt.power(2))] for r in (1, 2)}
        F = explicit_filtration(X, table, e_plus=4, e_minus=0)
        assert find_r1(F) == 1

    def test_missing_row_propagates(self):
        X = catalog_model("P1")
        F = explicit_filtration(X, {1: [(0, None)]}, e_plus=1, e_minus=-1)
        with pytest.raises(KeyError):
            find_r1(F)

    def test_not_found_under_dishonest_estimate(self):
        X = catalog_model("P1")
        pt = point_subscheme(X, 0)
        table = {r: [(-1, None), (0, pt)] for r in range(1, 129)}
        F = explicit_filtration(X, table, e_plus=1, e_minus=0, e_min_est=5)
        with pytest.raises(R1NotFound) as info:
            find_r1(F)
        assert info.value.cap == 64


class TestFiltrationVolume:
    def test_p2_point_at_one(self):
        X, F = _point_filtration("P2")
        assert filtration_volume(F, 1) == 8

    def test_p1_point_at_one(self):
        X, F = _point_filtration("P1")
        assert filtration_volume(F, 1) == 1

    def test_nonpositive_levels_give_total_volume(self):
        X112 = catalog_model("P112")
        cases = [
            _point_filtration("P1"),
            _point_filtration("P2"),
            (X112, ideal_power_filtration(
                X112, boundary_divisor_subscheme(X112, (1, 0)))),
        ]
        for X, F in cases:
            expected = Fraction(X.r0) ** X.dimension * anticanonical_volume(X)
            assert filtration_volume(F, 0) == expected
            assert filtration_volume(F, -3) == expected

    def test_vanishes_past_threshold(self):
        X, F = _point_filtration("P2")
        assert filtration_volume(F, 5) == 0

    def test_explicit_trivial_table(self):
        X, F = _trivial_filtration("P1", r_max=8)
        assert filtration_volume(F, -1) == anticanonical_volume(X)
        assert filtration_volume(F, 1) == 0

    def test_explicit_too_few_rows(self):
        X, F = _trivial_filtration("P1", r_max=3)
        with pytest.raises(NoStabilization) as info:
            filtration_volume(F, -1)
        assert info.value.k_max == 3


class TestWeightSeries:
    def test_p1_point_frozen_values(self):
        X, F = _point_filtration("P1")
        for r in (1, 2):
            series = compute_weight_series(F, r, 6)
            for rec in series.records:
                k = rec.k
                assert rec.h0 == 2 * k * r + 1
                assert rec.v == 4 * k * k * r * r + 2 * k * r
                assert rec.w == -4 * k * r * rec.h0 + rec.v

    def test_p1_level_dims_at_k_one(self):
        X, F = _point_filtration("P1")
        series = compute_weight_series(F, 1, 1)
        assert series.records[0].level_dims == ((0, 3), (1, 2), (2, 1), (3, 0))
        assert series.records[0].v == 6

    def test_k_one_matches_per_level_sections(self):
        X, F = _point_filtration("P2")
        series = compute_weight_series(F, 2, 1)
        for j, dim in series.records[0].level_dims:
            assert dim == len(F.value(2, j))

    def test_fourth_differences_vanish(self):
        X, F = _point_filtration("P1")
        series = compute_weight_series(F, 2, 6)
        ws = [rec.w for rec in series.records]
        for _ in range(4):
            ws = [b - a for a, b in zip(ws, ws[1:])]
        assert all(x == 0 for x in ws)

    def test_trivial_filtration_weights(self):
        X, F = _trivial_filtration("P2", r_max=4)
        for r in (1, 2):
            series = compute_weight_series(F, r, 4)
            for rec in series.records:
                assert rec.v == rec.k * r * rec.h0
                assert rec.w == -rec.k * r * rec.h0

    def test_weight_identity_against_quotient_oracle(self):
        X, F = _point_filtration("P1")
        for r in (1, 2):
            series = compute_weight_series(F, r, 3)
            seq = induced_ideal_sequence(F, r)
            for rec in series.records:
                assert rec.w == -oracle_h0_quotient(X, seq, r, rec.k)

    def test_weight_identity_on_p2(self):
        X, F = _point_filtration("P2")
        series = compute_weight_series(F, 1, 2)
        seq = induced_ideal_sequence(F, 1)
        for rec in series.records:
            assert rec.w == -oracle_h0_quotient(X, seq, 1, rec.k)

    def test_graded_piece_inside_saturation(self):
        # dim of each k-th power piece is bounded by the saturated level
        # dimension at kr, the computable half of the limit sandwich
        X, F = _point_filtration("P2")
        for r in (1, 2):
            series = compute_weight_series(F, r, 3)
            for rec in series.records:
                for j, dim in rec.level_dims:
                    _, closure = saturate(F, rec.k * r, j)
                    assert dim <= len(closure)

    def test_requires_fullness_at_window_bottom(self):
        X, F = _point_filtration("P1")
        with pytest.raises(ValueError, match="below r1"):
            compute_weight_series(F, 1, 3, e_minus=1)

    def test_rejects_empty_window(self):
        X, F = _point_filtration("P1")
        with pytest.raises(ValueError, match="exceed"):
            compute_weight_series(F, 1, 3, e_plus=-1)

    def test_generator_cap(self, monkeypatch):
        monkeypatch.setattr(filtration_mod, "GENERATOR_CAP", 2)
        X, F = _point_filtration("P2")
        with pytest.raises(CombinatorialBlowup):
            compute_weight_series(F, 1, 3)


class TestDInfty:
    def test_p1_point_report(self):
        X, F = _point_filtration("P1")
        report = compute_d_infty(F, r_list=(1, 2, 4, 8), k_max=8)
        assert report.r1 == 1
        assert report.a_limit == 4
        assert all(a == 4 for _, a in report.a_samples)
        assert all(d == -1 for _, d in report.d_samples)
        assert report.d_infty == -1
        assert not report.approximate
        gap_first = abs(report.a_samples[0][1] - report.a_limit)
        gap_last = abs(report.a_samples[-1][1] - report.a_limit)
        assert gap_last <= gap_first

    def test_p2_point_report(self):
        X, F = _point_filtration("P2")
        assert F.e_plus == 4
        report = compute_d_infty(F, r_list=(1,), k_max=8)
        assert report.a_limit == 27
        assert report.d_infty == -1
        assert all(a <= report.a_limit for _, a in report.a_samples)

    def test_trivial_filtration_slope(self):
        X, F = _trivial_filtration("P1")
        report = compute_d_infty(F, r_list=(1, 2, 4), k_max=8)
        assert report.d_infty == 1 - Fraction(1, X.r0)
        assert report.approximate
        assert report.a_limit == report.a_samples[-1][1]

    def test_window_validation(self):
        X, F = _point_filtration("P1")
        with pytest.raises(ValueError, match="e_plus"):
            compute_d_infty(F, e_plus=2, r_list=(1,), k_max=8)
        with pytest.raises(ValueError, match="e_minus"):
            compute_d_infty(F, e_minus=0, r_list=(1,), k_max=8)

    def test_needs_enough_k(self):
        X, F = _point_filtration("P1")
        with pytest.raises(NoStabilization):
            compute_d_infty(F, r_list=(1,), k_max=4)


class TestInducedSequence:
    def test_p1_point_sequence(self):
        X, F = _point_filtration("P1")
        seq = induced_ideal_sequence(F, 1)
        assert seq.M == 4
        assert seq.step(1).is_empty
        assert dict(seq.step(2).chart_gens) == {0: ((1,),)}
        assert seq.step(4).has_zero_chart
        assert seq.product_gens(0) == ((0, 3), (1, 2), (2, 1))

    def test_scales_with_r(self):
        X, F = _point_filtration("P1")
        seq = induced_ideal_sequence(F, 2)
        assert seq.M == 8
        assert seq.product_gens(0) == (
            (0, 6), (1, 5), (2, 4), (3, 3), (4, 2))

    def test_singular_chart_sequence_builds(self):
        X = catalog_model("P112")
        F = ideal_power_filtration(
            X, boundary_divisor_subscheme(X, (1, 0)))
        seq = induced_ideal_sequence(F, 1)
        assert seq.M == F.e_plus - F.e_minus
