"""beta reports, Ding invariants, the volume bound, and batch scans.

Frozen values: beta of a fixed point on P^n is lct * vol - integral =
n (n+1)^n - n (n+1)^n = 0; the weighted-plane divisor gives -8/3; the
two-step point sequence on P1 has w(k) = -k^2 - k, hence limit
self-intersection -2, slope 1/2, and Ding invariant 1/2.
"""

from fractions import Fraction

import pytest

from fanokit.errors import EmptyOrFull, NoStabilization
from fanokit.filtration import (compute_d_infty, ideal_power_filtration,
                                induced_ideal_sequence)
from fanokit.model import KE_CATALOG, build_model, catalog_model
from fanokit.oracles import oracle_h0_quotient
from fanokit.stability import (CONSISTENT, OBSTRUCTS_SEMISTABILITY, beta,
                               ding_invariant, ding_weight_series,
                               semistability_scan, verify_volume_bound)
from fanokit.subscheme import (IdealSequenceOnXxA1, MonomialSubscheme,
                               boundary_divisor_subscheme, point_subscheme,
                               standard_battery, thickened_point_subscheme)


def _dnc_sequence():
    """Two equal point steps on P1: the ideal (x) + (t^2)."""
    X = catalog_model("P1")
    pt = point_subscheme(X, 0)
    return X, IdealSequenceOnXxA1(steps=(pt, pt))


class TestBeta:
    def test_point_on_projective_space_is_zero(self):
        for name, n in [("P1", 1), ("P2", 2), ("P3", 3)]:
            X = catalog_model(name)
            rep = beta(X, point_subscheme(X, 0))
            assert rep.lct_value == n
            assert rep.anticanonical_volume == Fraction(n + 1) ** n
            assert rep.volume_integral == n * Fraction(n + 1) ** n
            assert rep.beta == 0
            assert rep.verdict == CONSISTENT
            assert not rep.approximate

    def test_boundary_line_on_p2(self):
        # slice areas give vol(-K - xD) = (3 - x)^2, integral 9 = lct * vol
        X = catalog_model("P2")
        rep = beta(X, boundary_divisor_subscheme(X, (1, 0)))
        assert rep.lct_value == 1
        assert rep.volume_integral == 9
        assert rep.beta == 0

    def test_thickened_point_on_p2(self):
        X = catalog_model("P2")
        rep = beta(X, thickened_point_subscheme(X, 0))
        assert rep.lct_value == 1
        assert rep.beta == 0
        assert not rep.approximate

    def test_weighted_plane_divisor_obstructs(self):
        X = catalog_model("P112")
        rep = beta(X, boundary_divisor_subscheme(X, (1, 0)))
        assert rep.beta == Fraction(-8, 3)
        assert rep.verdict == OBSTRUCTS_SEMISTABILITY
        rep = beta(X, boundary_divisor_subscheme(X, (-1, -2)))
        assert rep.beta == Fraction(-8, 3)
        rep = beta(X, boundary_divisor_subscheme(X, (0, 1)))
        assert rep.beta == Fraction(8, 3)
        assert rep.verdict == CONSISTENT

    def test_identity_holds_across_battery(self):
        X = catalog_model("dP6")
        for Z in standard_battery(X):
            rep = beta(X, Z)
            assert rep.beta == (rep.lct_value * rep.anticanonical_volume
                                - rep.volume_integral)
            assert (rep.verdict == OBSTRUCTS_SEMISTABILITY) == (rep.beta < 0)

    def test_whole_space_rejected(self):
        X = catalog_model("P2")
        zero = MonomialSubscheme(label="all", dimension=2, chart_gens={0: ()})
        with pytest.raises(EmptyOrFull):
            beta(X, zero)

    def test_empty_subscheme_rejected(self):
        X = catalog_model("P2")
        with pytest.raises(EmptyOrFull):
            beta(X, MonomialSubscheme(label="none", dimension=2))


class TestDing:
    def test_trivial_sequence_is_exactly_zero(self):
        X = catalog_model("P2")
        unit = MonomialSubscheme(label="unit", dimension=2)
        for steps in [(unit,), (unit, unit, unit)]:
            rep = ding_invariant(X, IdealSequenceOnXxA1(steps=steps), 1)
            assert rep.L_power_top == 0
            assert rep.d == 1
            assert rep.lct_product == 1
            assert rep.ding == 0

    def test_two_step_point_sequence_on_p1(self):
        X, S = _dnc_sequence()
        rep = ding_invariant(X, S, 1)
        assert rep.M == 2
        assert rep.r == 1 and rep.r0 == 1
        assert rep.L_power_top == -2
        assert rep.d == Fraction(1, 2)
        assert rep.lct_product == 1
        assert rep.ding == Fraction(1, 2)
        assert rep.ding >= 0
        assert rep.hypothesis_semiample_assumed

    def test_weight_series_formula(self):
        X, S = _dnc_sequence()
        ws = ding_weight_series(X, S, 1, 8)
        assert ws == tuple(-k * k - k for k in range(1, 9))

    def test_weights_match_quotient_oracle(self):
        X, S = _dnc_sequence()
        ws = ding_weight_series(X, S, 1, 10)
        for k in range(1, 11):
            assert ws[k - 1] == -oracle_h0_quotient(X, S, 1, k)

    def test_scale_covariance(self):
        X, S = _dnc_sequence()
        base = ding_invariant(X, S, 1)
        for m in (2, 3):
            rep = ding_invariant(X, S.power(m), m)
            assert rep.ding == base.ding
            assert rep.d == base.d
            assert rep.lct_product == base.lct_product
            assert rep.L_power_top == base.L_power_top * m ** 2
            assert rep.M == base.M * m

    def test_matches_filtration_slope(self):
        # the sequence induced by the point filtration reproduces d_r
        X = catalog_model("P1")
        F = ideal_power_filtration(X, point_subscheme(X, 0))
        limits = compute_d_infty(F, r_list=(1, 2), k_max=8)
        for r, d_r in limits.d_samples:
            rep = ding_invariant(X, induced_ideal_sequence(F, r), r)
            assert rep.d == d_r
            assert rep.ding == 0

    def test_rejects_bad_arguments(self):
        X, S = _dnc_sequence()
        with pytest.raises(ValueError):
            ding_invariant(X, S, 0)
        with pytest.raises(NoStabilization):
            ding_invariant(X, S, 1, k_max=4)


class TestVolumeBound:
    def test_equality_exactly_on_projective_spaces(self):
        for name in ("P1", "P2", "P3"):
            vb = verify_volume_bound(catalog_model(name))
            assert vb.satisfied
            assert vb.volume == vb.bound
        for name in ("P1xP1", "P1xP2", "dP6", "P112"):
            vb = verify_volume_bound(catalog_model(name))
            assert vb.satisfied
            assert vb.volume < vb.bound
            assert vb.seshadri_check is None

    def test_equality_signature(self):
        for name, n in [("P2", 2), ("P3", 3)]:
            X = catalog_model(name)
            bound, volume, ok, check = verify_volume_bound(X)
            assert ok and volume == bound
            assert check is not None and len(check) == len(X.charts)
            assert all(eps == n + 1 for _, eps in check)

    def test_curves_carry_no_signature(self):
        vb = verify_volume_bound(catalog_model("P1"))
        assert vb.volume == vb.bound == 2
        assert vb.seshadri_check is None

    def test_bound_violation_detected(self):
        Y = build_model(2, ((1, 0), (0, 1), (-1, -6)), name="P116")
        vb = verify_volume_bound(Y)
        assert vb.volume == Fraction(32, 3)
        assert not vb.satisfied
        assert vb.seshadri_check is None


class TestScan:
    def test_p2_battery_all_consistent(self):
        X = catalog_model("P2")
        battery = standard_battery(X)
        sc = semistability_scan(X, battery)
        assert [e.subscheme for e in sc.entries] == [Z.label for Z in battery]
        assert all(e.error is None for e in sc.entries)
        assert all(e.report.verdict == CONSISTENT for e in sc.entries)
        assert not sc.obstructed
        assert sc.failures == ()

    def test_weighted_plane_is_obstructed(self):
        X = catalog_model("P112")
        sc = semistability_scan(X, standard_battery(X))
        assert sc.obstructed
        negatives = {e.subscheme for e in sc.entries
                     if e.report is not None and e.report.beta < 0}
        assert negatives == {"divisor@(1, 0)", "divisor@(-1, -2)"}

    def test_ke_catalog_battery(self):
        for name in KE_CATALOG:
            X = catalog_model(name)
            sc = semistability_scan(X, standard_battery(X))
            assert sc.failures == ()
            assert not sc.obstructed
            assert all(e.report.beta >= 0 for e in sc.entries)

    def test_bound_violator_scans_without_raising(self):
        Y = build_model(2, ((1, 0), (0, 1), (-1, -6)), name="P116")
        sc = semistability_scan(Y, standard_battery(Y))
        assert len(sc.entries) == len(standard_battery(Y))
        assert sc.obstructed

    def test_empty_candidate_list(self):
        sc = semistability_scan(catalog_model("P2"), [])
        assert sc.entries == ()
        assert not sc.obstructed

    def test_errors_collected_not_fatal(self):
        X = catalog_model("P2")
        zero = MonomialSubscheme(label="bad", dimension=2, chart_gens={0: ()})
        sc = semistability_scan(X, [point_subscheme(X, 0), zero,
                                    boundary_divisor_subscheme(X, (0, 1))])
        assert [e.subscheme for e in sc.entries] == \
            ["point@0", "bad", "divisor@(0, 1)"]
        assert sc.entries[0].report is not None
        assert sc.entries[1].report is None
        assert "EmptyOrFull" in sc.entries[1].error
        assert sc.entries[2].report is not None
        assert len(sc.failures) == 1

    def test_worker_count_does_not_change_output(self, monkeypatch):
        X = catalog_model("P112")
        battery = standard_battery(X)
        serial = semistability_scan(X, battery, workers=1)
        threaded = semistability_scan(X, battery, workers=4)
        assert serial == threaded
        monkeypatch.setenv("FANOKIT_THREADS", "2")
        from_env = semistability_scan(X, battery)
        assert from_env == serial
