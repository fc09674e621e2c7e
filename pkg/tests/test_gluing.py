from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibersum import catalog
from fibersum.donaldson import d_zero
from fibersum.gluing import (CIRCLE, CURVE, DIRECT, VIA_B, GluingConfig, GluingError, MatchedClass, glue,
                             glue_direct, glue_via_b, glued_form, glued_record, induced_w,
                             invariant_profile_compare, pair_coefficient_sum, shift_splitting,
                             sigma_zero_check, swap_factors)
from fibersum.series import DSeries, ExpTerm, GaussianRational, expand

from conftest import small_rationals

PAIRS = [("B", "B"), ("C", "B"), ("B", "C"), ("K3", "B")]


def factors(cfg_names, mode=DIRECT):
    a, b = cfg_names
    if mode == VIA_B:
        a, b = catalog.capped_name(a), catalog.capped_name(b)
    return catalog.get(a), catalog.get(b)


def glued(names, mode=DIRECT):
    cfg = catalog.fiber_config(*names, mode=mode)
    e1, e2 = factors(names, mode)
    return cfg, e1.w, e2.w


class TestForm:
    def test_b_b(self):
        cfg, _, _ = glued(("B", "B"))
        lat = glued_form(cfg)
        assert lat.generator_names == ("D", "Sigma")
        assert lat.gram == ((0, 1), (1, 0))
        assert lat.name == "B#B"

    def test_via_b_adds_capping_correction(self):
        cfg, _, _ = glued(("B", "B"), VIA_B)
        # each capping D - Sigma/2 has square -1; the correction 2 k k' = 2 restores D.D = 0
        assert glued_form(cfg).gram == ((0, 1), (1, 0))

    def test_curve_boundary_has_no_correction(self):
        cfg, _, _ = glued(("B", "B"), VIA_B)
        m = cfg.matched[0]
        curve = GluingConfig(cfg.x1, cfg.x2, (MatchedClass("D", m.d1, m.d2, CURVE),), VIA_B)
        assert glued_form(curve).gram[0][0] == -2

    def test_sigma_mismatch(self, B, C):
        m = MatchedClass("D", B.fiber, C.record.lattice.gen("K"), CIRCLE)
        cfg = GluingConfig(B.record, C.record, (m,))
        with pytest.raises(GluingError, match="Sigma1.d1"):
            glued_form(cfg)

    def test_declared_multiple(self, B):
        m = MatchedClass("D", B.fiber, B.fiber, CIRCLE, 2)
        with pytest.raises(GluingError, match="circle multiple"):
            glued_form(GluingConfig(B.record, B.record, (m,)))


class TestConfig:
    def test_non_simple_factor(self, B):
        X = catalog.get("SigmaCP1").record
        with pytest.raises(GluingError, match="simple type"):
            GluingConfig(X, B.record, ())

    def test_names_distinct(self, B):
        m = MatchedClass("Sigma", B.fiber, B.fiber)
        with pytest.raises(GluingError, match="distinct"):
            GluingConfig(B.record, B.record, (m,))

    def test_direct_needs_circle(self, B):
        m = MatchedClass("D", B.fiber, B.fiber, CURVE)
        with pytest.raises(GluingError, match="circle"):
            GluingConfig(B.record, B.record, (m,))

    def test_unknown_mode(self, B):
        with pytest.raises(GluingError):
            GluingConfig(B.record, B.record, (), "sideways")

    def test_bad_boundary(self, B):
        with pytest.raises(GluingError):
            MatchedClass("D", B.fiber, B.fiber, "annulus")

    def test_degenerate_lattice(self, B):
        cfg = GluingConfig(B.record, B.record, ())
        with pytest.raises(GluingError, match="degenerate"):
            glue(cfg, B.w, B.w)

    def test_mode_guards(self):
        cfg, w1, w2 = glued(("B", "B"))
        with pytest.raises(GluingError):
            glue_via_b(cfg, w1, w2)
        cfg, w1, w2 = glued(("B", "B"), VIA_B)
        with pytest.raises(GluingError):
            glue_direct(cfg, w1, w2)

    def test_not_allowable(self, B):
        cfg, _, w2 = glued(("B", "B"))
        with pytest.raises(GluingError, match="allowable"):
            glue(cfg, B.named_classes["S"], w2)


class TestSeries:
    def test_b_b_is_minus_four_sinh(self):
        cfg, w1, w2 = glued(("B", "B"))
        lat = glued_form(cfg)
        expected = DSeries.exp(lat, Fraction(1, 2), (2, 2), -2) + DSeries.exp(lat, Fraction(1, 2), (-2, -2), 2)
        assert glue(cfg, w1, w2) == expected

    def test_k3_b_vanishes(self):
        cfg, w1, w2 = glued(("K3", "B"))
        assert glue(cfg, w1, w2).terms == ()

    @pytest.mark.parametrize("names", [("B", "B"), ("B", "C"), ("C", "B")])
    def test_via_b_agrees_with_direct(self, names):
        direct = glue(*glued(names))
        via = glue(*glued(names, VIA_B))
        assert direct.canonical() == via.relabel(direct.lattice).canonical()

    @pytest.mark.parametrize("names", PAIRS)
    def test_factor_symmetry(self, names):
        cfg, w1, w2 = glued(names)
        swapped = swap_factors(cfg)
        assert swapped.name == f"{names[1]}#{names[0]}"
        assert glue(swapped, w2, w1).relabel(glued_form(cfg)) == glue(cfg, w1, w2)

    @given(small_rationals)
    def test_splitting_invariance(self, r):
        cfg, w1, w2 = glued(("C", "B"))
        assert glue(shift_splitting(cfg, r), w1, w2) == glue(cfg, w1, w2)

    @pytest.mark.parametrize("r", [1, -1, Fraction(1, 2), Fraction(-1, 2), 3])
    def test_splitting_invariance_via_b(self, r):
        cfg, w1, w2 = glued(("B", "B"), VIA_B)
        assert glue(shift_splitting(cfg, r), w1, w2) == glue(cfg, w1, w2)

    @staticmethod
    def _plane_table(names):
        s = glue(*glued(names))
        lat = s.lattice
        return expand(s, [("t", lat.gen("D")), ("s", lat.gen("Sigma"))], 6)

    def test_t_s_symmetry(self):
        table = self._plane_table(("B", "B"))
        assert all(table.coefficient(j, i) == c for (i, j), c in table.coefficients.items())

    def test_c_b_is_not_symmetric(self):
        # frequencies +-(4t + 2s): the linear coefficients differ
        table = self._plane_table(("C", "B"))
        assert table.coefficient(1, 0) == 0 and table.coefficient(0, 1) == 0
        assert table.coefficient(2, 0) == 256 and table.coefficient(0, 2) == 64


class TestRecord:
    @pytest.mark.parametrize("names", PAIRS)
    def test_parity_bookkeeping(self, names):
        cfg, w1, w2 = glued(names)
        rec, w = glued_record(cfg, w1, w2)
        e1, e2 = factors(names)
        assert (d_zero(rec, w) - d_zero(e1.record, w1) - d_zero(e2.record, w2) - 1) % 2 == 0

    @pytest.mark.parametrize("names", [("B", "B"), ("B", "C")])
    def test_parity_bookkeeping_via_b(self, names):
        cfg, w1, w2 = glued(names, VIA_B)
        rec, w = glued_record(cfg, w1, w2)
        e1, e2 = factors(names, VIA_B)
        assert (d_zero(rec, w) - d_zero(e1.record, w1) - d_zero(e2.record, w2) - 1) % 2 == 0

    def test_b_plus(self):
        rec, _ = glued_record(*glued(("C", "B")))
        assert rec.b_plus == 15
        rec, _ = glued_record(*glued(("B", "B"), VIA_B))
        assert rec.b_plus == 9

    @pytest.mark.parametrize("names,target", [(("B", "B"), "C"), (("C", "B"), "C2")])
    def test_reproduces_catalog(self, names, target):
        cfg, w1, w2 = glued(names)
        rec, w = glued_record(cfg, w1, w2, name=target)
        entry = catalog.get(target)
        assert rec.b_plus == entry.record.b_plus
        probes = [entry.record.lattice.gen("D"), entry.record.sigma]
        mine = sorted(((K.dot(rec.lattice.gen("D")), K.dot(rec.sigma)), a) for K, a in rec.structure)
        theirs = sorted(((K.dot(probes[0]), K.dot(probes[1])), a) for K, a in entry.record.structure)
        assert mine == theirs

    def test_induced_w(self):
        cfg, w1, w2 = glued(("B", "B"))
        w = induced_w(cfg, w1, w2)
        assert w.coords == (1, 0)


class TestPairSum:
    def test_matches_glued_coefficient(self, B):
        cfg, w1, w2 = glued(("B", "B"))
        E1, E2 = B.named_classes["E1"], B.named_classes["E2"]
        assert pair_coefficient_sum(cfg, E1 + E2, E1 + E2, w1, w2) == -2
        assert pair_coefficient_sum(cfg, -E1 - E2, -E1 - E2, w1, w2) == 2

    def test_zero_when_sectors_differ(self, B):
        cfg, w1, w2 = glued(("B", "B"))
        E1, E2 = B.named_classes["E1"], B.named_classes["E2"]
        assert pair_coefficient_sum(cfg, E1 + E2, -E1 - E2, w1, w2) == 0
        assert pair_coefficient_sum(cfg, E1 - E2, E1 - E2, w1, w2) == 0

    def test_via_b_scale(self):
        cfg, w1, w2 = glued(("B", "B"), VIA_B)
        K = cfg.x1.lattice.gen("K")
        assert pair_coefficient_sum(cfg, K, K, w1, w2) == Fraction(-1, 2) * 2 * 2


class TestSigmaChecks:
    @pytest.mark.parametrize("names", PAIRS)
    def test_no_sigma_zero_frequencies(self, names):
        cfg, w1, w2 = glued(names)
        rec, _ = glued_record(cfg, w1, w2)
        assert sigma_zero_check(glue(cfg, w1, w2), rec.sigma)

    def test_detects_sigma_zero(self):
        cfg, w1, w2 = glued(("B", "B"))
        s = glue(cfg, w1, w2)
        lat = s.lattice
        extra = DSeries.exp(lat, Fraction(1, 2), (0, 1), 1)
        assert not sigma_zero_check(s + extra, lat.gen("Sigma"))

    def test_requires_half_q(self, B):
        s = DSeries.exp(B.record.lattice, Fraction(-1, 2), (0, 0, 0, 0), 1)
        with pytest.raises(GluingError):
            sigma_zero_check(s, B.record.sigma)

    def test_profile_mismatch(self):
        a = glue(*glued(("B", "B")))
        b = glue(*glued(("C", "B")))
        sig_a, sig_b = a.lattice.gen("Sigma"), b.lattice.gen("Sigma")
        assert not invariant_profile_compare(a, b, sig_a, sig_b)

    def test_profile_ignores_lattice(self):
        a = glue(*glued(("B", "B")))
        c = catalog.get("C")
        from fibersum.donaldson import build_dseries
        sc = build_dseries(c.record, c.w)
        assert invariant_profile_compare(a, sc, a.lattice.gen("Sigma"), c.record.sigma)

    def test_profile_counts_multiplicity(self):
        a = glue(*glued(("B", "B")))
        lat = a.lattice
        t = ExpTerm(Fraction(1, 2), (GaussianRational(5), GaussianRational(2)), GaussianRational(-2))
        b = a + DSeries(lat, (t,))
        assert not invariant_profile_compare(a, b, lat.gen("Sigma"), lat.gen("Sigma"))


@given(st.sampled_from([Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(3)]), small_rationals)
def test_splitting_composes(r1, r2):
    cfg, w1, w2 = glued(("B", "B"))
    twice = shift_splitting(shift_splitting(cfg, r1), r2)
    once = shift_splitting(cfg, r1 + r2)
    assert [(m.d1, m.d2) for m in twice.matched] == [(m.d1, m.d2) for m in once.matched]
