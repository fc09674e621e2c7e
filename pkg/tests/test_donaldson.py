from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibersum import catalog
from fibersum.donaldson import (ManifoldRecord, SimpleTypeStructure, StructureError, build_dseries, d_zero,
                                dws_via_parity, from_dws, symmetry_sign, to_dws, validate_structure, w_sign)
from fibersum.lattice import IntersectionLattice, LatticeError
from fibersum.series import DSeries, I, render

PLANE = IntersectionLattice(("D", "Sigma"), ((0, 1), (1, 0)), name="plane")
D, SIG = PLANE.gen("D"), PLANE.gen("Sigma")


def plane_record(b_plus: int, entries=(), name="X") -> ManifoldRecord:
    return ManifoldRecord(name, 0, b_plus, PLANE, SIG, SimpleTypeStructure(tuple(entries)))


class TestDZero:
    @pytest.mark.parametrize("name,expected", [("K3", -6), ("B", -6), ("C", -15), ("C2", -24)])
    def test_catalog(self, name, expected):
        e = catalog.get(name)
        assert d_zero(e.record, e.w) == expected

    def test_b_plus_seven(self):
        assert d_zero(plane_record(7), D) == -12

    def test_depends_on_w_square(self, B):
        X = B.record
        assert d_zero(X, B.named_classes["E1"]) == -5
        assert d_zero(X, B.named_classes["E1"] + B.named_classes["E2"]) == -4

    def test_rejects_fractional_w(self):
        with pytest.raises(LatticeError):
            d_zero(plane_record(3), D * Fraction(1, 2))

    @given(st.integers(-4, 4), st.integers(-4, 4))
    def test_plus_two_sigma_mod_four(self, a, b):
        X = plane_record(3)
        w = D * a + SIG * b
        assert (d_zero(X, w + SIG * 2) - d_zero(X, w)) % 4 == 0


class TestSigns:
    def test_w_sign_values(self, B):
        F, E1, E2 = (B.named_classes[n] for n in ("F", "E1", "E2"))
        assert w_sign(E1 + E2, F) == 1
        assert w_sign(E1 + E2, E1) == -1
        assert w_sign(E1 - E2, E1) == -1
        assert w_sign(E1 - E2, E1 + E2) == -1

    def test_w_sign_incompatible(self, B):
        with pytest.raises(StructureError):
            w_sign(B.named_classes["S"], B.named_classes["F"])

    @pytest.mark.parametrize("b_plus,sign", [(1, -1), (3, 1), (5, -1), (7, 1), (9, -1)])
    def test_symmetry_sign(self, b_plus, sign):
        assert symmetry_sign(plane_record(b_plus, name="Y") if b_plus > 1 else
                             ManifoldRecord("Y", 0, 1, PLANE, SIG, chamber="sigma")) == sign

    @given(st.integers(-3, 3), st.integers(-3, 3))
    def test_w_plus_two_sigma_keeps_series(self, a, b):
        e = catalog.get("C")
        X = e.record
        w = e.w + X.lattice.gen("D") * 2 * a + X.sigma * 2 * b
        assert build_dseries(X, w + X.sigma * 2) == build_dseries(X, w)


class TestSeries:
    def test_k3(self, K3):
        assert render(build_dseries(K3.record, K3.w)) == "(1/1) * exp((1/2)*Q)"
        assert render(to_dws(K3.record, K3.w)) == "(-1/1) * exp((-1/2)*Q)"

    def test_c_is_minus_four_sinh(self, C):
        K = C.named_classes["K"]
        expected = DSeries.exp(C.record.lattice, Fraction(1, 2), K.coords, -2) + \
            DSeries.exp(C.record.lattice, Fraction(1, 2), (-K).coords, 2)
        assert build_dseries(C.record, C.w) == expected

    def test_b_two_sectors(self, B):
        s = to_dws(B.record, B.w)
        real = [t for t in s.terms if t.q == Fraction(1, 2)]
        imag = [t for t in s.terms if t.q == Fraction(-1, 2)]
        assert len(real) == len(imag) == 2
        assert all(t.coeff == Fraction(1, 4) for t in s.terms)
        assert all(t.is_imaginary_freq() for t in imag)

    def test_rotation_uses_d0(self, B):
        # w = E1 has d0 = -5, so the K.Sigma = 0 sector is multiplied by i^5 = i
        s = to_dws(B.record, B.named_classes["E1"])
        imag = [t for t in s.terms if t.q == Fraction(-1, 2)]
        assert {t.coeff for t in imag} == {I * Fraction(1, 4), -I * Fraction(1, 4)}

    @pytest.mark.parametrize("name", ["K3", "B", "C", "C2"])
    def test_matches_parity_assembly(self, name):
        e = catalog.get(name)
        assert dws_via_parity(e.record, e.w) == to_dws(e.record, e.w)

    @pytest.mark.parametrize("w", ["F", "E1", "E2", "F+E1+E2", "F-E1+E2"])
    def test_parity_assembly_other_w(self, B, w):
        cls = B.record.lattice.parse(w, B.named_classes)
        assert dws_via_parity(B.record, cls) == to_dws(B.record, cls)

    def test_not_allowable(self, B):
        with pytest.raises(StructureError):
            to_dws(B.record, B.named_classes["S"])

    def test_non_simple(self):
        X = catalog.get("SigmaCP1")
        with pytest.raises(StructureError):
            build_dseries(X.record, X.w)


class TestInverse:
    @pytest.mark.parametrize("name", ["K3", "B", "C", "C2"])
    def test_round_trip(self, name):
        e = catalog.get(name)
        X = e.record
        back = from_dws(to_dws(X, e.w), X.sigma, d_zero(X, e.w), e.w)
        assert back == X.structure

    @pytest.mark.parametrize("w", ["F", "E1", "F+E1+E2"])
    def test_round_trip_other_w(self, B, w):
        X = B.record
        cls = X.lattice.parse(w, B.named_classes)
        assert from_dws(to_dws(X, cls), X.sigma, d_zero(X, cls), cls) == X.structure

    def test_rejects_mixed_terms(self, B):
        X = B.record
        bad = to_dws(X, B.w) + DSeries.exp(X.lattice, Fraction(1, 2), B.named_classes["E1"].coords, 1)
        with pytest.raises(StructureError, match="two-sector"):
            from_dws(bad, X.sigma, -6, B.w)

    def test_rejects_wrong_sector(self):
        s = DSeries.exp(PLANE, Fraction(1, 2), (0, 0), 1)
        with pytest.raises(StructureError):
            from_dws(s, SIG, -6, D)


class TestValidation:
    @pytest.mark.parametrize("name", catalog.NAMES)
    def test_catalog_clean(self, name):
        assert validate_structure(catalog.get(name).record) == []

    def test_odd_k_sigma(self):
        X = plane_record(3, [(D, 1), (-D, 1)])
        problems = validate_structure(X)
        assert any("K.Sigma odd" in p for p in problems)

    def test_missing_partner(self):
        X = plane_record(3, [(D * 2, 1)])
        problems = validate_structure(X)
        assert any("coefficient of -K" in p for p in problems)

    def test_wrong_partner_sign(self):
        X = plane_record(5, [(D * 2, 1), (D * -2, 1)])
        assert len(validate_structure(X)) == 2

    def test_adjunction(self):
        X = plane_record(3, [(D * 4, 1), (D * -4, 1)])
        assert any("adjunction" in p for p in validate_structure(X))

    def test_zero_coefficient(self):
        with pytest.raises(StructureError, match="zero coefficient"):
            SimpleTypeStructure(((D, 0),))

    def test_duplicate(self):
        with pytest.raises(StructureError, match="duplicate"):
            SimpleTypeStructure(((D, 1), (D, 2)))


class TestRecord:
    def test_parity(self):
        with pytest.raises(StructureError, match="odd"):
            ManifoldRecord("X", 0, 2, PLANE, SIG)

    def test_sigma_square(self):
        with pytest.raises(StructureError, match="square zero"):
            ManifoldRecord("X", 0, 3, PLANE, D + SIG)

    def test_sigma_odd(self):
        with pytest.raises(StructureError):
            ManifoldRecord("X", 0, 3, PLANE, SIG * 2)

    def test_chamber_needed(self):
        with pytest.raises(StructureError, match="chamber"):
            ManifoldRecord("X", 0, 1, PLANE, SIG, SimpleTypeStructure(((D * 2, 1),)))

    def test_equality(self):
        assert plane_record(3, [(D * 2, 1), (D * -2, 1)]) == plane_record(3, [(D * -2, 1), (D * 2, 1)])
