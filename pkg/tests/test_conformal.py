"""Hyperbolicity witnesses and conformal dimension brackets."""

import math

import pytest

from coxinv.building import ThicknessVector
from coxinv.conformal import (AffineRank3, CommutingInfinitePair,
                              confdim_bounds, coornaert_hausdim,
                              fuchsian_report, is_nerve_circle,
                              moussong_hyperbolic, resolve_lambda)
from coxinv.errors import (AffineDegenerate, NotHyperbolic, ResourceExceeded,
                           SchemaError, ThinBuilding)
from .conftest import INF, mat

PENT_RATE = math.log((3 + math.sqrt(5)) / 2)   # e(W) of the 5-cycle system


@pytest.fixture(scope="module")
def cone_333():
    # affine (3,3,3) with a fourth generator commuting with everything
    return mat([[1, 3, 3, 2], [3, 1, 3, 2], [3, 3, 1, 2], [2, 2, 2, 1]])


@pytest.fixture(scope="module")
def free_product_3():
    return mat([[1, INF, INF], [INF, 1, INF], [INF, INF, 1]])


class TestMoussong:
    def test_hyperbolic_systems(self, pentagon, dihedral_inf, a2, triangle_732):
        for M in (pentagon, dihedral_inf, a2, triangle_732):
            r = moussong_hyperbolic(M)
            assert r.hyperbolic and r.witness is None

    def test_affine_rank3_witness(self, triangle_333, cone_333):
        r = moussong_hyperbolic(triangle_333)
        assert not r.hyperbolic
        assert r.witness == AffineRank3((0, 1, 2))
        # the witness ignores the spectator cone generator
        r = moussong_hyperbolic(cone_333)
        assert r.witness == AffineRank3((0, 1, 2))

    def test_commuting_pair_witness(self, square_product):
        r = moussong_hyperbolic(square_product)
        assert not r.hyperbolic
        assert r.witness == CommutingInfinitePair((0, 2), (1, 3))

    def test_rank_guard(self):
        n = 15
        rows = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        with pytest.raises(ResourceExceeded):
            moussong_hyperbolic(mat(rows, [f"g{i}" for i in range(n)]))


class TestNerveCircle:
    def test_circle_nerves(self, pentagon, square_product, triangle_333):
        assert is_nerve_circle(pentagon)
        assert is_nerve_circle(square_product)
        # triangle boundary counts as a circle; hyperbolicity is what
        # excludes (3,3,3) from the surface-group route
        assert is_nerve_circle(triangle_333)

    def test_non_circle_nerves(self, a2, path_2edge, free_product_3):
        assert not is_nerve_circle(a2)
        assert not is_nerve_circle(path_2edge)
        assert not is_nerve_circle(free_product_3)


class TestHausdorff:
    def test_bourdon_preset_normalizes_to_one(self, pentagon):
        q = ThicknessVector.constant(pentagon, 2)
        hd = coornaert_hausdim(pentagon, q)
        assert abs(hd.value - 1.0) < 1e-8
        assert hd.lambda_provenance == "BourdonPreset"
        assert hd.bracket[0] <= hd.value <= hd.bracket[1]

    def test_lambda_covariance(self, pentagon):
        q = ThicknessVector.constant(pentagon, 2)
        hd = coornaert_hausdim(pentagon, q)
        hd2 = coornaert_hausdim(pentagon, q, lam=hd.lam ** 2)
        assert abs(hd2.value - hd.value / 2) < 1e-9
        assert hd2.lambda_provenance == "UserSupplied"

    def test_lambda_must_exceed_one(self, pentagon):
        q = ThicknessVector.constant(pentagon, 2)
        with pytest.raises(SchemaError):
            coornaert_hausdim(pentagon, q, lam=0.5)

    def test_finite_group_degenerate(self, a2):
        with pytest.raises(AffineDegenerate):
            coornaert_hausdim(a2, ThicknessVector.constant(a2, 2))


class TestConfdimBounds:
    def test_pentagon_exact(self, pentagon):
        q = ThicknessVector.constant(pentagon, 2)
        b = confdim_bounds(pentagon, q)
        expect = 1.0 + math.log(2) / PENT_RATE
        assert b.fuchsian
        assert b.lower == b.upper
        assert abs(b.lower - expect) < 1e-6
        assert b.lower_provenance == "FuchsianExact"
        assert b.relative_width < 1e-6

    def test_free_product_cantor_floor(self, free_product_3):
        q = ThicknessVector.constant(free_product_3, 2)
        b = confdim_bounds(free_product_3, q)
        assert not b.fuchsian
        assert b.lower == 0.0 and b.lower_provenance == "VcdFloor"
        assert b.upper > 0 and b.upper_provenance == "HausdorffBound"

    def test_user_supplied_floor(self, free_product_3):
        q = ThicknessVector.constant(free_product_3, 2)
        b = confdim_bounds(free_product_3, q, apartment_confdim=1.2)
        assert b.lower_provenance == "UserSupplied"
        assert b.lower > 0

    def test_not_hyperbolic(self, square_product):
        q = ThicknessVector.constant(square_product, 2)
        with pytest.raises(NotHyperbolic):
            confdim_bounds(square_product, q)

    def test_thin_building(self, pentagon):
        with pytest.raises(ThinBuilding):
            confdim_bounds(pentagon, ThicknessVector.constant(pentagon, 1))

    def test_linear_growth_degenerate(self, path_2edge):
        q = ThicknessVector.constant(path_2edge, 2)
        with pytest.raises(AffineDegenerate):
            confdim_bounds(path_2edge, q)

    def test_precomputed_rate_short_circuits(self, pentagon):
        from coxinv.growth import WeightVector, growth_rate
        from fractions import Fraction
        q = ThicknessVector.constant(pentagon, 2)
        w = WeightVector(pentagon, [Fraction(2)] * 5)
        e_q = growth_rate(pentagon, w, method="series")
        b1 = confdim_bounds(pentagon, q, e_q=e_q)
        b2 = confdim_bounds(pentagon, q)
        assert b1.lower == b2.lower and b1.upper == b2.upper


class TestFuchsianReport:
    def test_vanishing_table(self, pentagon):
        q = ThicknessVector.constant(pentagon, 2)
        conf = 1.0 + math.log(2) / PENT_RATE
        dual = 1.0 + PENT_RATE / math.log(2)
        fr = fuchsian_report(pentagon, q,
                             p_grid=(1.25, conf, 2.0, dual, 3.0))
        assert abs(fr.confdim - conf) < 1e-6
        assert abs(fr.p_hom - dual) < 1e-6
        as_dict = {round(p, 6): (d1, d2) for p, d1, d2 in fr.table}
        assert as_dict[1.25] == ("zero", "nonzero")
        assert as_dict[round(conf, 6)][0] == "critical"
        assert as_dict[2.0] == ("nonzero", "nonzero")
        assert as_dict[round(dual, 6)][1] == "critical"
        assert as_dict[3.0] == ("nonzero", "zero")

    def test_requires_circle_nerve(self, path_2edge):
        q = ThicknessVector.constant(path_2edge, 2)
        with pytest.raises(SchemaError):
            fuchsian_report(path_2edge, q)

    def test_requires_hyperbolic(self, triangle_333):
        q = ThicknessVector.constant(triangle_333, 2)
        with pytest.raises(NotHyperbolic):
            fuchsian_report(triangle_333, q)


class TestLambdaResolution:
    def test_preset_token(self):
        class FakeRate:
            value = 2.0
        lam, prov = resolve_lambda("bourdon", FakeRate())
        assert abs(lam - math.exp(2.0)) < 1e-12
        assert prov == "BourdonPreset"

    def test_explicit_value(self):
        class FakeRate:
            value = 2.0
        lam, prov = resolve_lambda(3.5, FakeRate())
        assert lam == 3.5 and prov == "UserSupplied"
