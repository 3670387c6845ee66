#include "doctest.h"

#include <cmath>

#include "nhf/domain.hpp"
#include "nhf/errors.hpp"
#include "nhf/potential.hpp"
#include "nhf/random_fields.hpp"

#include "oracles.hpp"

using namespace nhf;

TEST_SUITE("potential") {

TEST_CASE("kernel table invariants") {
    const Domain dom({1, 1, 1}, 8);
    const KernelTable ker(dom);
    CHECK(ker.max_asymmetry() == 0.0);
    CHECK(ker.min_weight() > 0.0);
    // the cell-average singular weight dominates
    CHECK(ker.max_weight() == ker.weight(0, 0, 0));
    CHECK(ker.weight(0, 0, 0) ==
          doctest::Approx(kCellAverageInvR / dom.spacing()).epsilon(1e-15));
    CHECK(ker.weight(3, -2, 1) ==
          doctest::Approx(1.0 / (dom.spacing() * std::sqrt(14.0))).epsilon(1e-15));
}

TEST_CASE("frozen singular-cell constant matches the subgrid quadrature oracle") {
    // average of 1/|r| over the unit cube centered at the origin
    const std::array<double, 3> lo{-0.5, -0.5, -0.5}, hi{0.5, 0.5, 0.5}, pole{0, 0, 0};
    const double coarse = oracles::subgrid_box_potential(lo, hi, pole, 48);
    const double fine = oracles::subgrid_box_potential(lo, hi, pole, 96);
    CHECK(std::abs(fine - coarse) / fine < 1e-6);  // stable under 2x refinement
    const double extrapolated =
        oracles::subgrid_box_potential_extrapolated(lo, hi, pole, 48);
    CHECK(extrapolated == doctest::Approx(kCellAverageInvR).epsilon(1e-8));
}

TEST_CASE("riesz potential basics") {
    const Domain dom({1, 1, 1}, 8);
    const KernelTable ker(dom);
    SUBCASE("zero field maps to zero") {
        const ScalarField z = riesz_fast(ker, ScalarField(dom), 2.0);
        for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == 0.0);
    }
    SUBCASE("homogeneity z(t u) = |t|^p z(u)") {
        Rng rng(1);
        const ScalarField u = random_rough_field(dom, rng);
        ScalarField tu = u;
        tu.scale(-1.75);
        const double p = 2.5;
        const ScalarField z = riesz_fast(ker, u, p);
        const ScalarField zt = riesz_fast(ker, tu, p);
        const double factor = std::pow(1.75, p);
        for (std::size_t i = 0; i < z.size(); i += 37) {
            CHECK(zt[i] == doctest::Approx(factor * z[i]).epsilon(1e-13));
        }
    }
    SUBCASE("positivity and monotonicity in |u|") {
        Rng rng(2);
        const ScalarField u = random_rough_field(dom, rng);
        ScalarField v = u;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(v[i]) + 0.25;
        const ScalarField zu = riesz_fast(ker, u, 2.5);
        const ScalarField zv = riesz_fast(ker, v, 2.5);
        for (std::size_t i = 0; i < zu.size(); ++i) {
            CHECK(zu[i] >= 0.0);
            CHECK(zu[i] <= zv[i] + 1e-12);
        }
    }
    SUBCASE("p <= 1 rejected") {
        CHECK_THROWS_AS(riesz_fast(ker, ScalarField(dom), 1.0), InvalidArgument);
    }
}

TEST_CASE("fast path matches the direct summation oracle") {
    for (int m : {8, 16}) {
        const Domain dom({1, 1, 1}, m);
        const KernelTable ker(dom);
        Rng rng(100 + m);
        for (int k = 0; k < 10; ++k) {
            const ScalarField u = random_rough_field(dom, rng);
            const ScalarField zf = riesz_fast(ker, u, 2.5);
            const ScalarField zd = riesz_direct(ker, u, 2.5);
            double dev = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                dev = std::max(dev, std::abs(zf[i] - zd[i]));
                scale = std::max(scale, std::abs(zd[i]));
            }
            CHECK(dev / scale <= 1e-10);
        }
    }
}

TEST_CASE("single-node direct evaluation agrees with the full direct sum") {
    const Domain dom({1, 1, 1}, 8);
    const KernelTable ker(dom);
    Rng rng(7);
    const ScalarField u = random_rough_field(dom, rng);
    const ScalarField z = riesz_direct(ker, u, 2.0);
    CHECK(riesz_direct_at(ker, u, 2.0, 3, 4, 5) ==
          doctest::Approx(z.at(3, 4, 5)).epsilon(1e-14));
}

TEST_CASE("center-node reference for the constant field") {
    // u = 1 at every interior node, p = 2. The node-cell quadrature
    // represents the box [h/2, 1-h/2]^3, so the reference integral of
    // 1/|c - y| is taken over that box; against it the discrete sum is
    // accurate to much better than the 2% gate. Against the full-cube
    // integral the deviation is the boundary-band deficit 1 - (1-h)^2
    // (about 6% at m = 31), which shrinks to zero under refinement.
    double prev_full_err = std::numeric_limits<double>::infinity();
    for (int m : {15, 31}) {
        const Domain dom({1, 1, 1}, m);
        const KernelTable ker(dom);
        ScalarField ones(dom);
        for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = 1.0;
        const int c = (m - 1) / 2;
        const double z_center = riesz_direct_at(ker, ones, 2.0, c, c, c);

        const double h = dom.spacing();
        const double covered = oracles::subgrid_box_potential_extrapolated(
            {h / 2, h / 2, h / 2}, {1 - h / 2, 1 - h / 2, 1 - h / 2},
            {0.5, 0.5, 0.5}, 32);
        CHECK(std::abs(z_center - covered) / covered <= 0.02);

        const double full_err = std::abs(z_center - kCellAverageInvR);
        CHECK(full_err < prev_full_err);  // converges under refinement
        prev_full_err = full_err;
    }
}

TEST_CASE("translation equivariance on interior bumps") {
    const Domain dom({1, 1, 1}, 12);
    const KernelTable ker(dom);
    ScalarField bump(dom);
    add_bump(bump, {0.4, 0.5, 0.5}, 0.2, 1.0, BumpProfile::Cos2);
    const ScalarField shifted = oracles::shift_by_one(bump, 0);
    const ScalarField z = riesz_fast(ker, bump, 2.5);
    const ScalarField zs = riesz_fast(ker, shifted, 2.5);
    const ScalarField zs_direct = riesz_direct(ker, shifted, 2.5);
    const int m = dom.resolution();
    double sup = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) sup = std::max(sup, z[i]);
    for (int ix = 1; ix < m; ++ix)
        for (int iy = 0; iy < m; ++iy)
            for (int iz = 0; iz < m; ++iz) {
                CHECK(std::abs(zs.at(ix, iy, iz) - z.at(ix - 1, iy, iz)) <=
                      1e-10 * sup);
                CHECK(std::abs(zs.at(ix, iy, iz) - zs_direct.at(ix, iy, iz)) <=
                      1e-10 * sup);
            }
}

TEST_CASE("interaction pairing") {
    const Domain dom({1, 1, 1}, 8);
    const KernelTable ker(dom);
    Rng rng(9);
    const double p = 2.5;
    SUBCASE("D(u, 0) = 0") {
        const ScalarField u = random_rough_field(dom, rng);
        CHECK(interaction(ker, u, ScalarField(dom), p) == 0.0);
    }
    SUBCASE("symmetry and homogeneity on random pairs") {
        for (int k = 0; k < 10; ++k) {
            const ScalarField u = random_rough_field(dom, rng);
            const ScalarField v = random_rough_field(dom, rng);
            const double duv = interaction(ker, u, v, p);
            const double dvu = interaction(ker, v, u, p);
            CHECK(std::abs(duv - dvu) <= 1e-12 * std::abs(duv));

            ScalarField tu = u;
            tu.scale(1.3);
            const double dtu = interaction(ker, tu, u, p);
            const double duu = interaction(ker, u, u, p);
            CHECK(dtu == doctest::Approx(std::pow(1.3, p) * duu).epsilon(1e-12));
        }
    }
    SUBCASE("mismatched domains rejected") {
        const Domain other({1, 1, 1}, 9);
        CHECK_THROWS_AS(interaction(ker, ScalarField(dom), ScalarField(other), p),
                        DomainMismatch);
        CHECK_THROWS_AS(interaction(ker, ScalarField(other), ScalarField(other), p),
                        DomainMismatch);
    }
}

TEST_CASE("corruption hook flips a weight negative") {
    const Domain dom({1, 1, 1}, 6);
    KernelTable ker(dom);
    CHECK(ker.min_weight() > 0.0);
    ker.corrupt_for_testing();
    CHECK(ker.min_weight() < 0.0);
}

} // TEST_SUITE
