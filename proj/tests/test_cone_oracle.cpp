#include <doctest.h>

#include <cmath>

#include "curvop/cone_oracle.hpp"

using namespace curvop;

namespace {
constexpr double kPhi6 = 0.52359877559829882;
constexpr double kPi2 = 1.5707963267948966;
}  // namespace

TEST_CASE("cone oracle spot values") {
    ConeParams p{1.0, kPhi6, 2.0};
    ConeOracle o(p, 0.0, 1.0);
    CHECK(o.mean_curvature() == doctest::Approx(0.13397459621556132).epsilon(1e-14));
    CHECK(o.gauss_curvature() == 0.0);
    CHECK(o.f(0.1) == doctest::Approx(1.0267949192431123).epsilon(1e-14));
    CHECK(o.geometric_oam(1.0).norm() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(o.geometric_potential(1.0, 0.5) == doctest::Approx(-0.0179491924311227).epsilon(1e-13));
    CHECK(o.g1_inv()(0, 0) == doctest::Approx(-0.15390309173472472).epsilon(1e-14));
    CHECK_THROWS_AS(ConeOracle(p, 0.0, 3.0), OutOfDomain);
}

TEST_CASE("oracle Hamiltonian coefficients at the reference point") {
    ConeParams p{1.0, kPhi6, 2.0};
    Couplings cpl;
    auto h = oracle_operator(p, ConeOp::H, 0.0, 1.0, cpl).total(false);
    CHECK(h.at({2, 0}).scalar.real() == doctest::Approx(-0.28718707889796324).epsilon(1e-14));
    CHECK(h.at({0, 2}).scalar.real() == doctest::Approx(-1.0));
    CHECK(h.at({0, 1}).scalar.real() == doctest::Approx(-0.46410161513775455).epsilon(1e-14));
    CHECK(h.at({0, 0}).scalar.real() == doctest::Approx(-0.0179491924311227).epsilon(1e-13));
}

TEST_CASE("oracle geometric potential equals the curvature combination") {
    Couplings cpl;
    for (double phi : {0.0, 0.3, kPhi6, 1.0, 1.4, kPi2})
        for (double r : {0.0, 0.7, 2.0}) {
            ConeParams p{1.0, phi, 2.0};
            ConeOracle o(p, 0.4, r);
            double m = o.mean_curvature(), k = o.gauss_curvature();
            CHECK(o.geometric_potential(1.0, 0.5) ==
                  doctest::Approx(-(m * m - k)).epsilon(1e-12));
        }
}

TEST_CASE("planar-ring limit: geometric quantities vanish") {
    ConeParams p{1.0, 0.0, 2.0};
    for (double r : {0.0, 1.0, 2.0}) {
        ConeOracle o(p, 0.9, r);
        CHECK(o.mean_curvature() == 0.0);
        CHECK(o.geometric_potential(1.0, 0.5) == 0.0);
        CHECK(o.geometric_momentum(1.0).norm() == 0.0);
        CHECK(o.geometric_oam(1.0).norm() == 0.0);
    }
}

TEST_CASE("cone closed forms reduce to the cylinder forms at phi = pi/2") {
    ConeParams p{1.0, kPi2, 2.0};
    Couplings cpl;
    for (double theta : {0.0, 0.4, 2.2, 5.0})
        for (double r : {0.0, 1.0, 2.0}) {
            auto a = oracle_operator(p, ConeOp::Rashba, theta, r, cpl).total(false);
            auto b = oracle_operator(p, ConeOp::CylRashba, theta, r, cpl).total(false);
            for (const auto& [idx, tv] : b) {
                REQUIRE(a.count(idx) == 1);
                CHECK((a.at(idx).spin - tv.spin).norm() < 1e-12);
            }
            auto c = oracle_operator(p, ConeOp::Dresselhaus, theta, r, cpl).total(false);
            auto d = oracle_operator(p, ConeOp::CylDresselhaus, theta, r, cpl).total(false);
            for (const auto& [idx, tv] : d) {
                if (tv.spin.norm() == 0.0) continue;
                REQUIRE(c.count(idx) == 1);
                CHECK((c.at(idx).spin - tv.spin).norm() < 1e-12);
            }
            // entries present in the cone total but not the cylinder one must vanish
            for (const auto& [idx, tv] : c)
                if (!d.count(idx)) CHECK(tv.spin.norm() < 1e-12);

            auto hcone = oracle_operator(p, ConeOp::H, theta, r, cpl).total(false);
            CHECK(hcone.at({0, 1}).scalar.real() ==
                  doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
            CHECK(hcone.at({0, 0}).scalar.real() == doctest::Approx(-0.25).epsilon(1e-12));
        }
}

TEST_CASE("flagged rows expose both the printed and the re-derived forms") {
    ConeParams p{1.0, kPhi6, 2.0};
    Couplings cpl;
    auto ra = oracle_operator(p, ConeOp::Rashba, 0.3, 1.0, cpl);
    int flagged = 0;
    for (const auto& row : ra.rows)
        if (row.has_derived) {
            ++flagged;
            CHECK(row.name == "cone-rashba/row3-curvature");
            // away from the cylinder limit the two variants genuinely differ
            double diff = 0;
            for (const auto& [idx, tv] : row.printed)
                diff += (tv.spin - row.derived.at(idx).spin).norm();
            CHECK(diff > 1e-3);
        }
    CHECK(flagged == 1);
    auto dr = oracle_operator(p, ConeOp::Dresselhaus, 0.3, 1.0, cpl);
    flagged = 0;
    for (const auto& row : dr.rows)
        if (row.has_derived) {
            ++flagged;
            CHECK(row.name == "cone-dresselhaus/row2-metric-derivative");
        }
    CHECK(flagged == 1);
    // at the cylinder limit the printed and derived variants coincide
    ConeParams pc{1.0, kPi2, 2.0};
    auto rc = oracle_operator(pc, ConeOp::Rashba, 0.3, 1.0, cpl);
    for (const auto& row : rc.rows)
        if (row.has_derived)
            for (const auto& [idx, tv] : row.printed)
                CHECK((tv.spin - row.derived.at(idx).spin).norm() < 1e-12);
}

TEST_CASE("oracle scalar accessor") {
    ConeParams p{1.0, kPhi6, 2.0};
    Couplings cpl;
    CHECK(oracle_scalar(p, "M", 0.0, 1.0, cpl) == doctest::Approx(0.13397459621556132));
    CHECK(oracle_scalar(p, "g11", 0.0, 1.0, cpl) == doctest::Approx(3.482050807568878));
    CHECK(oracle_scalar(p, "ginv11", 0.0, 1.0, cpl) == doctest::Approx(0.28718707889796324));
    CHECK_THROWS_AS(oracle_scalar(p, "bogus", 0.0, 1.0, cpl), ConfigError);
}
