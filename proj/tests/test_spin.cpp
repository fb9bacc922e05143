#include <doctest.h>

#include <cmath>
#include <random>

#include "curvop/cone_oracle.hpp"
#include "curvop/spin.hpp"

using namespace curvop;

namespace {
constexpr double kPhi6 = 0.52359877559829882;
constexpr double kPi2 = 1.5707963267948966;
}  // namespace

TEST_CASE("Cartesian Pauli matrices: Hermitian, traceless, square to identity") {
    for (int s = 0; s < 3; ++s) {
        const SpinMatrix& p = pauli(s);
        CHECK((p - p.adjoint()).norm() < 1e-15);
        CHECK(std::abs(p.trace()) < 1e-15);
        CHECK((p * p - SpinMatrix::Identity()).norm() < 1e-15);
    }
}

TEST_CASE("reduced Pauli matrices on the cylinder chart") {
    SurfaceDef cone = builtin_catalog("cone");
    auto sig = pauli_ccs(cone, 0.0, 0.7, {{"phi", kPi2}});
    CHECK((sig[2] - pauli(0)).norm() < 1e-12);  // sigma^3_0 = sigma^x at theta = 0
    CHECK((sig[1] - pauli(2)).norm() < 1e-12);  // sigma^r_0 = sigma^z
    CHECK((sig[0] - pauli(1)).norm() < 1e-12);  // sigma^theta_0 = sigma^y / R, R = 1
}

TEST_CASE("reduced Pauli matrices on the cone") {
    SurfaceDef cone = builtin_catalog("cone");
    auto sig = pauli_ccs(cone, 0.0, 1.0, {{"phi", kPhi6}});
    SpinMatrix r_expect = 0.8660254037844387 * pauli(0) + 0.5 * pauli(2);
    SpinMatrix n_expect = 0.5 * pauli(0) - 0.8660254037844387 * pauli(2);
    CHECK((sig[1] - r_expect).norm() < 1e-12);
    CHECK((sig[2] - n_expect).norm() < 1e-12);
}

TEST_CASE("the normal-direction reduced Pauli matrix squares to identity everywhere") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> f(0.05, 0.95);
    for (const auto& name : builtin_names()) {
        SurfaceDef def = builtin_catalog(name);
        auto dom = def.resolve_domain(def.resolve_params({}));
        for (int rep = 0; rep < 10; ++rep) {
            double u = dom.u_lo + f(rng) * (dom.u_hi - dom.u_lo);
            double v = dom.v_lo + f(rng) * (dom.v_hi - dom.v_lo);
            auto sig = pauli_ccs(def, u, v);
            CHECK((sig[2] * sig[2] - SpinMatrix::Identity()).norm() < 1e-10);
        }
    }
}

TEST_CASE("reduced Rashba tensor values") {
    SurfaceDef cone = builtin_catalog("cone");
    SUBCASE("cylinder limit at theta = 0") {
        Eigen::Matrix3d s = rashba_tensor_ccs(cone, 0.0, 1.0, 1.0, 1.0, {{"phi", kPi2}});
        CHECK(s(0, 1) == doctest::Approx(1.0).epsilon(1e-12));  // S_theta r
        CHECK(s(1, 2) == doctest::Approx(1.0).epsilon(1e-12));  // S_r3
        CHECK(s(2, 0) == doctest::Approx(1.0).epsilon(1e-12));  // S_3theta
    }
    SUBCASE("planar ring at theta = pi/4") {
        Eigen::Matrix3d s =
            rashba_tensor_ccs(cone, 0.78539816339744831, 1.0, 1.0, 1.0, {{"phi", 0.0}});
        CHECK(s(0, 1) == doctest::Approx(-2.0).epsilon(1e-12));  // -(R + r)
    }
    SUBCASE("antisymmetry at random cone points") {
        std::mt19937 rng(4);
        std::uniform_real_distribution<double> fu(0.0, 6.28), fv(0.0, 2.0);
        for (int rep = 0; rep < 50; ++rep) {
            Eigen::Matrix3d s = rashba_tensor_ccs(cone, fu(rng), fv(rng), 1.3, 1.0);
            CHECK((s + s.transpose()).norm() < 1e-10 * std::max(1.0, s.norm()));
        }
    }
}

TEST_CASE("reduced Dresselhaus tensor values") {
    SurfaceDef cone = builtin_catalog("cone");
    SUBCASE("planar ring value") {
        Eigen::Matrix3d s = dresselhaus_tensor_ccs(cone, 0.0, 1.0, 1.0, 1.0, {{"phi", 0.0}});
        CHECK(s(0, 1) == doctest::Approx(-4.0).epsilon(1e-12));  // S_theta theta r r = -w^2
    }
    SUBCASE("vanishes at phi = pi/4") {
        Eigen::Matrix3d s =
            dresselhaus_tensor_ccs(cone, 0.3, 1.0, 1.0, 1.0, {{"phi", 0.78539816339744831}});
        CHECK(s.norm() < 1e-12);
    }
    SUBCASE("antisymmetry of ordered pairs") {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> fu(0.0, 6.28), fv(0.0, 2.0);
        for (int rep = 0; rep < 50; ++rep) {
            Eigen::Matrix3d s = dresselhaus_tensor_ccs(cone, fu(rng), fv(rng), 0.7, 1.0);
            CHECK((s + s.transpose()).norm() < 1e-10 * std::max(1.0, s.norm()));
        }
    }
}

TEST_CASE("general tensors match the cone closed forms across the angle sweep") {
    SurfaceDef cone = builtin_catalog("cone");
    for (double phi : {0.0, kPhi6, 0.78539816339744831, 1.0471975511965976, kPi2}) {
        ConeParams cp{1.0, phi, 2.0};
        ParamMap ov{{"phi", phi}};
        auto params = cone.resolve_params(ov);
        auto dom = cone.resolve_domain(params);
        auto us = grid_axis(dom.u_lo, dom.u_hi, 20, true);
        auto vs = grid_axis(dom.v_lo, dom.v_hi, 20, false);
        double worst = 0;
        for (double u : us)
            for (double v : vs) {
                GeoBundle b = compute_bundle(cone, u, v, params);
                ConeOracle o(cp, u, v);
                auto sig = pauli_ccs(b);
                auto sig_o = o.pauli_reduced();
                for (int i = 0; i < 3; ++i) worst = std::max(worst, (sig[i] - sig_o[i]).norm());
                worst = std::max(worst, (rashba_tensor_ccs(b, 1.0, 1.0) -
                                         o.rashba_reduced(1.0, 1.0)).norm());
                worst = std::max(worst, (dresselhaus_tensor_ccs(b, 1.0, 1.0) -
                                         o.dresselhaus_reduced(1.0, 1.0)).norm());
            }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("Dresselhaus components scale as cos(2 phi) at matched w") {
    SurfaceDef cone = builtin_catalog("cone");
    // pick phi and pi/2 - phi; hold w = R + r cos(phi) equal by adjusting r
    double phi1 = 0.4, phi2 = kPi2 - 0.4;
    double r1 = 1.0;
    double w_target = 1.0 + r1 * std::cos(phi1);
    double r2 = (w_target - 1.0) / std::cos(phi2);
    double theta = 0.9;
    Eigen::Matrix3d s1 = dresselhaus_tensor_ccs(cone, theta, r1, 1.0, 1.0, {{"phi", phi1}});
    Eigen::Matrix3d s2 = dresselhaus_tensor_ccs(cone, theta, r2, 1.0, 1.0, {{"phi", phi2}});
    CHECK((s1 + s2).norm() < 1e-10 * s1.norm());
    // pointwise sign flip across pi/4 at fixed (theta, r)
    Eigen::Matrix3d lo = dresselhaus_tensor_ccs(cone, 0.0, 1.0, 1.0, 1.0, {{"phi", 0.78539816339744831 - 0.2}});
    Eigen::Matrix3d hi = dresselhaus_tensor_ccs(cone, 0.0, 1.0, 1.0, 1.0, {{"phi", 0.78539816339744831 + 0.2}});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (std::abs(lo(i, j)) > 1e-12) CHECK(lo(i, j) * hi(i, j) < 0.0);
}

TEST_CASE("tensor transforms are exactly linear in the couplings") {
    SurfaceDef cone = builtin_catalog("cone");
    Eigen::Matrix3d s1 = rashba_tensor_ccs(cone, 0.4, 1.1, 1.0, 1.0);
    Eigen::Matrix3d s2 = rashba_tensor_ccs(cone, 0.4, 1.1, 2.0, 1.0);
    CHECK((s2 - 2.0 * s1).norm() == 0.0);
    Eigen::Matrix3d d1 = dresselhaus_tensor_ccs(cone, 0.4, 1.1, 1.0, 1.0);
    Eigen::Matrix3d d2 = dresselhaus_tensor_ccs(cone, 0.4, 1.1, 2.0, 1.0);
    CHECK((d2 - 2.0 * d1).norm() == 0.0);
}
