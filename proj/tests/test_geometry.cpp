#include <doctest.h>

#include <cmath>
#include <random>

#include "curvop/geometry.hpp"

using namespace curvop;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPhi6 = 0.52359877559829882;  // pi/6

// deterministic in-domain sample points, shared by the property tests
std::vector<std::pair<double, double>> sample_points(const SurfaceDef& def, int n, unsigned seed) {
    auto params = def.resolve_params({});
    auto dom = def.resolve_domain(params);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> fu(0.02, 0.98);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i)
        pts.emplace_back(dom.u_lo + fu(rng) * (dom.u_hi - dom.u_lo),
                         dom.v_lo + fu(rng) * (dom.v_hi - dom.v_lo));
    return pts;
}

}  // namespace

TEST_CASE("cone point data matches the closed forms") {
    SurfaceDef cone = builtin_catalog("cone");
    GeometryPoint p = frame_at(cone, 0.0, 1.0, {{"phi", kPhi6}});
    CHECK(p.g(0, 0) == doctest::Approx(3.482050807568878).epsilon(1e-12));
    CHECK(p.g(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(p.g(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.M == doctest::Approx(0.13397459621556132).epsilon(1e-12));
    CHECK(p.K == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    // Weingarten matrix diag(sin(phi)/w, 0) entrywise
    double w = 1.8660254037844388;
    CHECK(p.alpha(0, 0) == doctest::Approx(0.5 / w).epsilon(1e-12));
    CHECK(p.alpha(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.alpha(1, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.alpha(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // [d3, G^{ab}]_0 = diag(-2 sin(phi)/w^3, 0)
    CHECK(p.g1_inv(0, 0) == doctest::Approx(-0.15390309173472472).epsilon(1e-11));
    CHECK(p.g1_inv(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.g1_inv(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // frames
    CHECK(p.en.x() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.en.y() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(p.en.z() == doctest::Approx(-0.8660254037844387).epsilon(1e-12));
    CHECK(geometric_potential(p, 1.0, 0.5) == doctest::Approx(-0.0179491924311227).epsilon(1e-11));
}

TEST_CASE("planar ring is flat") {
    SurfaceDef ring = builtin_catalog("plane_ring");
    for (auto [u, v] : sample_points(ring, 10, 41)) {
        GeometryPoint p = frame_at(ring, u, v);
        CHECK(std::abs(p.M) < 1e-13);
        CHECK(std::abs(p.K) < 1e-13);
        CHECK(p.f_jet.coeff({0, 0, 0}) == 1.0);
        CHECK(std::abs(p.f_jet.coeff({0, 0, 1})) < 1e-13);
        CHECK(std::abs(p.f_jet.coeff({0, 0, 2})) < 1e-13);
        CHECK(p.f_jet.coeff({0, 0, 3}) == 0.0);
    }
}

TEST_CASE("frame orthonormality and metric definition on the catalog") {
    for (const auto& name : builtin_names()) {
        SurfaceDef def = builtin_catalog(name);
        auto params = def.resolve_params({});
        for (auto [u, v] : sample_points(def, 25, 17)) {
            GeometryPoint p = frame_at(def, u, v);
            CHECK(std::abs(p.e1.norm() - 1.0) < 1e-12);
            CHECK(std::abs(p.e2.norm() - 1.0) < 1e-12);
            CHECK(std::abs(p.en.norm() - 1.0) < 1e-12);
            CHECK(std::abs(p.en.dot(p.e1)) < 1e-12);
            CHECK(std::abs(p.en.dot(p.e2)) < 1e-12);
            // g_ab = d_a r . d_b r against finite differences of the embedding
            double h = 1e-5;
            auto at = [&](double uu, double vv) {
                auto r = eval_embedding<double>(def, uu, vv, params);
                return Eigen::Vector3d(r[0], r[1], r[2]);
            };
            Eigen::Vector3d ru = (at(u + h, v) - at(u - h, v)) / (2 * h);
            Eigen::Vector3d rv = (at(u, v + h) - at(u, v - h)) / (2 * h);
            double scale = p.g(0, 0) + p.g(1, 1);
            CHECK(std::abs(ru.dot(ru) - p.g(0, 0)) < 1e-6 * scale);
            CHECK(std::abs(ru.dot(rv) - p.g(0, 1)) < 1e-6 * scale);
            CHECK(std::abs(rv.dot(rv) - p.g(1, 1)) < 1e-6 * scale);
        }
    }
}

TEST_CASE("offset metric") {
    SurfaceDef cone = builtin_catalog("cone");
    GeometryPoint p = frame_at(cone, 0.3, 1.0, {{"phi", kPhi6}});
    SUBCASE("q3 = 0 reduces to the surface metric") {
        Eigen::Matrix3d G = offset_metric(p, 0.0);
        CHECK((G.topLeftCorner<2, 2>() - p.g).norm() < 1e-14);
        CHECK(G(2, 2) == 1.0);
        CHECK(G(0, 2) == 0.0);
        CHECK(G(2, 0) == 0.0);
    }
    SUBCASE("det G = f^2 det g") {
        Eigen::Matrix3d G = offset_metric(p, 0.1);
        double f = 1 + 2 * p.M * 0.1 + p.K * 0.01;
        CHECK(G.determinant() / p.g.determinant() ==
              doctest::Approx(f * f).epsilon(1e-12));
        CHECK(f * f == doctest::Approx(1.0543078077378063).epsilon(2e-7));  // 7-digit M input
    }
    SUBCASE("cylinder at q3 = -0.1") {
        SurfaceDef cyl = builtin_catalog("cylinder");
        GeometryPoint pc = frame_at(cyl, 0.0, 0.5);
        Eigen::Matrix3d G = offset_metric(pc, -0.1);
        CHECK(G(0, 0) == doctest::Approx(0.81).epsilon(1e-12));
    }
    SUBCASE("leaving the tubular neighbourhood") {
        // f = 1 + 2M q3 turns negative for q3 << -1/(2M)
        CHECK_THROWS_AS(offset_metric(p, -2.0 / (2.0 * p.M)), InvalidOffset);
    }
}

TEST_CASE("det(offset_metric) identity across the catalog") {
    for (const auto& name : builtin_names()) {
        SurfaceDef def = builtin_catalog(name);
        for (auto [u, v] : sample_points(def, 10, 23)) {
            GeometryPoint p = frame_at(def, u, v);
            double curv = std::abs(p.alpha(0, 0)) + std::abs(p.alpha(0, 1)) +
                          std::abs(p.alpha(1, 0)) + std::abs(p.alpha(1, 1));
            double radius = 1.0 / std::max(curv, 1e-6);
            for (double frac : {-0.1, -0.05, 0.05, 0.1}) {
                double q3 = frac * radius;
                double f = 1 + 2 * p.M * q3 + p.K * q3 * q3;
                if (!(f > 0.1)) continue;
                Eigen::Matrix3d G = offset_metric(p, q3);
                CHECK(G.determinant() ==
                      doctest::Approx(f * f * p.g.determinant()).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("reduced bracket identities on 100 random points per catalog surface") {
    for (const auto& name : builtin_names()) {
        SurfaceDef def = builtin_catalog(name);
        for (auto [u, v] : sample_points(def, 100, 5)) {
            GeometryPoint p = frame_at(def, u, v);
            double scale = std::max({1.0, std::abs(p.M), std::abs(p.K)});
            CHECK(std::abs(reduced_bracket(p, BracketField::F, 1) - 2 * p.M) < 1e-12 * scale);
            CHECK(std::abs(reduced_bracket(p, BracketField::F, 2) - 2 * p.K) < 1e-12 * scale);
            CHECK(std::abs(reduced_bracket(p, BracketField::InvSqrtF, 1) + p.M) < 1e-12 * scale);
            CHECK(std::abs(reduced_bracket(p, BracketField::InvSqrtF, 2) -
                           (3 * p.M * p.M - p.K)) < 1e-12 * scale);
        }
    }
    SurfaceDef cone = builtin_catalog("cone");
    GeometryPoint p = frame_at(cone, 0.0, 1.0, {{"phi", kPhi6}});
    CHECK(reduced_bracket(p, BracketField::F, 1) == doctest::Approx(0.26794919243112264));
    CHECK(reduced_bracket(p, BracketField::InvSqrtF, 1) == doctest::Approx(-0.13397459621556132));
    CHECK(reduced_bracket(p, BracketField::InvSqrtF, 2) == doctest::Approx(0.0538475772933681));
    CHECK_THROWS_AS(reduced_bracket(p, BracketField::F, 3), ConfigError);
}

TEST_CASE("g1_inv: analytic route agrees with the offset-metric jet route") {
    for (const auto& name : builtin_names()) {
        SurfaceDef def = builtin_catalog(name);
        auto params = def.resolve_params({});
        for (auto [u, v] : sample_points(def, 10, 77)) {
            GeoBundle b = compute_bundle(def, u, v, params);
            GeometryPoint p = frame_from_bundle(b);  // jet route
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(p.g1_inv(i, j) ==
                          doctest::Approx(b.g1inv[i][j].value()).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("umbilic and flat surfaces have zero geometric potential") {
    SurfaceDef sphere = builtin_catalog("sphere");
    for (auto [u, v] : sample_points(sphere, 20, 3)) {
        GeometryPoint p = frame_at(sphere, u, v);
        CHECK(std::abs(geometric_potential(p, 1.0, 0.5)) < 1e-12);
    }
    SurfaceDef ring = builtin_catalog("plane_ring");
    GeometryPoint p = frame_at(ring, 1.0, 1.0);
    CHECK(geometric_potential(p, 1.0, 0.5) == 0.0);
    CHECK_THROWS_AS(geometric_potential(p, 1.0, 0.0), ConfigError);
}

TEST_CASE("curvature derivatives from the bundle match hand differentiation on the cone") {
    SurfaceDef cone = builtin_catalog("cone");
    auto params = cone.resolve_params({{"phi", kPhi6}});
    GeoBundle b = compute_bundle(cone, 0.7, 1.2, params);
    GeometryPoint p = frame_from_bundle(b);
    double s = std::sin(kPhi6), c = std::cos(kPhi6);
    double w = 1.0 + 1.2 * c;
    CHECK(p.dM[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.dM[1] == doctest::Approx(-s * c / (2 * w * w)).epsilon(1e-10));
    CHECK(p.dK[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.dK[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // second tangential derivative of M needs fourth embedding derivatives
    CHECK(b.M.derivative({0, 2}) == doctest::Approx(s * c * c / (w * w * w)).epsilon(1e-10));
    CHECK(p.dg_inv[1](0, 0) == doctest::Approx(-2 * c / (w * w * w)).epsilon(1e-10));
    CHECK(p.d2g_inv[2](0, 0) == doctest::Approx(6 * c * c / (w * w * w * w)).epsilon(1e-10));
}

TEST_CASE("degenerate metrics are rejected") {
    SurfaceDef bad = parse_surface("x = v*cos(u); y = v*sin(u); z = 0; domain u in [0, 2*pi) periodic, v in [0, 1]");
    CHECK_THROWS_AS(frame_at(bad, 0.5, 0.0), DegenerateMetric);
    CHECK_THROWS_AS(grid_sample(bad, 4, 4, "M"), DegenerateMetric);
}

TEST_CASE("grid sampling") {
    SurfaceDef cone = builtin_catalog("cone");
    SUBCASE("axisymmetry of M") {
        GridField m = grid_sample(cone, 4, 4, "M");
        CHECK(m.values.size() == 16);
        for (int iv = 0; iv < 4; ++iv)
            for (int iu = 1; iu < 4; ++iu)
                CHECK(m.at(iu, iv) == doctest::Approx(m.at(0, iv)).epsilon(1e-12));
    }
    SUBCASE("V_g is monotone increasing in v toward zero") {
        GridField vg = grid_sample(cone, 3, 8, "Vg");
        for (int iv = 0; iv + 1 < 8; ++iv) {
            CHECK(vg.at(0, iv) < 0.0);
            CHECK(vg.at(0, iv + 1) > vg.at(0, iv));
        }
    }
    SUBCASE("flat surface samples to zero") {
        SurfaceDef ring = builtin_catalog("plane_ring");
        for (const char* q : {"M", "K", "Vg"}) {
            GridField f = grid_sample(ring, 3, 3, q);
            for (double x : f.values) CHECK(std::abs(x) < 1e-13);
        }
    }
    SUBCASE("periodic axis excludes the seam; closed axis includes endpoints") {
        GridField m = grid_sample(cone, 4, 4, "M");
        CHECK(m.us.front() == 0.0);
        CHECK(m.us.back() == doctest::Approx(2 * kPi * 3.0 / 4.0));
        CHECK(m.vs.front() == 0.0);
        CHECK(m.vs.back() == 2.0);
    }
}
