#include <doctest.h>

#include <cmath>

#include "curvop/spectral.hpp"

using namespace curvop;

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("cylinder spectrum reproduces the Dirichlet modes") {
    SurfaceDef cyl = builtin_catalog("cylinder");
    ParamMap ov{{"l", kPi}};
    RadialProblem bare = radial_reduce(cyl, 0, false, 2000, ov, 1.0, 0.5);
    auto ev = solve_spectrum(bare, 3);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(ev[1] == doctest::Approx(4.0).epsilon(1e-4));
    CHECK(ev[2] == doctest::Approx(9.0).epsilon(1e-4));

    RadialProblem with_vg = radial_reduce(cyl, 0, true, 2000, ov, 1.0, 0.5);
    auto ev_vg = solve_spectrum(with_vg, 3);
    CHECK(ev_vg[0] == doctest::Approx(0.75).epsilon(2e-4));
    CHECK(ev_vg[1] == doctest::Approx(3.75).epsilon(1e-4));
    CHECK(ev_vg[2] == doctest::Approx(8.75).epsilon(1e-4));
    // a constant geometric potential shifts every level identically
    for (int n = 0; n < 3; ++n) CHECK(ev_vg[n] - ev[n] == doctest::Approx(-0.25).epsilon(1e-8));
}

TEST_CASE("second-order convergence of the discretization") {
    SurfaceDef cyl = builtin_catalog("cylinder");
    ParamMap ov{{"l", kPi}};
    auto e1 = solve_spectrum(radial_reduce(cyl, 0, false, 500, ov, 1.0, 0.5), 1);
    auto e2 = solve_spectrum(radial_reduce(cyl, 0, false, 1000, ov, 1.0, 0.5), 1);
    double err1 = std::abs(e1[0] - 1.0), err2 = std::abs(e2[0] - 1.0);
    CHECK(err1 / err2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("eigenvalues increase with the angular mode index") {
    SurfaceDef cone = builtin_catalog("cone");
    double prev = -1e300;
    for (int m : {0, 1, 2, 3}) {
        auto ev = solve_spectrum(radial_reduce(cone, m, true, 400, {}, 1.0, 0.5), 1);
        CHECK(ev[0] > prev);
        prev = ev[0];
    }
}

TEST_CASE("eigenvectors are orthogonal under the w(r) dr weight") {
    SurfaceDef cone = builtin_catalog("cone");
    RadialProblem prob = radial_reduce(cone, 1, true, 400, {}, 1.0, 0.5);
    std::vector<double> diag(prob.nodes), off(prob.nodes - 1);
    double t = prob.kinetic / (prob.h * prob.h);
    for (int i = 0; i < prob.nodes; ++i) diag[i] = 2.0 * t + prob.potential[i];
    for (int i = 0; i + 1 < prob.nodes; ++i) off[i] = -t;
    auto evs = tridiag_lowest_eigenvalues(diag, off, 4);
    std::vector<std::vector<double>> radial;
    for (double lambda : evs) {
        auto u = tridiag_eigenvector(diag, off, lambda);
        // the radial wavefunction is phi = w^{-1/2} u; orthogonality under
        // w dr is plain orthogonality of the symmetrized vectors
        std::vector<double> phi(u.size());
        for (size_t i = 0; i < u.size(); ++i) phi[i] = u[i] / std::sqrt(prob.weight[i]);
        radial.push_back(phi);
    }
    for (size_t a = 0; a < radial.size(); ++a)
        for (size_t b = 0; b < radial.size(); ++b) {
            double dot = 0, na = 0, nb = 0;
            for (int i = 0; i < prob.nodes; ++i) {
                dot += radial[a][i] * radial[b][i] * prob.weight[i] * prob.h;
                na += radial[a][i] * radial[a][i] * prob.weight[i] * prob.h;
                nb += radial[b][i] * radial[b][i] * prob.weight[i] * prob.h;
            }
            double normalized = dot / std::sqrt(na * nb);
            if (a == b)
                CHECK(normalized == doctest::Approx(1.0).epsilon(1e-12));
            else
                CHECK(std::abs(normalized) < 1e-10);
        }
}

TEST_CASE("eigenvector residuals are small") {
    SurfaceDef cyl = builtin_catalog("cylinder");
    RadialProblem prob = radial_reduce(cyl, 0, false, 300, {{"l", kPi}}, 1.0, 0.5);
    std::vector<double> diag(prob.nodes), off(prob.nodes - 1);
    double t = prob.kinetic / (prob.h * prob.h);
    for (int i = 0; i < prob.nodes; ++i) diag[i] = 2.0 * t + prob.potential[i];
    for (int i = 0; i + 1 < prob.nodes; ++i) off[i] = -t;
    auto evs = tridiag_lowest_eigenvalues(diag, off, 2);
    for (double lambda : evs) {
        auto x = tridiag_eigenvector(diag, off, lambda);
        double worst = 0;
        for (int i = 0; i < prob.nodes; ++i) {
            double ax = diag[i] * x[i];
            if (i > 0) ax += off[i - 1] * x[i - 1];
            if (i + 1 < prob.nodes) ax += off[i] * x[i + 1];
            worst = std::max(worst, std::abs(ax - lambda * x[i]));
        }
        CHECK(worst < 1e-7 * std::abs(lambda));
    }
}

TEST_CASE("the symmetrizing substitution matches a direct non-symmetric discretization") {
    // discretize the radial operator with the first-derivative term kept and
    // central differences, then balance it to a symmetric tridiagonal; both
    // discretizations must converge to the same spectrum
    SurfaceDef cone = builtin_catalog("cone");
    int nodes = 4000;
    RadialProblem prob = radial_reduce(cone, 0, true, nodes, {}, 1.0, 0.5);
    auto sym = solve_spectrum(prob, 3);

    auto params = cone.resolve_params({});
    auto dom = cone.resolve_domain(params);
    double h = (dom.v_hi - dom.v_lo) / (nodes + 1);
    std::vector<double> diag(nodes), upper(nodes), lower(nodes);
    for (int i = 0; i < nodes; ++i) {
        double v = dom.v_lo + (i + 1) * h;
        GeoBundle b = compute_bundle(cone, 0.0, v, params);
        TJet wjet = sqrt(b.g11);
        double w = wjet.value(), wp = wjet.derivative({0, 1});
        double m = b.M.value(), kg = b.K.value();
        double vg = -(m * m - kg);
        diag[i] = 2.0 / (h * h) + vg;
        upper[i] = -1.0 / (h * h) - (wp / w) / (2 * h);
        lower[i] = -1.0 / (h * h) + (wp / w) / (2 * h);
    }
    // balance: the similar symmetric matrix has off-diagonals sqrt(u_i l_{i+1})
    std::vector<double> off(nodes - 1);
    for (int i = 0; i + 1 < nodes; ++i) off[i] = -std::sqrt(upper[i] * lower[i + 1]);
    auto direct = tridiag_lowest_eigenvalues(diag, off, 3);
    for (int n = 0; n < 3; ++n)
        CHECK(direct[n] == doctest::Approx(sym[n]).epsilon(1e-6));
}

TEST_CASE("separation preconditions") {
    SurfaceDef skew = parse_surface(
        "x = u; y = v; z = 0.2*sin(u)*v; domain u in [0, 6.283185307179586) periodic, v in [0.2, 1]");
    CHECK_THROWS_AS(radial_reduce(skew, 0, false, 64, {}, 1.0, 0.5), NotAxisymmetric);
    SurfaceDef cat = builtin_catalog("catenoid");  // axisymmetric but g_vv varies
    CHECK_THROWS_AS(radial_reduce(cat, 0, false, 64, {}, 1.0, 0.5), NotAxisymmetric);
    SurfaceDef cyl = builtin_catalog("cylinder");
    CHECK_THROWS_AS(radial_reduce(cyl, 0, false, 8, {}, 1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(solve_spectrum(radial_reduce(cyl, 0, false, 32, {}, 1.0, 0.5), 32), ConfigError);
}

TEST_CASE("sphere radial problem uses the constant radial metric") {
    SurfaceDef sphere = builtin_catalog("sphere");
    RadialProblem prob = radial_reduce(sphere, 0, false, 200, {{"R", 2.0}}, 1.0, 0.5);
    CHECK(prob.kinetic == doctest::Approx(1.0 / 4.0).epsilon(1e-10));  // (hbar^2/2m)/R^2
    auto ev = solve_spectrum(prob, 1);
    CHECK(ev[0] > 0.0);
}
