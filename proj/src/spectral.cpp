#include "curvop/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace curvop {

RadialProblem radial_reduce(const SurfaceDef& def, int m_angular, bool include_vg, int nodes,
                            const ParamMap& overrides, double hbar, double mass) {
    if (nodes < 16) throw ConfigError("radial problems need at least 16 nodes");
    auto params = def.resolve_params(overrides);
    auto dom = def.resolve_domain(params);

    // separation requires a metric independent of u (checked by sampling),
    // an orthogonal chart, and constant g_vv so the radial kinetic term has
    // a fixed coefficient
    auto us = grid_axis(dom.u_lo, dom.u_hi, 6, dom.periodic_u);
    auto vs_probe = grid_axis(dom.v_lo, dom.v_hi, 7, false);
    double gvv_ref = 0;
    bool first = true;
    for (double v : vs_probe) {
        double g11_ref = 0;
        for (size_t i = 0; i < us.size(); ++i) {
            GeoBundle b = compute_bundle(def, us[i], v, params);
            double scale = std::max({std::abs(b.g11.value()), std::abs(b.g22.value()), 1e-300});
            if (std::abs(b.g12.value()) > 1e-9 * scale)
                throw NotAxisymmetric("chart is not orthogonal (g12 != 0)");
            if (i == 0)
                g11_ref = b.g11.value();
            else if (std::abs(b.g11.value() - g11_ref) > 1e-9 * scale)
                throw NotAxisymmetric("metric depends on u; no e^{i m u} separation");
            if (first) {
                gvv_ref = b.g22.value();
                first = false;
            } else if (std::abs(b.g22.value() - gvv_ref) > 1e-9 * std::abs(gvv_ref)) {
                throw NotAxisymmetric("g_vv varies across the chart; the w^{-1/2} reduction needs a constant radial metric");
            }
        }
    }

    RadialProblem prob;
    prob.m_angular = m_angular;
    prob.nodes = nodes;
    prob.include_vg = include_vg;
    double lo = dom.v_lo, hi = dom.v_hi;
    prob.h = (hi - lo) / (nodes + 1);
    prob.grid.resize(nodes);
    prob.potential.resize(nodes);
    prob.weight.resize(nodes);
    double ke = hbar * hbar / (2.0 * mass);
    prob.kinetic = ke / gvv_ref;

    for (int i = 0; i < nodes; ++i) {
        double v = lo + (i + 1) * prob.h;
        prob.grid[i] = v;
        GeoBundle b = compute_bundle(def, 0.5 * (dom.u_lo + dom.u_hi), v, params);
        // w(v) = sqrt(g_uu); the substitution psi -> w^{-1/2} psi removes the
        // first-derivative term and adds (1/2) w''/w - (1/4) (w'/w)^2
        TJet wjet = sqrt(b.g11);
        double w = wjet.value();
        double wp = wjet.derivative({0, 1});
        double wpp = wjet.derivative({0, 2});
        double sym = (0.5 * wpp / w - 0.25 * (wp / w) * (wp / w)) / gvv_ref;
        double centrifugal = double(m_angular) * double(m_angular) / (w * w);
        double pot = ke * (centrifugal + sym);
        if (include_vg) {
            double M = b.M.value(), Kg = b.K.value();
            pot += -ke * (M * M - Kg);
        }
        prob.potential[i] = pot;
        prob.weight[i] = w;
    }
    return prob;
}

namespace {

// eigenvalue count below lambda via the Sturm sequence
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double lambda) {
    int n = int(diag.size());
    int count = 0;
    double q = diag[0] - lambda;
    if (q < 0) ++count;
    for (int i = 1; i < n; ++i) {
        double denom = q;
        if (std::abs(denom) < 1e-300) denom = (denom < 0 ? -1e-300 : 1e-300);
        q = diag[i] - lambda - off[i - 1] * off[i - 1] / denom;
        if (q < 0) ++count;
    }
    return count;
}

}  // namespace

std::vector<double> tridiag_lowest_eigenvalues(const std::vector<double>& diag,
                                               const std::vector<double>& off, int k) {
    int n = int(diag.size());
    if (k <= 0 || k > n) throw ConfigError("requested eigenvalue count out of range");
    // Gershgorin bounds
    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < n; ++i) {
        double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i < n - 1 ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) {
        double a = lo, b = hi;
        for (int iter = 0; iter < 200; ++iter) {
            double mid = 0.5 * (a + b);
            if (sturm_count(diag, off, mid) >= j + 1)
                b = mid;
            else
                a = mid;
            if (b - a <= 1e-13 * std::max(1.0, std::abs(mid)) + 1e-300) break;
        }
        out[j] = 0.5 * (a + b);
    }
    return out;
}

std::vector<double> tridiag_eigenvector(const std::vector<double>& diag,
                                        const std::vector<double>& off, double lambda) {
    // inverse iteration with a banded LU (partial pivoting adds one extra
    // superdiagonal)
    int n = int(diag.size());
    std::vector<double> x(n, 1.0);
    for (int i = 0; i < n; ++i) x[i] += 1e-3 * std::sin(2.7 * (i + 1));
    double shift = lambda * (1.0 + 1e-13) + 1e-300;

    auto solve = [&](std::vector<double>& rhs) {
        std::vector<double> a(n), b(n, 0.0), c(n, 0.0);  // diag, super1, super2
        std::vector<double> sub(n, 0.0);
        for (int i = 0; i < n; ++i) {
            a[i] = diag[i] - shift;
            if (i < n - 1) {
                b[i] = off[i];
                sub[i + 1] = off[i];
            }
        }
        for (int i = 0; i < n - 1; ++i) {
            if (std::abs(sub[i + 1]) > std::abs(a[i])) {
                std::swap(a[i], sub[i + 1]);
                std::swap(b[i], a[i + 1]);
                double t = (i + 1 < n - 1) ? b[i + 1] : 0.0;
                if (i + 1 < n - 1) b[i + 1] = c[i];
                c[i] = t;
                std::swap(rhs[i], rhs[i + 1]);
            }
            if (std::abs(a[i]) < 1e-300) a[i] = 1e-300;
            double m = sub[i + 1] / a[i];
            a[i + 1] -= m * b[i];
            if (i + 1 < n - 1) b[i + 1] -= m * c[i];
            rhs[i + 1] -= m * rhs[i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double v = rhs[i];
            if (i + 1 < n) v -= b[i] * rhs[i + 1];
            if (i + 2 < n) v -= c[i] * rhs[i + 2];
            if (std::abs(a[i]) < 1e-300) a[i] = 1e-300;
            rhs[i] = v / a[i];
        }
    };

    for (int iter = 0; iter < 3; ++iter) {
        solve(x);
        double norm = 0;
        for (double xi : x) norm += xi * xi;
        norm = std::sqrt(norm);
        for (double& xi : x) xi /= norm;
    }
    return x;
}

std::vector<double> solve_spectrum(const RadialProblem& prob, int k) {
    if (k >= prob.nodes) throw ConfigError("requested eigenvalue count must be < node count");
    std::vector<double> diag(prob.nodes), off(prob.nodes - 1);
    double t = prob.kinetic / (prob.h * prob.h);
    for (int i = 0; i < prob.nodes; ++i) diag[i] = 2.0 * t + prob.potential[i];
    for (int i = 0; i + 1 < prob.nodes; ++i) off[i] = -t;
    return tridiag_lowest_eigenvalues(diag, off, k);
}

}  // namespace curvop
