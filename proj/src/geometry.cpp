#include "curvop/geometry.hpp"

#include <cmath>

namespace curvop {

namespace {

TJet dot3(const std::array<TJet, 3>& a, const std::array<TJet, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::array<TJet, 3> cross3(const std::array<TJet, 3>& a, const std::array<TJet, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// 3x3 inverse of the embedding Jacobian via the adjugate.
std::array<std::array<TJet, 3>, 3> invert3(const std::array<std::array<TJet, 3>, 3>& m,
                                           const TJet& det) {
    auto cof = [&](int r0, int c0, int r1, int c1) { return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]; };
    std::array<std::array<TJet, 3>, 3> inv;
    TJet idet = TJet::constant(1.0) / det;
    inv[0][0] = cof(1, 1, 2, 2) * idet;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * idet;
    inv[0][2] = cof(0, 1, 1, 2) * idet;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * idet;
    inv[1][1] = cof(0, 0, 2, 2) * idet;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * idet;
    inv[2][0] = cof(1, 0, 2, 1) * idet;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * idet;
    inv[2][2] = cof(0, 0, 1, 1) * idet;
    return inv;
}

}  // namespace

GeoBundle compute_bundle(const SurfaceDef& def, double u, double v, const ParamMap& params) {
    GeoBundle b;
    b.u = u;
    b.v = v;
    b.uj = TJet::seed(0, u);
    b.vj = TJet::seed(1, v);
    b.r = eval_embedding<TJet>(def, b.uj, b.vj, params);
    for (int i = 0; i < 3; ++i) {
        b.ru[i] = jet_derivative(b.r[i], 0);
        b.rv[i] = jet_derivative(b.r[i], 1);
        b.ruu[i] = jet_derivative(b.ru[i], 0);
        b.ruv[i] = jet_derivative(b.ru[i], 1);
        b.rvv[i] = jet_derivative(b.rv[i], 1);
    }
    b.g11 = dot3(b.ru, b.ru);
    b.g12 = dot3(b.ru, b.rv);
    b.g22 = dot3(b.rv, b.rv);
    b.detg = b.g11 * b.g22 - b.g12 * b.g12;

    double scale = b.g11.value() + b.g22.value();
    if (!(b.detg.value() > 1e-14 * scale * scale))
        throw DegenerateMetric("degenerate metric at (u,v) = (" + std::to_string(u) + ", " +
                                   std::to_string(v) + ")",
                               u, v);

    b.sqrtg = sqrt(b.detg);
    TJet idet = TJet::constant(1.0) / b.detg;
    b.ginv[0][0] = b.g22 * idet;
    b.ginv[0][1] = -b.g12 * idet;
    b.ginv[1][0] = b.ginv[0][1];
    b.ginv[1][1] = b.g11 * idet;

    TJet inv_norm_u = TJet::constant(1.0) / sqrt(b.g11);
    TJet inv_norm_v = TJet::constant(1.0) / sqrt(b.g22);
    auto c = cross3(b.ru, b.rv);
    TJet inv_norm_c = TJet::constant(1.0) / b.sqrtg;  // |ru x rv| = sqrt(det g)
    for (int i = 0; i < 3; ++i) {
        b.e1[i] = b.ru[i] * inv_norm_u;
        b.e2[i] = b.rv[i] * inv_norm_v;
        b.en[i] = c[i] * inv_norm_c;
    }

    b.h11 = dot3(b.en, b.ruu);
    b.h12 = dot3(b.en, b.ruv);
    b.h22 = dot3(b.en, b.rvv);

    // Weingarten matrix, entered as printed (h21 = h12, g21 = g12 for the
    // symmetric tensors produced here)
    const TJet& h21 = b.h12;
    const TJet& g21 = b.g12;
    b.alpha[0][0] = (b.g12 * h21 - b.g22 * b.h11) * idet;
    b.alpha[0][1] = (g21 * b.h11 - b.g11 * h21) * idet;
    b.alpha[1][0] = (b.g12 * b.h22 - b.g22 * b.h12) * idet;
    b.alpha[1][1] = (b.g12 * h21 - b.g11 * b.h22) * idet;

    b.M = (b.alpha[0][0] + b.alpha[1][1]) * 0.5;
    b.K = b.alpha[0][0] * b.alpha[1][1] - b.alpha[0][1] * b.alpha[1][0];
    b.three_m2_minus_k = b.M * b.M * 3.0 - b.K;

    // g1^{ab} = [d3, G^{ab}]_0 = -(g^-1 (alpha g + g alpha^T) g^-1)^{ab}
    std::array<std::array<TJet, 2>, 2> gm{{{b.g11, b.g12}, {b.g12, b.g22}}};
    std::array<std::array<TJet, 2>, 2> ag, gat, sum;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            ag[i][j] = b.alpha[i][0] * gm[0][j] + b.alpha[i][1] * gm[1][j];
            gat[i][j] = gm[i][0] * b.alpha[j][0] + gm[i][1] * b.alpha[j][1];
            sum[i][j] = ag[i][j] + gat[i][j];
        }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            TJet acc;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) acc += b.ginv[i][k] * sum[k][l] * b.ginv[l][j];
            b.g1inv[i][j] = -acc;
        }

    // embedding Jacobian of R(q1,q2,q3) = r + q3 en at q3 = 0; columns are
    // d/dq1, d/dq2, d/dq3
    for (int s = 0; s < 3; ++s) {
        b.jac[s][0] = b.ru[s];
        b.jac[s][1] = b.rv[s];
        b.jac[s][2] = b.en[s];
    }
    // det J = (ru x rv) . en = sqrt(det g) > 0 given the metric check above
    b.jac_inv = invert3(b.jac, b.sqrtg);

    // reduced Rashba / Dresselhaus tensors at unit coupling; the Cartesian
    // tensors have the cyclic +/- pattern S_xy = S_yz = S_zx = +1
    int sgn[3][3] = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            TJet sr, sd;
            for (int s = 0; s < 3; ++s)
                for (int t = 0; t < 3; ++t) {
                    if (sgn[s][t] == 0) continue;
                    TJet w = b.jac[s][i] * b.jac[t][j];
                    sr += w * double(sgn[s][t]);
                    sd += w * w * double(sgn[s][t]);
                }
            b.rashba_unit[i][j] = sr;
            b.dresselhaus_unit[i][j] = sd;
        }
    return b;
}

GeometryPoint frame_from_bundle(const GeoBundle& b) {
    GeometryPoint p;
    p.u = b.u;
    p.v = b.v;
    for (int i = 0; i < 3; ++i) {
        p.r[i] = b.r[i].value();
        p.e1[i] = b.e1[i].value();
        p.e2[i] = b.e2[i].value();
        p.en[i] = b.en[i].value();
    }
    p.g << b.g11.value(), b.g12.value(), b.g12.value(), b.g22.value();
    p.g_inv << b.ginv[0][0].value(), b.ginv[0][1].value(), b.ginv[1][0].value(), b.ginv[1][1].value();
    p.h << b.h11.value(), b.h12.value(), b.h12.value(), b.h22.value();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) p.alpha(i, j) = b.alpha[i][j].value();
    p.M = b.M.value();
    p.K = b.K.value();

    // f = 1 + 2 M q3 + K q3^2 as a jet in the normal variable
    p.f_jet = Jet3::constant(1.0);
    p.f_jet[jet_detail::tables<3, 3>.find({0, 0, 1})] = 2.0 * p.M;
    p.f_jet[jet_detail::tables<3, 3>.find({0, 0, 2})] = p.K;

    // g1^{ab} through the q3-seeded jet route: invert G_ab(q3) of the offset
    // metric and differentiate at q3 = 0
    Eigen::Matrix2d gm = p.g;
    Eigen::Matrix2d lin = p.alpha * gm + gm * p.alpha.transpose();
    Eigen::Matrix2d quad = p.alpha * gm * p.alpha.transpose();
    Jet3 q3 = Jet3::seed(2, 0.0);
    std::array<std::array<Jet3, 2>, 2> G;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            G[i][j] = Jet3::constant(gm(i, j)) + q3 * lin(i, j) + q3 * q3 * quad(i, j);
    Jet3 detG = G[0][0] * G[1][1] - G[0][1] * G[1][0];
    Jet3 idetG = Jet3::constant(1.0) / detG;
    std::array<int, 3> d3{0, 0, 1};
    p.g1_inv(0, 0) = (G[1][1] * idetG).derivative(d3);
    p.g1_inv(0, 1) = (-G[0][1] * idetG).derivative(d3);
    p.g1_inv(1, 0) = (-G[1][0] * idetG).derivative(d3);
    p.g1_inv(1, 1) = (G[0][0] * idetG).derivative(d3);

    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                std::array<int, 2> d1{a == 0 ? 1 : 0, a == 0 ? 0 : 1};
                p.dg_inv[a](i, j) = b.ginv[i][j].derivative(d1);
            }
    std::array<std::array<int, 2>, 3> second{{{2, 0}, {1, 1}, {0, 2}}};
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) p.d2g_inv[k](i, j) = b.ginv[i][j].derivative(second[k]);
    p.dM << b.M.derivative({1, 0}), b.M.derivative({0, 1});
    p.dK << b.K.derivative({1, 0}), b.K.derivative({0, 1});
    return p;
}

GeometryPoint frame_at(const SurfaceDef& def, double u, double v, const ParamMap& overrides) {
    return frame_from_bundle(compute_bundle(def, u, v, def.resolve_params(overrides)));
}

Eigen::Matrix3d offset_metric(const GeometryPoint& pt, double q3) {
    double f = 1.0 + 2.0 * pt.M * q3 + pt.K * q3 * q3;
    if (!(f > 0))
        throw InvalidOffset("offset q3 = " + std::to_string(q3) + " leaves the tubular neighbourhood (f <= 0)");
    Eigen::Matrix2d gm = pt.g;
    Eigen::Matrix2d lin = pt.alpha * gm + gm * pt.alpha.transpose();
    Eigen::Matrix2d quad = pt.alpha * gm * pt.alpha.transpose();
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    G.topLeftCorner<2, 2>() = gm + q3 * lin + q3 * q3 * quad;
    G(2, 2) = 1.0;
    return G;
}

double reduced_bracket(const GeometryPoint& pt, BracketField field, int order) {
    if (order != 1 && order != 2) throw ConfigError("reduced_bracket order must be 1 or 2");
    Jet3 f = pt.f_jet;
    Jet3 target = (field == BracketField::F) ? f : Jet3::constant(1.0) / sqrt(f);
    std::array<int, 3> mi{0, 0, order};
    return target.derivative(mi);
}

double geometric_potential(const GeometryPoint& pt, double hbar, double mass) {
    if (!(mass > 0)) throw ConfigError("mass must be positive");
    return -hbar * hbar / (2.0 * mass) * (pt.M * pt.M - pt.K);
}

std::vector<double> grid_axis(double lo, double hi, int n, bool periodic) {
    std::vector<double> xs(n);
    if (periodic) {
        double step = (hi - lo) / n;
        for (int i = 0; i < n; ++i) xs[i] = lo + i * step;
    } else {
        double step = (hi - lo) / (n - 1);
        for (int i = 0; i < n; ++i) xs[i] = lo + i * step;
        xs[n - 1] = hi;
    }
    return xs;
}

std::vector<std::string> geometry_quantities() {
    return {"M",      "K",      "Vg",     "f0",     "f1",     "f2",      "f3",     "g11",
            "g12",    "g22",    "detg",   "sqrtg",  "ginv11", "ginv12",  "ginv22", "g1_11",
            "g1_12",  "g1_22",  "h11",    "h12",    "h22",    "alpha11", "alpha12", "alpha21",
            "alpha22", "en_x",  "en_y",   "en_z",   "e1_x",   "e1_y",    "e1_z",   "e2_x",
            "e2_y",   "e2_z",   "x",      "y",      "z"};
}

double extract_quantity(const GeometryPoint& p, const std::string& q, double hbar, double mass) {
    auto fcoeff = [&](int k) {
        std::array<int, 3> mi{0, 0, k};
        return p.f_jet.coeff(mi);
    };
    if (q == "M") return p.M;
    if (q == "K") return p.K;
    if (q == "Vg") return geometric_potential(p, hbar, mass);
    if (q == "f0") return fcoeff(0);
    if (q == "f1") return fcoeff(1);
    if (q == "f2") return fcoeff(2);
    if (q == "f3") return fcoeff(3);
    if (q == "g11") return p.g(0, 0);
    if (q == "g12") return p.g(0, 1);
    if (q == "g22") return p.g(1, 1);
    if (q == "detg") return p.g.determinant();
    if (q == "sqrtg") return std::sqrt(p.g.determinant());
    if (q == "ginv11") return p.g_inv(0, 0);
    if (q == "ginv12") return p.g_inv(0, 1);
    if (q == "ginv22") return p.g_inv(1, 1);
    if (q == "g1_11") return p.g1_inv(0, 0);
    if (q == "g1_12") return p.g1_inv(0, 1);
    if (q == "g1_22") return p.g1_inv(1, 1);
    if (q == "h11") return p.h(0, 0);
    if (q == "h12") return p.h(0, 1);
    if (q == "h22") return p.h(1, 1);
    if (q == "alpha11") return p.alpha(0, 0);
    if (q == "alpha12") return p.alpha(0, 1);
    if (q == "alpha21") return p.alpha(1, 0);
    if (q == "alpha22") return p.alpha(1, 1);
    if (q == "en_x") return p.en.x();
    if (q == "en_y") return p.en.y();
    if (q == "en_z") return p.en.z();
    if (q == "e1_x") return p.e1.x();
    if (q == "e1_y") return p.e1.y();
    if (q == "e1_z") return p.e1.z();
    if (q == "e2_x") return p.e2.x();
    if (q == "e2_y") return p.e2.y();
    if (q == "e2_z") return p.e2.z();
    if (q == "x") return p.r.x();
    if (q == "y") return p.r.y();
    if (q == "z") return p.r.z();
    throw ConfigError("unknown geometry quantity '" + q + "'");
}

GridField grid_sample(const SurfaceDef& def, int nu, int nv, const std::string& quantity,
                      const ParamMap& overrides, double hbar, double mass) {
    if (nu < 2 || nv < 2) throw ConfigError("grid sizes must be >= 2");
    auto params = def.resolve_params(overrides);
    auto dom = def.resolve_domain(params);
    GridField gf;
    gf.name = quantity;
    gf.nu = nu;
    gf.nv = nv;
    gf.us = grid_axis(dom.u_lo, dom.u_hi, nu, dom.periodic_u);
    gf.vs = grid_axis(dom.v_lo, dom.v_hi, nv, false);
    gf.values.resize(size_t(nu) * nv);
    for (int iu = 0; iu < nu; ++iu)
        for (int iv = 0; iv < nv; ++iv) {
            GeometryPoint p = frame_from_bundle(compute_bundle(def, gf.us[iu], gf.vs[iv], params));
            gf.values[size_t(iu) * nv + iv] = extract_quantity(p, quantity, hbar, mass);
        }
    return gf;
}

}  // namespace curvop
