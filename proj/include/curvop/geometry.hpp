#ifndef CURVOP_GEOMETRY_HPP
#define CURVOP_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "curvop/jet.hpp"
#include "curvop/surface.hpp"

namespace curvop {

// All tangential-jet data at one chart point. Entries are Jet<2,4> in the
// chart variables; coefficients of a derived quantity are valid up to the
// degree its construction allows (metric entries to 3, curvatures to 2),
// which covers every derivative the operator assembly extracts.
struct GeoBundle {
    double u = 0, v = 0;
    TJet uj, vj;  // seeded coordinates

    std::array<TJet, 3> r, ru, rv, ruu, ruv, rvv;
    std::array<TJet, 3> e1, e2, en;
    TJet g11, g12, g22, detg, sqrtg;
    std::array<std::array<TJet, 2>, 2> ginv;
    TJet h11, h12, h22;
    std::array<std::array<TJet, 2>, 2> alpha;
    TJet M, K, three_m2_minus_k;
    std::array<std::array<TJet, 2>, 2> g1inv;  // [d3, G^{ab}] at q3 = 0
    std::array<std::array<TJet, 3>, 3> jac;    // dx^s/dq^i at q3 = 0 (s row, i col)
    std::array<std::array<TJet, 3>, 3> jac_inv;  // dq^i/dx^s (i row, s col)
    std::array<std::array<TJet, 3>, 3> rashba_unit;       // reduced S_ij at alpha/hbar = 1
    std::array<std::array<TJet, 3>, 3> dresselhaus_unit;  // reduced S_iijj at beta/hbar^3 = 1
};

GeoBundle compute_bundle(const SurfaceDef& def, double u, double v, const ParamMap& params_resolved);

// Pointwise geometric data (plain numbers extracted from the bundle).
struct GeometryPoint {
    double u = 0, v = 0;
    Eigen::Vector3d r, e1, e2, en;
    Eigen::Matrix2d g, g_inv, h, alpha, g1_inv;
    double M = 0, K = 0;
    Jet3 f_jet;  // rescaled factor as a jet in q3 (variable index 2)
    std::array<Eigen::Matrix2d, 2> dg_inv;   // d/du, d/dv of g^{ab}
    std::array<Eigen::Matrix2d, 3> d2g_inv;  // d2/du2, d2/dudv, d2/dv2
    Eigen::Vector2d dM, dK;
};

GeometryPoint frame_at(const SurfaceDef& def, double u, double v, const ParamMap& overrides = {});
GeometryPoint frame_from_bundle(const GeoBundle& b);

// Metric of the offset surface at normal distance q3 (3x3, block structure).
Eigen::Matrix3d offset_metric(const GeometryPoint& pt, double q3);

enum class BracketField { F, InvSqrtF };

// n-fold reduced bracket [d3, .. [d3, field]..]_0 computed from the f-jet.
double reduced_bracket(const GeometryPoint& pt, BracketField field, int order);

double geometric_potential(const GeometryPoint& pt, double hbar, double mass);

// --- grid sampling ---

struct GridField {
    std::string name;
    int nu = 0, nv = 0;
    std::vector<double> us, vs;        // axis values
    std::vector<double> values;        // row-major: iu * nv + iv
    double at(int iu, int iv) const { return values[size_t(iu) * nv + iv]; }
};

// Uniform axis over [lo, hi]; periodic axes exclude the duplicate seam point.
std::vector<double> grid_axis(double lo, double hi, int n, bool periodic);

// Named scalar quantities available for sampling.
std::vector<std::string> geometry_quantities();

double extract_quantity(const GeometryPoint& pt, const std::string& quantity, double hbar, double mass);

GridField grid_sample(const SurfaceDef& def, int nu, int nv, const std::string& quantity,
                      const ParamMap& overrides = {}, double hbar = 1.0, double mass = 0.5);

}  // namespace curvop

#endif
