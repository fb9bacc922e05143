#include "curvop/spin.hpp"

namespace curvop {

namespace {
using namespace std::complex_literals;

std::array<SpinMatrix, 4> make_pauli() {
    std::array<SpinMatrix, 4> p;
    p[0] << 0, 1, 1, 0;
    p[1] << 0, -1i, 1i, 0;
    p[2] << 1, 0, 0, -1;
    p[3] << 1, 0, 0, 1;
    return p;
}

void check_jacobian(const GeoBundle& b) {
    double scale = 0;
    for (int s = 0; s < 3; ++s)
        for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(b.jac[s][i].value()));
    if (!(std::abs(b.sqrtg.value()) > 1e-12 * scale * scale * scale))
        throw SingularJacobian("embedding Jacobian is singular at (u,v) = (" + std::to_string(b.u) +
                               ", " + std::to_string(b.v) + ")");
}

}  // namespace

const SpinMatrix& pauli(int s) {
    static const std::array<SpinMatrix, 4> p = make_pauli();
    return p[s];
}

std::array<SpinMatrix, 3> pauli_ccs(const GeoBundle& b) {
    check_jacobian(b);
    std::array<SpinMatrix, 3> out;
    for (int i = 0; i < 3; ++i) {
        SpinMatrix m = SpinMatrix::Zero();
        for (int s = 0; s < 3; ++s) m += b.jac_inv[i][s].value() * pauli(s);
        out[i] = m;
    }
    return out;
}

std::array<SpinMatrix, 3> pauli_ccs(const SurfaceDef& def, double u, double v,
                                    const ParamMap& overrides) {
    return pauli_ccs(compute_bundle(def, u, v, def.resolve_params(overrides)));
}

Eigen::Matrix3d rashba_tensor_ccs(const GeoBundle& b, double alpha_R, double hbar) {
    check_jacobian(b);
    Eigen::Matrix3d s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s(i, j) = alpha_R / hbar * b.rashba_unit[i][j].value();
    return s;
}

Eigen::Matrix3d rashba_tensor_ccs(const SurfaceDef& def, double u, double v, double alpha_R,
                                  double hbar, const ParamMap& overrides) {
    return rashba_tensor_ccs(compute_bundle(def, u, v, def.resolve_params(overrides)), alpha_R, hbar);
}

Eigen::Matrix3d dresselhaus_tensor_ccs(const GeoBundle& b, double beta_D, double hbar) {
    check_jacobian(b);
    Eigen::Matrix3d s;
    double scale = beta_D / (hbar * hbar * hbar);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s(i, j) = scale * b.dresselhaus_unit[i][j].value();
    return s;
}

Eigen::Matrix3d dresselhaus_tensor_ccs(const SurfaceDef& def, double u, double v, double beta_D,
                                       double hbar, const ParamMap& overrides) {
    return dresselhaus_tensor_ccs(compute_bundle(def, u, v, def.resolve_params(overrides)), beta_D,
                                  hbar);
}

}  // namespace curvop
