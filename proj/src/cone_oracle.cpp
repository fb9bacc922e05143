#include "curvop/cone_oracle.hpp"

#include <cmath>

namespace curvop {

namespace {

using Complex = std::complex<double>;
const Complex I(0.0, 1.0);

void check_domain(const ConeParams& p, double r) {
    if (r < -1e-12 || r > p.l + 1e-12)
        throw OutOfDomain("r = " + std::to_string(r) + " outside [0, l]");
    if (!(p.R + r * std::cos(p.phi) > 0)) throw OutOfDomain("w = R + r cos(phi) must be positive");
}

SpinMatrix combo(double x, double y, double z) {
    return x * pauli(0) + y * pauli(1) + z * pauli(2);
}

TermValue spin_value(const SpinMatrix& m) {
    TermValue tv;
    tv.spin = m;
    return tv;
}

TermValue scalar_value(Complex z) {
    TermValue tv;
    tv.scalar = z;
    return tv;
}

TermValue vec_value(const Eigen::Vector3cd& v) {
    TermValue tv;
    tv.vec = v;
    return tv;
}

}  // namespace

ConeOracle::ConeOracle(const ConeParams& p, double theta, double r)
    : p_(p), theta_(theta), r_(r) {
    check_domain(p, r);
    s_ = std::sin(p.phi);
    c_ = std::cos(p.phi);
    st_ = std::sin(theta);
    ct_ = std::cos(theta);
    w_ = p.R + r * c_;
}

double ConeOracle::mean_curvature() const { return s_ / (2.0 * w_); }
double ConeOracle::gauss_curvature() const { return 0.0; }
double ConeOracle::f(double q3) const { return 1.0 + s_ / w_ * q3; }

Eigen::Matrix2d ConeOracle::metric() const {
    Eigen::Matrix2d g;
    g << w_ * w_, 0, 0, 1;
    return g;
}

Eigen::Matrix2d ConeOracle::metric_inv() const {
    Eigen::Matrix2d g;
    g << 1.0 / (w_ * w_), 0, 0, 1;
    return g;
}

Eigen::Matrix3d ConeOracle::offset_metric(double q3) const {
    double W = w_ + q3 * s_;
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    G(0, 0) = W * W;
    G(1, 1) = 1;
    G(2, 2) = 1;
    return G;
}

Eigen::Matrix2d ConeOracle::g1_inv() const {
    Eigen::Matrix2d g1;
    g1 << -2.0 * s_ / (w_ * w_ * w_), 0, 0, 0;
    return g1;
}

double ConeOracle::geometric_potential(double hbar, double mass) const {
    return -hbar * hbar / (8.0 * mass) * s_ * s_ / (w_ * w_);
}

Eigen::Vector3d ConeOracle::e_theta() const { return {-st_, ct_, 0.0}; }
Eigen::Vector3d ConeOracle::e_r() const { return {c_ * ct_, c_ * st_, s_}; }
Eigen::Vector3d ConeOracle::e_n() const { return {s_ * ct_, s_ * st_, -c_}; }

Eigen::Vector3cd ConeOracle::geometric_momentum(double hbar) const {
    return I * hbar * s_ / (2.0 * w_) * e_n().cast<Complex>();
}

Eigen::Vector3cd ConeOracle::geometric_oam(double hbar) const {
    return I * hbar * (p_.R * c_ + r_) * s_ / (2.0 * w_) * e_theta().cast<Complex>();
}

std::array<SpinMatrix, 3> ConeOracle::pauli_reduced() const {
    std::array<SpinMatrix, 3> out;
    out[0] = (1.0 / w_) * combo(-st_, ct_, 0.0);
    out[1] = combo(c_ * ct_, c_ * st_, s_);
    out[2] = combo(s_ * ct_, s_ * st_, -c_);
    return out;
}

Eigen::Matrix3d ConeOracle::rashba_reduced(double alpha, double hbar) const {
    double k = alpha / hbar;
    double s_tr = k * w_ * (s_ * (st_ + ct_) - c_);
    double s_r3 = k * (ct_ - st_);
    double s_3t = k * w_ * (s_ + c_ * (st_ + ct_));
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 1) = s_tr;
    m(1, 0) = -s_tr;
    m(1, 2) = s_r3;
    m(2, 1) = -s_r3;
    m(2, 0) = s_3t;
    m(0, 2) = -s_3t;
    return m;
}

Eigen::Matrix3d ConeOracle::dresselhaus_reduced(double beta, double hbar) const {
    double k = beta / (hbar * hbar * hbar);
    double d = std::cos(2.0 * p_.phi) * std::cos(2.0 * theta_);
    double s_ttrr = -k * w_ * w_ * d;
    double s_rr33 = -k * d;
    double s_33tt = -k * w_ * w_ * d;
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 1) = s_ttrr;
    m(1, 0) = -s_ttrr;
    m(1, 2) = s_rr33;
    m(2, 1) = -s_rr33;
    m(2, 0) = s_33tt;
    m(0, 2) = -s_33tt;
    return m;
}

std::map<DerivIndex, TermValue> OracleOperator::total(bool prefer_derived) const {
    std::map<DerivIndex, TermValue> out;
    for (const auto& row : rows)
        for (const auto& [idx, tv] : row.effective(prefer_derived)) {
            TermValue& acc = out[idx];
            acc.scalar += tv.scalar;
            acc.vec += tv.vec;
            acc.spin += tv.spin;
        }
    return out;
}

OracleOperator oracle_operator(const ConeParams& p_in, ConeOp which, double theta, double r,
                               const Couplings& cpl) {
    ConeParams p = p_in;
    if (which == ConeOp::CylRashba || which == ConeOp::CylDresselhaus)
        p.phi = 1.5707963267948966;
    check_domain(p, r);
    double s = std::sin(p.phi), c = std::cos(p.phi);
    double st = std::sin(theta), ct = std::cos(theta);
    double w = p.R + r * c;
    double R = p.R;
    OracleOperator op;

    auto row = [&](const std::string& name) -> OracleRow& {
        op.rows.push_back(OracleRow{name, {}, false, {}});
        return op.rows.back();
    };

    switch (which) {
        case ConeOp::H: {
            op.kind = ValueKind::Scalar;
            double ke = cpl.hbar * cpl.hbar / (2.0 * cpl.mass);
            auto& r1 = row("cone-H/theta-kinetic");
            r1.printed[{2, 0}] = scalar_value(-ke / (w * w));
            auto& r2 = row("cone-H/radial-kinetic");
            r2.printed[{0, 2}] = scalar_value(-ke);
            r2.printed[{0, 1}] = scalar_value(-ke * c / w);
            auto& r3 = row("cone-H/geometric-potential");
            r3.printed[{0, 0}] = scalar_value(-ke * s * s / (4.0 * w * w));
            break;
        }
        case ConeOp::P: {
            op.kind = ValueKind::Vector3;
            ConeOracle o(p, theta, r);
            auto& r1 = row("cone-P/theta");
            r1.printed[{1, 0}] = vec_value(-I * cpl.hbar / w * o.e_theta().cast<Complex>());
            auto& r2 = row("cone-P/radial");
            r2.printed[{0, 1}] = vec_value(-I * cpl.hbar * o.e_r().cast<Complex>());
            auto& r3 = row("cone-P/geometric");
            r3.printed[{0, 0}] = vec_value(o.geometric_momentum(cpl.hbar));
            break;
        }
        case ConeOp::L: {
            op.kind = ValueKind::Vector3;
            ConeOracle o(p, theta, r);
            auto& r1 = row("cone-L/theta");
            r1.printed[{1, 0}] = vec_value(
                I * cpl.hbar * ((R * c + r) / w * o.e_n().cast<Complex>() -
                                (R * s / w) * o.e_r().cast<Complex>()));
            auto& r2 = row("cone-L/radial");
            r2.printed[{0, 1}] = vec_value(I * cpl.hbar * R * s * o.e_theta().cast<Complex>());
            auto& r3 = row("cone-L/geometric");
            r3.printed[{0, 0}] = vec_value(o.geometric_oam(cpl.hbar));
            break;
        }
        case ConeOp::Rashba: {
            op.kind = ValueKind::Spin;
            double a = cpl.alpha;
            auto& r1 = row("cone-rashba/row1-theta");
            r1.printed[{1, 0}] = spin_value(-I * a / w * combo(ct, st, -(st + ct)));
            auto& r2 = row("cone-rashba/row2-radial");
            r2.printed[{0, 1}] =
                spin_value(I * a * combo(s - c * st, -(s - c * ct), -c * (ct - st)));
            auto& r3 = row("cone-rashba/row3-curvature");
            r3.printed[{0, 0}] = spin_value(
                0.5 * I * a / R * combo(s * s * st - s * c, -(s * s * ct + s * c), -s * s * (st - ct)));
            // the general pipeline yields +sc in the first component and the
            // local 1/w scale; the cylinder limit cannot distinguish them
            r3.has_derived = true;
            r3.derived[{0, 0}] = spin_value(
                0.5 * I * a / w * combo(s * s * st + s * c, -(s * s * ct + s * c), -s * s * (st - ct)));
            break;
        }
        case ConeOp::Dresselhaus: {
            op.kind = ValueKind::Spin;
            double B = cpl.beta * std::cos(2.0 * p.phi) * std::cos(2.0 * theta);
            SpinMatrix sigma_r0 = combo(c * ct, c * st, s);
            SpinMatrix sigma_30 = combo(s * ct, s * st, -c);
            auto& r1 = row("cone-dresselhaus/row1-cubic");
            r1.printed[{2, 1}] = spin_value(I * B / (w * w) * sigma_r0);
            r1.printed[{1, 2}] = spin_value(I * B / w * combo(st, -ct, 0));
            auto& r2 = row("cone-dresselhaus/row2-metric-derivative");
            r2.printed[{2, 0}] = spin_value(-4.0 * I * B * c / (w * w * w) * sigma_30);
            // the general pipeline's second-derivative remainder carries the
            // radial frame matrix instead (vanishes identically at phi = pi/2
            // either way)
            r2.has_derived = true;
            r2.derived[{2, 0}] = spin_value(-4.0 * I * B * c / (w * w * w) * sigma_r0);
            auto& r3 = row("cone-dresselhaus/row3-curvature-square");
            r3.printed[{2, 0}] = spin_value(0.5 * I * B * s / (w * w * w) * sigma_30);
            r3.printed[{0, 2}] = spin_value(-0.5 * I * B * s / w * sigma_30);
            auto& r4 = row("cone-dresselhaus/row4-theta-gradient");
            r4.printed[{1, 0}] = spin_value(0.75 * I * B * s * s / (w * w * w) * combo(-st, ct, 0));
            auto& r5 = row("cone-dresselhaus/row5-radial-gradient");
            r5.printed[{0, 1}] = spin_value(
                I * B * s / (w * w) *
                combo(0.25 * s * c * ct, 0.25 * s * c * st, 0.25 * s * s - 1.0));
            auto& r6 = row("cone-dresselhaus/row6-scalar");
            r6.printed[{0, 0}] = spin_value(
                I * B / (w * w * w) *
                combo(0.5 * s * s * c * c * ct, 0.5 * s * s * c * c * st, s * c * (1.0 + 0.5 * s * s)));
            break;
        }
        case ConeOp::CylRashba: {
            op.kind = ValueKind::Spin;
            double a = cpl.alpha;
            auto& r1 = row("cylinder-rashba/row1-theta");
            r1.printed[{1, 0}] = spin_value(-I * a / R * combo(ct, st, -(st + ct)));
            auto& r2 = row("cylinder-rashba/row2-radial");
            r2.printed[{0, 1}] = spin_value(I * a * combo(1, -1, 0));
            auto& r3 = row("cylinder-rashba/row3-curvature");
            r3.printed[{0, 0}] = spin_value(0.5 * I * a / R * combo(st, -ct, -(st - ct)));
            break;
        }
        case ConeOp::CylDresselhaus: {
            op.kind = ValueKind::Spin;
            double E = cpl.beta * std::cos(2.0 * theta);
            auto& r1 = row("cylinder-dresselhaus/row1-cubic");
            r1.printed[{1, 2}] = spin_value(I * E / R * combo(-st, ct, 0));
            r1.printed[{2, 1}] = spin_value(-I * E / (R * R) * combo(0, 0, 1));
            auto& r2 = row("cylinder-dresselhaus/row2-curvature-square");
            r2.printed[{2, 0}] = spin_value(-0.5 * I * E / (R * R * R) * combo(ct, st, 0));
            r2.printed[{0, 2}] = spin_value(0.5 * I * E / R * combo(ct, st, 0));
            auto& r3 = row("cylinder-dresselhaus/row3-gradient");
            r3.printed[{1, 0}] = spin_value(0.75 * I * E / (R * R * R) * combo(st, -ct, 0));
            r3.printed[{0, 1}] = spin_value(0.75 * I * E / (R * R) * combo(0, 0, 1));
            break;
        }
    }
    return op;
}

double oracle_scalar(const ConeParams& p, const std::string& which, double theta, double r,
                     const Couplings& cpl) {
    ConeOracle o(p, theta, r);
    if (which == "M") return o.mean_curvature();
    if (which == "K") return o.gauss_curvature();
    if (which == "Vg") return o.geometric_potential(cpl.hbar, cpl.mass);
    if (which == "g11") return o.metric()(0, 0);
    if (which == "g12") return 0.0;
    if (which == "g22") return 1.0;
    if (which == "ginv11") return o.metric_inv()(0, 0);
    if (which == "ginv12") return 0.0;
    if (which == "ginv22") return 1.0;
    if (which == "g1_11") return o.g1_inv()(0, 0);
    if (which == "g1_12") return 0.0;
    if (which == "g1_22") return 0.0;
    throw ConfigError("unknown oracle scalar '" + which + "'");
}

}  // namespace curvop
