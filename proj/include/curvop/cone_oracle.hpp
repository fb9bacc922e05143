#ifndef CURVOP_CONE_ORACLE_HPP
#define CURVOP_CONE_ORACLE_HPP

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "curvop/operators.hpp"

namespace curvop {

// Closed-form reference results for the truncated-cone chart
//   r(theta, r) = ((R + r cos(phi)) cos(theta), (R + r cos(phi)) sin(theta), r sin(phi)),
// the ground truth the general pipeline is verified against.
struct ConeParams {
    double R = 1.0;
    double phi = 0.52359877559829882;  // pi/6
    double l = 2.0;
};

struct Couplings {
    double hbar = 1.0;
    double mass = 0.5;
    double alpha = 1.0;
    double beta = 1.0;
};

class ConeOracle {
public:
    ConeOracle(const ConeParams& p, double theta, double r);

    double w() const { return w_; }
    double mean_curvature() const;
    double gauss_curvature() const;
    double f(double q3) const;
    Eigen::Matrix2d metric() const;
    Eigen::Matrix2d metric_inv() const;
    Eigen::Matrix3d offset_metric(double q3) const;
    Eigen::Matrix2d g1_inv() const;
    double geometric_potential(double hbar, double mass) const;
    Eigen::Vector3d e_theta() const;
    Eigen::Vector3d e_r() const;
    Eigen::Vector3d e_n() const;
    Eigen::Vector3cd geometric_momentum(double hbar) const;
    Eigen::Vector3cd geometric_oam(double hbar) const;
    std::array<SpinMatrix, 3> pauli_reduced() const;  // sigma^theta_0, sigma^r_0, sigma^3_0
    Eigen::Matrix3d rashba_reduced(double alpha, double hbar) const;
    Eigen::Matrix3d dresselhaus_reduced(double beta, double hbar) const;

private:
    ConeParams p_;
    double theta_, r_, w_, s_, c_, st_, ct_;
};

enum class ConeOp { H, P, L, Rashba, Dresselhaus, CylRashba, CylDresselhaus };

// One printed row of a closed-form operator. Rows where the printed form is
// known to disagree with the general pipeline also carry the re-derived form
// (the cylinder limit fixes which one the pipeline must reproduce).
struct OracleRow {
    std::string name;
    std::map<DerivIndex, TermValue> printed;
    bool has_derived = false;
    std::map<DerivIndex, TermValue> derived;

    const std::map<DerivIndex, TermValue>& effective(bool prefer_derived) const {
        return (prefer_derived && has_derived) ? derived : printed;
    }
};

struct OracleOperator {
    ValueKind kind = ValueKind::Scalar;
    std::vector<OracleRow> rows;

    std::map<DerivIndex, TermValue> total(bool prefer_derived) const;
};

OracleOperator oracle_operator(const ConeParams& p, ConeOp which, double theta, double r,
                               const Couplings& cpl);

// Scalar quantities by name, for report generation.
double oracle_scalar(const ConeParams& p, const std::string& which, double theta, double r,
                     const Couplings& cpl);

}  // namespace curvop

#endif
