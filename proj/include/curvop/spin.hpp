#ifndef CURVOP_SPIN_HPP
#define CURVOP_SPIN_HPP

#include <Eigen/Core>
#include <array>
#include <complex>

#include "curvop/geometry.hpp"

namespace curvop {

using SpinMatrix = Eigen::Matrix2cd;

// Cartesian Pauli matrices (and the identity at index 3).
const SpinMatrix& pauli(int s);

// Reduced curvilinear Pauli matrices sigma^i_0 = (dq^i/dx^s) sigma^s at q3 = 0.
std::array<SpinMatrix, 3> pauli_ccs(const SurfaceDef& def, double u, double v,
                                    const ParamMap& overrides = {});
std::array<SpinMatrix, 3> pauli_ccs(const GeoBundle& b);

// Reduced Rashba tensor S^0_ij ([111]-grown well constants, strength alpha_R).
Eigen::Matrix3d rashba_tensor_ccs(const SurfaceDef& def, double u, double v, double alpha_R,
                                  double hbar = 1.0, const ParamMap& overrides = {});
Eigen::Matrix3d rashba_tensor_ccs(const GeoBundle& b, double alpha_R, double hbar = 1.0);

// Reduced Dresselhaus tensor S^0_iijj ([100]-grown well constants, strength beta_D);
// entry (i,j) holds the ordered-pair component S_iijj.
Eigen::Matrix3d dresselhaus_tensor_ccs(const SurfaceDef& def, double u, double v, double beta_D,
                                       double hbar = 1.0, const ParamMap& overrides = {});
Eigen::Matrix3d dresselhaus_tensor_ccs(const GeoBundle& b, double beta_D, double hbar = 1.0);

}  // namespace curvop

#endif
