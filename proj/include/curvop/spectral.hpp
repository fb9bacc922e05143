#ifndef CURVOP_SPECTRAL_HPP
#define CURVOP_SPECTRAL_HPP

#include <vector>

#include "curvop/geometry.hpp"

namespace curvop {

// Radial eigenproblem of an axisymmetric effective Hamiltonian after the
// e^{i m theta} separation and the w^{-1/2} symmetrization (Dirichlet walls
// at both chart ends). The matrix is symmetric tridiagonal:
//   diag_i = 2 kinetic / h^2 + potential_i,  off = -kinetic / h^2.
struct RadialProblem {
    int m_angular = 0;
    int nodes = 0;
    double h = 0;                   // grid spacing
    std::vector<double> grid;       // interior node positions
    std::vector<double> potential;  // per-node potential (centrifugal + symmetrization [+ V_g])
    double kinetic = 1.0;           // (hbar^2/2m) / g_vv
    std::vector<double> weight;     // w(r_i): quadrature weight of the original problem
    bool include_vg = false;
};

RadialProblem radial_reduce(const SurfaceDef& def, int m_angular, bool include_vg, int nodes,
                            const ParamMap& overrides = {}, double hbar = 1.0, double mass = 0.5);

// k lowest eigenvalues by Sturm bisection (deterministic, accuracy ~1e-11
// relative to the eigenvalue scale of the discrete matrix).
std::vector<double> solve_spectrum(const RadialProblem& prob, int k);

// Symmetric tridiagonal helpers (also used by tests).
std::vector<double> tridiag_lowest_eigenvalues(const std::vector<double>& diag,
                                               const std::vector<double>& off, int k);
std::vector<double> tridiag_eigenvector(const std::vector<double>& diag,
                                        const std::vector<double>& off, double lambda);

}  // namespace curvop

#endif
