#ifndef CURVOP_VERIFY_HPP
#define CURVOP_VERIFY_HPP

#include <string>
#include <vector>

#include "curvop/cone_oracle.hpp"

namespace curvop {

// Verification: the general pipeline against the truncated-cone closed forms
// (geometry, reduced tensors, all five effective operators, and the cylinder
// limits).
struct VerifyOptions {
    int nu = 20, nv = 20;
    std::vector<double> phis = {0.2, 0.52359877559829882, 0.6, 1.0471975511965976, 1.4};
    double R = 1.0, l = 2.0;
    Couplings cpl;
    double tol = 1e-9;           // geometry and cylinder-limit tolerance
    double tol_cone_soc = 1e-6;  // printed cone SOC rows
};

struct VerifyCheck {
    std::string name;
    double phi = 0;
    double max_abs_err = 0;
    double max_rel_err = 0;  // relative to the check's oracle scale
    double scale = 0;
    double worst_u = 0, worst_v = 0;
    double tolerance = 0;
    bool known_print_discrepancy = false;
    std::string note;
    bool pass = false;
};

struct VerifyReport {
    VerifyOptions opts;
    std::vector<VerifyCheck> checks;
    int n_pass = 0, n_fail = 0, n_known_discrepancies = 0;
    bool pass = false;
};

VerifyReport run_verify(const VerifyOptions& opts);

// Deterministic JSON rendering of the report.
std::string report_to_json(const VerifyReport& report);

}  // namespace curvop

#endif
