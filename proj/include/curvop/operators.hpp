#ifndef CURVOP_OPERATORS_HPP
#define CURVOP_OPERATORS_HPP

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "curvop/geometry.hpp"
#include "curvop/spin.hpp"

namespace curvop {

enum class ValueKind { Scalar, Vector3, Spin };

// A chart-dependent scalar coefficient; evaluates to a complex tangential jet
// so the normal-ordering rewrite can take exact derivatives.
struct ScalarField {
    std::function<CTJet(const GeoBundle&)> eval;
};

ScalarField field_const(std::complex<double> c);
ScalarField field_real(std::function<TJet(const GeoBundle&)> f);
ScalarField field_mul(ScalarField a, ScalarField b);
ScalarField field_add(ScalarField a, ScalarField b);
ScalarField field_scale(std::complex<double> c, ScalarField a);
ScalarField field_deriv(ScalarField a, int axis);  // d/du (axis 0) or d/dv (axis 1)

// One product term of a pre-normal-order operator expression: a complex
// prefactor, an optional constant Pauli factor (spin kind) or Cartesian axis
// (vector kind), and an ordered composition of coefficient fields and
// tangential derivative symbols.
struct OpFactor {
    bool is_deriv = false;
    int axis = 0;  // derivative axis when is_deriv
    ScalarField field;
};

struct OpTerm {
    std::complex<double> scale{1.0, 0.0};
    int pauli = -1;     // 0..2 = sigma^{x,y,z}, 3 = identity (spin kind)
    int vec_axis = -1;  // 0..2 Cartesian axis (vector3 kind)
    std::string provenance;
    std::vector<OpFactor> factors;
};

struct OpExpr {
    ValueKind kind = ValueKind::Scalar;
    std::vector<OpTerm> terms;
};

using DerivIndex = std::pair<int, int>;  // (m, n): tangential derivative orders

// One normal-ordered coefficient: a sum of scaled field contributions, each
// tagged with its originating term.
struct CoefficientField {
    struct Part {
        std::complex<double> scale;
        int pauli = -1;
        int vec_axis = -1;
        std::string provenance;
        ScalarField field;
    };
    std::vector<Part> parts;
};

struct TermValue {
    std::complex<double> scalar{0.0, 0.0};
    Eigen::Vector3cd vec = Eigen::Vector3cd::Zero();
    SpinMatrix spin = SpinMatrix::Zero();

    double magnitude(ValueKind kind) const;
};

class DiffOp {
public:
    ValueKind kind = ValueKind::Scalar;
    std::map<DerivIndex, CoefficientField> terms;

    TermValue evaluate_term(const DerivIndex& idx, const GeoBundle& b) const;
    std::map<DerivIndex, TermValue> evaluate(const GeoBundle& b) const;
    std::vector<std::string> provenance(const DerivIndex& idx) const;
};

// Rewrite derivatives to the right of all coefficient fields via the product
// rule; the result is canonical (coefficients keyed by derivative multi-index).
DiffOp normal_order(const OpExpr& expr);

// Re-embed a canonical operator as an OpExpr (fields left, derivatives right).
OpExpr to_op_expr(const DiffOp& op);

// Drop terms that are identically zero on a probe grid (relative threshold
// 1e-14 of the operator's largest coefficient magnitude).
void prune(DiffOp& op, const SurfaceDef& def, const ParamMap& params);

// --- the effective operators ---

DiffOp assemble_hamiltonian(const SurfaceDef& def, double hbar, double mass,
                            const ParamMap& overrides = {});
DiffOp assemble_momentum(const SurfaceDef& def, double hbar, const ParamMap& overrides = {});
DiffOp assemble_oam(const SurfaceDef& def, double hbar, const ParamMap& overrides = {});
DiffOp assemble_rashba(const SurfaceDef& def, double alpha_R, double hbar,
                       const ParamMap& overrides = {});
DiffOp assemble_dresselhaus(const SurfaceDef& def, double beta_D, double hbar,
                            const ParamMap& overrides = {});

// --- grid evaluation and wavefunction application ---

// Complex multi-channel grid (1 = scalar, 2 = spinor, 3 = vector output).
struct WaveGrid {
    int nu = 0, nv = 0, components = 1;
    bool periodic_u = false;
    std::vector<double> us, vs;
    std::vector<std::complex<double>> data;  // [(iu*nv + iv)*components + c]

    std::complex<double>& at(int iu, int iv, int c) {
        return data[(size_t(iu) * nv + iv) * components + c];
    }
    const std::complex<double>& at(int iu, int iv, int c) const {
        return data[(size_t(iu) * nv + iv) * components + c];
    }
};

// Per-term sampled coefficient table: real channels per value kind
// (2 for scalar, 6 for vector3, 8 for spin: Re/Im of the four entries).
struct OpGridTerm {
    DerivIndex idx;
    std::vector<std::string> provenance;
    std::vector<std::string> channel_names;
    std::vector<std::vector<double>> channels;  // channel -> row-major grid
};

struct OpGrid {
    ValueKind kind;
    int nu = 0, nv = 0;
    std::vector<double> us, vs;
    std::vector<OpGridTerm> terms;
};

OpGrid eval_on_grid(const DiffOp& op, const SurfaceDef& def, int nu, int nv,
                    const ParamMap& overrides = {});

// Apply the operator to a sampled wavefunction with 4th-order central finite
// differences (periodic in u when the surface is flagged periodic); the
// result lives on the interior grid where the stencil fits.
WaveGrid apply_to_wavefunction(const DiffOp& op, const WaveGrid& psi, const SurfaceDef& def,
                               const ParamMap& overrides = {});

const char* value_kind_name(ValueKind k);

}  // namespace curvop

#endif
