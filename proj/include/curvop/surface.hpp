#ifndef CURVOP_SURFACE_HPP
#define CURVOP_SURFACE_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "curvop/errors.hpp"
#include "curvop/jet.hpp"

namespace curvop {

using ParamMap = std::map<std::string, double>;

// Expression AST for surface parametrizations x(u,v), y(u,v), z(u,v).
// Nodes reference only u, v, declared parameters, literals, pi and the
// whitelisted function set {sin, cos, tan, exp, log, sqrt}; '^' takes a
// rational exponent.
struct Expr {
    enum class Kind { Number, Pi, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt };

    Kind kind;
    double number = 0;       // Number
    int var = 0;             // Var: 0 = u, 1 = v
    std::string name;        // Param
    Func func = Func::Sin;   // Call
    long pow_num = 1;        // Pow exponent p/q
    long pow_den = 1;
    std::shared_ptr<const Expr> a, b;

    bool structurally_equal(const Expr& o) const;
};

using ExprPtr = std::shared_ptr<const Expr>;

struct Interval {
    double lo = 0, hi = 1;
    bool lo_closed = true, hi_closed = true;
    // bounds may reference parameters; resolved values are stored by
    // SurfaceDef::resolve_domain
    ExprPtr lo_expr, hi_expr;
};

struct SurfaceDef {
    ExprPtr x, y, z;
    std::vector<std::pair<std::string, double>> params;  // declaration order
    Interval u_range, v_range;
    bool periodic_u = false;
    std::string name;  // builtin name or empty

    double param_default(const std::string& key) const;
    bool has_param(const std::string& key) const;

    // Merge overrides onto defaults; unknown names throw UnknownParameter.
    std::map<std::string, double> resolve_params(const std::map<std::string, double>& overrides) const;

    // Evaluate domain bounds (which may reference parameters) and check
    // non-degeneracy.
    struct Domain {
        double u_lo, u_hi, v_lo, v_hi;
        bool periodic_u;
    };
    Domain resolve_domain(const std::map<std::string, double>& params_resolved) const;
};

// --- parsing / printing ---

SurfaceDef parse_surface(const std::string& text);
std::string print_surface(const SurfaceDef& def);
std::string print_expr(const Expr& e);

// Builtin charts: cone, cylinder, plane_ring, sphere, torus, catenoid.
SurfaceDef builtin_catalog(const std::string& name);
std::vector<std::string> builtin_names();

// --- evaluation ---

template <class T>
struct EvalEnv {
    T u, v;
    const std::map<std::string, double>* params = nullptr;
};

template <class T>
T eval_expr(const Expr& e, const EvalEnv<T>& env) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    using std::tan;
    switch (e.kind) {
        case Expr::Kind::Number:
            if constexpr (std::is_same_v<T, double>) return e.number;
            else return T::constant(e.number);
        case Expr::Kind::Pi:
            if constexpr (std::is_same_v<T, double>) return 3.14159265358979323846;
            else return T::constant(3.14159265358979323846);
        case Expr::Kind::Var:
            return e.var == 0 ? env.u : env.v;
        case Expr::Kind::Param: {
            auto it = env.params->find(e.name);
            if (it == env.params->end()) throw UnknownParameter("unknown parameter '" + e.name + "'");
            if constexpr (std::is_same_v<T, double>) return it->second;
            else return T::constant(it->second);
        }
        case Expr::Kind::Neg:
            return -eval_expr(*e.a, env);
        case Expr::Kind::Add:
            return eval_expr(*e.a, env) + eval_expr(*e.b, env);
        case Expr::Kind::Sub:
            return eval_expr(*e.a, env) - eval_expr(*e.b, env);
        case Expr::Kind::Mul:
            return eval_expr(*e.a, env) * eval_expr(*e.b, env);
        case Expr::Kind::Div: {
            T num = eval_expr(*e.a, env);
            T den = eval_expr(*e.b, env);
            if constexpr (std::is_same_v<T, double>) {
                if (den == 0) throw DivisionByZeroJet("division by zero");
                return num / den;
            } else {
                return num / den;
            }
        }
        case Expr::Kind::Pow: {
            T base = eval_expr(*e.a, env);
            if constexpr (std::is_same_v<T, double>) {
                if (e.pow_den == 1) {
                    // binary exponentiation, mirroring the jet path exactly
                    long n = e.pow_num;
                    bool invert = n < 0;
                    if (invert) n = -n;
                    double r = 1.0, b = base;
                    while (n > 0) {
                        if (n & 1) r = r * b;
                        b = b * b;
                        n >>= 1;
                    }
                    if (invert) {
                        if (r == 0) throw DivisionByZeroJet("zero base with negative exponent");
                        return 1.0 / r;
                    }
                    return r;
                }
                if (!(base > 0)) throw DomainErrorJet("fractional power of non-positive base");
                return std::pow(base, double(e.pow_num) / double(e.pow_den));
            } else {
                return pow_rational(base, e.pow_num, e.pow_den);
            }
        }
        case Expr::Kind::Call: {
            T a = eval_expr(*e.a, env);
            switch (e.func) {
                case Expr::Func::Sin: return sin(a);
                case Expr::Func::Cos: return cos(a);
                case Expr::Func::Tan: return tan(a);
                case Expr::Func::Exp: return exp(a);
                case Expr::Func::Log:
                    if constexpr (std::is_same_v<T, double>) {
                        if (!(a > 0)) throw DomainErrorJet("log of non-positive value");
                        return log(a);
                    } else {
                        return log(a);
                    }
                case Expr::Func::Sqrt:
                    if constexpr (std::is_same_v<T, double>) {
                        if (!(a > 0)) throw DomainErrorJet("sqrt of non-positive value");
                        return sqrt(a);
                    } else {
                        return sqrt(a);
                    }
            }
            throw Error("unreachable function kind", 2);
        }
    }
    throw Error("unreachable expression kind", 2);
}

// Evaluate the embedding r(u,v) = (x,y,z) with any supported numeric type.
template <class T>
std::array<T, 3> eval_embedding(const SurfaceDef& def, const T& u, const T& v,
                                const std::map<std::string, double>& params_resolved) {
    EvalEnv<T> env{u, v, &params_resolved};
    return {eval_expr(*def.x, env), eval_expr(*def.y, env), eval_expr(*def.z, env)};
}

}  // namespace curvop

#endif
