#ifndef CURVOP_ERRORS_HPP
#define CURVOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace curvop {

// All library errors derive from Error and carry the process exit code the
// CLI maps them to: 2 = config/parse, 3 = geometry/evaluation failure.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code) : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

struct SyntaxError : Error {
    int line, column;
    std::string expected;
    SyntaxError(std::string msg, int line_, int column_, std::string expected_ = {})
        : Error(std::move(msg), 2), line(line_), column(column_), expected(std::move(expected_)) {}
};

struct UnknownIdentifier : Error {
    explicit UnknownIdentifier(const std::string& m) : Error(m, 2) {}
};
struct UnknownParameter : Error {
    explicit UnknownParameter(const std::string& m) : Error(m, 2) {}
};
struct UnknownSurface : Error {
    explicit UnknownSurface(const std::string& m) : Error(m, 2) {}
};
struct BadDomain : Error {
    explicit BadDomain(const std::string& m) : Error(m, 2) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(m, 2) {}
};
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& m) : Error(m, 2) {}
};

struct JetSeedError : Error {
    explicit JetSeedError(const std::string& m) : Error(m, 2) {}
};
struct DivisionByZeroJet : Error {
    explicit DivisionByZeroJet(const std::string& m) : Error(m, 3) {}
};
struct DomainErrorJet : Error {
    explicit DomainErrorJet(const std::string& m) : Error(m, 3) {}
};

struct DegenerateMetric : Error {
    double u, v;
    DegenerateMetric(const std::string& m, double u_, double v_) : Error(m, 3), u(u_), v(v_) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(m, 3) {}
};
struct InvalidOffset : Error {
    explicit InvalidOffset(const std::string& m) : Error(m, 3) {}
};
struct SingularJacobian : Error {
    explicit SingularJacobian(const std::string& m) : Error(m, 3) {}
};
struct NonOrthogonalChart : Error {
    explicit NonOrthogonalChart(const std::string& m) : Error(m, 3) {}
};
struct NotAxisymmetric : Error {
    explicit NotAxisymmetric(const std::string& m) : Error(m, 3) {}
};
struct DegreeOverflow : Error {
    explicit DegreeOverflow(const std::string& m) : Error(m, 3) {}
};
struct ConvergenceFailure : Error {
    explicit ConvergenceFailure(const std::string& m) : Error(m, 3) {}
};
struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& m) : Error(m, 3) {}
};

}  // namespace curvop

#endif
