#ifndef CURVOP_JET_HPP
#define CURVOP_JET_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

#include "curvop/errors.hpp"

namespace curvop {

// Dense truncated Taylor jet in `Vars` variables, total degree <= Deg.
// Coefficients are stored in graded-lexicographic order and hold the
// Taylor coefficients f_alpha = d^alpha f / alpha! at the expansion point.
// Arithmetic truncates exactly: products of total degree > Deg are dropped,
// never folded into lower orders.
namespace jet_detail {

constexpr int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return static_cast<int>(r);
}

template <int Vars, int Deg>
constexpr int coeff_count() {
    return binomial(Vars + Deg, Deg);
}

// Multi-index enumeration shared by all jets of a given shape.
template <int Vars, int Deg>
struct Tables {
    static constexpr int N = coeff_count<Vars, Deg>();
    std::array<std::array<int, Vars>, N> index;  // position -> multi-index
    std::array<int, N> degree;

    constexpr Tables() : index{}, degree{} {
        int pos = 0;
        std::array<int, Vars> mi{};
        // enumerate by total degree, then lexicographic on the exponents
        for (int d = 0; d <= Deg; ++d) enumerate(mi, 0, d, pos);
    }

    constexpr void enumerate(std::array<int, Vars>& mi, int var, int remaining, int& pos) {
        if (var == Vars - 1) {
            mi[var] = remaining;
            index[pos] = mi;
            int d = 0;
            for (int v = 0; v < Vars; ++v) d += mi[v];
            degree[pos] = d;
            ++pos;
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            mi[var] = e;
            enumerate(mi, var + 1, remaining - e, pos);
        }
    }

    constexpr int find(const std::array<int, Vars>& mi) const {
        for (int p = 0; p < N; ++p)
            if (index[p] == mi) return p;
        return -1;
    }
};

template <int Vars, int Deg>
inline constexpr Tables<Vars, Deg> tables{};

// Precomputed product pairs: for every (p,q) with deg(p)+deg(q) <= Deg,
// the target coefficient position of index[p]+index[q].
template <int Vars, int Deg>
struct MulTable {
    static constexpr int N = coeff_count<Vars, Deg>();
    // target[p][q] = position of the sum index, or -1 when truncated away
    std::array<std::array<int, N>, N> target{};

    constexpr MulTable() {
        const auto& t = tables<Vars, Deg>;
        for (int p = 0; p < N; ++p)
            for (int q = 0; q < N; ++q) {
                if (t.degree[p] + t.degree[q] > Deg) {
                    target[p][q] = -1;
                    continue;
                }
                std::array<int, Vars> s{};
                for (int v = 0; v < Vars; ++v) s[v] = t.index[p][v] + t.index[q][v];
                target[p][q] = t.find(s);
            }
    }
};

template <int Vars, int Deg>
inline constexpr MulTable<Vars, Deg> mul_table{};

template <class S>
inline double magnitude(const S& x) {
    if constexpr (std::is_same_v<S, std::complex<double>>)
        return std::abs(x);
    else
        return std::abs(static_cast<double>(x));
}

}  // namespace jet_detail

template <int Vars, int Deg, class Scalar = double>
class Jet {
public:
    static constexpr int kVars = Vars;
    static constexpr int kDeg = Deg;
    static constexpr int kCoeffs = jet_detail::coeff_count<Vars, Deg>();

    using scalar_type = Scalar;

    Jet() { c_.fill(Scalar(0)); }

    static Jet constant(Scalar value) {
        Jet j;
        j.c_[0] = value;
        return j;
    }

    // Seed variable `var` at `value`: constant term = value, d/d(var) = 1.
    static Jet seed(int var, Scalar value) {
        if (var < 0 || var >= Vars) throw JetSeedError("jet seed index out of range");
        Jet j;
        j.c_[0] = value;
        std::array<int, Vars> mi{};
        mi[var] = 1;
        j.c_[jet_detail::tables<Vars, Deg>.find(mi)] = Scalar(1);
        return j;
    }

    Scalar value() const { return c_[0]; }

    Scalar& operator[](int pos) { return c_[pos]; }
    const Scalar& operator[](int pos) const { return c_[pos]; }

    // Taylor coefficient for an explicit multi-index (zero-filled to Vars).
    Scalar coeff(std::array<int, Vars> mi) const {
        int pos = jet_detail::tables<Vars, Deg>.find(mi);
        return pos < 0 ? Scalar(0) : c_[pos];
    }

    // Partial derivative value d^|mi| f / prod dq_i^{mi_i} (coefficient times alpha!).
    Scalar derivative(std::array<int, Vars> mi) const {
        Scalar v = coeff(mi);
        double fact = 1;
        for (int i = 0; i < Vars; ++i)
            for (int k = 2; k <= mi[i]; ++k) fact *= k;
        return v * Scalar(fact);
    }

    static const std::array<int, Vars>& multi_index(int pos) {
        return jet_detail::tables<Vars, Deg>.index[pos];
    }

    Jet operator-() const {
        Jet r;
        for (int i = 0; i < kCoeffs; ++i) r.c_[i] = -c_[i];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        for (int i = 0; i < kCoeffs; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int i = 0; i < kCoeffs; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(Scalar s) {
        for (int i = 0; i < kCoeffs; ++i) c_[i] *= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, Scalar s) { a.c_[0] += s; return a; }
    friend Jet operator+(Scalar s, Jet a) { a.c_[0] += s; return a; }
    friend Jet operator-(Jet a, Scalar s) { a.c_[0] -= s; return a; }
    friend Jet operator-(Scalar s, const Jet& a) { return (-a) + s; }
    friend Jet operator*(Jet a, Scalar s) { return a *= s; }
    friend Jet operator*(Scalar s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, Scalar s) { return a *= (Scalar(1) / s); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        const auto& mt = jet_detail::mul_table<Vars, Deg>;
        Jet r;
        for (int p = 0; p < kCoeffs; ++p) {
            if (a.c_[p] == Scalar(0)) continue;
            for (int q = 0; q < kCoeffs; ++q) {
                int t = mt.target[p][q];
                if (t >= 0) r.c_[t] += a.c_[p] * b.c_[q];
            }
        }
        return r;
    }

    // graded long division: the constant term is exactly a0/b0 and the real
    // and constant-jet evaluation paths agree bit for bit
    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.c_[0] == Scalar(0)) throw DivisionByZeroJet("jet division by zero constant term");
        const auto& mt = jet_detail::mul_table<Vars, Deg>;
        Jet q;
        for (int p = 0; p < kCoeffs; ++p) {  // positions come in graded order
            Scalar acc = a.c_[p];
            for (int i = 0; i < p; ++i) {
                // find j with index[i] + index[j] == index[p]
                for (int j = 1; j < kCoeffs; ++j) {
                    if (mt.target[i][j] == p) {
                        acc -= q.c_[i] * b.c_[j];
                        break;
                    }
                }
            }
            q.c_[p] = acc / b.c_[0];
        }
        return q;
    }
    friend Jet operator/(Scalar s, const Jet& b) { return constant(s) / b; }

    Jet reciprocal() const {
        if (c_[0] == Scalar(0)) throw DivisionByZeroJet("jet division by zero constant term");
        // 1/(a0+n) = sum_k (-1)^k n^k / a0^{k+1}
        std::array<Scalar, Deg + 1> d;
        Scalar inv = Scalar(1) / c_[0];
        Scalar p = inv;
        double sign = 1;
        for (int k = 0; k <= Deg; ++k) {
            d[k] = Scalar(sign) * p;
            p *= inv;
            sign = -sign;
        }
        return compose_taylor(d);
    }

    // Truncated composition g(f) from the Taylor coefficients g^{(k)}(f0)/k!.
    Jet compose_taylor(const std::array<Scalar, Deg + 1>& g) const {
        Jet n = *this;
        n.c_[0] = Scalar(0);
        Jet r = constant(g[0]);
        Jet npow = n;
        for (int k = 1; k <= Deg; ++k) {
            Jet term = npow;
            term *= g[k];
            r += term;
            if (k < Deg) npow = npow * n;
        }
        return r;
    }

    bool operator==(const Jet& o) const { return c_ == o.c_; }

private:
    std::array<Scalar, kCoeffs> c_;
};

// --- analytic functions (real scalar only: domain checks are real) ---

namespace jet_detail {

template <int V, int D, class S>
Jet<V, D, S> sin_cos_impl(const Jet<V, D, S>& x, bool want_sin) {
    std::array<S, D + 1> g;
    S s = std::sin(x.value()), c = std::cos(x.value());
    double fact = 1;
    for (int k = 0; k <= D; ++k) {
        if (k > 0) fact *= k;
        S base;
        int phase = k % 4;
        if (want_sin)
            base = (phase == 0) ? s : (phase == 1) ? c : (phase == 2) ? -s : -c;
        else
            base = (phase == 0) ? c : (phase == 1) ? -s : (phase == 2) ? -c : s;
        g[k] = base / S(fact);
    }
    return x.compose_taylor(g);
}

}  // namespace jet_detail

template <int V, int D, class S>
Jet<V, D, S> sin(const Jet<V, D, S>& x) { return jet_detail::sin_cos_impl(x, true); }

template <int V, int D, class S>
Jet<V, D, S> cos(const Jet<V, D, S>& x) { return jet_detail::sin_cos_impl(x, false); }

template <int V, int D, class S>
Jet<V, D, S> tan(const Jet<V, D, S>& x) {
    // normalized Taylor coefficients from T' = 1 + T^2
    std::array<S, D + 1> g{};
    g[0] = std::tan(x.value());
    for (int k = 0; k < D; ++k) {
        S conv = (k == 0) ? S(1) : S(0);
        for (int i = 0; i <= k; ++i) conv += g[i] * g[k - i];
        g[k + 1] = conv / S(k + 1);
    }
    return x.compose_taylor(g);
}

template <int V, int D, class S>
Jet<V, D, S> exp(const Jet<V, D, S>& x) {
    std::array<S, D + 1> g;
    S e = std::exp(x.value());
    double fact = 1;
    for (int k = 0; k <= D; ++k) {
        if (k > 0) fact *= k;
        g[k] = e / S(fact);
    }
    return x.compose_taylor(g);
}

template <int V, int D, class S>
Jet<V, D, S> log(const Jet<V, D, S>& x) {
    static_assert(std::is_floating_point_v<S>, "log domain check needs real jets");
    if (!(x.value() > S(0))) throw DomainErrorJet("jet log of non-positive constant term");
    std::array<S, D + 1> g;
    g[0] = std::log(x.value());
    // d^k log = (-1)^{k-1} (k-1)! / x^k; divided by k! gives (-1)^{k-1}/(k x^k)
    S inv = S(1) / x.value(), p = inv;
    double sign = 1;
    for (int k = 1; k <= D; ++k) {
        g[k] = S(sign) * p / S(k);
        p *= inv;
        sign = -sign;
    }
    return x.compose_taylor(g);
}

// x^r for real exponent r; requires positive constant term.
template <int V, int D, class S>
Jet<V, D, S> pow_real(const Jet<V, D, S>& x, double r) {
    static_assert(std::is_floating_point_v<S>, "pow domain check needs real jets");
    if (!(x.value() > S(0))) throw DomainErrorJet("jet pow with non-positive constant term");
    std::array<S, D + 1> g;
    S xr = std::pow(x.value(), S(r));
    S inv = S(1) / x.value();
    double fact = 1, falling = 1;
    for (int k = 0; k <= D; ++k) {
        if (k > 0) {
            fact *= k;
            falling *= (r - (k - 1));
            xr *= inv;  // keeps x^{r-k}
        }
        g[k] = xr * S(falling / fact);
    }
    return x.compose_taylor(g);
}

template <int V, int D, class S>
Jet<V, D, S> sqrt(const Jet<V, D, S>& x) {
    if (!(x.value() > S(0))) throw DomainErrorJet("jet sqrt of non-positive constant term");
    // like pow_real(x, 1/2) but anchored at std::sqrt so the constant term
    // matches plain evaluation exactly
    std::array<S, D + 1> g;
    S inv = S(1) / x.value();
    S xr = std::sqrt(x.value());
    double fact = 1, falling = 1;
    for (int k = 0; k <= D; ++k) {
        if (k > 0) {
            fact *= k;
            falling *= (0.5 - (k - 1));
            xr *= inv;
        }
        g[k] = xr * S(falling / fact);
    }
    return x.compose_taylor(g);
}

// Integer power; works for any constant term (negative exponents need a
// nonzero one).
template <int V, int D, class S>
Jet<V, D, S> pow_int(const Jet<V, D, S>& x, long n) {
    if (n < 0) return pow_int(x, -n).reciprocal();
    Jet<V, D, S> r = Jet<V, D, S>::constant(S(1));
    Jet<V, D, S> base = x;
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

// Rational power p/q: exact integer route when q == 1, else real-exponent route.
template <int V, int D, class S>
Jet<V, D, S> pow_rational(const Jet<V, D, S>& x, long p, long q) {
    if (q == 0) throw DomainErrorJet("rational exponent with zero denominator");
    if (q < 0) { p = -p; q = -q; }
    if (q == 1) return pow_int(x, p);
    return pow_real(x, double(p) / double(q));
}

// Derivative jet d/d(var): exact for coefficients of degree < Deg, the top
// slots are zeroed (one order of information is consumed per application).
template <int V, int D, class S>
Jet<V, D, S> jet_derivative(const Jet<V, D, S>& x, int var) {
    const auto& t = jet_detail::tables<V, D>;
    Jet<V, D, S> r;
    for (int p = 0; p < Jet<V, D, S>::kCoeffs; ++p) {
        auto mi = t.index[p];
        if (mi[var] == 0) continue;
        int e = mi[var];
        mi[var] -= 1;
        r[t.find(mi)] = x[p] * S(double(e));
    }
    return r;
}

// Three-variable cubic jet (q1, q2, q3): 20 coefficients.
using Jet3 = Jet<3, 3, double>;
static_assert(Jet3::kCoeffs == 20);

// Tangential field jet: two chart variables, degree 4 (the Dresselhaus
// assembly needs second tangential derivatives of curvatures, i.e. fourth
// derivatives of the embedding).
using TJet = Jet<2, 4, double>;
using CTJet = Jet<2, 4, std::complex<double>>;

inline CTJet to_complex(const TJet& x) {
    CTJet r;
    for (int i = 0; i < TJet::kCoeffs; ++i) r[i] = std::complex<double>(x[i], 0.0);
    return r;
}

}  // namespace curvop

#endif
