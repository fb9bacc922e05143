#include <doctest.h>

#include <cmath>
#include <random>

#include "curvop/jet.hpp"

using namespace curvop;

namespace {

std::array<int, 3> mi(int i, int j, int k) { return {i, j, k}; }

// scalar evaluation of the test composition used by the finite-difference
// oracle: a polynomial point with a chosen unary applied on top
double unary_apply(int which, double x) {
    switch (which) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return std::tan(x);
        case 3: return std::exp(x);
        case 4: return std::log(x);
        case 5: return std::sqrt(x);
        case 6: return std::pow(x, 1.5);
        case 7: return 1.0 / x;
    }
    return 0;
}

Jet3 unary_apply(int which, const Jet3& x) {
    switch (which) {
        case 0: return sin(x);
        case 1: return cos(x);
        case 2: return tan(x);
        case 3: return exp(x);
        case 4: return log(x);
        case 5: return sqrt(x);
        case 6: return pow_rational(x, 3, 2);
        case 7: return x.reciprocal();
    }
    return x;
}

}  // namespace

TEST_CASE("jet storage holds all cubic multi-indices in three variables") {
    static_assert(Jet3::kCoeffs == 20);
    static_assert(TJet::kCoeffs == 15);
}

TEST_CASE("seeding") {
    Jet3 a = Jet3::seed(0, 2.0);
    CHECK(a.coeff(mi(0, 0, 0)) == 2.0);
    CHECK(a.coeff(mi(1, 0, 0)) == 1.0);
    CHECK(a.coeff(mi(0, 1, 0)) == 0.0);
    CHECK(a.coeff(mi(0, 0, 3)) == 0.0);

    Jet3 c = Jet3::seed(2, 0.0);
    CHECK(c.coeff(mi(0, 0, 1)) == 1.0);
    CHECK(c.coeff(mi(0, 0, 0)) == 0.0);

    Jet3 b = Jet3::seed(1, 3.14159265358979323846);
    CHECK(b.coeff(mi(0, 0, 0)) == doctest::Approx(3.14159265358979323846));
    CHECK(b.coeff(mi(0, 1, 0)) == 1.0);

    CHECK_THROWS_AS(Jet3::seed(3, 0.0), JetSeedError);
    CHECK_THROWS_AS(Jet3::seed(-1, 0.0), JetSeedError);
}

TEST_CASE("(2 + eps)^2 = 4 + 4 eps + eps^2") {
    Jet3 a = Jet3::seed(0, 2.0);
    Jet3 sq = a * a;
    CHECK(sq.coeff(mi(0, 0, 0)) == 4.0);
    CHECK(sq.coeff(mi(1, 0, 0)) == 4.0);
    CHECK(sq.coeff(mi(2, 0, 0)) == 1.0);
    CHECK(sq.coeff(mi(3, 0, 0)) == 0.0);
}

TEST_CASE("sin at the origin reproduces its Taylor series") {
    Jet3 s = sin(Jet3::seed(0, 0.0));
    CHECK(s.coeff(mi(0, 0, 0)) == 0.0);
    CHECK(s.coeff(mi(1, 0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.coeff(mi(2, 0, 0)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.coeff(mi(3, 0, 0)) == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("second jet coefficient of 1/sqrt(1 + 2Mt + Kt^2) is (3M^2 - K)/2") {
    const double M = 0.1339746, K = 0.0;
    Jet3 t = Jet3::seed(2, 0.0);
    Jet3 f = Jet3::constant(1.0) + t * (2.0 * M) + t * t * K;
    Jet3 g = Jet3::constant(1.0) / sqrt(f);
    double expected = (3.0 * M * M - K) / 2.0;  // analytic differentiation
    CHECK(expected == doctest::Approx(0.02692379016774).epsilon(1e-12));
    CHECK(g.coeff(mi(0, 0, 2)) == doctest::Approx(expected).epsilon(1e-12));
    // first coefficient is -M
    CHECK(g.coeff(mi(0, 0, 1)) == doctest::Approx(-M).epsilon(1e-12));
}

TEST_CASE("domain and division guards") {
    Jet3 zero = Jet3::seed(0, 0.0);
    Jet3 neg = Jet3::seed(0, -1.0);
    CHECK_THROWS_AS(Jet3::constant(1.0) / zero, DivisionByZeroJet);
    CHECK_THROWS_AS(sqrt(neg), DomainErrorJet);
    CHECK_THROWS_AS(sqrt(zero), DomainErrorJet);
    CHECK_THROWS_AS(log(neg), DomainErrorJet);
    CHECK_THROWS_AS(pow_rational(neg, 1, 2), DomainErrorJet);
    CHECK(pow_rational(neg, 3, 1).value() == -1.0);  // integer powers stay defined
}

TEST_CASE("unary functions match central finite differences along random directions") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int which = 0; which < 8; ++which) {
        for (int rep = 0; rep < 20; ++rep) {
            // base point and direction for a 1-d slice through jet space
            double x0[3] = {coef(rng), coef(rng), coef(rng)};
            double d[3] = {coef(rng), coef(rng), coef(rng)};
            // polynomial point: P = 2.5 + x0.x + 0.3 x1 x2 + 0.2 x0^2 keeps
            // log/sqrt arguments positive
            auto scalar_at = [&](double t) {
                double x[3] = {x0[0] + d[0] * t, x0[1] + d[1] * t, x0[2] + d[2] * t};
                double p = 2.5 + x[0] + 0.3 * x[1] * x[2] + 0.2 * x[0] * x[0];
                return unary_apply(which, p);
            };
            Jet3 t = Jet3::seed(0, 0.0);
            Jet3 x[3];
            for (int i = 0; i < 3; ++i) x[i] = Jet3::constant(x0[i]) + t * d[i];
            Jet3 p = Jet3::constant(2.5) + x[0] + x[1] * x[2] * 0.3 + x[0] * x[0] * 0.2;
            Jet3 g = unary_apply(which, p);

            double h = 1e-4;
            double d1 = (scalar_at(h) - scalar_at(-h)) / (2 * h);
            CHECK(g.coeff(mi(1, 0, 0)) == doctest::Approx(d1).epsilon(1e-6));

            double h2 = 1e-3;
            double d2 = (scalar_at(h2) - 2 * scalar_at(0) + scalar_at(-h2)) / (h2 * h2);
            CHECK(g.coeff(mi(2, 0, 0)) * 2.0 == doctest::Approx(d2).epsilon(1e-4));

            double h3 = 5e-3;
            double d3 = (scalar_at(2 * h3) - 2 * scalar_at(h3) + 2 * scalar_at(-h3) -
                         scalar_at(-2 * h3)) /
                        (2 * h3 * h3 * h3);
            CHECK(g.coeff(mi(3, 0, 0)) * 6.0 == doctest::Approx(d3).epsilon(2e-3));
        }
    }
}

TEST_CASE("ring axioms hold coefficient-wise") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    auto random_jet = [&] {
        Jet3 j;
        for (int i = 0; i < Jet3::kCoeffs; ++i) j[i] = coef(rng);
        return j;
    };
    for (int rep = 0; rep < 50; ++rep) {
        Jet3 a = random_jet(), b = random_jet(), c = random_jet();
        Jet3 lhs = (a + b) + c, rhs = a + (b + c);
        Jet3 dist_l = a * (b + c), dist_r = a * b + a * c;
        for (int i = 0; i < Jet3::kCoeffs; ++i) {
            CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
            CHECK(dist_l[i] == doctest::Approx(dist_r[i]).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("multiplication is exact truncation of the polynomial product") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        Jet3 a, b;
        for (int i = 0; i < Jet3::kCoeffs; ++i) {
            a[i] = coef(rng);
            b[i] = coef(rng);
        }
        Jet3 prod = a * b;
        // brute-force convolution oracle over explicit multi-indices
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; j + i <= 3; ++j)
                for (int k = 0; k + i + j <= 3; ++k) {
                    double sum = 0;
                    for (int p = 0; p <= i; ++p)
                        for (int q = 0; q <= j; ++q)
                            for (int r = 0; r <= k; ++r)
                                sum += a.coeff(mi(p, q, r)) * b.coeff(mi(i - p, j - q, k - r));
                    CHECK(prod.coeff(mi(i, j, k)) == doctest::Approx(sum).epsilon(1e-13));
                }
    }
}

TEST_CASE("derivative jets shift coefficients") {
    TJet f = TJet::seed(0, 1.5) * TJet::seed(1, 2.0);  // u*v
    TJet fu = jet_derivative(f, 0);
    CHECK(fu.value() == 2.0);                      // d(uv)/du = v
    CHECK(fu.derivative({0, 1}) == 1.0);           // d2(uv)/dudv
    TJet fv = jet_derivative(f, 1);
    CHECK(fv.value() == 1.5);
}
