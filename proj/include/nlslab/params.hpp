#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace nlslab {

using Rational = boost::multiprecision::cpp_rational;

// (d, a, alpha, mu). mu = +1 defocusing, -1 focusing.
struct ProblemSpec {
    int d = 3;
    double a = 0.0;
    double alpha = 2.0;
    int mu = -1;
};

struct Exponents {
    double s_c = 0, sigma = 0, hardy = 0, rho_heat = 0;
    double q0 = 0, r0 = 0;
    double rho_dual = 0, gamma = 0;
    // Strichartz bookkeeping used for the stability theory; epsilon shifts dropped.
    double q = 0, r = 0, q1 = 0, r1 = 0, r2 = 0;
    int aux_case = 0;
};

struct RegimeReport {
    bool hardy_ok = false;
    bool intercritical_ok = false;
    bool main_theorem_ok = false;
    bool critical_lwp_ok = false;
    bool exact = false;  // true when every gate was decided in rational arithmetic
    std::vector<std::string> messages;
};

struct Interval {
    double lo = 0, hi = 0;
    bool empty() const { return !(lo < hi); }
};

enum class Direction { Forward, Reverse };

// Gates are decided exactly when a and alpha have short decimal forms, otherwise with
// absolute tolerance kGateTolerance. Equality in any gate is a violation.
inline constexpr double kGateTolerance = 1e-12;

RegimeReport validate_regime(const ProblemSpec& spec);
Exponents exponents(const ProblemSpec& spec);
bool is_admissible(double q, double r, int d);
bool is_admissible(const Rational& q, const Rational& r, int d);
Interval sobolev_equiv_range(double s, const ProblemSpec& spec, Direction dir);

double hardy_constant(int d);
double a_eff(int d, double a);
double rho_heat(int d, double a);

// Exact decimal reading of a double: the shortest round-trip decimal, if it has at
// most 12 significant digits.
std::optional<Rational> exact_decimal(double x);

// q0, r0 as exact rationals when alpha is an exact decimal.
struct RationalPair { Rational q, r; };
std::optional<RationalPair> q0_r0_exact(int d, double alpha);
std::optional<RationalPair> dual_pair_exact(int d, double alpha);

std::string to_string(const Rational& q);

} // namespace nlslab
