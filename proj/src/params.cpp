#include "nlslab/params.hpp"
#include "nlslab/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlslab {

namespace {

enum class Gate { Ok, Violated, Boundary };

struct ExactOrder {
    Gate gt(const Rational& x, const Rational& y) const {
        if (x == y) return Gate::Boundary;
        return x > y ? Gate::Ok : Gate::Violated;
    }
};

struct FloatOrder {
    Gate gt(double x, double y) const {
        if (std::abs(x - y) <= kGateTolerance) return Gate::Boundary;
        return x > y ? Gate::Ok : Gate::Violated;
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}
std::string fmt(const Rational& x) { return to_string(x); }

template <class T>
T tmax(const T& x, const T& y) { return x < y ? y : x; }

// Gate evaluation shared by the exact and floating paths.
template <class T, class Order>
RegimeReport evaluate(int d, const T& a, const T& alpha, const Order& ord) {
    RegimeReport rep;
    const T one(1), two(2), four(4);
    const T dd(d);
    const T half_dm2 = (dd - two) / two;
    const T hardy = half_dm2 * half_dm2;

    auto note = [&](Gate g, const std::string& what, const std::string& lhs, const std::string& rhs) {
        if (g == Gate::Ok) return;
        rep.messages.push_back(what + ": " + lhs + (g == Gate::Boundary ? " == " : " <= ") + rhs +
                               (g == Gate::Boundary ? " (boundary)" : ""));
    };

    Gate gh = ord.gt(a, -hardy);
    rep.hardy_ok = gh == Gate::Ok;
    note(gh, "hardy: need a > -((d-2)/2)^2", "a=" + fmt(a), fmt(-hardy));

    const T lo = four / dd;
    const T hi = four / (dd - two);
    Gate g1 = ord.gt(alpha, lo);
    Gate g2 = ord.gt(hi, alpha);
    rep.intercritical_ok = g1 == Gate::Ok && g2 == Gate::Ok;
    note(g1, "intercritical: need alpha > 4/d", "alpha=" + fmt(alpha), fmt(lo));
    note(g2, "intercritical: need alpha < 4/(d-2)", fmt(hi), "alpha=" + fmt(alpha));

    // First branch: d = 3, 4/3 < alpha <= 2, a > -1/4.
    bool b1 = false;
    std::vector<std::string> why1;
    if (d == 3) {
        Gate ga = ord.gt(alpha, T(4) / T(3));
        Gate gb = ord.gt(two, alpha);
        bool alpha_ok = ga == Gate::Ok && gb != Gate::Violated;
        b1 = alpha_ok && gh == Gate::Ok;
        if (!alpha_ok) why1.push_back("alpha not in (4/3, 2]");
        if (gh != Gate::Ok) why1.push_back("a not above -1/4");
    } else {
        why1.push_back("requires d=3");
    }

    // Second branch: max(2/(d-2), 4/d) < alpha < 4/(d-2), a > -hardy + ((d-2)/2 - 1/alpha)^2.
    const T lo2 = tmax<T>(T(two / (dd - two)), lo);
    Gate gl = ord.gt(alpha, lo2);
    Gate gu = ord.gt(hi, alpha);
    const T shift = half_dm2 - one / alpha;
    const T bound = -hardy + shift * shift;
    Gate ga2 = ord.gt(a, bound);
    bool b2 = gl == Gate::Ok && gu == Gate::Ok && ga2 == Gate::Ok;
    std::vector<std::string> why2;
    if (gl != Gate::Ok)
        why2.push_back(std::string("alpha=") + fmt(alpha) + (gl == Gate::Boundary ? " == " : " <= ") +
                       "max(2/(d-2),4/d)=" + fmt(lo2) + (gl == Gate::Boundary ? " (boundary)" : ""));
    if (gu != Gate::Ok) why2.push_back("alpha not below 4/(d-2)");
    if (ga2 != Gate::Ok)
        why2.push_back("a=" + fmt(a) + (ga2 == Gate::Boundary ? " == " : " <= ") + fmt(bound) +
                       (ga2 == Gate::Boundary ? " (boundary)" : ""));

    rep.main_theorem_ok = (b1 || b2) && rep.hardy_ok && rep.intercritical_ok;
    if (!rep.main_theorem_ok) {
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i];
            return s;
        };
        rep.messages.push_back("main theorem range: first branch fails (" + join(why1) +
                               "), second branch fails (" + join(why2) + ")");
    }

    // Range for the critical-space local theory.
    const T split = dd / (dd + two) * four / (dd - two);
    Gate gs = ord.gt(split, alpha);
    T lwp_bound = -hardy;
    if (gs != Gate::Ok) {
        T s2 = half_dm2 - (one / alpha) * (two * dd / (dd + two));
        lwp_bound = -hardy + s2 * s2;
    }
    Gate gc = ord.gt(a, lwp_bound);
    rep.critical_lwp_ok = gc == Gate::Ok && rep.intercritical_ok;
    note(gc, "critical local theory: need a above", "a=" + fmt(a), fmt(lwp_bound));
    return rep;
}

} // namespace

std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::optional<Rational> exact_decimal(double x) {
    if (!std::isfinite(x)) return std::nullopt;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific);
    std::string s(buf, res.ptr);
    // s looks like [-]D[.DDDD]e[+-]XX
    auto epos = s.find('e');
    std::string mant = s.substr(0, epos);
    int exp10 = std::stoi(s.substr(epos + 1));
    bool neg = false;
    if (!mant.empty() && mant[0] == '-') { neg = true; mant.erase(0, 1); }
    std::string digits;
    int frac = 0;
    bool after = false;
    for (char c : mant) {
        if (c == '.') { after = true; continue; }
        digits.push_back(c);
        if (after) ++frac;
    }
    while (digits.size() > 1 && digits.back() == '0') { digits.pop_back(); --frac; }
    if (digits.size() > 12) return std::nullopt;
    boost::multiprecision::cpp_int num(digits);
    int p = exp10 - frac;
    boost::multiprecision::cpp_int ten = 10;
    Rational r(num);
    if (p > 0) r *= Rational(boost::multiprecision::pow(ten, p));
    if (p < 0) r /= Rational(boost::multiprecision::pow(ten, -p));
    return neg ? Rational(-r) : r;
}

double hardy_constant(int d) { return 0.25 * (d - 2) * (d - 2); }

double a_eff(int d, double a) { return a + 0.25 * (d - 1) * (d - 3); }

double rho_heat(int d, double a) {
    const double h = 0.5 * (d - 2);
    return h - std::sqrt(h * h + a);
}

RegimeReport validate_regime(const ProblemSpec& spec) {
    if (spec.d < 3 || spec.d > 6) throw UnsupportedDimension(spec.d);
    if (!(spec.alpha > 0)) throw ConfigError("alpha must be positive");
    if (spec.mu < -1 || spec.mu > 1) throw ConfigError("mu must be +1, -1, or 0 (linear)");
    auto ea = exact_decimal(spec.a);
    auto ealpha = exact_decimal(spec.alpha);
    RegimeReport rep;
    if (ea && ealpha) {
        rep = evaluate<Rational>(spec.d, *ea, *ealpha, ExactOrder{});
        rep.exact = true;
    } else {
        rep = evaluate<double>(spec.d, spec.a, spec.alpha, FloatOrder{});
        rep.exact = false;
    }
    return rep;
}

Exponents exponents(const ProblemSpec& spec) {
    const int d = spec.d;
    const double al = spec.alpha;
    if (d < 3 || d > 6) throw UnsupportedDimension(d);
    const double hardy = hardy_constant(d);
    if (!(spec.a > -hardy) || !(al > 4.0 / d) || !(al < 4.0 / (d - 2)))
        throw RegimeError("exponents: spec outside the Hardy/intercritical range");
    Exponents e;
    e.hardy = hardy;
    e.s_c = 0.5 * d - 2.0 / al;
    e.sigma = 1.0 / e.s_c - 1.0;
    e.rho_heat = spec.a == 0.0 ? 0.0 : rho_heat(d, spec.a);
    e.q0 = al * (d + 2) / 2.0;
    e.r0 = 2.0 * d * al * (d + 2) / (d * al * (d + 2) - 8.0);
    e.rho_dual = al * (d + 2) / (2.0 * (al + 1.0));
    e.gamma = 2.0 * al * d * (d + 2) / (al * d * (d + 6) - 8.0);
    if (d == 3 && al <= 2.0) {
        e.aux_case = 1;
        e.q = std::numeric_limits<double>::infinity();
        e.r = 2.0;
        e.q1 = 2.0 * al;
        e.r2 = 3.0 * al;
        e.r1 = 6.0 * al / (3.0 * al - 2.0);
    } else {
        e.aux_case = 2;
        e.q1 = 4.0 * al * al / (2.0 - al * (d - 4));
        e.r2 = 2.0 * d * al * al / (d * al - 2.0);
        e.r1 = 2.0 * d * al * al / (d * al * al - 2.0 + al * (d - 4));
        e.q = 4.0 * al / (al * (d - 2) - 2.0);
        e.r = d * al / (al + 1.0);
    }
    return e;
}

bool is_admissible(const Rational& q, const Rational& r, int d) {
    if (q < 2 || r < 2) return false;
    if (q == 2 && r == 2) return false;
    return Rational(2) / q + Rational(d) / r == Rational(d, 2);
}

bool is_admissible(double q, double r, int d) {
    if (!(q >= 2.0) || !(r >= 2.0)) return false;
    if (q == 2.0 && r == 2.0) return false;
    auto er = exact_decimal(r);
    if (std::isinf(q)) {
        if (er) return Rational(d) / *er == Rational(d, 2);
        return std::abs(d / r - 0.5 * d) <= kGateTolerance;
    }
    auto eq = exact_decimal(q);
    if (eq && er) return is_admissible(*eq, *er, d);
    return std::abs(2.0 / q + d / r - 0.5 * d) <= kGateTolerance;
}

Interval sobolev_equiv_range(double s, const ProblemSpec& spec, Direction dir) {
    if (!(s > 0.0 && s < 2.0)) throw ConfigError("sobolev_equiv_range: need 0 < s < 2");
    const int d = spec.d;
    const double rho = spec.a == 0.0 ? 0.0 : rho_heat(d, spec.a);
    Interval iv;
    iv.hi = std::min(1.0, (d - rho) / d);
    iv.lo = dir == Direction::Forward ? (s + rho) / d : std::max(s / d, rho / d);
    return iv;
}

std::optional<RationalPair> q0_r0_exact(int d, double alpha) {
    auto ea = exact_decimal(alpha);
    if (!ea) return std::nullopt;
    const Rational al = *ea;
    RationalPair p;
    p.q = al * (d + 2) / 2;
    p.r = Rational(2 * d) * al * (d + 2) / (Rational(d) * al * (d + 2) - 8);
    return p;
}

std::optional<RationalPair> dual_pair_exact(int d, double alpha) {
    auto ea = exact_decimal(alpha);
    if (!ea) return std::nullopt;
    const Rational al = *ea;
    RationalPair p;
    p.q = al * (d + 2) / (2 * (al + 1));
    p.r = Rational(2) * al * d * (d + 2) / (al * d * (d + 6) - 8);
    return p;
}

} // namespace nlslab
