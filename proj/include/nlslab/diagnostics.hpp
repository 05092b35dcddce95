#pragma once

#include "nlslab/evolve.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/grid.hpp"

#include <string>
#include <vector>

namespace nlslab {

enum class WeightKind { Full, Truncated };

// Cutoff profile phi: x^2 on [0,1], 9 on [3,inf), and in between the quintic in x^2 that
// matches value, first and second derivative at both ends.
struct PhiValues { double v, d1, d2, d3, d4; };
PhiValues phi_profile(double x);

struct VirialWeight {
    WeightKind kind = WeightKind::Full;
    double R = 0;
    GridPtr grid;
    // Tabulated on the grid nodes.
    std::vector<double> w, w1, w2, lap, bilap, dlap;  // w, w', w'', Lap w, Lap^2 w, (Lap w)'
    // Tabulation check of |phi'(x)| <= 2|x| and |phi''| <= 2.
    bool bounds_ok = true;
    double max_phi1_ratio = 0;  // max |phi'(x)| / (2|x|)
    double max_phi2 = 0;        // max |phi''|

    static VirialWeight full(const GridPtr& g);
    static VirialWeight truncated(const GridPtr& g, double R);
};

double variance(const RadialField& u, const VirialWeight& w);
double virial_first_derivative(const RadialField& u, const VirialWeight& w);
double virial_first_derivative(const RadialField& u, const VirialWeight& w, RadialOperator& op);
double virial_rhs_full(const Observables& o, const ProblemSpec& spec);
double virial_rhs_full(const RadialField& u, const ProblemSpec& spec, bool origin_correction = true);
double virial_rhs_truncated(const RadialField& u, const VirialWeight& w, const ProblemSpec& spec,
                            bool origin_correction = true);
double virial_rhs_truncated(const RadialField& u, const VirialWeight& w, const ProblemSpec& spec,
                            RadialOperator& op, const Observables& o);

enum class Verdict { Scatter, Blowup, AboveThreshold, Boundary };
std::string to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Boundary;
    double energy_product = 0;   // M^sigma E_a
    double kinetic_product = 0;  // ||u||_2^sigma ||u||_{H_a^1}
    double E_thresh = 0, K_thresh = 0;
    double tol = 0;
    int mu = -1;
};

inline constexpr double kClassifyTolerance = 1e-3;

Classification classify(const Observables& o, const ProblemSpec& spec, const Thresholds& th,
                        double tol = kClassifyTolerance);
Classification classify(const RadialField& u0, const ProblemSpec& spec, const Thresholds& th,
                        double tol = kClassifyTolerance, bool origin_correction = true);

struct CoercivityReport {
    bool applicable = false;     // focusing only
    bool hypothesis_ok = false;  // M^sigma E <= (1 - delta) E_thresh
    char regime = '-';           // 'a' below the kinetic threshold, 'b' above
    double delta = 0;
    double delta_prime = 0;      // 1 - kinetic_product / K_thresh in case (a)
    double energy_ratio = 0, kinetic_ratio = 0;
    double lhs_a_ii = 0;         // K - alpha d / (2(alpha+2)) P
    double eps = 0;
    double lhs_b_ii = 0;         // (1+eps) K - alpha d / (2(alpha+2)) P
    double c_bound = 0;          // case (a): lower bound for lhs_a_ii / K from sharp GN; case (b): -lhs_b_ii
    bool assertion_ok = false;
    std::string note;
};

// delta < 0 selects the largest admissible gap, 1 - M^sigma E / E_thresh.
CoercivityReport coercivity_report(const Observables& o, const ProblemSpec& spec, const Thresholds& th,
                                   double delta = -1, double eps = 0.01);
CoercivityReport coercivity_report(const RadialField& u, const ProblemSpec& spec, const Thresholds& th,
                                   double delta = -1, double eps = 0.01, bool origin_correction = true);

enum class Fate { ScatterConsistent, BlowupConsistent, Inconclusive };
std::string to_string(Fate f);

struct FateOptions {
    double kinetic_growth = 10.0;
    double decay_factor = 3.0;     // on ||u||_{alpha+2}
    double kinetic_tol = 0.1;
    double early_fraction = 0.25;  // early window as a fraction of the run length
    int final_window = 5;          // samples used for the concavity test
};

struct FateReport {
    Fate fate = Fate::Inconclusive;
    double kinetic_growth = 0;     // max K / K(0)
    double lp_decay = 0;           // max ||u||_{alpha+2} / final
    double kinetic_excess = 0;     // max K / max early K - 1
    bool variance_concave = false;
    std::string reason;
};

FateReport detect_fate(const TimeSeries& ts, const ProblemSpec& spec, const FateOptions& opts = {});

// "true"/"false" for Scatter and Blowup verdicts, "n/a" when the classifier makes no prediction.
std::string concordance(Verdict v, Fate f);

} // namespace nlslab
