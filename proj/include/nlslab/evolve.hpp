#pragma once

#include "nlslab/grid.hpp"
#include "nlslab/params.hpp"
#include "nlslab/propagator.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nlslab {

// ExactLinear: the potential (and first-node term) is part of the linear flow, computed by
// LinearPropagator; the diagonal flow carries only mu |u|^alpha.
// PointwisePotential: a_eff / r^2 rides with the nonlinear phase and the linear flow is the
// free d^2/dr^2 flow. Kept for comparison; it loses accuracy badly when a_eff != 0.
enum class SplitMode { ExactLinear, PointwisePotential };

struct IntegratorConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double dt_min = 1e-9;
    double kinetic_cap = 10.0;        // BlowupAbort once kinetic_a > cap * initial
    double sample_every = 0.01;       // time between recorded samples
    double boundary_mass_cap = 1e-6;
    double boundary_layer = 0.1;      // outer fraction of [0, R] counted as boundary
    double tol = 1e-6;                // step-doubling tolerance (relative L2)
    double growth_limit = 0.05;       // kinetic growth allowed in one step
    bool adaptive = true;
    bool origin_correction = true;
    SplitMode split = SplitMode::ExactLinear;
};

enum class Termination { Completed, BlowupAbort, BoundaryAbort };
std::string to_string(Termination t);

struct SimState {
    double t = 0;
    RadialField u;
    long steps_taken = 0;
    double last_dt = 0;
};

struct VirialRecord {
    double V = 0;          // int |x|^2 |u|^2
    double V1 = 0;         // first time derivative
    double rhs_full = 0;   // second time derivative by the identity
    double rhs_truncated = 0;
};

struct Sample {
    double t = 0;
    Observables obs;
    VirialRecord virial;
    double boundary_fraction = 0;
    double dt = 0;
    double lp_norm = 0;    // ||u||_{alpha+2}
};

struct TimeSeries {
    std::vector<Sample> samples;
    Termination termination = Termination::Completed;
    std::string reason;
    long steps = 0;
    long rejected = 0;
    double scattering_norm = 0;  // int int |u|^{q0}, trapezoid over samples
    RadialField final_field;
    std::vector<std::pair<double, RadialField>> snapshots;
};

struct Monitors {
    double virial_truncated_R = 0;  // > 0 enables the truncated virial record
    int snapshot_every = 0;         // keep the field every k samples (0 = never)
    std::function<void(const Sample&)> on_sample;
};

// Strang splitting machinery on reduced samples v = r^{(d-1)/2} u.
class Stepper {
public:
    Stepper(const GridPtr& grid, const ProblemSpec& spec, const IntegratorConfig& cfg);

    void phase(std::vector<cplx>& v, double tau);
    void linear(std::vector<cplx>& v, double tau);
    void strang(std::vector<cplx>& v, double dt);
    double kinetic(const std::vector<cplx>& v);

    RadialOperator& op() { return op_; }
    LinearPropagator& propagator() { return prop_; }

private:
    GridPtr grid_;
    ProblemSpec spec_;
    SplitMode split_;
    RadialOperator op_;
    LinearPropagator prop_;
    std::vector<double> pot_;
};

RadialField phase_halfstep(const RadialField& u, double tau, const ProblemSpec& spec,
                           SplitMode split = SplitMode::ExactLinear);
SimState strang_step(const SimState& s, double dt, const ProblemSpec& spec, const IntegratorConfig& cfg = {});

// Step-size rule: halve on error > tol or kinetic growth > growth_limit (reject), double (capped
// at cfg.dt) when error < tol/16, keep otherwise. Error exactly at tol keeps dt.
struct DtDecision {
    double dt = 0;
    bool reject = false;
};
DtDecision adapt_dt(double dt, double error_estimate, double kinetic_growth, const IntegratorConfig& cfg);

TimeSeries evolve(const RadialField& u0, const ProblemSpec& spec, const IntegratorConfig& cfg,
                  const Monitors& monitors = {});

} // namespace nlslab
