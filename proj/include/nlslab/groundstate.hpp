#pragma once

#include "nlslab/grid.hpp"
#include "nlslab/params.hpp"

#include <utility>

namespace nlslab {

struct GroundStateOptions {
    double tol = 5e-4;            // relative gradient of log J; limited by the origin discretization when a < 0
    double elliptic_tol = 1e-10;  // relative residual of (L_a + 1) Q = Q^{alpha+1}
    int max_iters = 1000;
    double linear_tol = 1e-13;    // inner PCG tolerance
    double mass_leak_cap = 1e-8;  // boundary mass fraction allowed at R_max
    bool origin_correction = true;
};

struct GroundState {
    ProblemSpec spec;             // as requested; Q belongs to a = min(a, 0)
    RadialField Q;
    double C_a = 0;
    double mass = 0, kinetic_a = 0, lp = 0;
    bool attained = false;
    double stationarity = 0;
    double elliptic_residual = 0;
    int iterations = 0;
    bool monotone_tail = true;
    bool origin_correction = true;
};

struct SharpConstant {
    double direct = 0;   // J(Q), authoritative
    double formula = 0;  // closed form in M(Q) from the Pohozaev relations
    double rel_diff = 0;
    bool ok = false;
};

struct Thresholds {
    double E_thresh = 0, K_thresh = 0, sigma = 0;
    double pohozaev_res1 = 0, pohozaev_res2 = 0;
    // Second route, from the mass/energy/kinetic of Q itself.
    double E_from_Q = 0, K_from_Q = 0;
    double E_route_diff = 0, K_route_diff = 0;
    bool cross_checked = false;
};

double weinstein_functional(const RadialField& u, const ProblemSpec& spec, bool origin_correction = true);
double weinstein_functional(double mass, double kinetic, double lp, const ProblemSpec& spec);

GroundState solve_ground_state(const ProblemSpec& spec, const GridPtr& grid,
                               const GroundStateOptions& opts = {});

// Recomputes every diagnostic of a candidate optimizer (used on cache loads); throws on the
// same conditions as the solver.
GroundState assess_ground_state(const RadialField& Q, const ProblemSpec& spec, const GroundStateOptions& opts = {});

SharpConstant sharp_constant(const GroundState& gs, const ProblemSpec& spec, double tol = 1e-4);

Thresholds thresholds(double C_a, const ProblemSpec& spec);
// Both routes plus Pohozaev residuals; throws NumericalError when strict and the routes
// disagree by more than tol.
Thresholds thresholds(const GroundState& gs, double tol = 1e-4, bool strict = true);

std::pair<double, double> pohozaev_check(const GroundState& gs);
std::pair<double, double> pohozaev_residuals(double mass, double kinetic, double lp, const ProblemSpec& spec);

// Relative residual of the discrete elliptic equation for a given field.
double elliptic_residual(const RadialField& Q, const ProblemSpec& spec, bool origin_correction = true);

} // namespace nlslab
