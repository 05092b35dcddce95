#pragma once

#include "nlslab/params.hpp"
#include "nlslab/transform.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nlslab {

// Offset radial grid r_j = (j+1/2) h, h = R/N, with quadrature weights omega r^{d-1} h.
struct RadialGrid {
    RadialGrid(int d, int n, double rmax);

    int d;
    int n;
    double rmax;
    double h;
    double omega;               // surface area of the unit sphere in R^d
    std::vector<double> r;
    std::vector<double> weight; // omega r_j^{d-1} h
    std::vector<double> rpow;   // r_j^{(d-1)/2}
    std::vector<double> k2;     // (m pi / R)^2, m = 1..N
};
using GridPtr = std::shared_ptr<const RadialGrid>;
GridPtr make_grid(int d, int n, double rmax);

struct RadialField {
    GridPtr grid;
    std::vector<cplx> u;

    RadialField() = default;
    explicit RadialField(GridPtr g) : grid(std::move(g)), u(grid->n, cplx(0.0)) {}
    RadialField(GridPtr g, std::vector<cplx> values);
    bool valid() const;
    int size() const { return static_cast<int>(u.size()); }
};

// v = r^{(d-1)/2} u; the radial Laplacian becomes d^2/dr^2 - (d-1)(d-3)/(4 r^2).
struct ReducedField {
    GridPtr grid;
    std::vector<cplx> v;
    double a_eff = 0.0;
};

struct Observables {
    double mass = 0, energy = 0, kinetic_a = 0, lp = 0;
    double origin_fraction = 0;  // share of kinetic_a carried by the first node
};

struct HardyForm {
    double value = 0;
    double origin_fraction = 0;
    bool ill_conditioned = false;
};

inline constexpr double kOriginFractionLimit = 0.05;

// Discrete L_a on the reduced samples: DST Laplacian plus a_eff/r^2, plus the calibrated
// first-node correction when enabled. Owns transform scratch space, so one instance per thread.
class RadialOperator {
public:
    RadialOperator(GridPtr g, double a, bool origin_correction = true);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    double a() const { return a_; }
    double a_eff() const { return a_eff_; }
    double kappa() const { return kappa_; }
    bool origin_correction() const { return corrected_; }
    const std::vector<double>& potential() const { return V_; }

    void apply(const cplx* v, cplx* out);
    void apply(const double* v, double* out);
    // Kinetic part only (no potential).
    void laplacian(const cplx* v, cplx* out);
    // Spectral d/dr of the reduced samples.
    void derivative(const cplx* v, cplx* out);
    // Free flow exp(i tau d^2/dr^2).
    void free_flow(cplx* v, double tau);

    // Quadratic form omega h sum Re(conj(v) H v) and the first-node share.
    HardyForm form(const cplx* v);

    double spectrum_lower_bound() const;
    double spectrum_upper_bound() const;

    SineTransform& transform() { return tr_; }

private:
    GridPtr grid_;
    double a_, a_eff_, kappa_;
    bool corrected_;
    std::vector<double> V_;
    SineTransform tr_;
    std::vector<cplx> work_;
    std::vector<double> rwork_;
};

double mass(const RadialField& u);
HardyForm hardy_form(const RadialField& u, double a, bool origin_correction = true);
HardyForm hardy_form(const RadialField& u, RadialOperator& op);
double lp_norm(const RadialField& u, double p);
double lp_power(const RadialField& u, double p);  // ||u||_p^p
Observables energy(const RadialField& u, const ProblemSpec& spec, bool origin_correction = true);
Observables energy(const RadialField& u, const ProblemSpec& spec, RadialOperator& op);

ReducedField to_reduced(const RadialField& u, double a);
RadialField from_reduced(const ReducedField& v);
ReducedField laplacian_halfstep(const ReducedField& v, double tau);

// lambda^{2/alpha} u(lambda r), resampled through the sine series of the reduced field.
// Mass that would leave [0, R] is reported through lost_fraction and the warning hook.
RadialField apply_scaling(const RadialField& u, double lambda, const ProblemSpec& spec,
                          double* lost_fraction = nullptr);

// Same function on another grid of the same dimension (zero beyond the source R_max).
RadialField resample(const RadialField& u, const GridPtr& to);

// Mass fraction carried by r > (1 - layer) R.
double boundary_mass_fraction(const RadialField& u, double layer = 0.1);

// Warnings from numerical routines go through this hook (stderr by default).
void set_warning_handler(std::function<void(const std::string&)> h);
void warn(const std::string& msg);

} // namespace nlslab
