// estimate.hpp — interval estimation of the attachment offset by solving
// f_{t0,t1}(a) = x_{t1} with bracketed bisection (f is strictly decreasing in
// a), plus the asymptotic standard error sqrt(g)/|f'| and normal/chi-square
// quantile plumbing.
#pragma once

#include <cstdint>
#include <utility>

#include "tvpa/schedule.hpp"
#include "tvpa/trace.hpp"

namespace tvpa {

struct SolverConfig {
    double residual_tol = 0.01;       // e_r: absolute tolerance on |f(a) - x_{t1}|
    int max_iterations = 200;
    double bracket_low = kOffsetFloor; // -1 + 1e-9
    double bracket_cap = kOffsetMax;   // doubling for the upper endpoint stops here
};

enum class SolveStatus {
    converged,    // |f(a_hat) - x_{t1}| <= e_r
    boundary_low, // x_{t1} at or above the a -> -1 ceiling of f; a_hat pinned at the floor
    no_solution,  // even a = bracket_cap leaves f above x_{t1}
};

const char* to_string(SolveStatus s);

struct EstimateResult {
    double a_hat = 0.0;
    double f_at_hat = 0.0;
    double g_at_hat = 0.0;
    double df_at_hat = 0.0;
    double std_err = 0.0;       // sqrt(g)/|df|; +inf when df = 0
    double ci_lo = 0.0, ci_hi = 0.0;
    double ci_level = 0.95;
    int iterations = 0;         // bisection iterations
    double bracket_width = 0.0; // final a-axis bracket width (solver uncertainty)
    SolveStatus status = SolveStatus::no_solution;
    std::int64_t t0 = 0, t1 = 0;
};

// Estimate a on the window (t0, t1], conditioning on x_{t0}. Brackets the
// root with lower endpoint -1 + 1e-9 (where f is maximal) and an upper
// endpoint found by doubling from 1, then bisects until the residual
// tolerance is met. Boundary and unbracketed cases are reported via status
// rather than exceptions; both can occur in finite samples.
EstimateResult solve_a(const Trace& trace, std::int64_t t0, std::int64_t t1,
                       const SolverConfig& cfg = {});

// a_hat +/- z_{(1+level)/2} sqrt(g)/|f'| for a converged estimate.
std::pair<double, double> confidence_interval(const EstimateResult& est, double level);

// Inverse standard normal CDF (rational approximation, |error| < 1e-8 over
// (0,1); in practice close to full double precision).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double z);

// beta-quantile of chi-square with 1 degree of freedom, via
// P(chi2_1 <= q) = 2 Phi(sqrt(q)) - 1.
double chi2_1_quantile(double beta);

// Upper tail P(chi2_1 > value); the p-value of the change statistic.
double chi2_1_sf(double value);

// (x_{t1} - f_{t0,t1}(a_true)) / sqrt(g_{t0,t1}(a_true)); standard normal in
// the large-T limit, used for CLT/QQ diagnostics.
double standardized_residual(const Trace& trace, std::int64_t t0, std::int64_t t1, double a_true);

} // namespace tvpa
