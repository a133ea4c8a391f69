// moments.hpp — conditional moments of the leaf count under a constant offset
// a, propagated through the exact one-step recursion
//
//   E[(x_{t+1}^2, x_{t+1}, 1)' | state at t] = A_{t+1} (x_t^2, x_t, 1)'
//
// with analytic a-sensitivities carried alongside (product rule through the
// matrix entries). f = E(x_{t1} | x_{t0}), g = Var(x_{t1} | x_{t0}); both are
// functions of a and x_{t0} only once the y/v columns are observed.
#pragma once

#include <cstdint>
#include <vector>

#include "tvpa/schedule.hpp"
#include "tvpa/trace.hpp"

namespace tvpa {

struct MomentState {
    std::int64_t t = 0;
    double s1 = 0.0;  // conditional mean of x_t
    double s2 = 0.0;  // conditional second moment of x_t
    double ds1 = 0.0; // d s1 / d a
    double ds2 = 0.0; // d s2 / d a
};

struct Moments {
    double f = 0.0;  // conditional mean
    double g = 0.0;  // conditional variance
    double df = 0.0; // d f / d a
    double dg = 0.0; // d g / d a
};

// Advance a moment state through the step t -> t+1 (uses m_{t+1}, y_{t+1}).
MomentState moment_step(const MomentState& state, double a, int y_next, std::int64_t v_at_t);

// Propagate from (t0, x0) through the observed y/v columns of `trace` up to
// t1 and return (f, g, df, dg). Requires a > -1 and 0 <= t0 <= t1 <= T.
Moments conditional_moments(double a, std::int64_t t0, double x0,
                            const Trace& trace, std::int64_t t1);

// Mean-only propagation: E(x_{t1} | x_{t0} = x0) under constant a. Cheaper
// than conditional_moments; used inside root bracketing.
double conditional_mean(double a, std::int64_t t0, double x0,
                        const Trace& trace, std::int64_t t1);

// The full mean path: xhat_t for t in [t0, t1] with xhat_{t0} = x0 and
// xhat_t = (1 - m_t)(1 - (1-y_t) m_t) xhat_{t-1} + y_t.
std::vector<double> mean_path(double a, std::int64_t t0, double x0,
                              const Trace& trace, std::int64_t t1);

// Same recursion with a time-varying offset from a schedule (the "truth"
// route of the change-point diagnostics).
std::vector<double> mean_path_scheduled(const ParamSchedule& params, std::int64_t t0, double x0,
                                        const Trace& trace, std::int64_t t1);

struct ExactMoments {
    double mean = 0.0;
    double variance = 0.0;
};

// Validation oracle: exact conditional mean and variance of x_{t1} given
// x_{t0} = x0, obtained by enumerating every dx path in {+1,0,-1,-2}^(t1-t0)
// weighted by the transition kernel. Independent of the matrix recursion.
// steps must be an explicit schedule; t1 - t0 <= 14 (enumeration is
// exponential), otherwise std::length_error.
ExactMoments brute_force_moments(const ParamSchedule& params, const StepSchedule& steps,
                                 std::int64_t t0, std::int64_t x0, std::int64_t t1);

} // namespace tvpa
