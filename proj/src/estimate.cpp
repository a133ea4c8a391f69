#include "tvpa/estimate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tvpa/moments.hpp"

namespace tvpa {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::boundary_low: return "boundary_low";
        case SolveStatus::no_solution: return "no_solution";
    }
    return "unknown";
}

// Wichura's AS 241 (PPND16) rational approximation.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0, 1)");

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }

    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double chi2_1_quantile(double beta) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::domain_error("chi2_1_quantile: beta must lie in [0, 1)");
    if (beta == 0.0) return 0.0;
    const double z = normal_quantile(0.5 * (1.0 + beta));
    return z * z;
}

double chi2_1_sf(double value) {
    if (value < 0.0) return 1.0;
    return std::erfc(std::sqrt(0.5 * value));
}

EstimateResult solve_a(const Trace& trace, std::int64_t t0, std::int64_t t1,
                       const SolverConfig& cfg) {
    if (t0 < 0 || t0 >= t1 || t1 > trace.horizon())
        throw std::invalid_argument("solve_a: need 0 <= t0 < t1 <= T");
    if (!(cfg.residual_tol > 0.0))
        throw std::invalid_argument("solve_a: residual tolerance must be positive");

    const double target = static_cast<double>(trace.x[static_cast<std::size_t>(t1)]);
    const double x0 = static_cast<double>(trace.x[static_cast<std::size_t>(t0)]);
    auto f = [&](double a) { return conditional_mean(a, t0, x0, trace, t1); };

    EstimateResult res;
    res.t0 = t0;
    res.t1 = t1;

    auto finish = [&](double a_hat, SolveStatus status) {
        const Moments mo = conditional_moments(a_hat, t0, x0, trace, t1);
        res.a_hat = a_hat;
        res.f_at_hat = mo.f;
        res.g_at_hat = mo.g;
        res.df_at_hat = mo.df;
        res.std_err = (mo.df != 0.0) ? std::sqrt(std::max(mo.g, 0.0)) / std::fabs(mo.df)
                                     : std::numeric_limits<double>::infinity();
        res.status = status;
        if (status == SolveStatus::converged && std::isfinite(res.std_err)) {
            const double z = normal_quantile(0.5 * (1.0 + res.ci_level));
            res.ci_lo = a_hat - z * res.std_err;
            res.ci_hi = a_hat + z * res.std_err;
        } else {
            res.ci_lo = res.ci_hi = a_hat;
        }
        return res;
    };

    // f is maximal at the lower bracket endpoint; x at or above that ceiling
    // pins the estimate to the boundary.
    double lo = cfg.bracket_low;
    if (target >= f(lo) - cfg.residual_tol) {
        res.bracket_width = 0.0;
        return finish(lo, SolveStatus::boundary_low);
    }

    double hi = 1.0;
    while (!(f(hi) + cfg.residual_tol < target)) {
        hi *= 2.0;
        if (hi > cfg.bracket_cap) {
            res.bracket_width = std::numeric_limits<double>::infinity();
            return finish(cfg.bracket_cap, SolveStatus::no_solution);
        }
    }

    double mid = 0.5 * (lo + hi);
    bool ok = false;
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::fabs(fm - target) <= cfg.residual_tol) {
            ok = true;
            break;
        }
        if (fm - cfg.residual_tol > target)
            lo = mid; // root lies to the right (f decreasing)
        else
            hi = mid;
    }
    res.iterations = it;
    res.bracket_width = hi - lo;
    return finish(mid, ok ? SolveStatus::converged : SolveStatus::no_solution);
}

std::pair<double, double> confidence_interval(const EstimateResult& est, double level) {
    if (est.status != SolveStatus::converged)
        throw std::invalid_argument("confidence_interval: estimate did not converge");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence_interval: level must lie in (0, 1)");
    if (est.df_at_hat == 0.0)
        throw std::domain_error("confidence_interval: degenerate derivative f' = 0");
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(std::max(est.g_at_hat, 0.0)) / std::fabs(est.df_at_hat);
    return {est.a_hat - half, est.a_hat + half};
}

double standardized_residual(const Trace& trace, std::int64_t t0, std::int64_t t1, double a_true) {
    if (t0 < 0 || t0 >= t1 || t1 > trace.horizon())
        throw std::invalid_argument("standardized_residual: need 0 <= t0 < t1 <= T");
    const double x0 = static_cast<double>(trace.x[static_cast<std::size_t>(t0)]);
    const Moments mo = conditional_moments(a_true, t0, x0, trace, t1);
    if (!(mo.g > 0.0))
        throw std::domain_error("standardized_residual: degenerate conditional variance");
    return (static_cast<double>(trace.x[static_cast<std::size_t>(t1)]) - mo.f) / std::sqrt(mo.g);
}

} // namespace tvpa
