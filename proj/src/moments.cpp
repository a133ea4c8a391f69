#include "tvpa/moments.hpp"

#include <stdexcept>
#include <string>

#include "tvpa/kernel.hpp"

namespace tvpa {

namespace {

void check_window(const Trace& trace, std::int64_t t0, std::int64_t t1) {
    if (t0 < 0 || t1 < t0 || t1 > trace.horizon())
        throw std::invalid_argument("moments: window [" + std::to_string(t0) + ", " +
                                    std::to_string(t1) + "] outside the trace");
}

} // namespace

MomentState moment_step(const MomentState& state, double a, int y_next, std::int64_t v_at_t) {
    const MValue mv = m_value(a, state.t + 1, v_at_t);
    const StepMatrix A = step_matrix_from_m(mv.m, mv.dm, y_next);
    MomentState next;
    next.t = state.t + 1;
    next.s2 = A.a11 * state.s2 + A.a12 * state.s1 + A.a13;
    next.s1 = A.a22 * state.s1 + A.a23;
    next.ds2 = A.a11 * state.ds2 + A.da11 * state.s2 + A.a12 * state.ds1 + A.da12 * state.s1;
    next.ds1 = A.a22 * state.ds1 + A.da22 * state.s1;
    return next;
}

Moments conditional_moments(double a, std::int64_t t0, double x0,
                            const Trace& trace, std::int64_t t1) {
    check_window(trace, t0, t1);
    if (!(a > -1.0))
        throw std::domain_error("conditional_moments: requires a > -1");

    MomentState s{t0, x0, x0 * x0, 0.0, 0.0};
    for (std::int64_t t = t0 + 1; t <= t1; ++t)
        s = moment_step(s, a, trace.y[static_cast<std::size_t>(t)],
                        trace.v[static_cast<std::size_t>(t - 1)]);
    return {s.s1, s.s2 - s.s1 * s.s1, s.ds1, s.ds2 - 2.0 * s.s1 * s.ds1};
}

double conditional_mean(double a, std::int64_t t0, double x0,
                        const Trace& trace, std::int64_t t1) {
    check_window(trace, t0, t1);
    if (!(a > -1.0))
        throw std::domain_error("conditional_mean: requires a > -1");
    double s1 = x0;
    for (std::int64_t t = t0 + 1; t <= t1; ++t) {
        const MValue mv = m_value(a, t, trace.v[static_cast<std::size_t>(t - 1)]);
        const int y = trace.y[static_cast<std::size_t>(t)];
        const double m = mv.m;
        const double a22 = (y == 1) ? (1.0 - m) : (1.0 - m) * (1.0 - m);
        s1 = a22 * s1 + y;
    }
    return s1;
}

std::vector<double> mean_path(double a, std::int64_t t0, double x0,
                              const Trace& trace, std::int64_t t1) {
    check_window(trace, t0, t1);
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(t1 - t0 + 1));
    double s1 = x0;
    path.push_back(s1);
    for (std::int64_t t = t0 + 1; t <= t1; ++t) {
        const MValue mv = m_value(a, t, trace.v[static_cast<std::size_t>(t - 1)]);
        const int y = trace.y[static_cast<std::size_t>(t)];
        const double m = mv.m;
        const double a22 = (y == 1) ? (1.0 - m) : (1.0 - m) * (1.0 - m);
        s1 = a22 * s1 + y;
        path.push_back(s1);
    }
    return path;
}

std::vector<double> mean_path_scheduled(const ParamSchedule& params, std::int64_t t0, double x0,
                                        const Trace& trace, std::int64_t t1) {
    check_window(trace, t0, t1);
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(t1 - t0 + 1));
    double s1 = x0;
    path.push_back(s1);
    for (std::int64_t t = t0 + 1; t <= t1; ++t) {
        const MValue mv = m_value(params.value(t), t, trace.v[static_cast<std::size_t>(t - 1)]);
        const int y = trace.y[static_cast<std::size_t>(t)];
        const double m = mv.m;
        const double a22 = (y == 1) ? (1.0 - m) : (1.0 - m) * (1.0 - m);
        s1 = a22 * s1 + y;
        path.push_back(s1);
    }
    return path;
}

namespace {

struct Enumerator {
    const ParamSchedule* params;
    const StepSchedule* steps;
    std::int64_t t1;
    std::vector<std::int64_t> v; // v_t indexed from t0, deterministic cumsum of y
    std::int64_t t0;
    double sum1 = 0.0, sum2 = 0.0;

    void walk(std::int64_t t, std::int64_t x, double prob) {
        if (t == t1) {
            const double xd = static_cast<double>(x);
            sum1 += prob * xd;
            sum2 += prob * xd * xd;
            return;
        }
        const int y = steps->bit(t + 1);
        const MValue mv = m_value(params->value(t + 1), t + 1, v[static_cast<std::size_t>(t - t0)]);
        const KernelProbs p = transition_probs(x, mv.m, y);
        if (p.up > 0.0) walk(t + 1, x + 1, prob * p.up);
        if (p.zero > 0.0) walk(t + 1, x, prob * p.zero);
        if (p.down1 > 0.0) walk(t + 1, x - 1, prob * p.down1);
        if (p.down2 > 0.0) walk(t + 1, x - 2, prob * p.down2);
    }
};

} // namespace

ExactMoments brute_force_moments(const ParamSchedule& params, const StepSchedule& steps,
                                 std::int64_t t0, std::int64_t x0, std::int64_t t1) {
    if (steps.is_random())
        throw std::invalid_argument("brute_force_moments: needs an explicit step schedule");
    if (t0 < 0 || t1 < t0 || t1 > steps.horizon() || t1 > params.horizon())
        throw std::invalid_argument("brute_force_moments: bad window");
    if (t1 - t0 > 14)
        throw std::length_error("brute_force_moments: horizon " + std::to_string(t1 - t0) +
                                " exceeds the enumeration cap of 14");
    if (t1 == t0) return {static_cast<double>(x0), 0.0};

    Enumerator e;
    e.params = &params;
    e.steps = &steps;
    e.t0 = t0;
    e.t1 = t1;
    e.v.resize(static_cast<std::size_t>(t1 - t0 + 1));
    std::int64_t vt = 1;
    for (std::int64_t t = 1; t <= t1; ++t) {
        vt += steps.bit(t);
        if (t >= t0) e.v[static_cast<std::size_t>(t - t0)] = vt;
    }
    // v_{t0} itself: redo the prefix in case t0 = 0 (loop above starts at 1).
    std::int64_t v0 = 1;
    for (std::int64_t t = 1; t <= t0; ++t) v0 += steps.bit(t);
    e.v[0] = v0;

    e.walk(t0, x0, 1.0);
    const double mean = e.sum1;
    return {mean, e.sum2 - mean * mean};
}

} // namespace tvpa
