#include "tvpa/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tvpa {

KernelProbs transition_probs(std::int64_t x, double m, int y) {
    if (x < 0)
        throw std::domain_error("transition_probs: negative leaf count");
    if (!(m >= 0.0) || m > 1.0)
        throw std::domain_error("transition_probs: m outside [0, 1]");
    if (y != 0 && y != 1)
        throw std::domain_error("transition_probs: y must be 0 or 1");

    double t = m * static_cast<double>(x);
    if (t > 1.0) {
        // Tolerate rounding at the m*x = 1 boundary; anything larger means the
        // caller's (x, m) pair is inconsistent with a realizable graph state.
        if (t < 1.0 + 64.0 * std::numeric_limits<double>::epsilon())
            t = 1.0;
        else
            throw std::domain_error("transition_probs: m*x = " + std::to_string(t) +
                                    " exceeds 1 (inconsistent state)");
    }
    const double u = 1.0 - t;

    if (y == 1) return {u, t, 0.0, 0.0};

    const double xm2 = static_cast<double>(x) * m * m;
    const double down1 = 2.0 * t * u + xm2;
    const double down2 = static_cast<double>(x - 1) * xm2;
    // Pin the no-change probability so the vector sums to 1; algebraically
    // zero = (1-t)^2 = 1 - (down1 + down2).
    double zero = 1.0 - (down1 + down2);
    if (zero < 0.0) zero = 0.0;
    return {0.0, zero, down1, down2};
}

MValue m_value(double a, std::int64_t t, std::int64_t v_prev) {
    const double denom = static_cast<double>(2 * t - 1) + a * static_cast<double>(v_prev);
    if (!(denom > 0.0))
        throw std::domain_error("m_value: nonpositive denominator at t = " + std::to_string(t));
    const double m = (1.0 + a) / denom;
    const double dm = static_cast<double>(2 * t - 1 - v_prev) / (denom * denom);
    return {m, dm};
}

StepMatrix step_matrix_from_m(double m, double dm, int y) {
    StepMatrix s;
    s.m = m;
    s.dm = dm;
    if (y == 1) {
        s.a11 = 1.0 - 2.0 * m;
        s.a12 = 2.0 - m;
        s.a13 = 1.0;
        s.a22 = 1.0 - m;
        s.a23 = 1.0;
        s.da11 = -2.0 * dm;
        s.da12 = -dm;
        s.da22 = -dm;
    } else {
        const double om = 1.0 - m;
        const double o2m = 1.0 - 2.0 * m;
        s.a11 = o2m * o2m;
        s.a12 = m * (2.0 - 3.0 * m);
        s.a13 = 0.0;
        s.a22 = om * om;
        s.a23 = 0.0;
        s.da11 = -4.0 * o2m * dm;
        s.da12 = (2.0 - 6.0 * m) * dm;
        s.da22 = -2.0 * om * dm;
    }
    return s;
}

StepMatrix step_matrix(double a, std::int64_t t, std::int64_t v_prev, int y) {
    if (y != 0 && y != 1)
        throw std::domain_error("step_matrix: y must be 0 or 1");
    const MValue mv = m_value(a, t, v_prev);
    return step_matrix_from_m(mv.m, mv.dm, y);
}

} // namespace tvpa
