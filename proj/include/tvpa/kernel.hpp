// kernel.hpp — one-step transition kernel of the leaf count and the matching
// moment-update matrix.
//
// The step that turns G_t into G_{t+1} uses m_{t+1} and y_{t+1}, where
// m_t = (1+a_t) / (2t - 1 + a_t v_{t-1}) is the selection weight of a single
// leaf. Given the pre-step leaf count x, the leaf increment is
//
//   P(dx = +1) = y (1 - mx)
//   P(dx =  0) = y mx + (1-y)(1 - mx)^2
//   P(dx = -1) = (1-y) [ 2mx(1 - mx) + x m^2 ]
//   P(dx = -2) = (1-y) (x-1) x m^2
//
// which sums to 1 exactly. The x m^2 terms come from edge-step self-loops.
#pragma once

#include <cstdint>

namespace tvpa {

struct KernelProbs {
    double up = 0.0;    // dx = +1
    double zero = 0.0;  // dx =  0
    double down1 = 0.0; // dx = -1
    double down2 = 0.0; // dx = -2
};

// Transition probabilities for pre-step leaf count x, leaf weight m in [0, 1],
// and step kind y in {0, 1}. Requires m*x <= 1 (a leaf set can never carry
// more than the whole selection weight); violations signal an inconsistent
// (x, m) pair and raise std::domain_error.
KernelProbs transition_probs(std::int64_t x, double m, int y);

struct MValue {
    double m = 0.0;  // (1+a) / (2t - 1 + a v_prev)
    double dm = 0.0; // d m / d a = (2t - 1 - v_prev) / (2t - 1 + a v_prev)^2
};

// Leaf weight at step t with v_prev vertices before the step, and its
// a-sensitivity. Throws std::domain_error when the denominator is <= 0.
MValue m_value(double a, std::int64_t t, std::int64_t v_prev);

// Nonconstant entries of the moment-update matrix A_t acting on (x^2, x, 1)',
// plus m, dm/da and the entry a-derivatives used by sensitivity propagation.
// Row 3 is (0, 0, 1); the lower-left entries are 0; a13 = a23 = y.
struct StepMatrix {
    double a11 = 0.0, a12 = 0.0, a13 = 0.0;
    double a22 = 0.0, a23 = 0.0;
    double m = 0.0, dm = 0.0;
    double da11 = 0.0, da12 = 0.0, da22 = 0.0;
};

StepMatrix step_matrix(double a, std::int64_t t, std::int64_t v_prev, int y);

// Matrix entries from a precomputed (m, dm); shared by step_matrix and the
// moment recursion so the formulas live in one place.
StepMatrix step_matrix_from_m(double m, double dm, int y);

} // namespace tvpa
