// changepoint.hpp — tests for, counts of, brackets around, and locations of
// offset change points, built on the interval estimator.
//
// Intervals are left-open right-closed throughout: B_i = (c_{i-1}, c_i], and
// an estimate on B_i conditions on x at the left cut.
#pragma once

#include <cstdint>
#include <vector>

#include "tvpa/estimate.hpp"
#include "tvpa/schedule.hpp"
#include "tvpa/trace.hpp"

namespace tvpa {

// Squared standardized difference of two interval estimates:
//   L = (a2 - a1)^2 / (g2/f2'^2 + g1/f1'^2).
// Chi-square with 1 df when both intervals share the same offset; grows
// linearly in T across a jump. Requires both estimates converged.
double pair_test(const EstimateResult& e1, const EstimateResult& e2);

struct ScanConfig {
    std::int64_t min_interval_len = 100; // shortest interval worth estimating
    double c_t = -1.0;                   // threshold; <= 0 means the default sqrt(T)
    SolverConfig solver;
};

struct ScanResult {
    int k = 0;
    std::vector<std::int64_t> boundaries;  // k+1 cut times
    std::vector<EstimateResult> estimates; // per interval, estimates[i-1] is B_i
    std::vector<double> L;                 // L[i-2] is L_i, for i = 2..k-1
    std::vector<int> local_max_indices;    // i-values in [2, k-1]
    // The three change-point-count estimators.
    int count_threshold = 0; // local maxima above c_T
    int count_chi = 0;       // local maxima above chi2_1(1 - 0.01/k)
    int count_ratio = 0;     // argmax of successive ratios of sorted maxima
    double threshold_ct = 0.0, threshold_chi = 0.0;

    double L_at(int i) const { return L[static_cast<std::size_t>(i - 2)]; }
};

// Partition (0, T] into k equal intervals, estimate each, compute L_i from
// the flanking estimates (i-1, i+1), find local maxima and the three counts.
ScanResult scan(const Trace& trace, int k, const ScanConfig& cfg = {});

struct RefineStage {
    std::int64_t lo = 0, hi = 0;    // selected interval V^(q), as (lo, hi]
    std::vector<std::int64_t> cuts; // the k-way split examined at this stage
    std::vector<double> l_tilde;    // per candidate, aligned with candidate_first
    int candidate_first = 1;        // index of the first candidate (2 at stage 0)
    int j_hat = 0;                  // argmax candidate
};

struct RefineResult {
    std::vector<RefineStage> stages; // V, V^(1), ..., nested
    std::int64_t final_lo = 0, final_hi = 0;
};

// One-change-point interval refinement. Splits the current candidate span
// into k parts; for each part B_i computes Ltilde = |a_hat(left of B_i) -
// a_hat(right of B_i)| where "left"/"right" extend to the anchors (the ends
// of the whole span under study), takes the argmax and keeps the union of
// three consecutive parts around it. Stage 0 restricts candidates to the
// interior parts 2..k-1; later stages consider all k. Stops after q_max
// extra stages, or when the span is <= min_len, or when a further split
// would produce sub-estimable intervals.
RefineResult refine_interval(const Trace& trace, int k, int q_max,
                             std::int64_t min_len = 0, const SolverConfig& solver = {});

// Same, restricted to the span (lo, hi] of the trace.
RefineResult refine_on(const Trace& trace, std::int64_t lo, std::int64_t hi, int k,
                       int q_max, std::int64_t min_len = 0, const SolverConfig& solver = {});

enum class CountMethod { threshold, chi, ratio };

struct TwoStepConfig {
    int refine_k = 5;
    int q_max = 3;
    std::int64_t min_len = 0;
    CountMethod count_method = CountMethod::chi;
    ScanConfig scan;
};

// Step 1: scan and estimate the number of change points. Step 2: for each of
// the top-s_hat local maxima, refine the union of the enclosing intervals
// (bounded by the nearest non-selected indices). Empty when s_hat = 0.
std::vector<RefineResult> two_step_detect(const Trace& trace, int k,
                                          const TwoStepConfig& cfg = {});

struct LocateResult {
    std::int64_t tau_hat = 0;            // argmax_t |xhat_t - x_t| + 1
    double peak_value = 0.0;
    std::vector<double> diagnostic;      // |xhat_t - x_t| for t in [t0, t1]
    std::int64_t t0 = 0, t1 = 0;
    EstimateResult estimate;             // the pooled-interval estimate
};

// Point location of a single change inside (t0, t1): fit one offset on the
// whole window, replay the deterministic mean recursion under it, and take
// the first argmax of the gap to the observed series (interior t only).
LocateResult locate(const Trace& trace, std::int64_t t0, std::int64_t t1,
                    const SolverConfig& solver = {});

// Ground-truth diagnostic h(t) = |E(x_t | state at S) - f_{S,t}(a_hat)| for
// t in [S, T_end]: the mean path under the true (possibly changing) schedule
// against the mean path under the constant pooled estimate. Synthetic data
// only; the realized y/v columns come from the trace.
std::vector<double> oracle_gap(const ParamSchedule& truth, const Trace& trace,
                               std::int64_t S, std::int64_t T_end, double a_hat);

} // namespace tvpa
