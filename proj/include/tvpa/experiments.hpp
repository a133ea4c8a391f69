// experiments.hpp — replication harness and preset scenarios. Every study
// draws per-replication RNG substreams from (master seed, replication index),
// so results are reproducible and independent of worker count.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvpa/estimate.hpp"
#include "tvpa/schedule.hpp"

namespace tvpa {

struct Section4Design {
    ParamSchedule params;
    StepSchedule steps;
};

// The simulation design used throughout the studies: y_t = 1 for odd t, plus
// extra vertex steps y_{5t} = 1 for integer t in [T/6, T/5]; the offset is a1
// on [1, 23T/75], a2 on (23T/75, 2T/3] and a3 on (2T/3, T]. T must be a
// multiple of 150 so all four boundaries are integers.
Section4Design make_section4_design(std::int64_t T, double a1, double a2, double a3);

// Just the three-segment offset schedule of the design above.
ParamSchedule make_three_segment_offsets(std::int64_t T, double a1, double a2, double a3);

enum class Analysis { estimate, pair_test, scan, refine, two_step, locate };

struct ExperimentConfig {
    std::optional<ParamSchedule> params; // required
    std::optional<StepSchedule> steps;   // required
    std::int64_t T = 0;
    int N = 1;
    std::uint64_t master_seed = 1;
    int k = 5;
    int workers = 0; // 0 -> hardware concurrency
    Analysis analysis = Analysis::estimate;
    SolverConfig solver;
    double ci_level = 0.95;
    std::string label; // table prefix in the summary

    // locate studies: window and the true change location R for error metrics.
    std::int64_t locate_t0 = 0, locate_t1 = 0; // 0,0 -> (0, T]
    std::int64_t true_change = 0;

    // scan / refine / two-step knobs.
    double c_t = -1.0;
    int refine_k = 5;
    int q_max = 3;
};

struct CellStats {
    std::string table;
    std::string cell;
    std::vector<std::pair<std::string, double>> metrics;

    double metric(const std::string& name) const; // throws if absent
    bool has_metric(const std::string& name) const;
};

struct SummaryStats {
    std::vector<CellStats> cells;
    std::vector<double> qq_sample; // standardized pivots pooled across reps
    int replications = 0;
    int failures = 0;

    const CellStats& cell(const std::string& table, const std::string& cell) const;
    void append(SummaryStats other);
};

// Run cfg.N independent replications with derived seeds and aggregate the
// selected analysis. Aggregation reads per-replication slots in index order,
// so the result does not depend on execution order or worker count.
// Per-replication failures are tallied, not fatal.
SummaryStats run_replications(const ExperimentConfig& cfg);

struct ScenarioRequest {
    std::string id;            // S1, S2, S2b, S3, S4, S5, S6, S7, S8, S9
    std::int64_t T = 0;        // 0 -> scenario default
    int N = 0;                 // 0 -> scenario default
    std::uint64_t seed = 20240801;
    int workers = 0;
};

// Preset study catalog:
//   S1/S2  estimator tables at T = 7500 / 15000, constant offset 1
//   S2b    estimator table with a jump to 0.5 in the last third
//   S3     change test size/power over a3 in {0..6}
//   S4     one-change interval refinement
//   S5     scan with the change-point count known (two jumps, k = 30)
//   S6     two-step detection with the count unknown (same design)
//   S7     estimator tables with Bernoulli(p) vertex steps
//   S8     change location with y == 1, a3 grid
//   S9     change location with Bernoulli(p) vertex steps
SummaryStats run_scenario(const ScenarioRequest& req);

// Ordered (theoretical, empirical) normal QQ pairs: sorted samples against
// Phi^{-1}((i - 0.5)/n). Requires at least 20 samples.
std::vector<std::pair<double, double>> emit_qq(std::vector<double> samples);

// Kolmogorov-Smirnov distance of a sample against the standard normal.
double ks_normal_distance(std::vector<double> samples);

} // namespace tvpa
