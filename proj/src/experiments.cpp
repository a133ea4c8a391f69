#include "tvpa/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "tvpa/changepoint.hpp"
#include "tvpa/moments.hpp"
#include "tvpa/rng.hpp"
#include "tvpa/simulate.hpp"

namespace tvpa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::int64_t> equal_cuts(std::int64_t lo, std::int64_t hi, int k) {
    std::vector<std::int64_t> cuts(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i)
        cuts[static_cast<std::size_t>(i)] = lo + ((hi - lo) * i) / k;
    return cuts;
}

// Dynamic work distribution over replication indices; results go into
// per-replication slots, so execution order cannot affect the aggregate.
template <class Fn>
int parallel_reps(int N, int workers, Fn&& fn) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, N);
    std::atomic<int> next{0};
    std::atomic<int> failures{0};
    auto body = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= N) break;
            try {
                fn(r);
            } catch (const std::exception&) {
                failures.fetch_add(1);
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (std::thread& t : pool) t.join();
    }
    return failures.load();
}

std::vector<double> finite_values(const std::vector<double>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double v : xs)
        if (std::isfinite(v)) out.push_back(v);
    return out;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return kNaN;
    double s = 0.0;
    for (double v : xs) s += v;
    return s / static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return kNaN;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double v : xs) s += (v - m) * (v - m);
    return s / static_cast<double>(xs.size() - 1);
}

double quantile_of(std::vector<double> xs, double p) {
    if (xs.empty()) return kNaN;
    std::sort(xs.begin(), xs.end());
    const double pos = p * static_cast<double>(xs.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= xs.size()) return xs.back();
    const double w = pos - static_cast<double>(i);
    return xs[i] * (1.0 - w) + xs[i + 1] * w;
}

void check_config(const ExperimentConfig& cfg) {
    if (!cfg.params || !cfg.steps)
        throw std::invalid_argument("experiment: schedules are required");
    if (cfg.N < 1) throw std::invalid_argument("experiment: N must be >= 1");
    if (cfg.T < 1 || cfg.params->horizon() < cfg.T || cfg.steps->horizon() < cfg.T)
        throw std::invalid_argument("experiment: bad horizon");
}

Trace replicate(const ExperimentConfig& cfg, int rep) {
    return simulate_chain(*cfg.params, *cfg.steps, cfg.T,
                          CounterRng::substream(cfg.master_seed, static_cast<std::uint64_t>(rep)));
}

std::string table_name(const ExperimentConfig& cfg, const char* fallback) {
    return cfg.label.empty() ? fallback : cfg.label;
}

std::string interval_key(std::int64_t lo, std::int64_t hi) {
    return "(" + std::to_string(lo) + "," + std::to_string(hi) + "]";
}

// Change times implied by the offset schedule: the last index of each regime.
std::vector<std::int64_t> change_times(const ParamSchedule& params) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 1; i < params.segments().size(); ++i)
        out.push_back(params.segments()[i].start - 1);
    return out;
}

SummaryStats run_estimate(const ExperimentConfig& cfg) {
    const int k = cfg.k;
    const std::vector<std::int64_t> cuts = equal_cuts(0, cfg.T, k);
    std::vector<double> truth(static_cast<std::size_t>(k), kNaN);
    for (int i = 1; i <= k; ++i)
        if (cfg.params->constant_over(cuts[static_cast<std::size_t>(i - 1)],
                                      cuts[static_cast<std::size_t>(i)]))
            truth[static_cast<std::size_t>(i - 1)] = cfg.params->value(cuts[static_cast<std::size_t>(i)]);

    const std::size_t n = static_cast<std::size_t>(cfg.N);
    std::vector<std::vector<double>> ahat(static_cast<std::size_t>(k), std::vector<double>(n, kNaN));
    std::vector<std::vector<double>> cover(static_cast<std::size_t>(k), std::vector<double>(n, kNaN));
    std::vector<std::vector<double>> pivot(static_cast<std::size_t>(k), std::vector<double>(n, kNaN));

    const int failures = parallel_reps(cfg.N, cfg.workers, [&](int r) {
        const Trace tr = replicate(cfg, r);
        for (int i = 1; i <= k; ++i) {
            const EstimateResult est = solve_a(tr, cuts[static_cast<std::size_t>(i - 1)],
                                               cuts[static_cast<std::size_t>(i)], cfg.solver);
            if (est.status != SolveStatus::converged) continue;
            const std::size_t ii = static_cast<std::size_t>(i - 1);
            ahat[ii][static_cast<std::size_t>(r)] = est.a_hat;
            const double a0 = truth[ii];
            if (std::isfinite(a0) && est.df_at_hat != 0.0 && est.g_at_hat > 0.0) {
                const auto [lo, hi] = confidence_interval(est, cfg.ci_level);
                cover[ii][static_cast<std::size_t>(r)] = (lo <= a0 && a0 <= hi) ? 1.0 : 0.0;
                pivot[ii][static_cast<std::size_t>(r)] =
                    est.df_at_hat * (est.a_hat - a0) / std::sqrt(est.g_at_hat);
            }
        }
    });

    SummaryStats out;
    out.replications = cfg.N;
    out.failures = failures;
    const std::string table = table_name(cfg, "estimate");
    for (int i = 1; i <= k; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i - 1);
        const std::vector<double> a = finite_values(ahat[ii]);
        CellStats cell;
        cell.table = table;
        cell.cell = "interval_" + std::to_string(i);
        cell.metrics = {
            {"t0", static_cast<double>(cuts[ii])},
            {"t1", static_cast<double>(cuts[ii + 1])},
            {"n", static_cast<double>(a.size())},
            {"mean", mean_of(a)},
            {"variance", variance_of(a)},
        };
        if (std::isfinite(truth[ii])) {
            std::vector<double> sq;
            sq.reserve(a.size());
            for (double v : a) sq.push_back((v - truth[ii]) * (v - truth[ii]));
            cell.metrics.emplace_back("truth", truth[ii]);
            cell.metrics.emplace_back("mse", mean_of(sq));
            cell.metrics.emplace_back("coverage", mean_of(finite_values(cover[ii])));
        }
        out.cells.push_back(std::move(cell));
        for (double p : finite_values(pivot[ii])) out.qq_sample.push_back(p);
    }
    return out;
}

SummaryStats run_pair(const ExperimentConfig& cfg) {
    const int k = cfg.k;
    const std::vector<std::int64_t> cuts = equal_cuts(0, cfg.T, k);
    const std::size_t n = static_cast<std::size_t>(cfg.N);
    std::vector<std::vector<double>> L(static_cast<std::size_t>(k - 2), std::vector<double>(n, kNaN));

    const int failures = parallel_reps(cfg.N, cfg.workers, [&](int r) {
        const Trace tr = replicate(cfg, r);
        std::vector<EstimateResult> est;
        est.reserve(static_cast<std::size_t>(k));
        for (int i = 1; i <= k; ++i) {
            est.push_back(solve_a(tr, cuts[static_cast<std::size_t>(i - 1)],
                                  cuts[static_cast<std::size_t>(i)], cfg.solver));
            if (est.back().status != SolveStatus::converged)
                throw std::runtime_error("interval estimate failed");
        }
        for (int i = 2; i <= k - 1; ++i)
            L[static_cast<std::size_t>(i - 2)][static_cast<std::size_t>(r)] =
                pair_test(est[static_cast<std::size_t>(i - 2)], est[static_cast<std::size_t>(i)]);
    });

    const double crit = chi2_1_quantile(0.95);
    SummaryStats out;
    out.replications = cfg.N;
    out.failures = failures;
    const std::string table = table_name(cfg, "pair_test");
    for (int i = 2; i <= k - 1; ++i) {
        const std::vector<double> Li = finite_values(L[static_cast<std::size_t>(i - 2)]);
        double rej = 0.0;
        for (double v : Li) rej += (v > crit) ? 1.0 : 0.0;
        CellStats cell;
        cell.table = table;
        cell.cell = "L_" + std::to_string(i);
        cell.metrics = {
            {"n", static_cast<double>(Li.size())},
            {"mean", mean_of(Li)},
            {"reject_rate", Li.empty() ? kNaN : rej / static_cast<double>(Li.size())},
        };
        out.cells.push_back(std::move(cell));
    }
    return out;
}

SummaryStats run_scan(const ExperimentConfig& cfg) {
    const std::vector<std::int64_t> changes = change_times(*cfg.params);
    const int s_true = static_cast<int>(changes.size());
    const std::size_t n = static_cast<std::size_t>(cfg.N);
    std::vector<double> cnt_thr(n, kNaN), cnt_chi(n, kNaN), cnt_ratio(n, kNaN);
    std::vector<std::vector<double>> top(4, std::vector<double>(n, kNaN));
    std::vector<std::vector<double>> bracket(changes.size(), std::vector<double>(n, kNaN));
    std::vector<double> bracket_all(n, kNaN);

    ScanConfig scfg;
    scfg.c_t = cfg.c_t;
    scfg.solver = cfg.solver;

    const std::vector<std::int64_t> cuts = equal_cuts(0, cfg.T, cfg.k);
    auto interval_of = [&](std::int64_t t) {
        const auto it = std::lower_bound(cuts.begin() + 1, cuts.end(), t);
        return static_cast<int>(it - cuts.begin());
    };

    const int failures = parallel_reps(cfg.N, cfg.workers, [&](int r) {
        const Trace tr = replicate(cfg, r);
        const ScanResult sc = scan(tr, cfg.k, scfg);
        cnt_thr[static_cast<std::size_t>(r)] = sc.count_threshold;
        cnt_chi[static_cast<std::size_t>(r)] = sc.count_chi;
        cnt_ratio[static_cast<std::size_t>(r)] = sc.count_ratio;

        std::vector<std::pair<double, int>> maxima; // (L value, index)
        for (int i : sc.local_max_indices) maxima.emplace_back(sc.L_at(i), i);
        std::sort(maxima.begin(), maxima.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t m = 0; m < 4 && m < maxima.size(); ++m)
            top[m][static_cast<std::size_t>(r)] = maxima[m].first;

        // Do the top-s_true maxima fall within one interval of each change?
        bool all = s_true > 0;
        for (std::size_t c = 0; c < changes.size(); ++c) {
            const int i_at = interval_of(changes[c]);
            const int i_next = interval_of(std::min(changes[c] + 1, cfg.T));
            bool hit = false;
            for (int m = 0; m < s_true && m < static_cast<int>(maxima.size()); ++m) {
                const int j = maxima[static_cast<std::size_t>(m)].second;
                if (std::abs(j - i_at) <= 1 || std::abs(j - i_next) <= 1) hit = true;
            }
            bracket[c][static_cast<std::size_t>(r)] = hit ? 1.0 : 0.0;
            all = all && hit;
        }
        bracket_all[static_cast<std::size_t>(r)] = all ? 1.0 : 0.0;
    });

    SummaryStats out;
    out.replications = cfg.N;
    out.failures = failures;
    const std::string table = table_name(cfg, "scan");

    auto count_cell = [&](const char* name, const std::vector<double>& xs) {
        const std::vector<double> v = finite_values(xs);
        CellStats cell;
        cell.table = table;
        cell.cell = name;
        cell.metrics = {{"n", static_cast<double>(v.size())}, {"mean", mean_of(v)}};
        for (int j = 0; j <= 4; ++j) {
            double c = 0.0;
            for (double x : v) c += (static_cast<int>(x) == j) ? 1.0 : 0.0;
            cell.metrics.emplace_back("prop_eq_" + std::to_string(j),
                                      v.empty() ? kNaN : c / static_cast<double>(v.size()));
        }
        out.cells.push_back(std::move(cell));
    };
    count_cell("count_threshold", cnt_thr);
    count_cell("count_chi", cnt_chi);
    count_cell("count_ratio", cnt_ratio);

    for (std::size_t m = 0; m < 4; ++m) {
        const std::vector<double> v = finite_values(top[m]);
        CellStats cell;
        cell.table = table;
        cell.cell = "top_max_" + std::to_string(m + 1);
        cell.metrics = {{"n", static_cast<double>(v.size())},
                        {"mean", mean_of(v)},
                        {"max", v.empty() ? kNaN : *std::max_element(v.begin(), v.end())},
                        {"min", v.empty() ? kNaN : *std::min_element(v.begin(), v.end())}};
        out.cells.push_back(std::move(cell));
    }

    for (std::size_t c = 0; c < changes.size(); ++c) {
        CellStats cell;
        cell.table = table;
        cell.cell = "bracket_" + std::to_string(changes[c]);
        cell.metrics = {{"rate", mean_of(finite_values(bracket[c]))}};
        out.cells.push_back(std::move(cell));
    }
    CellStats allc;
    allc.table = table;
    allc.cell = "bracket_all";
    allc.metrics = {{"rate", mean_of(finite_values(bracket_all))}};
    out.cells.push_back(std::move(allc));
    return out;
}

SummaryStats run_refine(const ExperimentConfig& cfg) {
    const std::vector<std::int64_t> changes = change_times(*cfg.params);
    const std::int64_t change = changes.empty() ? cfg.true_change : changes.front();
    const std::size_t n = static_cast<std::size_t>(cfg.N);
    const std::size_t n_stages = static_cast<std::size_t>(cfg.q_max + 1);
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> stage_iv(
        n_stages, std::vector<std::pair<std::int64_t, std::int64_t>>(
                      n, {std::int64_t(-1), std::int64_t(-1)}));

    const int failures = parallel_reps(cfg.N, cfg.workers, [&](int r) {
        const Trace tr = replicate(cfg, r);
        const RefineResult rr = refine_interval(tr, cfg.k, cfg.q_max, 0, cfg.solver);
        for (std::size_t q = 0; q < rr.stages.size() && q < n_stages; ++q)
            stage_iv[q][static_cast<std::size_t>(r)] = {rr.stages[q].lo, rr.stages[q].hi};
    });

    SummaryStats out;
    out.replications = cfg.N;
    out.failures = failures;
    const std::string table = table_name(cfg, "refine");
    for (std::size_t q = 0; q < n_stages; ++q) {
        std::map<std::string, int> occurrences;
        int contained = 0, valid = 0;
        double length = kNaN;
        for (const auto& [lo, hi] : stage_iv[q]) {
            if (lo < 0) continue;
            ++valid;
            occurrences[interval_key(lo, hi)] += 1;
            if (lo < change && change <= hi) ++contained;
            length = static_cast<double>(hi - lo);
        }
        CellStats cell;
        cell.table = table;
        cell.cell = "stage_" + std::to_string(q);
        cell.metrics = {{"n", static_cast<double>(valid)},
                        {"contain_rate", valid ? static_cast<double>(contained) / valid : kNaN},
                        {"length", length},
                        {"distinct", static_cast<double>(occurrences.size())}};
        out.cells.push_back(std::move(cell));
        for (const auto& [key, count] : occurrences) {
            CellStats occ;
            occ.table = table + "_intervals";
            occ.cell = "stage" + std::to_string(q) + "_" + key;
            occ.metrics = {{"count", static_cast<double>(count)}};
            out.cells.push_back(std::move(occ));
        }
    }
    return out;
}

SummaryStats run_two_step(const ExperimentConfig& cfg) {
    const std::vector<std::int64_t> changes = change_times(*cfg.params);
    const std::size_t n = static_cast<std::size_t>(cfg.N);
    const std::size_t n_stages = static_cast<std::size_t>(cfg.q_max + 1);
    std::vector<double> detected(n, kNaN);
    // Per change: anchor containment plus per-stage containment of the
    // matched refinement (the one whose anchor span covers the change).
    std::vector<std::vector<double>> anchor_hit(changes.size(), std::vector<double>(n, kNaN));
    std::vector<std::vector<std::vector<double>>> stage_hit(
        changes.size(),
        std::vector<std::vector<double>>(n_stages, std::vector<double>(n, kNaN)));

    TwoStepConfig tcfg;
    tcfg.refine_k = cfg.refine_k;
    tcfg.q_max = cfg.q_max;
    tcfg.scan.c_t = cfg.c_t;
    tcfg.scan.solver = cfg.solver;

    const int failures = parallel_reps(cfg.N, cfg.workers, [&](int r) {
        const Trace tr = replicate(cfg, r);
        const std::vector<RefineResult> results = two_step_detect(tr, cfg.k, tcfg);
        detected[static_cast<std::size_t>(r)] = static_cast<double>(results.size());
        for (std::size_t c = 0; c < changes.size(); ++c) {
            const std::int64_t chg = changes[c];
            const RefineResult* match = nullptr;
            for (const RefineResult& rr : results) {
                const std::int64_t alo = rr.stages.front().cuts.front();
                const std::int64_t ahi = rr.stages.front().cuts.back();
                if (alo < chg && chg <= ahi) {
                    match = &rr;
                    break;
                }
            }
            anchor_hit[c][static_cast<std::size_t>(r)] = match ? 1.0 : 0.0;
            for (std::size_t q = 0; q < n_stages; ++q) {
                bool hit = false;
                if (match && q < match->stages.size())
                    hit = match->stages[q].lo < chg && chg <= match->stages[q].hi;
                stage_hit[c][q][static_cast<std::size_t>(r)] = hit ? 1.0 : 0.0;
            }
        }
    });

    SummaryStats out;
    out.replications = cfg.N;
    out.failures = failures;
    const std::string table = table_name(cfg, "two_step");

    const std::vector<double> det = finite_values(detected);
    CellStats dcell;
    dcell.table = table;
    dcell.cell = "n_detected";
    dcell.metrics = {{"n", static_cast<double>(det.size())}, {"mean", mean_of(det)}};
    for (int j = 0; j <= 4; ++j) {
        double c = 0.0;
        for (double x : det) c += (static_cast<int>(x) == j) ? 1.0 : 0.0;
        dcell.metrics.emplace_back("prop_eq_" + std::to_string(j),
                                   det.empty() ? kNaN : c / static_cast<double>(det.size()));
    }
    out.cells.push_back(std::move(dcell));

    for (std::size_t c = 0; c < changes.size(); ++c) {
        CellStats cell;
        cell.table = table;
        cell.cell = "change_" + std::to_string(changes[c]);
        cell.metrics = {{"anchor_rate", mean_of(finite_values(anchor_hit[c]))}};
        for (std::size_t q = 0; q < n_stages; ++q)
            cell.metrics.emplace_back("stage" + std::to_string(q) + "_contain_rate",
                                      mean_of(finite_values(stage_hit[c][q])));
        out.cells.push_back(std::move(cell));
    }
    return out;
}

SummaryStats run_locate(const ExperimentConfig& cfg) {
    const std::int64_t t0 = cfg.locate_t0;
    const std::int64_t t1 = cfg.locate_t1 > 0 ? cfg.locate_t1 : cfg.T;
    const std::int64_t R = cfg.true_change;
    const std::size_t n = static_cast<std::size_t>(cfg.N);
    std::vector<double> tau(n, kNaN), ahat(n, kNaN);

    const int failures = parallel_reps(cfg.N, cfg.workers, [&](int r) {
        const Trace tr = replicate(cfg, r);
        const LocateResult res = locate(tr, t0, t1, cfg.solver);
        tau[static_cast<std::size_t>(r)] = static_cast<double>(res.tau_hat);
        ahat[static_cast<std::size_t>(r)] = res.estimate.a_hat;
    });

    const double Td = static_cast<double>(cfg.T);
    std::vector<double> abs_rel, sq_rel, tau_rel;
    for (double t : finite_values(tau)) {
        const double d = (t - static_cast<double>(R)) / Td;
        abs_rel.push_back(std::fabs(d));
        sq_rel.push_back(d * d);
        tau_rel.push_back(t / Td);
    }

    SummaryStats out;
    out.replications = cfg.N;
    out.failures = failures;
    CellStats cell;
    cell.table = table_name(cfg, "locate");
    cell.cell = "summary";
    cell.metrics = {
        {"n", static_cast<double>(tau_rel.size())},
        {"mean_ahat", mean_of(finite_values(ahat))},
        {"mean_tau", mean_of(finite_values(tau))},
        {"true_change", static_cast<double>(R)},
        {"mean_abs_rel_err", mean_of(abs_rel)},
        {"mean_sq_rel_err", mean_of(sq_rel)},
        {"tau_rel_q025", quantile_of(tau_rel, 0.025)},
        {"tau_rel_q975", quantile_of(tau_rel, 0.975)},
    };
    out.cells.push_back(std::move(cell));
    return out;
}

} // namespace

double CellStats::metric(const std::string& name) const {
    for (const auto& [key, value] : metrics)
        if (key == name) return value;
    throw std::out_of_range("CellStats: no metric '" + name + "' in " + table + "/" + cell);
}

bool CellStats::has_metric(const std::string& name) const {
    for (const auto& [key, value] : metrics)
        if (key == name) return true;
    return false;
}

const CellStats& SummaryStats::cell(const std::string& table, const std::string& cell_name) const {
    for (const CellStats& c : cells)
        if (c.table == table && c.cell == cell_name) return c;
    throw std::out_of_range("SummaryStats: no cell " + table + "/" + cell_name);
}

void SummaryStats::append(SummaryStats other) {
    for (CellStats& c : other.cells) cells.push_back(std::move(c));
    for (double q : other.qq_sample) qq_sample.push_back(q);
    replications += other.replications;
    failures += other.failures;
}

ParamSchedule make_three_segment_offsets(std::int64_t T, double a1, double a2, double a3) {
    if (T < 75 || T % 75 != 0)
        throw std::invalid_argument("three-segment offsets: T must be a positive multiple of 75");
    return ParamSchedule({{1, a1}, {23 * T / 75 + 1, a2}, {2 * T / 3 + 1, a3}}, T);
}

Section4Design make_section4_design(std::int64_t T, double a1, double a2, double a3) {
    if (T < 150 || T % 150 != 0)
        throw std::invalid_argument(
            "section4 design: T must be a positive multiple of 150 so the regime and "
            "vertex-step boundaries are integers");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(T), 0);
    for (std::int64_t t = 1; t <= T; t += 2) bits[static_cast<std::size_t>(t - 1)] = 1;
    for (std::int64_t tt = T / 6; tt <= T / 5; ++tt)
        bits[static_cast<std::size_t>(5 * tt - 1)] = 1;
    return {make_three_segment_offsets(T, a1, a2, a3), StepSchedule::explicit_bits(std::move(bits))};
}

SummaryStats run_replications(const ExperimentConfig& cfg) {
    check_config(cfg);
    switch (cfg.analysis) {
        case Analysis::estimate: return run_estimate(cfg);
        case Analysis::pair_test: return run_pair(cfg);
        case Analysis::scan: return run_scan(cfg);
        case Analysis::refine: return run_refine(cfg);
        case Analysis::two_step: return run_two_step(cfg);
        case Analysis::locate: return run_locate(cfg);
    }
    throw std::logic_error("run_replications: unknown analysis");
}

namespace {

std::uint64_t subrun_seed(std::uint64_t seed, std::uint64_t index) {
    return seed ^ detail::mix64(0xC0FFEE11ull + index);
}

std::string format_p(double p) {
    std::string s = std::to_string(p);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

} // namespace

SummaryStats run_scenario(const ScenarioRequest& req) {
    ExperimentConfig cfg;
    cfg.master_seed = req.seed;
    cfg.workers = req.workers;

    auto pick = [&](std::int64_t def_T, int def_N) {
        cfg.T = req.T > 0 ? req.T : def_T;
        cfg.N = req.N > 0 ? req.N : def_N;
        if (cfg.T < 1000)
            throw std::invalid_argument("scenario: statistical scenarios need T >= 1000");
    };

    if (req.id == "S1" || req.id == "S2") {
        pick(req.id == "S1" ? 7500 : 15000, 1000);
        const Section4Design d = make_section4_design(cfg.T, 1, 1, 1);
        cfg.params = d.params;
        cfg.steps = d.steps;
        cfg.analysis = Analysis::estimate;
        cfg.k = 5;
        cfg.label = "T" + std::to_string(cfg.T);
        return run_replications(cfg);
    }
    if (req.id == "S2b") {
        pick(7500, 1000);
        const Section4Design d = make_section4_design(cfg.T, 1, 1, 0.5);
        cfg.params = d.params;
        cfg.steps = d.steps;
        cfg.analysis = Analysis::estimate;
        cfg.k = 5;
        cfg.label = "mixed";
        return run_replications(cfg);
    }
    if (req.id == "S3") {
        pick(7500, 500);
        SummaryStats all;
        for (int a3 = 0; a3 <= 6; ++a3) {
            const Section4Design d = make_section4_design(cfg.T, 1, 1, a3);
            cfg.params = d.params;
            cfg.steps = d.steps;
            cfg.analysis = Analysis::pair_test;
            cfg.k = 5;
            cfg.label = "a3_" + std::to_string(a3);
            cfg.master_seed = subrun_seed(req.seed, static_cast<std::uint64_t>(a3));
            all.append(run_replications(cfg));
        }
        return all;
    }
    if (req.id == "S4") {
        pick(7500, 500);
        const Section4Design d = make_section4_design(cfg.T, 1, 1, 5);
        cfg.params = d.params;
        cfg.steps = d.steps;
        cfg.analysis = Analysis::refine;
        cfg.k = 5;
        cfg.q_max = 3;
        cfg.label = "refine";
        return run_replications(cfg);
    }
    if (req.id == "S5" || req.id == "S6") {
        pick(60000, 100);
        const Section4Design d = make_section4_design(cfg.T, 1, 5, 1);
        cfg.params = d.params;
        cfg.steps = d.steps;
        cfg.analysis = req.id == "S5" ? Analysis::scan : Analysis::two_step;
        cfg.k = 30;
        cfg.refine_k = 5;
        cfg.q_max = 3;
        cfg.label = req.id == "S5" ? "scan" : "two_step";
        return run_replications(cfg);
    }
    if (req.id == "S7") {
        pick(7500, 1000);
        SummaryStats all;
        const double ps[] = {0.1, 0.25, 0.5, 0.75, 0.9};
        std::uint64_t sub = 0;
        for (double a3 : {1.0, 0.5}) {
            for (double p : ps) {
                cfg.params = make_three_segment_offsets(cfg.T, 1, 1, a3);
                cfg.steps = StepSchedule::bernoulli(p, cfg.T);
                cfg.analysis = Analysis::estimate;
                cfg.k = 5;
                cfg.label = (a3 == 1.0 ? "p" : "mixed_p") + format_p(p);
                cfg.master_seed = subrun_seed(req.seed, sub++);
                all.append(run_replications(cfg));
            }
        }
        return all;
    }
    if (req.id == "S8") {
        pick(7500, 1000);
        SummaryStats all;
        for (int a3 = 0; a3 <= 5; ++a3) {
            cfg.params = make_three_segment_offsets(cfg.T, 1, 1, a3);
            cfg.steps = StepSchedule::explicit_bits(
                std::vector<std::uint8_t>(static_cast<std::size_t>(cfg.T), 1));
            cfg.analysis = Analysis::locate;
            cfg.true_change = 2 * cfg.T / 3 + 1;
            cfg.label = "a3_" + std::to_string(a3);
            cfg.master_seed = subrun_seed(req.seed, static_cast<std::uint64_t>(a3));
            all.append(run_replications(cfg));
        }
        return all;
    }
    if (req.id == "S9") {
        pick(7500, 1000);
        SummaryStats all;
        std::uint64_t sub = 0;
        for (double p : {0.2, 0.4, 0.6, 0.8}) {
            cfg.params = make_three_segment_offsets(cfg.T, 1, 1, 2);
            cfg.steps = StepSchedule::bernoulli(p, cfg.T);
            cfg.analysis = Analysis::locate;
            cfg.true_change = 2 * cfg.T / 3 + 1;
            cfg.label = "p" + format_p(p);
            cfg.master_seed = subrun_seed(req.seed, sub++);
            all.append(run_replications(cfg));
        }
        return all;
    }
    throw std::invalid_argument("run_scenario: unknown scenario id '" + req.id + "'");
}

std::vector<std::pair<double, double>> emit_qq(std::vector<double> samples) {
    if (samples.size() < 20)
        throw std::length_error("emit_qq: need at least 20 samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        pairs.emplace_back(normal_quantile((static_cast<double>(i) + 0.5) / n), samples[i]);
    return pairs;
}

double ks_normal_distance(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("ks_normal_distance: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = normal_cdf(samples[i]);
        d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - F));
    }
    return d;
}

} // namespace tvpa
