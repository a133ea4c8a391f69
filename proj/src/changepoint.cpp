#include "tvpa/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tvpa/moments.hpp"

namespace tvpa {

double pair_test(const EstimateResult& e1, const EstimateResult& e2) {
    if (e1.status != SolveStatus::converged || e2.status != SolveStatus::converged)
        throw std::invalid_argument("pair_test: both estimates must be converged");
    if (e1.df_at_hat == 0.0 || e2.df_at_hat == 0.0)
        throw std::domain_error("pair_test: degenerate derivative f' = 0");
    const double var = e2.g_at_hat / (e2.df_at_hat * e2.df_at_hat) +
                       e1.g_at_hat / (e1.df_at_hat * e1.df_at_hat);
    if (!(var > 0.0) || !std::isfinite(var))
        throw std::domain_error("pair_test: degenerate variance");
    const double d = e2.a_hat - e1.a_hat;
    return d * d / var;
}

namespace {

EstimateResult solve_or_throw(const Trace& trace, std::int64_t t0, std::int64_t t1,
                              const SolverConfig& solver, const std::string& what) {
    EstimateResult e = solve_a(trace, t0, t1, solver);
    if (e.status != SolveStatus::converged)
        throw std::runtime_error(what + " (" + std::to_string(t0) + ", " + std::to_string(t1) +
                                 "]: estimate " + to_string(e.status));
    return e;
}

std::vector<std::int64_t> equal_cuts(std::int64_t lo, std::int64_t hi, int k) {
    std::vector<std::int64_t> cuts(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i)
        cuts[static_cast<std::size_t>(i)] = lo + ((hi - lo) * i) / k;
    return cuts;
}

} // namespace

ScanResult scan(const Trace& trace, int k, const ScanConfig& cfg) {
    const std::int64_t T = trace.horizon();
    if (k < 4) throw std::invalid_argument("scan: need k >= 4");
    if (T / k < cfg.min_interval_len)
        throw std::length_error("scan: intervals of length " + std::to_string(T / k) +
                                " are below the estimable minimum");

    ScanResult r;
    r.k = k;
    r.boundaries = equal_cuts(0, T, k);
    r.estimates.reserve(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
        try {
            r.estimates.push_back(solve_or_throw(trace, r.boundaries[static_cast<std::size_t>(i - 1)],
                                                 r.boundaries[static_cast<std::size_t>(i)],
                                                 cfg.solver, "scan interval " + std::to_string(i)));
        } catch (const std::exception& e) {
            throw std::runtime_error("scan: interval " + std::to_string(i) + ": " + e.what());
        }
    }

    r.L.reserve(static_cast<std::size_t>(k - 2));
    for (int i = 2; i <= k - 1; ++i)
        r.L.push_back(pair_test(r.estimates[static_cast<std::size_t>(i - 2)],
                                r.estimates[static_cast<std::size_t>(i)]));

    // Local maxima over existing neighbors; boundary indices qualify against
    // their single neighbor, plateaus resolve to the smaller index.
    for (int i = 2; i <= k - 1; ++i) {
        const bool left_ok = (i == 2) || r.L_at(i) > r.L_at(i - 1);
        const bool right_ok = (i == k - 1) || r.L_at(i) >= r.L_at(i + 1);
        if (left_ok && right_ok) r.local_max_indices.push_back(i);
    }

    r.threshold_ct = cfg.c_t > 0.0 ? cfg.c_t : std::sqrt(static_cast<double>(T));
    r.threshold_chi = chi2_1_quantile(1.0 - 0.01 / static_cast<double>(k));

    std::vector<double> maxima;
    maxima.reserve(r.local_max_indices.size());
    for (int i : r.local_max_indices) maxima.push_back(r.L_at(i));
    for (double L : maxima) {
        if (L > r.threshold_ct) ++r.count_threshold;
        if (L > r.threshold_chi) ++r.count_chi;
    }

    if (maxima.size() < 2) {
        r.count_ratio = static_cast<int>(maxima.size());
    } else {
        std::sort(maxima.begin(), maxima.end(), std::greater<>());
        int best = 1;
        double best_ratio = -1.0;
        for (std::size_t i = 0; i + 1 < maxima.size(); ++i) {
            const double ratio = maxima[i + 1] > 0.0
                                     ? maxima[i] / maxima[i + 1]
                                     : std::numeric_limits<double>::infinity();
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best = static_cast<int>(i) + 1;
            }
        }
        r.count_ratio = best;
    }
    return r;
}

namespace {

RefineResult refine_core(const Trace& trace, std::int64_t anchor_lo, std::int64_t anchor_hi,
                         int k, int q_max, std::int64_t min_len, const SolverConfig& solver,
                         std::int64_t min_interval_len) {
    if (k < 5) throw std::invalid_argument("refine: need k >= 5");
    if (anchor_lo < 0 || anchor_hi <= anchor_lo || anchor_hi > trace.horizon())
        throw std::invalid_argument("refine: bad span");
    if ((anchor_hi - anchor_lo) / k < min_interval_len)
        throw std::length_error("refine: span too short to split into estimable intervals");

    RefineResult res;
    std::int64_t lo = anchor_lo, hi = anchor_hi;

    for (int stage = 0; stage <= q_max; ++stage) {
        const std::vector<std::int64_t> cuts = equal_cuts(lo, hi, k);
        const int first = (stage == 0) ? 2 : 1;
        const int last = (stage == 0) ? k - 1 : k;

        std::vector<double> ltilde;
        ltilde.reserve(static_cast<std::size_t>(last - first + 1));
        int j_hat = first;
        double best = -1.0;
        for (int i = first; i <= last; ++i) {
            const EstimateResult left = solve_or_throw(
                trace, anchor_lo, cuts[static_cast<std::size_t>(i - 1)], solver, "refine left of");
            const EstimateResult right = solve_or_throw(
                trace, cuts[static_cast<std::size_t>(i)], anchor_hi, solver, "refine right of");
            const double L = std::fabs(left.a_hat - right.a_hat);
            ltilde.push_back(L);
            if (L > best) {
                best = L;
                j_hat = i;
            }
        }

        // Union of three consecutive parts around the argmax. Stage 0 never
        // touches the outermost parts; later stages clamp at the edges.
        int u_lo, u_hi;
        if (stage == 0) {
            if (j_hat == 2) {
                u_lo = 2;
                u_hi = 4;
            } else if (j_hat == k - 1) {
                u_lo = k - 3;
                u_hi = k - 1;
            } else {
                u_lo = j_hat - 1;
                u_hi = j_hat + 1;
            }
        } else {
            if (j_hat == 1) {
                u_lo = 1;
                u_hi = 3;
            } else if (j_hat == k) {
                u_lo = k - 2;
                u_hi = k;
            } else {
                u_lo = j_hat - 1;
                u_hi = j_hat + 1;
            }
        }

        lo = cuts[static_cast<std::size_t>(u_lo - 1)];
        hi = cuts[static_cast<std::size_t>(u_hi)];

        RefineStage st;
        st.lo = lo;
        st.hi = hi;
        st.cuts = cuts;
        st.l_tilde = std::move(ltilde);
        st.candidate_first = first;
        st.j_hat = j_hat;
        res.stages.push_back(std::move(st));

        if (hi - lo <= min_len) break;
        if ((hi - lo) / k < min_interval_len) break; // next split would be sub-estimable
    }

    res.final_lo = lo;
    res.final_hi = hi;
    return res;
}

} // namespace

RefineResult refine_interval(const Trace& trace, int k, int q_max, std::int64_t min_len,
                             const SolverConfig& solver) {
    return refine_core(trace, 0, trace.horizon(), k, q_max, min_len, solver, 100);
}

RefineResult refine_on(const Trace& trace, std::int64_t lo, std::int64_t hi, int k,
                       int q_max, std::int64_t min_len, const SolverConfig& solver) {
    return refine_core(trace, lo, hi, k, q_max, min_len, solver, 100);
}

std::vector<RefineResult> two_step_detect(const Trace& trace, int k, const TwoStepConfig& cfg) {
    const ScanResult sc = scan(trace, k, cfg.scan);
    int s_hat = 0;
    switch (cfg.count_method) {
        case CountMethod::threshold: s_hat = sc.count_threshold; break;
        case CountMethod::chi: s_hat = sc.count_chi; break;
        case CountMethod::ratio: s_hat = sc.count_ratio; break;
    }
    std::vector<RefineResult> out;
    if (s_hat <= 0) return out;

    // Top s_hat local maxima by L value, then processed left to right.
    std::vector<int> selected = sc.local_max_indices;
    std::stable_sort(selected.begin(), selected.end(),
                     [&](int a, int b) { return sc.L_at(a) > sc.L_at(b); });
    if (static_cast<int>(selected.size()) > s_hat) selected.resize(static_cast<std::size_t>(s_hat));
    std::sort(selected.begin(), selected.end());

    for (std::size_t idx = 0; idx < selected.size(); ++idx) {
        const int j = selected[idx];
        // Expand one interval either side, stopping at the previous/next
        // selected index so regions never cross another detected change.
        std::int64_t j1 = j - 2;
        if (idx > 0) j1 = std::max<std::int64_t>(j1, selected[idx - 1]);
        std::int64_t j2 = j + 2;
        if (idx + 1 < selected.size()) j2 = std::min<std::int64_t>(j2, selected[idx + 1]);
        const int ilo = static_cast<int>(std::max<std::int64_t>(j1 + 1, 1));
        const int ihi = static_cast<int>(std::min<std::int64_t>(j2 - 1, k));
        const std::int64_t lo = sc.boundaries[static_cast<std::size_t>(ilo - 1)];
        const std::int64_t hi = sc.boundaries[static_cast<std::size_t>(ihi)];
        out.push_back(refine_on(trace, lo, hi, cfg.refine_k, cfg.q_max, cfg.min_len, cfg.scan.solver));
    }
    return out;
}

LocateResult locate(const Trace& trace, std::int64_t t0, std::int64_t t1,
                    const SolverConfig& solver) {
    if (t1 - t0 < 3)
        throw std::invalid_argument("locate: window too short for an interior argmax");
    EstimateResult est = solve_a(trace, t0, t1, solver);
    if (est.status == SolveStatus::no_solution)
        throw std::runtime_error("locate: pooled estimate failed on (" + std::to_string(t0) +
                                 ", " + std::to_string(t1) + "]");

    const std::vector<double> xhat =
        mean_path(est.a_hat, t0, static_cast<double>(trace.x[static_cast<std::size_t>(t0)]),
                  trace, t1);

    LocateResult res;
    res.t0 = t0;
    res.t1 = t1;
    res.estimate = est;
    res.diagnostic.resize(xhat.size());
    for (std::size_t i = 0; i < xhat.size(); ++i)
        res.diagnostic[i] =
            std::fabs(xhat[i] - static_cast<double>(trace.x[static_cast<std::size_t>(t0) + i]));

    // First argmax over the open interior (t0, t1).
    std::int64_t arg = t0 + 1;
    double best = -1.0;
    for (std::int64_t t = t0 + 1; t <= t1 - 1; ++t) {
        const double d = res.diagnostic[static_cast<std::size_t>(t - t0)];
        if (d > best) {
            best = d;
            arg = t;
        }
    }
    res.tau_hat = arg + 1;
    res.peak_value = best;
    return res;
}

std::vector<double> oracle_gap(const ParamSchedule& truth, const Trace& trace,
                               std::int64_t S, std::int64_t T_end, double a_hat) {
    const double xS = static_cast<double>(trace.x[static_cast<std::size_t>(S)]);
    const std::vector<double> truth_path = mean_path_scheduled(truth, S, xS, trace, T_end);
    const std::vector<double> fit_path = mean_path(a_hat, S, xS, trace, T_end);
    std::vector<double> h(truth_path.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        h[i] = std::fabs(truth_path[i] - fit_path[i]);
    return h;
}

} // namespace tvpa
