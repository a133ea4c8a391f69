// tvpa — simulate the time-varying preferential attachment process and run
// offset estimation / change-point analysis on trace files.
#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvpa/changepoint.hpp"
#include "tvpa/estimate.hpp"
#include "tvpa/experiments.hpp"
#include "tvpa/report.hpp"
#include "tvpa/simulate.hpp"
#include "tvpa/trace.hpp"

namespace {

using namespace tvpa;

struct SimulateOpts {
    std::string preset = "section4";
    std::int64_t T = 7500;
    double a1 = 1.0, a2 = 1.0, a3 = 1.0;
    double p = 0.5;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string sim = "graph";
    std::string out;
    bool no_truth = false;
};

int cmd_simulate(const SimulateOpts& o) {
    std::uint64_t seed = o.seed;
    if (!o.seed_given) {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }

    ParamSchedule params = (o.a1 == o.a2 && o.a2 == o.a3)
                               ? ParamSchedule::constant(o.a1, o.T)
                               : make_three_segment_offsets(o.T, o.a1, o.a2, o.a3);
    StepSchedule steps = [&] {
        if (o.preset == "section4") return make_section4_design(o.T, o.a1, o.a2, o.a3).steps;
        if (o.preset == "allvertex")
            return StepSchedule::explicit_bits(
                std::vector<std::uint8_t>(static_cast<std::size_t>(o.T), 1));
        if (o.preset == "bernoulli") return StepSchedule::bernoulli(o.p, o.T);
        throw CLI::ValidationError("--preset must be section4, allvertex or bernoulli");
    }();

    Trace trace;
    if (o.sim == "graph")
        trace = simulate_graph(params, steps, o.T, seed, !o.no_truth).trace;
    else if (o.sim == "chain")
        trace = simulate_chain(params, steps, o.T, seed, {}, !o.no_truth);
    else
        throw CLI::ValidationError("--sim must be graph or chain");

    save_trace_csv(trace, o.out);
    std::printf("T=%lld v_T=%lld x_T=%lld seed=%llu -> %s\n", static_cast<long long>(o.T),
                static_cast<long long>(trace.v.back()), static_cast<long long>(trace.x.back()),
                static_cast<unsigned long long>(seed), o.out.c_str());
    return 0;
}

void print_estimate(const EstimateResult& est) {
    std::printf("(%lld, %lld]: a_hat=%.6g status=%s std_err=%.4g ci%.0f%%=[%.6g, %.6g] "
                "f=%.6g iters=%d\n",
                static_cast<long long>(est.t0), static_cast<long long>(est.t1), est.a_hat,
                to_string(est.status), est.std_err, est.ci_level * 100.0, est.ci_lo, est.ci_hi,
                est.f_at_hat, est.iterations);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-varying preferential attachment: simulation and change-point inference"};
    app.require_subcommand(1);
    app.set_config("--config");

    // simulate
    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "generate a trace CSV");
    c_sim->add_option("--preset", sim.preset, "section4 | allvertex | bernoulli");
    c_sim->add_option("--T", sim.T, "horizon")->required();
    c_sim->add_option("--a1", sim.a1, "offset on the first regime");
    c_sim->add_option("--a2", sim.a2, "offset on the middle regime");
    c_sim->add_option("--a3", sim.a3, "offset on the last regime");
    c_sim->add_option("--p", sim.p, "vertex-step probability (bernoulli preset)");
    c_sim->add_option("--seed", sim.seed, "master seed (default: system entropy)")
        ->each([&](const std::string&) { sim.seed_given = true; });
    c_sim->add_option("--sim", sim.sim, "graph | chain");
    c_sim->add_option("--out", sim.out, "output trace CSV")->required();
    c_sim->add_flag("--no-truth", sim.no_truth, "omit the a_true column");

    // shared inference options
    std::string trace_path, out_path, series_path, mode = "scan";
    std::int64_t from = 0, to = 0, from2 = 0, to2 = 0;
    double er = 0.01, level = 0.95, ct = -1.0;
    int k = 5, refine_k = 5, qmax = 3, workers = 0;

    CLI::App* c_est = app.add_subcommand("estimate", "estimate the offset on (from, to]");
    CLI::App* c_test = app.add_subcommand("test", "change test between (from, to] and (from2, to2]");
    CLI::App* c_detect = app.add_subcommand("detect", "scan / refine / two-step change detection");
    CLI::App* c_locate = app.add_subcommand("locate", "point location of a change in (from, to]");
    for (CLI::App* c : {c_est, c_test, c_detect, c_locate}) {
        c->add_option("--trace", trace_path, "input trace CSV")->required();
        c->add_option("--er", er, "solver residual tolerance");
        c->add_option("--out", out_path, "JSON report path");
    }
    c_est->add_option("--from", from, "window start")->required();
    c_est->add_option("--to", to, "window end")->required();
    c_est->add_option("--level", level, "confidence level");
    c_test->add_option("--from", from)->required();
    c_test->add_option("--to", to)->required();
    c_test->add_option("--from2", from2)->required();
    c_test->add_option("--to2", to2)->required();
    c_detect->add_option("--mode", mode, "scan | refine | two-step");
    c_detect->add_option("--k", k, "number of intervals");
    c_detect->add_option("--ct", ct, "threshold c_T (default sqrt(T))");
    c_detect->add_option("--refine-k", refine_k, "split count inside refinement");
    c_detect->add_option("--qmax", qmax, "refinement stages");
    c_detect->add_option("--series", series_path, "CSV of (i, L_i)");
    c_locate->add_option("--from", from)->required();
    c_locate->add_option("--to", to)->required();
    c_locate->add_option("--series", series_path, "CSV of (t, |xhat - x|)");

    // experiment
    std::string scenario = "S1", outdir = ".";
    std::int64_t exp_T = 0;
    int exp_N = 0;
    std::uint64_t exp_seed = 20240801;
    CLI::App* c_exp = app.add_subcommand("experiment", "run a preset replication study");
    c_exp->add_option("--scenario", scenario, "S1 S2 S2b S3 S4 S5 S6 S7 S8 S9")->required();
    c_exp->add_option("--T", exp_T, "horizon override");
    c_exp->add_option("--N", exp_N, "replication override");
    c_exp->add_option("--seed", exp_seed, "master seed");
    c_exp->add_option("--workers", workers, "worker threads (0 = all cores)");
    c_exp->add_option("--outdir", outdir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_sim->parsed()) return cmd_simulate(sim);

        SolverConfig solver;
        solver.residual_tol = er;

        if (c_est->parsed()) {
            const Trace tr = load_trace_csv(trace_path);
            EstimateResult est = solve_a(tr, from, to, solver);
            if (est.status == SolveStatus::converged) {
                est.ci_level = level;
                const auto [lo, hi] = confidence_interval(est, level);
                est.ci_lo = lo;
                est.ci_hi = hi;
            }
            print_estimate(est);
            if (!out_path.empty()) save_json(to_json(est), out_path);
            return 0;
        }
        if (c_test->parsed()) {
            const Trace tr = load_trace_csv(trace_path);
            const EstimateResult e1 = solve_a(tr, from, to, solver);
            const EstimateResult e2 = solve_a(tr, from2, to2, solver);
            const double L = pair_test(e1, e2);
            const double pval = chi2_1_sf(L);
            std::printf("L=%.6g p_value=%.6g a_hat=(%.6g, %.6g)\n", L, pval, e1.a_hat, e2.a_hat);
            if (!out_path.empty())
                save_json({{"L", L},
                           {"p_value", pval},
                           {"estimate_1", to_json(e1)},
                           {"estimate_2", to_json(e2)}},
                          out_path);
            return 0;
        }
        if (c_detect->parsed()) {
            const Trace tr = load_trace_csv(trace_path);
            ScanConfig scfg;
            scfg.c_t = ct;
            scfg.solver = solver;
            if (mode == "scan") {
                const ScanResult sc = scan(tr, k, scfg);
                std::printf("k=%d local_maxima=%zu counts: threshold=%d chi=%d ratio=%d\n", sc.k,
                            sc.local_max_indices.size(), sc.count_threshold, sc.count_chi,
                            sc.count_ratio);
                if (!out_path.empty()) save_json(to_json(sc), out_path);
                if (!series_path.empty()) {
                    std::vector<std::pair<double, double>> rows;
                    for (int i = 2; i <= sc.k - 1; ++i)
                        rows.emplace_back(static_cast<double>(i), sc.L_at(i));
                    save_series_csv(series_path, "i", "L", rows);
                }
            } else if (mode == "refine") {
                const RefineResult rr = refine_interval(tr, k, qmax, 0, solver);
                std::printf("final interval (%lld, %lld] after %zu stages\n",
                            static_cast<long long>(rr.final_lo),
                            static_cast<long long>(rr.final_hi), rr.stages.size());
                if (!out_path.empty()) save_json(to_json(rr), out_path);
            } else if (mode == "two-step") {
                TwoStepConfig tcfg;
                tcfg.refine_k = refine_k;
                tcfg.q_max = qmax;
                tcfg.scan = scfg;
                const std::vector<RefineResult> results = two_step_detect(tr, k, tcfg);
                std::printf("detected %zu change interval(s)\n", results.size());
                nlohmann::json doc = nlohmann::json::array();
                for (const RefineResult& rr : results) {
                    std::printf("  (%lld, %lld]\n", static_cast<long long>(rr.final_lo),
                                static_cast<long long>(rr.final_hi));
                    doc.push_back(to_json(rr));
                }
                if (!out_path.empty()) save_json({{"detected", doc}}, out_path);
            } else {
                throw CLI::ValidationError("--mode must be scan, refine or two-step");
            }
            return 0;
        }
        if (c_locate->parsed()) {
            const Trace tr = load_trace_csv(trace_path);
            const LocateResult res = locate(tr, from, to, solver);
            std::printf("tau_hat=%lld peak=%.6g a_hat=%.6g\n",
                        static_cast<long long>(res.tau_hat), res.peak_value,
                        res.estimate.a_hat);
            if (!out_path.empty()) save_json(to_json(res), out_path);
            if (!series_path.empty()) {
                std::vector<std::pair<double, double>> rows;
                for (std::size_t i = 0; i < res.diagnostic.size(); ++i)
                    rows.emplace_back(static_cast<double>(res.t0 + static_cast<std::int64_t>(i)),
                                      res.diagnostic[i]);
                save_series_csv(series_path, "t", "gap", rows);
            }
            return 0;
        }
        if (c_exp->parsed()) {
            ScenarioRequest req;
            req.id = scenario;
            req.T = exp_T;
            req.N = exp_N;
            req.seed = exp_seed;
            req.workers = workers;
            const SummaryStats stats = run_scenario(req);
            const std::vector<std::string> tables =
                save_summary_tables(stats, outdir, scenario + "_");
            nlohmann::json manifest = {
                {"scenario", scenario},
                {"T", exp_T},
                {"N", exp_N},
                {"seed", exp_seed},
                {"replications", stats.replications},
                {"failures", stats.failures},
                {"tables", tables},
            };
            save_json(manifest, outdir + "/" + scenario + "_manifest.json");
            std::printf("%s: %d replications, %d failures, %zu tables -> %s\n", scenario.c_str(),
                        stats.replications, stats.failures, tables.size(), outdir.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
