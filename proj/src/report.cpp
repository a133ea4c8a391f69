#include "tvpa/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

namespace tvpa {

namespace {

nlohmann::json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

nlohmann::json to_json(const EstimateResult& est) {
    return {
        {"t0", est.t0},
        {"t1", est.t1},
        {"a_hat", finite_or_null(est.a_hat)},
        {"f_at_hat", finite_or_null(est.f_at_hat)},
        {"g_at_hat", finite_or_null(est.g_at_hat)},
        {"df_at_hat", finite_or_null(est.df_at_hat)},
        {"std_err", finite_or_null(est.std_err)},
        {"ci", {finite_or_null(est.ci_lo), finite_or_null(est.ci_hi)}},
        {"ci_level", est.ci_level},
        {"iterations", est.iterations},
        {"bracket_width", finite_or_null(est.bracket_width)},
        {"status", to_string(est.status)},
    };
}

nlohmann::json to_json(const ScanResult& scan) {
    nlohmann::json estimates = nlohmann::json::array();
    for (const EstimateResult& e : scan.estimates) estimates.push_back(to_json(e));
    nlohmann::json L = nlohmann::json::array();
    for (int i = 2; i <= scan.k - 1; ++i)
        L.push_back({{"i", i}, {"L", finite_or_null(scan.L_at(i))}});
    return {
        {"k", scan.k},
        {"boundaries", scan.boundaries},
        {"estimates", estimates},
        {"L", L},
        {"local_max_indices", scan.local_max_indices},
        {"counts",
         {{"threshold", scan.count_threshold},
          {"chi", scan.count_chi},
          {"ratio", scan.count_ratio}}},
        {"threshold_ct", finite_or_null(scan.threshold_ct)},
        {"threshold_chi", finite_or_null(scan.threshold_chi)},
    };
}

nlohmann::json to_json(const RefineResult& refine) {
    nlohmann::json stages = nlohmann::json::array();
    for (const RefineStage& st : refine.stages) {
        nlohmann::json lt = nlohmann::json::array();
        for (std::size_t i = 0; i < st.l_tilde.size(); ++i)
            lt.push_back({{"i", st.candidate_first + static_cast<int>(i)},
                          {"l_tilde", finite_or_null(st.l_tilde[i])}});
        stages.push_back({{"lo", st.lo},
                          {"hi", st.hi},
                          {"cuts", st.cuts},
                          {"j_hat", st.j_hat},
                          {"l_tilde", lt}});
    }
    return {
        {"stages", stages},
        {"final_interval", {refine.final_lo, refine.final_hi}},
    };
}

nlohmann::json to_json(const LocateResult& locate) {
    return {
        {"t0", locate.t0},
        {"t1", locate.t1},
        {"tau_hat", locate.tau_hat},
        {"peak_value", finite_or_null(locate.peak_value)},
        {"estimate", to_json(locate.estimate)},
    };
}

nlohmann::json to_json(const SummaryStats& stats) {
    nlohmann::json cells = nlohmann::json::array();
    for (const CellStats& c : stats.cells) {
        nlohmann::json metrics;
        for (const auto& [name, value] : c.metrics) metrics[name] = finite_or_null(value);
        cells.push_back({{"table", c.table}, {"cell", c.cell}, {"metrics", metrics}});
    }
    return {
        {"replications", stats.replications},
        {"failures", stats.failures},
        {"cells", cells},
        {"qq_sample_size", stats.qq_sample.size()},
    };
}

std::vector<std::string> save_summary_tables(const SummaryStats& stats, const std::string& dir,
                                             const std::string& prefix) {
    std::filesystem::create_directories(dir);
    // Group cells by table, preserving first-seen order.
    std::vector<std::string> tables;
    std::map<std::string, std::vector<const CellStats*>> grouped;
    for (const CellStats& c : stats.cells) {
        if (grouped.find(c.table) == grouped.end()) tables.push_back(c.table);
        grouped[c.table].push_back(&c);
    }

    std::vector<std::string> written;
    for (const std::string& table : tables) {
        std::vector<std::string> columns;
        std::set<std::string> seen;
        for (const CellStats* c : grouped[table])
            for (const auto& [name, value] : c->metrics)
                if (seen.insert(name).second) columns.push_back(name);

        const std::string path =
            (std::filesystem::path(dir) / (prefix + table + ".csv")).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path);
        out << "cell";
        for (const std::string& col : columns) out << ',' << col;
        out << '\n';
        for (const CellStats* c : grouped[table]) {
            out << c->cell;
            for (const std::string& col : columns) {
                out << ',';
                if (c->has_metric(col)) {
                    char buf[40];
                    std::snprintf(buf, sizeof(buf), "%.10g", c->metric(col));
                    out << buf;
                }
            }
            out << '\n';
        }
        written.push_back(path);
    }
    return written;
}

void save_series_csv(const std::string& path, const std::string& key_header,
                     const std::string& value_header,
                     const std::vector<std::pair<double, double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << key_header << ',' << value_header << '\n';
    char buf[80];
    for (const auto& [k, v] : rows) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", k, v);
        out << buf;
    }
}

void save_json(const nlohmann::json& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << doc.dump(2) << '\n';
}

} // namespace tvpa
