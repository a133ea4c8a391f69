#include "tvpa/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tvpa {

namespace {

[[noreturn]] void fail_row(std::int64_t t, const std::string& what) {
    throw std::runtime_error("Trace: row t = " + std::to_string(t) + ": " + what);
}

[[noreturn]] void fail_parse(const std::string& path, std::size_t line_no, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

} // namespace

void Trace::validate() const {
    const std::size_t n = y.size();
    if (n < 1 || v.size() != n || x.size() != n)
        throw std::runtime_error("Trace: column lengths disagree or trace is empty");
    if (!a_true.empty() && a_true.size() != n)
        throw std::runtime_error("Trace: a_true column length disagrees");
    if (y[0] != 0 || v[0] != 1 || x[0] != 1)
        fail_row(0, "initial row must be (y,v,x) = (0,1,1)");
    for (std::size_t t = 1; t < n; ++t) {
        if (y[t] > 1) fail_row(static_cast<std::int64_t>(t), "y must be 0 or 1");
        if (v[t] - v[t - 1] != y[t])
            fail_row(static_cast<std::int64_t>(t), "v increment does not match y");
        const std::int64_t dx = x[t] - x[t - 1];
        if (dx > 1 || dx < -2)
            fail_row(static_cast<std::int64_t>(t), "x increment outside {+1,0,-1,-2}");
        if (x[t] < 0 || x[t] > v[t])
            fail_row(static_cast<std::int64_t>(t), "x outside [0, v]");
    }
}

Trace load_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);

    Trace tr;
    std::string line;
    std::size_t line_no = 0;
    bool has_truth = false;

    if (!std::getline(in, line)) fail_parse(path, 1, "empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "t,y,v,x")
        has_truth = false;
    else if (line == "t,y,v,x,a_true")
        has_truth = true;
    else
        fail_parse(path, line_no, "bad header, expected t,y,v,x[,a_true]");

    auto parse_int = [&](const std::string& field) {
        std::int64_t value = 0;
        auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || p != field.data() + field.size())
            fail_parse(path, line_no, "bad integer field '" + field + "'");
        return value;
    };

    std::int64_t expect_t = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        const std::size_t want = has_truth ? 5u : 4u;
        if (fields.size() != want)
            fail_parse(path, line_no, "expected " + std::to_string(want) + " fields, got " +
                                          std::to_string(fields.size()));

        const std::int64_t t = parse_int(fields[0]);
        if (t != expect_t)
            fail_parse(path, line_no, "row out of order: expected t = " + std::to_string(expect_t));
        tr.y.push_back(static_cast<std::uint8_t>(parse_int(fields[1])));
        tr.v.push_back(parse_int(fields[2]));
        tr.x.push_back(parse_int(fields[3]));
        if (has_truth) {
            try {
                tr.a_true.push_back(std::stod(fields[4]));
            } catch (const std::exception&) {
                fail_parse(path, line_no, "bad real field '" + fields[4] + "'");
            }
        }
        ++expect_t;
    }
    if (tr.y.empty()) fail_parse(path, line_no, "no data rows");
    tr.validate();
    return tr;
}

void save_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    const bool truth = trace.has_truth();
    out << (truth ? "t,y,v,x,a_true\n" : "t,y,v,x\n");
    char buf[160];
    for (std::size_t t = 0; t < trace.y.size(); ++t) {
        if (truth)
            std::snprintf(buf, sizeof(buf), "%lld,%d,%lld,%lld,%.17g\n",
                          static_cast<long long>(t), static_cast<int>(trace.y[t]),
                          static_cast<long long>(trace.v[t]), static_cast<long long>(trace.x[t]),
                          trace.a_true[t]);
        else
            std::snprintf(buf, sizeof(buf), "%lld,%d,%lld,%lld\n",
                          static_cast<long long>(t), static_cast<int>(trace.y[t]),
                          static_cast<long long>(trace.v[t]), static_cast<long long>(trace.x[t]));
        out << buf;
    }
    if (!out) throw std::runtime_error("failed writing trace file: " + path);
}

} // namespace tvpa
