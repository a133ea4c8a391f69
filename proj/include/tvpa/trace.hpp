// trace.hpp — observed time series (t, y_t, v_t, x_t) of the process; the
// sole input to all inference. Row t = 0 is the initial state (0, 1, 1).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tvpa {

struct Trace {
    // All columns are indexed by t = 0..T.
    std::vector<std::uint8_t> y;  // y[0] = 0
    std::vector<std::int64_t> v;  // v[0] = 1
    std::vector<std::int64_t> x;  // x[0] = 1
    std::vector<double> a_true;   // optional ground truth; empty or size T+1

    std::int64_t horizon() const { return static_cast<std::int64_t>(y.size()) - 1; }
    bool has_truth() const { return !a_true.empty(); }

    // Checks the structural invariants: row 0 = (0,1,1), v_t - v_{t-1} = y_t,
    // x_t - x_{t-1} in {+1,0,-1,-2}, 0 <= x_t <= v_t. Throws std::runtime_error
    // naming the offending row.
    void validate() const;
};

// CSV with header `t,y,v,x` (optional 5th column `a_true`), LF line endings.
Trace load_trace_csv(const std::string& path);
void save_trace_csv(const Trace& trace, const std::string& path);

} // namespace tvpa
