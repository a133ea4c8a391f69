#include "tvpa/simulate.hpp"

#include <stdexcept>

#include "tvpa/kernel.hpp"

namespace tvpa {

namespace {

void check_horizons(const ParamSchedule& params, const StepSchedule& steps, std::int64_t T) {
    if (T < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
    if (params.horizon() < T || steps.horizon() < T)
        throw std::invalid_argument("simulate: schedules shorter than the requested horizon");
}

void reserve_trace(Trace& tr, std::int64_t T, bool truth) {
    tr.y.reserve(static_cast<std::size_t>(T + 1));
    tr.v.reserve(static_cast<std::size_t>(T + 1));
    tr.x.reserve(static_cast<std::size_t>(T + 1));
    if (truth) tr.a_true.reserve(static_cast<std::size_t>(T + 1));
    tr.y.push_back(0);
    tr.v.push_back(1);
    tr.x.push_back(1);
}

} // namespace

GraphSimResult simulate_graph(const ParamSchedule& params, const StepSchedule& steps,
                              std::int64_t T, CounterRng rng, bool record_truth) {
    check_horizons(params, steps, T);

    GraphState g;
    g.degree.reserve(static_cast<std::size_t>(T + 1));
    g.excess_endpoints.reserve(static_cast<std::size_t>(2 * T));
    g.degree.push_back(1); // initial vertex, degree 1 from the phantom half-edge

    GraphSimResult out;
    reserve_trace(out.trace, T, record_truth);
    if (record_truth) out.trace.a_true.push_back(params.value(1));

    // Draw u with probability proportional to d(u) + a in the pre-step graph.
    auto draw_vertex = [&](double a, std::int64_t t) -> std::int32_t {
        const double denom = static_cast<double>(2 * t - 1) + a * static_cast<double>(g.v);
        const double excess_mass = static_cast<double>(g.excess_endpoints.size());
        if (!g.excess_endpoints.empty() && rng.next_unit() * denom < excess_mass)
            return g.excess_endpoints[rng.next_below(g.excess_endpoints.size())];
        return static_cast<std::int32_t>(rng.next_below(static_cast<std::uint64_t>(g.v)));
    };

    auto bump_degree = [&](std::int32_t u) {
        std::int32_t& d = g.degree[static_cast<std::size_t>(u)];
        if (d == 1) --g.x; // u stops being a leaf
        ++d;
        g.excess_endpoints.push_back(u);
    };

    for (std::int64_t t = 1; t <= T; ++t) {
        const double a = params.value(t);
        const int y = steps.sample(t, rng);
        if (y == 1) {
            const std::int32_t u = draw_vertex(a, t);
            bump_degree(u);
            g.degree.push_back(1); // the new vertex is a leaf
            ++g.v;
            ++g.x;
        } else {
            const std::int32_t u = draw_vertex(a, t);
            const std::int32_t w = draw_vertex(a, t); // independent, with replacement
            bump_degree(u);
            bump_degree(w); // u == w is a self-loop; degree rises by 2
        }
        g.t = t;
        out.trace.y.push_back(static_cast<std::uint8_t>(y));
        out.trace.v.push_back(g.v);
        out.trace.x.push_back(g.x);
        if (record_truth) out.trace.a_true.push_back(a);
    }

    out.final_state = std::move(g);
    return out;
}

GraphSimResult simulate_graph(const ParamSchedule& params, const StepSchedule& steps,
                              std::int64_t T, std::uint64_t seed, bool record_truth) {
    return simulate_graph(params, steps, T, CounterRng(seed), record_truth);
}

Trace simulate_chain(const ParamSchedule& params, const StepSchedule& steps,
                     std::int64_t T, CounterRng rng, ChainState init, bool record_truth) {
    check_horizons(params, steps, T);
    if (init.t != 0 || init.x < 0 || init.v < 1 || init.x > init.v)
        throw std::invalid_argument("simulate_chain: invalid initial state");

    Trace tr;
    reserve_trace(tr, T, record_truth);
    tr.v[0] = init.v;
    tr.x[0] = init.x;
    if (record_truth) tr.a_true.push_back(params.value(1));

    std::int64_t x = init.x;
    std::int64_t v = init.v;
    for (std::int64_t t = 1; t <= T; ++t) {
        const double a = params.value(t);
        const int y = steps.sample(t, rng);
        const MValue mv = m_value(a, t, v);
        const KernelProbs p = transition_probs(x, mv.m, y);
        const double r = rng.next_unit();
        if (r < p.up)
            x += 1;
        else if (r < p.up + p.zero)
            ; // no change
        else if (r < p.up + p.zero + p.down1)
            x -= 1;
        else
            x -= 2;
        v += y;
        tr.y.push_back(static_cast<std::uint8_t>(y));
        tr.v.push_back(v);
        tr.x.push_back(x);
        if (record_truth) tr.a_true.push_back(a);
    }
    return tr;
}

Trace simulate_chain(const ParamSchedule& params, const StepSchedule& steps,
                     std::int64_t T, std::uint64_t seed, ChainState init, bool record_truth) {
    return simulate_chain(params, steps, T, CounterRng(seed), init, record_truth);
}

} // namespace tvpa
