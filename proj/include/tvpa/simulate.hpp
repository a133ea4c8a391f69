// simulate.hpp — two interchangeable generators of the observed series:
// the full multigraph process and the exact leaf-count Markov chain.
#pragma once

#include <cstdint>
#include <vector>

#include "tvpa/rng.hpp"
#include "tvpa/schedule.hpp"
#include "tvpa/trace.hpp"

namespace tvpa {

struct GraphState {
    std::int64_t t = 0;
    std::vector<std::int32_t> degree;            // per-vertex degree
    std::vector<std::int32_t> excess_endpoints;  // vertex u appears degree(u)-1 times
    std::int64_t v = 1;                          // vertex count
    std::int64_t x = 1;                          // leaf count (degree exactly 1)
};

struct ChainState {
    std::int64_t t = 0;
    std::int64_t x = 1;
    std::int64_t v = 1;
};

struct GraphSimResult {
    Trace trace;
    GraphState final_state;
};

// Full multigraph simulation. The initial graph is one vertex whose degree is
// 1 via a phantom half-edge (so the degree sum at time t is 2t+1, matching
// the weight denominator 2t-1 + a v_{t-1} at step t); the phantom contributes
// no excess endpoints. A vertex-step attaches a new leaf to u drawn with
// weight d(u) + a_t; an edge-step draws u and v independently with
// replacement (a repeated draw is a self-loop adding 2 to the degree).
//
// Preferential draws decompose d(u) + a = (d(u)-1) + (1+a): with probability
// (2t-1-v)/(2t-1+av) pick uniformly from excess_endpoints, otherwise pick a
// uniform vertex. Valid for every a > -1.
GraphSimResult simulate_graph(const ParamSchedule& params, const StepSchedule& steps,
                              std::int64_t T, CounterRng rng, bool record_truth = false);
GraphSimResult simulate_graph(const ParamSchedule& params, const StepSchedule& steps,
                              std::int64_t T, std::uint64_t seed, bool record_truth = false);

// Reduced chain on (x, v): samples the leaf increment from the transition
// kernel with m_t = (1+a_t)/(2t-1 + a_t v_{t-1}); identical in distribution
// to the x-marginal of simulate_graph.
Trace simulate_chain(const ParamSchedule& params, const StepSchedule& steps,
                     std::int64_t T, CounterRng rng, ChainState init = {},
                     bool record_truth = false);
Trace simulate_chain(const ParamSchedule& params, const StepSchedule& steps,
                     std::int64_t T, std::uint64_t seed, ChainState init = {},
                     bool record_truth = false);

} // namespace tvpa
