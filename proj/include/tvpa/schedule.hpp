// schedule.hpp — piecewise-constant attachment offset a_t and the
// vertex-step indicator source y_t.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tvpa/rng.hpp"

namespace tvpa {

// Bound on |a|; the offset is required to satisfy a > -1 and |a| <= kOffsetMax.
inline constexpr double kOffsetMax = 1e6;
// Lower bracket endpoint used by the solver; the supremum of the mean map
// is attained in the a -> -1 limit.
inline constexpr double kOffsetFloor = -1.0 + 1e-9;

struct ParamSegment {
    std::int64_t start = 1; // first time index the segment applies to
    double a = 0.0;
};

// Piecewise-constant offset schedule over t = 1..T. Segments tile [1, T];
// a segment applies from its start until the next segment's start.
class ParamSchedule {
public:
    ParamSchedule(std::vector<ParamSegment> segments, std::int64_t horizon);

    static ParamSchedule constant(double a, std::int64_t horizon);

    double value(std::int64_t t) const; // throws std::out_of_range outside [1, T]
    std::int64_t horizon() const { return horizon_; }
    const std::vector<ParamSegment>& segments() const { return segments_; }

    // True when a_t is the same for every t in (t0, t1].
    bool constant_over(std::int64_t t0, std::int64_t t1) const;

private:
    std::vector<ParamSegment> segments_;
    std::int64_t horizon_;
};

// Source of the vertex-step indicators y_1..y_T: either a fixed bit sequence
// or i.i.d. Bernoulli(p) draws sampled at simulation time.
class StepSchedule {
public:
    static StepSchedule explicit_bits(std::vector<std::uint8_t> bits);
    static StepSchedule bernoulli(double p, std::int64_t horizon);

    bool is_random() const { return random_; }
    std::int64_t horizon() const { return horizon_; }
    double vertex_probability() const { return p_; }

    // Fixed bit y_t; throws std::logic_error on a Bernoulli schedule.
    int bit(std::int64_t t) const;

    // y_t for simulation: the fixed bit, or a fresh Bernoulli draw.
    int sample(std::int64_t t, CounterRng& rng) const;

    // Minimum over t >= from_t of (1 + sum_{s<=t} y_s) / t; explicit schedules
    // only. Used to check the running-density floor assumed by the model.
    double min_running_density(std::int64_t from_t = 1) const;

private:
    StepSchedule() = default;
    bool random_ = false;
    double p_ = 0.0;
    std::int64_t horizon_ = 0;
    std::vector<std::uint8_t> bits_; // index t-1 for t = 1..T
};

} // namespace tvpa
