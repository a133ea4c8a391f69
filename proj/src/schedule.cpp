#include "tvpa/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tvpa {

ParamSchedule::ParamSchedule(std::vector<ParamSegment> segments, std::int64_t horizon)
    : segments_(std::move(segments)), horizon_(horizon) {
    if (horizon_ < 1)
        throw std::invalid_argument("ParamSchedule: horizon must be >= 1");
    if (segments_.empty())
        throw std::invalid_argument("ParamSchedule: no segments");
    if (segments_.front().start != 1)
        throw std::invalid_argument("ParamSchedule: first segment must start at t = 1");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const ParamSegment& s = segments_[i];
        if (i > 0 && s.start <= segments_[i - 1].start)
            throw std::invalid_argument("ParamSchedule: segment starts must be strictly increasing");
        if (s.start > horizon_)
            throw std::invalid_argument("ParamSchedule: segment starts beyond the horizon");
        if (!(s.a > -1.0))
            throw std::invalid_argument("ParamSchedule: offset must satisfy a > -1 (got " +
                                        std::to_string(s.a) + ")");
        if (!(std::fabs(s.a) <= kOffsetMax))
            throw std::invalid_argument("ParamSchedule: |a| exceeds the allowed bound");
    }
}

ParamSchedule ParamSchedule::constant(double a, std::int64_t horizon) {
    return ParamSchedule({{1, a}}, horizon);
}

double ParamSchedule::value(std::int64_t t) const {
    if (t < 1 || t > horizon_)
        throw std::out_of_range("ParamSchedule::value: t = " + std::to_string(t) +
                                " outside [1, " + std::to_string(horizon_) + "]");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](std::int64_t v, const ParamSegment& s) { return v < s.start; });
    return std::prev(it)->a;
}

bool ParamSchedule::constant_over(std::int64_t t0, std::int64_t t1) const {
    if (t1 <= t0) return true;
    for (const ParamSegment& s : segments_)
        if (s.start > t0 + 1 && s.start <= t1) return false;
    return true;
}

StepSchedule StepSchedule::explicit_bits(std::vector<std::uint8_t> bits) {
    if (bits.empty())
        throw std::invalid_argument("StepSchedule: empty bit sequence");
    for (std::uint8_t b : bits)
        if (b > 1) throw std::invalid_argument("StepSchedule: bits must be 0 or 1");
    StepSchedule s;
    s.random_ = false;
    s.horizon_ = static_cast<std::int64_t>(bits.size());
    s.bits_ = std::move(bits);
    return s;
}

StepSchedule StepSchedule::bernoulli(double p, std::int64_t horizon) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("StepSchedule: vertex probability must be in [0, 1]");
    if (horizon < 1)
        throw std::invalid_argument("StepSchedule: horizon must be >= 1");
    StepSchedule s;
    s.random_ = true;
    s.p_ = p;
    s.horizon_ = horizon;
    return s;
}

int StepSchedule::bit(std::int64_t t) const {
    if (random_)
        throw std::logic_error("StepSchedule::bit: schedule is Bernoulli");
    if (t < 1 || t > horizon_)
        throw std::out_of_range("StepSchedule::bit: t outside [1, T]");
    return bits_[static_cast<std::size_t>(t - 1)];
}

int StepSchedule::sample(std::int64_t t, CounterRng& rng) const {
    if (t < 1 || t > horizon_)
        throw std::out_of_range("StepSchedule::sample: t outside [1, T]");
    if (random_) return rng.next_bernoulli(p_) ? 1 : 0;
    return bits_[static_cast<std::size_t>(t - 1)];
}

double StepSchedule::min_running_density(std::int64_t from_t) const {
    if (random_)
        throw std::logic_error("StepSchedule::min_running_density: schedule is Bernoulli");
    double lo = 2.0;
    std::int64_t cum = 0;
    for (std::int64_t t = 1; t <= horizon_; ++t) {
        cum += bits_[static_cast<std::size_t>(t - 1)];
        if (t < from_t) continue;
        lo = std::min(lo, static_cast<double>(cum + 1) / static_cast<double>(t));
    }
    return lo;
}

} // namespace tvpa
