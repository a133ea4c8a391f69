#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tvpa/experiments.hpp"
#include "tvpa/moments.hpp"
#include "tvpa/schedule.hpp"
#include "tvpa/simulate.hpp"
#include "tvpa/trace.hpp"

using namespace tvpa;

namespace {

// Deterministic trace skeleton (y and v columns) from explicit bits; the x
// column is irrelevant for moment propagation and left at the lower bound.
Trace skeleton(const std::vector<std::uint8_t>& bits) {
    Trace tr;
    tr.y.push_back(0);
    tr.v.push_back(1);
    tr.x.push_back(1);
    std::int64_t v = 1;
    for (std::uint8_t b : bits) {
        v += b;
        tr.y.push_back(b);
        tr.v.push_back(v);
        tr.x.push_back(1);
    }
    return tr;
}

Trace section4_skeleton(std::int64_t T, double a) {
    const Section4Design d = make_section4_design(T, a, a, a);
    std::vector<std::uint8_t> bits;
    for (std::int64_t t = 1; t <= T; ++t)
        bits.push_back(static_cast<std::uint8_t>(d.steps.bit(t)));
    return skeleton(bits);
}

} // namespace

TEST_CASE("two-step hand recursion: f = 1.6, g = 0.24") {
    const Trace tr = skeleton({1, 1});
    const Moments mo = conditional_moments(1.0, 0, 1.0, tr, 2);
    CHECK(mo.f == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(mo.g == doctest::Approx(0.24).epsilon(1e-13));
}

TEST_CASE("a -> -1 limit reaches the counting ceiling") {
    const Trace tr = skeleton({1, 0, 1, 1, 0, 1, 0, 0, 1});
    const std::int64_t t1 = tr.horizon();
    const double ceiling = 1.0 + static_cast<double>(tr.v[static_cast<std::size_t>(t1)] - tr.v[0]);
    const Moments lim = conditional_moments(kOffsetFloor, 0, 1.0, tr, t1);
    CHECK(lim.f == doctest::Approx(ceiling).epsilon(1e-7));
    // strictly below the ceiling away from the limit
    for (double a : {-0.5, 0.0, 1.0, 5.0})
        CHECK(conditional_moments(a, 0, 1.0, tr, t1).f < ceiling);
}

TEST_CASE("brute-force oracle: degenerate and tiny cases") {
    const auto d = make_section4_design(7500, 1, 1, 1);
    CHECK(brute_force_moments(d.params, d.steps, 3, 2, 3).mean == 2.0);
    CHECK(brute_force_moments(d.params, d.steps, 3, 2, 3).variance == 0.0);

    // matches the hand recursion from t0 = 0
    const StepSchedule two = StepSchedule::explicit_bits({1, 1});
    const ParamSchedule one = ParamSchedule::constant(1.0, 2);
    const ExactMoments bf = brute_force_moments(one, two, 0, 1, 2);
    CHECK(bf.mean == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(bf.variance == doctest::Approx(0.24).epsilon(1e-13));

    CHECK_THROWS_AS(brute_force_moments(one, StepSchedule::bernoulli(0.5, 2), 0, 1, 2),
                    std::invalid_argument);
}

TEST_CASE("brute-force oracle caps the horizon") {
    const auto d = make_section4_design(7500, 1, 1, 1);
    CHECK_THROWS_AS(brute_force_moments(d.params, d.steps, 0, 1, 15), std::length_error);
}

TEST_CASE("recursion agrees with enumeration over a mixed grid") {
    // all bit patterns of length 5 from a fixed prefix, several offsets and
    // starting leaf counts; the acceptance suite runs the full <=10-step grid
    const std::vector<std::uint8_t> prefix = {1, 1, 1, 0, 0}; // v_5 = 4
    for (int pattern = 0; pattern < 32; ++pattern) {
        std::vector<std::uint8_t> bits = prefix;
        for (int b = 0; b < 5; ++b) bits.push_back(static_cast<std::uint8_t>((pattern >> b) & 1));
        const StepSchedule steps = StepSchedule::explicit_bits(bits);
        const Trace tr = skeleton(bits);
        for (double a : {-0.9, 0.0, 1.0, 5.0}) {
            const ParamSchedule params = ParamSchedule::constant(a, 10);
            for (std::int64_t x0 : {1, 2, 3}) {
                const ExactMoments bf = brute_force_moments(params, steps, 5, x0, 10);
                const Moments mo = conditional_moments(a, 5, static_cast<double>(x0), tr, 10);
                CHECK(std::fabs(mo.f - bf.mean) <= 1e-10);
                CHECK(std::fabs(mo.g - bf.variance) <= 1e-10);
            }
        }
    }
}

TEST_CASE("f decreases in a and df <= 0") {
    const Trace tr = section4_skeleton(300, 1.0);
    const std::vector<double> grid = {-0.99, -0.5, 0.0, 1.0, 2.0, 5.0, 20.0};
    for (std::int64_t t0 : {std::int64_t(0), std::int64_t(90)}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double a : grid) {
            const Moments mo = conditional_moments(a, t0, 2.0, tr, 300);
            CHECK(mo.f < prev);
            CHECK(mo.df <= 0.0);
            CHECK(mo.g >= 0.0);
            prev = mo.f;
        }
    }
}

TEST_CASE("sensitivities match central differences") {
    const Trace tr = section4_skeleton(450, 1.0);
    const double h = 1e-4;
    for (double a : {-0.5, 0.0, 1.0, 5.0}) {
        for (std::int64_t t0 : {std::int64_t(0), std::int64_t(150)}) {
            const Moments mo = conditional_moments(a, t0, 3.0, tr, 450);
            const Moments up = conditional_moments(a + h, t0, 3.0, tr, 450);
            const Moments dn = conditional_moments(a - h, t0, 3.0, tr, 450);
            const double fd_f = (up.f - dn.f) / (2.0 * h);
            const double fd_g = (up.g - dn.g) / (2.0 * h);
            CHECK(std::fabs(mo.df - fd_f) <= 1e-5 * std::fabs(fd_f));
            CHECK(std::fabs(mo.dg - fd_g) <= 1e-5 * std::fabs(fd_g));
        }
    }
}

TEST_CASE("variance scale on the study design") {
    // g/(t1-t0) bounded on the standard design at moderate horizons
    const Trace tr = section4_skeleton(3000, 1.0);
    const Moments mo = conditional_moments(1.0, 0, 1.0, tr, 3000);
    const double scaled = mo.g / 3000.0;
    CHECK(scaled > 1e-3);
    CHECK(scaled < 10.0);
}

TEST_CASE("mean paths: constant schedule equals pooled recursion") {
    const Trace tr = section4_skeleton(150, 1.0);
    const std::vector<double> path = mean_path(1.0, 0, 1.0, tr, 150);
    REQUIRE(path.size() == 151);
    CHECK(path[0] == 1.0);
    CHECK(path[150] == doctest::Approx(conditional_moments(1.0, 0, 1.0, tr, 150).f).epsilon(1e-13));

    const std::vector<double> sched =
        mean_path_scheduled(ParamSchedule::constant(1.0, 150), 0, 1.0, tr, 150);
    for (std::size_t i = 0; i < path.size(); ++i)
        CHECK(sched[i] == doctest::Approx(path[i]).epsilon(1e-14));
}
