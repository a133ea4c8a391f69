#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tvpa/kernel.hpp"
#include "tvpa/rng.hpp"

using namespace tvpa;

namespace {

double ulp_of(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale;
}

// Dyadic m grid j * 2^-q spanning [~1e-6, cap]: every kernel probability and
// matrix entry is then exactly representable, so the algebraic identities
// must hold to within evaluation noise far below one ulp.
std::vector<double> dyadic_m_grid(double cap) {
    std::vector<double> grid;
    for (int q = 20; q >= 1; --q)
        for (int j : {1, 3, 5, 7, 9, 11, 13, 15}) {
            const double m = std::ldexp(static_cast<double>(j), -q);
            if (m > 0.0 && m <= cap) grid.push_back(m);
        }
    return grid;
}

} // namespace

TEST_CASE("transition probabilities at pinned points") {
    // t = 1 forces the single draw onto the unique leaf
    const KernelProbs p1 = transition_probs(1, 1.0, 1);
    CHECK(p1.up == 0.0);
    CHECK(p1.zero == 1.0);
    CHECK(p1.down1 == 0.0);
    CHECK(p1.down2 == 0.0);

    // m = 0 limit: no leaf is ever destroyed
    const KernelProbs p2 = transition_probs(17, 0.0, 1);
    CHECK(p2.up == 1.0);
    CHECK(p2.zero == 0.0);

    // hand-evaluated edge-step kernel at x = 2, m = 0.1
    const KernelProbs p3 = transition_probs(2, 0.1, 0);
    CHECK(p3.up == 0.0);
    CHECK(p3.zero == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(p3.down1 == doctest::Approx(0.34).epsilon(1e-12));
    CHECK(p3.down2 == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(p3.zero + p3.down1 + p3.down2 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("transition probabilities reject inconsistent states") {
    CHECK_THROWS_AS(transition_probs(5, 0.5, 0), std::domain_error); // m*x = 2.5
    CHECK_THROWS_AS(transition_probs(-1, 0.1, 0), std::domain_error);
    CHECK_THROWS_AS(transition_probs(2, 1.5, 0), std::domain_error);
}

TEST_CASE("kernel probabilities sum to one within 1 ulp on arbitrary m") {
    CounterRng rng(909);
    for (int trial = 0; trial < 20000; ++trial) {
        const std::int64_t x = 1 + static_cast<std::int64_t>(rng.next_below(1000));
        const double m = rng.next_unit() / static_cast<double>(x);
        const int y = static_cast<int>(rng.next_below(2));
        const KernelProbs p = transition_probs(x, m, y);
        for (double v : {p.up, p.zero, p.down1, p.down2}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        const long double sum = static_cast<long double>(p.up) + p.zero + p.down1 + p.down2;
        CHECK(std::fabs(static_cast<double>(sum) - 1.0) <= ulp_of(1.0, 1.0));
    }
}

TEST_CASE("kernel moments match the update-matrix rows on the dyadic grid") {
    std::vector<std::int64_t> xs = {1, 2, 3, 4, 5, 6, 7, 8, 12, 16, 25, 33,
                                    64, 100, 128, 250, 333, 512, 777, 1000};
    double worst = 0.0;
    for (std::int64_t x : xs) {
        for (double m : dyadic_m_grid(1.0 / static_cast<double>(x))) {
            for (int y : {0, 1}) {
                const KernelProbs p = transition_probs(x, m, y);
                const StepMatrix A = step_matrix_from_m(m, 0.0, y);
                const long double xd = static_cast<long double>(x);

                // first moment vs row 2
                const long double mean = p.up * (xd + 1) + p.zero * xd + p.down1 * (xd - 1) +
                                         p.down2 * (xd - 2);
                const long double row2 = static_cast<long double>(A.a22) * xd + A.a23;
                const double err1 = static_cast<double>(std::fabs(mean - row2));
                CHECK(err1 <= ulp_of(static_cast<double>(mean), static_cast<double>(row2)));

                // second moment vs row 1
                const long double m2 = p.up * (xd + 1) * (xd + 1) + p.zero * xd * xd +
                                       p.down1 * (xd - 1) * (xd - 1) +
                                       p.down2 * (xd - 2) * (xd - 2);
                const long double row1 = static_cast<long double>(A.a11) * xd * xd +
                                         static_cast<long double>(A.a12) * xd + A.a13;
                const double err2 = static_cast<double>(std::fabs(m2 - row1));
                CHECK(err2 <= ulp_of(static_cast<double>(m2), static_cast<double>(row1)));

                worst = std::max({worst, err1 / ulp_of(static_cast<double>(mean), 1.0),
                                  err2 / ulp_of(static_cast<double>(m2), 1.0)});

                const double sum = p.up + p.zero + p.down1 + p.down2;
                CHECK(std::fabs(sum - 1.0) <= ulp_of(1.0, 1.0));
            }
        }
    }
    CAPTURE(worst);
}

TEST_CASE("m_value and its sensitivity") {
    // (1+a)/(1+a) at t = 1 regardless of a
    CHECK(m_value(3.7, 1, 1).m == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m_value(-0.5, 1, 1).m == doctest::Approx(1.0).epsilon(1e-15));

    const MValue mv = m_value(1.0, 3, 3);
    CHECK(mv.m == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mv.dm == doctest::Approx(0.03125).epsilon(1e-15));

    // a = 0 reduces to degree-proportional attachment
    CHECK(m_value(0.0, 10, 5).m == doctest::Approx(1.0 / 19.0).epsilon(1e-15));

    CHECK_THROWS_AS(m_value(-2.0, 1, 1), std::domain_error);
}

TEST_CASE("step matrix special shapes") {
    // y = 1: row 2 is (0, 1-m, 1)
    const StepMatrix v = step_matrix(1.0, 3, 3, 1);
    CHECK(v.a22 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(v.a23 == 1.0);
    CHECK(v.a13 == 1.0);

    // m -> 0 limit: pure counting map x <- x + y
    const StepMatrix z = step_matrix_from_m(0.0, 0.0, 1);
    CHECK(z.a11 == 1.0);
    CHECK(z.a12 == 2.0);
    CHECK(z.a13 == 1.0);
    CHECK(z.a22 == 1.0);

    // y = 0, m = 0.1 applied to (4, 2, 1) reproduces the kernel moments at x=2
    const StepMatrix e = step_matrix_from_m(0.1, 0.0, 0);
    const KernelProbs p = transition_probs(2, 0.1, 0);
    const double mean = p.zero * 2 + p.down1 * 1 + p.down2 * 0;
    const double m2 = p.zero * 4 + p.down1 * 1 + p.down2 * 0;
    CHECK(e.a22 * 2.0 == doctest::Approx(mean).epsilon(1e-14));
    CHECK(e.a11 * 4.0 + e.a12 * 2.0 == doctest::Approx(m2).epsilon(1e-14));
    CHECK(e.a22 >= 0.0);
    CHECK(e.a22 <= 1.0);
}
