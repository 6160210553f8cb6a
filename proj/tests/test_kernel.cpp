#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "varops/kernel.hpp"

using namespace varops;

namespace {

const KernelParams kp2{2.0, -60, 60};

}  // namespace

TEST_CASE("kernel component piecewise values") {
    // K_n(x) = 2^-n on (-2^n, -2^(n-1)], -2^-n on (-2^(n-1), 0), 0 elsewhere.
    for (int n : {-8, -1, 0, 1, 3, 12}) {
        const double tn = std::ldexp(1.0, n);
        const double half = std::ldexp(1.0, n - 1);
        CHECK(kernel_component(n, -0.75 * tn) == std::ldexp(1.0, -n));
        CHECK(kernel_component(n, -0.25 * tn) == -std::ldexp(1.0, -n));
        // endpoints: the outer interval is open at -2^n, the inner one at
        // -2^(n-1), so -2^(n-1) still picks up the positive branch
        CHECK(kernel_component(n, -tn) == 0.0);
        CHECK(kernel_component(n, -half) == std::ldexp(1.0, -n));
        CHECK(kernel_component(n, 0.0) == 0.0);
        CHECK(kernel_component(n, 0.3 * tn) == 0.0);
        CHECK(kernel_component(n, -2.0 * tn) == 0.0);
    }
    CHECK_THROWS_AS(kernel_component(61, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(kernel_component(-61, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(kernel_component(0, std::nan("")), std::invalid_argument);
}

TEST_CASE("difference norm brute: hand-checked sequences") {
    // One negative argument: x=1, x0=0, y=1/2 gives the single sequence
    // K_n(-1/2) = {+1 at n=0, -2^-n for n>=1}, so the squared norm is
    // 1 + sum 4^-n = 1/(1 - 2^-s).
    const double got = kernel_diff_norm_brute(1.0, 0.0, 0.5, kp2);
    CHECK(got == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
    for (double s : {2.5, 3.0}) {
        KernelParams kp{s, -60, 60};
        const double want = std::pow(1.0 / (1.0 - std::pow(2.0, -s)), 1.0 / s);
        CHECK(kernel_diff_norm_brute(1.0, 0.0, 0.5, kp) == doctest::Approx(want).epsilon(1e-14));
    }

    // Both arguments in the same dyadic octave: every component coincides.
    CHECK(kernel_diff_norm_brute(1.0, 1.2, 4.0, kp2) == 0.0);
    CHECK(kernel_diff_norm_brute(0.5, 0.25, 16.0, kp2) == 0.0);

    // Both arguments nonnegative: the kernel vanishes identically.
    CHECK(kernel_diff_norm_brute(3.0, 2.0, 1.0, kp2) == 0.0);

    // Straddling an octave boundary: x=1, x0=0, y=4.25 puts x-y and x0-y on
    // opposite sides of -4; exactly two components differ, each by 2^-2.
    CHECK(kernel_diff_norm_brute(1.0, 0.0, 4.25, kp2) ==
          doctest::Approx(std::sqrt(2.0) * 0.25).epsilon(1e-15));

    // Scale range too small for the arguments.
    KernelParams tight{2.0, -3, 3};
    CHECK_THROWS_AS(kernel_diff_norm_brute(1.0, 0.0, 1024.0, tight), std::invalid_argument);
    CHECK_THROWS_AS(kernel_diff_norm_brute(1.0, 0.0, 0.5, KernelParams{1.5, -60, 60}),
                    std::invalid_argument);
}

TEST_CASE("two-scale closed form") {
    // x0=0, i=0, j=1: active window for y is (2, x+2) = (2, 2.75).
    CHECK(kernel_diff_norm_closed(0.75, 0.0, 2.5, 0, 1, 2.0) ==
          std::pow(2.0, 0.5) * 0.5);
    CHECK(kernel_diff_norm_closed(0.75, 0.0, 3.5, 0, 1, 2.0) == 0.0);
    // y exactly at x + 2^j sits outside the open window
    CHECK(kernel_diff_norm_closed(0.75, 0.0, 2.75, 0, 1, 2.0) == 0.0);
    CHECK(kernel_diff_norm_brute(0.75, 0.0, 2.75, kp2) == 0.0);

    // configuration violations
    CHECK_THROWS_AS(kernel_diff_norm_closed(0.75, 0.8, 2.5, 0, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_diff_norm_closed(1.5, 0.0, 2.5, 0, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_diff_norm_closed(0.75, 0.0, 1.5, 0, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_diff_norm_closed(0.75, 0.0, 4.5, 0, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_diff_norm_closed(0.75, 0.0, 2.5, 1, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(kernel_diff_norm_closed(0.75, 0.0, 2.5, 0, 1, 1.0), std::invalid_argument);
}

TEST_CASE("closed form agrees with brute summation") {
    std::mt19937_64 rng(0xfeedbeef);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> base(-12, 10);
    std::uniform_int_distribution<int> gap(1, 10);

    double worst = 0.0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int i = base(rng);
        const int j = i + gap(rng);
        const double x0 = 8.0 * unit(rng) - 4.0;
        const double x = x0 + std::ldexp(0.25 + 0.7 * unit(rng), i);
        const double s = (trial % 3 == 0) ? 3.0 : 2.0;
        KernelParams kp{s, -60, 60};

        // half the trials land y in the active window, half outside it
        double y;
        if (trial % 2 == 0)
            y = x0 + std::ldexp(1.0, j) + (x - x0) * (0.05 + 0.9 * unit(rng));
        else
            y = x0 + std::ldexp(1.0, j) * (1.55 + 0.4 * unit(rng));

        const double closed = kernel_diff_norm_closed(x, x0, y, i, j, s);
        const double brute = kernel_diff_norm_brute(x, x0, y, kp);
        worst = std::max(worst, std::fabs(closed - brute));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("annulus integrals at x = 1 match hand values") {
    // The integrand on (4, 8) lives on the single sliver (4, 5) with value
    // 2^(1/2) * 2^-2, so the r = 1 integral is sqrt(2)/4 and the r = 2
    // integral is ((sqrt(2)/4)^2)^(1/2) = 2^(-3/2).
    const DrParams r1 = DrParams::from_r(1.0);
    const DrParams r2 = DrParams::from_r(2.0);
    CHECK(dr_integral({1.0, 2}, r1, kp2) == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-15));
    CHECK(dr_integral({1.0, 2}, r2, kp2) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-15));

    // quadrature cross-check converges to the same numbers
    CHECK(dr_integral_quadrature({1.0, 2}, r1, kp2, 300000) ==
          doctest::Approx(dr_integral({1.0, 2}, r1, kp2)).epsilon(1e-4));
    CHECK(dr_integral_quadrature({1.0, 2}, r2, kp2, 300000) ==
          doctest::Approx(dr_integral({1.0, 2}, r2, kp2)).epsilon(1e-4));

    CHECK_THROWS_AS(dr_integral({-1.0, 2}, r1, kp2), std::invalid_argument);
    CHECK_THROWS_AS(dr_integral({1.0, 1}, r1, kp2), std::invalid_argument);
    CHECK_THROWS_AS(dr_integral({1.0, 2}, DrParams{2.0, 3.0}, kp2), std::invalid_argument);
    CHECK_THROWS_AS(DrParams::from_r(0.5), std::invalid_argument);
    CHECK_THROWS_AS(dr_integral_quadrature({1.0, 2}, r1, kp2, 0), std::invalid_argument);
}

TEST_CASE("annulus constant profile decays like 2^(-(l-2)/r)") {
    // Each annulus S_l(x) meets the sliver anchored at its interior power of
    // two; for small l it can additionally clip the end of the sliver from
    // the octave below (e.g. x = 2.5: (10, 20) still sees (10, 10.5) out of
    // [8, 10.5)).  Beyond the last clipped level the ratio c_{l+1}/c_l is
    // exactly 2^(-1/r); the 5% envelope anchored at c_2 holds throughout.
    const std::vector<std::pair<double, int>> cases = {{1.0, 2}, {0.3, 3}, {2.5, 3}};
    for (double r : {1.0, 2.0}) {
        const DrParams dr = DrParams::from_r(r);
        for (const auto& [x, pure_from] : cases) {
            const auto prof = dr_constant_profile(x, 12, dr, kp2);
            REQUIRE(prof.size() == 11);
            const double c2 = prof.front().second;
            const double ratio = std::pow(2.0, -1.0 / r);
            for (const auto& [l, cl] : prof) {
                CHECK(cl <= 1.05 * c2 * std::pow(2.0, -(l - 2) / r));
                if (l > pure_from) {
                    const double prev = prof[static_cast<std::size_t>(l - 3)].second;
                    CHECK(cl == doctest::Approx(prev * ratio).epsilon(1e-12));
                }
            }
        }
    }
    CHECK_THROWS_AS(dr_constant_profile(1.0, 1, DrParams::from_r(1.0), kp2), std::invalid_argument);
}

TEST_CASE("annulus quantities under dyadic dilation") {
    for (double r : {1.0, 2.0}) {
        const DrParams dr = DrParams::from_r(r);
        for (double x : {0.3, 1.0, 2.5}) {
            // the normalized constant is invariant, the bare integral scales
            // by 2^(1/r - 1)
            const auto a = dr_constant_profile(x, 8, dr, kp2);
            const auto b = dr_constant_profile(2.0 * x, 8, dr, kp2);
            for (std::size_t k = 0; k < a.size(); ++k)
                CHECK(b[k].second == doctest::Approx(a[k].second).epsilon(1e-12));

            const double base = dr_integral({x, 3}, dr, kp2);
            const double dil = dr_integral({2.0 * x, 3}, dr, kp2);
            CHECK(dil == doctest::Approx(base * std::pow(2.0, 1.0 / r - 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("far-field integral closed form and invariance") {
    // Slivers (2^m, 2^m + x) for 2^m >= 4x, each worth x * 2^(1/s) * 2^-m,
    // so the total is x * 2^(1/s) * 2^(1-m0).
    CHECK(hormander_integral(1.0, kp2) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(hormander_integral(1.7, kp2) / hormander_integral(1.0, kp2) ==
          doctest::Approx(0.85).epsilon(1e-12));

    for (double x : {0.3, 1.0, 1.7, 2.5})
        CHECK(hormander_integral(2.0 * x, kp2) == hormander_integral(x, kp2));

    KernelParams kp25{2.5, -60, 60};
    for (double x : {0.3, 1.0})
        CHECK(hormander_integral(2.0 * x, kp25) ==
              doctest::Approx(hormander_integral(x, kp25)).epsilon(1e-12));

    CHECK_THROWS_AS(hormander_integral(0.0, kp2), std::invalid_argument);
    CHECK_THROWS_AS(hormander_integral(-1.0, kp2), std::invalid_argument);
}

namespace {

// direct trig evaluation of |phi(2t) - phi(t)| in extended precision; the
// imaginary parts use 2 sin^2(t/2) for the versine so nothing cancels
long double multiplier_mag_ld(long double t) {
    if (t == 0.0L) return 0.0L;
    const long double re = std::sin(2.0L * t) / (2.0L * t) - std::sin(t) / t;
    const long double s1 = std::sin(t), sh = std::sin(0.5L * t);
    const long double im = s1 * s1 / t - 2.0L * sh * sh / t;
    return std::sqrt(re * re + im * im);
}

long double multiplier_norm_ld(double xi, double s) {
    const double a = std::fabs(xi);
    const int nc = -std::ilogb(a);
    long double acc = 0.0L;
    for (int n = nc - 56; n <= nc + 58; ++n) {
        const double scale = std::ldexp(a, n);
        if (std::min(scale, 4.0 / scale) < 1e-16) continue;
        acc += std::pow(multiplier_mag_ld(std::ldexp(xi, n - 1)), (long double)s);
    }
    return std::pow(acc, 1.0L / (long double)s);
}

}  // namespace

TEST_CASE("fourier multiplier norm") {
    CHECK(fourier_multiplier_norm(0.0, kp2) == 0.0);

    // even in xi, and invariant under dyadic dilation of the frequency
    for (double xi : {1.0, 0.37, 19.5, 1e-3}) {
        const double base = fourier_multiplier_norm(xi, kp2);
        CHECK(fourier_multiplier_norm(-xi, kp2) == base);
        for (int k : {-7, -1, 1, 12})
            CHECK(fourier_multiplier_norm(std::ldexp(xi, k), kp2) == base);
    }

    // extended-precision trig oracle across both small-t and large-t regimes
    for (double xi : {1.0, 0.01, 3.7, 1e-3, 256.0}) {
        const double got = fourier_multiplier_norm(xi, kp2);
        const double want = (double)multiplier_norm_ld(xi, 2.0);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
    KernelParams kp3{3.0, -60, 60};
    CHECK(fourier_multiplier_norm(1.0, kp3) ==
          doctest::Approx((double)multiplier_norm_ld(1.0, 3.0)).epsilon(1e-10));

    CHECK_THROWS_AS(fourier_multiplier_norm(std::nan(""), kp2), std::invalid_argument);
    CHECK_THROWS_AS(fourier_multiplier_norm(1e300, kp2), std::invalid_argument);
}
