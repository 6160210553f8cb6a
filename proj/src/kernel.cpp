#include "varops/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace varops {

namespace {

constexpr double kTruncationFloor = 1e-16;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_kernel_params(const KernelParams& kp) {
    require(kp.s >= 2.0 && std::isfinite(kp.s), "KernelParams: need s >= 2");
    require(kp.n_lo <= kp.n_hi && kp.n_lo >= -60 && kp.n_hi <= 60,
            "KernelParams: index range within [-60, 60]");
}

// Smallest n with 2^n > u for u > 0.  For u in [2^(m-1), 2^m) this is m; the
// component sequence of a negative argument -u starts exactly there:
// K_n(-u) = 0 below, +2^-n at n, -2^-n above.
int first_scale_above(double u) {
    return std::ilogb(u) + 1;
}

double geometric_tail_pow(double base_pow_s, double s) {
    // sum_{k>=0} base^s * 2^(-ks) with base_pow_s = base^s already raised.
    return base_pow_s / (1.0 - std::pow(2.0, -s));
}

}  // namespace

DrParams DrParams::from_r(double r) {
    require(r >= 1.0 && std::isfinite(r), "DrParams: need r >= 1");
    DrParams out;
    out.r = r;
    out.r_conj = (r == 1.0) ? std::numeric_limits<double>::infinity() : r / (r - 1.0);
    return out;
}

double kernel_component(int n, double x) {
    require(n >= -60 && n <= 60, "kernel_component: |n| <= 60");
    require(std::isfinite(x), "kernel_component: non-finite point");
    double out = 0.0;
    if (x < 0.0 && x > -std::ldexp(1.0, n)) out += std::ldexp(1.0, -n);
    if (x < 0.0 && x > -std::ldexp(1.0, n - 1)) out -= std::ldexp(1.0, -(n - 1));
    return out;
}

double kernel_diff_norm_brute(double x, double x0, double y, const KernelParams& kp) {
    check_kernel_params(kp);
    require(std::isfinite(x) && std::isfinite(x0) && std::isfinite(y),
            "kernel_diff_norm_brute: non-finite argument");
    const double u1 = x - y;
    const double u2 = x0 - y;
    const bool neg1 = u1 < 0.0;
    const bool neg2 = u2 < 0.0;
    if (!neg1 && !neg2) return 0.0;

    int lo, hi;
    bool tail = false;
    if (neg1 && neg2) {
        int a = first_scale_above(-u1);
        int b = first_scale_above(-u2);
        lo = std::min(a, b) - 5;
        hi = std::max(a, b) + 5;  // difference vanishes above max(a, b) + 1
    } else {
        int a = first_scale_above(neg1 ? -u1 : -u2);
        lo = a - 5;
        hi = a + 5;
        tail = true;  // single sequence: |K_n| = 2^-n for every n >= a
    }
    require(lo >= kp.n_lo && hi <= kp.n_hi, "kernel_diff_norm_brute: scale range exceeds KernelParams");

    double acc = 0.0;
    for (int n = lo; n <= hi; ++n)
        acc += std::pow(std::fabs(kernel_component(n, u1) - kernel_component(n, u2)), kp.s);
    if (tail)
        acc += geometric_tail_pow(std::pow(std::ldexp(1.0, -(hi + 1)), kp.s), kp.s);
    return std::pow(acc, 1.0 / kp.s);
}

double kernel_diff_norm_closed(double x, double x0, double y, int i, int j, double s) {
    require(s >= 2.0 && std::isfinite(s), "kernel_diff_norm_closed: need s >= 2");
    require(j > i && i >= -58 && j <= 58, "kernel_diff_norm_closed: need j > i within scale range");
    require(std::isfinite(x) && std::isfinite(x0) && std::isfinite(y),
            "kernel_diff_norm_closed: non-finite argument");
    const double ti = std::ldexp(1.0, i);
    const double tj = std::ldexp(1.0, j);
    require(x0 < x && x <= x0 + ti, "kernel_diff_norm_closed: need x0 < x <= x0 + 2^i");
    require(x0 + tj < y && y <= x0 + 2.0 * tj, "kernel_diff_norm_closed: need x0 + 2^j < y <= x0 + 2^(j+1)");
    if (y > x0 + tj && y < x + tj) return std::pow(2.0, 1.0 / s) * std::ldexp(1.0, -j);
    return 0.0;
}

namespace {

// Jump locations of y -> |K(x-y) - K(-y)| inside [ylo, yhi]: the powers of
// two and their x-translates.
std::vector<double> integrand_breakpoints(double x, double ylo, double yhi) {
    std::vector<double> cuts;
    cuts.push_back(ylo);
    cuts.push_back(yhi);
    const int m_lo = std::ilogb(std::max(ylo - x, ylo / 2)) - 2;
    const int m_hi = std::ilogb(yhi) + 2;
    for (int m = m_lo; m <= m_hi; ++m) {
        const double pm = std::ldexp(1.0, m);
        if (pm > ylo && pm < yhi) cuts.push_back(pm);
        const double pmx = x + pm;
        if (pmx > ylo && pmx < yhi) cuts.push_back(pmx);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

void check_annulus(const AnnulusSpec& spec) {
    require(std::isfinite(spec.x) && spec.x > 0.0, "AnnulusSpec: need x > 0");
    require(spec.level >= 2, "AnnulusSpec: need l >= 2");
}

}  // namespace

double dr_integral(const AnnulusSpec& spec, const DrParams& dr, const KernelParams& kp) {
    check_annulus(spec);
    require(dr.r >= 1.0, "dr_integral: need r >= 1");
    require(std::fabs(1.0 / dr.r + 1.0 / dr.r_conj - 1.0) <= 1e-12, "dr_integral: conjugate pair mismatch");
    const double ylo = std::ldexp(spec.x, spec.level);
    const double yhi = std::ldexp(spec.x, spec.level + 1);
    const std::vector<double> cuts = integrand_breakpoints(spec.x, ylo, yhi);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double h = kernel_diff_norm_brute(spec.x, 0.0, mid, kp);
        if (h != 0.0) acc += std::pow(h, dr.r) * (cuts[i + 1] - cuts[i]);
    }
    return std::pow(acc, 1.0 / dr.r);
}

double dr_integral_quadrature(const AnnulusSpec& spec, const DrParams& dr, const KernelParams& kp,
                              std::int64_t steps) {
    check_annulus(spec);
    require(steps >= 1, "dr_integral_quadrature: need steps >= 1");
    const double ylo = std::ldexp(spec.x, spec.level);
    const double yhi = std::ldexp(spec.x, spec.level + 1);
    const double step = (yhi - ylo) / static_cast<double>(steps);
    double acc = 0.0;
    for (std::int64_t i = 0; i < steps; ++i) {
        const double mid = ylo + (static_cast<double>(i) + 0.5) * step;
        const double h = kernel_diff_norm_brute(spec.x, 0.0, mid, kp);
        if (h != 0.0) acc += std::pow(h, dr.r) * step;
    }
    return std::pow(acc, 1.0 / dr.r);
}

std::vector<std::pair<int, double>> dr_constant_profile(double x, int l_max, const DrParams& dr,
                                                        const KernelParams& kp) {
    require(l_max >= 2, "dr_constant_profile: need l_max >= 2");
    const double inv_conj = 1.0 - 1.0 / dr.r;  // 1/r_conj without the r = 1 infinity
    std::vector<std::pair<int, double>> out;
    out.reserve(static_cast<std::size_t>(l_max - 1));
    for (int l = 2; l <= l_max; ++l) {
        const double val = dr_integral({x, l}, dr, kp);
        const double measure = std::ldexp(x, l);
        out.emplace_back(l, val * std::pow(measure, inv_conj));
    }
    return out;
}

double hormander_integral(double x, const KernelParams& kp) {
    check_kernel_params(kp);
    require(std::isfinite(x) && x > 0.0, "hormander_integral: need x > 0");
    const int M = std::ilogb(x) + 48;
    require(M + 2 <= kp.n_hi + 60 && M <= 1000, "hormander_integral: x too large for scale range");
    const double ylo = 4.0 * x;
    const double yhi = std::ldexp(1.0, M);
    const std::vector<double> cuts = integrand_breakpoints(x, ylo, yhi);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double h = kernel_diff_norm_brute(x, 0.0, mid, kp);
        if (h != 0.0) acc += h * (cuts[i + 1] - cuts[i]);
    }
    // Slivers [2^m, 2^m + x), m >= M, each contribute x * 2^(1/s) * 2^-m.
    acc += x * std::pow(2.0, 1.0 / kp.s) * std::ldexp(1.0, 1 - M);
    return acc;
}

namespace {

// m(t) = phi(2t) - phi(t) with phi(t) = (e^{it} - 1)/(it).  The power series
// of the difference, sum_{k>=1} (it)^k (2^k - 1)/(k+1)!, avoids the small-t
// cancellation of forming the two phi values separately.
std::complex<double> multiplier_term(double t) {
    if (std::fabs(t) < 1e-4) {
        const std::complex<double> it(0.0, t);
        std::complex<double> pw = it;
        std::complex<double> acc = 0.5 * pw;                       // k = 1
        pw *= it;
        acc += (3.0 / 6.0) * pw;                                   // k = 2
        pw *= it;
        acc += (7.0 / 24.0) * pw;                                  // k = 3
        pw *= it;
        acc += (15.0 / 120.0) * pw;                                // k = 4
        pw *= it;
        acc += (31.0 / 720.0) * pw;                                // k = 5
        return acc;
    }
    const std::complex<double> it(0.0, t);
    const std::complex<double> phi2 = (std::exp(2.0 * it) - 1.0) / (2.0 * it);
    const std::complex<double> phi1 = (std::exp(it) - 1.0) / it;
    return phi2 - phi1;
}

}  // namespace

double fourier_multiplier_norm(double xi, const KernelParams& kp) {
    check_kernel_params(kp);
    require(std::isfinite(xi), "fourier_multiplier_norm: non-finite frequency");
    if (xi == 0.0) return 0.0;
    const double a = std::fabs(xi);
    require(std::ilogb(a) > -900 && std::ilogb(a) < 900, "fourier_multiplier_norm: frequency out of range");
    // Center the window where 2^n |xi| = O(1); both envelopes reach the floor
    // within ~55 octaves on either side.
    const int nc = -std::ilogb(a);
    double acc = 0.0;
    for (int n = nc - 56; n <= nc + 58; ++n) {
        const double scale = std::ldexp(a, n);  // 2^n |xi|
        if (std::min(scale, 4.0 / scale) < kTruncationFloor) continue;
        const double t = std::ldexp(xi, n - 1);
        acc += std::pow(std::abs(multiplier_term(t)), kp.s);
    }
    return std::pow(acc, 1.0 / kp.s);
}

}  // namespace varops
