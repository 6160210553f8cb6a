#include "varops/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varops {

namespace {

void check_window(const TruncationWindow& w) {
    if (w.n_min > w.n_max) throw std::invalid_argument("TruncationWindow: n_min <= n_max");
    if (w.n_min < -60 || w.n_max > 60) throw std::invalid_argument("TruncationWindow: scales within [-60, 60]");
}

// Distance from x to the nearest breakpoint strictly right of x, or +inf if
// there is none.  On [x, x + gap) the function is a single constant, so every
// averaging window shorter than gap sees no variation at all.
double gap_right(const StepFunction& f, double x) {
    const auto& bp = f.breakpoints();
    auto it = std::upper_bound(bp.begin(), bp.end(), x);
    if (it == bp.end()) return std::numeric_limits<double>::infinity();
    return *it - x;
}

// Smallest n with 2^n > g (g > 0 finite).
int first_active_scale(double g) {
    return std::ilogb(g) + 1;
}

// d_n can be nonzero only for n >= first_active_scale(gap); evaluating the
// averages below that scale would only re-derive 0 with rounding noise, so the
// sum starts there.
double variation_sum_pow_s(const StepFunction& f, double x, const VariationParams& p,
                           double* tail_mass_out) {
    const TruncationWindow& w = p.window;
    const double B1 = f.support_hi();

    const double gap = gap_right(f, x);
    if (w.tail == TailPolicy::analytic_geometric) {
        if (!(std::ldexp(1.0, w.n_min) <= gap))
            throw truncation_error("variation: 2^n_min exceeds the flat gap right of x; lower n_min");
        if (!(x + std::ldexp(1.0, w.n_max) >= B1))
            throw truncation_error("variation: window top misses the support; raise n_max");
    }

    int lo = w.n_min;
    if (std::isfinite(gap)) lo = std::max(lo, first_active_scale(gap));

    double acc = 0.0;
    if (lo <= w.n_max) {
        double prev = dyadic_average(f, lo - 1, x);
        if (p.s == 2.0) {
            for (int n = lo; n <= w.n_max; ++n) {
                double cur = dyadic_average(f, n, x);
                double d = cur - prev;
                acc += d * d;
                prev = cur;
            }
        } else {
            for (int n = lo; n <= w.n_max; ++n) {
                double cur = dyadic_average(f, n, x);
                acc += std::pow(std::fabs(cur - prev), p.s);
                prev = cur;
            }
        }
    }

    const double tail_mass = f.total_mass() - f.mass_below(x);
    if (tail_mass_out) *tail_mass_out = tail_mass;
    if (w.tail == TailPolicy::analytic_geometric && tail_mass != 0.0) {
        // d_n = -tail_mass * 2^-n for every n > n_max, hence
        // sum_{n>n_max} |d_n|^s = (|tail_mass| * 2^-(n_max+1))^s / (1 - 2^-s).
        double head = std::pow(std::ldexp(std::fabs(tail_mass), -(w.n_max + 1)), p.s);
        acc += head / (1.0 - std::pow(2.0, -p.s));
    }
    return acc;
}

}  // namespace

DifferenceSequence difference_sequence(const StepFunction& f, double x, const TruncationWindow& window) {
    check_window(window);
    if (!std::isfinite(x)) throw std::invalid_argument("difference_sequence: non-finite point");
    DifferenceSequence out;
    out.n_min = window.n_min;
    out.n_max = window.n_max;
    out.diffs.assign(static_cast<std::size_t>(window.n_max - window.n_min + 1), 0.0);
    if (f.is_zero()) return out;
    out.tail_mass = f.total_mass() - f.mass_below(x);
    if (x >= f.support_hi()) return out;

    const double gap = gap_right(f, x);
    int lo = window.n_min;
    if (std::isfinite(gap)) lo = std::max(lo, first_active_scale(gap));
    if (lo > window.n_max) return out;
    double prev = dyadic_average(f, lo - 1, x);
    for (int n = lo; n <= window.n_max; ++n) {
        double cur = dyadic_average(f, n, x);
        out.diffs[static_cast<std::size_t>(n - window.n_min)] = cur - prev;
        prev = cur;
    }
    return out;
}

double variation(const StepFunction& f, double x, const VariationParams& params) {
    if (params.s < 2.0) throw std::invalid_argument("variation: need s >= 2");
    check_window(params.window);
    if (!std::isfinite(x)) throw std::invalid_argument("variation: non-finite point");
    if (f.is_zero() || x >= f.support_hi()) return 0.0;
    double acc = variation_sum_pow_s(f, x, params, nullptr);
    return std::pow(acc, 1.0 / params.s);
}

std::vector<double> variation_on_grid(const StepFunction& f, const SampleGrid& grid,
                                      const VariationParams& params) {
    if (params.s < 2.0) throw std::invalid_argument("variation: need s >= 2");
    check_window(params.window);
    std::vector<double> out(static_cast<std::size_t>(grid.count), 0.0);
    if (f.is_zero()) return out;

    VariationParams local = params;
    if (params.window.tail == TailPolicy::analytic_geometric) {
        // Widen n_max so the window reaches the support's right end from the
        // leftmost sample point; every point further right is then covered too.
        double need = f.support_hi() - grid.point(0);
        if (need > 0.0) {
            int n = std::ilogb(need);
            if (std::ldexp(1.0, n) < need) ++n;
            local.window.n_max = std::max(local.window.n_max, n);
            if (local.window.n_max > 60)
                throw truncation_error("variation_on_grid: widened window exceeds scale 60");
        }
    }
    for (std::int64_t k = 0; k < grid.count; ++k)
        out[static_cast<std::size_t>(k)] = variation(f, grid.point(k), local);
    return out;
}

double lp_norm(const std::vector<double>& values, const SampleGrid& grid, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: need p >= 1");
    if (values.size() != static_cast<std::size_t>(grid.count))
        throw std::invalid_argument("lp_norm: value count does not match grid");
    double s = 0.0;
    for (double v : values) s += std::pow(std::fabs(v), p) * grid.step;
    return std::pow(s, 1.0 / p);
}

double vector_variation(const std::vector<StepFunction>& fs, double x, double rho,
                        const VariationParams& params) {
    if (fs.empty()) throw std::invalid_argument("vector_variation: empty bundle");
    if (!(rho > 1.0) || !std::isfinite(rho)) throw std::invalid_argument("vector_variation: need 1 < rho < inf");
    double acc = 0.0;
    for (const StepFunction& f : fs) acc += std::pow(variation(f, x, params), rho);
    return std::pow(acc, 1.0 / rho);
}

}  // namespace varops
