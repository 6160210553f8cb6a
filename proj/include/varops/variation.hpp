#ifndef VAROPS_VARIATION_HPP
#define VAROPS_VARIATION_HPP

#include <stdexcept>
#include <vector>

#include "varops/step_function.hpp"

namespace varops {

// Raised when a truncation window cannot represent the requested quantity
// exactly; the caller should widen the window.
class truncation_error : public std::runtime_error {
  public:
    explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

enum class TailPolicy {
    none,               // plain truncated sum over [n_min, n_max]
    analytic_geometric  // append the exact geometric tail beyond n_max
};

struct TruncationWindow {
    int n_min = -24;
    int n_max = 8;
    TailPolicy tail = TailPolicy::analytic_geometric;
};

struct VariationParams {
    double s = 2.0;  // variation exponent, s >= 2
    TruncationWindow window;
};

// Consecutive differences d_n = avg(f, n, x) - avg(f, n-1, x) for n in
// [n_min, n_max], plus the data governing the scales above the window: once
// [x, x + 2^n] covers the support to the right, avg(f, n, x) = tail_mass*2^-n
// with tail_mass = integral of f over [x, +inf), so d_n = -tail_mass * 2^-n.
struct DifferenceSequence {
    int n_min = 0;
    int n_max = 0;
    std::vector<double> diffs;  // diffs[i] = d_{n_min + i}
    double tail_mass = 0.0;
};

DifferenceSequence difference_sequence(const StepFunction& f, double x, const TruncationWindow& window);

// (sum_n |d_n|^s)^(1/s).  With TailPolicy::analytic_geometric the result is
// exact for step functions provided
//   (i)  2^n_min <= gap(f, x), the distance from x to the nearest breakpoint
//        strictly right of x (below that scale every d_n vanishes), and
//   (ii) x + 2^n_max reaches the right end of the support (above that scale
//        d_n = -tail_mass * 2^-n, summed in closed form).
// Violations raise truncation_error.  Points at or right of the support, and
// the zero function, give 0 with no window requirements.  Requires s >= 2.
double variation(const StepFunction& f, double x, const VariationParams& params);

// variation() at every grid point.  n_max is widened automatically so that
// condition (ii) holds from the leftmost point on; condition (i) must hold at
// every point as given.
std::vector<double> variation_on_grid(const StepFunction& f, const SampleGrid& grid,
                                      const VariationParams& params);

// Midpoint-rule norm of sampled values: (sum |v_k|^p * step)^(1/p), p >= 1.
double lp_norm(const std::vector<double>& values, const SampleGrid& grid, double p);

// (sum_j variation(f_j, x)^rho)^(1/rho) over a non-empty bundle, 1 < rho < inf.
double vector_variation(const std::vector<StepFunction>& fs, double x, double rho,
                        const VariationParams& params);

}  // namespace varops

#endif
