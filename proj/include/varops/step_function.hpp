#ifndef VAROPS_STEP_FUNCTION_HPP
#define VAROPS_STEP_FUNCTION_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace varops {

// Compactly supported, right-continuous step function.
//
// Representation: strictly increasing breakpoints b0 < b1 < ... < bm and one
// value per cell, f == values[k] on [b_k, b_{k+1}) and 0 outside [b0, bm).
// Construction canonicalizes: adjacent cells with equal values are merged and
// leading/trailing zero cells are dropped.  The zero function is the empty
// representation (no breakpoints, no values).
//
// Prefix masses are cached at construction so that integrals are evaluated as
// differences of a fixed left-fold; this makes integral() exactly additive in
// floating point: integral(a,c) == integral(a,b) + integral(b,c).
class StepFunction {
  public:
    StepFunction() = default;
    StepFunction(std::vector<double> breakpoints, std::vector<double> values);

    bool is_zero() const { return values_.empty(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t piece_count() const { return values_.size(); }

    // Support bounds; calling them on the zero function is a logic error.
    double support_lo() const;
    double support_hi() const;

    // Point evaluation (right-continuous).
    double operator()(double x) const;

    // Mass of f over (-inf, x]; constant 0 left of the support and equal to
    // total_mass() right of it.
    double mass_below(double x) const;
    double total_mass() const { return cum_.empty() ? 0.0 : cum_.back(); }

    // Exact integral over [a, b]; requires a <= b, both finite.
    double integral(double a, double b) const;

    double sup_norm() const;
    // (integral of |f|^p)^(1/p) over the support, exact cell sum; p >= 1.
    double lp_norm(double p) const;

    // g(x) = f(x - t).
    StepFunction translated(double t) const;
    // g(x) = f(2^k x); breakpoints scale by 2^-k exactly.  |k| <= 40.
    StepFunction dilated_pow2(int k) const;
    // g = c * f.
    StepFunction scaled(double c) const;

  private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::vector<double> cum_;  // cum_[i] = mass over [b0, b_i], cum_[0] = 0

    void rebuild_cum();
};

StepFunction operator+(const StepFunction& f, const StepFunction& g);

// Average of f over [x, x + 2^n], i.e. 2^-n * integral(f, x, x + 2^n).
// Requires |n| <= 60 and finite x.
double dyadic_average(const StepFunction& f, int n, double x);

// Midpoint sampling lattice: point(k) = start + (k + 1/2) * step.
// The half-step offset keeps sample points off the cell boundaries (and off
// any dyadic lattice the sampled functions live on).
struct SampleGrid {
    double start = 0.0;
    double step = 1.0;
    std::int64_t count = 1;

    SampleGrid() = default;
    SampleGrid(double start_, double step_, std::int64_t count_);

    double point(std::int64_t k) const { return start + (static_cast<double>(k) + 0.5) * step; }
    double cell_lo(std::int64_t k) const { return start + static_cast<double>(k) * step; }
    double cell_hi(std::int64_t k) const { return start + static_cast<double>(k + 1) * step; }
    double span_end() const { return start + static_cast<double>(count) * step; }

    SampleGrid halved() const { return SampleGrid(start, step / 2, count * 2); }
    SampleGrid dilated_pow2(int k) const;  // image of the grid under x -> 2^-k x
};

// JSON round trip: {"breakpoints": [...], "values": [...]}.
void write_json(std::ostream& os, const StepFunction& f);
StepFunction step_function_from_json_text(const std::string& text);

}  // namespace varops

#endif
