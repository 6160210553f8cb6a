#ifndef VAROPS_WEIGHTS_HPP
#define VAROPS_WEIGHTS_HPP

#include <string>
#include <vector>

#include "varops/step_function.hpp"

namespace varops {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
};

// Locally integrable, a.e. positive weight on the line.  Four closed-form
// shapes are supported; every integral below is an exact antiderivative
// difference, never a quadrature.
//
// Power-type descriptors admit any real exponent internally because duals
// w^(-1/(p-1)) and powers w^t leave the family; exponents <= -1 make the mass
// of intervals meeting the origin genuinely infinite, and weight_integral
// reports that as +inf rather than erroring.
class Weight {
  public:
    enum class Kind { constant, power, two_sided_power, piecewise };

    static Weight constant(double c);
    static Weight power(double a);                      // |x|^a, requires a > -1
    static Weight two_sided_power(double a_neg, double a_pos);
    static Weight piecewise(std::vector<double> breakpoints, std::vector<double> values);

    // w^t; may produce exponents <= -1 (see above).
    Weight powered(double t) const;
    // w^(-1/(p-1)), the exponent dual to w in the A_p product.
    Weight dual(double p) const;

    Kind kind() const { return kind_; }
    double const_value() const { return c_; }
    double exponent() const { return a_pos_; }
    double exponent_neg() const { return a_neg_; }
    const std::vector<double>& breakpoints() const { return bp_; }
    const std::vector<double>& values() const { return vals_; }

    std::string to_json_text() const;
    static Weight from_json_text(const std::string& text);

  private:
    Weight() = default;
    Kind kind_ = Kind::constant;
    double c_ = 1.0;
    double a_neg_ = 0.0, a_pos_ = 0.0;  // power uses a_pos_ for both sides
    std::vector<double> bp_, vals_;     // piecewise; edge values extend to +-inf
};

// integral of w over [a, b] (a <= b); +inf when the interval meets the origin
// and the relevant exponent is <= -1.
double weight_integral(const Weight& w, double a, double b);

// Essential infimum of w over [a, b], computed from the descriptor shape.
double weight_essinf(const Weight& w, double a, double b);

// Dyadic intervals [k 2^m, (k+1) 2^m] meeting the root interval, for
// m = m_max down to m_min, together with the same grid shifted right by a
// third of each scale (the shifted copies break the alignment between test
// intervals and dyadic weights).  Scales enumerate coarse-to-fine so that
// "depth" = number of scales included so far.
class IntervalFamily {
  public:
    IntervalFamily(Interval root, int m_min, int m_max);

    int depth() const { return m_max_ - m_min_ + 1; }
    int scale_at_depth(int d) const { return m_max_ - (d - 1); }  // d = 1..depth
    std::vector<Interval> intervals_at_scale(int m) const;
    std::vector<Interval> all_intervals() const;
    const Interval& root() const { return root_; }

  private:
    Interval root_;
    int m_min_, m_max_;
};

struct ApReport {
    double p = 2.0;
    double value = 1.0;           // sup over the family (may be +inf)
    Interval argmax;
    int depth = 0;
    std::vector<double> trace;    // running sup after each depth, nondecreasing
};

// sup over the family of avg_I(w) * avg_I(w^(-1/(p-1)))^(p-1); 1 < p < inf.
ApReport ap_characteristic(const Weight& w, double p, const IntervalFamily& family);

// sup over the family of avg_I(w) / essinf_I(w); +inf when essinf vanishes.
double a1_characteristic(const Weight& w, const IntervalFamily& family);

// Checks the A_inf implication |E| < delta |Q|  =>  w(E) < (1 - eps) w(Q)
// for a finite union E of subintervals of Q; true when the premise fails.
bool ainfty_witness(const Weight& w, const Interval& Q, const std::vector<Interval>& E,
                    double delta, double eps);

// (sum_k |v_k|^p * w(cell_k))^(1/p) with w(cell) the exact weight mass.
double weighted_lp_norm(const std::vector<double>& values, const SampleGrid& grid, const Weight& w,
                        double p);

// Weight mass of the cells where the sampled value exceeds lambda.
double weighted_distribution(const std::vector<double>& values, const SampleGrid& grid,
                             const Weight& w, double lambda);

}  // namespace varops

#endif
