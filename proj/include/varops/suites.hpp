#ifndef VAROPS_SUITES_HPP
#define VAROPS_SUITES_HPP

#include <cstdint>
#include <vector>

#include "varops/random_family.hpp"
#include "varops/report.hpp"
#include "varops/variation.hpp"
#include "varops/weights.hpp"

namespace varops {

// Default sampling lattice: midpoints of 2^-10 cells over [-16, 16].
SampleGrid default_grid();

// Truncation window used by every suite: n_max is widened per grid anyway and
// scales below the first active one are skipped analytically, so a generous
// floor costs nothing.
TruncationWindow suite_window();

// Exact weighted p-norm of a step function: cell-by-cell closed-form masses.
double weighted_lp_of_fn(const StepFunction& f, const Weight& w, double p);

// Pointwise l^rho envelope (sum_j |f_j|^rho)^(1/rho) as a step function.
StepFunction lq_envelope(const std::vector<StepFunction>& fs, double rho);

// ---- operator-norm suites -------------------------------------------------
//
// Every suite measures ratios ||Tf|| / ||f|| over a deterministic family,
// reports the per-instance values and the family supremum, and self-checks
// the estimates: grid-halving stability and (where meaningful) exact
// dilation invariance of the ratio.  Identically-zero inputs are skipped and
// counted as degenerate.

RatioReport strong_type_suite(const FamilySpec& spec, double p, double s, const SampleGrid& grid);
RatioReport strong_type_suite_on(const std::vector<StepFunction>& fns, std::uint64_t seed, double p,
                                 double s, const SampleGrid& grid);

RatioReport weak_type_suite(const FamilySpec& spec, double s, const SampleGrid& grid,
                            const std::vector<double>& lambdas);
RatioReport weak_type_suite_on(const std::vector<StepFunction>& fns, std::uint64_t seed, double s,
                               const SampleGrid& grid, const std::vector<double>& lambdas);

// L^1 mass of the variation of mean-zero atoms.  base_step is the sampling
// resolution relative to the atom length (cells of size |I| * base_step); the
// integration window starts at 8|I| beyond the atom and doubles leftward until
// the newly added mass falls under 1e-3 of the running total.  Fixtures that
// fail the atom axioms (nonzero mean / oversized sup norm) or whose mass never
// settles are flagged as fixture errors and fail the suite.
RatioReport h1_suite(const FamilySpec& spec, const std::vector<int>& scales, double s,
                     double base_step);
RatioReport h1_suite_on(const std::vector<H1Atom>& atoms, const std::vector<int>& haar_scales,
                        std::uint64_t seed, double s, double base_step);

// Mean-oscillation norm of sampled values over the dyadic family (plus
// third-shifted copies) inside the grid span, using the cells fully contained
// in each interval; the sup is tracked depth by depth.
double bmo_norm(const std::vector<double>& values, const SampleGrid& grid, int depth);
RatioReport bmo_suite(const FamilySpec& spec, double s, const SampleGrid& grid, int depth);

// ---- weighted suites ------------------------------------------------------

// Hypothesis certification for the weighted bounds.  The strong branch needs
// w in A_q with q = p/r'; since the kernel bound holds for every r >= 1, r'
// is a free parameter in (1, p] and the given value is only the first
// candidate: if it fails, q is walked up toward p (r' down toward 1) along a
// fixed ladder before giving up.  The weak branch needs w^{r'} in A_1, tested
// along the same ladder.  A weight certifies if either branch does.
struct WeightCertification {
    bool strong_ok = false;
    double strong_rprime = 0.0;
    double strong_q = 0.0;
    double strong_characteristic = 0.0;
    bool weak_ok = false;
    double weak_rprime = 0.0;
    double weak_characteristic = 0.0;
    bool certified() const { return strong_ok || weak_ok; }
};
WeightCertification certify_weight_hypotheses(const Weight& w, double p, double rprime, int depth);

RatioReport weighted_suite(const FamilySpec& spec, const Weight& w, double p, double s,
                           double rprime, const SampleGrid& grid, const std::vector<double>& lambdas,
                           int depth);
RatioReport weighted_suite_on(const std::vector<StepFunction>& fns, std::uint64_t seed,
                              const Weight& w, double p, double s, double rprime,
                              const SampleGrid& grid, const std::vector<double>& lambdas, int depth);

RatioReport vector_valued_suite(const FamilySpec& spec, int J, double rho, const Weight& w, double p,
                                double s, double rprime, const SampleGrid& grid,
                                const std::vector<double>& lambdas, int depth);

// ---- kernel-side reports --------------------------------------------------

RatioReport kernel_check_report(std::uint64_t seed, int configs, double s);
RatioReport drcond_report(const std::vector<double>& xs, double r, double s, int l_max);
RatioReport hormander_report(const std::vector<double>& xs, double s);
RatioReport multiplier_report(double s);
RatioReport apweight_report(const Weight& w, double p, int depth);

}  // namespace varops

#endif
