#ifndef VAROPS_KERNEL_HPP
#define VAROPS_KERNEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace varops {

// Parameters shared by the kernel-side computations: the sequence-norm
// exponent and the index range within which individual components may be
// evaluated.
struct KernelParams {
    double s = 2.0;
    int n_lo = -60;
    int n_hi = 60;
};

// Annulus S_l(x) = (2^l x, 2^(l+1) x) for x > 0, l >= 2.
struct AnnulusSpec {
    double x = 1.0;
    int level = 2;
};

// Integrability index r >= 1 with its conjugate (1/r + 1/r_conj == 1;
// r == 1 gives r_conj == +inf and the conjugate exponent drops out).
struct DrParams {
    double r = 1.0;
    double r_conj = 0.0;

    static DrParams from_r(double r);
};

// Component n of the difference kernel,
//   K_n(x) = 2^-n 1_{(-2^n, 0)}(x) - 2^-(n-1) 1_{(-2^(n-1), 0)}(x),
// with open intervals (endpoints evaluate to the outside value).  |n| <= 60.
double kernel_component(int n, double x);

// l^s norm of the component-wise difference {K_n(x-y) - K_n(x0-y)}_n by
// direct summation.  The active index range is derived from the magnitudes of
// x-y and x0-y with a +-5 guard band; it must fit inside [kp.n_lo, kp.n_hi].
// When exactly one argument is negative the components decay geometrically
// forever and the remainder beyond the guard band is added in closed form.
double kernel_diff_norm_brute(double x, double x0, double y, const KernelParams& kp);

// Same quantity in the two-scale configuration
//   x0 < x <= x0 + 2^i,  x0 + 2^j < y <= x0 + 2^(j+1),  j > i:
// equals 2^(1/s) * 2^-j when y lies in (x0 + 2^j, x + 2^j) and 0 otherwise.
// Configurations outside that pattern are rejected.
double kernel_diff_norm_closed(double x, double x0, double y, int i, int j, double s);

// ( integral over S_l(x) of |K(x-y) - K(-y)|_{l^s}^r dy )^(1/r), evaluated
// exactly: the integrand is a step function of y whose jumps sit where y or
// y - x crosses a power of two, so the annulus is split at those points.
double dr_integral(const AnnulusSpec& spec, const DrParams& dr, const KernelParams& kp);

// Midpoint-rule evaluation of the same integral (cross-check path).
double dr_integral_quadrature(const AnnulusSpec& spec, const DrParams& dr, const KernelParams& kp,
                              std::int64_t steps);

// c_l = dr_integral(x, l) * |S_l(x)|^(1/r_conj) for l = 2..l_max.
std::vector<std::pair<int, double>> dr_constant_profile(double x, int l_max, const DrParams& dr,
                                                        const KernelParams& kp);

// integral over {y > 4x} of |K(x-y) - K(-y)|_{l^s} dy for x > 0.  The
// integrand never vanishes for good: past every power of two 2^m >= 4x it
// switches on over the sliver [2^m, 2^m + x) with value 2^(1/s) 2^-m.  The
// finite part up to 2^(ilogb x + 48) is enumerated exactly and the remaining
// slivers are summed in closed form (x * 2^(1/s) * 2^(1-M)), so the result is
// exact and dilation-invariant: hormander_integral(2x) == hormander_integral(x).
double hormander_integral(double x, const KernelParams& kp);

// l^s norm over n of m_n(xi) = phi(2^n xi) - phi(2^(n-1) xi) where
// phi(t) = (e^{it} - 1)/(it), phi(0) = 1.  Terms are truncated once the decay
// envelopes min(2^n |xi|, 2/(2^(n-1)|xi|)) drop below 1e-16.  m(0) = 0.
double fourier_multiplier_norm(double xi, const KernelParams& kp);

}  // namespace varops

#endif
