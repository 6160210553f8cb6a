#ifndef VAROPS_RANDOM_FAMILY_HPP
#define VAROPS_RANDOM_FAMILY_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "varops/step_function.hpp"

namespace varops {

// Deterministic family of test functions.  Everything downstream of a spec is
// a pure function of its fields: same spec, same functions, bit for bit.
// Breakpoints live on the lattice 2^-lattice_m * Z inside [-2^support_n,
// 2^support_n]; values are uniform in [-1, 1].
struct FamilySpec {
    std::uint64_t seed = 42;
    int count = 50;
    int pieces_min = 2;
    int pieces_max = 8;
    int lattice_m = 8;
    int support_n = 3;
};

// mt19937_64 is pinned by the standard; the mappings to doubles and ranges
// are written out here because the <random> distributions are not
// implementation-stable.
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1) with 53-bit resolution
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    // uniform integer in [lo, hi], inclusive
    std::int64_t range(std::int64_t lo, std::int64_t hi);

  private:
    std::mt19937_64 eng_;
};

std::vector<StepFunction> gen_functions(const FamilySpec& spec);

// Mean-zero bump on I = [lo, hi]: supported in I, integral exactly zero, and
// sup norm within (1/(2|I|), 1/|I|].  Construction: 2/4/8 equal dyadic cells,
// the last value balancing the floating-point sum of the others, then a
// power-of-two rescale (both steps are exact in double precision).
struct H1Atom {
    double lo = 0.0;
    double hi = 1.0;
    StepFunction fn;
    int scale = 0;  // |I| = 2^scale
};

// One atom per requested instance, cycling through `scales` (|I| = 2^k).
std::vector<H1Atom> gen_atoms(const FamilySpec& spec, const std::vector<int>& scales);

// The two-cell +-1/|I| atom on [0, 2^k]; the canonical fixture.
H1Atom haar_atom(int k);

}  // namespace varops

#endif
