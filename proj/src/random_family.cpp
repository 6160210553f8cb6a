#include "varops/random_family.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace varops {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_spec(const FamilySpec& spec) {
    require(spec.count >= 1, "FamilySpec: need count >= 1");
    require(spec.pieces_min >= 1 && spec.pieces_min <= spec.pieces_max && spec.pieces_max <= 64,
            "FamilySpec: bad piece-count range");
    require(spec.lattice_m >= 0 && spec.lattice_m <= 20, "FamilySpec: lattice exponent in [0, 20]");
    require(spec.support_n >= 0 && spec.support_n <= 10, "FamilySpec: support exponent in [0, 10]");
}

}  // namespace

std::int64_t DeterministicRng::range(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
}

std::vector<StepFunction> gen_functions(const FamilySpec& spec) {
    check_spec(spec);
    DeterministicRng rng(spec.seed);
    const std::int64_t lim = std::int64_t{1} << (spec.support_n + spec.lattice_m);
    std::vector<StepFunction> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        const auto pieces = static_cast<std::size_t>(rng.range(spec.pieces_min, spec.pieces_max));
        std::set<std::int64_t> slots;
        while (slots.size() < pieces + 1) slots.insert(rng.range(-lim, lim));
        std::vector<double> bp;
        bp.reserve(pieces + 1);
        for (std::int64_t s : slots) bp.push_back(std::ldexp(static_cast<double>(s), -spec.lattice_m));
        std::vector<double> vals(pieces);
        for (double& v : vals) v = 2.0 * rng.unit() - 1.0;
        out.emplace_back(std::move(bp), std::move(vals));
    }
    return out;
}

namespace {

H1Atom make_atom(DeterministicRng& rng, double lo, int k) {
    const int q = static_cast<int>(rng.range(1, 3));  // 2, 4 or 8 cells
    const int cells = 1 << q;
    const double cell = std::ldexp(1.0, k - q);

    std::vector<double> vals(static_cast<std::size_t>(cells));
    for (;;) {
        double running = 0.0;
        for (int i = 0; i + 1 < cells; ++i) {
            vals[static_cast<std::size_t>(i)] = 2.0 * rng.unit() - 1.0;
            running += vals[static_cast<std::size_t>(i)];
        }
        vals[static_cast<std::size_t>(cells - 1)] = -running;
        double m = 0.0;
        for (double v : vals) m = std::max(m, std::fabs(v));
        if (m == 0.0) continue;  // astronomically unlikely; redraw
        // scale by the power of two that brings sup|a| into (1/(2|I|), 1/|I|]
        int e = std::ilogb(m);
        if (std::ldexp(1.0, e) < m) ++e;
        const double factor = std::ldexp(1.0, -(k + e));
        for (double& v : vals) v *= factor;
        break;
    }

    std::vector<double> bp(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) bp[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * cell;

    H1Atom atom;
    atom.lo = lo;
    atom.hi = bp.back();
    atom.scale = k;
    atom.fn = StepFunction(std::move(bp), std::move(vals));
    return atom;
}

}  // namespace

std::vector<H1Atom> gen_atoms(const FamilySpec& spec, const std::vector<int>& scales) {
    check_spec(spec);
    require(!scales.empty(), "gen_atoms: need at least one scale");
    for (int k : scales) require(k >= -20 && k <= 20, "gen_atoms: scale in [-20, 20]");
    DeterministicRng rng(spec.seed);
    const std::int64_t lim = std::int64_t{1} << (spec.support_n + spec.lattice_m);
    std::vector<H1Atom> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        const int k = scales[static_cast<std::size_t>(i) % scales.size()];
        const double lo = std::ldexp(static_cast<double>(rng.range(-lim, lim)), -spec.lattice_m);
        out.push_back(make_atom(rng, lo, k));
    }
    return out;
}

H1Atom haar_atom(int k) {
    require(k >= -40 && k <= 40, "haar_atom: |k| <= 40");
    const double half = std::ldexp(1.0, k - 1);
    const double height = std::ldexp(1.0, -k);  // 1/|I|
    H1Atom atom;
    atom.lo = 0.0;
    atom.hi = std::ldexp(1.0, k);
    atom.scale = k;
    atom.fn = StepFunction({0.0, half, atom.hi}, {height, -height});
    return atom;
}

}  // namespace varops
