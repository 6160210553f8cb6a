#include "varops/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace varops {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// integral of |x|^e over [a, b] on one side of the origin or straddling it.
double power_mass(double e, double a, double b) {
    if (a == b) return 0.0;
    if (a <= 0.0 && 0.0 <= b && e <= -1.0) return kInf;
    if (e == -1.0) {
        // antiderivative sign(x) log|x| (valid since [a,b] avoids 0 here)
        return std::copysign(std::log(std::fabs(b)), b) - std::copysign(std::log(std::fabs(a)), a);
    }
    const double q = e + 1.0;
    auto F = [&](double x) {
        if (x == 0.0) return 0.0;
        return std::copysign(std::pow(std::fabs(x), q), x) / q;
    };
    return F(b) - F(a);
}

double piecewise_value_at(const std::vector<double>& bp, const std::vector<double>& vals, double x) {
    if (x < bp.front()) return vals.front();
    if (x >= bp.back()) return vals.back();
    auto it = std::upper_bound(bp.begin(), bp.end(), x);
    return vals[static_cast<std::size_t>(it - bp.begin()) - 1];
}

}  // namespace

Weight Weight::constant(double c) {
    require(std::isfinite(c) && c > 0.0, "Weight::constant: need c > 0");
    Weight w;
    w.kind_ = Kind::constant;
    w.c_ = c;
    return w;
}

Weight Weight::power(double a) {
    require(std::isfinite(a) && a > -1.0, "Weight::power: need a > -1");
    Weight w;
    w.kind_ = Kind::power;
    w.a_neg_ = w.a_pos_ = a;
    return w;
}

Weight Weight::two_sided_power(double a_neg, double a_pos) {
    require(std::isfinite(a_neg) && a_neg > -1.0 && std::isfinite(a_pos) && a_pos > -1.0,
            "Weight::two_sided_power: need exponents > -1");
    Weight w;
    w.kind_ = Kind::two_sided_power;
    w.a_neg_ = a_neg;
    w.a_pos_ = a_pos;
    return w;
}

Weight Weight::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    require(breakpoints.size() == values.size() + 1 && !values.empty(),
            "Weight::piecewise: need one more breakpoint than values");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        require(breakpoints[i] < breakpoints[i + 1], "Weight::piecewise: breakpoints must increase");
    for (double v : values) require(std::isfinite(v) && v > 0.0, "Weight::piecewise: values must be > 0");
    Weight w;
    w.kind_ = Kind::piecewise;
    w.bp_ = std::move(breakpoints);
    w.vals_ = std::move(values);
    return w;
}

Weight Weight::powered(double t) const {
    require(std::isfinite(t), "Weight::powered: non-finite exponent");
    Weight w;
    w.kind_ = kind_;
    switch (kind_) {
        case Kind::constant:
            w.c_ = std::pow(c_, t);
            break;
        case Kind::power:
        case Kind::two_sided_power:
            w.a_neg_ = a_neg_ * t;
            w.a_pos_ = a_pos_ * t;
            break;
        case Kind::piecewise:
            w.bp_ = bp_;
            w.vals_.reserve(vals_.size());
            for (double v : vals_) w.vals_.push_back(std::pow(v, t));
            break;
    }
    return w;
}

Weight Weight::dual(double p) const {
    require(p > 1.0 && std::isfinite(p), "Weight::dual: need 1 < p < inf");
    return powered(-1.0 / (p - 1.0));
}

double weight_integral(const Weight& w, double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a <= b, "weight_integral: need finite a <= b");
    switch (w.kind()) {
        case Weight::Kind::constant:
            return w.const_value() * (b - a);
        case Weight::Kind::power:
            return power_mass(w.exponent(), a, b);
        case Weight::Kind::two_sided_power: {
            if (b <= 0.0) return power_mass(w.exponent_neg(), a, b);
            if (a >= 0.0) return power_mass(w.exponent(), a, b);
            return power_mass(w.exponent_neg(), a, 0.0) + power_mass(w.exponent(), 0.0, b);
        }
        case Weight::Kind::piecewise: {
            const auto& bp = w.breakpoints();
            const auto& vals = w.values();
            double acc = 0.0;
            double lo = a;
            // walk the cut points of [a,b] induced by the weight's breakpoints
            for (double c : bp) {
                if (c <= lo) continue;
                if (c >= b) break;
                acc += piecewise_value_at(bp, vals, lo) * (c - lo);
                lo = c;
            }
            acc += piecewise_value_at(bp, vals, lo) * (b - lo);
            return acc;
        }
    }
    return 0.0;
}

namespace {

double power_essinf(double e, double a, double b) {
    if (e == 0.0) return 1.0;
    if (e > 0.0) {
        if (a <= 0.0 && 0.0 <= b) return 0.0;
        return std::pow(std::min(std::fabs(a), std::fabs(b)), e);
    }
    return std::pow(std::max(std::fabs(a), std::fabs(b)), e);
}

}  // namespace

double weight_essinf(const Weight& w, double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b, "weight_essinf: need a < b");
    switch (w.kind()) {
        case Weight::Kind::constant:
            return w.const_value();
        case Weight::Kind::power:
            return power_essinf(w.exponent(), a, b);
        case Weight::Kind::two_sided_power: {
            if (b <= 0.0) return power_essinf(w.exponent_neg(), a, b);
            if (a >= 0.0) return power_essinf(w.exponent(), a, b);
            return std::min(power_essinf(w.exponent_neg(), a, 0.0), power_essinf(w.exponent(), 0.0, b));
        }
        case Weight::Kind::piecewise: {
            const auto& bp = w.breakpoints();
            const auto& vals = w.values();
            double m = kInf;
            if (a < bp.front()) m = std::min(m, vals.front());
            if (b > bp.back()) m = std::min(m, vals.back());
            for (std::size_t i = 0; i < vals.size(); ++i) {
                // cell [bp_i, bp_{i+1}) overlaps (a, b)?
                if (bp[i + 1] > a && bp[i] < b) m = std::min(m, vals[i]);
            }
            return m;
        }
    }
    return 0.0;
}

std::string Weight::to_json_text() const {
    nlohmann::ordered_json j;
    switch (kind_) {
        case Kind::constant:
            j["kind"] = "constant";
            j["c"] = c_;
            break;
        case Kind::power:
            j["kind"] = "power";
            j["a"] = a_pos_;
            break;
        case Kind::two_sided_power:
            j["kind"] = "two_sided_power";
            j["a_neg"] = a_neg_;
            j["a_pos"] = a_pos_;
            break;
        case Kind::piecewise:
            j["kind"] = "piecewise";
            j["breakpoints"] = bp_;
            j["values"] = vals_;
            break;
    }
    return j.dump();
}

Weight Weight::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument("weight JSON: parse error");
    }
    require(j.is_object() && j.contains("kind"), "weight JSON: need a \"kind\" field");
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "constant") return Weight::constant(j.at("c").get<double>());
        if (kind == "power") return Weight::power(j.at("a").get<double>());
        if (kind == "two_sided_power")
            return Weight::two_sided_power(j.at("a_neg").get<double>(), j.at("a_pos").get<double>());
        if (kind == "piecewise")
            return Weight::piecewise(j.at("breakpoints").get<std::vector<double>>(),
                                     j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument("weight JSON: malformed fields");
    }
    throw std::invalid_argument("weight JSON: unknown kind");
}

IntervalFamily::IntervalFamily(Interval root, int m_min, int m_max) : root_(root), m_min_(m_min), m_max_(m_max) {
    require(std::isfinite(root.lo) && std::isfinite(root.hi) && root.lo < root.hi,
            "IntervalFamily: bad root interval");
    require(m_min <= m_max && m_min >= -60 && m_max <= 60, "IntervalFamily: bad scale range");
}

std::vector<Interval> IntervalFamily::intervals_at_scale(int m) const {
    const double h = std::ldexp(1.0, m);
    const double shift = h / 3.0;
    std::vector<Interval> out;
    const auto emit = [&](double offset) {
        const double k_lo = std::floor((root_.lo - offset) / h) - 1.0;
        const double k_hi = std::ceil((root_.hi - offset) / h) + 1.0;
        for (double k = k_lo; k <= k_hi; k += 1.0) {
            Interval I{offset + k * h, offset + (k + 1.0) * h};
            if (I.hi > root_.lo && I.lo < root_.hi) out.push_back(I);
        }
    };
    emit(0.0);
    emit(shift);
    return out;
}

std::vector<Interval> IntervalFamily::all_intervals() const {
    std::vector<Interval> out;
    for (int d = 1; d <= depth(); ++d) {
        auto part = intervals_at_scale(scale_at_depth(d));
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

ApReport ap_characteristic(const Weight& w, double p, const IntervalFamily& family) {
    require(p > 1.0 && std::isfinite(p), "ap_characteristic: need 1 < p < inf");
    const Weight dual = w.dual(p);
    ApReport rep;
    rep.p = p;
    rep.depth = family.depth();
    rep.value = 0.0;
    for (int d = 1; d <= family.depth(); ++d) {
        for (const Interval& I : family.intervals_at_scale(family.scale_at_depth(d))) {
            const double len = I.length();
            const double avg_w = weight_integral(w, I.lo, I.hi) / len;
            const double avg_d = weight_integral(dual, I.lo, I.hi) / len;
            const double prod = avg_w * std::pow(avg_d, p - 1.0);
            if (prod > rep.value) {
                rep.value = prod;
                rep.argmax = I;
            }
        }
        rep.trace.push_back(rep.value);
    }
    return rep;
}

double a1_characteristic(const Weight& w, const IntervalFamily& family) {
    double best = 0.0;
    for (const Interval& I : family.all_intervals()) {
        const double avg = weight_integral(w, I.lo, I.hi) / I.length();
        const double inf_val = weight_essinf(w, I.lo, I.hi);
        const double ratio = (inf_val == 0.0) ? kInf : avg / inf_val;
        best = std::max(best, ratio);
    }
    return best;
}

bool ainfty_witness(const Weight& w, const Interval& Q, const std::vector<Interval>& E,
                    double delta, double eps) {
    require(delta > 0.0 && delta < 1.0 && eps > 0.0 && eps < 1.0,
            "ainfty_witness: need delta, eps in (0,1)");
    require(Q.lo < Q.hi, "ainfty_witness: bad Q");
    double e_len = 0.0, e_mass = 0.0;
    for (const Interval& I : E) {
        require(I.lo <= I.hi && I.lo >= Q.lo && I.hi <= Q.hi, "ainfty_witness: E must sit inside Q");
        e_len += I.length();
        e_mass += weight_integral(w, I.lo, I.hi);
    }
    if (!(e_len < delta * Q.length())) return true;  // premise fails, implication holds
    return e_mass < (1.0 - eps) * weight_integral(w, Q.lo, Q.hi);
}

double weighted_lp_norm(const std::vector<double>& values, const SampleGrid& grid, const Weight& w,
                        double p) {
    require(p >= 1.0, "weighted_lp_norm: need p >= 1");
    require(values.size() == static_cast<std::size_t>(grid.count), "weighted_lp_norm: size mismatch");
    double acc = 0.0;
    for (std::int64_t k = 0; k < grid.count; ++k) {
        const double v = values[static_cast<std::size_t>(k)];
        if (v == 0.0) continue;
        acc += std::pow(std::fabs(v), p) * weight_integral(w, grid.cell_lo(k), grid.cell_hi(k));
    }
    return std::pow(acc, 1.0 / p);
}

double weighted_distribution(const std::vector<double>& values, const SampleGrid& grid,
                             const Weight& w, double lambda) {
    require(std::isfinite(lambda), "weighted_distribution: non-finite level");
    require(values.size() == static_cast<std::size_t>(grid.count), "weighted_distribution: size mismatch");
    double acc = 0.0;
    for (std::int64_t k = 0; k < grid.count; ++k)
        if (values[static_cast<std::size_t>(k)] > lambda)
            acc += weight_integral(w, grid.cell_lo(k), grid.cell_hi(k));
    return acc;
}

}  // namespace varops
