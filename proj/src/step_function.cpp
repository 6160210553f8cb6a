#include "varops/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace varops {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool all_finite(const std::vector<double>& xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values) {
    if (breakpoints.empty() && values.empty()) return;  // zero function
    require(breakpoints.size() == values.size() + 1, "StepFunction: need one more breakpoint than values");
    require(values.size() >= 1, "StepFunction: empty cell list");
    require(all_finite(breakpoints) && all_finite(values), "StepFunction: non-finite input");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        require(breakpoints[i] < breakpoints[i + 1], "StepFunction: breakpoints must increase strictly");

    // Merge equal neighbours, then trim zero-valued edge cells.
    std::vector<double> bp;
    std::vector<double> vv;
    bp.push_back(breakpoints[0]);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!vv.empty() && vv.back() == values[i]) {
            bp.back() = breakpoints[i + 1];
            continue;
        }
        vv.push_back(values[i]);
        bp.push_back(breakpoints[i + 1]);
    }
    std::size_t lo = 0, hi = vv.size();
    while (lo < hi && vv[lo] == 0.0) ++lo;
    while (hi > lo && vv[hi - 1] == 0.0) --hi;
    if (lo == hi) return;  // identically zero
    breakpoints_.assign(bp.begin() + static_cast<std::ptrdiff_t>(lo),
                        bp.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    values_.assign(vv.begin() + static_cast<std::ptrdiff_t>(lo),
                   vv.begin() + static_cast<std::ptrdiff_t>(hi));
    rebuild_cum();
}

void StepFunction::rebuild_cum() {
    cum_.resize(breakpoints_.size());
    cum_[0] = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        cum_[i + 1] = cum_[i] + values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
}

double StepFunction::support_lo() const {
    if (is_zero()) throw std::logic_error("StepFunction::support_lo on zero function");
    return breakpoints_.front();
}

double StepFunction::support_hi() const {
    if (is_zero()) throw std::logic_error("StepFunction::support_hi on zero function");
    return breakpoints_.back();
}

double StepFunction::operator()(double x) const {
    require(std::isfinite(x), "StepFunction: non-finite point");
    if (is_zero() || x < breakpoints_.front() || x >= breakpoints_.back()) return 0.0;
    // last cell with b_k <= x
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::mass_below(double x) const {
    require(std::isfinite(x), "StepFunction: non-finite point");
    if (is_zero() || x <= breakpoints_.front()) return 0.0;
    if (x >= breakpoints_.back()) return cum_.back();
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return cum_[k] + values_[k] * (x - breakpoints_[k]);
}

double StepFunction::integral(double a, double b) const {
    require(std::isfinite(a) && std::isfinite(b), "integral: non-finite endpoint");
    require(a <= b, "integral: need a <= b");
    return mass_below(b) - mass_below(a);
}

double StepFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double StepFunction::lp_norm(double p) const {
    require(p >= 1.0, "lp_norm: need p >= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        s += std::pow(std::fabs(values_[i]), p) * (breakpoints_[i + 1] - breakpoints_[i]);
    return std::pow(s, 1.0 / p);
}

StepFunction StepFunction::translated(double t) const {
    require(std::isfinite(t), "translated: non-finite shift");
    if (is_zero()) return {};
    std::vector<double> bp(breakpoints_);
    for (double& b : bp) b += t;
    return StepFunction(std::move(bp), values_);
}

StepFunction StepFunction::dilated_pow2(int k) const {
    require(k >= -40 && k <= 40, "dilated_pow2: |k| <= 40");
    if (is_zero()) return {};
    std::vector<double> bp(breakpoints_);
    for (double& b : bp) b = std::ldexp(b, -k);
    return StepFunction(std::move(bp), values_);
}

StepFunction StepFunction::scaled(double c) const {
    require(std::isfinite(c), "scaled: non-finite factor");
    if (is_zero()) return {};
    std::vector<double> vv(values_);
    for (double& v : vv) v *= c;
    return StepFunction(breakpoints_, std::move(vv));
}

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    std::vector<double> bp;
    bp.reserve(f.breakpoints().size() + g.breakpoints().size());
    bp.insert(bp.end(), f.breakpoints().begin(), f.breakpoints().end());
    bp.insert(bp.end(), g.breakpoints().begin(), g.breakpoints().end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<double> vv(bp.size() - 1);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) vv[i] = f(bp[i]) + g(bp[i]);
    return StepFunction(std::move(bp), std::move(vv));
}

double dyadic_average(const StepFunction& f, int n, double x) {
    if (n < -60 || n > 60) throw std::invalid_argument("dyadic_average: |n| <= 60");
    if (!std::isfinite(x)) throw std::invalid_argument("dyadic_average: non-finite point");
    const double h = std::ldexp(1.0, n);
    return std::ldexp(f.mass_below(x + h) - f.mass_below(x), -n);
}

SampleGrid::SampleGrid(double start_, double step_, std::int64_t count_)
    : start(start_), step(step_), count(count_) {
    if (!(std::isfinite(start) && std::isfinite(step) && step > 0.0))
        throw std::invalid_argument("SampleGrid: need finite start and step > 0");
    if (count < 1) throw std::invalid_argument("SampleGrid: need count >= 1");
}

SampleGrid SampleGrid::dilated_pow2(int k) const {
    return SampleGrid(std::ldexp(start, -k), std::ldexp(step, -k), count);
}

void write_json(std::ostream& os, const StepFunction& f) {
    nlohmann::ordered_json j;
    j["breakpoints"] = f.breakpoints();
    j["values"] = f.values();
    os << j.dump();
}

StepFunction step_function_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("function JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
        throw std::invalid_argument("function JSON: need {\"breakpoints\": [...], \"values\": [...]}");
    try {
        return StepFunction(j["breakpoints"].get<std::vector<double>>(),
                            j["values"].get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("function JSON: ") + e.what());
    }
}

}  // namespace varops
