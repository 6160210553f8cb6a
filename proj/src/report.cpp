#include "varops/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace varops {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::hypothesis_not_met: return "HYPOTHESIS_NOT_MET";
    }
    return "FAIL";
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

// JSON numbers cannot hold inf/nan; fall back to strings for those.
nlohmann::ordered_json json_num(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

}  // namespace

nlohmann::ordered_json RatioReport::to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["version"] = kLibraryVersion;
    j["seed"] = seed;
    j["params"] = params;
    j["sup_ratio"] = json_num(sup_ratio);
    j["argmax_id"] = argmax_id;
    j["degenerate_count"] = degenerate_count;
    nlohmann::ordered_json stab;
    for (const auto& [k, v] : stability) stab[k] = json_num(v);
    j["stability"] = stab;
    j["verdict"] = verdict_name(verdict);
    if (!note.empty()) j["note"] = note;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const InstanceRow& r : instances) {
        nlohmann::ordered_json row;
        row["id"] = r.id;
        row["ratio"] = json_num(r.ratio);
        for (const auto& [k, v] : r.extra) row[k] = json_num(v);
        rows.push_back(std::move(row));
    }
    j["instances"] = std::move(rows);
    return j;
}

void RatioReport::write_csv(std::ostream& os) const {
    os << "suite,version,seed,instance_id,ratio";
    if (!instances.empty())
        for (const auto& [k, v] : instances.front().extra) os << ',' << k;
    os << '\n';
    for (const InstanceRow& r : instances) {
        os << suite << ',' << kLibraryVersion << ',' << seed << ',' << r.id << ','
           << format_double(r.ratio);
        for (const auto& [k, v] : r.extra) os << ',' << format_double(v);
        os << '\n';
    }
}

void RatioReport::write_plot_csv(std::ostream& os) const {
    os << (plot_header.empty() ? "x,value" : plot_header) << '\n';
    for (const auto& [x, v] : plot) os << format_double(x) << ',' << format_double(v) << '\n';
}

}  // namespace varops
