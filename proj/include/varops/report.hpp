#ifndef VAROPS_REPORT_HPP
#define VAROPS_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace varops {

inline constexpr const char* kLibraryVersion = "0.3.1";

enum class Verdict { pass, fail, hypothesis_not_met };

const char* verdict_name(Verdict v);

// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite.
std::string format_double(double x);

struct InstanceRow {
    int id = 0;
    double ratio = 0.0;
    // auxiliary columns, fixed order within a suite
    std::vector<std::pair<std::string, double>> extra;
};

// Outcome of one suite run.  Serialization is deterministic: insertion-order
// JSON, shortest-form doubles, no timestamps; two runs with equal
// (seed, params, version) produce identical bytes.
struct RatioReport {
    std::string suite;
    std::uint64_t seed = 0;
    nlohmann::ordered_json params;  // full configuration echo
    std::vector<InstanceRow> instances;
    double sup_ratio = 0.0;
    int argmax_id = -1;
    int degenerate_count = 0;  // skipped identically-zero inputs
    std::vector<std::pair<std::string, double>> stability;
    Verdict verdict = Verdict::pass;
    std::string note;  // one-line diagnostic, empty when PASS

    // plot series: (abscissa, value) pairs with a "xlabel,ylabel" header
    std::string plot_header;
    std::vector<std::pair<double, double>> plot;

    nlohmann::ordered_json to_json() const;
    void write_csv(std::ostream& os) const;
    void write_plot_csv(std::ostream& os) const;
};

}  // namespace varops

#endif
