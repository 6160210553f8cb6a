#include "varops/cli_config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "varops/report.hpp"
#include "varops/suites.hpp"

namespace varops {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// distinguishes unreadable/unwritable paths (exit 4) from bad input (exit 2)
struct io_failure : std::runtime_error {
    explicit io_failure(const std::string& what) : std::runtime_error(what) {}
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& tok) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + tok + "'");
    }
}

int to_int(const std::string& tok) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + tok + "'");
    }
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& tok : split(text, ',')) out.push_back(to_double(tok));
    if (out.empty()) throw std::invalid_argument("empty number list");
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (const auto& tok : split(text, ',')) out.push_back(to_int(tok));
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_failure("cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    if (is.bad()) throw io_failure("read failed on " + path);
    return buf.str();
}

// fixture file: one {"breakpoints": [...], "values": [...]} object or an array of them
std::vector<StepFunction> load_fixture(const std::string& path) {
    std::string text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("fixture is not valid JSON: ") + e.what());
    }
    std::vector<StepFunction> out;
    if (doc.is_array())
        for (const auto& item : doc) out.push_back(step_function_from_json_text(item.dump()));
    else
        out.push_back(step_function_from_json_text(doc.dump()));
    if (out.empty()) throw std::invalid_argument("fixture holds no functions");
    return out;
}

std::vector<H1Atom> atoms_from_functions(const std::vector<StepFunction>& fns) {
    std::vector<H1Atom> atoms;
    for (const auto& f : fns) {
        H1Atom a;
        a.fn = f;
        if (!f.is_zero()) {
            a.lo = f.support_lo();
            a.hi = f.support_hi();
            a.scale = std::ilogb(a.hi - a.lo);
        }
        atoms.push_back(std::move(a));
    }
    return atoms;
}

ordered_json config_echo(const RunConfig& cfg, double rprime_resolved) {
    return ordered_json{
        {"command", cfg.command},
        {"version", kLibraryVersion},
        {"p", cfg.p},
        {"s", cfg.s},
        {"rho", cfg.rho},
        {"J", cfg.J},
        {"rprime", rprime_resolved},
        {"r", cfg.r},
        {"seed", cfg.seed},
        {"count", cfg.count},
        {"grid", ordered_json{{"start", cfg.grid_start}, {"step", cfg.grid_step}, {"count", cfg.grid_count}}},
        {"lattice_m", cfg.lattice_m},
        {"support_n", cfg.support_n},
        {"depth", cfg.depth},
        {"lmax", cfg.lmax},
        {"weight", cfg.weight_json},
        {"lambdas", cfg.lambdas},
        {"xs", cfg.xs},
        {"scales", cfg.scales},
        {"format", cfg.format},
        {"function_file", cfg.function_file},
    };
}

struct NamedReport {
    std::string name;  // subdirectory under out_dir ("" = out_dir itself)
    RatioReport report;
};

std::vector<NamedReport> build_reports(const RunConfig& cfg) {
    FamilySpec spec;
    spec.seed = cfg.seed;
    spec.count = cfg.count;
    spec.lattice_m = cfg.lattice_m;
    spec.support_n = cfg.support_n;
    SampleGrid grid(cfg.grid_start, cfg.grid_step, cfg.grid_count);
    double rprime = cfg.rprime == 0.0 ? std::min(cfg.p, 2.0) : cfg.rprime;

    bool have_fixture = !cfg.function_file.empty();
    std::vector<StepFunction> fixture;
    if (have_fixture) fixture = load_fixture(cfg.function_file);

    auto lambdas = [&] { return parse_lambdas(cfg.lambdas); };
    auto xs = [&] { return parse_doubles(cfg.xs); };
    auto scales = [&] { return parse_ints(cfg.scales); };
    auto weight = [&] { return Weight::from_json_text(cfg.weight_json); };
    auto no_fixture_for = [&](const char* cmd) {
        if (have_fixture)
            throw std::invalid_argument(std::string("--function-file is not supported by ") + cmd);
    };

    auto one = [&](const std::string& cmd, const std::string& name) -> NamedReport {
        if (cmd == "kernel-check") {
            no_fixture_for("kernel-check");
            return {name, kernel_check_report(cfg.seed, cfg.count, cfg.s)};
        }
        if (cmd == "drcond") {
            no_fixture_for("drcond");
            return {name, drcond_report(xs(), cfg.r, cfg.s, cfg.lmax)};
        }
        if (cmd == "hormander") {
            no_fixture_for("hormander");
            return {name, hormander_report(xs(), cfg.s)};
        }
        if (cmd == "multiplier") {
            no_fixture_for("multiplier");
            return {name, multiplier_report(cfg.s)};
        }
        if (cmd == "strongtype")
            return {name, have_fixture ? strong_type_suite_on(fixture, cfg.seed, cfg.p, cfg.s, grid)
                                       : strong_type_suite(spec, cfg.p, cfg.s, grid)};
        if (cmd == "weaktype")
            return {name, have_fixture ? weak_type_suite_on(fixture, cfg.seed, cfg.s, grid, lambdas())
                                       : weak_type_suite(spec, cfg.s, grid, lambdas())};
        if (cmd == "h1")
            return {name, have_fixture
                              ? h1_suite_on(atoms_from_functions(fixture), scales(), cfg.seed, cfg.s,
                                            cfg.grid_step)
                              : h1_suite(spec, scales(), cfg.s, cfg.grid_step)};
        if (cmd == "bmo") {
            no_fixture_for("bmo");
            return {name, bmo_suite(spec, cfg.s, grid, cfg.depth)};
        }
        if (cmd == "apweight") {
            no_fixture_for("apweight");
            return {name, apweight_report(weight(), cfg.p, cfg.depth)};
        }
        if (cmd == "weighted")
            return {name, have_fixture
                              ? weighted_suite_on(fixture, cfg.seed, weight(), cfg.p, cfg.s, rprime,
                                                  grid, lambdas(), cfg.depth)
                              : weighted_suite(spec, weight(), cfg.p, cfg.s, rprime, grid, lambdas(),
                                               cfg.depth)};
        if (cmd == "vector") {
            no_fixture_for("vector");
            return {name, vector_valued_suite(spec, cfg.J, cfg.rho, weight(), cfg.p, cfg.s, rprime,
                                              grid, lambdas(), cfg.depth)};
        }
        throw std::invalid_argument("unknown command '" + cmd + "'");
    };

    if (cfg.command != "all") return {one(cfg.command, "")};
    std::vector<NamedReport> out;
    for (const char* cmd : {"kernel-check", "drcond", "hormander", "multiplier", "strongtype",
                            "weaktype", "h1", "bmo", "apweight", "weighted", "vector"})
        out.push_back(one(cmd, cmd));
    return out;
}

void write_one(const fs::path& dir, const RatioReport& rep, const std::string& format) {
    fs::create_directories(dir);
    auto open = [&](const char* file) {
        std::ofstream os(dir / file, std::ios::binary);
        if (!os) throw io_failure("cannot write " + (dir / file).string());
        return os;
    };
    if (format == "json" || format == "both") {
        std::ofstream os = open("report.json");
        os << rep.to_json().dump(2) << '\n';
        if (!os) throw io_failure("write failed in " + dir.string());
    }
    if (format == "csv" || format == "both") {
        std::ofstream os = open("report.csv");
        rep.write_csv(os);
        if (!os) throw io_failure("write failed in " + dir.string());
        if (!rep.plot.empty()) {
            std::ofstream ps = open("plotdata.csv");
            rep.write_plot_csv(ps);
            if (!ps) throw io_failure("write failed in " + dir.string());
        }
    }
}

}  // namespace

std::vector<double> parse_lambdas(const std::string& text) {
    std::vector<double> out;
    if (text.rfind("g:", 0) == 0) {
        auto parts = split(text.substr(2), ':');
        if (parts.size() != 3) throw std::invalid_argument("geometric ladder needs g:lo:hi:count");
        double lo = to_double(parts[0]), hi = to_double(parts[1]);
        int n = to_int(parts[2]);
        if (!(lo > 0.0) || !(hi > lo) || n < 2 || n > 100000)
            throw std::invalid_argument("geometric ladder needs 0 < lo < hi and 2 <= count <= 1e5");
        for (int i = 0; i < n; ++i)
            out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    } else {
        out = parse_doubles(text);
    }
    for (double l : out)
        if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("lambdas must be positive");
    return out;
}

int run(const RunConfig& cfg, std::ostream& err) {
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both") {
        err << "varops: unknown format '" << cfg.format << "'\n";
        return 2;
    }
    std::vector<NamedReport> reports;
    try {
        reports = build_reports(cfg);
    } catch (const io_failure& e) {
        err << "varops: " << e.what() << '\n';
        return 4;
    } catch (const truncation_error& e) {
        err << "varops: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "varops: " << e.what() << '\n';
        return 2;
    }

    double rprime = cfg.rprime == 0.0 ? std::min(cfg.p, 2.0) : cfg.rprime;
    for (auto& nr : reports) nr.report.params["config"] = config_echo(cfg, rprime);

    try {
        for (const auto& nr : reports) {
            fs::path dir = nr.name.empty() ? fs::path(cfg.out_dir) : fs::path(cfg.out_dir) / nr.name;
            write_one(dir, nr.report, cfg.format);
            std::cout << nr.report.suite << ": " << verdict_name(nr.report.verdict)
                      << "  sup_ratio=" << format_double(nr.report.sup_ratio)
                      << "  instances=" << nr.report.instances.size() << "  -> " << dir.string() << '\n';
        }
    } catch (const std::exception& e) {
        err << "varops: " << e.what() << '\n';
        return 4;
    }

    bool any_fail = false, any_hyp = false;
    for (const auto& nr : reports) {
        any_fail = any_fail || nr.report.verdict == Verdict::fail;
        any_hyp = any_hyp || nr.report.verdict == Verdict::hypothesis_not_met;
    }
    if (any_fail) return 1;
    if (any_hyp) return 3;
    return 0;
}

}  // namespace varops

#include "CLI11.hpp"

namespace varops {

int main_with_args(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"measurement toolkit for dyadic-averaging variation operators"};
    app.add_option("--p", cfg.p, "integrability exponent, 1 < p < inf");
    app.add_option("--s", cfg.s, "variation exponent, s >= 2");
    app.add_option("--rho", cfg.rho, "vector combining exponent, 1 < rho < inf");
    app.add_option("--J", cfg.J, "bundle size for the vector suite");
    app.add_option("--rprime", cfg.rprime, "conjugate index r' in (1, p]; 0 picks min(p, 2)");
    app.add_option("--r", cfg.r, "integrability index for drcond, r >= 1");
    app.add_option("--seed", cfg.seed, "generator seed");
    app.add_option("--count", cfg.count, "instances per suite");
    app.add_option("--grid-start", cfg.grid_start, "left end of the sampling grid");
    app.add_option("--grid-step", cfg.grid_step, "grid cell width");
    app.add_option("--grid-count", cfg.grid_count, "number of grid cells");
    app.add_option("--lattice-M", cfg.lattice_m, "breakpoint lattice 2^-M Z");
    app.add_option("--support-N", cfg.support_n, "support bound 2^N");
    app.add_option("--depth", cfg.depth, "interval family depth (bmo, apweight, certification)");
    app.add_option("--lmax", cfg.lmax, "largest annulus level for drcond");
    app.add_option("--weight", cfg.weight_json, "weight descriptor as inline JSON");
    app.add_option("--lambdas", cfg.lambdas, "comma list or geometric ladder g:lo:hi:count");
    app.add_option("--xs", cfg.xs, "comma list of evaluation points");
    app.add_option("--scales", cfg.scales, "comma list of atom scales (|I| = 2^k)");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--format", cfg.format, "json | csv | both");
    app.add_option("--function-file", cfg.function_file, "JSON fixture replacing the generated family");
    app.set_version_flag("--version", kLibraryVersion);
    app.require_subcommand(1);

    const std::pair<const char*, const char*> cmds[] = {
        {"kernel-check", "closed form vs direct summation on random two-scale configurations"},
        {"drcond", "annulus integral profile and its geometric envelope"},
        {"hormander", "integrated kernel difference over |y| > 4x"},
        {"multiplier", "sequence norm of the symbol differences along xi grids"},
        {"strongtype", "L^p ratios over a random family"},
        {"weaktype", "distribution-level ratios over a random family"},
        {"h1", "L^1 variation mass of mean-zero atoms"},
        {"bmo", "mean oscillation of the variation of bounded functions"},
        {"apweight", "Muckenhoupt characteristic over a nested interval family"},
        {"weighted", "weighted strong and weak ratios under certified hypotheses"},
        {"vector", "bundle ratios with l^rho combining under certified hypotheses"},
        {"all", "every suite, each into its own subdirectory"},
    };
    for (const auto& [name, help] : cmds) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return run(cfg, std::cerr);
}

}  // namespace varops
