#ifndef VAROPS_CLI_CONFIG_HPP
#define VAROPS_CLI_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace varops {

// One fully resolved invocation.  run() is a pure function of this struct
// (and of the files it names), so the test suite can drive the tool
// in-process exactly the way main() does.
struct RunConfig {
    std::string command;  // kernel-check | drcond | hormander | multiplier | strongtype |
                          // weaktype | h1 | bmo | apweight | weighted | vector | all
    double p = 2.0;
    double s = 2.0;
    double rho = 2.0;
    int J = 8;
    double rprime = 0.0;  // 0 = pick min(p, 2)
    double r = 1.0;       // integrability index for drcond
    std::uint64_t seed = 42;
    int count = 50;
    double grid_start = -16.0;
    double grid_step = 0x1.0p-10;
    std::int64_t grid_count = 32768;
    int lattice_m = 8;
    int support_n = 3;
    int depth = 8;
    int lmax = 32;
    std::string weight_json = R"({"kind": "power", "a": 0.5})";
    std::string lambdas = "g:0.0625:16:49";
    std::string xs = "0.3,1.0,2.5";
    std::string scales = "-6,-3,0,3,6";
    std::string out_dir = "out";
    std::string format = "both";  // json | csv | both
    std::string function_file;    // optional fixture overriding the generated family
};

// Exit codes: 0 all verdicts PASS, 1 some verdict FAIL, 2 usage error,
// 3 hypothesis not met, 4 I/O failure.
int run(const RunConfig& cfg, std::ostream& err);

// Command-line front end over run(); returns the process exit code.
int main_with_args(int argc, char** argv);

std::vector<double> parse_lambdas(const std::string& text);

}  // namespace varops

#endif
