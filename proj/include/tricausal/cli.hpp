#pragma once

#include "tricausal/lp.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tricausal::cli {

// Exit codes shared by all commands.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kVerificationError = 2;
constexpr int kPreconditionFailed = 3;

struct Common {
    std::string out_dir = "out";
    std::uint64_t rng_seed = 0;
    unsigned workers = 1;
    std::vector<std::string> argv;  // recorded in the manifest
};

struct DeriveOptions {
    std::string structure = "triangle";  // builtin name or JSON file
    std::string inflation = "wagon-wheel";
    std::string distribution = "fritz";  // fritz, uniform, or a distribution file
    bool symmetric = false;
    LpOptions lp;
};

struct EvalOptions {
    std::string inequality = "wagon-wheel";  // builtin name or inequality file
    std::string distribution = "fritz";
};

struct NoiseScanOptions {
    std::string inequality = "wagon-wheel";
    int grid = 1000;
    double tol = 1e-6;
};

struct OptimizeOptions {
    std::string inequality = "wagon-wheel";
    std::string seed = "fritz";  // fritz, random, or a file of 81 numbers
    std::string optimizer = "basin-hopping";  // nelder-mead, bfgs, basin-hopping
    std::uint64_t budget = 20000;             // evaluations per local run
    int hops = 50;
    double step = 0.3;
    double temperature = 0.05;
    double support_threshold = 1e-6;
};

int cmd_derive(const DeriveOptions& o, const Common& c, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& o, const Common& c, std::ostream& out, std::ostream& err);
int cmd_noise_scan(const NoiseScanOptions& o, const Common& c, std::ostream& out, std::ostream& err);
int cmd_optimize(const OptimizeOptions& o, const Common& c, std::ostream& out, std::ostream& err);
// what: fritz, wagon-wheel, wagon-wheel-sets, web-sets, web-group.
int cmd_show(const std::string& what, std::ostream& out, std::ostream& err);

// Records digests of inputs and outputs next to the outputs.
class Manifest {
public:
    Manifest(std::string command, const Common& c);
    void add_input(const std::string& path);
    // Writes contents to out_dir/name and records its digest.
    void write_output(const std::string& name, const std::string& contents);
    // Writes out_dir/manifest.json.
    void finish(double wall_clock_seconds);

private:
    std::string command_;
    Common common_;
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

std::string sha256_hex(const std::string& data);
std::string tool_version();

}  // namespace tricausal::cli
