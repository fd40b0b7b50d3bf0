#include "tricausal/cli.hpp"
#include "tricausal/distribution_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

using namespace tricausal::cli;

namespace {

unsigned workers_from_env() {
    if (const char* s = std::getenv("TRICAUSAL_WORKERS")) {
        try {
            const long v = std::stol(s);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring TRICAUSAL_WORKERS=" << s << '\n';
    }
    return 1;
}

template <typename T>
void take(const nlohmann::json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal compatibility tests for the triangle network via inflation"};
    app.require_subcommand(1);

    Common common;
    common.workers = workers_from_env();
    for (int i = 0; i < argc; ++i) common.argv.emplace_back(argv[i]);
    std::string config;
    app.add_option("--out", common.out_dir, "Output directory")->capture_default_str();
    app.add_option("--rng-seed", common.rng_seed, "Seed of the single random generator")->capture_default_str();
    app.add_option("--workers", common.workers, "Worker threads (default: TRICAUSAL_WORKERS or 1)");
    app.add_option("--config", config, "JSON file whose keys override command-line flags")->check(CLI::ExistingFile);

    DeriveOptions derive;
    auto* d = app.add_subcommand("derive", "Solve the inflated marginal problem and deflate a certificate");
    d->add_option("--structure", derive.structure, "Builtin structure name or JSON file")->capture_default_str();
    d->add_option("--inflation", derive.inflation, "spiral, wagon-wheel, web or a JSON file")->capture_default_str();
    d->add_option("--distribution", derive.distribution, "fritz, uniform or a distribution file")->capture_default_str();
    d->add_flag("--symmetric", derive.symmetric, "Reduce by the inflation's symmetry group");

    EvalOptions eval;
    auto* e = app.add_subcommand("eval", "Evaluate an inequality on a distribution");
    e->add_option("--inequality", eval.inequality, "wagon-wheel or an inequality file")->capture_default_str();
    e->add_option("--distribution", eval.distribution, "fritz, uniform or a distribution file")->capture_default_str();

    NoiseScanOptions noise;
    auto* n = app.add_subcommand("noise-scan", "Noise threshold of an inequality on the noisy Fritz family");
    n->add_option("--inequality", noise.inequality, "wagon-wheel or an inequality file")->capture_default_str();
    n->add_option("--eps-grid", noise.grid, "Grid steps over [0, 1]")->capture_default_str();
    n->add_option("--tol", noise.tol, "Bisection tolerance")->capture_default_str();

    OptimizeOptions opt;
    auto* o = app.add_subcommand("optimize", "Maximize the violation over qubit strategies");
    o->add_option("--inequality", opt.inequality, "wagon-wheel or an inequality file")->capture_default_str();
    o->add_option("--seed", opt.seed, "fritz, random or a file of 81 parameters")->capture_default_str();
    o->add_option("--optimizer", opt.optimizer, "nelder-mead, bfgs or basin-hopping")->capture_default_str();
    o->add_option("--budget", opt.budget, "Evaluations per local run")->capture_default_str();
    o->add_option("--hops", opt.hops, "Basin-hopping hops")->capture_default_str();
    o->add_option("--step", opt.step, "Basin-hopping perturbation scale")->capture_default_str();
    o->add_option("--temperature", opt.temperature, "Basin-hopping temperature")->capture_default_str();
    o->add_option("--support-threshold", opt.support_threshold, "Support cutoff")->capture_default_str();

    std::string what;
    auto* s = app.add_subcommand("show", "Print builtin objects");
    s->add_option("what", what, "fritz, wagon-wheel, wagon-wheel-sets, web-sets, web-group")->required();

    CLI11_PARSE(app, argc, argv);

    if (!config.empty()) {
        try {
            const auto j = nlohmann::json::parse(tricausal::read_file(config));
            take(j, "out", common.out_dir);
            take(j, "rng_seed", common.rng_seed);
            take(j, "workers", common.workers);
            take(j, "structure", derive.structure);
            take(j, "inflation", derive.inflation);
            take(j, "symmetric", derive.symmetric);
            take(j, "feasibility_tol", derive.lp.feasibility_tol);
            take(j, "certificate_margin", derive.lp.certificate_margin);
            for (std::string* field : {&derive.distribution, &eval.distribution}) take(j, "distribution", *field);
            for (std::string* field : {&eval.inequality, &noise.inequality, &opt.inequality}) take(j, "inequality", *field);
            take(j, "eps_grid", noise.grid);
            take(j, "tol", noise.tol);
            take(j, "seed", opt.seed);
            take(j, "optimizer", opt.optimizer);
            take(j, "budget", opt.budget);
            take(j, "hops", opt.hops);
            take(j, "step", opt.step);
            take(j, "temperature", opt.temperature);
            take(j, "support_threshold", opt.support_threshold);
        } catch (const std::exception& ex) {
            std::cerr << "bad config " << config << ": " << ex.what() << '\n';
            return kInputError;
        }
    }
    if (common.workers == 0) common.workers = 1;

    if (*d) return cmd_derive(derive, common, std::cout, std::cerr);
    if (*e) return cmd_eval(eval, common, std::cout, std::cerr);
    if (*n) return cmd_noise_scan(noise, common, std::cout, std::cerr);
    if (*o) return cmd_optimize(opt, common, std::cout, std::cerr);
    return cmd_show(what, std::cout, std::cerr);
}
