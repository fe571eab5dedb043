#include "afsec/run_single.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Secure amplify-and-forward rate solvers for diamond relay networks"};
    app.require_subcommand(1);

    afsec::SolverConfig solver;

    std::string instance_path;
    std::string method = "degraded";
    auto* solve = app.add_subcommand("solve", "Solve one instance and print the report as JSON");
    solve->add_option("--instance", instance_path, "Instance JSON file")->required();
    solve->add_option("--method", method, "Solver")
        ->check(CLI::IsMember({"degraded", "degraded-total", "zf", "scaled", "symmetric", "oracle"}));

    int steps = 201, refine = 3;
    auto* oracle = app.add_subcommand("oracle", "Brute-force grid search over the scaling box");
    oracle->add_option("--instance", instance_path, "Instance JSON file")->required();
    oracle->add_option("--steps", steps, "Grid points per axis")->check(CLI::Range(2, 100000));
    oracle->add_option("--refine", refine, "Local refinement rounds")->check(CLI::Range(0, 20));

    afsec::ExperimentRequest request;
    std::uint64_t seed = 0;
    std::string out_path;
    unsigned threads = 0;
    auto add_experiment = [&](CLI::App* sub) {
        sub->add_option("--config", request.config_path, "Experiment config JSON")->required();
        sub->add_option("--seed", seed, "Override the config seed");
        sub->add_option("--out", out_path, "Output file (default: stdout)");
        sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
        sub->add_option("--format", request.format, "Aggregate format")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto* sweep = app.add_subcommand("sweep", "Source-power sweep; aggregate table only");
    add_experiment(sweep);
    auto* montecarlo =
        app.add_subcommand("montecarlo", "Source-power sweep plus a per-instance audit CSV");
    add_experiment(montecarlo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? afsec::kExitOk : afsec::kExitUsage;
    }

    if (*solve)
        return afsec::run_single(instance_path, method, solver, std::cout, std::cerr);
    if (*oracle)
        return afsec::run_oracle(instance_path, steps, refine, std::cout, std::cerr);

    auto* active = *sweep ? sweep : montecarlo;
    if (active->count("--seed"))
        request.seed = seed;
    if (active->count("--out"))
        request.out_path = out_path;
    if (active->count("--threads"))
        request.threads = threads;
    request.per_instance = active == montecarlo;
    return afsec::run_experiment(request, solver, std::cout, std::cerr);
}
