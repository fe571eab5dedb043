#include "afsec/run_single.hpp"

#include "afsec/degraded_solver.hpp"
#include "afsec/error.hpp"
#include "afsec/experiments.hpp"
#include "afsec/json_io.hpp"
#include "afsec/oracle.hpp"
#include "afsec/scaled_solver.hpp"
#include "afsec/symmetric_solver.hpp"
#include "afsec/zero_forcing.hpp"

#include <fstream>
#include <iostream>

namespace afsec {

namespace {

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidInstance:
    case ErrorCode::InvalidConfig:
        return kExitParse;
    case ErrorCode::MethodMismatch:
    case ErrorCode::DegradednessViolated:
    case ErrorCode::InvalidAlpha:
        return kExitMismatch;
    default:
        return kExitSolver;
    }
}

SolveReport dispatch(const ChannelInstance& inst, std::string_view method, const SolverConfig& cfg) {
    if (method == "degraded")
        return solve_degraded(DegradedProblem(inst, PowerMode::Individual), cfg);
    if (method == "degraded-total")
        return solve_degraded(DegradedProblem(inst, PowerMode::Total), cfg);
    if (method == "zf")
        return solve_zero_forcing(inst, cfg);
    if (method == "scaled") {
        const auto alpha = scale_factor(inst);
        if (!alpha || *alpha <= 0.0)
            throw Error(ErrorCode::MethodMismatch, "instance is not a scaled-eavesdropper network");
        return solve_scaled(inst, cfg);
    }
    if (method == "symmetric")
        return symmetric_rate(SymmetricInstance::from_instance(inst));
    if (method == "oracle")
        return grid_oracle(inst, 201, 3);
    throw Error(ErrorCode::MethodMismatch, "unknown method '" + std::string(method) + "'");
}

} // namespace

int run_single(const std::string& instance_path, std::string_view method, const SolverConfig& cfg,
               std::ostream& out, std::ostream& err) {
    try {
        const ChannelInstance inst = load_instance(instance_path);
        out << report_to_json(dispatch(inst, method, cfg)).dump(2) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}

int run_oracle(const std::string& instance_path, int steps, int refine, std::ostream& out,
               std::ostream& err) {
    try {
        const ChannelInstance inst = load_instance(instance_path);
        out << report_to_json(grid_oracle(inst, steps, refine)).dump(2) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

int run_experiment(const ExperimentRequest& request, const SolverConfig& cfg, std::ostream& out,
                   std::ostream& err) {
    try {
        ExperimentConfig config = load_config(request.config_path);
        if (request.seed)
            config.seed = *request.seed;
        if (request.out_path)
            config.output_path = *request.out_path;
        if (request.threads)
            config.threads = *request.threads;
        if (request.format != "csv" && request.format != "json")
            throw Error(ErrorCode::InvalidConfig, "format must be csv or json");

        const SweepResult result = run_sweep(config, cfg);

        std::ofstream file;
        std::ostream* sink = &out;
        if (!config.output_path.empty()) {
            file.open(config.output_path);
            if (!file)
                throw Error(ErrorCode::ParseError, "cannot write " + config.output_path);
            sink = &file;
        }
        if (request.format == "json")
            *sink << aggregates_to_json(result).dump(2) << '\n';
        else
            write_aggregate_csv(*sink, result);

        if (request.per_instance) {
            const std::string path = config.output_path.empty()
                                         ? std::string("instances.csv")
                                         : config.output_path + ".instances.csv";
            std::ofstream rows(path);
            if (!rows)
                throw Error(ErrorCode::ParseError, "cannot write " + path);
            write_instance_csv(rows, result);
        }
        if (result.violations > 0) {
            err << "error: " << result.violations
                << " (instance, P_s) pairs violate zf <= individual <= total\n";
            return kExitSolver;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

} // namespace afsec
