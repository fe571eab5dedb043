#pragma once

// Monte Carlo harness: Rayleigh-faded degraded networks, a source-power
// sweep, and the zero-forcing / individual-power / total-power rates for
// every (instance, P_s) pair.

#include "afsec/convex_core.hpp"
#include "afsec/network_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace afsec {

struct ExperimentConfig {
    int M = 5;
    double rayleigh_sigma = 0.5;
    int n_instances = 1000;
    double P_relay = 5.0;
    double sigma2 = 1.0;
    std::vector<double> P_s_grid = {1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
                                     11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
    std::uint64_t seed = 2015;
    std::vector<std::string> methods = {"zf", "degraded", "degraded-total"};
    std::string output_path;
    unsigned threads = 0; // 0 = hardware concurrency

    /// Throws Error(InvalidConfig).
    void validate() const;
};

/// Missing keys keep their defaults; unknown keys are ignored.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

/// Independent engine for instance `index`, seeded from (seed, index) only.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index);

/// h_s, h_t ~ Rayleigh(rayleigh_sigma); h_e = u * h_t with u ~ U[0, 1).
/// P_s is taken from the first grid point; use with_source_power to sweep.
ChannelInstance sample_instance(std::mt19937_64& rng, const ExperimentConfig& cfg);

/// FNV-1a over the raw bytes of every instance parameter.
std::uint64_t instance_hash(const ChannelInstance& inst);

struct InstanceRow {
    std::size_t index = 0;
    std::uint64_t hash = 0;
    double P_s = 0.0;
    double zf = 0.0;
    double individual = 0.0;
    double total = 0.0;
    bool flagged = false; // sandwich zf <= individual <= total violated
};

struct AggregateRow {
    std::string method;
    double P_s = 0.0;
    double mean_rate_bits = 0.0;
    double std_rate_bits = 0.0; // sample standard deviation, 0 when n = 1
    std::size_t n = 0;
};

struct SweepResult {
    std::vector<AggregateRow> aggregates; // grouped by method, then P_s
    std::vector<InstanceRow> rows;        // ordered by instance, then P_s
    std::size_t violations = 0;
};

inline constexpr double kSandwichTolerance = 1e-6;

/// Instances are solved on a worker pool; results are stored by index and
/// reduced in a fixed order, so any thread count gives identical output.
/// Solver errors propagate as Error with the offending instance in the message.
SweepResult run_sweep(const ExperimentConfig& cfg, const SolverConfig& solver = {});

/// Columns: method,P_s,mean_rate_bits,std_rate_bits,n
void write_aggregate_csv(std::ostream& out, const SweepResult& result);
/// Columns: instance,hash,P_s,zf,individual,total,flagged
void write_instance_csv(std::ostream& out, const SweepResult& result);
nlohmann::json aggregates_to_json(const SweepResult& result);

} // namespace afsec
