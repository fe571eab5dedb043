#include "afsec/experiments.hpp"

#include "afsec/degraded_solver.hpp"
#include "afsec/error.hpp"
#include "afsec/json_io.hpp"
#include "afsec/zero_forcing.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

namespace afsec {

namespace {

constexpr const char* kZf = "zf";
constexpr const char* kIndividual = "degraded";
constexpr const char* kTotal = "degraded-total";

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform doubles built from the top 53 bits, independent of the standard
// library's distribution implementations.
double open_unit(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }
double half_open_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double rayleigh(std::mt19937_64& rng, double sigma) {
    return sigma * std::sqrt(-2.0 * std::log(open_unit(rng)));
}

bool has_method(const ExperimentConfig& cfg, const char* tag) {
    return std::find(cfg.methods.begin(), cfg.methods.end(), tag) != cfg.methods.end();
}

std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

} // namespace

void ExperimentConfig::validate() const {
    if (M < 1)
        throw Error(ErrorCode::InvalidConfig, "M must be at least 1");
    if (n_instances < 1)
        throw Error(ErrorCode::InvalidConfig, "n_instances must be at least 1");
    if (!(rayleigh_sigma > 0.0) || !(P_relay > 0.0) || !(sigma2 > 0.0))
        throw Error(ErrorCode::InvalidConfig, "rayleigh_sigma, P_relay and sigma2 must be positive");
    if (P_s_grid.empty())
        throw Error(ErrorCode::InvalidConfig, "P_s_grid must not be empty");
    for (std::size_t k = 0; k < P_s_grid.size(); ++k) {
        if (!(P_s_grid[k] > 0.0) || (k > 0 && !(P_s_grid[k] > P_s_grid[k - 1])))
            throw Error(ErrorCode::InvalidConfig, "P_s_grid must be positive and strictly increasing");
    }
    if (methods.empty())
        throw Error(ErrorCode::InvalidConfig, "at least one method is required");
    for (const auto& m : methods) {
        if (m != kZf && m != kIndividual && m != kTotal)
            throw Error(ErrorCode::InvalidConfig, "unknown method '" + m + "'");
    }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        if (!j.is_object())
            throw Error(ErrorCode::ParseError, "config must be a JSON object");
        cfg.M = j.value("M", cfg.M);
        cfg.rayleigh_sigma = j.value("rayleigh_sigma", cfg.rayleigh_sigma);
        cfg.n_instances = j.value("n_instances", cfg.n_instances);
        cfg.P_relay = j.value("P_relay", cfg.P_relay);
        cfg.sigma2 = j.value("sigma2", cfg.sigma2);
        cfg.P_s_grid = j.value("P_s_grid", cfg.P_s_grid);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.methods = j.value("methods", cfg.methods);
        cfg.output_path = j.value("output_path", cfg.output_path);
        cfg.threads = j.value("threads", cfg.threads);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    cfg.validate();
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    return {{"M", cfg.M},
            {"rayleigh_sigma", cfg.rayleigh_sigma},
            {"n_instances", cfg.n_instances},
            {"P_relay", cfg.P_relay},
            {"sigma2", cfg.sigma2},
            {"P_s_grid", cfg.P_s_grid},
            {"seed", cfg.seed},
            {"methods", cfg.methods},
            {"output_path", cfg.output_path},
            {"threads", cfg.threads}};
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return config_from_json(j);
}

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

ChannelInstance sample_instance(std::mt19937_64& rng, const ExperimentConfig& cfg) {
    const auto m = static_cast<Eigen::Index>(cfg.M);
    Vec h_s(m), h_t(m), h_e(m);
    for (Eigen::Index i = 0; i < m; ++i)
        h_s(i) = rayleigh(rng, cfg.rayleigh_sigma);
    for (Eigen::Index i = 0; i < m; ++i)
        h_t(i) = rayleigh(rng, cfg.rayleigh_sigma);
    for (Eigen::Index i = 0; i < m; ++i)
        h_e(i) = half_open_unit(rng) * h_t(i);
    return ChannelInstance(h_s, h_t, h_e, cfg.P_s_grid.front(), Vec::Constant(m, cfg.P_relay),
                           cfg.sigma2);
}

std::uint64_t instance_hash(const ChannelInstance& inst) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](double x) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &x, sizeof x);
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001B3ULL;
        }
    };
    for (const Vec* v : {&inst.h_s(), &inst.h_t(), &inst.h_e(), &inst.P_relay()})
        for (Eigen::Index i = 0; i < v->size(); ++i)
            mix((*v)(i));
    mix(inst.P_s());
    mix(inst.sigma2());
    return h;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const SolverConfig& solver) {
    cfg.validate();
    solver.validate();
    const auto n = static_cast<std::size_t>(cfg.n_instances);
    const std::size_t grid = cfg.P_s_grid.size();
    const bool want_zf = has_method(cfg, kZf);
    const bool want_ind = has_method(cfg, kIndividual);
    const bool want_tot = has_method(cfg, kTotal);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<InstanceRow> rows(n * grid);
    std::vector<std::exception_ptr> errors(n);

    auto solve_one = [&](std::size_t idx) {
        auto rng = instance_rng(cfg.seed, idx);
        const ChannelInstance base = sample_instance(rng, cfg);
        for (std::size_t g = 0; g < grid; ++g) {
            const ChannelInstance inst = base.with_source_power(cfg.P_s_grid[g]);
            InstanceRow& row = rows[idx * grid + g];
            row.index = idx;
            row.hash = instance_hash(base);
            row.P_s = cfg.P_s_grid[g];
            try {
                row.zf = want_zf ? solve_zero_forcing(inst, solver).rate_bits : nan;
                row.individual =
                    want_ind ? solve_degraded(DegradedProblem(inst, PowerMode::Individual), solver).rate_bits
                             : nan;
                row.total =
                    want_tot ? solve_degraded(DegradedProblem(inst, PowerMode::Total), solver).rate_bits
                             : nan;
            } catch (const Error& e) {
                throw Error(e.code(), e.detail() + " [instance " + std::to_string(idx) +
                                          "] " + instance_to_json(inst).dump());
            }
            if (want_zf && want_ind && want_tot)
                row.flagged = row.zf > row.individual + kSandwichTolerance ||
                              row.individual > row.total + kSandwichTolerance;
        }
    };

    const unsigned threads =
        cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx; (idx = next.fetch_add(1)) < n;) {
            try {
                solve_one(idx);
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    SweepResult result;
    result.rows = std::move(rows);
    for (const auto& row : result.rows)
        result.violations += row.flagged ? 1 : 0;

    auto aggregate = [&](const char* tag, double InstanceRow::*field) {
        for (std::size_t g = 0; g < grid; ++g) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                sum += result.rows[i * grid + g].*field;
            const double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = result.rows[i * grid + g].*field - mean;
                ss += d * d;
            }
            const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
            result.aggregates.push_back({tag, cfg.P_s_grid[g], mean, sd, n});
        }
    };
    for (const auto& m : cfg.methods) {
        if (m == kZf)
            aggregate(kZf, &InstanceRow::zf);
        else if (m == kIndividual)
            aggregate(kIndividual, &InstanceRow::individual);
        else if (m == kTotal)
            aggregate(kTotal, &InstanceRow::total);
    }
    return result;
}

void write_aggregate_csv(std::ostream& out, const SweepResult& result) {
    out << "method,P_s,mean_rate_bits,std_rate_bits,n\n";
    for (const auto& a : result.aggregates)
        out << a.method << ',' << fmt(a.P_s) << ',' << fmt(a.mean_rate_bits) << ','
            << fmt(a.std_rate_bits) << ',' << a.n << '\n';
}

void write_instance_csv(std::ostream& out, const SweepResult& result) {
    out << "instance,hash,P_s,zf,individual,total,flagged\n";
    for (const auto& r : result.rows) {
        char hash[17];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.hash));
        out << r.index << ',' << hash << ',' << fmt(r.P_s) << ',' << fmt(r.zf) << ','
            << fmt(r.individual) << ',' << fmt(r.total) << ',' << (r.flagged ? 1 : 0) << '\n';
    }
}

nlohmann::json aggregates_to_json(const SweepResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& a : result.aggregates)
        rows.push_back({{"method", a.method},
                        {"P_s", a.P_s},
                        {"mean_rate_bits", a.mean_rate_bits},
                        {"std_rate_bits", a.std_rate_bits},
                        {"n", a.n}});
    return {{"aggregates", rows}, {"violations", result.violations}};
}

} // namespace afsec
