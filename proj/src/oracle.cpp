#include "afsec/oracle.hpp"

#include "afsec/error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace afsec {

namespace {

// Flat per-relay coefficients so the inner loop avoids Eigen temporaries.
struct RateKernel {
    std::vector<double> a_t, b_t, a_e, b_e; // h_s h_t, h_t^2, h_s h_e, h_e^2
    std::vector<double> c_zf;               // h_s h_e
    std::vector<double> lambda;             // h_s^2 P_s + sigma^2
    std::vector<double> half_width;
    double gamma_s = 1.0;
    double c_zf_norm2 = 0.0;
    double P_tot = 0.0;
    OracleConstraint constraint = OracleConstraint::Individual;
    double zf_tol = 1e-6;

    // Maps a grid point to the evaluated point (in place) and returns false if
    // it is infeasible.
    bool admit(std::vector<double>& beta) const {
        const std::size_t m = beta.size();
        if (constraint == OracleConstraint::Total) {
            double power = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                power += lambda[i] * beta[i] * beta[i];
            return power <= P_tot;
        }
        if (constraint == OracleConstraint::ZeroForcing && c_zf_norm2 > 0.0) {
            double dot = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                dot += c_zf[i] * beta[i];
            const double k = dot / c_zf_norm2;
            double shrink = 1.0;
            for (std::size_t i = 0; i < m; ++i) {
                beta[i] -= k * c_zf[i];
                if (std::abs(beta[i]) > half_width[i])
                    shrink = std::min(shrink, half_width[i] / std::abs(beta[i]));
            }
            double resid = 0.0, norm2 = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                beta[i] *= shrink;
                resid += c_zf[i] * beta[i];
                norm2 += beta[i] * beta[i];
            }
            return std::abs(resid) <= zf_tol * std::sqrt(c_zf_norm2 * norm2);
        }
        return true;
    }

    double rate(const std::vector<double>& beta) const {
        double st = 0.0, nt = 1.0, se = 0.0, ne = 1.0;
        for (std::size_t i = 0; i < beta.size(); ++i) {
            const double b = beta[i];
            st += a_t[i] * b;
            se += a_e[i] * b;
            nt += b_t[i] * b * b;
            ne += b_e[i] * b * b;
        }
        return rate_from_snr(gamma_s * st * st / nt, gamma_s * se * se / ne);
    }
};

RateKernel make_kernel(const ChannelInstance& inst, OracleConstraint constraint, double zf_tol) {
    RateKernel k;
    const auto m = static_cast<std::size_t>(inst.M());
    k.gamma_s = inst.gamma_s();
    k.constraint = constraint;
    k.zf_tol = zf_tol;
    k.P_tot = inst.P_relay().sum();
    const Vec bmax = beta_max_bounds(inst);
    for (std::size_t i = 0; i < m; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double hs = inst.h_s()(ii), ht = inst.h_t()(ii), he = inst.h_e()(ii);
        k.a_t.push_back(hs * ht);
        k.b_t.push_back(ht * ht);
        k.a_e.push_back(hs * he);
        k.b_e.push_back(he * he);
        k.c_zf.push_back(hs * he);
        k.c_zf_norm2 += hs * he * hs * he;
        k.lambda.push_back(hs * hs * inst.P_s() + inst.sigma2());
        k.half_width.push_back(constraint == OracleConstraint::Total
                                   ? std::sqrt(k.P_tot / k.lambda.back())
                                   : bmax(ii));
    }
    return k;
}

struct Incumbent {
    std::vector<double> beta;
    double rate = -1.0;
};

// Evaluates the tensor grid lo_i + k h_i, k = 0..count-1, restricted to the
// box. The first axis is split across threads; chunk results are reduced in
// axis order so the answer does not depend on the thread count.
Incumbent search_grid(const RateKernel& kernel, const std::vector<double>& lo,
                      const std::vector<double>& h, int count, unsigned threads) {
    const std::size_t m = lo.size();
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    std::vector<Incumbent> partial(workers);

    auto run = [&](unsigned w) {
        const int first = static_cast<int>(static_cast<long long>(count) * w / workers);
        const int last = static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
        std::vector<int> idx(m, 0);
        std::vector<double> point(m);
        Incumbent& best = partial[w];
        for (int k0 = first; k0 < last; ++k0) {
            idx.assign(m, 0);
            idx[0] = k0;
            for (;;) {
                bool inside = true;
                for (std::size_t i = 0; i < m; ++i) {
                    point[i] = lo[i] + idx[i] * h[i];
                    if (std::abs(point[i]) > kernel.half_width[i] * (1.0 + 1e-12))
                        inside = false;
                    point[i] = std::clamp(point[i], -kernel.half_width[i], kernel.half_width[i]);
                }
                if (inside && kernel.admit(point)) {
                    const double r = kernel.rate(point);
                    if (r > best.rate) {
                        best.rate = r;
                        best.beta = point;
                    }
                }
                bool done = true;
                for (std::size_t axis = m; axis > 1;) {
                    --axis;
                    if (++idx[axis] < count) {
                        done = false;
                        break;
                    }
                    idx[axis] = 0;
                }
                if (done)
                    break;
            }
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
        for (auto& t : pool)
            t.join();
    }
    Incumbent best;
    for (const auto& p : partial)
        if (p.rate > best.rate)
            best = p;
    return best;
}

} // namespace

SolveReport constrained_oracle(const ChannelInstance& inst, OracleConstraint constraint,
                               int steps_per_axis, int refine_rounds, const OracleOptions& options) {
    if (steps_per_axis < 2 || refine_rounds < 0)
        throw Error(ErrorCode::InvalidConfig, "oracle needs at least 2 steps per axis");
    const auto m = static_cast<std::size_t>(inst.M());
    const double budget = std::pow(static_cast<double>(steps_per_axis), static_cast<double>(m));
    if (budget > static_cast<double>(options.max_evaluations))
        throw Error(ErrorCode::BudgetExceeded, "grid size exceeds the evaluation cap");

    const unsigned threads =
        options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    const RateKernel kernel = make_kernel(inst, constraint, options.zf_tolerance);

    std::vector<double> lo(m), h(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = -kernel.half_width[i];
        h[i] = 2.0 * kernel.half_width[i] / (steps_per_axis - 1);
    }
    Incumbent best = search_grid(kernel, lo, h, steps_per_axis, threads);
    Diagnostics diag;
    diag.iterations = 1;
    diag.note = "coarse grid";

    constexpr int kLocalHalf = 10;
    for (int round = 0; round < refine_rounds && best.rate >= 0.0; ++round) {
        for (std::size_t i = 0; i < m; ++i) {
            h[i] /= 10.0;
            lo[i] = best.beta[i] - kLocalHalf * h[i];
        }
        Incumbent local = search_grid(kernel, lo, h, 2 * kLocalHalf + 1, threads);
        if (local.rate > best.rate)
            best = local;
        ++diag.iterations;
    }

    Vec beta = Vec::Zero(inst.M());
    if (best.rate >= 0.0)
        beta = Eigen::Map<const Vec>(best.beta.data(), inst.M());
    else
        diag.degenerate = true;
    return make_report(inst, {beta}, Method::Oracle, diag);
}

SolveReport grid_oracle(const ChannelInstance& inst, int steps_per_axis, int refine_rounds,
                        const OracleOptions& options) {
    return constrained_oracle(inst, OracleConstraint::Individual, steps_per_axis, refine_rounds,
                              options);
}

} // namespace afsec
