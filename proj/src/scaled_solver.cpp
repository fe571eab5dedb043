#include "afsec/scaled_solver.hpp"

#include "afsec/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace afsec {

ScaledProblem::ScaledProblem(ChannelInstance instance) : inst_(std::move(instance)) {
    const auto alpha = scale_factor(inst_);
    if (!alpha)
        throw Error(ErrorCode::MethodMismatch, "eavesdropper gains are not a scalar multiple of h_t");
    if (!(*alpha > 0.0 && *alpha < 1.0))
        throw Error(ErrorCode::InvalidAlpha, "scale factor must lie in (0, 1)");
    alpha_ = *alpha;
    g_s_ = std::sqrt(inst_.gamma_s()) * inst_.h_s();
    omega_max_ = omega_max_bounds(inst_);

    const auto m = inst_.M();
    order_.resize(static_cast<std::size_t>(m));
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    const Vec ratio = g_s_.cwiseAbs().cwiseQuotient(omega_max_);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ratio(a) > ratio(b); });

    p_ = Vec::Zero(m + 1);
    q_ = Vec::Zero(m + 1);
    s_ = Vec::Zero(m + 1);
    for (Eigen::Index k = 1; k <= m; ++k) {
        p_(k) = p_(k - 1) + sorted_gain(k) * sorted_limit(k);
        q_(k) = q_(k - 1) + sorted_limit(k) * sorted_limit(k);
    }
    for (Eigen::Index k = m - 1; k >= 0; --k)
        s_(k) = s_(k + 1) + sorted_gain(k + 1) * sorted_gain(k + 1);
}

double ScaledProblem::sorted_gain(Eigen::Index k) const {
    return std::abs(g_s_(order_[static_cast<std::size_t>(k - 1)]));
}

double ScaledProblem::sorted_limit(Eigen::Index k) const {
    return omega_max_(order_[static_cast<std::size_t>(k - 1)]);
}

double unconstrained_radius(double alpha, double g_norm2) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorCode::InvalidAlpha, "scale factor must lie in (0, 1)");
    return 1.0 / std::sqrt(alpha * std::sqrt(1.0 + g_norm2));
}

double unconstrained_radius(const ScaledProblem& problem) {
    return unconstrained_radius(problem.alpha(), problem.g_s().squaredNorm());
}

Vec interval_radii(const ScaledProblem& problem) {
    const auto m = problem.instance().M();
    Vec r(m);
    for (Eigen::Index k = 1; k < m; ++k) {
        const double g = problem.sorted_gain(k);
        const double w = problem.sorted_limit(k);
        r(k - 1) = g > 0.0 ? std::sqrt(problem.s()(k) / (g * g) * w * w + problem.q()(k))
                           : std::numeric_limits<double>::infinity();
    }
    r(m - 1) = std::sqrt(problem.q()(m));
    return r;
}

std::array<double, 4> interval_quartic(double p, double q, double s, double alpha) {
    const double a2 = alpha * alpha;
    const double denom = s * s * a2 * (1.0 + s);
    return {(1.0 + q) * (1.0 + a2 * q) / denom,
            p * (p * p * a2 + 2.0 * q * a2 + a2 + 1.0) / denom,
            3.0 * p * p / (s * (1.0 + s)),
            p * (2.0 + 3.0 * s) / (s * (1.0 + s))};
}

namespace {

// Sign-free omega in priority order -> signed omega in original indexing.
Vec unsort(const ScaledProblem& problem, const Vec& sorted_omega) {
    Vec omega(sorted_omega.size());
    for (std::size_t k = 0; k < problem.order().size(); ++k) {
        const auto i = problem.order()[k];
        const double sign = problem.g_s()(i) < 0.0 ? -1.0 : 1.0;
        omega(i) = sign * sorted_omega(static_cast<Eigen::Index>(k));
    }
    return omega;
}

} // namespace

std::optional<Vec> interval_candidate(const ScaledProblem& problem, Eigen::Index m,
                                      const SolverConfig& cfg) {
    const auto n = problem.instance().M();
    if (m < 1 || m >= n)
        throw Error(ErrorCode::InvalidConfig, "interval index must lie in 1..M-1");
    Vec sorted = Vec::Zero(n);
    for (Eigen::Index k = 1; k <= m; ++k)
        sorted(k - 1) = problem.sorted_limit(k);
    const double s = problem.s()(m);
    if (s == 0.0)
        return unsort(problem, sorted); // tail has no gain: it stays silent

    const auto c = interval_quartic(problem.p()(m), problem.q()(m), s, problem.alpha());
    const double lambda = positive_quartic_root(c[0], c[1], c[2], c[3], cfg.root_tol);
    if (!(lambda < problem.sorted_limit(m + 1) / problem.sorted_gain(m + 1)))
        return std::nullopt;
    for (Eigen::Index k = m + 1; k <= n; ++k)
        sorted(k - 1) = lambda * problem.sorted_gain(k);
    return unsort(problem, sorted);
}

double scaled_rate(const ScaledProblem& problem, const Vec& omega) {
    const double a2 = problem.alpha() * problem.alpha();
    const double psi = std::pow(problem.g_s().dot(omega), 2);
    const double r2 = omega.squaredNorm();
    const double rho1 = 1.0 / (1.0 + r2);
    const double rho2 = a2 / (1.0 + a2 * r2);
    return std::max(0.0, 0.5 * std::log2((1.0 + rho1 * psi) / (1.0 + rho2 * psi)));
}

SolveReport solve_scaled(const ScaledProblem& problem, const SolverConfig& cfg) {
    cfg.validate();
    const auto& inst = problem.instance();
    const auto n = inst.M();
    Diagnostics diag;
    auto to_report = [&](const Vec& omega) {
        return make_report(inst, {omega.cwiseQuotient(inst.h_t())}, Method::Scaled, diag);
    };

    const double g_norm = problem.g_s().norm();
    if (g_norm == 0.0) {
        diag.note = "no source gain";
        return to_report(Vec::Zero(n));
    }

    const Vec direct = problem.g_s() / g_norm * unconstrained_radius(problem);
    diag.iterations = 1;
    if ((direct.cwiseAbs().array() <= problem.omega_max().array()).all()) {
        diag.note = "unconstrained radius";
        return to_report(direct);
    }

    // Saturation path. The all-saturated point closes the interval list; relays
    // without source gain stay at zero there.
    Vec sorted_all = Vec::Zero(n);
    for (Eigen::Index k = 1; k <= n; ++k)
        if (problem.sorted_gain(k) > 0.0)
            sorted_all(k - 1) = problem.sorted_limit(k);
    Vec best = unsort(problem, sorted_all);
    double best_rate = scaled_rate(problem, best);
    Eigen::Index best_m = n;
    for (Eigen::Index m = n - 1; m >= 1; --m) {
        const auto cand = interval_candidate(problem, m, cfg);
        ++diag.iterations;
        if (!cand)
            continue;
        const double rate = scaled_rate(problem, *cand);
        if (rate >= best_rate) { // descending m, so ties settle on the smallest m
            best_rate = rate;
            best = *cand;
            best_m = m;
        }
    }
    diag.note = "saturated prefix m=" + std::to_string(best_m);
    return to_report(best);
}

SolveReport solve_scaled(const ChannelInstance& inst, const SolverConfig& cfg) {
    const auto alpha = scale_factor(inst);
    if (alpha && std::abs(*alpha) >= 1.0) {
        Diagnostics diag;
        diag.degenerate = true;
        diag.note = "eavesdropper channel at least as strong as the destination channel";
        return make_report(inst, {Vec::Zero(inst.M())}, Method::Scaled, diag);
    }
    return solve_scaled(ScaledProblem(inst), cfg);
}

} // namespace afsec
