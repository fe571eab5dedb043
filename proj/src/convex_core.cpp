#include "afsec/convex_core.hpp"

#include "afsec/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace afsec {

void SolverConfig::validate() const {
    const bool ok = feasibility_tol > 0 && kkt_tol > 0 && barrier_mu > 1 && barrier_t0 > 0 &&
                    max_newton_iters > 0 && golden_tol > 0 && root_tol > 0 && gap_tol > 0;
    if (!ok)
        throw Error(ErrorCode::InvalidConfig, "solver tolerances and iteration caps must be positive");
}

// ---------------------------------------------------------------------------
// EllipsoidSet

EllipsoidSet::EllipsoidSet(std::vector<Mat> matrices) {
    mats_.reserve(matrices.size());
    for (auto& A : matrices)
        add(std::move(A));
}

void EllipsoidSet::add(Mat A) {
    if (A.rows() != A.cols() || A.rows() == 0)
        throw Error(ErrorCode::InvalidConstraints, "constraint matrix must be square and nonempty");
    if (!mats_.empty() && A.rows() != dim())
        throw Error(ErrorCode::InvalidConstraints, "constraint matrices differ in dimension");
    if (!A.allFinite())
        throw Error(ErrorCode::InvalidConstraints, "constraint matrix has non-finite entries");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorCode::InvalidConstraints, "constraint matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> eig(A, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale)
        throw Error(ErrorCode::InvalidConstraints, "constraint matrix is not positive semidefinite");
    mats_.push_back(std::move(A));
}

// ---------------------------------------------------------------------------
// Barrier method

namespace {

// Throws Unbounded if c has a component in the common null space of all A_j,
// the recession cone of the feasible set.
void check_bounded(const Vec& c, const EllipsoidSet& set) {
    // Each matrix is normalized first so one badly scaled constraint cannot
    // hide the null space of the others.
    Mat S = Mat::Zero(set.dim(), set.dim());
    for (const auto& A : set.matrices()) {
        const double norm = A.cwiseAbs().maxCoeff();
        if (norm > 0.0)
            S += A / norm;
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(S);
    const double top = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    const double cnorm = c.norm();
    for (Eigen::Index k = 0; k < S.rows(); ++k) {
        if (eig.eigenvalues()(k) <= 1e-12 * std::max(1.0, top)) {
            if (std::abs(eig.eigenvectors().col(k).dot(c)) > 1e-12 * std::max(1.0, cnorm))
                throw Error(ErrorCode::Unbounded, "objective increases along a recession direction");
        }
    }
}

struct BarrierState {
    Vec slack; // 1 - v^T A_j v
    std::vector<Vec> Av;
};

bool evaluate_slacks(const EllipsoidSet& set, const Vec& v, BarrierState& st) {
    const auto& mats = set.matrices();
    st.slack.resize(static_cast<Eigen::Index>(mats.size()));
    st.Av.resize(mats.size());
    for (std::size_t j = 0; j < mats.size(); ++j) {
        st.Av[j].noalias() = mats[j] * v;
        const double s = 1.0 - v.dot(st.Av[j]);
        if (!(s > 0.0))
            return false;
        st.slack(static_cast<Eigen::Index>(j)) = s;
    }
    return true;
}

double barrier_objective(double t, const Vec& c, const Vec& v, const Vec& slack) {
    return -t * c.dot(v) - slack.array().log().sum();
}

struct Certificate {
    Vec v;
    Vec lambda;
    Mat normals; // columns 2 A_j v
    double stationarity = 0.0;
    double complementarity = 0.0;
    double max_violation = 0.0;
    double score() const { return std::max(stationarity, complementarity); }
};

Certificate certify(const Vec& c, const std::vector<Mat>& mats, const Vec& v, const Vec& lambda) {
    Certificate out;
    out.v = v;
    out.lambda = lambda;
    const auto k = static_cast<Eigen::Index>(mats.size());
    out.normals.resize(v.size(), k);
    out.max_violation = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < k; ++j) {
        const Vec Av = mats[static_cast<std::size_t>(j)] * v;
        out.normals.col(j) = 2.0 * Av;
        const double excess = v.dot(Av) - 1.0;
        out.max_violation = std::max(out.max_violation, excess);
        out.complementarity = std::max(out.complementarity, std::abs(lambda(j) * excess));
    }
    out.stationarity = (c - out.normals * lambda).cwiseAbs().maxCoeff();
    return out;
}

// Newton iteration on the KKT equations of the constraints the barrier
// identified as active: c = sum 2 lambda_j A_j v and v^T A_j v = 1.
std::optional<Certificate> polish_active_set(const Vec& c, const std::vector<Mat>& mats, Vec v,
                                             const Vec& lambda0, const std::vector<std::size_t>& active,
                                             const SolverConfig& cfg) {
    const auto n = v.size();
    const auto a = static_cast<Eigen::Index>(active.size());
    if (a == 0)
        return std::nullopt;
    Vec lam(a);
    for (Eigen::Index i = 0; i < a; ++i)
        lam(i) = lambda0(static_cast<Eigen::Index>(active[static_cast<std::size_t>(i)]));

    Vec F(n + a);
    Mat J(n + a, n + a);
    auto residual = [&](const Vec& x, const Vec& l, Vec& out) {
        out.head(n) = c;
        for (Eigen::Index i = 0; i < a; ++i) {
            const Mat& A = mats[active[static_cast<std::size_t>(i)]];
            const Vec Av = A * x;
            out.head(n) -= 2.0 * l(i) * Av;
            out(n + i) = 1.0 - x.dot(Av);
        }
    };
    residual(v, lam, F);
    for (int it = 0; it < 30; ++it) {
        J.setZero();
        for (Eigen::Index i = 0; i < a; ++i) {
            const Mat& A = mats[active[static_cast<std::size_t>(i)]];
            const Vec Av = A * v;
            J.topLeftCorner(n, n) -= 2.0 * lam(i) * A;
            J.block(0, n + i, n, 1) = -2.0 * Av;
            J.block(n + i, 0, 1, n) = -2.0 * Av.transpose();
        }
        const Vec delta = J.completeOrthogonalDecomposition().solve(-F);
        const Vec v_next = v + delta.head(n);
        const Vec lam_next = lam + delta.tail(a);
        Vec F_next(n + a);
        residual(v_next, lam_next, F_next);
        if (!(F_next.norm() < F.norm()))
            break;
        v = v_next;
        lam = lam_next;
        F = F_next;
        if (F.cwiseAbs().maxCoeff() < 1e-3 * cfg.kkt_tol)
            break;
    }
    if (lam.minCoeff() < 0.0)
        return std::nullopt;
    Vec full = Vec::Zero(static_cast<Eigen::Index>(mats.size()));
    for (Eigen::Index i = 0; i < a; ++i)
        full(static_cast<Eigen::Index>(active[static_cast<std::size_t>(i)])) = lam(i);
    return certify(c, mats, v, full);
}

} // namespace

LinearMaxResult maximize_linear_over_ellipsoids(const Vec& c, const EllipsoidSet& constraints,
                                                const SolverConfig& cfg) {
    cfg.validate();
    if (constraints.size() == 0)
        throw Error(ErrorCode::Unbounded, "no constraints");
    if (c.size() != constraints.dim())
        throw Error(ErrorCode::InvalidConstraints, "objective and constraint dimensions differ");
    if (!c.allFinite())
        throw Error(ErrorCode::InvalidConstraints, "objective has non-finite entries");
    check_bounded(c, constraints);

    const auto n = c.size();
    const auto m = static_cast<double>(constraints.size());
    const auto& mats = constraints.matrices();

    LinearMaxResult out;
    Vec v = Vec::Zero(n);
    BarrierState st;
    evaluate_slacks(constraints, v, st);

    if (c.squaredNorm() == 0.0) {
        out.v = v;
        out.multipliers = Vec::Zero(static_cast<Eigen::Index>(mats.size()));
        out.max_violation = -1.0;
        return out;
    }

    // Scale t so that the first centering step is well conditioned regardless of |c|.
    double t = cfg.barrier_t0 / std::max(c.norm(), 1e-300) * std::sqrt(m);
    Vec grad(n), step(n);
    Mat hess(n, n);
    Eigen::LDLT<Mat> ldlt;
    BarrierState trial;

    for (;;) {
        ++out.outer_iterations;
        double prev_decrement = std::numeric_limits<double>::infinity();
        for (int newton = 0;; ++newton) {
            if (newton >= cfg.max_newton_iters)
                throw Error(ErrorCode::NoConvergence, "Newton iteration cap reached in centering step");
            grad = -t * c;
            hess.setZero();
            for (std::size_t j = 0; j < mats.size(); ++j) {
                const double s = st.slack(static_cast<Eigen::Index>(j));
                grad += (2.0 / s) * st.Av[j];
                hess += (2.0 / s) * mats[j];
                hess.noalias() += (4.0 / (s * s)) * st.Av[j] * st.Av[j].transpose();
            }
            ldlt.compute(hess);
            step = -ldlt.solve(grad);
            const double decrement2 = -grad.dot(step);
            if (!(decrement2 > 2e-14))
                break;
            // Inside the quadratic region the decrement must keep shrinking;
            // once it stalls we are at the rounding floor.
            const bool quadratic = decrement2 < 0.1;
            if (quadratic && decrement2 >= prev_decrement)
                break;
            prev_decrement = decrement2;

            const double f0 = barrier_objective(t, c, v, st.slack);
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
                const Vec cand = v + alpha * step;
                if (cand == v)
                    break;
                if (!evaluate_slacks(constraints, cand, trial))
                    continue;
                // Full Newton steps are safe in the quadratic region, where the
                // barrier value itself is too large to compare reliably.
                if (quadratic ||
                    barrier_objective(t, c, cand, trial.slack) <= f0 - 0.25 * alpha * decrement2) {
                    v = cand;
                    std::swap(st, trial);
                    accepted = true;
                    break;
                }
            }
            ++out.newton_iterations;
            if (!accepted)
                break; // no further progress possible in floating point
        }
        if (m / t < cfg.gap_tol * std::max(1.0, std::abs(c.dot(v))))
            break;
        t *= cfg.barrier_mu;
    }

    // Barrier multipliers lambda_j = 1/(t s_j) lose precision at tiny slacks,
    // and near-degenerate vertices leave v itself slightly off. Several
    // certificates are built and the one with the smallest residual is kept.
    const auto k = static_cast<Eigen::Index>(mats.size());
    Vec lambda(k);
    for (Eigen::Index j = 0; j < k; ++j)
        lambda(j) = 1.0 / (t * st.slack(j));

    Certificate best = certify(c, mats, v, lambda);
    const Certificate fitted = certify(c, mats, v, nnls(best.normals, c));
    if (fitted.score() < best.score())
        best = fitted;
    if (best.score() > 1e-3 * cfg.kkt_tol) {
        // Candidate active sets: by multiplier size and by slack size. They
        // differ when a constraint is only weakly active.
        const double top = lambda.maxCoeff();
        std::vector<std::vector<std::size_t>> guesses(3);
        for (std::size_t j = 0; j < mats.size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            if (lambda(jj) > 1e-6 * top)
                guesses[0].push_back(j);
            if (lambda(jj) > 1e-3 * top)
                guesses[1].push_back(j);
            if (st.slack(jj) < 1e-7)
                guesses[2].push_back(j);
        }
        for (const auto& active : guesses) {
            if (active.empty() || static_cast<Eigen::Index>(active.size()) > n)
                continue;
            auto polished = polish_active_set(c, mats, v, lambda, active, cfg);
            if (polished && polished->max_violation <= cfg.feasibility_tol &&
                polished->score() < best.score())
                best = std::move(*polished);
        }
    }

    out.v = best.v;
    out.value = c.dot(best.v);
    out.multipliers = best.lambda;
    out.stationarity = best.stationarity;
    out.complementarity = best.complementarity;
    out.max_violation = best.max_violation;
    if (out.stationarity > cfg.kkt_tol || out.complementarity > cfg.kkt_tol)
        throw Error(ErrorCode::NoConvergence, "barrier method finished with KKT residual above kkt_tol");
    return out;
}

// ---------------------------------------------------------------------------
// Golden-section search

GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double tol) {
    if (!(lo < hi))
        throw Error(ErrorCode::InvalidBracket, "golden-section bracket requires lo < hi");
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    GoldenResult out;
    out.evaluations = 2;
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
        ++out.evaluations;
    }
    if (f1 >= f2) {
        out.x = x1;
        out.fx = f1;
    } else {
        out.x = x2;
        out.fx = f2;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quartic root

double quartic_value(double c0, double c1, double c2, double c3, double x) {
    return c0 - x * (c1 + x * (c2 + x * (c3 + x)));
}

double positive_quartic_root(double c0, double c1, double c2, double c3, double root_tol) {
    if (!(c0 > 0.0) || c1 < 0.0 || c2 < 0.0 || c3 < 0.0 ||
        !std::isfinite(c0) || !std::isfinite(c1) || !std::isfinite(c2) || !std::isfinite(c3))
        throw Error(ErrorCode::BadSignPattern, "expected c0 > 0 and c1, c2, c3 >= 0");
    double lo = 0.0;
    double hi = 1.0;
    while (quartic_value(c0, c1, c2, c3, hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    const double target = root_tol * std::max(1.0, c0) * 1e-3;
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double p = quartic_value(c0, c1, c2, c3, mid);
        if (std::abs(p) <= target)
            return mid;
        if (p > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    // P is strictly decreasing on (0, inf); return the endpoint closer to zero.
    return std::abs(quartic_value(c0, c1, c2, c3, lo)) <= std::abs(quartic_value(c0, c1, c2, c3, hi))
               ? lo
               : hi;
}

// ---------------------------------------------------------------------------
// NNLS and the minimum-norm QP

Vec nnls(const Mat& E, const Vec& f, int* iterations) {
    const auto n = E.cols();
    Vec u = Vec::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double tol = 1e-13 * std::max(1.0, E.cwiseAbs().maxCoeff()) * std::max(1.0, f.norm());
    int iters = 0;
    const int max_iters = 3 * static_cast<int>(n) + 30;

    auto solve_passive = [&](Vec& z) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[static_cast<std::size_t>(j)])
                idx.push_back(j);
        Mat Ep(E.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k)
            Ep.col(static_cast<Eigen::Index>(k)) = E.col(idx[k]);
        const Vec zp = Ep.colPivHouseholderQr().solve(f);
        z = Vec::Zero(n);
        for (std::size_t k = 0; k < idx.size(); ++k)
            z(idx[k]) = zp(static_cast<Eigen::Index>(k));
    };

    for (; iters < max_iters; ++iters) {
        const Vec w = E.transpose() * (f - E * u);
        Eigen::Index t = -1;
        double best = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
                best = w(j);
                t = j;
            }
        }
        if (t < 0)
            break;
        passive[static_cast<std::size_t>(t)] = true;

        Vec z;
        for (int inner = 0; inner < max_iters; ++inner) {
            solve_passive(z);
            bool positive = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
                    positive = false;
            if (positive) {
                u = z;
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
                    alpha = std::min(alpha, u(j) / (u(j) - z(j)));
            }
            u += alpha * (z - u);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && u(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    u(j) = 0.0;
                }
            }
        }
    }
    if (iterations)
        *iterations = iters;
    return u;
}

QpResult min_norm_qp(const Mat& Heq, const Vec& beq, const Mat& Gineq, const SolverConfig& cfg) {
    cfg.validate();
    const auto n = Heq.cols();
    if (Heq.rows() != beq.size() || (Gineq.rows() > 0 && Gineq.cols() != n))
        throw Error(ErrorCode::InvalidConstraints, "QP dimensions do not agree");

    // Minimum-norm particular solution and an orthonormal null-space basis of Heq.
    Vec w0 = Vec::Zero(n);
    Mat Z = Mat::Identity(n, n);
    if (Heq.rows() > 0) {
        Eigen::JacobiSVD<Mat> svd(Heq, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vec& sv = svd.singularValues();
        const double smax = sv.size() > 0 ? sv(0) : 0.0;
        Eigen::Index rank = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv(k) > 1e-12 * std::max(1.0, smax))
                ++rank;
        const Mat& U = svd.matrixU();
        const Mat& V = svd.matrixV();
        for (Eigen::Index k = 0; k < rank; ++k)
            w0 += (U.col(k).dot(beq) / sv(k)) * V.col(k);
        const double scale = std::max(1.0, beq.cwiseAbs().maxCoeff());
        if ((Heq * w0 - beq).cwiseAbs().maxCoeff() > cfg.feasibility_tol * scale)
            throw Error(ErrorCode::Infeasible, "equality constraints are inconsistent");
        Z = V.rightCols(n - rank);
    }

    QpResult out;
    Vec w = w0;
    if (Gineq.rows() > 0 && Z.cols() > 0) {
        // Least-distance problem in null-space coordinates:
        //   min |x|  s.t.  (-G Z) x >= G w0
        const Mat A = -(Gineq * Z);
        const Vec h = Gineq * w0;
        const auto k = Z.cols();
        Mat E(k + 1, A.rows());
        E.topRows(k) = A.transpose();
        E.row(k) = h.transpose();
        Vec f = Vec::Zero(k + 1);
        f(k) = 1.0;
        const Vec u = nnls(E, f, &out.iterations);
        const Vec r = E * u - f;
        if (r.norm() <= 1e-12 || std::abs(r(k)) <= 1e-14)
            throw Error(ErrorCode::Infeasible, "inequality constraints admit no point");
        const Vec x = -r.head(k) / r(k);
        w = w0 + Z * x;
    }

    out.w = w;
    out.objective = w.squaredNorm();
    out.eq_residual = Heq.rows() > 0 ? (Heq * w - beq).cwiseAbs().maxCoeff() : 0.0;
    const double wscale = std::max(1.0, w.cwiseAbs().maxCoeff());
    if (Gineq.rows() > 0)
        out.ineq_violation = std::max(0.0, (Gineq * w).maxCoeff());
    if (out.ineq_violation > cfg.feasibility_tol * wscale)
        throw Error(ErrorCode::Infeasible, "inequality constraints admit no point");

    // KKT check: w + Heq^T y + G_A^T z = 0 with z >= 0 over the active set.
    // y is split into nonnegative parts so one NNLS solve yields all multipliers.
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < Gineq.rows(); ++i)
        if (Gineq.row(i).dot(w) >= -cfg.feasibility_tol * wscale)
            active.push_back(i);
    const auto neq = Heq.rows();
    Mat K(n, 2 * neq + static_cast<Eigen::Index>(active.size()));
    if (neq > 0) {
        K.leftCols(neq) = Heq.transpose();
        K.middleCols(neq, neq) = -Heq.transpose();
    }
    for (std::size_t a = 0; a < active.size(); ++a)
        K.col(2 * neq + static_cast<Eigen::Index>(a)) = Gineq.row(active[a]).transpose();
    if (K.cols() > 0) {
        const Vec mult = nnls(K, -w);
        out.kkt_residual = (w + K * mult).cwiseAbs().maxCoeff();
    } else {
        out.kkt_residual = w.cwiseAbs().maxCoeff();
    }
    return out;
}

} // namespace afsec
