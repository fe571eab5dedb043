#pragma once

// Shared fixtures and independent reference computations for the tests.
// Nothing here calls into the library's evaluation code, so the values it
// produces can be used to check the library.

#include "afsec/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testsupport {

using afsec::ChannelInstance;
using afsec::Vec;

inline Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v(i++) = x;
    return v;
}

// h_s=[1,1], h_t=[1,2], h_e=[0.5,1], P=[5,5], P_s=sigma2=1 (scaled, alpha=0.5)
inline ChannelInstance instance_a() {
    return ChannelInstance(vec({1, 1}), vec({1, 2}), vec({0.5, 1}), 1.0, vec({5, 5}), 1.0);
}

// Single relay: h_s=1, h_t=2, h_e=1, P=5, P_s=sigma2=1
inline ChannelInstance single_relay() {
    return ChannelInstance(vec({1}), vec({2}), vec({1}), 1.0, vec({5}), 1.0);
}

// Zero-forcing example: h_s=[1,1], h_t=[1,2], h_e=[0.8,0.4]
inline ChannelInstance zf_instance() {
    return ChannelInstance(vec({1, 1}), vec({1, 2}), vec({0.8, 0.4}), 1.0, vec({5, 5}), 1.0);
}

// Plain-arithmetic rate of a diamond network, written out from the model.
struct Net {
    std::vector<double> hs, ht, he, P;
    double Ps = 1.0, s2 = 1.0;

    static Net from(const ChannelInstance& inst) {
        Net n;
        for (Eigen::Index i = 0; i < inst.M(); ++i) {
            n.hs.push_back(inst.h_s()(i));
            n.ht.push_back(inst.h_t()(i));
            n.he.push_back(inst.h_e()(i));
            n.P.push_back(inst.P_relay()(i));
        }
        n.Ps = inst.P_s();
        n.s2 = inst.sigma2();
        return n;
    }

    std::size_t size() const { return hs.size(); }

    double bmax(std::size_t i) const { return std::sqrt(P[i] / (hs[i] * hs[i] * Ps + s2)); }

    double snr(const std::vector<double>& b, const std::vector<double>& h) const {
        double num = 0.0, den = 1.0;
        for (std::size_t i = 0; i < size(); ++i) {
            num += hs[i] * b[i] * h[i];
            den += b[i] * b[i] * h[i] * h[i];
        }
        return Ps / s2 * num * num / den;
    }

    double rate(const std::vector<double>& b) const {
        const double r = 0.5 * std::log2((1.0 + snr(b, ht)) / (1.0 + snr(b, he)));
        return r > 0.0 ? r : 0.0;
    }
};

inline std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Two relays: the nulling line is beta_2 = k beta_1. Destination SNR along
// the line grows with |beta_1|, so the optimum sits where the line leaves the
// box. Returns -1 when both eavesdropper couplings vanish.
inline double two_relay_zf_rate(const ChannelInstance& inst) {
    auto net = Net::from(inst);
    const double a1 = net.hs[0] * net.he[0], a2 = net.hs[1] * net.he[1];
    if (a2 == 0.0 && a1 == 0.0)
        return -1.0;
    if (a2 == 0.0)
        return net.rate({0.0, net.bmax(1)});
    const double k = -a1 / a2;
    const double t = std::min(net.bmax(0), net.bmax(1) / std::abs(k));
    return net.rate({t, k * t});
}

// Brute-force 1-D maximizer: dense scan, then repeated zoom on the best cell.
struct Max1d {
    double x;
    double fx;
};

inline Max1d scan_max(const std::function<double(double)>& f, double lo, double hi, int n = 2000,
                      int zooms = 12) {
    double best_x = lo, best_f = f(lo);
    for (int z = 0; z <= zooms; ++z) {
        const double h = (hi - lo) / n;
        for (int k = 0; k <= n; ++k) {
            const double x = lo + h * k;
            const double fx = f(x);
            if (fx > best_f) {
                best_f = fx;
                best_x = x;
            }
        }
        const double nlo = std::max(lo, best_x - 2 * h);
        const double nhi = std::min(hi, best_x + 2 * h);
        lo = nlo;
        hi = nhi;
        if (hi - lo < 1e-15)
            break;
    }
    return {best_x, best_f};
}

// Exhaustive grid over the box |b_i| <= bound_i, then rounds of local grids
// (cell shrunk 10x) around the incumbent. Points failing `feasible` are
// skipped. Small M only.
struct GridMax {
    std::vector<double> b;
    double rate = 0.0;
};

inline GridMax grid_max(const Net& net, const std::vector<double>& bound, int steps, int rounds,
                        const std::function<bool(const std::vector<double>&)>& feasible = nullptr) {
    const std::size_t M = net.size();
    GridMax best{std::vector<double>(M, 0.0), net.rate(std::vector<double>(M, 0.0))};
    std::vector<double> lo(M), h(M);
    for (std::size_t i = 0; i < M; ++i) {
        lo[i] = -bound[i];
        h[i] = 2.0 * bound[i] / (steps - 1);
    }
    int n = steps;
    for (int round = 0; round <= rounds; ++round) {
        std::vector<int> idx(M, 0);
        std::vector<double> b(M);
        for (;;) {
            bool inside = true;
            for (std::size_t i = 0; i < M; ++i) {
                b[i] = lo[i] + h[i] * idx[i];
                if (std::abs(b[i]) > bound[i])
                    inside = false;
            }
            if (inside && (!feasible || feasible(b))) {
                const double r = net.rate(b);
                if (r > best.rate) {
                    best.rate = r;
                    best.b = b;
                }
            }
            std::size_t k = 0;
            while (k < M && ++idx[k] == n)
                idx[k++] = 0;
            if (k == M)
                break;
        }
        n = 21;
        for (std::size_t i = 0; i < M; ++i) {
            const double cell = h[i];
            h[i] = cell / 10.0;
            lo[i] = best.b[i] - 10.0 * h[i];
        }
    }
    return best;
}

// Number of strict local maxima of a sampled sequence after merging runs of
// neighbours that differ by at most `plateau`.
inline int count_local_maxima(const std::vector<double>& f, double plateau) {
    std::vector<double> merged;
    for (double x : f)
        if (merged.empty() || std::abs(x - merged.back()) > plateau)
            merged.push_back(x);
    int peaks = 0;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const bool left = i == 0 || merged[i] > merged[i - 1];
        const bool right = i + 1 == merged.size() || merged[i] > merged[i + 1];
        if (left && right)
            ++peaks;
    }
    return peaks;
}

inline double rayleigh_draw(std::mt19937_64& rng, double sigma) {
    std::uniform_real_distribution<double> u(1e-300, 1.0);
    return sigma * std::sqrt(-2.0 * std::log(u(rng)));
}

// Random degraded instance with Rayleigh gains and h_e = u h_t.
inline ChannelInstance random_degraded(std::mt19937_64& rng, int M, double P_s = 1.0, double P = 5.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec hs(M), ht(M), he(M);
    for (int i = 0; i < M; ++i) {
        hs(i) = rayleigh_draw(rng, 0.5);
        ht(i) = rayleigh_draw(rng, 0.5);
        he(i) = u(rng) * 0.999 * ht(i);
    }
    return ChannelInstance(hs, ht, he, P_s, Vec::Constant(M, P), 1.0);
}

// Random scaled instance h_e = alpha h_t with alpha ~ U(0.05, 0.95).
inline ChannelInstance random_scaled(std::mt19937_64& rng, int M, double alpha) {
    std::uniform_real_distribution<double> pw(1.0, 10.0);
    Vec hs(M), ht(M), P(M);
    for (int i = 0; i < M; ++i) {
        hs(i) = rayleigh_draw(rng, 0.5);
        ht(i) = rayleigh_draw(rng, 0.5);
        P(i) = pw(rng);
    }
    return ChannelInstance(hs, ht, alpha * ht, pw(rng), P, 1.0);
}

} // namespace testsupport
