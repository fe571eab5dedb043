#include "afsec/error.hpp"
#include "afsec/oracle.hpp"
#include "afsec/symmetric_solver.hpp"
#include "afsec/zero_forcing.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace afsec;
using testsupport::vec;

TEST_CASE("oracle examples") {
    auto eq = ChannelInstance(vec({1}), vec({2}), vec({2}), 1.0, vec({5}), 1.0);
    CHECK(grid_oracle(eq, 101, 2).rate_bits == 0.0);

    auto one = testsupport::single_relay();
    auto r = grid_oracle(one, 401, 3);
    CHECK(std::abs(r.beta_opt.beta(0)) == doctest::Approx(0.5946).epsilon(1e-4));
    CHECK(r.rate_bits == doctest::Approx(0.1652).epsilon(1e-3));
    const double closed = symmetric_rate_at({1, 1.0, 2.0, 1.0, 1.0, 5.0, 1.0}, std::pow(0.125, 0.25));
    CHECK(r.rate_bits <= closed + 1e-15);
    CHECK(r.rate_bits >= closed - 1e-9);

    auto a = grid_oracle(testsupport::instance_a(), 201, 3);
    CHECK(a.rate_bits == doctest::Approx(0.2584).epsilon(1e-3));
    CHECK(a.method == Method::Oracle);
}

TEST_CASE("oracle agrees with the plain-arithmetic grid") {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 5; ++k) {
        auto inst = testsupport::random_degraded(rng, 2, 1.0 + static_cast<double>(rng() % 20));
        auto net = testsupport::Net::from(inst);
        auto g = testsupport::grid_max(net, {net.bmax(0), net.bmax(1)}, 101, 2);
        auto o = grid_oracle(inst, 101, 2);
        CHECK(o.rate_bits == doctest::Approx(g.rate).epsilon(1e-9));
        CHECK(o.rate_bits == doctest::Approx(net.rate(testsupport::to_std(o.beta_opt.beta))).epsilon(1e-12));
    }
}

TEST_CASE("oracle determinism and thread independence") {
    auto inst = testsupport::zf_instance();
    OracleOptions serial;
    serial.threads = 1;
    OracleOptions parallel;
    parallel.threads = 4;
    for (auto c : {OracleConstraint::Individual, OracleConstraint::Total, OracleConstraint::ZeroForcing}) {
        auto r0 = constrained_oracle(inst, c, 151, 3, serial);
        auto r1 = constrained_oracle(inst, c, 151, 3, serial);
        auto r2 = constrained_oracle(inst, c, 151, 3, parallel);
        CHECK(r0.rate_bits == r1.rate_bits);
        CHECK(r0.beta_opt.beta == r1.beta_opt.beta);
        CHECK(r0.rate_bits == r2.rate_bits);
        CHECK(r0.beta_opt.beta == r2.beta_opt.beta);
    }
}

TEST_CASE("refinement never lowers the incumbent") {
    std::mt19937_64 rng(67);
    for (int k = 0; k < 5; ++k) {
        auto inst = testsupport::random_degraded(rng, 3, 1.0 + static_cast<double>(rng() % 20));
        double prev = -1.0;
        for (int rounds = 0; rounds <= 4; ++rounds) {
            const double r = grid_oracle(inst, 41, rounds).rate_bits;
            CHECK(r >= prev);
            prev = r;
        }
    }
}

TEST_CASE("oracle optimum is sign symmetric") {
    std::mt19937_64 rng(71);
    for (int k = 0; k < 10; ++k) {
        auto inst = testsupport::random_degraded(rng, 2, 3.0);
        auto r = grid_oracle(inst, 101, 2);
        CHECK(secrecy_rate(inst, {-r.beta_opt.beta}) == r.rate_bits);
        // Flipping every source gain mirrors the landscape.
        auto flipped = ChannelInstance(-inst.h_s(), inst.h_t(), inst.h_e(), inst.P_s(), inst.P_relay(), inst.sigma2());
        CHECK(grid_oracle(flipped, 101, 2).rate_bits == doctest::Approx(r.rate_bits).epsilon(1e-12));
    }
}

TEST_CASE("constrained oracles") {
    std::mt19937_64 rng(73);
    for (int k = 0; k < 10; ++k) {
        auto inst = testsupport::random_degraded(rng, 2, 1.0 + static_cast<double>(rng() % 20));
        auto ind = constrained_oracle(inst, OracleConstraint::Individual, 101, 2);
        auto tot = constrained_oracle(inst, OracleConstraint::Total, 101, 2);
        CHECK(tot.rate_bits >= ind.rate_bits - 1e-4);
        const Vec lam = inst.h_s().array().square() * inst.P_s() + inst.sigma2();
        CHECK((tot.beta_opt.beta.array().square() * lam.array()).sum() <= inst.P_relay().sum() * (1 + 1e-12));
        CHECK(grid_oracle(inst, 101, 2).rate_bits == ind.rate_bits);
    }

    auto scaled = testsupport::instance_a();
    CHECK(constrained_oracle(scaled, OracleConstraint::ZeroForcing, 101, 2).rate_bits == 0.0);

    auto zf = testsupport::zf_instance();
    auto o = constrained_oracle(zf, OracleConstraint::ZeroForcing, 401, 3);
    CHECK(o.rate_bits == doctest::Approx(solve_zero_forcing(zf).rate_bits).epsilon(1e-6));
    CHECK(o.rate_bits == doctest::Approx(0.28462).epsilon(1e-4));
    CHECK(o.snr_e <= 1e-12);
}

TEST_CASE("oracle errors") {
    auto big = ChannelInstance(Vec::Ones(4), Vec::Ones(4), Vec::Constant(4, 0.5), 1.0, Vec::Constant(4, 5.0), 1.0);
    OracleOptions opt;
    opt.max_evaluations = 1000;
    try {
        grid_oracle(big, 11, 0, opt);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
    CHECK_THROWS_AS(grid_oracle(testsupport::single_relay(), 1, 0), Error);
    CHECK_THROWS_AS(grid_oracle(testsupport::single_relay(), 11, -1), Error);
}
