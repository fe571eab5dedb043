#include "afsec/error.hpp"
#include "afsec/json_io.hpp"
#include "afsec/network_model.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace afsec;
using testsupport::vec;

TEST_CASE("beta_max bounds") {
    auto one = ChannelInstance(vec({1}), vec({1}), vec({0}), 1.0, vec({5}), 1.0);
    CHECK(beta_max_bounds(one)(0) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));

    auto zero_gain = ChannelInstance(vec({0}), vec({1}), vec({0}), 1.0, vec({4}), 1.0);
    CHECK(beta_max_bounds(zero_gain)(0) == doctest::Approx(2.0).epsilon(1e-14));

    auto a = testsupport::instance_a();
    Vec b = beta_max_bounds(a);
    CHECK(b(0) == doctest::Approx(1.58114).epsilon(1e-5));
    CHECK(b(1) == doctest::Approx(1.58114).epsilon(1e-5));
    Vec w = omega_max_bounds(a);
    CHECK(w(0) == doctest::Approx(std::sqrt(2.5)));
    CHECK(w(1) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("snr examples") {
    auto inst = ChannelInstance(vec({1, 1}), vec({1, 2}), vec({0, 0}), 1.0, vec({5, 5}), 1.0);
    CHECK(snr(inst, {vec({1, 1})}, Node::Destination) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(snr(inst, {vec({0, 0})}, Node::Destination) == 0.0);
    CHECK(snr(inst, {vec({1, 1})}, Node::Eavesdropper) == 0.0);

    auto one = ChannelInstance(vec({1}), vec({1}), vec({0}), 1.0, vec({5}), 1.0);
    CHECK(snr(one, {vec({1})}, Node::Destination) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("secrecy rate and clamp") {
    CHECK(rate_from_snr(1.5, 0.0) == doctest::Approx(0.5 * std::log2(2.5)).epsilon(1e-15));
    CHECK(rate_from_snr(1.5, 0.0) == doctest::Approx(0.66096).epsilon(1e-5));
    CHECK(rate_from_snr(0.2, 0.7) == 0.0);

    // h_e = h_t is not a valid degraded instance but is a valid channel.
    auto same = ChannelInstance(vec({1, 0.3}), vec({0.7, 2}), vec({0.7, 2}), 2.0, vec({5, 5}), 1.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k)
        CHECK(secrecy_rate(same, {vec({u(rng), u(rng)})}) == 0.0);
}

TEST_CASE("transform examples") {
    auto inst = ChannelInstance(vec({1, 1}), vec({1, 1}), vec({0, 0}), 1.0, vec({5, 5}), 1.0);
    CHECK(to_transformed(inst, {vec({0, 0})}).v.norm() == 0.0);
    Vec v = to_transformed(inst, {vec({1, 1})}).v;
    CHECK(v(0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(v(1) == doctest::Approx(0.57735).epsilon(1e-5));

    CHECK(from_transformed(inst, {vec({0, 0})}).beta.norm() == 0.0);
    Vec b = from_transformed(inst, {vec({1 / std::sqrt(3.0), 1 / std::sqrt(3.0)})}).beta;
    CHECK(b(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b(1) == doctest::Approx(1.0).epsilon(1e-14));

    try {
        from_transformed(inst, {vec({std::sqrt(0.5), std::sqrt(0.5) + 1e-16})});
        FAIL("expected NonInvertible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonInvertible);
    }
    CHECK_THROWS_AS(from_transformed(inst, {vec({1.0, 0.0})}), Error);
}

TEST_CASE("transform round trip on random feasible beta") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const int M = 1 + static_cast<int>(rng() % 6);
        auto inst = testsupport::random_degraded(rng, M, 1.0 + 19.0 * (u(rng) + 1.0) / 2.0);
        Vec bmax = beta_max_bounds(inst);
        Vec beta(M);
        for (int i = 0; i < M; ++i)
            beta(i) = u(rng) * bmax(i);
        Vec back = from_transformed(inst, to_transformed(inst, {beta})).beta;
        worst = std::max(worst, (back - beta).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("snr is invariant under a global sign flip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 1000; ++k) {
        auto inst = testsupport::random_degraded(rng, 4);
        Vec beta(4);
        for (int i = 0; i < 4; ++i)
            beta(i) = u(rng);
        CHECK(snr(inst, {beta}, Node::Destination) == snr(inst, {-beta}, Node::Destination));
        CHECK(snr(inst, {beta}, Node::Eavesdropper) == snr(inst, {-beta}, Node::Eavesdropper));
    }
}

TEST_CASE("library snr matches plain arithmetic") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        auto inst = testsupport::random_degraded(rng, 5, 3.0);
        auto net = testsupport::Net::from(inst);
        Vec beta(5);
        for (int i = 0; i < 5; ++i)
            beta(i) = u(rng);
        auto b = testsupport::to_std(beta);
        CHECK(snr(inst, {beta}, Node::Destination) == doctest::Approx(net.snr(b, net.ht)).epsilon(1e-13));
        CHECK(secrecy_rate(inst, {beta}) == doctest::Approx(net.rate(b)).epsilon(1e-12));
    }
}

TEST_CASE("instance validation") {
    auto expect_invalid = [](auto&& make) {
        try {
            make();
            FAIL("expected InvalidInstance");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidInstance);
        }
    };
    expect_invalid([] { ChannelInstance(vec({1}), vec({0}), vec({0}), 1.0, vec({1}), 1.0); });
    expect_invalid([] { ChannelInstance(vec({1}), vec({1}), vec({0}), 0.0, vec({1}), 1.0); });
    expect_invalid([] { ChannelInstance(vec({1}), vec({1}), vec({0}), 1.0, vec({-1}), 1.0); });
    expect_invalid([] { ChannelInstance(vec({1}), vec({1}), vec({0}), 1.0, vec({1}), 0.0); });
    expect_invalid([] { ChannelInstance(vec({1, 2}), vec({1}), vec({0}), 1.0, vec({1}), 1.0); });
    expect_invalid([] { ChannelInstance(Vec(0), Vec(0), Vec(0), 1.0, Vec(0), 1.0); });
}

TEST_CASE("channel classification") {
    auto a = testsupport::instance_a();
    CHECK(is_degraded(a));
    CHECK(is_scaled(a));
    REQUIRE(scale_factor(a).has_value());
    CHECK(*scale_factor(a) == doctest::Approx(0.5));
    CHECK_FALSE(is_symmetric(a));

    auto zf = testsupport::zf_instance();
    CHECK(is_degraded(zf));
    CHECK_FALSE(is_scaled(zf));

    auto sym = ChannelInstance(vec({1, 1}), vec({1, 1}), vec({0.5, 0.5}), 1.0, vec({10, 10}), 1.0);
    CHECK(is_symmetric(sym));

    auto boundary = ChannelInstance(vec({1}), vec({1}), vec({1}), 1.0, vec({1}), 1.0);
    CHECK_FALSE(is_degraded(boundary));
    CHECK_FALSE(is_scaled(boundary));
}

TEST_CASE("report rate is recomputable from beta") {
    auto a = testsupport::instance_a();
    auto rep = make_report(a, {vec({0.7, -0.2})}, Method::Oracle);
    CHECK(std::abs(rep.rate_bits - secrecy_rate(a, rep.beta_opt)) <= 1e-9);
    CHECK(rep.rate_bits >= 0.0);
}

TEST_CASE("instance json round trip") {
    auto a = testsupport::instance_a();
    auto j = instance_to_json(a);
    CHECK(j.at("M") == 2);
    auto back = instance_from_json(j);
    CHECK(back.h_e() == a.h_e());
    CHECK(back.P_relay() == a.P_relay());

    auto bad = j;
    bad["M"] = 3;
    try {
        instance_from_json(bad);
        FAIL("expected InvalidInstance");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidInstance);
    }
    auto missing = j;
    missing.erase("h_t");
    try {
        instance_from_json(missing);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}
