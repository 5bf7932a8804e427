#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qsb/coinflip.hpp"

using namespace qsb;
using namespace qsb::coinflip;
using sources::Pumping;

namespace {
constexpr double kPi = 3.14159265358979323846;
const qkd::ChannelParams kDefaults;
} // namespace

TEST_SUITE("coinflip") {

TEST_CASE("protocol phases") {
    CHECK(protocol_phase(0, 0) == doctest::Approx(0.0));
    CHECK(protocol_phase(1, 0) == doctest::Approx(kPi));
    CHECK(protocol_phase(0, 1) == doctest::Approx(kPi / 2.0));
    CHECK(protocol_phase(1, 1) == doctest::Approx(3.0 * kPi / 2.0));
}

TEST_CASE("alice's closed-form bound") {
    CHECK(alice_cheat_bound(1.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(alice_cheat_bound(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(alice_cheat_bound(0.9) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("bob's incoherent bound: frozen value and limits") {
    sources::EffectiveCoefficients c;
    c.P0 = 0.5234;
    c.P1 = 0.4763;
    c.P_multi = 3e-4;
    CHECK(bob_cheat_bound_incoherent(c, 1000.0, 0.9) ==
          doctest::Approx(0.921475469125).epsilon(1e-10));
    // all-vacuum: Bob can only guess, bound collapses to the A1 branch
    sources::EffectiveCoefficients vac;
    vac.P0 = 1.0;
    vac.P1 = vac.P_multi = 0.0;
    CHECK(bob_cheat_bound_incoherent(vac, 10.0, 0.9) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("helstrom closed form on pure states") {
    numlin::Mat s0(2, 2), s1(2, 2);
    s0(0, 0) = 1.0;
    s1(0, 0) = s1(0, 1) = s1(1, 0) = s1(1, 1) = 0.5;
    CHECK(helstrom(s0, s1) == doctest::Approx(0.5 + 0.25 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(helstrom(s0, s0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("usd matches the analytic pure-state value") {
    numlin::Mat s0(2, 2), s1(2, 2);
    s0(0, 0) = 1.0;
    s1(0, 0) = s1(0, 1) = s1(1, 0) = s1(1, 1) = 0.5;
    CHECK(usd_probability(s0, s1) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("usd on random pure pairs: 1 - |overlap|") {
    std::mt19937 rng(20240818);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + int(rng() % 2);
        const auto u = qsb::testing::random_pure(rng, n);
        const auto v = qsb::testing::random_pure(rng, n);
        const auto s0 = qsb::testing::projector(u);
        const auto s1 = qsb::testing::projector(v);
        numlin::cxd ov = 0.0;
        for (int i = 0; i < n; ++i) ov += std::conj(u[i]) * v[i];
        const double want = 1.0 - std::abs(ov);
        CHECK(std::abs(usd_probability(s0, s1) - want) < 1e-6);
    }
}

TEST_CASE("coherent coin-flip states of the RE source") {
    const auto src = sources::qds_source(Pumping::RE, 0.5);
    const auto st = coinflip_states(src, 0.9);
    CHECK(st.sigma0.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(st.sigma1.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(helstrom(st.sigma0, st.sigma1) == doctest::Approx(0.504655868809).epsilon(1e-8));
    CHECK(usd_probability(st.sigma0, st.sigma1) < 1e-3); // identical 1-photon sectors
}

TEST_CASE("honest abort bookkeeping") {
    CHECK(honest_abort(1.0, 5.0, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    const double p = 0.3, N = 12.0, e = 0.02;
    const double z = std::pow(1.0 - p, N);
    CHECK(honest_abort(p, N, e) == doctest::Approx(z + (1.0 - z) * e / 2.0).epsilon(1e-13));
    const double n = pulses_for_abort_target(p, 0.01);
    CHECK(std::pow(1.0 - p, n) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_THROWS_AS(pulses_for_abort_target(0.0, 0.01), AssumptionError);
}

TEST_CASE("classical bound") {
    CHECK(classical_bound(0.025) == doctest::Approx(0.888196601125).epsilon(1e-12));
    CHECK(classical_bound(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(classical_bound(-0.1), ConfigError);
}

TEST_CASE("frozen balanced protocol points") {
    {
        const auto src = sources::qds_source(Pumping::TPE, 0.01);
        const auto p = evaluate_point(src, kDefaults, 80.0);
        CHECK(p.balanced);
        CHECK(p.N == doctest::Approx(228.78959218).epsilon(1e-8));
        CHECK(p.y == doctest::Approx(0.927426249971).epsilon(1e-4));
        CHECK(p.cheat == doctest::Approx(0.879717771369).epsilon(1e-4));
        CHECK(p.p_ab == doctest::Approx(0.025).epsilon(1e-12));
        CHECK(p.classical == doctest::Approx(0.888196601125).epsilon(1e-12));
        CHECK(p.advantage);
    }
    {
        const auto src = sources::qds_source(Pumping::LA, 0.1);
        const auto p = evaluate_point(src, kDefaults, 30.0);
        CHECK(p.cheat == doctest::Approx(0.869758791179).epsilon(1e-4));
        CHECK(p.advantage);
    }
}

TEST_CASE("balance falls back to unbalanced when bob never reaches alice") {
    auto weak_bob = [](double) { return 0.1; };
    const auto r = balance(weak_bob);
    CHECK_FALSE(r.balanced);
    CHECK(r.y == doctest::Approx(1.0));
    CHECK(r.cheat == doctest::Approx(0.75));
}

TEST_CASE("cheating probability grows with distance") {
    const auto src = sources::qds_source(Pumping::TPE, 0.01);
    double prev = 0.0;
    for (double km : {20.0, 50.0, 80.0}) {
        const auto p = evaluate_point(src, kDefaults, km);
        CHECK(p.cheat >= prev - 1e-9);
        prev = p.cheat;
    }
}

TEST_CASE("PDS sources are rejected by the coin-flip encoder") {
    CHECK_THROWS_AS(coinflip_states(sources::pds_source(0.5), 0.9), ConfigError);
}

} // TEST_SUITE
