#include "doctest.h"

#include <cmath>

#include "qsb/bitcommit.hpp"

using namespace qsb;
using namespace qsb::bitcommit;
using sources::Pumping;

TEST_SUITE("bitcommit") {

TEST_CASE("L' frozen value and maximizer") {
    double s_star = 0.0;
    CHECK(l_prime(2e-5, &s_star) == doctest::Approx(0.495439942200).epsilon(1e-9));
    CHECK(s_star == doctest::Approx(0.02631583).epsilon(1e-4));
    // smaller epsilon -> larger achievable L' (less union-bound penalty)
    CHECK(l_prime(1e-7) > l_prime(2e-5));
    CHECK(l_prime(2e-5) > l_prime(1e-3));
}

TEST_CASE("frozen report: TPE at unit collection, lossless channel") {
    const auto src = sources::qds_source(Pumping::TPE, 1.0);
    const auto r = security_parameters(params_for(src, 1.0));
    CHECK(r.m2 == doctest::Approx(0.9274).epsilon(1e-10));
    CHECK(r.m3 == doctest::Approx(1.2e-3).epsilon(1e-10));
    CHECK(r.delta == doctest::Approx(0.057712409538).epsilon(1e-10));
    CHECK(r.lambda == doctest::Approx(0.318443297683).epsilon(1e-10));
    CHECK(r.condition_margin == doctest::Approx(0.4590888704).epsilon(1e-8));
    CHECK(r.secure);
    CHECK(r.M1 == doctest::Approx(1.297628e+05).epsilon(1e-5));
    CHECK(r.M2 == doctest::Approx(8.415808e+05).epsilon(1e-5));
    CHECK(r.M4 == doctest::Approx(2.117237e+03).epsilon(1e-5));
}

TEST_CASE("frozen report: lossy channel") {
    const auto src = sources::qds_source(Pumping::TPE, 1.0);
    const auto r = security_parameters(params_for(src, 0.8));
    CHECK(r.m2 == doctest::Approx(0.7370720000).epsilon(1e-10));
    CHECK(r.m3 == doctest::Approx(7.68e-4).epsilon(1e-10));
    CHECK(r.condition_margin == doctest::Approx(0.3649303446).epsilon(1e-8));
}

TEST_CASE("frozen report: LA with binding M3") {
    const auto src = sources::qds_source(Pumping::LA, 1.0);
    const auto r = security_parameters(params_for(src, 1.0));
    CHECK(r.m2 == doctest::Approx(0.7979).epsilon(1e-8));
    CHECK(r.m3 == doctest::Approx(0.018).epsilon(1e-4));
    CHECK(r.condition_margin == doctest::Approx(0.3895795187).epsilon(1e-8));
    CHECK(r.M3 == doctest::Approx(3.389689e+07).epsilon(1e-5));
    CHECK(r.N_min == doctest::Approx(3.389689e+07).epsilon(1e-5));
}

TEST_CASE("margin decreases with gamma and with the error rate") {
    const auto src = sources::qds_source(Pumping::TPE, 0.8);
    BitCommitParams defaults;
    double prev = 1.0;
    for (double g : {0.002, 0.004, 0.008}) {
        auto d = defaults;
        d.gamma = g;
        const auto r = security_parameters(params_for(src, 1.0, d));
        CHECK(r.condition_margin < prev);
        prev = r.condition_margin;
    }
    prev = 1.0;
    for (double e : {0.01, 0.02, 0.05, 0.1}) {
        auto d = defaults;
        d.e = e;
        const auto r = security_parameters(params_for(src, 1.0, d));
        CHECK(r.condition_margin < prev);
        prev = r.condition_margin;
    }
}

TEST_CASE("delta domain guard: large error rates are rejected") {
    const auto src = sources::qds_source(Pumping::TPE, 0.8);
    BitCommitParams d;
    d.e = 0.45; // delta >= 1/2: outside the entropy domain
    CHECK_THROWS_AS(security_parameters(params_for(src, 1.0, d)), ConfigError);
}

TEST_CASE("coherent sources are rejected") {
    CHECK_THROWS_AS(params_for(sources::qds_source(Pumping::RE, 0.5), 1.0), AssumptionError);
}

TEST_CASE("PDS margin has an interior maximum in mu") {
    double best = -1.0, best_mu = 0.0;
    for (double mu = 0.05; mu <= 3.0; mu += 0.05) {
        const auto r = security_parameters(params_for(sources::pds_source(mu), 1.0));
        if (r.condition_margin > best) {
            best = r.condition_margin;
            best_mu = mu;
        }
    }
    CHECK(best == doctest::Approx(0.1124493273).epsilon(1e-3));
    CHECK(best_mu == doctest::Approx(0.61).epsilon(0.05));
    const auto lo = security_parameters(params_for(sources::pds_source(0.01), 1.0));
    const auto hi = security_parameters(params_for(sources::pds_source(3.0), 1.0));
    CHECK(lo.condition_margin < best);
    CHECK(hi.condition_margin < best);
}

TEST_CASE("m3 vacuum reading is exposed and larger") {
    const auto src = sources::qds_source(Pumping::LA, 0.7);
    BitCommitParams d;
    const auto def = security_parameters(params_for(src, 1.0, d));
    d.m3_vacuum_reading = true;
    const auto alt = security_parameters(params_for(src, 1.0, d));
    CHECK(alt.m3 > def.m3); // 1 - P(0) >= P(>=2)
    CHECK(alt.condition_margin < def.condition_margin);
}

TEST_CASE("parameter validation") {
    BitCommitParams d;
    d.epsilon = 0.0;
    CHECK_THROWS_AS(d.validate(), ConfigError);
}

} // TEST_SUITE
