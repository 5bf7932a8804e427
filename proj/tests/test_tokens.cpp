#include "doctest.h"

#include <cmath>

#include "qsb/tokens.hpp"

using namespace qsb;
using namespace qsb::tokens;

TEST_SUITE("tokens") {

TEST_CASE("ideal qubit anchors across the loss range") {
    const auto setup = ideal_qubit_setup();
    // l = 0: the known clean value (1 - 1/sqrt 2)/4
    const auto at0 = noise_tolerance(setup, 0.0);
    CHECK(at0.status == numlin::SdpStatus::solved);
    CHECK(at0.min_error == doctest::Approx(0.25 * (1.0 - 1.0 / std::sqrt(2.0))).epsilon(2e-6));
    // halfway point scales linearly
    CHECK(noise_tolerance(setup, 0.25).min_error == doctest::Approx(0.0366116491).epsilon(5e-5));
    // the paper's maximal loss tolerance of 50%
    CHECK(std::abs(noise_tolerance(setup, 0.5).min_error) < 1e-3);
    for (double l : {0.5, 0.6, 0.75, 1.0})
        CHECK(std::abs(noise_tolerance(setup, l).min_error) < 1e-6);
}

TEST_CASE("every reported solve carries a closed duality gap") {
    for (double l : {0.0, 0.2, 0.4}) {
        const auto r = noise_tolerance(ideal_qubit_setup(), l);
        CHECK(r.status == numlin::SdpStatus::solved);
        CHECK(r.gap <= 1e-7 * std::max(1.0, std::abs(r.min_error)));
    }
}

TEST_CASE("tolerance is non-increasing in allowed loss") {
    const auto setup = ideal_qubit_setup();
    double prev = 1.0;
    for (double l : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double t = noise_tolerance(setup, l).min_error;
        CHECK(t <= prev + 1e-6);
        prev = t;
    }
}

TEST_CASE("frozen quantum-dot tolerances at unit collection") {
    CHECK(noise_tolerance(qds_setup(Pumping::RE, 1.0)).min_error ==
          doctest::Approx(0.05383822).epsilon(5e-4));
    CHECK(noise_tolerance(qds_setup(Pumping::LA, 1.0)).min_error ==
          doctest::Approx(0.06018287).epsilon(5e-4));
    CHECK(noise_tolerance(qds_setup(Pumping::TPE, 1.0)).min_error ==
          doctest::Approx(0.06966866).epsilon(5e-4));
}

TEST_CASE("frozen tolerances away from the anchor points") {
    CHECK(noise_tolerance(qds_setup(Pumping::TPE, 0.5)).min_error ==
          doctest::Approx(0.03490073).epsilon(1e-3));
    CHECK(noise_tolerance(rp_pds_setup(1.0)).min_error ==
          doctest::Approx(0.02693720).epsilon(5e-4));
    CHECK(std::abs(noise_tolerance(fp_pds_setup(0.5)).min_error) < 1e-4);
}

TEST_CASE("setups expose the honest loss of their source") {
    const auto tpe = qds_setup(Pumping::TPE, 0.5);
    CHECK(tpe.honest_loss == doctest::Approx(0.5234).epsilon(1e-10));
    const auto pds = rp_pds_setup(1.0);
    CHECK(pds.honest_loss == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    REQUIRE(tpe.sigmas.size() == 4);
    for (const auto& s : tpe.sigmas) {
        CHECK(s.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.is_hermitian(1e-12));
    }
}

TEST_CASE("error and loss operators are Hermitian with the right footprint") {
    const auto setup = ideal_qubit_setup();
    const auto ops = build_error_loss_operators(setup);
    const int d = setup.sigmas.front().rows();
    for (const auto* op : {&ops.E1, &ops.E2, &ops.L1, &ops.L2}) {
        REQUIRE(op->rows() == 9 * d);
        CHECK(op->is_hermitian(1e-12));
    }
    // E1 and E2 are exchange-symmetric images of each other: same trace
    CHECK(ops.E1.trace().real() == doctest::Approx(ops.E2.trace().real()).epsilon(1e-12));
    CHECK(ops.L1.trace().real() == doctest::Approx(ops.L2.trace().real()).epsilon(1e-12));
}

} // TEST_SUITE
