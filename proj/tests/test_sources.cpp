#include "doctest.h"

#include <cmath>
#include <numeric>

#include "qsb/sources.hpp"

using namespace qsb;
using namespace qsb::sources;

TEST_SUITE("sources") {

TEST_CASE("presets reproduce the published brightness and purity") {
    struct Row {
        Pumping p;
        double B, P;
    };
    for (const auto& row : {Row{Pumping::RE, 0.9366, 0.9903}, Row{Pumping::LA, 0.8399, 0.9785},
                            Row{Pumping::TPE, 0.9526, 0.9988}}) {
        const auto pop = preset(row.p);
        const auto bp = brightness_purity(pop);
        CHECK(std::abs(bp.B - row.B) < 5e-4);
        CHECK(std::abs(bp.P - row.P) < 5e-4);
        CHECK(pop.p0 + pop.p1 + pop.p2 + pop.p3 == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(preset(Pumping::RE).coherent);
    CHECK_FALSE(preset(Pumping::LA).coherent);
    CHECK_FALSE(preset(Pumping::TPE).coherent);
}

TEST_CASE("population extraction round-trips the presets") {
    for (auto p : {Pumping::RE, Pumping::LA, Pumping::TPE}) {
        const auto pop = preset(p);
        const double b_tilde = pop.p1 + 2.0 * pop.p2 + 3.0 * pop.p3; // unnormalized brightness
        const double p2_meas = pop.p2 + pop.p3;
        const double p3_meas = pop.p3;
        const auto rec = populations_from_correlations(b_tilde, p2_meas, p3_meas, p);
        CHECK(std::abs(rec.p1 - pop.p1) < 5e-4);
        CHECK(std::abs(rec.p2 - pop.p2) < 5e-4);
        CHECK(std::abs(rec.p3 - pop.p3) < 1e-9);
    }
    CHECK_THROWS_AS(populations_from_correlations(0.1, 0.5, 0.0, Pumping::LA), ConfigError);
}

TEST_CASE("poisson coefficients") {
    const double mu = 0.3;
    const auto c = poisson_coefficients(mu);
    CHECK(c.P0 == doctest::Approx(std::exp(-mu)).epsilon(1e-14));
    CHECK(c.P1 == doctest::Approx(mu * std::exp(-mu)).epsilon(1e-14));
    CHECK(c.P0 + c.P1 + c.P_multi == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("binomial thinning of the TPE preset at eta = 0.5") {
    const auto c = qds_effective_coefficients(preset(Pumping::TPE), 0.5);
    CHECK(c.P0 == doctest::Approx(0.5234).epsilon(1e-10));
    CHECK(c.P1 == doctest::Approx(0.4763).epsilon(1e-10));
    CHECK(c.P_multi == doctest::Approx(3.0e-4).epsilon(1e-10));
    CHECK(c.P0 + c.P1 + c.P_multi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thinning at eta = 1 is the identity; at eta = 0 all vacuum") {
    const auto pop = preset(Pumping::LA).as_array();
    const auto full = thinned_populations(pop, 1.0);
    for (int k = 0; k < 4; ++k) CHECK(full[k] == doctest::Approx(pop[k]).epsilon(1e-14));
    const auto none = thinned_populations(pop, 0.0);
    CHECK(none[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(none[1] + none[2] + none[3] < 1e-14);
}

TEST_CASE("fixed-phase PDS states are normalized and mutually rotated") {
    const double alpha = std::sqrt(0.7);
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        const auto s = pds_fixed_phase_state(alpha, k);
        double n = 0.0;
        for (const auto& a : s) n += std::norm(a);
        CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
        sum += n;
    }
    CHECK(sum == doctest::Approx(4.0).epsilon(1e-12));
    // the vacuum-sector coefficient is k-independent in magnitude
    const auto s0 = pds_fixed_phase_state(alpha, 0);
    const auto s2 = pds_fixed_phase_state(alpha, 2);
    CHECK(std::abs(std::abs(s0[0]) - std::abs(s2[0])) < 1e-12);
}

TEST_CASE("randomized-phase PDS states are valid density matrices") {
    for (int k = 0; k < 4; ++k) {
        const auto rho = pds_randomized_state(0.8, k);
        REQUIRE(rho.rows() == 7);
        CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rho.is_hermitian(1e-12));
        const auto eig = numlin::hermitian_eigh(rho);
        CHECK(eig.eigenvalues.front() > -1e-12);
    }
}

TEST_CASE("bb84 qubits form two mutually unbiased bases") {
    for (int k = 0; k < 4; ++k) {
        const auto a = bb84_qubit(k);
        const auto b = bb84_qubit((k + 1) % 4);
        const auto c = bb84_qubit((k + 2) % 4);
        const numlin::cxd adjacent = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
        const numlin::cxd opposite = std::conj(a[0]) * c[0] + std::conj(a[1]) * c[1];
        CHECK(std::abs(adjacent) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(std::abs(opposite) < 1e-12);
    }
}

TEST_CASE("source efficiency definitions") {
    PdsModel pds;
    pds.mu = 0.5;
    CHECK(source_efficiency(pds) == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-14));
    const auto pop = preset(Pumping::TPE);
    CHECK(source_efficiency(pop, 1.0) ==
          doctest::Approx(pop.p1 + pop.p2 + pop.p3).epsilon(1e-12));
    CHECK(source_efficiency(pop, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("photon number coefficients sum to one") {
    const auto qds = photon_number_coefficients(qds_source(Pumping::LA, 0.7));
    CHECK(std::accumulate(qds.begin(), qds.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    const auto pds = photon_number_coefficients(pds_source(0.9));
    CHECK(std::accumulate(pds.begin(), pds.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

} // TEST_SUITE
