#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "qsb/numlin.hpp"

using namespace qsb;
using namespace qsb::numlin;
using qsb::testing::random_hermitian;

TEST_SUITE("numlin") {

TEST_CASE("eigh reconstructs random Hermitian matrices") {
    // Regression: a sign error in the Jacobi rotation once produced perfectly
    // orthonormal eigenvectors with a wrong decomposition.
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + int(rng() % 12);
        const Mat a = random_hermitian(rng, n);
        const auto eig = hermitian_eigh(a);

        Mat rec(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cxd s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += eig.eigenvectors(i, k) * eig.eigenvalues[k] *
                         std::conj(eig.eigenvectors(j, k));
                rec(i, j) = s;
            }
        CHECK((rec - a).max_abs() < 1e-10);

        const Mat vtv = eig.eigenvectors.dagger() * eig.eigenvectors;
        CHECK((vtv - Mat::identity(n)).max_abs() < 1e-12);
        for (int k = 0; k + 1 < n; ++k)
            CHECK(eig.eigenvalues[k] <= eig.eigenvalues[k + 1]);
    }
}

TEST_CASE("eigh on diagonal and known 2x2") {
    Mat d(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = -1.0;
    d(2, 2) = 0.5;
    const auto eig = hermitian_eigh(d);
    CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eig.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eig.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));

    Mat x(2, 2); // Pauli X: eigenvalues -1, +1
    x(0, 1) = x(1, 0) = 1.0;
    const auto ex = hermitian_eigh(x);
    CHECK(ex.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(ex.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));

    Mat y(2, 2); // Pauli Y: complex off-diagonal
    y(0, 1) = cxd(0.0, -1.0);
    y(1, 0) = cxd(0.0, 1.0);
    const auto ey = hermitian_eigh(y);
    CHECK(ey.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(ey.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("eigh rejects non-Hermitian input") {
    Mat a(2, 2);
    a(0, 1) = 1.0; // a(1,0) stays 0
    CHECK_THROWS_AS(hermitian_eigh(a), ConfigError);
}

TEST_CASE("trace norm") {
    Mat a(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = -3.0;
    CHECK(trace_norm(a) == doctest::Approx(5.0).epsilon(1e-13));

    std::mt19937 rng(7);
    const Mat h = random_hermitian(rng, 5);
    const auto eig = hermitian_eigh(h);
    double want = 0.0;
    for (double w : eig.eigenvalues) want += std::abs(w);
    CHECK(trace_norm(h) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("hermitian kernel spans the null space") {
    // rank-1 projector in dim 3: kernel has dim 2 and is orthogonal to the range
    std::mt19937 rng(11);
    const auto v = qsb::testing::random_pure(rng, 3);
    const Mat p = outer(v, v);
    const Mat k = hermitian_kernel(p);
    REQUIRE(k.cols() == 2);
    const Mat pk = p * k;
    CHECK(pk.max_abs() < 1e-10);
    const Mat ktk = k.dagger() * k;
    CHECK((ktk - Mat::identity(2)).max_abs() < 1e-12);
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.11) == doctest::Approx(0.49992)); // H2 at BB84's famous point
    CHECK_THROWS_AS(binary_entropy(-0.1), ConfigError);
    CHECK_THROWS_AS(binary_entropy(1.1), ConfigError);
}

TEST_CASE("kron and partial ordering of indices") {
    Mat a(2, 2), b(2, 2);
    a(0, 1) = 2.0;
    b(1, 0) = cxd(0.0, 3.0);
    const Mat k = kron(a, b);
    REQUIRE(k.rows() == 4);
    CHECK(k(1, 2) == cxd(0.0, 6.0)); // (0,1) block x (1,0) entry
    CHECK(std::abs(k(0, 0)) == 0.0);
}

TEST_CASE("trace_product matches explicit trace") {
    std::mt19937 rng(21);
    const Mat a = random_hermitian(rng, 4);
    const Mat b = random_hermitian(rng, 4);
    CHECK(trace_product(a, b) == doctest::Approx((a * b).trace().real()).epsilon(1e-13));
}

} // TEST_SUITE
