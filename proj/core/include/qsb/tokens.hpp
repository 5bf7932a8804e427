// qsb::tokens -- unforgeability of quantum tokens: squashed error/loss
// operators, the Choi-matrix cloning SDP, noise tolerance, and
// collection-efficiency thresholds against the best phase-randomized PDS.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qsb/sdp.hpp"
#include "qsb/sources.hpp"

namespace qsb::tokens {

using numlin::Mat;
using numlin::cxd;
using sources::Pumping;

// A discrimination instance: the four token states with equal priors, the
// squashed single-photon qubits behind the verifier's measurement, and the
// honest loss entering the l-constraint.
struct TokenSetup {
    std::vector<Mat> sigmas;                 // four density matrices, dim d
    std::vector<std::array<cxd, 2>> betas;   // squashed measurement qubits
    double honest_loss = 0.0;                // l = 1 - source efficiency
    std::string label;
};

TokenSetup ideal_qubit_setup();
TokenSetup qds_setup(Pumping pumping, double eta);
TokenSetup rp_pds_setup(double mu);
TokenSetup fp_pds_setup(double mu); // mu = alpha^2 of the phase-carrying mode

struct ErrorLossOperators {
    Mat E1, E2, L1, L2; // Hermitian on H1 (x) H2 (x) H_ini, dim 9d
};

// E1 = 1/4 sum_k 1/2 |beta_k^perp><beta_k^perp| (x) 1 (x) conj(sigma_k),
// E2 mirrored on slot 2; L1/L2 with the |empty><empty| projector instead.
ErrorLossOperators build_error_loss_operators(const TokenSetup& setup);

struct NoiseToleranceResult {
    double min_error = 0.0;
    double gap = 0.0;
    numlin::SdpStatus status = numlin::SdpStatus::solved;
    int iterations = 0;
};

// min Tr(E1 J) over CP maps: Tr_{H1 x H2}(J) = 1_ini, Tr(E1 J) >= Tr(E2 J),
// Tr(L1 J) <= l, Tr(L2 J) <= l, J >= 0 (unnormalized Choi convention).
NoiseToleranceResult noise_tolerance(const TokenSetup& setup, double allowed_loss);

// Tolerance at the setup's own honest loss.
NoiseToleranceResult noise_tolerance(const TokenSetup& setup);

// Best noise tolerance of the randomized-phase PDS family over mu (coarse
// grid + golden refinement), each mu evaluated at its honest loss.
struct BestPdsTolerance {
    double mu = 0.0;
    double tolerance = 0.0;
};
BestPdsTolerance best_rp_pds_tolerance();

// Collection efficiency where the QDS tolerance (at its honest loss) equals
// `target`, by bisection on eta to +-0.005; none when no crossing in [lo,hi].
std::optional<double> threshold_collection(Pumping pumping, double target, double eta_lo = 0.05,
                                           double eta_hi = 1.0);

} // namespace qsb::tokens
