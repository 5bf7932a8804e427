// qsb::bitcommit -- bounded-storage quantum bit commitment: the Lemma-12
// security parameters, the security condition margin, and the minimum pulse
// count.
#pragma once

#include <vector>

#include "qsb/sources.hpp"

namespace qsb::bitcommit {

using sources::SourceModel;

struct BitCommitParams {
    double epsilon = 2e-5; // security parameter
    double beta = 0.007;
    double gamma = 0.008;
    double S = 972.0;      // dishonest Bob's storage size (qubits)
    double e = 0.02;       // honest error rate
    std::vector<double> p_x;      // photon-number distribution at the source output
    std::vector<double> p_x_etac; // same distribution thinned by the channel eta_c
    // Appendix J leaves the k in "1 - P_(x eta_c)(k)" unbound; the default
    // reading is m3 = P_(x eta_c)(>=2), the alternative m3 = 1 - P_(x eta_c)(0).
    bool m3_vacuum_reading = false;

    void validate() const;
};

struct BitCommitReport {
    double m2 = 0.0;
    double m3 = 0.0;
    double L_prime = 0.0;
    double s_star = 0.0; // maximizer behind L'
    double delta = 0.0;
    double lambda = 0.0;
    double M1 = 0.0, M2 = 0.0, M3 = 0.0, M4 = 0.0;
    double condition_margin = 0.0; // m2 L' - m3 lambda
    bool secure = false;
    double N_min = 0.0; // max(M1..M4); meaningful only when secure
};

// L' = max_{s in (0,1]} -(1/s)[log2(1+2^s) - 1 - s] - 3 eps/s  (grid + golden).
double l_prime(double epsilon, double* s_star = nullptr);

BitCommitReport security_parameters(const BitCommitParams& params);

// Build the photon-number inputs from a source model and channel transmission
// eta_c.  Coherent (RE) sources are rejected: the analysis assumes
// phase-randomized inputs.
BitCommitParams params_for(const SourceModel& source, double eta_c,
                           const BitCommitParams& defaults = {});

} // namespace qsb::bitcommit
