// qsb::fock -- bosonic Fock-space machinery: multimode occupation bases,
// beamsplitter / phase-shift action on creation operators, the Mach-Zehnder
// encoder with a loss mode, and partial trace.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "qsb/numlin.hpp"

namespace qsb::fock {

using numlin::Mat;
using numlin::cxd;

// Ordered occupation basis: all tuples (n_0,...,n_{modes-1}) with total <= max_total,
// lexicographic, vacuum first.
struct FockBasis {
    int modes = 0;
    int max_total = 0;
    std::vector<std::vector<int>> labels;

    int dim() const { return int(labels.size()); }
    int index(const std::vector<int>& occ) const; // -1 if absent
    std::string label_string(int i) const;
};

FockBasis fock_basis(int modes, int max_total);

struct PureState {
    FockBasis basis;
    std::vector<cxd> amplitudes;

    double norm() const;
};

struct DensityMatrix {
    FockBasis basis;
    Mat rho;
};

// Beamsplitter H^(r) = [[sqrt r, sqrt(1-r)], [sqrt(1-r), -sqrt r]] acting on
// creation operators of (mode_a, mode_b).  Preserves total photon number.
PureState apply_beamsplitter(const PureState& state, int mode_a, int mode_b, double r);

// Phase shift: each amplitude multiplied by exp(i n_mode phi).
PureState apply_phase(const PureState& state, int mode, double phi);

// Mach-Zehnder encoder with a loss mode: input sum_n sqrt(p_n) |n,0,0>, loss
// splitter H^(eta) on (0,2), then H^(y) on (0,1), phase phi on mode 1, H^(y)
// on (0,1); mode 2 traced out.  coherent=false zeroes all matrix elements
// between sectors of different total photon number (photon-number
// decoherence).  Populations beyond n=3 must vanish.
DensityMatrix encode_state(const std::array<double, 4>& populations, double eta, double phi,
                           double y, bool coherent);

// Partial trace keeping the listed modes (basis cutoff preserved).
DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<int>& keep);

DensityMatrix density_from_pure(const PureState& state);

// Plain-text serialization (basis labels header + "re,im" entries) for
// golden-file comparisons.
std::string to_text(const DensityMatrix& dm);

} // namespace qsb::fock
