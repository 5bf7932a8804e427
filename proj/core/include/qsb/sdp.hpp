// qsb::numlin SDP interface: a small dense semidefinite-program solver.
//
// The complex Hermitian problem is solved through the standard real-symmetric
// embedding X -> [[Re X, -Im X], [Im X, Re X]] by a primal-dual interior-point
// method with Nesterov-Todd scaling.  Inequality constraints are converted to
// equalities with slack variables appended as extra diagonal dimensions of the
// single dense PSD block.  Problems here stay below ~200 real dimensions, so
// dense factorization is used throughout.
#pragma once

#include <optional>

#include "qsb/numlin.hpp"

namespace qsb::numlin {

struct LinearConstraint {
    Mat matrix;  // Hermitian
    double rhs = 0.0;
};

// Optional partial-trace equality: Tr_env(X) = target, where the variable
// space factorizes as H_env (x) H_target and the environment factor (traced
// out) comes first in the Kronecker ordering.
struct PartialTraceConstraint {
    int env_dim = 0;
    Mat target;
};

struct SdpProblem {
    Mat objective;   // Hermitian, dim n
    bool maximize = false;
    std::vector<LinearConstraint> eq;    // Tr(A_i X) =  b_i
    std::vector<LinearConstraint> ineq;  // Tr(C_j X) <= d_j
    std::optional<PartialTraceConstraint> partial_trace_eq;
};

enum class SdpStatus { solved, infeasible, max_iterations };

struct SdpSolution {
    Mat X;                   // PSD optimizer (complex Hermitian)
    double primal_value = 0.0;
    double dual_value = 0.0;
    double gap = 0.0;        // |primal - dual|
    SdpStatus status = SdpStatus::max_iterations;
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

struct SdpOptions {
    double feas_tol = 1e-8;
    double gap_tol = 1e-7;   // relative duality gap
    int max_iterations = 500;
};

SdpSolution sdp_solve(const SdpProblem& problem, const SdpOptions& opts = {});

const char* to_string(SdpStatus s);

} // namespace qsb::numlin
