// qsb::numlin -- self-contained dense complex linear algebra used by all
// security analyses: Hermitian matrices, a cyclic-Jacobi eigensolver, the
// Schatten-1 norm, binary entropy, and the SDP interface (see sdp.hpp for the
// solver itself).
#pragma once

#include <complex>
#include <vector>

#include "qsb/errors.hpp"

namespace qsb::numlin {

using cxd = std::complex<double>;

// Dense row-major complex matrix.  Small (dim <= ~200); value semantics.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static Mat identity(int n);
    static Mat zeros(int rows, int cols) { return Mat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    cxd& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const cxd& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
    const std::vector<cxd>& data() const { return a_; }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator*(cxd s) const;
    Mat& operator+=(const Mat& o);

    Mat dagger() const;            // conjugate transpose
    Mat conj() const;              // entry-wise conjugate
    cxd trace() const;
    double fro_norm() const;
    double max_abs() const;

    bool is_hermitian(double tol = 1e-12) const;
    // (A + A^dagger)/2 -- used to clean accumulated round-off.
    Mat hermitize() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cxd> a_;
};

Mat kron(const Mat& a, const Mat& b);
// Outer product |u><v|.
Mat outer(const std::vector<cxd>& u, const std::vector<cxd>& v);
// Real part of Tr(A B).
double trace_product(const Mat& a, const Mat& b);

struct EighResult {
    std::vector<double> eigenvalues; // ascending
    Mat eigenvectors;                // columns; A = V diag(w) V^dagger
};

// Cyclic Jacobi with complex rotations.  Rejects non-Hermitian input
// (symmetry violation beyond `herm_tol`) with a diagnostic.
EighResult hermitian_eigh(const Mat& a, double herm_tol = 1e-10);

// Sum of absolute eigenvalues (Schatten 1-norm of a Hermitian matrix).
double trace_norm(const Mat& a);

// -x log2 x - (1-x) log2(1-x); H2(0)=H2(1)=0 by continuity.  Rejects x
// outside [0,1].
double binary_entropy(double x);

// Orthonormal basis of the kernel of a Hermitian PSD matrix: eigenvectors
// with eigenvalue below `cutoff` relative to the largest eigenvalue.
// Returned as a dim x k matrix of column vectors (k may be 0).
Mat hermitian_kernel(const Mat& a, double cutoff = 1e-9);

} // namespace qsb::numlin
