#include "qsb/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsb::numlin {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const cxd v = (*this)(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
        }
    return r;
}

Mat Mat::operator*(cxd s) const {
    Mat r = *this;
    for (auto& v : r.a_) v *= s;
    return r;
}

Mat& Mat::operator+=(const Mat& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Mat Mat::dagger() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

Mat Mat::conj() const {
    Mat r = *this;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(i, j) = std::conj(r(i, j));
    return r;
}

cxd Mat::trace() const {
    cxd t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double Mat::fro_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double Mat::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

bool Mat::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

Mat Mat::hermitize() const {
    Mat r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return r;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cxd v = a(i, j);
            if (v == 0.0) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = v * b(k, l);
        }
    return r;
}

Mat outer(const std::vector<cxd>& u, const std::vector<cxd>& v) {
    Mat r(int(u.size()), int(v.size()));
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r(int(i), int(j)) = u[i] * std::conj(v[j]);
    return r;
}

double trace_product(const Mat& a, const Mat& b) {
    cxd t = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
    return t.real();
}

EighResult hermitian_eigh(const Mat& a, double herm_tol) {
    if (a.rows() != a.cols())
        throw ConfigError("hermitian_eigh: matrix is not square");
    if (!a.is_hermitian(herm_tol))
        throw ConfigError("hermitian_eigh: input violates Hermitian symmetry beyond tolerance");

    const int n = a.rows();
    Mat w = a.hermitize();
    Mat v = Mat::identity(n);

    // Cyclic Jacobi sweeps with complex plane rotations.  Each rotation
    // annihilates one off-diagonal pair; quadratic convergence once the
    // off-diagonal mass is small.
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(w(p, q));
        if (off < 1e-26 * std::max(1.0, w.fro_norm() * w.fro_norm())) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cxd apq = w(p, q);
                const double r = std::abs(apq);
                if (r < 1e-300) continue;
                const cxd phase = apq / r; // e^{i arg(a_pq)}
                const double app = w(p, p).real();
                const double aqq = w(q, q).real();
                const double tau = (app - aqq) / (2.0 * r);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cxd sp = s * phase;        // s e^{i phi}
                const cxd spc = std::conj(sp);   // s e^{-i phi}

                // Column update W <- W G, G = [[c, -sp],[conj(sp'), ...]]:
                // col_p' = c col_p + s e^{-i phi} col_q
                // col_q' = -s e^{i phi} col_p + c col_q
                for (int i = 0; i < n; ++i) {
                    const cxd wip = w(i, p), wiq = w(i, q);
                    w(i, p) = c * wip + spc * wiq;
                    w(i, q) = -sp * wip + c * wiq;
                }
                // Row update W <- G^dagger W.
                for (int j = 0; j < n; ++j) {
                    const cxd wpj = w(p, j), wqj = w(q, j);
                    w(p, j) = c * wpj + sp * wqj;
                    w(q, j) = -spc * wpj + c * wqj;
                }
                // Accumulate eigenvectors V <- V G.
                for (int i = 0; i < n; ++i) {
                    const cxd vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip + spc * viq;
                    v(i, q) = -sp * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return w(i, i).real() < w(j, j).real(); });

    EighResult res;
    res.eigenvalues.resize(n);
    res.eigenvectors = Mat(n, n);
    for (int k = 0; k < n; ++k) {
        res.eigenvalues[k] = w(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) res.eigenvectors(i, k) = v(i, order[k]);
    }
    return res;
}

double trace_norm(const Mat& a) {
    const auto eig = hermitian_eigh(a);
    double s = 0.0;
    for (double w : eig.eigenvalues) s += std::abs(w);
    return s;
}

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0)
        throw ConfigError("binary_entropy: argument outside [0,1]");
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

Mat hermitian_kernel(const Mat& a, double cutoff) {
    const auto eig = hermitian_eigh(a);
    const int n = a.rows();
    const double scale = std::max(std::abs(eig.eigenvalues.front()),
                                  std::abs(eig.eigenvalues.back()));
    const double thresh = cutoff * std::max(scale, 1e-300);
    std::vector<int> cols;
    for (int k = 0; k < n; ++k)
        if (std::abs(eig.eigenvalues[k]) < thresh) cols.push_back(k);
    Mat kmat(n, int(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < n; ++i) kmat(i, int(j)) = eig.eigenvectors(i, cols[j]);
    return kmat;
}

} // namespace qsb::numlin
