#include "pompeiu/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pompeiu {

namespace {

// In-place Householder QR of a (m x n, m >= n); rhs, when non-null, receives
// the same reflections. On return the upper triangle of a holds R.
void householder_qr(Matrix& a, std::vector<double>* rhs) {
    const int m = a.rows();
    const int n = a.cols();
    std::vector<double> v(m);
    for (int k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (int i = k; i < m; ++i) norm2 += a(i, k) * a(i, k);
        const double sigma = std::sqrt(norm2);
        if (sigma == 0.0) continue;  // column already zero; R_kk = 0 handled by caller
        const double alpha = (a(k, k) > 0.0) ? -sigma : sigma;
        double vnorm2 = 0.0;
        for (int i = k; i < m; ++i) {
            v[i] = a(i, k);
            if (i == k) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += v[i] * a(i, j);
            s *= beta;
            for (int i = k; i < m; ++i) a(i, j) -= s * v[i];
        }
        if (rhs) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += v[i] * (*rhs)[i];
            s *= beta;
            for (int i = k; i < m; ++i) (*rhs)[i] -= s * v[i];
        }
        a(k, k) = alpha;
        for (int i = k + 1; i < m; ++i) a(i, k) = 0.0;
    }
}

}  // namespace

LeastSquares least_squares_solve(const Matrix& a, std::span<const double> b) {
    const int m = a.rows();
    const int n = a.cols();
    if (m < n) throw std::invalid_argument("least_squares_solve: require rows >= cols");
    if (static_cast<int>(b.size()) != m)
        throw std::invalid_argument("least_squares_solve: rhs size mismatch");
    Matrix r = a;
    std::vector<double> qtb(b.begin(), b.end());
    householder_qr(r, &qtb);

    double max_diag = 0.0, min_diag = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const double d = std::abs(r(k, k));
        max_diag = std::max(max_diag, d);
        min_diag = std::min(min_diag, d);
    }
    if (min_diag < 1e-12 * max_diag || max_diag == 0.0)
        throw std::runtime_error("least_squares_solve: system is rank deficient");

    LeastSquares out;
    out.solution.assign(n, 0.0);
    for (int k = n - 1; k >= 0; --k) {
        double s = qtb[k];
        for (int j = k + 1; j < n; ++j) s -= r(k, j) * out.solution[j];
        out.solution[k] = s / r(k, k);
    }
    double tail = 0.0;
    for (int i = n; i < m; ++i) tail += qtb[i] * qtb[i];
    out.residual_norm = std::sqrt(tail);
    return out;
}

SvdSpectrum svd_spectrum(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument("svd_spectrum: matrix must be nonempty");
    const int n = a.cols();
    Matrix w;
    if (a.rows() > n) {
        Matrix r = a;
        householder_qr(r, nullptr);
        w = Matrix(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) w(i, j) = r(i, j);
    } else {
        w = a;
    }
    const int m = w.rows();

    Matrix v(n, n);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;

    // One-sided Jacobi: orthogonalize column pairs of w, accumulate v.
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += w(i, p) * w(i, p);
                    aqq += w(i, q) * w(i, q);
                    apq += w(i, p) * w(i, q);
                }
                if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) + 1e-300) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(s);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return sigma[i] > sigma[j]; });

    SvdSpectrum out;
    out.singular_values.resize(n);
    out.right_vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.singular_values[j] = sigma[order[j]];
        for (int i = 0; i < n; ++i) out.right_vectors(i, j) = v(i, order[j]);
    }
    return out;
}

SmallestSingular min_singular_value(const Matrix& a) {
    const SvdSpectrum spectrum = svd_spectrum(a);
    SmallestSingular out;
    const int n = a.cols();
    out.value = spectrum.singular_values[n - 1];
    out.right_vector.resize(n);
    for (int i = 0; i < n; ++i) out.right_vector[i] = spectrum.right_vectors(i, n - 1);
    return out;
}

Matrix cholesky_lower(const Matrix& gram) {
    const int n = gram.rows();
    if (n != gram.cols()) throw std::invalid_argument("cholesky_lower: matrix must be square");
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = gram(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0))
            throw std::runtime_error("cholesky_lower: matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = gram(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

}  // namespace pompeiu
