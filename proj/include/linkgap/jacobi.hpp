#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace linkgap {

/// Dense symmetric matrix in row-major order, n x n.
struct SymMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    explicit SymMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Eigenvalues of a symmetric matrix in ascending order, by the cyclic
/// Jacobi rotation method. Plain and dependency-free; fine for the link
/// sizes this library meets (tens of vertices).
inline std::vector<double> symmetric_eigenvalues(SymMatrix m) {
    const std::size_t n = m.n;
    require(n >= 1, Errc::InvalidArgument, "matrix must be nonempty");
    double sym_defect = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            sym_defect = std::max(sym_defect, std::abs(m.at(i, j) - m.at(j, i)));
    require(sym_defect <= 1e-12, Errc::InvalidArgument, "matrix is not symmetric");

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += m.at(i, j) * m.at(i, j);
        return std::sqrt(2.0 * s);
    };

    double scale = 0.0;
    for (double v : m.a) scale = std::max(scale, std::abs(v));
    const double stop = std::max(1e-300, 1e-15 * std::max(1.0, scale));

    for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = m.at(p, q);
                if (std::abs(apq) <= 1e-18 * std::max(1.0, scale)) continue;
                double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = m.at(k, p), akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = m.at(p, k), aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    require(off_norm() <= std::max(1e-10, 1e-12 * std::max(1.0, scale)), Errc::NoConvergence,
            "jacobi sweeps did not converge");

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = m.at(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

/// Coefficients c_0..c_n of det(xI - A) = x^n + c_{n-1} x^{n-1} + ... + c_0,
/// by the Faddeev-LeVerrier recurrence. Used as an eigenvalue oracle:
/// these coefficients must match the elementary symmetric functions of the
/// computed spectrum, which pins every eigenvalue including multiplicity.
inline std::vector<double> characteristic_polynomial(const SymMatrix& m) {
    const std::size_t n = m.n;
    std::vector<double> Mk(n * n, 0.0), tmp(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) Mk[i * n + i] = 1.0;  // M_1 = I
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        // A * M_k
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t l = 0; l < n; ++l) s += m.at(i, l) * Mk[l * n + j];
                tmp[i * n + j] = s;
            }
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += tmp[i * n + i];
        double ck = -trace / static_cast<double>(k);
        c[n - k] = ck;
        for (std::size_t i = 0; i < n * n; ++i) Mk[i] = tmp[i];
        for (std::size_t i = 0; i < n; ++i) Mk[i * n + i] += ck;
    }
    return c;
}

}  // namespace linkgap
