#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "delidx/spectrum.hpp"

namespace delidx {

// Independent counting route: dense generalized eigendecomposition of the
// pencil. Never calls the Sturm/inertia path it cross-checks.
inline std::vector<double> dense_eigenvalues(const Tridiag& K, const Tridiag& M) {
    const int n = static_cast<int>(K.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), B = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = K.diag[i];
        B(i, i) = M.diag[i];
        if (i + 1 < n) {
            A(i, i + 1) = A(i + 1, i) = K.off[i];
            B(i, i + 1) = B(i + 1, i) = M.off[i];
        }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, B,
                                                                     Eigen::EigenvaluesOnly);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

inline int dense_negative_count(const Tridiag& K, const Tridiag& M, double band) {
    int count = 0;
    for (double ev : dense_eigenvalues(K, M))
        if (ev < -band) ++count;
    return count;
}

} // namespace delidx
