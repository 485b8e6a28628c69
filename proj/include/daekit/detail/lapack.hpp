#pragma once

#include <complex>
#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "daekit/errors.hpp"

namespace daekit::detail {

using cd = std::complex<double>;
using ColMajor = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

struct GeneralizedSchur {
    ColMajor S;  // upper triangular, from A
    ColMajor T;  // upper triangular, from E
    ColMajor Q;  // left Schur vectors
    ColMajor Z;  // right Schur vectors
    std::vector<cd> alpha;
    std::vector<cd> beta;
    int finite_count = 0;
};

inline thread_local double g_infinite_tol = 1e-10;

inline lapack_logical select_finite(const cd* alpha, const cd* beta) {
    double a = std::abs(*alpha);
    double b = std::abs(*beta);
    return b > g_infinite_tol * (a + b) ? 1 : 0;
}

/// Ordered QZ of the pencil (E, A): A = Q S Z^*, E = Q T Z^*, finite eigenvalues leading.
inline GeneralizedSchur ordered_qz(const ColMajor& A, const ColMajor& E, double infinite_tol) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    GeneralizedSchur out;
    out.S = A;
    out.T = E;
    out.Q.resize(n, n);
    out.Z.resize(n, n);
    out.alpha.resize(static_cast<std::size_t>(n));
    out.beta.resize(static_cast<std::size_t>(n));
    if (n == 0) return out;
    lapack_int sdim = 0;
    g_infinite_tol = infinite_tol;
    lapack_int info = LAPACKE_zgges(LAPACK_COL_MAJOR, 'V', 'V', 'S', &select_finite, n,
                                    out.S.data(), n, out.T.data(), n, &sdim, out.alpha.data(),
                                    out.beta.data(), out.Q.data(), n, out.Z.data(), n);
    if (info != 0 && info != n + 2) {
        raise(ErrorCode::LapackFailure, "zgges returned info=" + std::to_string(info));
    }
    // info = n+2: reordered eigenvalues no longer satisfy the selector after roundoff;
    // recount from the final diagonal.
    int finite = 0;
    for (lapack_int i = 0; i < n; ++i) {
        if (select_finite(&out.alpha[static_cast<std::size_t>(i)],
                          &out.beta[static_cast<std::size_t>(i)]))
            ++finite;
    }
    out.finite_count = (info == 0) ? static_cast<int>(sdim) : finite;
    return out;
}

/// Solves A R - L B = scale*C, D R - L E = scale*F for (R, L) with triangular A, B, D, E.
inline void generalized_sylvester(const ColMajor& A, const ColMajor& B, const ColMajor& D,
                                  const ColMajor& E, ColMajor& C, ColMajor& F, double& scale) {
    const lapack_int m = static_cast<lapack_int>(A.rows());
    const lapack_int n = static_cast<lapack_int>(B.rows());
    scale = 1.0;
    if (m == 0 || n == 0) return;
    double dif = 0.0;
    lapack_int info = LAPACKE_ztgsyl(LAPACK_COL_MAJOR, 'N', 0, m, n, A.data(), m, B.data(), n,
                                     C.data(), m, D.data(), m, E.data(), n, F.data(), m, &scale,
                                     &dif);
    if (info < 0) raise(ErrorCode::LapackFailure, "ztgsyl returned info=" + std::to_string(info));
    if (info > 0) {
        raise(ErrorCode::IllConditionedTransform,
              "generalized Sylvester equation has common spectrum (ztgsyl info=" +
                  std::to_string(info) + ")");
    }
}

/// Generalized eigenvalues (alpha, beta) of the pencil (E, A), i.e. det(beta A - alpha E) = 0.
inline void generalized_eigenvalues(const ColMajor& A, const ColMajor& E, std::vector<cd>& alpha,
                                    std::vector<cd>& beta) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    alpha.assign(static_cast<std::size_t>(n), cd{});
    beta.assign(static_cast<std::size_t>(n), cd{});
    if (n == 0) return;
    ColMajor a = A;
    ColMajor b = E;
    cd dummy;
    lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, b.data(), n,
                                    alpha.data(), beta.data(), &dummy, 1, &dummy, 1);
    if (info != 0) raise(ErrorCode::LapackFailure, "zggev returned info=" + std::to_string(info));
}

}  // namespace daekit::detail
