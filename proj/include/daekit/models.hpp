#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "daekit/core.hpp"
#include "daekit/phdae.hpp"
#include "daekit/weierstrass.hpp"

namespace daekit {

/// Viscoelastic nanorod with a light viscoelastic layer; unit constants by default.
struct NanorodParams {
    double l = 1.0;
    int n_grid = 50;
    double rho = 1.0;
    double D = 1.0;
    double C_mod = 1.0;
    double mu_nl = 1.0;
    double tau_d = 1.0;
    double a2 = 1.0;
    double b2 = 1.0;
};

struct L2ExampleParams {
    int K = 40;
};

/// Centered first difference on the interior nodes of (0, l) with homogeneous Dirichlet values;
/// skew-symmetric, so it is its own negative transpose.
inline Eigen::MatrixXd centered_difference(int n, double l) {
    const double h = l / (n + 1);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        D(i, i + 1) = 1.0 / (2.0 * h);
        D(i + 1, i) = -1.0 / (2.0 * h);
    }
    return D;
}

/// Field-major state (w, rho D w_t, mu rho D w_xt, w_x, N) on n_grid interior nodes.
inline PhPencil build_nanorod(const NanorodParams& p) {
    for (double v : {p.l, p.rho, p.D, p.C_mod, p.mu_nl, p.tau_d, p.a2, p.b2}) {
        if (!(v > 0.0) || !std::isfinite(v))
            raise(ErrorCode::InvalidParams, "nanorod constants must be positive and finite");
    }
    if (p.n_grid < 4) raise(ErrorCode::InvalidParams, "n_grid must be at least 4");
    if (p.n_grid % 2 != 0)
        raise(ErrorCode::InvalidParams,
              "n_grid must be even: the centered difference is singular for odd n_grid and the "
              "assembled pencil is then not regular");
    const int n = p.n_grid;
    const Eigen::MatrixXd Dx = centered_difference(n, p.l);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(5 * n, 5 * n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(5 * n, 5 * n);
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(5 * n, 5 * n);
    auto blk = [n](Eigen::MatrixXd& M, int r, int c) { return M.block(r * n, c * n, n, n); };
    for (int f = 0; f < 4; ++f) blk(E, f, f) = I;
    blk(A, 0, 1) = I;
    blk(A, 1, 0) = -I;
    blk(A, 1, 1) = -p.b2 * I;
    blk(A, 1, 4) = Dx;
    blk(A, 2, 2) = -(p.C_mod * p.D * p.tau_d + p.mu_nl * p.b2) * I;
    blk(A, 2, 3) = -I;
    blk(A, 2, 4) = I;
    blk(A, 3, 2) = I;
    blk(A, 4, 1) = -Dx.transpose();
    blk(A, 4, 2) = -I;
    const double q[5] = {p.a2, 1.0 / (p.rho * p.D), 1.0 / (p.mu_nl * p.rho * p.D),
                         p.C_mod * p.D + p.mu_nl * p.a2, 1.0};
    for (int f = 0; f < 5; ++f) blk(Q, f, f) = q[f] * I;
    return {E.cast<Complex>(), A.cast<Complex>(), Q.cast<Complex>()};
}

/// Closed-form 2x2 block of (lambda E - A)^{-1} for the l2 example.
inline ComplexMatrix m_k_resolvent(int k, Complex lambda) {
    if (k < 0) raise(ErrorCode::InvalidInput, "block index must be nonnegative");
    ComplexMatrix M(2, 2);
    if (k == 0) {
        M << 0.0, -1.0, 1.0, lambda;
        return M;
    }
    const double k4 = std::pow(static_cast<double>(k), 4);
    const double s = std::sqrt(k4 + 1.0);
    const Complex den = lambda * (lambda + 2.0) + k4 + 1.0;
    if (std::abs(den) <= 1e-14 * (std::norm(lambda) + k4))
        raise(ErrorCode::PoleHit, "lambda is a pole of block " + std::to_string(k));
    M << lambda + 2.0, s, -s, lambda;
    return M / den;
}

/// Diagonal l2 system truncated to blocks 0..K plus the two scalar coupling variables.
inline MatrixPencil build_l2_example(const L2ExampleParams& p) {
    if (p.K < 2) raise(ErrorCode::InvalidParams, "K must be at least 2");
    const int m = 2 * (p.K + 1);
    const int n = m + 2;
    ComplexMatrix E = ComplexMatrix::Zero(n, n);
    ComplexMatrix A = ComplexMatrix::Zero(n, n);
    ComplexVector B = ComplexVector::Zero(m);
    E(0, 0) = 1.0;
    A(0, 1) = -1.0;
    A(1, 0) = 1.0;
    B(1) = 1.0;
    for (int k = 1; k <= p.K; ++k) {
        const int o = 2 * k;
        const double s = std::sqrt(std::pow(static_cast<double>(k), 4) + 1.0);
        E(o, o) = 1.0;
        E(o + 1, o + 1) = 1.0;
        A(o, o + 1) = s;
        A(o + 1, o) = -s;
        A(o + 1, o + 1) = -2.0;
        B(o + 1) = std::pow(static_cast<double>(k), 1.25);
    }
    A.block(0, m, m, 1) = B;
    A.block(m, 0, 1, m) = -B.transpose();
    A(m, m + 1) = 1.0;
    A(m + 1, m) = -1.0;
    return {E, A};
}

/// b = c = e1, A0 = diag(-1, ..., -m).
inline ZeroDynModel build_zero_dynamics_example(int m) {
    if (m < 1) raise(ErrorCode::InvalidParams, "m must be positive");
    ComplexMatrix A0 = ComplexMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) A0(i, i) = -(i + 1.0);
    ComplexVector e1 = ComplexVector::Zero(m);
    e1(0) = 1.0;
    return build_zero_dynamics(A0, e1, e1);
}

inline ComplexMatrix random_complex(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    ComplexMatrix M(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) M(i, j) = Complex(nd(rng), nd(rng));
    return M;
}

/// Random pH triple: E = Q^{-*} G with G Hermitian PSD of the given rank, A = W - V V^*.
inline PhPencil random_ph_pencil(int n, int rank, std::mt19937_64& rng) {
    if (n < 1 || rank < 0 || rank > n) raise(ErrorCode::InvalidParams, "need 0 <= rank <= n");
    ComplexMatrix F = random_complex(n, rank, rng);
    ComplexMatrix G = F * F.adjoint();
    ComplexMatrix Q = random_complex(n, n, rng) + 2.0 * std::sqrt(double(n)) * ComplexMatrix::Identity(n, n);
    ComplexMatrix E = Q.adjoint().partialPivLu().solve(G);
    ComplexMatrix W0 = random_complex(n, n, rng);
    ComplexMatrix W = 0.5 * (W0 - W0.adjoint());
    ComplexMatrix V = random_complex(n, n, rng) / std::sqrt(double(n));
    return {E, W - V * V.adjoint(), Q};
}

}  // namespace daekit
