#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "daekit/core.hpp"

namespace daekit {

struct DecomposeOptions {
    /// (alpha, beta) of the norm-scaled pencil counts as infinite when |beta| <= tol (|alpha|+|beta|).
    /// Defective infinite eigenvalues split like eps^(1/k) under rounding, hence the loose default.
    double infinite_tol = 1e-6;
    /// Smallest k with ||N^k|| <= tol * max(1, ||N||)^k is the nilpotency index.
    double nilpotency_tol = 1e-6;
    double max_transform_condition = 1e12;
    bool check_regularity = true;
};

/// T_L E T_R = blkdiag(I, N), T_L A T_R = blkdiag(A1, I).
struct WeierstrassDecomposition {
    ComplexMatrix left_transform;
    ComplexMatrix right_transform;
    ComplexMatrix A1;
    ComplexMatrix N;
    Eigen::Index d1 = 0;
    Eigen::Index d2 = 0;
    ComplexMatrix P;  // projector onto the finite deflating subspace of the state space
    ComplexMatrix R;  // matching projector on the equation space
    int nilpotency_index = 0;
    double condition_left = 1.0;
    double condition_right = 1.0;
};

/// Smallest k with ||N^k|| <= tol * max(1,||N||)^k; 0 for an empty block.
inline int nilpotency_index(const ComplexMatrix& N, double tol = 1e-6) {
    if (N.rows() == 0) return 0;
    const double scale = std::max(1.0, spectral_norm(N));
    ComplexMatrix power = ComplexMatrix::Identity(N.rows(), N.cols());
    double bound = 1.0;
    for (int k = 1; k <= N.rows() + 1; ++k) {
        power = power * N;
        bound *= scale;
        if (spectral_norm(power) <= tol * bound) return k;
    }
    raise(ErrorCode::NoConvergence, "block N is not numerically nilpotent");
}

inline ComplexMatrix block_diag(const ComplexMatrix& X, const ComplexMatrix& Y) {
    ComplexMatrix out = ComplexMatrix::Zero(X.rows() + Y.rows(), X.cols() + Y.cols());
    out.topLeftCorner(X.rows(), X.cols()) = X;
    out.bottomRightCorner(Y.rows(), Y.cols()) = Y;
    return out;
}

/// Weierstrass form through ordered QZ and a generalized Sylvester decoupling.
inline WeierstrassDecomposition decompose(const MatrixPencil& pencil,
                                          const DecomposeOptions& opt = {}) {
    validate(pencil);
    if (opt.check_regularity && !probe_regularity(pencil))
        raise(ErrorCode::IrregularPencil, "det(lambda E - A) vanishes identically");

    const Eigen::Index n = pencil.size();
    double se = spectral_norm(pencil.E);
    double sa = spectral_norm(pencil.A);
    if (se == 0.0) se = 1.0;
    if (sa == 0.0) sa = 1.0;

    detail::ColMajor As = pencil.A / sa;
    detail::ColMajor Es = pencil.E / se;
    detail::GeneralizedSchur qz = detail::ordered_qz(As, Es, opt.infinite_tol);

    for (std::size_t i = 0; i < qz.alpha.size(); ++i) {
        if (std::abs(qz.alpha[i]) <= 1e-13 && std::abs(qz.beta[i]) <= 1e-13)
            raise(ErrorCode::IrregularPencil, "generalized eigenvalue 0/0 encountered");
    }

    const Eigen::Index d1 = qz.finite_count;
    const Eigen::Index d2 = n - d1;

    detail::ColMajor S11 = qz.S.topLeftCorner(d1, d1);
    detail::ColMajor S22 = qz.S.bottomRightCorner(d2, d2);
    detail::ColMajor T11 = qz.T.topLeftCorner(d1, d1);
    detail::ColMajor T22 = qz.T.bottomRightCorner(d2, d2);
    detail::ColMajor Rm = -qz.S.topRightCorner(d1, d2);
    detail::ColMajor Lm = -qz.T.topRightCorner(d1, d2);
    double scale = 1.0;
    detail::generalized_sylvester(S11, S22, T11, T22, Rm, Lm, scale);
    Rm /= scale;
    Lm /= scale;

    ComplexMatrix UL = ComplexMatrix::Identity(n, n);
    ComplexMatrix UR = ComplexMatrix::Identity(n, n);
    UL.topRightCorner(d1, d2) = -Lm;
    UR.topRightCorner(d1, d2) = Rm;

    // Normalize: finite block by its E part, infinite block by its A part, undo the scaling.
    ComplexMatrix D = ComplexMatrix::Zero(n, n);
    if (d1 > 0) D.topLeftCorner(d1, d1) = ComplexMatrix(T11).inverse() / se;
    if (d2 > 0) D.bottomRightCorner(d2, d2) = ComplexMatrix(S22).inverse() / sa;

    WeierstrassDecomposition w;
    w.d1 = d1;
    w.d2 = d2;
    w.left_transform = D * UL * ComplexMatrix(qz.Q).adjoint();
    w.right_transform = ComplexMatrix(qz.Z) * UR;
    w.condition_left = condition_number(w.left_transform);
    w.condition_right = condition_number(w.right_transform);
    if (!(w.condition_left <= opt.max_transform_condition) ||
        !(w.condition_right <= opt.max_transform_condition)) {
        raise(ErrorCode::IllConditionedTransform,
              "Weierstrass transforms have condition numbers " + std::to_string(w.condition_left) +
                  " and " + std::to_string(w.condition_right));
    }
    w.A1.resize(0, 0);
    w.N.resize(0, 0);
    if (d1 > 0) w.A1 = (sa / se) * ComplexMatrix(T11).inverse() * ComplexMatrix(S11);
    if (d2 > 0) w.N = (se / sa) * ComplexMatrix(S22).inverse() * ComplexMatrix(T22);
    w.nilpotency_index = nilpotency_index(w.N, opt.nilpotency_tol);

    ComplexMatrix J = ComplexMatrix::Zero(n, n);
    J.topLeftCorner(d1, d1).setIdentity();
    w.P = w.right_transform * J * w.right_transform.inverse();
    w.R = w.left_transform.inverse() * J * w.left_transform;
    return w;
}

/// (T_L^{-1} blkdiag(I,N) T_R^{-1}, T_L^{-1} blkdiag(A1,I) T_R^{-1}).
inline MatrixPencil reconstruct(const WeierstrassDecomposition& w) {
    ComplexMatrix Li = w.left_transform.inverse();
    ComplexMatrix Ri = w.right_transform.inverse();
    ComplexMatrix I1 = ComplexMatrix::Identity(w.d1, w.d1);
    ComplexMatrix I2 = ComplexMatrix::Identity(w.d2, w.d2);
    return {Li * block_diag(I1, w.N) * Ri, Li * block_diag(w.A1, I2) * Ri};
}

/// Relative reconstruction residual max(||E' - E||, ||A' - A||) / (||E|| + ||A||).
inline double reconstruction_residual(const MatrixPencil& pencil, const WeierstrassDecomposition& w) {
    MatrixPencil back = reconstruct(w);
    double denom = spectral_norm(pencil.E) + spectral_norm(pencil.A);
    if (denom == 0.0) denom = 1.0;
    return std::max(spectral_norm(back.E - pencil.E), spectral_norm(back.A - pencil.A)) / denom;
}

struct ProjectorLimits {
    ComplexMatrix P;
    ComplexMatrix R;
    double lambda0 = 0.0;
    double difference_P = 0.0;
    double difference_R = 0.0;
};

/// lambda0 = 10 (1 + ||A|| / ||E||) and lambda_j = lambda0 2^j.
inline std::vector<double> default_lambda_sequence(const MatrixPencil& pencil, int terms = 12) {
    double se = spectral_norm(pencil.E);
    double sa = spectral_norm(pencil.A);
    double l0 = 10.0 * (1.0 + (se > 0.0 ? sa / se : sa));
    std::vector<double> seq;
    for (int j = 0; j < terms; ++j) seq.push_back(l0 * std::ldexp(1.0, j));
    return seq;
}

namespace detail {

/// Romberg extrapolation in h = 1/lambda of a sequence with step ratio 2; returns the
/// best diagonal entry and its difference to the previous one.
inline std::pair<ComplexMatrix, double> romberg_limit(const std::vector<ComplexMatrix>& seq) {
    std::vector<ComplexMatrix> prev;
    ComplexMatrix best;
    double best_diff = std::numeric_limits<double>::infinity();
    std::vector<ComplexMatrix> diag;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        std::vector<ComplexMatrix> row{seq[i]};
        for (std::size_t k = 1; k <= i; ++k) {
            double f = std::ldexp(1.0, static_cast<int>(k));
            row.push_back((f * row[k - 1] - prev[k - 1]) / (f - 1.0));
        }
        diag.push_back(row.back());
        prev = std::move(row);
    }
    for (std::size_t i = 1; i < diag.size(); ++i) {
        double d = spectral_norm(diag[i] - diag[i - 1]);
        if (d < best_diff) {
            best_diff = d;
            best = diag[i];
        }
    }
    if (diag.size() == 1) best = diag[0];
    return {best, best_diff};
}

}  // namespace detail

/// Limits of (lambda R(lambda))^{p+1} and (lambda E (lambda E - A)^{-1})^{p+1}.
inline ProjectorLimits spectral_projectors(const MatrixPencil& pencil, int p,
                                           std::vector<double> lambda_sequence = {},
                                           double tolerance = 1e-8) {
    validate(pencil);
    if (p < 0) raise(ErrorCode::InvalidInput, "p must be nonnegative");
    if (lambda_sequence.empty()) lambda_sequence = default_lambda_sequence(pencil);
    if (lambda_sequence.size() < 2)
        raise(ErrorCode::InvalidInput, "lambda sequence needs at least two terms");
    for (std::size_t j = 0; j < lambda_sequence.size(); ++j) {
        if (!(lambda_sequence[j] > 0.0) || (j > 0 && !(lambda_sequence[j] > lambda_sequence[j - 1])))
            raise(ErrorCode::InvalidInput, "lambda sequence must be increasing and positive");
    }
    std::vector<ComplexMatrix> ps, rs;
    for (double lam : lambda_sequence) {
        ShiftedFactorization f(pencil, Complex(lam, 0.0));
        ComplexMatrix right = lam * f.solve(pencil.E);
        ComplexMatrix left = lam * pencil.E * f.inverse();
        ComplexMatrix pr = right, pl = left;
        for (int k = 0; k < p; ++k) {
            pr = pr * right;
            pl = pl * left;
        }
        ps.push_back(pr);
        rs.push_back(pl);
    }
    bool geometric = true;
    for (std::size_t j = 1; j < lambda_sequence.size(); ++j)
        geometric = geometric &&
                    std::abs(lambda_sequence[j] / lambda_sequence[j - 1] - 2.0) < 1e-12;

    ProjectorLimits out;
    out.lambda0 = lambda_sequence.front();
    if (geometric) {
        auto [P, dp] = detail::romberg_limit(ps);
        auto [R, dr] = detail::romberg_limit(rs);
        out.P = P;
        out.R = R;
        out.difference_P = dp;
        out.difference_R = dr;
    } else {
        // Single Richardson level for a general sequence: X(l) = X + C/l.
        std::size_t m = lambda_sequence.size();
        auto rich = [&](const std::vector<ComplexMatrix>& x, std::size_t j) {
            double a = lambda_sequence[j], b = lambda_sequence[j - 1];
            return ComplexMatrix((a * x[j] - b * x[j - 1]) / (a - b));
        };
        out.P = rich(ps, m - 1);
        out.R = rich(rs, m - 1);
        out.difference_P = m > 2 ? spectral_norm(out.P - rich(ps, m - 2)) : spectral_norm(ps[m - 1] - ps[m - 2]);
        out.difference_R = m > 2 ? spectral_norm(out.R - rich(rs, m - 2)) : spectral_norm(rs[m - 1] - rs[m - 2]);
    }
    double limit_p = tolerance * std::max(1.0, spectral_norm(out.P));
    double limit_r = tolerance * std::max(1.0, spectral_norm(out.R));
    if (!(out.difference_P <= limit_p) || !(out.difference_R <= limit_r)) {
        raise(ErrorCode::NoConvergence,
              "projector approximants did not converge (differences " +
                  std::to_string(out.difference_P) + ", " + std::to_string(out.difference_R) + ")");
    }
    return out;
}

/// Maximum deviation of (lambda N - I)^{-1} from -sum_{l<k} (lambda N)^l.
inline double neumann_residual(const ComplexMatrix& N, Complex lambda, int k) {
    const Eigen::Index d = N.rows();
    if (d == 0) return 0.0;
    ComplexMatrix I = ComplexMatrix::Identity(d, d);
    ComplexMatrix inv = (lambda * N - I).inverse();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    ComplexMatrix term = I;
    for (int l = 0; l < k; ++l) {
        sum += term;
        term = term * (lambda * N);
    }
    return spectral_norm(inv + sum);
}

/// Pencil d/dt blkdiag(I,0) x = [[A0, b],[c^*, 0]] x with its explicit normal-form isomorphisms.
struct ZeroDynModel {
    ComplexMatrix A0;
    ComplexVector b;
    ComplexVector c;
    ComplexMatrix U, V, U_inv, V_inv;
    MatrixPencil pencil;
    ComplexMatrix N;            // 2x2 nilpotent block of U E V
    ComplexMatrix reduced_A0;   // Phi^* Q_b A0 Phi on ker c^*
    ComplexMatrix Qb;           // z - (c^*z / c^*b) b
    double inverse_residual = 0.0;
    double block_residual_E = 0.0;
    double block_residual_A = 0.0;
};

inline ZeroDynModel build_zero_dynamics(const ComplexMatrix& A0, const ComplexVector& b,
                                        const ComplexVector& c) {
    const Eigen::Index m = A0.rows();
    if (m < 1 || A0.cols() != m || b.size() != m || c.size() != m)
        raise(ErrorCode::InvalidInput, "A0 must be m x m with b, c of length m");
    const Complex cb = c.dot(b);  // c^* b
    if (!(std::abs(cb) >= 1e-12 * b.norm() * c.norm()) || b.norm() == 0.0)
        raise(ErrorCode::DegeneratePairing, "<b, c> vanishes");

    ZeroDynModel z;
    z.A0 = A0;
    z.b = b;
    z.c = c;
    ComplexMatrix I = ComplexMatrix::Identity(m, m);
    z.Qb = I - b * c.adjoint() / cb;

    // Orthonormal basis of ker c^*: trailing columns of a full QR of c.
    Eigen::HouseholderQR<ComplexMatrix> qr{ComplexMatrix(c)};
    ComplexMatrix Qfull = qr.householderQ() * ComplexMatrix::Identity(m, m);
    ComplexMatrix Phi = Qfull.rightCols(m - 1);

    Eigen::RowVectorXcd Ct = c.adjoint() / cb;
    ComplexVector Bt = b / cb;
    Eigen::RowVectorXcd K = Ct * A0;

    ComplexMatrix E = ComplexMatrix::Zero(m + 1, m + 1);
    E.topLeftCorner(m, m) = I;
    ComplexMatrix A = ComplexMatrix::Zero(m + 1, m + 1);
    A.topLeftCorner(m, m) = A0;
    A.topRightCorner(m, 1) = b;
    A.bottomLeftCorner(1, m) = c.adjoint();
    z.pencil = {E, A};

    ComplexMatrix V = ComplexMatrix::Zero(m + 1, m + 1);
    V.block(0, 0, m, m - 1) = Phi;
    V.block(0, m - 1, m, 1) = b;
    V.block(m, 0, 1, m - 1) = -K * Phi;
    V(m, m) = 1.0;

    ComplexMatrix PhiQb = Phi.adjoint() * z.Qb;
    ComplexMatrix U = ComplexMatrix::Zero(m + 1, m + 1);
    U.block(0, 0, m - 1, m) = PhiQb;
    U.block(0, m, m - 1, 1) = -PhiQb * A0 * Bt;
    U(m - 1, m) = 1.0 / cb;
    U.block(m, 0, 1, m) = Ct;
    U(m, m) = -(K * Bt)(0);

    ComplexMatrix Ui = ComplexMatrix::Zero(m + 1, m + 1);
    Ui.block(0, 0, m, m - 1) = Phi;
    Ui.block(0, m - 1, m, 1) = A0 * b;
    Ui.block(0, m, m, 1) = b;
    Ui(m, m - 1) = cb;

    ComplexMatrix Vi = ComplexMatrix::Zero(m + 1, m + 1);
    Vi.block(0, 0, m - 1, m) = PhiQb;
    Vi.block(m - 1, 0, 1, m) = Ct;
    Vi.block(m, 0, 1, m) = K * z.Qb;
    Vi(m, m) = 1.0;

    z.U = U;
    z.V = V;
    z.U_inv = Ui;
    z.V_inv = Vi;
    z.N = ComplexMatrix::Zero(2, 2);
    z.N(1, 0) = 1.0;
    z.reduced_A0 = PhiQb * A0 * Phi;

    ComplexMatrix Ip = ComplexMatrix::Identity(m + 1, m + 1);
    z.inverse_residual = std::max(spectral_norm(U * Ui - Ip), spectral_norm(V * Vi - Ip));
    ComplexMatrix target_E = block_diag(ComplexMatrix::Identity(m - 1, m - 1), z.N);
    ComplexMatrix target_A = block_diag(z.reduced_A0, ComplexMatrix::Identity(2, 2));
    z.block_residual_E = spectral_norm(U * E * V - target_E);
    z.block_residual_A = spectral_norm(U * A * V - target_A);
    double scale = 1.0 + spectral_norm(A0);
    if (z.inverse_residual > 1e-12 * (1.0 + spectral_norm(U)) * (1.0 + spectral_norm(V)) ||
        z.block_residual_E > 1e-10 * scale || z.block_residual_A > 1e-10 * scale * scale) {
        raise(ErrorCode::IllConditionedTransform,
              "zero-dynamics isomorphisms failed their self-check");
    }
    return z;
}

}  // namespace daekit
