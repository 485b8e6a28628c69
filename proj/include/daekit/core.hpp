#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "daekit/detail/lapack.hpp"
#include "daekit/errors.hpp"

namespace daekit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// The pair (E, A) standing for d/dt Ex = Ax.
struct MatrixPencil {
    ComplexMatrix E;
    ComplexMatrix A;

    Eigen::Index size() const { return E.rows(); }
};

inline bool all_finite(const ComplexMatrix& M) {
    return M.real().allFinite() && M.imag().allFinite();
}

/// Throws InvalidInput unless E and A are square, equally sized and finite.
inline void validate(const MatrixPencil& pencil) {
    const auto n = pencil.E.rows();
    if (n == 0) raise(ErrorCode::InvalidInput, "pencil must be non-empty");
    if (pencil.E.cols() != n || pencil.A.rows() != n || pencil.A.cols() != n)
        raise(ErrorCode::InvalidInput, "E and A must be square matrices of equal size");
    if (!all_finite(pencil.E) || !all_finite(pencil.A))
        raise(ErrorCode::InvalidInput, "pencil entries must be finite");
}

/// Largest singular value.
inline double spectral_norm(const ComplexMatrix& M) {
    if (M.size() == 0) return 0.0;
    if (M.cols() == 1) return M.norm();
    Eigen::BDCSVD<ComplexMatrix> svd(M);
    return svd.singularValues()(0);
}

inline RealVector singular_values(const ComplexMatrix& M) {
    if (M.size() == 0) return RealVector();
    Eigen::BDCSVD<ComplexMatrix> svd(M);
    return svd.singularValues();
}

/// 2-norm condition number; infinity when singular.
inline double condition_number(const ComplexMatrix& M) {
    RealVector s = singular_values(M);
    if (s.size() == 0) return 1.0;
    double smin = s(s.size() - 1);
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

/// Singularity threshold kappa_max = 1 / (1e-12 n).
inline double kappa_max(Eigen::Index n) { return 1.0 / (1e-12 * static_cast<double>(std::max<Eigen::Index>(n, 1))); }

namespace detail {

/// Eigen's estimate is NaN-prone on exactly singular factors; zero pivots short-circuit to 0.
inline double lu_rcond(const Eigen::PartialPivLU<ComplexMatrix>& lu) {
    const auto& LU = lu.matrixLU();
    for (Eigen::Index i = 0; i < LU.rows(); ++i) {
        const double d = std::abs(LU(i, i));
        if (!(d > 0.0) || !std::isfinite(d)) return 0.0;
    }
    const double rc = lu.rcond();
    return std::isfinite(rc) ? rc : 0.0;
}

}  // namespace detail

/// LU factorization of lambda E - A with a conditioning guard.
class ShiftedFactorization {
public:
    ShiftedFactorization(const MatrixPencil& pencil, Complex lambda) : lambda_(lambda) {
        ComplexMatrix M = lambda * pencil.E - pencil.A;
        lu_.compute(M);
        rcond_ = detail::lu_rcond(lu_);
        if (!(rcond_ * kappa_max(M.rows()) >= 1.0)) {
            raise(ErrorCode::SingularShift,
                  "lambda E - A is numerically singular at lambda = (" +
                      std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) +
                      "), rcond = " + std::to_string(rcond_));
        }
    }

    template <typename Rhs>
    ComplexMatrix solve(const Rhs& rhs) const {
        return lu_.solve(rhs);
    }

    ComplexMatrix inverse() const { return lu_.inverse(); }
    double rcond() const { return rcond_; }
    Complex lambda() const { return lambda_; }

private:
    Eigen::PartialPivLU<ComplexMatrix> lu_;
    double rcond_ = 0.0;
    Complex lambda_;
};

/// True iff lambda E - A passes the numerical invertibility test.
inline bool in_resolvent_set(const MatrixPencil& pencil, Complex lambda) {
    ComplexMatrix M = lambda * pencil.E - pencil.A;
    Eigen::PartialPivLU<ComplexMatrix> lu(M);
    return detail::lu_rcond(lu) * kappa_max(M.rows()) >= 1.0;
}

/// (lambda E - A)^{-1}.
inline ComplexMatrix resolvent(const MatrixPencil& pencil, Complex lambda) {
    validate(pencil);
    return ShiftedFactorization(pencil, lambda).inverse();
}

/// R(lambda) = (lambda E - A)^{-1} E.
inline ComplexMatrix right_pseudo_resolvent(const MatrixPencil& pencil, Complex lambda) {
    validate(pencil);
    return ShiftedFactorization(pencil, lambda).solve(pencil.E);
}

/// E (lambda E - A)^{-1}.
inline ComplexMatrix left_pseudo_resolvent(const MatrixPencil& pencil, Complex lambda) {
    validate(pencil);
    return pencil.E * ShiftedFactorization(pencil, lambda).inverse();
}

struct ResolventSample {
    Complex lambda;
    double norm = 0.0;
    bool in_resolvent_set = false;
};

/// Spectral norm of the resolvent via the smallest singular value of lambda E - A.
inline ResolventSample sample_resolvent(const MatrixPencil& pencil, Complex lambda) {
    ComplexMatrix M = lambda * pencil.E - pencil.A;
    RealVector s = singular_values(M);
    ResolventSample out;
    out.lambda = lambda;
    double smin = s(s.size() - 1);
    out.in_resolvent_set = smin > 0.0 && s(0) / smin <= kappa_max(M.rows());
    out.norm = smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
    return out;
}

/// Randomized test that det(lambda E - A) is not identically zero.
inline bool probe_regularity(const MatrixPencil& pencil, int trials, std::uint64_t seed) {
    validate(pencil);
    if (trials < pencil.size() + 1)
        raise(ErrorCode::InvalidInput, "probe_regularity requires trials >= n + 1");
    double radius = 2.0 * (spectral_norm(pencil.E) + spectral_norm(pencil.A));
    if (!(radius > 0.0)) radius = 1.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < trials; ++k) {
        double r = radius * std::sqrt(unit(rng));
        double phi = 2.0 * std::numbers::pi * unit(rng);
        if (in_resolvent_set(pencil, std::polar(r, phi))) return true;
    }
    return false;
}

inline bool probe_regularity(const MatrixPencil& pencil) {
    return probe_regularity(pencil, static_cast<int>(pencil.size()) + 8, 0x5eed);
}

/// Finite generalized eigenvalues alpha/beta of (E, A).
inline std::vector<Complex> finite_eigenvalues(const MatrixPencil& pencil, double infinite_tol = 1e-6) {
    validate(pencil);
    double se = spectral_norm(pencil.E);
    double sa = spectral_norm(pencil.A);
    if (se == 0.0) return {};
    double fa = sa > 0.0 ? 1.0 / sa : 1.0;
    std::vector<Complex> alpha, beta;
    detail::generalized_eigenvalues(pencil.A * fa, pencil.E / se, alpha, beta);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double a = std::abs(alpha[i]), b = std::abs(beta[i]);
        if (b > infinite_tol * (a + b)) out.push_back(alpha[i] / beta[i] / (se * fa));
    }
    return out;
}

/// max Re over finite eigenvalues; -infinity when there are none.
inline double spectral_abscissa(const MatrixPencil& pencil) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Complex& z : finite_eigenvalues(pencil)) best = std::max(best, z.real());
    return best;
}

/// Default Bromwich abscissa: one unit right of the finite spectrum, at least 0.5.
inline double default_omega(const MatrixPencil& pencil) {
    double a = spectral_abscissa(pencil);
    if (!std::isfinite(a)) return 0.5;
    return std::max(a + 1.0, 0.5);
}

}  // namespace daekit
