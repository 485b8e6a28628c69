#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "daekit/core.hpp"
#include "daekit/quadrature.hpp"
#include "daekit/weierstrass.hpp"

namespace daekit {

struct SolveConfig {
    Complex mu{2.0, 0.0};
    double omega = 1.0;
    int p = 3;
    QuadratureConfig quad;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ComplexVector> states;
    std::optional<std::vector<double>> hamiltonian;
    std::optional<double> mild_residual;
    std::optional<QuadratureStats> quadrature;
};

struct Admissibility {
    bool member = false;
    ComplexVector z0;
    double residual = 0.0;
};

inline double sign_power(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

/// R(mu)^p.
inline ComplexMatrix pseudo_resolvent_power(const MatrixPencil& pencil, Complex mu, int p) {
    ComplexMatrix R = right_pseudo_resolvent(pencil, mu);
    ComplexMatrix out = ComplexMatrix::Identity(R.rows(), R.cols());
    for (int k = 0; k < p; ++k) out = out * R;
    return out;
}

/// x0 = (-1)^{p-1} R(mu)^p z0.
inline ComplexVector initial_state_from(const MatrixPencil& pencil, Complex mu, int p,
                                        const ComplexVector& z0) {
    validate(pencil);
    if (z0.size() != pencil.size()) raise(ErrorCode::InvalidInput, "z0 has wrong length");
    return sign_power(p - 1) * (pseudo_resolvent_power(pencil, mu, p) * z0);
}

/// Least-squares test of x0 in ran R(mu)^p.
inline Admissibility admissible_initial_state(const MatrixPencil& pencil, Complex mu, int p,
                                              const ComplexVector& x0) {
    validate(pencil);
    if (p < 1) raise(ErrorCode::InvalidInput, "p must be positive");
    if (x0.size() != pencil.size()) raise(ErrorCode::InvalidInput, "x0 has wrong length");
    Admissibility out;
    ComplexMatrix M = pseudo_resolvent_power(pencil, mu, p);
    if (x0.norm() == 0.0) {
        out.member = true;
        out.z0 = ComplexVector::Zero(x0.size());
        return out;
    }
    Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(M);
    cod.setThreshold(1e-13);
    out.z0 = cod.solve(sign_power(p - 1) * x0);
    out.residual = (sign_power(p - 1) * (M * out.z0) - x0).norm();
    out.member = out.residual <= 1e-8 * x0.norm();
    return out;
}

/// x(t) = -(1/2 pi i) * integral over Re(lambda) = omega of e^{lambda t} R(lambda) z0 / (lambda - mu)^p.
inline Trajectory contour_solve(const MatrixPencil& pencil, const ComplexVector& z0,
                                const SolveConfig& cfg, const std::vector<double>& times) {
    validate(pencil);
    if (z0.size() != pencil.size()) raise(ErrorCode::InvalidInput, "z0 has wrong length");
    if (cfg.p < 1) raise(ErrorCode::InvalidInput, "p must be positive");
    if (!(cfg.mu.real() > cfg.omega))
        raise(ErrorCode::InvalidInput, "shift mu must satisfy Re mu > omega");
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (!(times[j] >= 0.0) || (j > 0 && !(times[j] > times[j - 1])))
            raise(ErrorCode::InvalidInput, "times must be increasing and nonnegative");
    }
    const double abscissa = spectral_abscissa(pencil);
    if (abscissa >= cfg.omega)
        raise(ErrorCode::ShiftOutsideResolventSet,
              "finite spectrum reaches Re lambda = " + std::to_string(abscissa) +
                  ", not left of the contour at omega = " + std::to_string(cfg.omega));
    auto h = [&](double y) -> ComplexVector {
        const Complex lambda(cfg.omega, y);
        try {
            ShiftedFactorization f(pencil, lambda);
            return f.solve(pencil.E * z0) / std::pow(lambda - cfg.mu, cfg.p);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SingularShift)
                raise(ErrorCode::ShiftOutsideResolventSet,
                      "contour node outside the resolvent set: " + std::string(e.what()));
            throw;
        }
    };
    QuadratureStats stats;
    std::vector<ComplexVector> vals = bromwich_integral(h, cfg.omega, times, cfg.quad, &stats);
    Trajectory traj;
    traj.times = times;
    traj.states.reserve(vals.size());
    for (auto& v : vals) traj.states.push_back(-v);
    traj.quadrature = stats;
    return traj;
}

/// exp(M t) by scaling and squaring.
inline ComplexMatrix matrix_exponential(const ComplexMatrix& M, double t) {
    if (M.rows() != M.cols()) raise(ErrorCode::InvalidInput, "matrix must be square");
    if (M.rows() == 0) return M;
    ComplexMatrix Mt = M * t;
    if (spectral_norm(Mt) > 700.0)
        raise(ErrorCode::OverflowRisk, "||M t|| exceeds 700; exponential may overflow");
    return Mt.exp();
}

/// x(t) = T_R (exp(A1 t) y1, 0) with (y1, y2) = T_R^{-1} x0.
inline Trajectory weierstrass_solve(const WeierstrassDecomposition& w, const ComplexVector& x0,
                                    const std::vector<double>& times,
                                    double consistency_tol = 1e-8) {
    const Eigen::Index n = w.d1 + w.d2;
    if (x0.size() != n) raise(ErrorCode::InvalidInput, "x0 has wrong length");
    ComplexVector y = w.right_transform.partialPivLu().solve(x0);
    ComplexVector y1 = y.head(w.d1);
    double y2 = y.tail(w.d2).norm();
    if (y2 > consistency_tol * x0.norm()) {
        raise(ErrorCode::InconsistentInitialState,
              "initial state has nilpotent component of relative size " +
                  std::to_string(x0.norm() > 0.0 ? y2 / x0.norm() : y2));
    }
    Trajectory traj;
    traj.times = times;
    ComplexMatrix TR1 = w.right_transform.leftCols(w.d1);
    for (double t : times) {
        if (w.d1 == 0) {
            traj.states.push_back(ComplexVector::Zero(n));
        } else {
            traj.states.push_back(TR1 * (matrix_exponential(w.A1, t) * y1));
        }
    }
    return traj;
}

namespace detail {

inline bool is_uniform(const std::vector<double>& t) {
    const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t j = 1; j < t.size(); ++j)
        if (std::abs((t[j] - t[j - 1]) - h) > 1e-9 * std::abs(h)) return false;
    return true;
}

/// Running integrals of samples f over [t0, t_j] for every j, fourth order.
inline std::vector<ComplexVector> cumulative_integral(const std::vector<double>& t,
                                                      const std::vector<ComplexVector>& f) {
    const std::size_t m = t.size();
    std::vector<ComplexVector> out(m, ComplexVector::Zero(f[0].size()));
    if (is_uniform(t)) {
        const double h = t[1] - t[0];
        // Composite Simpson to even j; Simpson plus a closing 3/8 panel for odd j >= 3.
        std::vector<ComplexVector> even(m, ComplexVector::Zero(f[0].size()));
        for (std::size_t j = 2; j < m; j += 2)
            even[j] = even[j - 2] + (h / 3.0) * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
        for (std::size_t j = 1; j < m; ++j) {
            if (j % 2 == 0) {
                out[j] = even[j];
            } else if (j == 1) {
                out[j] = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
            } else {
                out[j] = even[j - 3] +
                         (3.0 * h / 8.0) * (f[j - 3] + 3.0 * f[j - 2] + 3.0 * f[j - 1] + f[j]);
            }
        }
        return out;
    }
    // Non-uniform grid: integrate a local cubic interpolant exactly with 2-point Gauss.
    const double g = 1.0 / std::sqrt(3.0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        std::size_t s = (i == 0) ? 0 : i - 1;
        if (s + 4 > m) s = m - 4;
        const double a = t[i], b = t[i + 1];
        ComplexVector piece = ComplexVector::Zero(f[0].size());
        for (double node : {-g, g}) {
            const double x = 0.5 * (a + b) + 0.5 * (b - a) * node;
            for (std::size_t k = s; k < s + 4; ++k) {
                double l = 1.0;
                for (std::size_t q = s; q < s + 4; ++q)
                    if (q != k) l *= (x - t[q]) / (t[k] - t[q]);
                piece += (0.5 * (b - a) * l) * f[k];
            }
        }
        out[i + 1] = out[i] + piece;
    }
    return out;
}

}  // namespace detail

/// max_j ||E x(t_j) - E x(0) - A * integral_0^{t_j} x|| / (1 + ||E x(0)||).
inline double mild_solution_residual(const MatrixPencil& pencil, const Trajectory& traj) {
    validate(pencil);
    if (traj.times.size() != traj.states.size())
        raise(ErrorCode::InvalidInput, "trajectory times and states differ in length");
    if (traj.times.size() < 5)
        raise(ErrorCode::InvalidInput, "mild residual needs at least 5 samples");
    std::vector<ComplexVector> I = detail::cumulative_integral(traj.times, traj.states);
    const ComplexVector Ex0 = pencil.E * traj.states[0];
    double worst = 0.0;
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        double r = (pencil.E * traj.states[j] - Ex0 - pencil.A * I[j]).norm();
        worst = std::max(worst, r);
    }
    return worst / (1.0 + Ex0.norm());
}

inline std::vector<double> uniform_times(double t_end, int count) {
    if (count < 2 || !(t_end > 0.0)) raise(ErrorCode::InvalidInput, "need t_end > 0 and count >= 2");
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) t[static_cast<std::size_t>(j)] = t_end * j / (count - 1);
    return t;
}

/// Largest relative deviation max_j ||x_j - y_j|| / max(max_j ||y_j||, tiny).
inline double relative_difference(const Trajectory& x, const Trajectory& y) {
    if (x.states.size() != y.states.size())
        raise(ErrorCode::InvalidInput, "trajectories have different lengths");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < x.states.size(); ++j) {
        num = std::max(num, (x.states[j] - y.states[j]).norm());
        den = std::max(den, y.states[j].norm());
    }
    return den > 0.0 ? num / den : num;
}

}  // namespace daekit
