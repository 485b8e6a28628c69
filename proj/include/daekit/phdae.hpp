#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "daekit/core.hpp"
#include "daekit/indices.hpp"
#include "daekit/solver.hpp"
#include "daekit/weierstrass.hpp"

namespace daekit {

/// d/dt Ex = AQx.
struct PhPencil {
    ComplexMatrix E;
    ComplexMatrix A;
    ComplexMatrix Q;

    Eigen::Index size() const { return E.rows(); }
    /// The pencil (E, AQ) governing the dynamics.
    MatrixPencil dynamics() const { return {E, A * Q}; }
};

inline void validate(const PhPencil& ph) {
    validate(MatrixPencil{ph.E, ph.A});
    if (ph.Q.rows() != ph.E.rows() || ph.Q.cols() != ph.E.cols() || !all_finite(ph.Q))
        raise(ErrorCode::InvalidInput, "Q must be a finite matrix of the same size as E");
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& M) { return 0.5 * (M + M.adjoint()); }

inline RealVector hermitian_eigenvalues(const ComplexMatrix& H) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(H), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

struct PhTolerances {
    double symmetry = 1e-10;
    double psd = 1e-10;
    double dissipativity = 1e-10;
    double q_condition = 1e12;
};

struct MakeTResult {
    ComplexMatrix T;
    double c = 1.0;
    double btb_residual = 0.0;  // ||BTB - B|| / max(1, ||B||)
    int rank = 0;
};

/// T with BTB = B and T >= cI, from the Hermitian eigendecomposition of B.
inline MakeTResult make_T(const ComplexMatrix& B) {
    const Eigen::Index n = B.rows();
    if (n == 0 || B.cols() != n || !all_finite(B))
        raise(ErrorCode::InvalidInput, "B must be a finite square matrix");
    const double nb = spectral_norm(B);
    if (spectral_norm(B - B.adjoint()) > 1e-10 * std::max(1.0, nb))
        raise(ErrorCode::InvalidInput, "B is not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(B));
    const RealVector& lam = es.eigenvalues();
    const double lmax = lam.cwiseAbs().maxCoeff();
    MakeTResult out;
    if (lmax == 0.0) {
        out.T = ComplexMatrix::Identity(n, n);
        out.c = 1.0;
        return out;
    }
    const double kernel_tol = 1e-11 * lmax;
    double min_kept = std::numeric_limits<double>::infinity();
    double max_dropped = 0.0;
    RealVector d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (lam(i) < -1e-10 * lmax)
            raise(ErrorCode::InvalidInput, "B is not positive semidefinite");
        if (std::abs(lam(i)) <= kernel_tol) {
            max_dropped = std::max(max_dropped, std::abs(lam(i)));
            d(i) = 1.0;
        } else {
            min_kept = std::min(min_kept, lam(i));
            d(i) = 1.0 / lam(i);
            ++out.rank;
        }
    }
    if (max_dropped > 0.0 && min_kept < 1e3 * max_dropped)
        raise(ErrorCode::NoSpectralGap, "range/kernel split of B is ambiguous");
    const ComplexMatrix& U = es.eigenvectors();
    out.T = U * d.cast<Complex>().asDiagonal() * U.adjoint();
    out.c = std::min(1.0, 1.0 / lam.maxCoeff());
    out.btb_residual = spectral_norm(B * out.T * B - B) / std::max(1.0, nb);
    return out;
}

/// (EQ^{-1}, A): the coordinates z = Qx with Hamiltonian operator I.
inline MatrixPencil normalize(const PhPencil& ph, double max_condition = 1e12) {
    validate(ph);
    if (!(condition_number(ph.Q) <= max_condition)) raise(ErrorCode::SingularQ, "Q is not invertible");
    ComplexMatrix B = ph.Q.transpose().partialPivLu().solve(ph.E.transpose()).transpose();
    return {B, ph.A};
}

struct MakeSResult {
    ComplexMatrix S;
    double c = 1.0;
    double identity_residual = 0.0;  // ||E S E^* - E Q^{-1}|| / max(1, ||E Q^{-1}||)
};

/// S = Q^{-1} T Q^{-*} with T from make_T(EQ^{-1}), so that E S E^* = E Q^{-1}.
inline MakeSResult make_S(const PhPencil& ph) {
    MatrixPencil nrm = normalize(ph);
    const ComplexMatrix& B = nrm.E;
    MakeTResult t = make_T(hermitian_part(B));
    ComplexMatrix Qi = ph.Q.inverse();
    MakeSResult out;
    out.S = Qi * t.T * Qi.adjoint();
    out.c = hermitian_eigenvalues(out.S).minCoeff();
    out.identity_residual =
        spectral_norm(ph.E * out.S * ph.E.adjoint() - B) / std::max(1.0, spectral_norm(B));
    if (!(out.identity_residual <= 1e-8))
        raise(ErrorCode::NoConvergence, "E S E^* = E Q^{-1} fails; Q^{-*}E^* is not Hermitian");
    return out;
}

/// H(x) = Re <Ex, Qx> with <u, v> = v^* u.
inline double hamiltonian(const PhPencil& ph, const ComplexVector& x) {
    return (ph.Q * x).dot(ph.E * x).real();
}

/// |Im <Ex,Qx>| <= 1e-10 (1+|H|) and H >= -1e-10 ||x||^2.
inline bool hamiltonian_consistent(const PhPencil& ph, const ComplexVector& x) {
    Complex h = (ph.Q * x).dot(ph.E * x);
    return std::abs(h.imag()) <= 1e-10 * (1.0 + std::abs(h.real())) &&
           h.real() >= -1e-10 * x.squaredNorm();
}

struct DissipationTrace {
    std::vector<double> H;
    double max_increase = 0.0;
    /// max_j |Delta H / Delta t - mean of 2 Re <AQx, Qx> at both ends|.
    double identity_defect = 0.0;
};

inline DissipationTrace dissipation_trace(const PhPencil& ph, const Trajectory& traj) {
    DissipationTrace out;
    std::vector<double> rate;
    for (const ComplexVector& x : traj.states) {
        out.H.push_back(hamiltonian(ph, x));
        ComplexVector qx = ph.Q * x;
        rate.push_back(2.0 * qx.dot(ph.A * qx).real());
    }
    for (std::size_t j = 0; j + 1 < out.H.size(); ++j) {
        const double inc = out.H[j + 1] - out.H[j];
        out.max_increase = (j == 0) ? inc : std::max(out.max_increase, inc);
        const double dt = traj.times[j + 1] - traj.times[j];
        out.identity_defect =
            std::max(out.identity_defect, std::abs(inc / dt - 0.5 * (rate[j] + rate[j + 1])));
    }
    return out;
}

/// Orthonormal basis of the column space, rank decided at tol * sigma_max.
inline ComplexMatrix range_basis(const ComplexMatrix& M, double tol = 1e-10) {
    Eigen::BDCSVD<ComplexMatrix> svd(M, Eigen::ComputeThinU);
    const RealVector& s = svd.singularValues();
    Eigen::Index r = 0;
    if (s.size() > 0 && s(0) > 0.0)
        while (r < s.size() && s(r) > tol * s(0)) ++r;
    return svd.matrixU().leftCols(r);
}

inline Eigen::Index numerical_rank(const ComplexMatrix& M, double tol = 1e-10) {
    if (M.cols() == 0) return 0;
    return range_basis(M, tol).cols();
}

/// (Q^*(Z1) = X1, Q(X1) = Z1) with X1 = ran P, Z1 = ran R of the decomposition of (E, AQ).
inline std::pair<bool, bool> semigroup_condition_check(const PhPencil& ph,
                                                       const WeierstrassDecomposition& decomp) {
    ComplexMatrix X1 = range_basis(decomp.P);
    ComplexMatrix Z1 = range_basis(decomp.R);
    auto same_space = [](const ComplexMatrix& image, const ComplexMatrix& target) {
        if (image.cols() != target.cols()) return false;
        if (target.cols() == 0) return true;
        ComplexMatrix joined(target.rows(), image.cols() + target.cols());
        joined << image, target;
        return numerical_rank(joined) == target.cols() && numerical_rank(image) == target.cols();
    };
    return {same_space(ph.Q.adjoint() * Z1, X1), same_space(ph.Q * X1, Z1)};
}

struct IndexGridOptions {
    double omega = 0.0;  // 0 selects max(abscissa + 1, 0.5)
    double lambda_max = 1e3;
    int num_points = 64;
    double imag_max = 1e3;
    int num_lines = 4;
    int complex_points = 96;
};

struct PhReport {
    double symmetry_residual = 0.0;      // ||E^*Q - Q^*E|| / (||E|| ||Q||)
    double psd_min_eig = 0.0;            // lambda_min(herm(E^*Q)) / (||E|| ||Q||)
    double dissipativity_max_eig = 0.0;  // lambda_max(herm(A)) / max(1, ||A||)
    double q_condition = 0.0;
    int e_rank = 0;
    bool symmetric = false;
    bool nonnegative = false;
    bool dissipative = false;
    bool q_invertible = false;
    bool passed = false;

    std::optional<ComplexMatrix> T;
    double c_T = 0.0;
    double btb_residual = 0.0;
    std::optional<ComplexMatrix> S;
    double c_S = 0.0;
    double ese_residual = 0.0;
    double normalized_hermitian_residual = 0.0;  // ||EQ^{-1} - Q^{-*}E^*|| / max(1, ||EQ^{-1}||)
    double normalized_psd_min_eig = 0.0;

    std::optional<GrowthEstimate> real_index;
    std::optional<GrowthEstimate> complex_index;
    std::optional<std::pair<bool, bool>> subspace_conditions;
    std::vector<std::string> notes;
};

/// Structure checks plus T, S, index estimates and the subspace conditions; never throws on
/// structural failure.
inline PhReport verify_ph_structure(const PhPencil& ph, const PhTolerances& tol = {},
                                    const IndexGridOptions& grid = {}) {
    validate(ph);
    PhReport r;
    const double ne = spectral_norm(ph.E), nq = spectral_norm(ph.Q), na = spectral_norm(ph.A);
    const double scale = std::max(ne * nq, std::numeric_limits<double>::min());
    const ComplexMatrix EQ = ph.E.adjoint() * ph.Q;
    r.symmetry_residual = spectral_norm(EQ - EQ.adjoint()) / scale;
    r.psd_min_eig = hermitian_eigenvalues(EQ).minCoeff() / scale;
    r.dissipativity_max_eig = hermitian_eigenvalues(ph.A).maxCoeff() / std::max(1.0, na);
    r.q_condition = condition_number(ph.Q);
    r.e_rank = static_cast<int>(numerical_rank(ph.E));
    r.symmetric = r.symmetry_residual <= tol.symmetry;
    r.nonnegative = r.psd_min_eig >= -tol.psd;
    r.dissipative = r.dissipativity_max_eig <= tol.dissipativity;
    r.q_invertible = r.q_condition <= tol.q_condition;
    r.passed = r.symmetric && r.nonnegative && r.dissipative && r.q_invertible;

    if (r.q_invertible) {
        const ComplexMatrix B = normalize(ph).E;
        const double nb = std::max(1.0, spectral_norm(B));
        r.normalized_hermitian_residual = spectral_norm(B - B.adjoint()) / nb;
        r.normalized_psd_min_eig = hermitian_eigenvalues(B).minCoeff() / nb;
        try {
            MakeTResult t = make_T(hermitian_part(B));
            r.T = t.T;
            r.c_T = t.c;
            r.btb_residual = t.btb_residual;
        } catch (const Error& e) {
            r.notes.push_back(std::string("make_T: ") + e.what());
        }
        try {
            MakeSResult s = make_S(ph);
            r.S = s.S;
            r.c_S = s.c;
            r.ese_residual = s.identity_residual;
        } catch (const Error& e) {
            r.notes.push_back(std::string("make_S: ") + e.what());
        }
    }

    const MatrixPencil dyn = ph.dynamics();
    try {
        const double omega = grid.omega > 0.0 ? grid.omega : default_omega(dyn);
        r.real_index = estimate_resolvent_index_real(dyn, omega, std::max(grid.lambda_max, 10.0 * omega),
                                                     grid.num_points);
        r.complex_index = estimate_resolvent_index_complex(dyn, omega, grid.imag_max, grid.num_lines,
                                                           grid.complex_points);
    } catch (const Error& e) {
        r.notes.push_back(std::string("index estimation: ") + e.what());
    }
    try {
        WeierstrassDecomposition w = decompose(dyn);
        r.subspace_conditions = semigroup_condition_check(ph, w);
    } catch (const Error& e) {
        r.notes.push_back(std::string("decomposition: ") + e.what());
    }
    return r;
}

struct IndexBound {
    bool real_ok = false;
    bool complex_ok = false;
    GrowthEstimate real;
    GrowthEstimate complex;
};

/// Estimates on (E, AQ) against the bounds real <= 2, complex <= 3.
inline IndexBound ph_index_bound_check(const PhPencil& ph, const IndexGridOptions& grid = {}) {
    validate(ph);
    const MatrixPencil dyn = ph.dynamics();
    const double omega = grid.omega > 0.0 ? grid.omega : default_omega(dyn);
    IndexBound b;
    b.real = estimate_resolvent_index_real(dyn, omega, std::max(grid.lambda_max, 10.0 * omega),
                                           grid.num_points);
    b.complex = estimate_resolvent_index_complex(dyn, omega, grid.imag_max, grid.num_lines,
                                                 grid.complex_points);
    b.real_ok = b.real.index <= 2;
    b.complex_ok = b.complex.index <= 3;
    return b;
}

}  // namespace daekit
