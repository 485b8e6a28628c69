#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "daekit/daekit.hpp"

namespace daekit::testing {

/// Pencil built from a known Weierstrass form through random well-conditioned equivalences.
struct KnownPencil {
    MatrixPencil pencil;
    ComplexMatrix A1;
    ComplexMatrix N;
    ComplexMatrix G;  // left factor
    ComplexMatrix H;  // right factor
    int index = 0;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// I + (scale / sqrt(n)) * Gaussian; condition number stays moderate for scale < 1.
inline ComplexMatrix near_identity(Eigen::Index n, double scale, std::mt19937_64& rng) {
    return ComplexMatrix::Identity(n, n) + random_complex(n, n, rng) * (scale / std::sqrt(double(n)));
}

/// Nilpotent lower shift with Jordan chains of length at most `index`, at least one of that length.
inline ComplexMatrix nilpotent_block(int d2, int index) {
    ComplexMatrix N = ComplexMatrix::Zero(d2, d2);
    if (index <= 1) return N;
    for (int start = 0; start < d2; start += index)
        for (int i = start + 1; i < std::min(d2, start + index); ++i) N(i, i - 1) = 1.0;
    return N;
}

/// A1 with spectrum in Re <= -shift plus a random skew part.
inline ComplexMatrix stable_block(int d1, double shift, std::mt19937_64& rng) {
    if (d1 == 0) return ComplexMatrix(0, 0);
    ComplexMatrix W = random_complex(d1, d1, rng) / std::sqrt(double(d1));
    ComplexMatrix V = random_complex(d1, d1, rng) / std::sqrt(double(2 * d1));
    return 0.5 * (W - W.adjoint()) - V * V.adjoint() - shift * ComplexMatrix::Identity(d1, d1);
}

inline KnownPencil known_pencil(int d1, int d2, int index, std::mt19937_64& rng,
                                double mixing = 0.5) {
    KnownPencil k;
    k.A1 = stable_block(d1, 0.5, rng);
    k.N = nilpotent_block(d2, index);
    k.index = d2 == 0 ? 0 : index;
    const int n = d1 + d2;
    k.G = near_identity(n, mixing, rng);
    k.H = near_identity(n, mixing, rng);
    const ComplexMatrix Eb = block_diag(ComplexMatrix::Identity(d1, d1), k.N);
    const ComplexMatrix Ab = block_diag(k.A1, ComplexMatrix::Identity(d2, d2));
    k.pencil = {k.G * Eb * k.H, k.G * Ab * k.H};
    return k;
}

inline double max_abs(const ComplexMatrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

}  // namespace daekit::testing

namespace daekit::testing {

inline std::vector<Complex> eigenvalues_of(const ComplexMatrix& M) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(M);
    return {es.eigenvalues().data(), es.eigenvalues().data() + M.rows()};
}

/// Symmetric Hausdorff distance between two spectra of equal size.
inline double spectrum_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const auto& x = pass == 0 ? a : b;
        const auto& y = pass == 0 ? b : a;
        for (Complex u : x) {
            double best = std::numeric_limits<double>::infinity();
            for (Complex v : y) best = std::min(best, std::abs(u - v));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

}  // namespace daekit::testing
