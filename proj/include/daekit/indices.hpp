#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "daekit/core.hpp"
#include "daekit/quadrature.hpp"
#include "daekit/weierstrass.hpp"

namespace daekit {

/// Fitted growth exponent of the resolvent norm along a ray or half-plane.
struct GrowthEstimate {
    double omega = 0.0;
    double slope = 0.0;
    int index = 0;
    std::vector<ResolventSample> samples;
    double fit_residual = 0.0;
    double slope_tolerance = 0.25;
    bool rounding_warning = false;  // |slope - round(slope)| > slope_tolerance
    int fit_points = 0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    if (x.size() < 2) raise(ErrorCode::InvalidInput, "line fit needs two points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / m);
    return fit;
}

namespace detail {

inline void finish_estimate(GrowthEstimate& g, const LineFit& fit, int points) {
    g.slope = fit.slope;
    g.fit_residual = fit.rms_residual;
    g.fit_points = points;
    const double r = std::round(fit.slope);
    g.index = std::max(0, static_cast<int>(r) + 1);
    g.rounding_warning = std::abs(fit.slope - r) > g.slope_tolerance;
}

inline ResolventSample checked_sample(const MatrixPencil& pencil, Complex lambda) {
    ResolventSample s = sample_resolvent(pencil, lambda);
    if (!s.in_resolvent_set) {
        raise(ErrorCode::ShiftOutsideResolventSet,
              "grid point (" + std::to_string(lambda.real()) + ", " +
                  std::to_string(lambda.imag()) + ") is numerically singular");
    }
    return s;
}

}  // namespace detail

/// Geometric grid lambda_j = omega (lambda_max/omega)^{(j+1)/N} on (omega, lambda_max].
inline GrowthEstimate estimate_resolvent_index_real(const MatrixPencil& pencil, double omega,
                                                    double lambda_max, int num_points) {
    validate(pencil);
    if (!(omega > 0.0) || !(lambda_max > omega) || num_points < 8)
        raise(ErrorCode::InvalidInput, "need 0 < omega < lambda_max and num_points >= 8");
    GrowthEstimate g;
    g.omega = omega;
    const double ratio = lambda_max / omega;
    for (int j = 0; j < num_points; ++j) {
        const double lam = omega * std::pow(ratio, static_cast<double>(j + 1) / num_points);
        g.samples.push_back(detail::checked_sample(pencil, Complex(lam, 0.0)));
    }
    std::vector<double> x, y;
    for (int j = num_points / 2; j < num_points; ++j) {
        x.push_back(std::log(g.samples[static_cast<std::size_t>(j)].lambda.real()));
        y.push_back(std::log(g.samples[static_cast<std::size_t>(j)].norm));
    }
    detail::finish_estimate(g, least_squares_line(x, y), static_cast<int>(x.size()));
    return g;
}

/// Supremum over vertical lines Re = omega (1 + k), matched in 5% |lambda| bins.
inline GrowthEstimate estimate_resolvent_index_complex(const MatrixPencil& pencil, double omega,
                                                       double imag_max, int num_lines,
                                                       int num_points) {
    validate(pencil);
    if (!(omega > 0.0) || !(imag_max > 1.0) || num_lines < 1 || num_points < 8)
        raise(ErrorCode::InvalidInput,
              "need omega > 0, imag_max > 1, num_lines >= 1, num_points >= 8");
    GrowthEstimate g;
    g.omega = omega;
    const double bin_width = std::log(1.05);
    std::map<long, double> sup;
    for (int k = 0; k < num_lines; ++k) {
        const double re = omega * (1.0 + k);
        for (int j = 0; j < num_points; ++j) {
            const double y = std::pow(imag_max, static_cast<double>(j + 1) / num_points);
            for (double sgn : {1.0, -1.0}) {
                ResolventSample s = detail::checked_sample(pencil, Complex(re, sgn * y));
                const long bin = static_cast<long>(std::floor(std::log(std::abs(s.lambda)) / bin_width));
                auto it = sup.find(bin);
                if (it == sup.end() || s.norm > it->second) sup[bin] = s.norm;
                g.samples.push_back(s);
            }
        }
    }
    std::vector<double> x, y;
    std::size_t i = 0;
    const std::size_t start = sup.size() / 2;
    for (const auto& [bin, value] : sup) {
        if (i++ < start) continue;
        x.push_back((static_cast<double>(bin) + 0.5) * bin_width);
        y.push_back(std::log(value));
    }
    detail::finish_estimate(g, least_squares_line(x, y), static_cast<int>(x.size()));
    return g;
}

enum class RadialityVerdict { Supported, Falsified };

inline const char* to_string(RadialityVerdict v) {
    return v == RadialityVerdict::Supported ? "supported" : "falsified";
}

/// Sampling evidence for the p-radiality bound at a fixed omega.
struct RadialityEvidence {
    int p = 0;
    double omega = 0.0;
    double box_radius = 0.0;
    int n_max = 1;
    int num_samples = 0;
    std::uint64_t seed = 0;
    double max_ratio = 0.0;        // in the box (omega, omega + r)
    double max_ratio_large = 0.0;  // in the box (omega, omega + 10 r)
    double growth = 0.0;           // max_ratio_large / max_ratio
    double growth_threshold = std::sqrt(10.0);
    double C = 0.0;                // empirical constant when supported
    RadialityVerdict verdict = RadialityVerdict::Supported;
};

namespace detail {

struct RadialityDraw {
    std::vector<double> u;  // positions in (0, 1)
    int power = 1;
};

inline double radiality_ratio(const MatrixPencil& pencil, const RadialityDraw& d, double omega,
                              double radius) {
    const Eigen::Index n = pencil.size();
    ComplexMatrix right = ComplexMatrix::Identity(n, n);
    ComplexMatrix left = ComplexMatrix::Identity(n, n);
    double weight = 1.0;
    for (double u : d.u) {
        const double lam = omega + u * radius;
        std::optional<ShiftedFactorization> f;
        try {
            f.emplace(pencil, Complex(lam, 0.0));
        } catch (const Error&) {
            raise(ErrorCode::ShiftOutsideResolventSet,
                  "sample lambda = " + std::to_string(lam) + " is numerically singular");
        }
        right = right * f->solve(pencil.E);
        left = left * (pencil.E * f->inverse());
        weight *= (lam - omega);
    }
    ComplexMatrix rp = ComplexMatrix::Identity(n, n);
    ComplexMatrix lp = ComplexMatrix::Identity(n, n);
    for (int k = 0; k < d.power; ++k) {
        rp = rp * right;
        lp = lp * left;
    }
    const double scale = std::pow(weight, d.power);
    return std::max(spectral_norm(rp), spectral_norm(lp)) * scale;
}

}  // namespace detail

/// Samples the p-radiality inequality in two boxes of radius r and 10 r.
inline RadialityEvidence verify_radiality(const MatrixPencil& pencil, int p, double omega,
                                          double box_radius, int n_max, int num_samples,
                                          std::uint64_t seed) {
    validate(pencil);
    if (p < 0 || !(box_radius > 0.0) || n_max < 1 || num_samples < 1)
        raise(ErrorCode::InvalidInput, "invalid radiality sampling parameters");
    RadialityEvidence ev;
    ev.p = p;
    ev.omega = omega;
    ev.box_radius = box_radius;
    ev.n_max = n_max;
    ev.num_samples = num_samples;
    ev.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick(1, n_max);
    for (int s = 0; s < num_samples; ++s) {
        detail::RadialityDraw d;
        for (int k = 0; k <= p; ++k) {
            double u = unit(rng);
            while (u == 0.0) u = unit(rng);
            d.u.push_back(u);
        }
        d.power = pick(rng);
        ev.max_ratio = std::max(ev.max_ratio, detail::radiality_ratio(pencil, d, omega, box_radius));
        ev.max_ratio_large = std::max(ev.max_ratio_large,
                                      detail::radiality_ratio(pencil, d, omega, 10.0 * box_radius));
    }
    ev.growth = ev.max_ratio > 0.0 ? ev.max_ratio_large / ev.max_ratio : 1.0;
    ev.verdict = ev.growth > ev.growth_threshold ? RadialityVerdict::Falsified
                                                 : RadialityVerdict::Supported;
    ev.C = std::max(ev.max_ratio, ev.max_ratio_large);
    return ev;
}

/// Outcome of comparing p_rad + 1 = p_res = p_nilp.
struct IndexRelations {
    int p_nilp = 0;
    int p_res = 0;
    int radiality_p = 0;
    bool radiality_supported = false;
    bool chain_holds = false;          // supported, and p + 1 = p_res = p_nilp
    bool nilpotency_bound_holds = false;  // p_nilp <= p + 1 whenever p-radiality is supported
    std::string finding;
};

inline IndexRelations index_relations_check(const WeierstrassDecomposition& decomp,
                                            const GrowthEstimate& real_estimate,
                                            const RadialityEvidence& radiality) {
    IndexRelations r;
    r.p_nilp = decomp.nilpotency_index;
    r.p_res = real_estimate.index;
    r.radiality_p = radiality.p;
    r.radiality_supported = radiality.verdict == RadialityVerdict::Supported;
    r.chain_holds = r.radiality_supported && radiality.p + 1 == r.p_res && r.p_res == r.p_nilp;
    r.nilpotency_bound_holds = !r.radiality_supported || r.p_nilp <= radiality.p + 1;
    if (r.chain_holds) {
        r.finding = "p_rad + 1 = p_res = p_nilp holds";
    } else if (!r.radiality_supported) {
        r.finding = "radiality at p = " + std::to_string(radiality.p) +
                    " falsified; p_rad exceeds the tested order";
    } else {
        r.finding = "mismatch: p_rad + 1 = " + std::to_string(radiality.p + 1) +
                    ", p_res = " + std::to_string(r.p_res) + ", p_nilp = " +
                    std::to_string(r.p_nilp);
    }
    return r;
}

/// Order n of the integrated semigroup generated by the finite block: p_c_res + 2.
inline int integrated_semigroup_order(int p_c_res) {
    if (p_c_res < 0) raise(ErrorCode::InvalidInput, "index must be nonnegative");
    return p_c_res + 2;
}

/// S(t) x for the (n-1)-times integrated semigroup of A1 at every requested t.
///
/// The Laplace transform lambda^{-(n-1)} (lambda - A1)^{-1} x is split into the first
/// `terms` Neumann terms, inverted in closed form, plus a quickly decaying remainder
/// inverted on the Bromwich line Re = omega.
inline std::vector<ComplexVector> integrated_semigroup_samples(
    const ComplexMatrix& A1, int n, const std::vector<double>& times, const ComplexVector& x,
    const QuadratureConfig& quad, double omega = 0.0, int terms = 3) {
    const Eigen::Index d = A1.rows();
    if (n < 1 || A1.cols() != d || x.size() != d)
        raise(ErrorCode::InvalidInput, "integrated semigroup needs n >= 1 and matching sizes");
    for (double t : times)
        if (!(t >= 0.0)) raise(ErrorCode::InvalidInput, "times must be nonnegative");
    if (d == 0) return std::vector<ComplexVector>(times.size(), ComplexVector());
    double abscissa = -std::numeric_limits<double>::infinity();
    Eigen::ComplexEigenSolver<ComplexMatrix> es(A1);
    for (Eigen::Index i = 0; i < d; ++i) abscissa = std::max(abscissa, es.eigenvalues()(i).real());
    if (omega <= 0.0) omega = std::max(abscissa + 1.0, 0.5);
    if (!(omega > abscissa)) raise(ErrorCode::InvalidInput, "omega must exceed the spectral abscissa");

    std::vector<ComplexVector> out(times.size(), ComplexVector::Zero(d));
    ComplexVector Ajx = x;
    for (int j = 0; j < terms; ++j) {
        const int k = n + j;  // term A1^j x / lambda^k  <->  A1^j x t^{k-1}/(k-1)!
        for (std::size_t i = 0; i < times.size(); ++i)
            out[i] += Ajx * (std::pow(times[i], k - 1) / std::tgamma(static_cast<double>(k)));
        Ajx = A1 * Ajx;
    }
    const ComplexVector Amx = Ajx;
    const ComplexMatrix I = ComplexMatrix::Identity(d, d);
    const int shift = n - 1 + terms;
    auto h = [&](double y) -> ComplexVector {
        const Complex lambda(omega, y);
        ComplexVector v = (lambda * I - A1).partialPivLu().solve(Amx);
        return v / std::pow(lambda, shift);
    };
    std::vector<ComplexVector> rem = bromwich_integral(h, omega, times, quad);
    for (std::size_t i = 0; i < times.size(); ++i) out[i] += rem[i];
    return out;
}

inline ComplexVector integrated_semigroup_sample(const ComplexMatrix& A1, int n, double t,
                                                 const ComplexVector& x,
                                                 const QuadratureConfig& quad, double omega = 0.0) {
    return integrated_semigroup_samples(A1, n, {t}, x, quad, omega).front();
}

}  // namespace daekit
