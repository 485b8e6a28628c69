#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "daekit/core.hpp"

namespace daekit {

/// Discretization of a Bromwich line integral over Re(lambda) = omega.
struct QuadratureConfig {
    double initial_half_length = 32.0;  // starting truncation T of [omega - iT, omega + iT]
    int nodes_per_panel = 16;
    double tolerance = 1e-8;
    int max_refinements = 16;
    double panel_length = 0.0;  // 0 selects 2*omega
};

struct QuadratureStats {
    double half_length = 0.0;
    double panel_length = 0.0;
    double tail_estimate = 0.0;
    double last_difference = 0.0;
    long evaluations = 0;
};

struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) raise(ErrorCode::InvalidInput, "Gauss-Legendre rule needs at least one node");
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

namespace detail {

template <typename F>
std::vector<ComplexVector> integrate_panels(F& h, double omega, const std::vector<double>& times,
                                            double half_length, double panel_length,
                                            const GaussLegendreRule& rule, long& evaluations) {
    std::vector<ComplexVector> acc(times.size());
    const long panels = static_cast<long>(std::llround(2.0 * half_length / panel_length));
    const double half = 0.5 * panel_length;
    for (long k = 0; k < panels; ++k) {
        const double center = -half_length + (static_cast<double>(k) + 0.5) * panel_length;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double y = center + half * rule.nodes[q];
            ComplexVector v = h(y);
            ++evaluations;
            const double w = half * rule.weights[q];
            for (std::size_t j = 0; j < times.size(); ++j) {
                const Complex phase = std::exp(Complex(omega, y) * times[j]);
                if (acc[j].size() == 0) acc[j] = ComplexVector::Zero(v.size());
                acc[j] += (w * phase) * v;
            }
        }
    }
    for (auto& a : acc) a /= 2.0 * std::numbers::pi;
    return acc;
}

}  // namespace detail

/// Computes (1/2 pi) * integral over y of exp((omega + iy) t) h(y) for every t.
///
/// The truncation T doubles until an algebraic-decay tail estimate drops below
/// tolerance/10; then the panel length halves until two passes agree to tolerance.
template <typename F>
std::vector<ComplexVector> bromwich_integral(F&& h, double omega, const std::vector<double>& times,
                                             const QuadratureConfig& cfg,
                                             QuadratureStats* stats = nullptr) {
    if (!(omega > 0.0)) raise(ErrorCode::InvalidInput, "Bromwich abscissa must be positive");
    if (!(cfg.tolerance > 0.0) || cfg.max_refinements < 1 || cfg.nodes_per_panel < 1 ||
        !(cfg.initial_half_length > 0.0))
        raise(ErrorCode::InvalidInput, "invalid quadrature configuration");
    if (times.empty()) return {};
    double tmax = 0.0;
    for (double t : times) tmax = std::max(tmax, t);

    double L = cfg.panel_length > 0.0 ? cfg.panel_length : 2.0 * omega;
    double T = L * std::ceil(cfg.initial_half_length / L);
    const double growth = std::exp(omega * tmax) / (2.0 * std::numbers::pi);
    QuadratureStats st;

    auto tail = [&](double Tc) {
        double total = 0.0;
        for (double sgn : {-1.0, 1.0}) {
            double a = h(sgn * Tc).norm();
            double b = h(sgn * 2.0 * Tc).norm();
            st.evaluations += 2;
            if (a == 0.0 && b == 0.0) continue;
            if (!(b > 0.0)) b = a * 1e-18;
            double s = std::log2(a / b);
            if (!(s > 1.05)) return std::numeric_limits<double>::infinity();
            total += a * Tc / (s - 1.0);
        }
        return growth * total;
    };

    bool truncated = false;
    for (int r = 0; r <= cfg.max_refinements; ++r) {
        st.tail_estimate = tail(T);
        if (st.tail_estimate <= cfg.tolerance / 10.0) {
            truncated = true;
            break;
        }
        if (r < cfg.max_refinements) T *= 2.0;
    }
    if (!truncated) {
        raise(ErrorCode::QuadratureNotConverged,
              "integrand tail did not decay below tolerance; truncation reached T = " +
                  std::to_string(T) + " with tail estimate " + std::to_string(st.tail_estimate));
    }

    const GaussLegendreRule rule = gauss_legendre(cfg.nodes_per_panel);
    std::vector<ComplexVector> prev =
        detail::integrate_panels(h, omega, times, T, L, rule, st.evaluations);
    for (int r = 0; r < cfg.max_refinements; ++r) {
        L *= 0.5;
        std::vector<ComplexVector> cur =
            detail::integrate_panels(h, omega, times, T, L, rule, st.evaluations);
        double diff = 0.0;
        for (std::size_t j = 0; j < times.size(); ++j)
            diff = std::max(diff, (cur[j] - prev[j]).cwiseAbs().maxCoeff());
        st.last_difference = diff;
        prev = std::move(cur);
        if (diff <= cfg.tolerance) {
            st.half_length = T;
            st.panel_length = L;
            if (stats) *stats = st;
            return prev;
        }
    }
    raise(ErrorCode::QuadratureNotConverged,
          "panel refinement did not stabilize; last difference " +
              std::to_string(st.last_difference));
}

}  // namespace daekit
