// Test-only oracles: brute-force and grid-search reference computations kept
// independent of the library's solver paths.

#ifndef FASWIPT_TESTS_ORACLES_HPP
#define FASWIPT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "faswipt/faswipt.hpp"

namespace oracles {

using namespace faswipt;

inline Scenario small_scenario(int M) {
    Scenario sc;
    sc.M = M;
    sc.validate();
    return sc;
}

/// Rejection-sample a feasible placement.
inline Placement random_placement(const Scenario& sc, Rng& rng) {
    Placement pl;
    int guard = 0;
    while (static_cast<int>(pl.t.size()) < sc.M) {
        const Vec2 cand(rng.uniform(-sc.tx_region, sc.tx_region),
                        rng.uniform(-sc.tx_region, sc.tx_region));
        bool ok = true;
        for (const Vec2& p : pl.t) ok = ok && (p - cand).norm() >= sc.D;
        if (ok) pl.t.push_back(cand);
        if (++guard > 100000) throw std::runtime_error("random_placement: rejection stalled");
    }
    pl.r_I = Vec2(rng.uniform(-sc.rx_region_I, sc.rx_region_I),
                  rng.uniform(-sc.rx_region_I, sc.rx_region_I));
    pl.r_E = Vec2(rng.uniform(-sc.rx_region_E, sc.rx_region_E),
                  rng.uniform(-sc.rx_region_E, sc.rx_region_E));
    return pl;
}

/// Random PSD matrix with the given trace.
inline CMatrix random_psd(int M, double trace, int rank, Rng& rng) {
    CMatrix G(M, std::max(1, rank));
    for (int i = 0; i < G.size(); ++i) G(i) = rng.cnormal(1.0);
    CMatrix W = G * G.adjoint();
    const double tr = W.trace().real();
    if (tr > 0) W *= trace / tr;
    return W;
}

/// h_i entry by direct triple-loop summation over paths.
inline Complex channel_entry_bruteforce(const PathSet& paths, const Vec2& r, const Vec2& t,
                                        double lambda) {
    Complex acc = 0.0;
    for (int s = 0; s < paths.q_r(); ++s) {
        const double rho_r = propagation_delta(r, paths.phi_r[s], paths.psi_r[s]);
        const Complex fr = phase_term(rho_r, lambda);
        for (int k = 0; k < paths.q_t(); ++k) {
            const double rho_t = propagation_delta(t, paths.phi_t[k], paths.psi_t[k]);
            acc += std::conj(fr) * paths.Sigma(s, k) * phase_term(rho_t, lambda);
        }
    }
    return acc;
}

/// Dense real quadratic form, no library helpers.
inline double quadratic_form_dense(const Eigen::RowVectorXcd& h, const CMatrix& W) {
    Complex acc = 0.0;
    for (Eigen::Index m = 0; m < h.size(); ++m)
        for (Eigen::Index j = 0; j < h.size(); ++j) acc += h(m) * W(m, j) * std::conj(h(j));
    return acc.real();
}

/// Best rank-one beamforming objective over the span of the two channels,
/// by grid search over mixing angle, relative phase, and power fraction.
struct BeamGridResult {
    double objective = -1.0;  // |h_I w|^2 of the best feasible grid point
    bool feasible = false;
};

inline BeamGridResult beamforming_grid_oracle(const Eigen::RowVectorXcd& h_I,
                                              const Eigen::RowVectorXcd& h_E, const Scenario& sc,
                                              int n_theta = 600, int n_phi = 360) {
    const CVector u = h_I.adjoint();
    const CVector v = h_E.adjoint();
    CVector b1, b2;
    bool two_dim = false;
    if (u.norm() > 1e-14) {
        b1 = u / u.norm();
        CVector res = v - (b1.adjoint() * v)(0) * b1;
        if (res.norm() > 1e-10) {
            b2 = res / res.norm();
            two_dim = true;
        }
    } else if (v.norm() > 1e-14) {
        b1 = v / v.norm();
    } else {
        BeamGridResult r;
        r.feasible = sc.Q_bar <= 0.0;
        r.objective = 0.0;
        return r;
    }

    BeamGridResult best;
    const double frac[] = {0.25, 0.5, 0.75, 1.0};
    double best_fr = 1.0, best_theta = 0.0, best_phi = 0.0;
    auto consider = [&](const CVector& w, double fr, double theta, double phi) {
        const double q = sc.tau * std::norm((h_E * w)(0));
        if (q < sc.Q_bar - 1e-12) return;
        const double obj = std::norm((h_I * w)(0));
        if (!best.feasible || obj > best.objective) {
            best.feasible = true;
            best.objective = obj;
            best_fr = fr;
            best_theta = theta;
            best_phi = phi;
        }
    };
    auto candidate = [&](double fr, double theta, double phi) {
        const double amp = std::sqrt(fr * sc.P_max);
        consider(CVector(amp * (std::cos(theta) * b1 +
                                std::sin(theta) * Complex(std::cos(phi), std::sin(phi)) * b2)),
                 fr, theta, phi);
    };
    for (double fr : frac) {
        if (!two_dim) {
            consider(CVector(std::sqrt(fr * sc.P_max) * b1), fr, 0.0, 0.0);
            continue;
        }
        for (int it = 0; it <= n_theta; ++it) {
            const double theta = 0.5 * kPi * it / n_theta;
            for (int ip = 0; ip < n_phi; ++ip) candidate(fr, theta, 2.0 * kPi * ip / n_phi);
        }
    }
    // Refinement: re-grid a small window around the coarse winner so the
    // discretization error does not dominate a 1e-3 relative comparison.
    if (two_dim && best.feasible) {
        const double dth = 2.0 * 0.5 * kPi / n_theta;
        const double dph = 2.0 * 2.0 * kPi / n_phi;
        for (int ifr = -4; ifr <= 4; ++ifr) {
            const double fr = std::clamp(best_fr + 0.0625 * ifr, 1e-6, 1.0);
            for (int it = -80; it <= 80; ++it) {
                const double theta =
                    std::clamp(best_theta + dth * it / 80.0, 0.0, 0.5 * kPi);
                for (int ip = -80; ip <= 80; ++ip)
                    candidate(fr, theta, best_phi + dph * ip / 80.0);
            }
        }
    }
    if (sc.Q_bar <= 0.0) {
        best.feasible = true;
        best.objective = std::max(best.objective, 0.0);
    }
    return best;
}

/// Two-stage grid search (coarse 400x400, then refined around the coarse
/// argmax) maximizing `objective` over the box subject to `feasible`.
/// The objectives here are concave, so refining near the coarse winner is
/// sound.
inline double grid_search_2d(double half, const std::function<double(const Vec2&)>& objective,
                             const std::function<bool(const Vec2&)>& feasible, int n = 400) {
    double best = -std::numeric_limits<double>::infinity();
    Vec2 best_pos = Vec2::Zero();
    auto scan = [&](double x0, double x1, double y0, double y1) {
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const Vec2 p(x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n);
                if (!feasible(p)) continue;
                const double val = objective(p);
                if (val > best) {
                    best = val;
                    best_pos = p;
                }
            }
    };
    scan(-half, half, -half, half);
    const double cell = 2.0 * half / n;
    const double w = 2.0 * cell;
    scan(std::max(-half, best_pos.x() - w), std::min(half, best_pos.x() + w),
         std::max(-half, best_pos.y() - w), std::min(half, best_pos.y() + w));
    return best;
}

/// Central finite differences of a scalar field on R^2.
inline Vec2 finite_difference_gradient(const std::function<double(const Vec2&)>& f, const Vec2& p,
                                       double step) {
    const Vec2 ex(step, 0.0), ey(0.0, step);
    return {(f(p + ex) - f(p - ex)) / (2.0 * step), (f(p + ey) - f(p - ey)) / (2.0 * step)};
}

}  // namespace oracles

#endif
