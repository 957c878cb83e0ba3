#ifndef FASWIPT_POSITION_HPP
#define FASWIPT_POSITION_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "faswipt/surrogate.hpp"
#include "faswipt/types.hpp"

namespace faswipt {

namespace detail {

struct Box {
    double half = 0.0;
    Vec2 project(const Vec2& p) const {
        return {std::clamp(p.x(), -half, half), std::clamp(p.y(), -half, half)};
    }
    bool contains(const Vec2& p, double tol) const {
        return std::abs(p.x()) <= half + tol && std::abs(p.y()) <= half + tol;
    }
};

struct Halfplane {  // n . (p - anchor) >= offset
    Vec2 n = Vec2::Zero();
    Vec2 anchor = Vec2::Zero();
    double offset = 0.0;
    Vec2 project(const Vec2& p) const {
        const double slack = n.dot(p - anchor) - offset;
        return slack >= 0.0 ? p : Vec2(p - slack * n);
    }
    bool contains(const Vec2& p, double tol) const { return n.dot(p - anchor) >= offset - tol; }
};

struct Disk {  // ||p - center|| <= radius
    Vec2 center = Vec2::Zero();
    double radius = 0.0;
    Vec2 project(const Vec2& p) const {
        const double d = (p - center).norm();
        return d <= radius ? p : Vec2(center + (radius / d) * (p - center));
    }
    bool contains(const Vec2& p, double tol) const {
        return (p - center).norm() <= radius + tol;
    }
};

struct ConvexSet2D {
    Box box;
    std::vector<Halfplane> halfplanes;
    std::vector<Disk> disks;

    bool contains(const Vec2& p, double tol) const {
        if (!box.contains(p, tol)) return false;
        for (const auto& h : halfplanes)
            if (!h.contains(p, tol)) return false;
        for (const auto& d : disks)
            if (!d.contains(p, tol)) return false;
        return true;
    }
};

/// Dykstra's alternating projection onto the intersection of the member
/// sets; converges to the exact Euclidean projection for convex sets.
inline Vec2 project_intersection(const ConvexSet2D& set, const Vec2& target, int max_iter = 3000) {
    const size_t n = 1 + set.halfplanes.size() + set.disks.size();
    std::vector<Vec2> increments(n, Vec2::Zero());
    Vec2 x = target;
    for (int it = 0; it < max_iter; ++it) {
        const Vec2 prev = x;
        size_t idx = 0;
        auto step = [&](auto&& proj) {
            const Vec2 y = x + increments[idx];
            x = proj(y);
            increments[idx] = y - x;
            ++idx;
        };
        step([&](const Vec2& y) { return set.box.project(y); });
        for (const auto& h : set.halfplanes) step([&](const Vec2& y) { return h.project(y); });
        for (const auto& d : set.disks) step([&](const Vec2& y) { return d.project(y); });
        if ((x - prev).norm() < 1e-13) break;
    }
    return x;
}

/// Largest s in [0,1] with origin + s*(candidate-origin) inside the set.
inline Vec2 backtrack_feasible(const ConvexSet2D& set, const Vec2& origin, const Vec2& candidate,
                               double tol) {
    if (set.contains(candidate, tol)) return candidate;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (set.contains(origin + mid * (candidate - origin), tol))
            lo = mid;
        else
            hi = mid;
    }
    return origin + lo * (candidate - origin);
}

}  // namespace detail

struct PositionSolveResult {
    Vec2 position = Vec2::Zero();
    bool fell_back = false;  // solver failed; expansion point returned
};

/// One convex transmit-position subproblem: maximize the IR surrogate over
/// the BS box, the linearized spacing halfplanes, and the ER-surrogate
/// harvested-power constraint. The surrogate is an isotropic concave
/// quadratic, so the optimum is the projection of the unconstrained
/// maximizer onto the feasible intersection.
inline PositionSolveResult solve_tx_subproblem(const SurrogateModel& model_I,
                                               const SurrogateModel& model_E,
                                               const std::vector<Vec2>& neighbors,
                                               const Scenario& sc, const Vec2& t_tilde) {
    detail::ConvexSet2D set;
    set.box.half = sc.tx_region;
    for (const Vec2& v : neighbors) {
        const DistanceLinearization lin = linearize_distance(t_tilde, v);
        set.halfplanes.push_back({lin.normal, lin.anchor, sc.D});
    }
    if (sc.Q_bar > 0.0) {
        const double threshold = sc.Q_bar / sc.tau;
        if (model_E.kappa > 0.0) {
            const Vec2 center = model_E.expansion_point + model_E.gradient / model_E.kappa;
            double r2 = model_E.gradient.squaredNorm() / (model_E.kappa * model_E.kappa) +
                        2.0 * (model_E.value_at_expansion - threshold) / model_E.kappa;
            // The incoming iterate is feasible, so r2 >= ||g/kappa||^2 up to
            // roundoff; widen to keep the expansion point inside.
            r2 = std::max(r2, (t_tilde - center).squaredNorm());
            set.disks.push_back({center, std::sqrt(std::max(r2, 0.0))});
        } else if (model_E.value_at_expansion < threshold - 1e-12) {
            return {t_tilde, true};  // constant ER surrogate below threshold
        }
    }

    if (!(model_I.kappa > 0.0)) return {t_tilde, false};  // constant objective

    const Vec2 target = model_I.expansion_point + model_I.gradient / model_I.kappa;
    Vec2 cand = detail::project_intersection(set, target);
    cand = detail::backtrack_feasible(set, t_tilde, cand, 1e-12);
    if (surrogate_eval(model_I, cand) < surrogate_eval(model_I, t_tilde)) return {t_tilde, false};
    return {cand, false};
}

/// delta_i = Sigma Xi W Xi^H Sigma^H, so that f^H delta f = h W h^H.
inline CMatrix receiver_objective_matrix(const CMatrix& W, const CMatrix& Sigma,
                                         const CMatrix& Xi) {
    if (Sigma.cols() != Xi.rows() || Xi.cols() != W.rows())
        throw ConfigError("receiver_objective_matrix: dimension mismatch");
    const CMatrix SXi = Sigma * Xi;
    CMatrix delta = SXi * W * SXi.adjoint();
    return Complex(0.5, 0.0) * (delta + delta.adjoint());  // enforce Hermitian symmetry
}

/// Exact receiver objective f^H(r) delta f(r).
inline double receiver_objective(const CMatrix& delta, const AngleSet& angles, const Vec2& r,
                                 double lambda) {
    const int q = angles.size();
    CVector f(q);
    for (int s = 0; s < q; ++s)
        f(s) = phase_term(propagation_delta(r, angles.phi[s], angles.psi[s]), lambda);
    return (f.adjoint() * delta * f)(0).real();
}

/// One convex receiver-position subproblem: maximize the two-stage surrogate
/// of f^H delta f over the receive box. Separable per coordinate, so the
/// boxed maximizer is the clamped unconstrained maximizer.
inline PositionSolveResult solve_rx_subproblem(const CMatrix& delta, const AngleSet& angles,
                                               double region_half, const Vec2& r_tilde,
                                               double lambda) {
    QuadraticFormDecomposition dec;
    dec.A = delta;
    dec.b = CVector::Zero(delta.rows());
    dec.c = 0.0;
    const SurrogateModel model = build_surrogate(dec, angles, r_tilde, lambda);
    if (!(model.kappa > 0.0)) return {r_tilde, false};
    const Vec2 target = r_tilde + model.gradient / model.kappa;
    const Vec2 cand{std::clamp(target.x(), -region_half, region_half),
                    std::clamp(target.y(), -region_half, region_half)};
    if (receiver_objective(delta, angles, cand, lambda) <
        receiver_objective(delta, angles, r_tilde, lambda))
        return {r_tilde, false};
    return {cand, false};
}

namespace detail {

/// Field-response vector at `pos` for a set of path angles.
inline CVector field_vector(const AngleSet& angles, const Vec2& pos, double lambda) {
    const int n = angles.size();
    CVector xi(n);
    for (int k = 0; k < n; ++k)
        xi(k) = phase_term(propagation_delta(pos, angles.phi[k], angles.psi[k]), lambda);
    return xi;
}

}  // namespace detail

/// Deterministic coarse scan of the exact transmit-antenna objective over the
/// region, restricted to points satisfying the exact constraints. Returns the
/// best candidate (the current position if nothing beats it); used to pick a
/// good start for the local SCA, whose own steps stay within one basin.
inline Vec2 scan_tx_candidates(const QuadraticFormDecomposition& dec_I,
                               const QuadraticFormDecomposition& dec_E,
                               const AngleSet& angles_I, const AngleSet& angles_E,
                               const std::vector<Vec2>& neighbors, const Scenario& sc,
                               const Vec2& t_cur) {
    const double eh_threshold = sc.Q_bar / sc.tau;
    const int n = std::clamp(static_cast<int>(std::round(20.0 * sc.tx_region / sc.lambda)), 1, 60);
    Vec2 best = t_cur;
    double best_val = dec_I.eval(detail::field_vector(angles_I, t_cur, sc.lambda));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const Vec2 t(-sc.tx_region + 2.0 * sc.tx_region * i / n,
                         -sc.tx_region + 2.0 * sc.tx_region * j / n);
            const double val = dec_I.eval(detail::field_vector(angles_I, t, sc.lambda));
            if (val <= best_val) continue;
            bool ok = true;
            for (const Vec2& v : neighbors)
                if ((t - v).norm() < sc.D) {
                    ok = false;
                    break;
                }
            if (ok && sc.Q_bar > 0.0 &&
                dec_E.eval(detail::field_vector(angles_E, t, sc.lambda)) < eh_threshold)
                ok = false;
            if (ok) {
                best = t;
                best_val = val;
            }
        }
    }
    return best;
}

/// Same coarse scan for a receiver (box constraint only).
inline Vec2 scan_rx_candidates(const CMatrix& delta, const AngleSet& angles, double region_half,
                               const Vec2& r_cur, double lambda) {
    const int n = std::clamp(static_cast<int>(std::round(20.0 * region_half / lambda)), 1, 60);
    Vec2 best = r_cur;
    double best_val = receiver_objective(delta, angles, r_cur, lambda);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const Vec2 r(-region_half + 2.0 * region_half * i / n,
                         -region_half + 2.0 * region_half * j / n);
            const double val = receiver_objective(delta, angles, r, lambda);
            if (val > best_val) {
                best = r;
                best_val = val;
            }
        }
    }
    return best;
}

/// Inner SCA loop for one transmit antenna: rebuild the surrogates at the
/// latest iterate and re-solve until the exact-objective improvement drops
/// below `tol` or `max_inner` iterations. The quadratic minorant is very
/// conservative (its curvature is a global bound), so each accepted step is
/// extrapolated along its own direction for as long as the exact objective
/// keeps improving and the exact constraints (box, pairwise spacing,
/// harvested-power quadratic) stay satisfied.
inline Vec2 sca_optimize_tx_antenna(const QuadraticFormDecomposition& dec_I,
                                    const QuadraticFormDecomposition& dec_E,
                                    const AngleSet& angles_I, const AngleSet& angles_E,
                                    const std::vector<Vec2>& neighbors, const Scenario& sc,
                                    Vec2 t_m, double tol = 1e-7, int max_inner = 200) {
    const double eh_threshold = sc.Q_bar / sc.tau;
    auto objective = [&](const Vec2& t) {
        return dec_I.eval(detail::field_vector(angles_I, t, sc.lambda));
    };
    auto exact_feasible = [&](const Vec2& t) {
        if (std::abs(t.x()) > sc.tx_region || std::abs(t.y()) > sc.tx_region) return false;
        for (const Vec2& v : neighbors)
            if ((t - v).norm() < sc.D) return false;
        if (sc.Q_bar > 0.0 &&
            dec_E.eval(detail::field_vector(angles_E, t, sc.lambda)) < eh_threshold)
            return false;
        return true;
    };
    for (int q = 0; q < max_inner; ++q) {
        const SurrogateModel model_I = build_surrogate(dec_I, angles_I, t_m, sc.lambda);
        const SurrogateModel model_E = build_surrogate(dec_E, angles_E, t_m, sc.lambda);
        const PositionSolveResult step = solve_tx_subproblem(model_I, model_E, neighbors, sc, t_m);
        const double before = objective(t_m);
        Vec2 best = step.position;
        double best_val = objective(best);
        const Vec2 dir = step.position - t_m;
        if (dir.norm() > 0.0) {
            for (double s = 2.0; s <= 64.0; s *= 2.0) {
                const Vec2 cand = t_m + s * dir;
                if (!exact_feasible(cand)) break;
                const double val = objective(cand);
                if (val <= best_val) break;
                best = cand;
                best_val = val;
            }
        }
        if (best_val <= before) break;
        t_m = best;
        if (best_val - before < tol) break;
    }
    return t_m;
}

/// Inner SCA loop for one receiver, with the same exact-objective
/// extrapolation (the only constraint here is the receive box).
inline Vec2 sca_optimize_rx(const CMatrix& delta, const AngleSet& angles, double region_half,
                            Vec2 r, double lambda, double tol = 1e-7, int max_inner = 200) {
    auto objective = [&](const Vec2& p) { return receiver_objective(delta, angles, p, lambda); };
    for (int q = 0; q < max_inner; ++q) {
        const double before = objective(r);
        const PositionSolveResult step = solve_rx_subproblem(delta, angles, region_half, r, lambda);
        Vec2 best = step.position;
        double best_val = objective(best);
        const Vec2 dir = step.position - r;
        if (dir.norm() > 0.0) {
            for (double s = 2.0; s <= 64.0; s *= 2.0) {
                const Vec2 cand = r + s * dir;
                if (std::abs(cand.x()) > region_half || std::abs(cand.y()) > region_half) break;
                const double val = objective(cand);
                if (val <= best_val) break;
                best = cand;
                best_val = val;
            }
        }
        if (best_val <= before) break;
        r = best;
        if (best_val - before < tol) break;
    }
    return r;
}

}  // namespace faswipt

#endif
