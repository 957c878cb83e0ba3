#ifndef FASWIPT_BEAMFORMING_HPP
#define FASWIPT_BEAMFORMING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "faswipt/channel.hpp"
#include "faswipt/rng.hpp"
#include "faswipt/types.hpp"

namespace faswipt {

struct Beamformer {
    CMatrix W;             // M x M PSD covariance
    CVector w;             // rank-one extraction, empty until randomization
    double achieved_rate = 0.0;
    double achieved_Q = 0.0;
    double sdr_gap = 0.0;  // relative gap between SDP objective and rank-one objective
    double sdp_objective = 0.0;  // h_I W h_I^H at the relaxed optimum
};

enum class SolveStatus { Ok, Infeasible };

struct BeamformingResult {
    SolveStatus status = SolveStatus::Ok;
    Beamformer beam;
    bool ok() const { return status == SolveStatus::Ok; }
};

/// Feasibility screen for the harvested-power constraint: the largest
/// attainable value under the power budget is tau * P_max * ||h_E||^2
/// (full power along h_E^H).
inline bool eh_feasible(const Eigen::RowVectorXcd& h_E, const Scenario& sc) {
    return sc.tau * sc.P_max * h_E.squaredNorm() >= sc.Q_bar;
}

namespace detail {

/// Rate-optimal beam direction under the EH constraint, restricted (without
/// loss) to span{h_I^H, h_E^H}. Parameterize the unit direction as
/// cos(theta)*u_a + sin(theta)*exp(j*arg)*u_p with u_a along h_I^H and u_p the
/// orthonormal remainder of h_E^H; the phase is aligned with h_E so the
/// harvested power g(theta) = tau*P*(cos(theta)*|ea| + sin(theta)*ep)^2 is as
/// large as possible at no cost to the rate P*||h_I||^2*cos^2(theta). g is
/// increasing on [0, theta*] while the rate is decreasing, so the optimum is
/// the smallest theta meeting the threshold, found by bisection.
inline BeamformingResult solve_beamforming_impl(const Eigen::RowVectorXcd& h_I,
                                                const Eigen::RowVectorXcd& h_E,
                                                const Scenario& sc) {
    const Eigen::Index M = h_I.size();
    BeamformingResult res;
    const CVector u = h_I.adjoint();
    const CVector v = h_E.adjoint();
    const double P = sc.P_max;
    const double nu = u.norm();
    const double nv = v.norm();

    if (sc.Q_bar > 0.0 && sc.tau * P * nv * nv < sc.Q_bar) {
        res.status = SolveStatus::Infeasible;
        res.beam.W = CMatrix::Zero(M, M);
        return res;
    }

    auto finish = [&](const CVector& w_opt) {
        res.beam.W = w_opt * w_opt.adjoint();
        res.beam.sdp_objective = std::norm((h_I * w_opt)(0));
        return res;
    };

    if (nu < 1e-300) {
        // Zero rate regardless; return the cheapest feasible covariance.
        if (sc.Q_bar <= 0.0) return finish(CVector::Zero(M));
        const double s = std::sqrt(sc.Q_bar / (sc.tau * nv * nv));
        return finish(CVector(s / nv * v));
    }
    if (P <= 0.0) return finish(CVector::Zero(M));

    const CVector u_a = u / nu;
    CVector v_perp = v - (u_a.adjoint() * v)(0) * u_a;
    const double np = v_perp.norm();
    const Complex va = (v.adjoint() * u_a)(0);  // v^H u_a
    const double ea = std::abs(va);
    const double ep = (np > 1e-12 * std::max(nv, 1.0)) ? np : 0.0;
    const CVector u_p = (ep > 0.0) ? CVector(v_perp / np) : CVector::Zero(M);

    // Harvested power at full transmit power as a function of the mixing angle.
    auto g = [&](double theta) {
        const double c = std::cos(theta), s = std::sin(theta);
        const double amp = c * ea + s * ep;
        return sc.tau * P * amp * amp;
    };
    auto beam_at = [&](double theta) -> CVector {
        const Complex phase = (ea > 0.0) ? va / ea : Complex(1.0, 0.0);
        return std::sqrt(P) * (std::cos(theta) * u_a + std::sin(theta) * phase * u_p);
    };

    if (sc.Q_bar <= 0.0 || g(0.0) >= sc.Q_bar) return finish(beam_at(0.0));  // MRT

    const double theta_star = std::atan2(ep, ea);
    if (g(theta_star) < sc.Q_bar) {
        res.status = SolveStatus::Infeasible;
        res.beam.W = CMatrix::Zero(M, M);
        return res;
    }
    double lo = 0.0, hi = theta_star;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= sc.Q_bar)
            hi = mid;
        else
            lo = mid;
    }
    return finish(beam_at(hi));  // hi is on the feasible side of the bracket
}

}  // namespace detail

/// Solve the relaxed covariance subproblem: maximize h_I W h_I^H subject to
/// Tr(W) <= P_max and tau * h_E W h_E^H >= Q_bar over PSD W. The returned W
/// is the exact optimum (a rank-one optimal covariance always exists here).
inline BeamformingResult solve_beamforming(const Eigen::RowVectorXcd& h_I,
                                           const Eigen::RowVectorXcd& h_E, const Scenario& sc) {
    if (h_I.size() != h_E.size())
        throw ConfigError("solve_beamforming: channel dimensions disagree");
    return detail::solve_beamforming_impl(h_I, h_E, sc);
}

struct RandomizationResult {
    bool feasible = false;
    CVector w;            // best feasible candidate, or best infeasible for diagnostics
    double objective = 0.0;  // |h_I w|^2 of the returned candidate
};

/// Recover a rank-one beamformer from a relaxed covariance by Gaussian
/// randomization. Candidates are rescaled toward feasibility (up to the power
/// cap when EH binds, down when power binds); the dominant eigenvector of W
/// is always among the candidates.
inline RandomizationResult gaussian_randomization(const CMatrix& W,
                                                  const Eigen::RowVectorXcd& h_I,
                                                  const Eigen::RowVectorXcd& h_E,
                                                  const Scenario& sc, int n_samples,
                                                  std::uint64_t seed) {
    if (n_samples < 1) throw ConfigError("gaussian_randomization: n_samples must be >= 1");
    const Eigen::Index M = W.rows();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(W);
    const Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    const CMatrix half = es.eigenvectors() * evals.cwiseSqrt().asDiagonal();

    RandomizationResult best;
    double best_feasible_obj = -1.0;
    double best_infeasible_score = -std::numeric_limits<double>::infinity();
    const double ctol = 1e-12 * std::max(1.0, sc.P_max);

    auto consider = [&](CVector w) {
        double pw = w.squaredNorm();
        if (pw > sc.P_max && pw > 0.0) {
            w *= std::sqrt(sc.P_max / pw);
            pw = sc.P_max;
        }
        double q = sc.tau * std::norm((h_E * w)(0));
        if (q < sc.Q_bar && q > 0.0) {
            // Scale up until the EH constraint holds, capped at full power.
            const double s2 = std::min(sc.Q_bar / q, pw > 0.0 ? sc.P_max / pw : 1.0);
            w *= std::sqrt(s2);
            pw = w.squaredNorm();
            q = sc.tau * std::norm((h_E * w)(0));
        }
        const double obj = std::norm((h_I * w)(0));
        const bool feas = pw <= sc.P_max + ctol && q >= sc.Q_bar - ctol;
        if (feas) {
            if (obj > best_feasible_obj) {
                best_feasible_obj = obj;
                best.w = w;
                best.objective = obj;
                best.feasible = true;
            }
        } else if (!best.feasible) {
            const double score = q - sc.Q_bar;  // least-violating candidate
            if (score > best_infeasible_score) {
                best_infeasible_score = score;
                best.w = w;
                best.objective = obj;
            }
        }
    };

    // Deterministic candidate: the power-scaled dominant eigenvector.
    const Eigen::Index top = M - 1;
    consider(std::sqrt(evals(top)) * es.eigenvectors().col(top));

    Rng rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        CVector g(M);
        for (Eigen::Index k = 0; k < M; ++k) g(k) = rng.cnormal(1.0);
        consider(half * g);
    }
    return best;
}

/// Convenience: solve the relaxation, randomize, and package the rank-one
/// beamformer the downstream optimization actually uses (W = w w^H).
inline BeamformingResult solve_rank_one_beamforming(const Eigen::RowVectorXcd& h_I,
                                                    const Eigen::RowVectorXcd& h_E,
                                                    const Scenario& sc, int n_samples,
                                                    std::uint64_t seed) {
    BeamformingResult res = solve_beamforming(h_I, h_E, sc);
    if (!res.ok()) return res;
    RandomizationResult rr = gaussian_randomization(res.beam.W, h_I, h_E, sc, n_samples, seed);
    if (!rr.feasible) {
        res.status = SolveStatus::Infeasible;
        return res;
    }
    res.beam.w = rr.w;
    res.beam.W = rr.w * rr.w.adjoint();
    res.beam.achieved_rate = std::log2(1.0 + rr.objective / sc.sigma2_I);
    res.beam.achieved_Q = sc.tau * std::norm((h_E * rr.w)(0));
    const double denom = std::max(res.beam.sdp_objective, 1e-300);
    res.beam.sdr_gap = std::max(0.0, (res.beam.sdp_objective - rr.objective) / denom);
    return res;
}

}  // namespace faswipt

#endif
