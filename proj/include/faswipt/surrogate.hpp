#ifndef FASWIPT_SURROGATE_HPP
#define FASWIPT_SURROGATE_HPP

#include <cmath>
#include <span>
#include <vector>

#include "faswipt/channel.hpp"
#include "faswipt/types.hpp"

namespace faswipt {

/// Elevation/azimuth angles of the paths a field-response vector runs over.
struct AngleSet {
    std::span<const double> phi;
    std::span<const double> psi;

    static AngleSet transmit(const PathSet& p) { return {p.phi_t, p.psi_t}; }
    static AngleSet receive(const PathSet& p) { return {p.phi_r, p.psi_r}; }
    int size() const { return static_cast<int>(phi.size()); }
};

/// Exact per-antenna quadratic form: as a function of the field-response
/// vector xi of one antenna, h W h^H = xi^H A xi + 2 Re{b^H xi} + c.
struct QuadraticFormDecomposition {
    CMatrix A;       // PSD self-term coefficient
    CVector b;       // cross-term vector
    double c = 0.0;  // constant contribution of the other antennas

    double eval(const CVector& xi) const {
        const Complex quad = (xi.adjoint() * A * xi)(0);
        const Complex cross = (b.adjoint() * xi)(0);
        return quad.real() + 2.0 * cross.real() + c;
    }
};

/// Decompose h_i W h_i^H around antenna m. With a = Sigma^H f(r_i) and
/// gamma_j = a^H xi(t_j), the self term is W[m,m] * a a^H, the cross term
/// collects sum_{j != m} conj(W[m,j]) gamma_j against a, and c is the
/// quadratic form over the remaining antennas.
inline QuadraticFormDecomposition decompose_objective(const CMatrix& W, const CVector& f,
                                                      const PathSet& paths, const CMatrix& Xi,
                                                      int m) {
    const Eigen::Index M = W.rows();
    if (m < 0 || m >= M) throw std::out_of_range("decompose_objective: antenna index");
    if (Xi.cols() != M || Xi.rows() != paths.q_t())
        throw ConfigError("decompose_objective: Xi dimensions");
    const CVector a = paths.Sigma.adjoint() * f;  // q_t
    QuadraticFormDecomposition dec;
    dec.A = W(m, m).real() * (a * a.adjoint());

    Complex s = 0.0;  // sum_{j != m} conj(W[m,j]) * gamma_j
    CVector gamma(M);
    for (Eigen::Index j = 0; j < M; ++j) gamma(j) = (a.adjoint() * Xi.col(j))(0);
    for (Eigen::Index j = 0; j < M; ++j)
        if (j != m) s += std::conj(W(m, j)) * gamma(j);
    dec.b = s * a;

    Complex c = 0.0;
    for (Eigen::Index j = 0; j < M; ++j)
        for (Eigen::Index k = 0; k < M; ++k)
            if (j != m && k != m) c += gamma(j) * W(j, k) * std::conj(gamma(k));
    dec.c = std::max(0.0, c.real());
    return dec;
}

/// Concave quadratic minorant of the per-antenna objective, tangent at the
/// expansion point. Built in two stages: linearize the convex form
/// xi^H A xi at xi~ (coefficients d = A xi~ + b), then lower-bound the
/// resulting phase sum 2 Re{d^H xi(t)} by its second-order model with
/// isotropic curvature kappa = (8 pi^2 / lambda^2) * sum_k |rho_k|,
/// rho_k = 2 conj(d_k).
struct SurrogateModel {
    Vec2 expansion_point = Vec2::Zero();
    CVector rho_coeffs;               // rho_k = 2 conj(d_k)
    double value_at_expansion = 0.0;  // equals the exact objective at t~
    Vec2 gradient = Vec2::Zero();
    double kappa = 0.0;
    double affine_offset = 0.0;  // c - xi~^H A xi~, folded constant
};

inline SurrogateModel build_surrogate(const QuadraticFormDecomposition& dec,
                                      const AngleSet& angles, const Vec2& t_tilde,
                                      double lambda) {
    const int q = angles.size();
    SurrogateModel model;
    model.expansion_point = t_tilde;

    CVector xi(q);
    std::vector<double> theta(q);  // 2 pi rho_k(t~) / lambda
    for (int k = 0; k < q; ++k) {
        const double rho = propagation_delta(t_tilde, angles.phi[k], angles.psi[k]);
        theta[k] = 2.0 * kPi * rho / lambda;
        xi(k) = Complex(std::cos(theta[k]), std::sin(theta[k]));
    }
    const CVector d = dec.A * xi + dec.b;
    model.rho_coeffs = 2.0 * d.conjugate();
    model.affine_offset = dec.c - (xi.adjoint() * dec.A * xi)(0).real();

    double g_value = 0.0, gx = 0.0, gy = 0.0, abs_sum = 0.0;
    for (int k = 0; k < q; ++k) {
        const double amp = 2.0 * std::abs(d(k));
        const double phase = theta[k] - std::arg(d(k));
        g_value += amp * std::cos(phase);
        const double dk = -amp * std::sin(phase) * 2.0 * kPi / lambda;
        gx += dk * std::sin(angles.phi[k]) * std::cos(angles.psi[k]);
        gy += dk * std::cos(angles.phi[k]);
        abs_sum += amp;
    }
    model.value_at_expansion = g_value + model.affine_offset;
    model.gradient = Vec2(gx, gy);
    model.kappa = 8.0 * kPi * kPi / (lambda * lambda) * abs_sum;
    return model;
}

/// Quadratic surrogate value at a candidate position.
inline double surrogate_eval(const SurrogateModel& model, const Vec2& t) {
    const Vec2 dt = t - model.expansion_point;
    return model.value_at_expansion + model.gradient.dot(dt) - 0.5 * model.kappa * dt.squaredNorm();
}

/// Affine lower bound on ||t - t_v|| anchored at the current iterate t~_m.
/// beta(t) <= ||t - t_v|| by Cauchy-Schwarz, so beta(t) >= D certifies the
/// true spacing constraint.
struct DistanceLinearization {
    Vec2 normal = Vec2::Zero();  // unit vector (t~_m - t_v)/||.||
    Vec2 anchor = Vec2::Zero();  // t_v

    double eval(const Vec2& t) const { return normal.dot(t - anchor); }
};

inline DistanceLinearization linearize_distance(const Vec2& t_tilde_m, const Vec2& t_v) {
    const Vec2 diff = t_tilde_m - t_v;
    const double n = diff.norm();
    if (n <= 0.0)
        throw std::invalid_argument("linearize_distance: coincident expansion point and neighbor");
    return {diff / n, t_v};
}

}  // namespace faswipt

#endif
