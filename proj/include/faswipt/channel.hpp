#ifndef FASWIPT_CHANNEL_HPP
#define FASWIPT_CHANNEL_HPP

#include <cmath>
#include <utility>

#include "faswipt/rng.hpp"
#include "faswipt/types.hpp"

namespace faswipt {

/// Propagation distance difference of a path seen from `pos`, relative to the
/// region origin: x*sin(phi)*cos(psi) + y*cos(phi).
inline double propagation_delta(const Vec2& pos, double phi, double psi) {
    return pos.x() * std::sin(phi) * std::cos(psi) + pos.y() * std::cos(phi);
}

/// Unit-modulus phase term exp(j*2*pi*rho/lambda).
inline Complex phase_term(double rho, double lambda) {
    const double arg = 2.0 * kPi * rho / lambda;
    return {std::cos(arg), std::sin(arg)};
}

/// Transmit field-response vector xi(t), length q_t.
inline CVector transmit_field_vector(const Vec2& t, const PathSet& paths, double lambda) {
    CVector xi(paths.q_t());
    for (int k = 0; k < paths.q_t(); ++k)
        xi(k) = phase_term(propagation_delta(t, paths.phi_t[k], paths.psi_t[k]), lambda);
    return xi;
}

/// Transmit field-response matrix Xi, one column per antenna, q_t x M.
inline CMatrix transmit_field_matrix(const Placement& placement, const PathSet& paths,
                                     double lambda) {
    CMatrix Xi(paths.q_t(), static_cast<Eigen::Index>(placement.t.size()));
    for (size_t m = 0; m < placement.t.size(); ++m)
        Xi.col(static_cast<Eigen::Index>(m)) = transmit_field_vector(placement.t[m], paths, lambda);
    return Xi;
}

/// Receive field-response vector f(r), length q_r.
inline CVector receive_field_vector(const Vec2& r, const PathSet& paths, double lambda) {
    CVector f(paths.q_r());
    for (int s = 0; s < paths.q_r(); ++s)
        f(s) = phase_term(propagation_delta(r, paths.phi_r[s], paths.psi_r[s]), lambda);
    return f;
}

/// Channel vectors h_i = f^H(r_i) * Sigma_i * Xi_i(t) for both links.
inline ChannelPair assemble_channels(const Scenario& sc, const Placement& placement,
                                     const PathSet& paths_I, const PathSet& paths_E) {
    paths_I.validate();
    paths_E.validate();
    if (static_cast<int>(placement.t.size()) != sc.M)
        throw ConfigError("assemble_channels: placement has wrong antenna count");
    ChannelPair ch;
    ch.Xi_I = transmit_field_matrix(placement, paths_I, sc.lambda);
    ch.Xi_E = transmit_field_matrix(placement, paths_E, sc.lambda);
    ch.f_I = receive_field_vector(placement.r_I, paths_I, sc.lambda);
    ch.f_E = receive_field_vector(placement.r_E, paths_E, sc.lambda);
    ch.h_I = ch.f_I.adjoint() * paths_I.Sigma * ch.Xi_I;
    ch.h_E = ch.f_E.adjoint() * paths_E.Sigma * ch.Xi_E;
    return ch;
}

namespace detail {

/// Real value of the Hermitian quadratic form h W h^H, checking that the
/// imaginary residue stays within relative tolerance before clamping at 0.
inline double quadratic_form(const Eigen::RowVectorXcd& h, const CMatrix& W) {
    const Complex val = (h * W * h.adjoint())(0, 0);
    const double scale = std::max(1e-300, W.trace().real() * h.squaredNorm());
    if (std::abs(val.imag()) > 1e-9 * std::max(scale, std::abs(val.real())))
        throw std::invalid_argument("quadratic_form: non-negligible imaginary residue");
    return std::max(0.0, val.real());
}

inline void require_psd(const CMatrix& W) {
    if (W.rows() != W.cols()) throw std::invalid_argument("W must be square");
    const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
    if ((W - W.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("W must be Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(W, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9 * scale)
        throw std::invalid_argument("W must be positive semidefinite");
}

}  // namespace detail

/// Communication rate log2(1 + h_I W h_I^H / sigma2_I) in bits/s/Hz.
inline double rate(const Eigen::RowVectorXcd& h_I, const CMatrix& W, double sigma2_I) {
    if (!(sigma2_I > 0)) throw std::invalid_argument("rate: sigma2_I must be > 0");
    detail::require_psd(W);
    return std::log2(1.0 + detail::quadratic_form(h_I, W) / sigma2_I);
}

/// Harvested power tau * h_E W h_E^H in watts (linear EH model).
inline double harvested_power(const Eigen::RowVectorXcd& h_E, const CMatrix& W, double tau) {
    if (!(tau > 0) || tau > 1) throw std::invalid_argument("harvested_power: tau must be in (0,1]");
    detail::require_psd(W);
    return tau * detail::quadratic_form(h_E, W);
}

namespace detail {

inline PathSet sample_link_paths(const Scenario& sc, Link link, Rng& rng) {
    const int q_t = (link == Link::IR) ? sc.q_tI : sc.q_tE;
    const int q_r = (link == Link::IR) ? sc.q_rI : sc.q_rE;
    if (q_t != q_r)
        throw ConfigError("sample_scenario_paths: diagonal path model requires q_t == q_r");
    PathSet p;
    p.link = link;
    p.phi_t.resize(q_t);
    p.psi_t.resize(q_t);
    p.phi_r.resize(q_r);
    p.psi_r.resize(q_r);
    for (int k = 0; k < q_t; ++k) {
        p.phi_t[k] = rng.uniform(0.0, kPi);
        p.psi_t[k] = rng.uniform(0.0, kPi);
    }
    for (int s = 0; s < q_r; ++s) {
        p.phi_r[s] = rng.uniform(0.0, kPi);
        p.psi_r[s] = rng.uniform(0.0, kPi);
    }
    p.Sigma = CMatrix::Zero(q_r, q_t);
    p.Sigma(0, 0) = rng.cnormal(sc.nu / (sc.nu + 1.0));
    for (int k = 1; k < q_r; ++k)
        p.Sigma(k, k) = rng.cnormal(1.0 / ((sc.nu + 1.0) * (q_r - 1)));
    return p;
}

}  // namespace detail

/// Draw one geometric-channel realization: i.i.d. angles uniform on [0,pi]
/// and diagonal path responses with LoS/NLoS power split nu:1.
inline std::pair<PathSet, PathSet> sample_scenario_paths(const Scenario& sc, std::uint64_t seed) {
    Rng rng(seed);
    PathSet pI = detail::sample_link_paths(sc, Link::IR, rng);
    PathSet pE = detail::sample_link_paths(sc, Link::ER, rng);
    return {std::move(pI), std::move(pE)};
}

}  // namespace faswipt

#endif
