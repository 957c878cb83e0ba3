#ifndef FASWIPT_TYPES_HPP
#define FASWIPT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace faswipt {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;

/// Thrown for malformed scenarios, configs, and dimension mismatches.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Link { IR, ER };

inline const char* to_string(Link link) { return link == Link::IR ? "IR" : "ER"; }

/// Static problem instance. All powers are linear watts.
struct Scenario {
    int M = 4;                 // transmit fluid antennas
    double lambda = 1.0;       // carrier wavelength [m]
    double tx_region = 2.0;    // half-extent A/2 of the square BS region [m]
    double rx_region_I = 1.0;  // half-extent of the IR region [m]
    double rx_region_E = 1.0;  // half-extent of the ER region [m]
    double D = 0.5;            // minimum inter-antenna distance at the BS [m]
    double tau = 0.5;          // energy harvesting efficiency
    double P_max = 3.16227766016838;  // transmit power budget [W]
    double Q_bar = 1.0;               // harvested-power threshold [W]
    double sigma2_I = 1.0;            // IR noise power [W]
    double sigma2_E = 1.0;            // ER noise power [W]
    int q_tI = 3, q_tE = 3;           // transmit path counts
    int q_rI = 3, q_rE = 3;           // receive path counts
    double nu = 1.0;                  // LoS-to-NLoS power ratio

    /// Number of points a D-spaced grid can pack into the BS region.
    int packing_capacity() const {
        const int per_side = static_cast<int>(std::floor(2.0 * tx_region / D)) + 1;
        return per_side * per_side;
    }

    void validate() const {
        if (M < 2) throw ConfigError("scenario: M must be >= 2");
        if (!(lambda > 0)) throw ConfigError("scenario: lambda must be > 0");
        if (!(tx_region > 0) || !(rx_region_I > 0) || !(rx_region_E > 0))
            throw ConfigError("scenario: region extents must be > 0");
        if (!(D > 0)) throw ConfigError("scenario: D must be > 0");
        if (!(tau > 0) || tau > 1) throw ConfigError("scenario: tau must be in (0,1]");
        if (!(P_max >= 0)) throw ConfigError("scenario: P_max must be >= 0");
        if (Q_bar < 0) throw ConfigError("scenario: Q_bar must be >= 0");
        if (!(sigma2_I > 0) || !(sigma2_E > 0))
            throw ConfigError("scenario: noise powers must be > 0");
        if (q_tI < 1 || q_tE < 1 || q_rI < 1 || q_rE < 1)
            throw ConfigError("scenario: path counts must be >= 1");
        if (!(nu > 0)) throw ConfigError("scenario: nu must be > 0");
        if (packing_capacity() < M)
            throw ConfigError("scenario: region cannot pack " + std::to_string(M) +
                              " antennas at spacing D");
    }
};

/// Per-link path geometry and complex path responses.
struct PathSet {
    Link link = Link::IR;
    std::vector<double> phi_t, psi_t;  // elevation/azimuth AoD, one per transmit path
    std::vector<double> phi_r, psi_r;  // elevation/azimuth AoA, one per receive path
    CMatrix Sigma;                     // q_r x q_t path-response matrix

    int q_t() const { return static_cast<int>(phi_t.size()); }
    int q_r() const { return static_cast<int>(phi_r.size()); }

    void validate() const {
        if (phi_t.size() != psi_t.size() || phi_r.size() != psi_r.size())
            throw ConfigError("pathset: angle list lengths disagree");
        if (Sigma.rows() != q_r() || Sigma.cols() != q_t())
            throw ConfigError("pathset: Sigma dimensions do not match path counts");
        auto in_range = [](double a) { return a >= 0.0 && a <= kPi; };
        for (double a : phi_t)
            if (!in_range(a)) throw ConfigError("pathset: transmit elevation out of [0,pi]");
        for (double a : psi_t)
            if (!in_range(a)) throw ConfigError("pathset: transmit azimuth out of [0,pi]");
        for (double a : phi_r)
            if (!in_range(a)) throw ConfigError("pathset: receive elevation out of [0,pi]");
        for (double a : psi_r)
            if (!in_range(a)) throw ConfigError("pathset: receive azimuth out of [0,pi]");
    }
};

/// Positions of all movable antennas.
struct Placement {
    std::vector<Vec2> t;  // M transmit positions
    Vec2 r_I = Vec2::Zero();
    Vec2 r_E = Vec2::Zero();

    /// True iff all region and inter-antenna distance constraints hold.
    bool feasible(const Scenario& sc, double tol = 1e-8) const {
        if (static_cast<int>(t.size()) != sc.M) return false;
        auto in_box = [tol](const Vec2& p, double half) {
            return std::abs(p.x()) <= half + tol && std::abs(p.y()) <= half + tol;
        };
        for (const Vec2& p : t)
            if (!in_box(p, sc.tx_region)) return false;
        if (!in_box(r_I, sc.rx_region_I) || !in_box(r_E, sc.rx_region_E)) return false;
        for (size_t m = 0; m < t.size(); ++m)
            for (size_t v = m + 1; v < t.size(); ++v)
                if ((t[m] - t[v]).norm() < sc.D - tol) return false;
        return true;
    }
};

/// Channels of both links plus the field-response factors they were built from.
struct ChannelPair {
    Eigen::RowVectorXcd h_I, h_E;  // length M
    CMatrix Xi_I, Xi_E;            // q_t x M field-response matrices
    CVector f_I, f_E;              // length q_r receive field-response vectors
};

}  // namespace faswipt

#endif
