#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "bell/scenario.hpp"

namespace bell {

namespace pauli {

inline const Eigen::Matrix2cd& identity() {
    static const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    return m;
}
inline const Eigen::Matrix2cd& sigma(int i) {
    using namespace std::complex_literals;
    static const Eigen::Matrix2cd sx = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    static const Eigen::Matrix2cd sy = (Eigen::Matrix2cd() << 0, -1i, 1i, 0).finished();
    static const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    static const Eigen::Matrix2cd* all[3] = {&sx, &sy, &sz};
    return *all[i];
}

}  // namespace pauli

/// A projective qubit measurement direction: a unit vector on the Bloch
/// sphere. The observable is axis . sigma; |H> is the +1 eigenstate of
/// sigma_z.
struct BlochSetting {
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();

    Eigen::Matrix2cd observable() const {
        return axis.x() * pauli::sigma(0) + axis.y() * pauli::sigma(1) + axis.z() * pauli::sigma(2);
    }
};

/// Normalizes a direction into a BlochSetting; throws on the zero vector.
inline BlochSetting bloch(double x, double y, double z) {
    Eigen::Vector3d v(x, y, z);
    double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidObservable("Bloch vector must be nonzero");
    return BlochSetting{v / n};
}

inline BlochSetting bloch(const Eigen::Vector3d& v) { return bloch(v.x(), v.y(), v.z()); }

/// Linear polarization at angle phi (radians) maps to Bloch angle 2*phi in
/// the x-z plane.
inline BlochSetting bloch_from_polarization_angle(double phi) {
    return BlochSetting{Eigen::Vector3d(std::sin(2 * phi), 0.0, std::cos(2 * phi))};
}

inline void validate(const BlochSetting& s) {
    if (std::abs(s.axis.norm() - 1.0) > kArithmeticTol)
        throw InvalidObservable("Bloch setting is not a unit vector");
}

/// A two-qubit state: either the pure family cos(theta)|HH> + sin(theta)|VV>
/// by its angle, or a general 4x4 density operator (basis order HH, HV, VH,
/// VV).
class TwoQubitState {
  public:
    static TwoQubitState pure_angle(double theta) {
        if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
            throw GuardError("pure state angle must lie in [0, pi/2]");
        TwoQubitState s;
        s.theta_ = theta;
        return s;
    }

    static TwoQubitState from_density(const Eigen::Matrix4cd& rho) {
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kArithmeticTol)
            throw GuardError("density operator is not Hermitian");
        if (std::abs(rho.trace().real() - 1.0) > kArithmeticTol ||
            std::abs(rho.trace().imag()) > kArithmeticTol)
            throw GuardError("density operator must have unit trace");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw GuardError("density operator has a negative eigenvalue");
        TwoQubitState s;
        s.rho_ = rho;
        return s;
    }

    static TwoQubitState maximally_entangled() { return pure_angle(std::numbers::pi / 4); }

    bool is_pure_angle() const { return theta_.has_value(); }
    double angle() const { return theta_.value(); }

    Eigen::Matrix4cd density() const {
        if (theta_) {
            Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
            psi(0) = std::cos(*theta_);
            psi(3) = std::sin(*theta_);
            return psi * psi.adjoint();
        }
        return rho_;
    }

  private:
    TwoQubitState() = default;
    std::optional<double> theta_;
    Eigen::Matrix4cd rho_ = Eigen::Matrix4cd::Zero();
};

inline Eigen::Matrix4cd density_of(const TwoQubitState& s) { return s.density(); }

/// Source imperfection abstraction: visibility V mixes the state with noise,
/// of which a fraction w is white (identity/4) and 1-w is dephasing in the
/// H/V basis (removal of the |HH><VV| coherences). angle_jitter is the
/// standard deviation (radians) of per-setting measurement-direction error
/// used by the simulator.
struct NoiseModel {
    double visibility = 1.0;
    double white_fraction = 0.0;
    double angle_jitter = 0.0;
};

inline void validate(const NoiseModel& nm) {
    if (!(nm.visibility >= 0.0 && nm.visibility <= 1.0))
        throw GuardError("visibility must lie in [0,1]");
    if (!(nm.white_fraction >= 0.0 && nm.white_fraction <= 1.0))
        throw GuardError("white_fraction must lie in [0,1]");
    if (!(nm.angle_jitter >= 0.0)) throw GuardError("angle_jitter must be >= 0");
}

/// rho' = V rho + (1-V) [ w I/4 + (1-w) D(rho) ], D zeroing the HH-VV
/// coherences.
inline TwoQubitState apply_noise(const TwoQubitState& s, const NoiseModel& nm) {
    validate(nm);
    Eigen::Matrix4cd rho = s.density();
    Eigen::Matrix4cd dephased = rho;
    dephased(0, 3) = 0.0;
    dephased(3, 0) = 0.0;
    Eigen::Matrix4cd out = nm.visibility * rho +
                           (1.0 - nm.visibility) *
                               (nm.white_fraction * 0.25 * Eigen::Matrix4cd::Identity() +
                                (1.0 - nm.white_fraction) * dephased);
    // symmetrize away rounding before validation
    out = 0.5 * (out + out.adjoint().eval());
    return TwoQubitState::from_density(out);
}

/// A state plus per-setting measurement directions for both parties.
struct Strategy {
    TwoQubitState state = TwoQubitState::maximally_entangled();
    std::vector<BlochSetting> a;
    std::vector<BlochSetting> b;

    Scenario scenario() const { return Scenario{static_cast<int>(a.size()), static_cast<int>(b.size())}; }
};

inline void validate(const Strategy& st) {
    if (st.a.empty() || st.b.empty()) throw GuardError("strategy needs settings for both parties");
    for (const auto& v : st.a) validate(v);
    for (const auto& v : st.b) validate(v);
}

/// Pauli expectations of a two-qubit density operator: the correlation
/// tensor T_ij = Tr[rho sigma_i x sigma_j] and the local Bloch vectors.
/// Every correlator of a strategy is bilinear in these.
struct CorrelationData {
    Eigen::Matrix3d T = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rA = Eigen::Vector3d::Zero();
    Eigen::Vector3d rB = Eigen::Vector3d::Zero();
};

/// Kronecker product of two one-qubit operators, basis order HH, HV, VH, VV.
inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

inline CorrelationData correlation_data(const Eigen::Matrix4cd& rho) {
    struct PauliBasis {
        Eigen::Matrix4cd onA[3], onB[3], joint[3][3];
        PauliBasis() {
            for (int i = 0; i < 3; ++i) {
                onA[i] = kron2(pauli::sigma(i), pauli::identity());
                onB[i] = kron2(pauli::identity(), pauli::sigma(i));
                for (int j = 0; j < 3; ++j) joint[i][j] = kron2(pauli::sigma(i), pauli::sigma(j));
            }
        }
    };
    static const PauliBasis basis;
    CorrelationData d;
    for (int i = 0; i < 3; ++i) {
        d.rA(i) = (rho * basis.onA[i]).trace().real();
        d.rB(i) = (rho * basis.onB[i]).trace().real();
        for (int j = 0; j < 3; ++j) d.T(i, j) = (rho * basis.joint[i][j]).trace().real();
    }
    return d;
}

inline CorrelationData correlation_data(const TwoQubitState& s) {
    return correlation_data(s.density());
}

/// Born-rule correlators of a strategy: E_xy = a_x . T b_y, E^A_x = a_x . rA,
/// E^B_y = b_y . rB.
inline Correlators correlators_of(const Strategy& st) {
    validate(st);
    const Scenario s = st.scenario();
    const CorrelationData d = correlation_data(st.state);
    Correlators c{s, std::vector<std::vector<double>>(s.nA, std::vector<double>(s.nB, 0.0)),
                  std::vector<double>(s.nA, 0.0), std::vector<double>(s.nB, 0.0)};
    for (int x = 0; x < s.nA; ++x) c.EA[x] = st.a[x].axis.dot(d.rA);
    for (int y = 0; y < s.nB; ++y) c.EB[y] = st.b[y].axis.dot(d.rB);
    for (int x = 0; x < s.nA; ++x)
        for (int y = 0; y < s.nB; ++y) c.E[x][y] = st.a[x].axis.dot(d.T * st.b[y].axis);
    return c;
}

/// p(a,b|x,y) = Tr[rho (I + a a_x.sigma)/2 x (I + b b_y.sigma)/2].
inline Behavior behavior_of(const Strategy& st) {
    return behavior_from_correlators(correlators_of(st));
}

/// Settings saturating S cos(theta) + S' sin(theta) = 2 sqrt(2) on the
/// maximally entangled state: A1 = sigma_x, A2 = sigma_z,
/// B1 = -sin(chi) sigma_z - cos(chi) sigma_x, B2 = cos(chi) sigma_z -
/// sin(chi) sigma_x, with chi = theta - 3 pi/4.
inline Strategy circle_settings(double theta) {
    const double chi = theta - 3.0 * std::numbers::pi / 4.0;
    Strategy st;
    st.state = TwoQubitState::maximally_entangled();
    st.a = {BlochSetting{Eigen::Vector3d(1, 0, 0)}, BlochSetting{Eigen::Vector3d(0, 0, 1)}};
    st.b = {BlochSetting{Eigen::Vector3d(-std::cos(chi), 0, -std::sin(chi))},
            BlochSetting{Eigen::Vector3d(-std::sin(chi), 0, std::cos(chi))}};
    return st;
}

/// The 2n interleaved directions on the x-z great circle that bring the
/// chained functional to its qubit minimum n(1 - cos(pi/2n)): Bob's setting y
/// sits at Bloch angle (y-1) pi/n and Alice's setting x at (2x-1) pi/(2n).
inline Strategy chained_settings(int n) {
    if (n < 2) throw InvalidN("chained settings need n >= 2");
    Strategy st;
    st.state = TwoQubitState::maximally_entangled();
    auto on_circle = [](double phi) {
        return BlochSetting{Eigen::Vector3d(std::sin(phi), 0.0, std::cos(phi))};
    };
    for (int x = 1; x <= n; ++x) st.a.push_back(on_circle((2 * x - 1) * std::numbers::pi / (2 * n)));
    for (int y = 1; y <= n; ++y) st.b.push_back(on_circle((y - 1) * std::numbers::pi / n));
    return st;
}

/// Alice's tetrahedron and Bob's orthogonal triple reaching 4 sqrt(3) on the
/// maximally entangled state. Bob's middle vector points along -y so that
/// every term of the functional contributes +1/sqrt(3).
inline Strategy elegant_settings() {
    const double k = 1.0 / std::sqrt(3.0);
    Strategy st;
    st.state = TwoQubitState::maximally_entangled();
    st.a = {BlochSetting{Eigen::Vector3d(k, k, k)}, BlochSetting{Eigen::Vector3d(k, -k, -k)},
            BlochSetting{Eigen::Vector3d(-k, k, -k)}, BlochSetting{Eigen::Vector3d(-k, -k, k)}};
    st.b = {BlochSetting{Eigen::Vector3d(1, 0, 0)}, BlochSetting{Eigen::Vector3d(0, -1, 0)},
            BlochSetting{Eigen::Vector3d(0, 0, 1)}};
    return st;
}

}  // namespace bell
