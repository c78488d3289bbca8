#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "bell/detail/rng.hpp"
#include "bell/functionals.hpp"
#include "bell/quantum.hpp"

namespace bell {

enum class Restriction {
    None,                ///< state and both parties' directions free
    FixedState,          ///< state pinned to SeesawConfig::fixed_state
    MaximallyEntangled,  ///< state pinned to |psi_{pi/4}>  (d = 2 search only)
    Planar,              ///< all Bloch vectors confined to the x-z plane
};

struct SeesawConfig {
    int restarts = 32;
    int max_iters = 2000;
    double tol = 1e-12;  ///< convergence threshold on the value change
    std::uint64_t seed = 1;
    Restriction restriction = Restriction::None;
    std::optional<TwoQubitState> fixed_state;
};

struct SeesawResult {
    double value = 0.0;
    Strategy strategy;
    int iterations = 0;    ///< iterations used by the best restart
    bool converged = false;
    int best_restart = 0;
    std::vector<std::vector<double>> traces;  ///< per-restart value traces
};

namespace detail {

// Alternating best responses on the correlation-tensor form. Works in
// maximize convention: the caller flips coefficient signs for Minimize.
struct SeesawProblem {
    int nA, nB;
    std::vector<std::vector<double>> c;
    std::vector<double> mA, mB;
    bool planar = false;

    double value(const CorrelationData& d, const std::vector<Eigen::Vector3d>& A,
                 const std::vector<Eigen::Vector3d>& B) const {
        double v = 0.0;
        for (int x = 0; x < nA; ++x)
            for (int y = 0; y < nB; ++y)
                if (c[x][y] != 0.0) v += c[x][y] * A[x].dot(d.T * B[y]);
        for (int x = 0; x < nA; ++x) v += mA[x] * A[x].dot(d.rA);
        for (int y = 0; y < nB; ++y) v += mB[y] * B[y].dot(d.rB);
        return v;
    }

    // Best in-class response: unit vector along the traceless part of the
    // effective operator, projected to the x-z plane when planar. Degenerate
    // (zero) directions resolve to +z.
    Eigen::Vector3d respond(Eigen::Vector3d f) const {
        if (planar) f.y() = 0.0;
        double n = f.norm();
        if (n < 1e-300) return Eigen::Vector3d::UnitZ();
        return f / n;
    }

    void update_alice(const CorrelationData& d, std::vector<Eigen::Vector3d>& A,
                      const std::vector<Eigen::Vector3d>& B) const {
        for (int x = 0; x < nA; ++x) {
            Eigen::Vector3d g = Eigen::Vector3d::Zero();
            for (int y = 0; y < nB; ++y)
                if (c[x][y] != 0.0) g += c[x][y] * B[y];
            A[x] = respond(d.T * g + mA[x] * d.rA);
        }
    }

    void update_bob(const CorrelationData& d, const std::vector<Eigen::Vector3d>& A,
                    std::vector<Eigen::Vector3d>& B) const {
        for (int y = 0; y < nB; ++y) {
            Eigen::Vector3d g = Eigen::Vector3d::Zero();
            for (int x = 0; x < nA; ++x)
                if (c[x][y] != 0.0) g += c[x][y] * A[x];
            B[y] = respond(d.T.transpose() * g + mB[y] * d.rB);
        }
    }

    // Bell operator for the current directions; its top eigenvector is the
    // optimal state.
    Eigen::Matrix4cd bell_operator(const std::vector<Eigen::Vector3d>& A,
                                   const std::vector<Eigen::Vector3d>& B) const {
        Eigen::Matrix4cd op = Eigen::Matrix4cd::Zero();
        std::vector<Eigen::Matrix2cd> obsA(nA), obsB(nB);
        for (int x = 0; x < nA; ++x) obsA[x] = BlochSetting{A[x]}.observable();
        for (int y = 0; y < nB; ++y) obsB[y] = BlochSetting{B[y]}.observable();
        for (int x = 0; x < nA; ++x)
            for (int y = 0; y < nB; ++y)
                if (c[x][y] != 0.0) op += c[x][y] * kron2(obsA[x], obsB[y]);
        for (int x = 0; x < nA; ++x)
            if (mA[x] != 0.0) op += mA[x] * kron2(obsA[x], pauli::identity());
        for (int y = 0; y < nB; ++y)
            if (mB[y] != 0.0) op += mB[y] * kron2(pauli::identity(), obsB[y]);
        return op;
    }
};

}  // namespace detail

/// Alternating (seesaw) maximization of a Bell functional over two-qubit
/// strategies. Per iteration: each Alice direction is replaced by its exact
/// best response given the state and Bob, then symmetrically for Bob, then
/// (unless the restriction pins it) the state moves to the top eigenvector
/// of the Bell operator. The value trace is monotone; restarts differ only
/// in their seeded random initial directions, and the best restart (lowest
/// index on ties) wins. Minimize-direction functionals are negated
/// internally, so the result is a minimum for those.
inline SeesawResult seesaw(const BellFunctional& f, const SeesawConfig& cfg = {}) {
    validate(f);
    if (cfg.restarts < 1 || cfg.tol <= 0.0) throw GuardError("seesaw needs restarts >= 1 and tol > 0");
    if (cfg.restriction == Restriction::FixedState && !cfg.fixed_state)
        throw GuardError("FixedState restriction needs a state");

    const bool minimize = f.direction == Direction::Minimize;
    const double sign = minimize ? -1.0 : 1.0;
    detail::SeesawProblem prob;
    prob.nA = f.scenario.nA;
    prob.nB = f.scenario.nB;
    prob.c = f.c;
    prob.mA = f.mA;
    prob.mB = f.mB;
    prob.planar = cfg.restriction == Restriction::Planar;
    if (minimize) {
        for (auto& row : prob.c)
            for (auto& v : row) v = -v;
        for (auto& v : prob.mA) v = -v;
        for (auto& v : prob.mB) v = -v;
    }

    const bool state_free =
        cfg.restriction == Restriction::None || cfg.restriction == Restriction::Planar;
    TwoQubitState pinned = cfg.restriction == Restriction::FixedState
                               ? *cfg.fixed_state
                               : TwoQubitState::maximally_entangled();

    SeesawResult best;
    best.traces.resize(cfg.restarts);
    double best_internal = 0.0;
    bool have = false;

    for (int r = 0; r < cfg.restarts; ++r) {
        detail::Stream rng(detail::stream_key(cfg.seed, static_cast<std::uint64_t>(r)));
        std::vector<Eigen::Vector3d> A(prob.nA), B(prob.nB);
        for (auto& v : A) v = prob.respond(detail::random_unit_vector(rng));
        for (auto& v : B) v = prob.respond(detail::random_unit_vector(rng));

        TwoQubitState state = pinned;
        CorrelationData d = correlation_data(state);
        double prev = -std::numeric_limits<double>::infinity();
        double val = 0.0;
        bool converged = false;
        int used = 0;
        auto& trace = best.traces[r];
        trace.clear();

        for (int it = 0; it < cfg.max_iters; ++it) {
            prob.update_alice(d, A, B);
            prob.update_bob(d, A, B);
            if (state_free) {
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(prob.bell_operator(A, B));
                Eigen::Vector4cd psi = es.eigenvectors().col(3);
                state = TwoQubitState::from_density(psi * psi.adjoint());
                d = correlation_data(state);
            }
            val = prob.value(d, A, B);
            trace.push_back(f.offset + sign * val);
            used = it + 1;
            if (val - prev < cfg.tol && it > 0) {
                converged = true;
                break;
            }
            prev = val;
        }

        if (!have || val > best_internal) {
            have = true;
            best_internal = val;
            best.value = f.offset + sign * val;
            best.iterations = used;
            best.converged = converged;
            best.best_restart = r;
            Strategy st;
            st.state = state;
            st.a.clear();
            st.b.clear();
            for (const auto& v : A) st.a.push_back(BlochSetting{v});
            for (const auto& v : B) st.b.push_back(BlochSetting{v});
            best.strategy = std::move(st);
        }
    }
    return best;
}

inline SeesawConfig planar_defaults() {
    SeesawConfig cfg;
    cfg.restriction = Restriction::Planar;
    return cfg;
}

/// Non-violation searches assert a negative, so they default to 256 restarts.
inline SeesawConfig mes_defaults() {
    SeesawConfig cfg;
    cfg.restarts = 256;
    cfg.restriction = Restriction::MaximallyEntangled;
    return cfg;
}

inline SeesawResult seesaw_planar(const BellFunctional& f, SeesawConfig cfg = planar_defaults()) {
    cfg.restriction = Restriction::Planar;
    return seesaw(f, cfg);
}

/// Seesaw with the state pinned to the d = 2 maximally entangled state.
/// Evidence only: the search cannot certify an upper bound.
inline SeesawResult seesaw_mes(const BellFunctional& f, SeesawConfig cfg = mes_defaults()) {
    cfg.restriction = Restriction::MaximallyEntangled;
    return seesaw(f, cfg);
}

/// Schmidt angle of the strategy's state in degrees, reported in [45, 90] to
/// match the cos(theta)|HH> + sin(theta)|VV> parametrization with the larger
/// coefficient on |VV>.
inline double state_angle_deg(const Strategy& st) {
    Eigen::Matrix4cd rho = st.state.density();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    Eigen::Vector4cd psi = es.eigenvectors().col(3);  // dominant pure component
    Eigen::Matrix2cd m;
    m << psi(0), psi(1), psi(2), psi(3);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
    double s0 = svd.singularValues()(0), s1 = svd.singularValues()(1);
    return std::atan2(std::max(s0, s1), std::min(s0, s1)) * 180.0 / std::numbers::pi;
}

struct TiltedScanRow {
    double tau = 0.0;
    double quantum_value = 0.0;
    double local_bound = 0.0;
    double theta_deg = 0.0;  ///< optimizing state angle
};

/// Unrestricted seesaw across a list of tau values.
inline std::vector<TiltedScanRow> scan_tilted(const std::vector<double>& taus,
                                              const SeesawConfig& cfg = {}) {
    std::vector<TiltedScanRow> rows;
    rows.reserve(taus.size());
    for (double tau : taus) {
        BellFunctional f = tilted(tau);
        SeesawResult r = seesaw(f, cfg);
        rows.push_back(TiltedScanRow{tau, r.value, local_bound(f).value, state_angle_deg(r.strategy)});
    }
    return rows;
}

struct CircleBoundaryRow {
    double theta = 0.0;
    double s_chsh = 0.0;
    double s_prime = 0.0;
    double radius = 0.0;
};

/// Evaluates the saturating settings for each theta; the radius
/// sqrt(S^2 + S'^2) equals 2 sqrt(2) identically.
inline std::vector<CircleBoundaryRow> quantum_circle_boundary(const std::vector<double>& thetas) {
    const BellFunctional s = chsh();
    const BellFunctional sp = chsh_prime();
    std::vector<CircleBoundaryRow> rows;
    rows.reserve(thetas.size());
    for (double th : thetas) {
        Correlators c = correlators_of(circle_settings(th));
        double S = evaluate(s, c), Sp = evaluate(sp, c);
        rows.push_back(CircleBoundaryRow{th, S, Sp, std::hypot(S, Sp)});
    }
    return rows;
}

/// Residual of the sum-of-squares identity
///   2 sqrt(2) I - B(theta) = (1/sqrt(2)) [sin(pi/4+theta) A2 +
///   cos(pi/4+theta) A1 - B1]^2 + (1/sqrt(2)) [cos(pi/4+theta) A2 -
///   sin(pi/4+theta) A1 + B2]^2
/// in operator norm on the joint 4x4 space. Zero (to rounding) for any
/// dichotomic observables.
inline double sos_residual(double theta, const Eigen::Matrix2cd& A1, const Eigen::Matrix2cd& A2,
                           const Eigen::Matrix2cd& B1, const Eigen::Matrix2cd& B2) {
    for (const auto* obs : {&A1, &A2, &B1, &B2}) {
        if ((*obs - obs->adjoint()).cwiseAbs().maxCoeff() > 1e-10 ||
            ((*obs) * (*obs) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-10)
            throw InvalidObservable("observables must be Hermitian and square to the identity");
    }
    const double ang = std::numbers::pi / 4.0 + theta;
    const double s = std::sin(ang), c = std::cos(ang);
    const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();

    Eigen::Matrix4cd bell = Eigen::Matrix4cd::Zero();
    const double coeff[2][2] = {{std::cos(theta) - std::sin(theta), std::cos(theta) + std::sin(theta)},
                                {std::cos(theta) + std::sin(theta), -std::cos(theta) + std::sin(theta)}};
    const Eigen::Matrix2cd* As[2] = {&A1, &A2};
    const Eigen::Matrix2cd* Bs[2] = {&B1, &B2};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) bell += coeff[x][y] * kron2(*As[x], *Bs[y]);

    Eigen::Matrix4cd t1 = s * kron2(A2, I) + c * kron2(A1, I) - kron2(I, B1);
    Eigen::Matrix4cd t2 = c * kron2(A2, I) - s * kron2(A1, I) + kron2(I, B2);
    Eigen::Matrix4cd residual = 2.0 * std::sqrt(2.0) * Eigen::Matrix4cd::Identity() - bell -
                                (t1 * t1 + t2 * t2) / std::sqrt(2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
        Eigen::Matrix4cd(0.5 * (residual + residual.adjoint())), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double sos_residual(double theta, const BlochSetting& a1, const BlochSetting& a2,
                           const BlochSetting& b1, const BlochSetting& b2) {
    return sos_residual(theta, a1.observable(), a2.observable(), b1.observable(), b2.observable());
}

}  // namespace bell
