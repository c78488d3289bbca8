#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bell/errors.hpp"

namespace bell {

/// Tolerance for logical checks (probability validity, no-signaling).
inline constexpr double kLogicalTol = 1e-9;
/// Tolerance for arithmetic identities (round trips, witness re-evaluation).
inline constexpr double kArithmeticTol = 1e-12;

/// Outcome index convention used everywhere, including serialization:
/// index 0 <-> outcome +1, index 1 <-> outcome -1.
inline constexpr int outcome_sign(int index) { return index == 0 ? +1 : -1; }
inline constexpr int outcome_index(int sign) { return sign > 0 ? 0 : 1; }

/// A bipartite Bell scenario with binary (+1/-1) outcomes on both sides.
struct Scenario {
    int nA = 2;  ///< number of Alice settings (>= 1)
    int nB = 2;  ///< number of Bob settings (>= 1)

    bool operator==(const Scenario&) const = default;
    int pairs() const { return nA * nB; }
};

inline void validate(const Scenario& s) {
    if (s.nA < 1 || s.nB < 1)
        throw GuardError("scenario needs at least one setting per party");
}

/// Flat index into a [a][b][x][y] probability table.
inline std::size_t behavior_index(const Scenario& s, int ai, int bi, int x, int y) {
    return ((static_cast<std::size_t>(ai) * 2 + bi) * s.nA + x) * s.nB + y;
}

/// The full conditional distribution p(a,b|x,y).
///
/// Storage is a flat table indexed [a][b][x][y] with the 0:+1 / 1:-1 outcome
/// convention and 0-based settings. Treat instances as immutable once built;
/// the factories below validate all invariants.
struct Behavior {
    Scenario scenario;
    std::vector<double> p;

    std::size_t index(int ai, int bi, int x, int y) const {
        return behavior_index(scenario, ai, bi, x, y);
    }
    double at(int ai, int bi, int x, int y) const { return p[index(ai, bi, x, y)]; }
    double& at(int ai, int bi, int x, int y) { return p[index(ai, bi, x, y)]; }

    /// Entry by outcome signs a,b in {+1,-1}.
    double prob(int a, int b, int x, int y) const {
        return at(outcome_index(a), outcome_index(b), x, y);
    }
};

/// Correlators E_xy and marginals E^A_x, E^B_y of a behavior.
struct Correlators {
    Scenario scenario;
    std::vector<std::vector<double>> E;  ///< E[x][y]
    std::vector<double> EA;              ///< E^A_x
    std::vector<double> EB;              ///< E^B_y
};

/// Validates and wraps a raw probability table (shape 2 x 2 x nA x nB).
inline Behavior behavior_from_table(const Scenario& s, const std::vector<double>& table,
                                    double tol = kLogicalTol) {
    validate(s);
    const std::size_t want = 4u * s.nA * s.nB;
    if (table.size() != want)
        throw InvalidProbability("probability table has wrong size");
    Behavior b{s, table};
    for (double v : table) {
        if (!std::isfinite(v) || v < -kArithmeticTol || v > 1.0 + kArithmeticTol)
            throw InvalidProbability("probability entry outside [0,1]");
    }
    for (int x = 0; x < s.nA; ++x) {
        for (int y = 0; y < s.nB; ++y) {
            double sum = 0.0;
            for (int ai = 0; ai < 2; ++ai)
                for (int bi = 0; bi < 2; ++bi) sum += b.at(ai, bi, x, y);
            if (std::abs(sum - 1.0) > tol)
                throw InvalidProbability("setting pair (" + std::to_string(x + 1) + "," +
                                         std::to_string(y + 1) + ") not normalized");
        }
    }
    return b;
}

/// True iff both parties' marginals are independent of the other party's
/// setting, each within tol.
inline bool is_no_signaling(const Behavior& b, double tol = kLogicalTol) {
    const auto& s = b.scenario;
    for (int x = 0; x < s.nA; ++x) {
        for (int ai = 0; ai < 2; ++ai) {
            double ref = b.at(ai, 0, x, 0) + b.at(ai, 1, x, 0);
            for (int y = 1; y < s.nB; ++y) {
                double m = b.at(ai, 0, x, y) + b.at(ai, 1, x, y);
                if (std::abs(m - ref) > tol) return false;
            }
        }
    }
    for (int y = 0; y < s.nB; ++y) {
        for (int bi = 0; bi < 2; ++bi) {
            double ref = b.at(0, bi, 0, y) + b.at(1, bi, 0, y);
            for (int x = 1; x < s.nA; ++x) {
                double m = b.at(0, bi, x, y) + b.at(1, bi, x, y);
                if (std::abs(m - ref) > tol) return false;
            }
        }
    }
    return true;
}

/// Computes correlators and marginals of a behavior.
///
/// Marginals of possibly-signaling raw data are averaged over the other
/// party's settings (unbiased for sampled data). With strict = true the
/// function instead throws SignalingDetected when the per-setting marginals
/// disagree beyond tol.
inline Correlators correlators_of(const Behavior& b, bool strict = false,
                                  double tol = kLogicalTol) {
    const auto& s = b.scenario;
    Correlators c{s,
                  std::vector<std::vector<double>>(s.nA, std::vector<double>(s.nB, 0.0)),
                  std::vector<double>(s.nA, 0.0), std::vector<double>(s.nB, 0.0)};
    for (int x = 0; x < s.nA; ++x)
        for (int y = 0; y < s.nB; ++y) {
            double e = 0.0;
            for (int ai = 0; ai < 2; ++ai)
                for (int bi = 0; bi < 2; ++bi)
                    e += outcome_sign(ai) * outcome_sign(bi) * b.at(ai, bi, x, y);
            c.E[x][y] = e;
        }
    for (int x = 0; x < s.nA; ++x) {
        double first = 0.0, acc = 0.0;
        for (int y = 0; y < s.nB; ++y) {
            double m = 0.0;
            for (int ai = 0; ai < 2; ++ai)
                for (int bi = 0; bi < 2; ++bi) m += outcome_sign(ai) * b.at(ai, bi, x, y);
            if (y == 0) first = m;
            if (strict && std::abs(m - first) > tol)
                throw SignalingDetected("Alice marginal for setting " + std::to_string(x + 1) +
                                        " depends on Bob's setting");
            acc += m;
        }
        c.EA[x] = acc / s.nB;
    }
    for (int y = 0; y < s.nB; ++y) {
        double first = 0.0, acc = 0.0;
        for (int x = 0; x < s.nA; ++x) {
            double m = 0.0;
            for (int ai = 0; ai < 2; ++ai)
                for (int bi = 0; bi < 2; ++bi) m += outcome_sign(bi) * b.at(ai, bi, x, y);
            if (x == 0) first = m;
            if (strict && std::abs(m - first) > tol)
                throw SignalingDetected("Bob marginal for setting " + std::to_string(y + 1) +
                                        " depends on Alice's setting");
            acc += m;
        }
        c.EB[y] = acc / s.nA;
    }
    return c;
}

/// Reconstructs the unique binary-outcome no-signaling behavior with the
/// given correlators: p(a,b|x,y) = (1 + a E^A_x + b E^B_y + ab E_xy)/4.
inline Behavior behavior_from_correlators(const Correlators& c, double tol = kLogicalTol) {
    const auto& s = c.scenario;
    validate(s);
    Behavior b{s, std::vector<double>(4u * s.nA * s.nB, 0.0)};
    for (int x = 0; x < s.nA; ++x)
        for (int y = 0; y < s.nB; ++y)
            for (int ai = 0; ai < 2; ++ai)
                for (int bi = 0; bi < 2; ++bi) {
                    const int a = outcome_sign(ai), bsign = outcome_sign(bi);
                    double v = (1.0 + a * c.EA[x] + bsign * c.EB[y] + a * bsign * c.E[x][y]) / 4.0;
                    if (v < -tol)
                        throw InfeasibleCorrelators("reconstructed probability " +
                                                    std::to_string(v) + " at pair (" +
                                                    std::to_string(x + 1) + "," +
                                                    std::to_string(y + 1) + ")");
                    b.at(ai, bi, x, y) = v < 0.0 ? 0.0 : v;
                }
    return b;
}

/// p = 1/4 everywhere.
inline Behavior uniform_behavior(const Scenario& s) {
    validate(s);
    return Behavior{s, std::vector<double>(4u * s.nA * s.nB, 0.25)};
}

/// Joint deterministic behavior from per-setting outcome signs.
inline Behavior deterministic_behavior(const Scenario& s, const std::vector<int>& aSigns,
                                       const std::vector<int>& bSigns) {
    validate(s);
    Behavior b{s, std::vector<double>(4u * s.nA * s.nB, 0.0)};
    for (int x = 0; x < s.nA; ++x)
        for (int y = 0; y < s.nB; ++y)
            b.at(outcome_index(aSigns[x]), outcome_index(bSigns[y]), x, y) = 1.0;
    return b;
}

/// The PR box: E = (1,1,1,-1) with uniform marginals.
inline Behavior pr_box() {
    Correlators c{Scenario{2, 2},
                  {{1.0, 1.0}, {1.0, -1.0}},
                  {0.0, 0.0},
                  {0.0, 0.0}};
    return behavior_from_correlators(c);
}

}  // namespace bell
