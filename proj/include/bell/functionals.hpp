#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bell/scenario.hpp"

namespace bell {

enum class Direction { Maximize, Minimize };

/// A Bell expression in correlator form:
///   value = offset + sum_xy c[x][y] E_xy + sum_x mA[x] E^A_x + sum_y mB[y] E^B_y.
///
/// `direction` records the inequality's natural orientation so that bounds
/// and reports keep the printed sense (e.g. chained inequalities are ". >= 1"
/// and are minimized).
struct BellFunctional {
    Scenario scenario;
    std::vector<std::vector<double>> c;  ///< c[x][y]
    std::vector<double> mA;
    std::vector<double> mB;
    double offset = 0.0;
    Direction direction = Direction::Maximize;
    std::string name;
};

inline void validate(const BellFunctional& f) {
    validate(f.scenario);
    if (static_cast<int>(f.c.size()) != f.scenario.nA ||
        static_cast<int>(f.mA.size()) != f.scenario.nA ||
        static_cast<int>(f.mB.size()) != f.scenario.nB)
        throw GuardError("functional coefficient tables do not match the scenario");
    for (const auto& row : f.c)
        if (static_cast<int>(row.size()) != f.scenario.nB)
            throw GuardError("functional coefficient tables do not match the scenario");
}

inline double evaluate(const BellFunctional& f, const Correlators& c) {
    if (!(c.scenario == f.scenario)) throw ScenarioMismatch("functional/behavior scenario mismatch");
    double v = f.offset;
    for (int x = 0; x < f.scenario.nA; ++x)
        for (int y = 0; y < f.scenario.nB; ++y) v += f.c[x][y] * c.E[x][y];
    for (int x = 0; x < f.scenario.nA; ++x) v += f.mA[x] * c.EA[x];
    for (int y = 0; y < f.scenario.nB; ++y) v += f.mB[y] * c.EB[y];
    return v;
}

inline double evaluate(const BellFunctional& f, const Behavior& b) {
    return evaluate(f, correlators_of(b));
}

// ---------------------------------------------------------------------------
// The inequality family used throughout: CHSH and its rotated twin, the
// tilted family, the chained family, M3322/M4322 and the elegant inequality.
// ---------------------------------------------------------------------------

inline BellFunctional chsh() {
    return BellFunctional{Scenario{2, 2},
                          {{1.0, 1.0}, {1.0, -1.0}},
                          {0.0, 0.0},
                          {0.0, 0.0},
                          0.0,
                          Direction::Maximize,
                          "chsh"};
}

inline BellFunctional chsh_prime() {
    return BellFunctional{Scenario{2, 2},
                          {{-1.0, 1.0}, {1.0, 1.0}},
                          {0.0, 0.0},
                          {0.0, 0.0},
                          0.0,
                          Direction::Maximize,
                          "chsh_prime"};
}

/// S_tau = CHSH + 2(1-tau)(E^A_1 + E^B_1), local bound 2(2 tau - 1).
inline BellFunctional tilted(double tau) {
    if (!(tau >= 1.0 && tau <= 1.5))
        throw OutOfRangeTau("tau must lie in [1, 3/2], got " + std::to_string(tau));
    const double m = 2.0 * (1.0 - tau);
    return BellFunctional{Scenario{2, 2},
                          {{1.0, 1.0}, {1.0, -1.0}},
                          {m, 0.0},
                          {m, 0.0},
                          0.0,
                          Direction::Maximize,
                          "tilted(" + std::to_string(tau) + ")"};
}

/// Chained inequality with n settings per party, probability form
///   I_n = p(a=b|n,1) + p(a!=b|n,n) + sum_{x<n} [p(a!=b|x,x) + p(a!=b|x,x+1)]
/// converted to correlators via p(a!=b) = (1-E)/2, p(a=b) = (1+E)/2.
/// Local bound 1, no-signaling (algebraic) bound 0; direction Minimize.
inline BellFunctional chained(int n) {
    if (n < 2) throw InvalidN("chained inequality needs n >= 2");
    BellFunctional f{Scenario{n, n},
                     std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)),
                     std::vector<double>(n, 0.0),
                     std::vector<double>(n, 0.0),
                     static_cast<double>(n),
                     Direction::Minimize,
                     "chained(" + std::to_string(n) + ")"};
    f.c[n - 1][0] += 0.5;       // p(a=b|n,1)
    f.c[n - 1][n - 1] -= 0.5;   // p(a!=b|n,n)
    for (int x = 0; x + 1 < n; ++x) {
        f.c[x][x] -= 0.5;
        f.c[x][x + 1] -= 0.5;
    }
    return f;
}

/// M3322, a 3x3 inequality whose local and local+1PR bounds coincide at 6.
inline BellFunctional m3322() {
    return BellFunctional{Scenario{3, 3},
                          {{1.0, 1.0, 1.0}, {1.0, 1.0, -1.0}, {1.0, -1.0, 0.0}},
                          {-1.0, -1.0, 0.0},
                          {-1.0, 1.0, 0.0},
                          0.0,
                          Direction::Maximize,
                          "m3322"};
}

/// M4322, the 4x3 companion of M3322 with shared bound 7.
inline BellFunctional m4322() {
    return BellFunctional{Scenario{4, 3},
                          {{1.0, 1.0, 1.0}, {1.0, 0.0, -1.0}, {1.0, -1.0, 0.0}, {0.0, 1.0, -1.0}},
                          {-1.0, 0.0, 0.0, 0.0},
                          {-1.0, -1.0, -1.0},
                          0.0,
                          Direction::Maximize,
                          "m4322"};
}

/// The elegant inequality: 4x3 settings, tetrahedral sign pattern, local
/// bound 6, qubit maximum 4*sqrt(3) (planar measurements cap at 2+2*sqrt(5)).
inline BellFunctional elegant() {
    return BellFunctional{Scenario{4, 3},
                          {{1.0, 1.0, 1.0},
                           {1.0, -1.0, -1.0},
                           {-1.0, 1.0, -1.0},
                           {-1.0, -1.0, 1.0}},
                          std::vector<double>(4, 0.0),
                          std::vector<double>(3, 0.0),
                          0.0,
                          Direction::Maximize,
                          "elegant"};
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// Outcome signs of a joint deterministic strategy.
struct DeterministicStrategy {
    std::vector<int> a;  ///< +1/-1 per Alice setting
    std::vector<int> b;  ///< +1/-1 per Bob setting
};

enum class WiringRule : int { ConstPlus = 0, ConstMinus = 1, Copy = 2, AntiCopy = 3 };

/// One party's wiring of a setting into the shared PR box: an input bit and
/// an output rule (constant, or +-copy of the box outcome mapped to +-1).
struct PrWire {
    int input = 0;
    WiringRule rule = WiringRule::ConstPlus;
};

struct PrWiring {
    std::vector<PrWire> a;
    std::vector<PrWire> b;
};

struct BoundResult {
    double value = 0.0;
    std::variant<DeterministicStrategy, PrWiring> witness;
};

inline Behavior behavior_of(const DeterministicStrategy& d, const Scenario& s) {
    return deterministic_behavior(s, d.a, d.b);
}

/// Expected behavior of a wiring into one shared PR box (outcomes of the box
/// are uniform bits with alpha XOR beta = g(x) h(y)).
inline Behavior behavior_of(const PrWiring& w, const Scenario& s) {
    Correlators c{s, std::vector<std::vector<double>>(s.nA, std::vector<double>(s.nB, 0.0)),
                  std::vector<double>(s.nA, 0.0), std::vector<double>(s.nB, 0.0)};
    auto is_const = [](const PrWire& q) {
        return q.rule == WiringRule::ConstPlus || q.rule == WiringRule::ConstMinus;
    };
    auto const_sign = [](const PrWire& q) { return q.rule == WiringRule::ConstPlus ? 1.0 : -1.0; };
    auto copy_sign = [](const PrWire& q) { return q.rule == WiringRule::Copy ? 1.0 : -1.0; };
    for (int x = 0; x < s.nA; ++x) c.EA[x] = is_const(w.a[x]) ? const_sign(w.a[x]) : 0.0;
    for (int y = 0; y < s.nB; ++y) c.EB[y] = is_const(w.b[y]) ? const_sign(w.b[y]) : 0.0;
    for (int x = 0; x < s.nA; ++x)
        for (int y = 0; y < s.nB; ++y) {
            const PrWire& qa = w.a[x];
            const PrWire& qb = w.b[y];
            if (is_const(qa) || is_const(qb)) {
                c.E[x][y] = c.EA[x] * c.EB[y];
            } else {
                double parity = (qa.input & qb.input) ? -1.0 : 1.0;
                c.E[x][y] = copy_sign(qa) * copy_sign(qb) * parity;
            }
        }
    return behavior_from_correlators(c);
}

namespace detail {

inline bool better(double candidate, double incumbent, Direction dir) {
    return dir == Direction::Maximize ? candidate > incumbent : candidate < incumbent;
}

}  // namespace detail

/// Exact local bound by enumerating Alice's 2^nA sign assignments; for each,
/// every Bob sign is chosen independently to extremize its linear term.
/// Ties break toward the lexicographically smallest assignment (+1 before -1,
/// setting 1 most significant). O(2^nA * nA * nB).
inline BoundResult local_bound(const BellFunctional& f) {
    validate(f);
    const int nA = f.scenario.nA, nB = f.scenario.nB;
    if (nA > 26) throw TooManySettings("local_bound enumeration capped at nA <= 26");
    const bool maximize = f.direction == Direction::Maximize;

    BoundResult best;
    bool have = false;
    std::vector<int> a(nA), b(nB);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << nA); ++mask) {
        for (int x = 0; x < nA; ++x)
            a[x] = ((mask >> (nA - 1 - x)) & 1u) ? -1 : +1;
        double v = f.offset;
        for (int x = 0; x < nA; ++x) v += f.mA[x] * a[x];
        for (int y = 0; y < nB; ++y) {
            double t = 0.0;
            for (int x = 0; x < nA; ++x) t += f.c[x][y] * a[x];
            t += f.mB[y];
            if (maximize) {
                b[y] = t >= 0.0 ? +1 : -1;
                v += t >= 0.0 ? t : -t;
            } else {
                b[y] = t > 0.0 ? -1 : +1;
                v -= t > 0.0 ? t : -t;
            }
        }
        if (!have || detail::better(v, best.value, f.direction)) {
            best.value = v;
            best.witness = DeterministicStrategy{a, b};
            have = true;
        }
    }
    return best;
}

/// Extremum over all tables that are normalized and nonnegative per setting
/// pair independently (no consistency between pairs). For each pair the mass
/// goes on the best outcome combination.
inline double algebraic_bound(const BellFunctional& f) {
    validate(f);
    const int nA = f.scenario.nA, nB = f.scenario.nB;
    const bool maximize = f.direction == Direction::Maximize;
    double v = f.offset;
    for (int x = 0; x < nA; ++x)
        for (int y = 0; y < nB; ++y) {
            double ext = 0.0;
            bool first = true;
            for (int a = 1; a >= -1; a -= 2)
                for (int b = 1; b >= -1; b -= 2) {
                    double w = f.c[x][y] * a * b + f.mA[x] * a / nB + f.mB[y] * b / nA;
                    if (first || (maximize ? w > ext : w < ext)) ext = w;
                    first = false;
                }
            v += ext;
        }
    return v;
}

/// Exact bound over local strategies wired to one shared PR box: per setting
/// each party picks an input bit and one of 4 output rules (8 wirings per
/// setting). Enumeration is guarded by 8^nA * 8^nB <= 1e8. Ties break toward
/// the lexicographically smallest wiring assignment (rule order ConstPlus,
/// ConstMinus, Copy, AntiCopy within input bit 0 before bit 1; setting 1 most
/// significant; Alice before Bob).
inline BoundResult lplus1pr_bound(const BellFunctional& f) {
    validate(f);
    const int nA = f.scenario.nA, nB = f.scenario.nB;
    if (std::pow(8.0, nA) * std::pow(8.0, nB) > 1e8)
        throw TooManySettings("lplus1pr_bound enumeration capped at 8^nA * 8^nB <= 1e8");
    const bool maximize = f.direction == Direction::Maximize;

    auto decode = [](std::uint64_t idx, int n, std::vector<PrWire>& out) {
        // digit for setting 1 is most significant
        for (int k = n - 1; k >= 0; --k) {
            int digit = static_cast<int>(idx & 7u);
            idx >>= 3;
            out[k] = PrWire{digit >> 2, static_cast<WiringRule>(digit & 3)};
        }
    };

    const std::uint64_t totalA = std::uint64_t(1) << (3 * nA);
    const std::uint64_t totalB = std::uint64_t(1) << (3 * nB);
    std::vector<PrWire> wa(nA), wb(nB);
    // per-Alice-setting data: marginal, copy sign (0 if constant), input bit
    std::vector<double> margA(nA), copyA(nA);
    std::vector<int> bitA(nA);

    BoundResult best;
    bool have = false;
    for (std::uint64_t ia = 0; ia < totalA; ++ia) {
        decode(ia, nA, wa);
        for (int x = 0; x < nA; ++x) {
            const PrWire& q = wa[x];
            if (q.rule == WiringRule::ConstPlus || q.rule == WiringRule::ConstMinus) {
                margA[x] = q.rule == WiringRule::ConstPlus ? 1.0 : -1.0;
                copyA[x] = 0.0;
            } else {
                margA[x] = 0.0;
                copyA[x] = q.rule == WiringRule::Copy ? 1.0 : -1.0;
            }
            bitA[x] = q.input;
        }
        double baseA = f.offset;
        for (int x = 0; x < nA; ++x) baseA += f.mA[x] * margA[x];

        for (std::uint64_t ib = 0; ib < totalB; ++ib) {
            decode(ib, nB, wb);
            double v = baseA;
            for (int y = 0; y < nB; ++y) {
                const PrWire& q = wb[y];
                double margB, copyB;
                if (q.rule == WiringRule::ConstPlus || q.rule == WiringRule::ConstMinus) {
                    margB = q.rule == WiringRule::ConstPlus ? 1.0 : -1.0;
                    copyB = 0.0;
                } else {
                    margB = 0.0;
                    copyB = q.rule == WiringRule::Copy ? 1.0 : -1.0;
                }
                v += f.mB[y] * margB;
                for (int x = 0; x < nA; ++x) {
                    double e;
                    if (copyA[x] == 0.0 || copyB == 0.0) {
                        e = margA[x] * margB;
                    } else {
                        e = copyA[x] * copyB * ((bitA[x] & q.input) ? -1.0 : 1.0);
                    }
                    v += f.c[x][y] * e;
                }
            }
            if (!have || detail::better(v, best.value, f.direction)) {
                best.value = v;
                best.witness = PrWiring{wa, wb};
                have = true;
            }
        }
    }
    return best;
}

/// Re-evaluates a bound witness through the behavior it induces.
inline double evaluate_witness(const BellFunctional& f, const BoundResult& r) {
    if (std::holds_alternative<DeterministicStrategy>(r.witness))
        return evaluate(f, behavior_of(std::get<DeterministicStrategy>(r.witness), f.scenario));
    return evaluate(f, behavior_of(std::get<PrWiring>(r.witness), f.scenario));
}

}  // namespace bell
