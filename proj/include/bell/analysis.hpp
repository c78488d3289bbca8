#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bell/counts.hpp"
#include "bell/detail/simplex.hpp"
#include "bell/functionals.hpp"

namespace bell {

/// Outcome of the local-content linear program: the behavior splits as
/// (1 - q_min) p_L + q_min p_NS with p_L a convex mixture of deterministic
/// vertices (weights returned) and p_NS the normalized no-signaling
/// remainder.
struct Epr2Result {
    double q_min = 0.0;
    std::vector<double> weights;  ///< per vertex, index = amask * 2^nB + bmask
    Behavior remainder;           ///< normalized NS part (uniform when q_min = 0)
    bool lp_optimal = false;
};

/// Deterministic vertex for index = amask * 2^nB + bmask, where bit k of a
/// mask set means setting k+1 outputs -1.
inline DeterministicStrategy vertex_strategy(const Scenario& s, std::uint64_t index) {
    DeterministicStrategy d;
    std::uint64_t bmask = index & ((std::uint64_t(1) << s.nB) - 1);
    std::uint64_t amask = index >> s.nB;
    for (int x = 0; x < s.nA; ++x) d.a.push_back((amask >> x) & 1u ? -1 : +1);
    for (int y = 0; y < s.nB; ++y) d.b.push_back((bmask >> y) & 1u ? -1 : +1);
    return d;
}

/// Minimal nonlocal weight of a no-signaling behavior, by the exact LP
///   maximize sum_i lambda_i   s.t.   sum_i lambda_i D_i <= p, lambda >= 0
/// over all joint deterministic vertices D_i; q_min = 1 - sum lambda. The
/// remainder p - sum lambda_i D_i inherits the no-signaling equalities from
/// the input, so entrywise nonnegativity is the only active constraint set.
inline Epr2Result epr2_local_content(const Behavior& b, double tol = 1e-8) {
    const Scenario& s = b.scenario;
    if (s.nA > 8 || s.nB > 8) throw TooManySettings("epr2 LP capped at nA, nB <= 8");
    if (!is_no_signaling(b, tol)) throw SignalingInput("epr2 input behavior is signaling");

    const std::size_t n_vertices = std::size_t(1) << (s.nA + s.nB);
    const std::size_t n_rows = b.p.size();
    std::vector<std::vector<double>> A(n_rows, std::vector<double>(n_vertices, 0.0));
    for (std::size_t i = 0; i < n_vertices; ++i) {
        DeterministicStrategy d = vertex_strategy(s, i);
        for (int x = 0; x < s.nA; ++x)
            for (int y = 0; y < s.nB; ++y)
                A[behavior_index(s, outcome_index(d.a[x]), outcome_index(d.b[y]), x, y)][i] = 1.0;
    }
    detail::SimplexResult lp =
        detail::simplex_max(A, b.p, std::vector<double>(n_vertices, 1.0), 1e-9);
    if (!lp.optimal) throw LpFailure("epr2 simplex did not reach optimality");

    Epr2Result res;
    res.weights = lp.x;
    res.lp_optimal = true;
    double total = 0.0;
    for (double w : lp.x) total += w;
    double q = 1.0 - total;
    if (q < 1e-9) q = 0.0;  // exact-zero reporting
    res.q_min = std::clamp(q, 0.0, 1.0);

    if (res.q_min > 0.0) {
        Behavior rem{s, b.p};
        for (std::size_t i = 0; i < n_vertices; ++i) {
            if (lp.x[i] == 0.0) continue;
            DeterministicStrategy d = vertex_strategy(s, i);
            for (int x = 0; x < s.nA; ++x)
                for (int y = 0; y < s.nB; ++y)
                    rem.at(outcome_index(d.a[x]), outcome_index(d.b[y]), x, y) -= lp.x[i];
        }
        for (double& v : rem.p) v = std::max(0.0, v) / res.q_min;
        res.remainder = rem;
    } else {
        res.remainder = uniform_behavior(s);
    }
    return res;
}

/// Lower bound on the nonlocal content from a chained-inequality value:
/// q_min >= 1 - I_n, clamped to [0, 1].
inline double chained_nonlocal_content(double i_n) {
    return std::max(0.0, std::min(1.0, 1.0 - i_n));
}

struct Predictability {
    double delta = 0.5;            ///< bias-corrected guessing probability bound
    double delta_zero_bias = 0.5;  ///< 1/2 + I_n/2
};

/// Bound on the outcome guessing probability of any no-signaling theory from
/// a chained-inequality value. The zero-bias form is 1/2 + I_n/2; measured
/// data additionally carries a marginal bias nu, folded in additively by
/// default (delta = 1/2 + I_n/2 + bias). The correction term is deliberately
/// simple and the uncorrected value is always returned alongside.
inline Predictability predictability_bound(double i_n, double bias) {
    Predictability p;
    p.delta_zero_bias = 0.5 + std::max(0.0, i_n) / 2.0;
    p.delta = p.delta_zero_bias + std::max(0.0, bias);
    return p;
}

/// Functional value and multinomial standard error from raw counts.
struct UncertaintyReport {
    double value = 0.0;
    double std_error = 0.0;
    std::vector<std::vector<double>> correlator_errors;  ///< dE[x][y]
};

/// Evaluates a functional on the estimated behavior of a count record and
/// propagates independent per-pair multinomial variance through the
/// functional's linear coefficients (marginal coefficients spread uniformly
/// over the other party's settings, matching the averaged-marginal
/// estimator).
inline UncertaintyReport functional_error(const BellFunctional& f, const CountRecord& rec) {
    validate(f);
    if (!(rec.scenario == f.scenario))
        throw MissingSettings("count record does not cover the functional's scenario");
    const int nA = f.scenario.nA, nB = f.scenario.nB;

    Behavior est{f.scenario, std::vector<double>(4u * nA * nB, 0.0)};
    for (int x = 0; x < nA; ++x)
        for (int y = 0; y < nB; ++y) {
            const PairCounts& pc = rec.at(x, y);
            const long long n = pc.total();
            if (n < 1)
                throw MissingSettings("no counts for setting pair (" + std::to_string(x + 1) +
                                      "," + std::to_string(y + 1) + ")");
            est.at(0, 0, x, y) = static_cast<double>(pc.n_pp) / n;
            est.at(0, 1, x, y) = static_cast<double>(pc.n_pm) / n;
            est.at(1, 0, x, y) = static_cast<double>(pc.n_mp) / n;
            est.at(1, 1, x, y) = static_cast<double>(pc.n_mm) / n;
        }

    UncertaintyReport rep;
    rep.value = evaluate(f, est);
    rep.correlator_errors.assign(nA, std::vector<double>(nB, 0.0));

    double var = 0.0;
    for (int x = 0; x < nA; ++x)
        for (int y = 0; y < nB; ++y) {
            const long long n = rec.at(x, y).total();
            double mean = 0.0, second = 0.0, e = 0.0;
            for (int ai = 0; ai < 2; ++ai)
                for (int bi = 0; bi < 2; ++bi) {
                    const int a = outcome_sign(ai), bsg = outcome_sign(bi);
                    const double w = f.c[x][y] * a * bsg + f.mA[x] * a / nB + f.mB[y] * bsg / nA;
                    const double p = est.at(ai, bi, x, y);
                    mean += w * p;
                    second += w * w * p;
                    e += a * bsg * p;
                }
            var += (second - mean * mean) / n;
            rep.correlator_errors[x][y] = std::sqrt(std::max(0.0, 1.0 - e * e) / n);
        }
    rep.std_error = std::sqrt(std::max(0.0, var));
    return rep;
}

}  // namespace bell
