#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bell/analysis.hpp"
#include "bell/counts.hpp"
#include "bell/detail/rng.hpp"
#include "bell/optimize.hpp"

namespace bell {

namespace detail {

/// Small random rotation of a unit vector: angle ~ N(0, sigma) in a uniform
/// tangent direction.
inline Eigen::Vector3d jitter_direction(const Eigen::Vector3d& v, double sigma, Stream& rng) {
    if (sigma <= 0.0) return v;
    Eigen::Vector3d helper = std::abs(v.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    Eigen::Vector3d t1 = v.cross(helper).normalized();
    Eigen::Vector3d t2 = v.cross(t1);
    const double phi = 2.0 * std::numbers::pi * rng.unit();
    const double eps = normal(rng, sigma);
    Eigen::Vector3d t = std::cos(phi) * t1 + std::sin(phi) * t2;
    return (std::cos(eps) * v + std::sin(eps) * t).normalized();
}

}  // namespace detail

/// Monte Carlo coincidence counts for every setting pair of the plan. Per
/// pair: N ~ Poisson(rate * duration); outcomes multinomial from the noisy
/// Born-rule distribution with the pair's directions independently jittered.
/// Every pair owns an RNG stream keyed by (seed, x, y), so the record is
/// independent of acquisition scheduling; the seeded acquisition order is
/// recorded for completeness. Raw counts only, no post-processing.
inline CountRecord simulate_counts(const RunPlan& plan) {
    validate(plan);
    const Scenario s = plan.strategy.scenario();
    const TwoQubitState noisy = apply_noise(plan.strategy.state, plan.noise);
    const CorrelationData d = correlation_data(noisy);

    CountRecord rec;
    rec.scenario = s;
    rec.pairs.assign(static_cast<std::size_t>(s.nA) * s.nB, PairCounts{});
    rec.seed = plan.seed;
    rec.plan = plan;

    for (int x = 0; x < s.nA; ++x) {
        for (int y = 0; y < s.nB; ++y) {
            detail::Stream rng(detail::stream_key(plan.seed, x, y));
            const long long n = detail::poisson(rng, plan.rate * plan.duration);
            Eigen::Vector3d ax =
                detail::jitter_direction(plan.strategy.a[x].axis, plan.noise.angle_jitter, rng);
            Eigen::Vector3d by =
                detail::jitter_direction(plan.strategy.b[y].axis, plan.noise.angle_jitter, rng);
            const double E = ax.dot(d.T * by);
            const double EA = ax.dot(d.rA);
            const double EB = by.dot(d.rB);
            double probs[4];
            int idx = 0;
            for (int a = 1; a >= -1; a -= 2)
                for (int b = 1; b >= -1; b -= 2)
                    probs[idx++] = std::max(0.0, (1.0 + a * EA + b * EB + a * b * E) / 4.0);
            long long counts[4] = {0, 0, 0, 0};
            detail::multinomial(rng, n, probs, 4, counts);
            PairCounts& pc = rec.at(x, y);
            pc.n_pp = counts[0];
            pc.n_pm = counts[1];
            pc.n_mp = counts[2];
            pc.n_mm = counts[3];
            pc.duration_s = plan.duration;
        }
    }

    rec.acquisition_order.resize(rec.pairs.size());
    std::iota(rec.acquisition_order.begin(), rec.acquisition_order.end(), 0);
    if (plan.randomize_order) {
        detail::Stream rng(detail::stream_key(plan.seed, 0xACDCull, 0x0FDEull));
        for (std::size_t i = rec.acquisition_order.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng.unit() * i);
            if (j >= i) j = i - 1;
            std::swap(rec.acquisition_order[i - 1], rec.acquisition_order[j]);
        }
    }
    return rec;
}

struct EstimatedBehavior {
    Behavior behavior;
    std::vector<double> std_error;  ///< same indexing as behavior.p
};

/// p_hat = n/N per setting pair, with binomial standard errors.
inline EstimatedBehavior estimate_behavior(const CountRecord& rec) {
    const Scenario& s = rec.scenario;
    EstimatedBehavior est{Behavior{s, std::vector<double>(4u * s.nA * s.nB, 0.0)},
                          std::vector<double>(4u * s.nA * s.nB, 0.0)};
    for (int x = 0; x < s.nA; ++x)
        for (int y = 0; y < s.nB; ++y) {
            const PairCounts& pc = rec.at(x, y);
            const long long n = pc.total();
            if (n < 1)
                throw EmptySettingPair("no events for setting pair (" + std::to_string(x + 1) +
                                       "," + std::to_string(y + 1) + ")");
            const long long counts[4] = {pc.n_pp, pc.n_pm, pc.n_mp, pc.n_mm};
            int idx = 0;
            for (int ai = 0; ai < 2; ++ai)
                for (int bi = 0; bi < 2; ++bi) {
                    const double p = static_cast<double>(counts[idx++]) / n;
                    est.behavior.at(ai, bi, x, y) = p;
                    est.std_error[est.behavior.index(ai, bi, x, y)] =
                        std::sqrt(std::max(0.0, p * (1.0 - p) / n));
                }
        }
    return est;
}

// ---------------------------------------------------------------------------
// Reproduction of the headline experiments
// ---------------------------------------------------------------------------

struct ChshCircle {
    int points = 180;
};
struct ChainedScan {
    int n_max = 45;
};
struct TiltedScan {
    std::vector<double> taus;
    /// Optional per-tau state angles (degrees); when empty the state is
    /// seesaw-optimized per tau.
    std::vector<double> state_theta_deg;
};
struct MInequality {
    bool four_settings = false;  ///< false: M3322, true: M4322
    std::optional<double> state_theta_deg;
};
struct ElegantRun {};

using Experiment = std::variant<ChshCircle, ChainedScan, TiltedScan, MInequality, ElegantRun>;

/// Knobs shared by all reproduction runs. Durations default per experiment
/// (circle 1 s, chained 5 s with 20 s for n in [18, 21], tilted 15 s,
/// M inequalities 1200 s, elegant 100 s) unless overridden.
struct SimOverrides {
    NoiseModel noise{0.997, 1.0, 0.1 * std::numbers::pi / 180.0};
    double rate = 1000.0;
    std::optional<double> duration;
    std::uint64_t seed = 1;
    bool randomize_order = true;
    int seesaw_restarts = 24;  ///< for runs that derive settings by seesaw
};

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace detail {

struct PointResult {
    CountRecord record;
    EstimatedBehavior estimate;
};

inline PointResult run_point(const Strategy& st, const SimOverrides& ov, double duration,
                             std::uint64_t stream, std::vector<CountRecord>* sink) {
    RunPlan plan;
    plan.strategy = st;
    plan.noise = ov.noise;
    plan.rate = ov.rate;
    plan.duration = ov.duration.value_or(duration);
    plan.randomize_order = ov.randomize_order;
    plan.seed = stream_key(ov.seed, 0xB0B5ull, stream);
    PointResult pr{simulate_counts(plan), {}};
    pr.estimate = estimate_behavior(pr.record);
    if (sink) sink->push_back(pr.record);
    return pr;
}

inline double max_marginal_bias(const Correlators& c) {
    double bias = 0.0;
    for (double v : c.EA) bias = std::max(bias, std::abs(v));
    for (double v : c.EB) bias = std::max(bias, std::abs(v));
    return bias;
}

}  // namespace detail

/// Runs an experiment's setting generators and per-point simulations; rows
/// carry the same quantities as the published tables and figure data. When
/// `records` is non-null every CountRecord is appended to it (for
/// persistence).
inline ResultTable reproduce(const Experiment& exp, const SimOverrides& ov = {},
                             std::vector<CountRecord>* records = nullptr) {
    ResultTable table;

    if (const auto* circle = std::get_if<ChshCircle>(&exp)) {
        table.name = "chsh_circle";
        table.columns = {"theta", "S_CHSH", "dS_CHSH", "S_prime", "dS_prime", "radius"};
        const BellFunctional s = chsh(), sp = chsh_prime();
        for (int k = 0; k < circle->points; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / circle->points;
            auto pt = detail::run_point(circle_settings(theta), ov, 1.0, k, records);
            UncertaintyReport us = functional_error(s, pt.record);
            UncertaintyReport usp = functional_error(sp, pt.record);
            table.rows.push_back(
                {theta, us.value, us.std_error, usp.value, usp.std_error, std::hypot(us.value, usp.value)});
        }
        return table;
    }

    if (const auto* scan = std::get_if<ChainedScan>(&exp)) {
        if (scan->n_max < 2) throw InvalidN("chained scan needs n_max >= 2");
        table.name = "chained_scan";
        table.columns = {"n", "I_n", "dI_n", "nu_n", "delta_n", "ddelta_n", "q_min"};
        for (int n = 2; n <= scan->n_max; ++n) {
            const double duration = (n >= 18 && n <= 21) ? 20.0 : 5.0;
            auto pt = detail::run_point(chained_settings(n), ov, duration, n, records);
            UncertaintyReport u = functional_error(chained(n), pt.record);
            const double bias = detail::max_marginal_bias(correlators_of(pt.estimate.behavior));
            Predictability pred = predictability_bound(u.value, bias);
            table.rows.push_back({static_cast<double>(n), u.value, u.std_error, bias, pred.delta,
                                  u.std_error / 2.0, chained_nonlocal_content(u.value)});
        }
        return table;
    }

    if (const auto* scan = std::get_if<TiltedScan>(&exp)) {
        if (!scan->state_theta_deg.empty() && scan->state_theta_deg.size() != scan->taus.size())
            throw GuardError("tilted scan: taus and state angles must have equal length");
        table.name = "tilted_scan";
        table.columns = {"tau", "S_CHSH", "-E1-E2", "S_tau", "dS_tau", "local_bound", "theta"};
        for (std::size_t i = 0; i < scan->taus.size(); ++i) {
            const double tau = scan->taus[i];
            BellFunctional f = tilted(tau);
            SeesawConfig cfg;
            cfg.restarts = ov.seesaw_restarts;
            cfg.seed = detail::stream_key(ov.seed, 0x7117ull, i);
            double theta_deg;
            if (scan->state_theta_deg.empty()) {
                SeesawResult r = seesaw(f, cfg);
                theta_deg = state_angle_deg(r.strategy);
                cfg.restriction = Restriction::FixedState;
                cfg.fixed_state = r.strategy.state;
            } else {
                theta_deg = scan->state_theta_deg[i];
                cfg.restriction = Restriction::FixedState;
                cfg.fixed_state =
                    TwoQubitState::pure_angle(theta_deg * std::numbers::pi / 180.0);
            }
            SeesawResult r = seesaw(f, cfg);
            auto pt = detail::run_point(r.strategy, ov, 15.0, 1000 + i, records);
            UncertaintyReport u = functional_error(f, pt.record);
            Correlators c = correlators_of(pt.estimate.behavior);
            const double s_chsh = evaluate(chsh(), c);
            const double marg = -(c.EA[0] + c.EB[0]);
            table.rows.push_back(
                {tau, s_chsh, marg, u.value, u.std_error, local_bound(f).value, theta_deg});
        }
        return table;
    }

    if (const auto* m = std::get_if<MInequality>(&exp)) {
        table.name = m->four_settings ? "m4322" : "m3322";
        table.columns = {"value", "dvalue", "theta", "bound"};
        BellFunctional f = m->four_settings ? m4322() : m3322();
        const double theta_deg = m->state_theta_deg.value_or(m->four_settings ? 76.6 : 77.2);
        SeesawConfig cfg;
        cfg.restarts = ov.seesaw_restarts;
        cfg.seed = detail::stream_key(ov.seed, 0x3322ull, m->four_settings);
        cfg.restriction = Restriction::FixedState;
        cfg.fixed_state = TwoQubitState::pure_angle(theta_deg * std::numbers::pi / 180.0);
        SeesawResult r = seesaw(f, cfg);
        auto pt = detail::run_point(r.strategy, ov, 1200.0, 2000, records);
        UncertaintyReport u = functional_error(f, pt.record);
        table.rows.push_back({u.value, u.std_error, theta_deg, local_bound(f).value});
        return table;
    }

    // elegant
    table.name = "elegant";
    table.columns = {"S_E", "dS_E"};
    auto pt = detail::run_point(elegant_settings(), ov, 100.0, 3000, records);
    UncertaintyReport u = functional_error(elegant(), pt.record);
    table.rows.push_back({u.value, u.std_error});
    return table;
}

}  // namespace bell
