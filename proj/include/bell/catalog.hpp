#pragma once

#include <optional>
#include <string>

#include "bell/functionals.hpp"
#include "bell/quantum.hpp"

namespace bell {

/// Builds one of the bundled inequalities by name. `tilted` requires tau,
/// `chained` requires n.
inline BellFunctional make_named_functional(const std::string& name, std::optional<double> tau = {},
                                            std::optional<int> n = {}) {
    if (name == "chsh") return chsh();
    if (name == "chsh-prime" || name == "chsh_prime") return chsh_prime();
    if (name == "tilted") {
        if (!tau) throw GuardError("tilted requires --tau");
        return tilted(*tau);
    }
    if (name == "chained") {
        if (!n) throw GuardError("chained requires --n");
        return chained(*n);
    }
    if (name == "m3322") return m3322();
    if (name == "m4322") return m4322();
    if (name == "elegant") return elegant();
    throw GuardError("unknown functional '" + name +
                     "' (expected chsh, chsh-prime, tilted, chained, m3322, m4322, elegant)");
}

/// The ideal strategy naturally paired with a bundled inequality, when one
/// exists.
inline std::optional<Strategy> ideal_strategy_for(const std::string& name,
                                                  std::optional<double> tau = {},
                                                  std::optional<int> n = {}) {
    if (name == "chsh") return circle_settings(0.0);
    if (name == "chsh-prime" || name == "chsh_prime") return circle_settings(std::numbers::pi / 2);
    if (name == "chained" && n) return chained_settings(*n);
    if (name == "elegant") return elegant_settings();
    return std::nullopt;
}

}  // namespace bell
