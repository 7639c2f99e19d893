// SPDX-License-Identifier: Apache-2.0

#ifndef VENDI_SCENARIOS_HPP
#define VENDI_SCENARIOS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vendi/kernels.hpp"
#include "vendi/scores.hpp"

namespace vendi {

struct ScenarioClass {
    std::string shape;
    std::string color;
    std::int64_t count = 1;
};

struct ScenarioSpec {
    std::vector<ScenarioClass> classes;
    double partial_match_weight = 0.5;
    double intra_class_noise = 0.0; // probability of perturbing one attribute of an item
};

/// Row of a panel evaluation table.
struct PanelRow {
    std::string panel;
    double param = 0.0; // panel-specific sweep parameter (K, rho, noise, ...)
    Order q;
    double score = 0.0;
};

/// Materialize a spec into shape-color tokens. Noise replaces an item's
/// color (or shape, alternating) with a unique fresh category.
[[nodiscard]] Collection generate_scenario(const ScenarioSpec& spec, std::uint64_t seed);

/// Panel A: balanced K-class collections, K in [2, 8]; score should equal
/// K for every q.
[[nodiscard]] std::vector<PanelRow> panel_balanced(const std::vector<Order>& qs);

/// Panel B: imbalanced counts (20, 20, 1, 1) over 4 distinct classes.
[[nodiscard]] std::vector<PanelRow> panel_imbalanced(const std::vector<Order>& qs);

/// Panel C: similarity composition; at level L of K classes, L classes
/// carry a distinct color, the rest share one (swept L = 0..K).
[[nodiscard]] std::vector<PanelRow> panel_composition(const std::vector<Order>& qs);

/// Panel D: shape-color correlation rho in {0, 0.5, 1}; deterministic
/// per-cell counts on a 3 x 3 shape-color grid.
[[nodiscard]] std::vector<PanelRow> panel_correlation(const std::vector<Order>& qs);

/// Panel E: intra-class variance; a deterministic fraction of each class
/// gets a unique color (swept noise = 0, 0.25, 0.5).
[[nodiscard]] std::vector<PanelRow> panel_variance(const std::vector<Order>& qs);

[[nodiscard]] std::vector<PanelRow> evaluate_panel(char panel, const std::vector<Order>& qs,
                                                   std::uint64_t seed);

/// All five panels.
[[nodiscard]] std::vector<PanelRow> evaluate_panels(const std::vector<Order>& qs,
                                                    std::uint64_t seed = 0);

/// 100 * (VS_q(full) - VS_q(reduced)) / VS_q(full) per order.
[[nodiscard]] std::vector<double> missing_mode_sensitivity(const Collection& full,
                                                           const Collection& reduced,
                                                           const Kernel& kernel,
                                                           const std::vector<Order>& qs);

} // namespace vendi

#endif // VENDI_SCENARIOS_HPP
