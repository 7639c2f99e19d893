// SPDX-License-Identifier: Apache-2.0

#include "vendi/scenarios.hpp"

#include <fmt/format.h>
#include <random>

namespace vendi {

Collection generate_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
    if (spec.classes.empty()) throw InvalidInput("scenario needs at least one class");
    for (const auto& cls : spec.classes)
        if (cls.count < 1) throw InvalidInput("class counts must be >= 1");
    if (spec.partial_match_weight < 0.0 || spec.partial_match_weight > 1.0)
        throw InvalidInput("partial-match weight must lie in [0, 1]");
    if (spec.intra_class_noise < 0.0 || spec.intra_class_noise > 1.0)
        throw InvalidInput("intra-class noise must lie in [0, 1]");

    std::mt19937_64 engine(seed);
    auto uniform = [&engine]() {
        return static_cast<double>(engine() >> 11) / 9007199254740992.0;
    };

    Collection c;
    std::int64_t fresh = 0; // counter for unique noise categories
    bool perturb_color = true;
    for (const auto& cls : spec.classes) {
        for (std::int64_t i = 0; i < cls.count; ++i) {
            ShapeColorToken token{cls.shape, cls.color};
            if (spec.intra_class_noise > 0.0 && uniform() < spec.intra_class_noise) {
                // Perturb one attribute to a fresh category: similarity to
                // classmates drops from 1 to the partial-match weight.
                if (perturb_color)
                    token.color = fmt::format("noise-{}", fresh++);
                else
                    token.shape = fmt::format("noise-{}", fresh++);
                perturb_color = !perturb_color;
            }
            c.items.emplace_back(std::move(token));
        }
    }
    return c;
}

namespace {

std::vector<PanelRow> score_collection(const std::string& panel, double param,
                                       const Collection& c, double weight,
                                       const std::vector<Order>& qs) {
    const auto reports = score_profile(c, Kernel::shape_color(weight), qs);
    std::vector<PanelRow> rows;
    rows.reserve(reports.size());
    for (const auto& r : reports) rows.push_back({panel, param, r.q, r.score});
    return rows;
}

ScenarioSpec distinct_classes(std::int64_t k, std::int64_t count_each) {
    ScenarioSpec spec;
    for (std::int64_t i = 0; i < k; ++i)
        spec.classes.push_back(
            {fmt::format("shape-{}", i), fmt::format("color-{}", i), count_each});
    return spec;
}

void append(std::vector<PanelRow>& into, std::vector<PanelRow> rows) {
    into.insert(into.end(), rows.begin(), rows.end());
}

} // namespace

std::vector<PanelRow> panel_balanced(const std::vector<Order>& qs) {
    std::vector<PanelRow> rows;
    for (std::int64_t k = 2; k <= 8; ++k) {
        const Collection c = generate_scenario(distinct_classes(k, 5), 0);
        append(rows, score_collection("A", static_cast<double>(k), c, 0.5, qs));
    }
    return rows;
}

std::vector<PanelRow> panel_imbalanced(const std::vector<Order>& qs) {
    ScenarioSpec spec = distinct_classes(4, 1);
    spec.classes[0].count = 20;
    spec.classes[1].count = 20;
    const Collection c = generate_scenario(spec, 0);
    return score_collection("B", 4.0, c, 0.5, qs);
}

std::vector<PanelRow> panel_composition(const std::vector<Order>& qs) {
    // Level L: of 4 classes (distinct shapes), L have their own color, the
    // rest share "color-common". Higher L = less cross-class similarity.
    std::vector<PanelRow> rows;
    constexpr std::int64_t k = 4;
    for (std::int64_t level = 0; level <= k; ++level) {
        ScenarioSpec spec = distinct_classes(k, 5);
        for (std::int64_t i = level; i < k; ++i) spec.classes[static_cast<std::size_t>(i)].color = "color-common";
        const Collection c = generate_scenario(spec, 0);
        append(rows, score_collection("C", static_cast<double>(level), c, 0.5, qs));
    }
    return rows;
}

std::vector<PanelRow> panel_correlation(const std::vector<Order>& qs) {
    // 3 x 3 shape-color grid; cell (i, j) holds 16 (1 - rho) items off the
    // diagonal and 16 + 32 rho on it, so rho = 1 is perfectly correlated
    // attributes and rho = 0 an independent uniform grid. C = 144 for
    // every rho.
    std::vector<PanelRow> rows;
    for (const double rho : {0.0, 0.5, 1.0}) {
        ScenarioSpec spec;
        for (std::int64_t i = 0; i < 3; ++i)
            for (std::int64_t j = 0; j < 3; ++j) {
                const double count =
                    i == j ? 16.0 + 32.0 * rho : 16.0 * (1.0 - rho);
                if (count < 0.5) continue;
                spec.classes.push_back({fmt::format("shape-{}", i),
                                        fmt::format("color-{}", j),
                                        static_cast<std::int64_t>(count + 0.5)});
            }
        const Collection c = generate_scenario(spec, 0);
        append(rows, score_collection("D", rho, c, 0.5, qs));
    }
    return rows;
}

std::vector<PanelRow> panel_variance(const std::vector<Order>& qs) {
    // Deterministic noise realization: the first floor(noise * count) items
    // of each class get a unique color.
    std::vector<PanelRow> rows;
    constexpr std::int64_t k = 4;
    constexpr std::int64_t per_class = 8;
    for (const double noise : {0.0, 0.25, 0.5}) {
        Collection c;
        std::int64_t fresh = 0;
        for (std::int64_t cls = 0; cls < k; ++cls) {
            const auto perturbed =
                static_cast<std::int64_t>(noise * static_cast<double>(per_class));
            for (std::int64_t i = 0; i < per_class; ++i) {
                ShapeColorToken token{fmt::format("shape-{}", cls), fmt::format("color-{}", cls)};
                if (i < perturbed) token.color = fmt::format("noise-{}", fresh++);
                c.items.emplace_back(std::move(token));
            }
        }
        append(rows, score_collection("E", noise, c, 0.5, qs));
    }
    return rows;
}

std::vector<PanelRow> evaluate_panel(char panel, const std::vector<Order>& qs,
                                     std::uint64_t /*seed*/) {
    switch (panel) {
        case 'A': return panel_balanced(qs);
        case 'B': return panel_imbalanced(qs);
        case 'C': return panel_composition(qs);
        case 'D': return panel_correlation(qs);
        case 'E': return panel_variance(qs);
        default: throw InvalidInput(fmt::format("unknown panel '{}'", panel));
    }
}

std::vector<PanelRow> evaluate_panels(const std::vector<Order>& qs, std::uint64_t seed) {
    std::vector<PanelRow> rows;
    for (const char panel : {'A', 'B', 'C', 'D', 'E'}) append(rows, evaluate_panel(panel, qs, seed));
    return rows;
}

std::vector<double> missing_mode_sensitivity(const Collection& full, const Collection& reduced,
                                             const Kernel& kernel, const std::vector<Order>& qs) {
    const auto full_scores = score_profile(full, kernel, qs);
    const auto reduced_scores = score_profile(reduced, kernel, qs);
    std::vector<double> diffs;
    diffs.reserve(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i)
        diffs.push_back(100.0 * (full_scores[i].score - reduced_scores[i].score) /
                        full_scores[i].score);
    return diffs;
}

} // namespace vendi
