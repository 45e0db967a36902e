// Forest extension: distribute floor(k/2) site ranges across the
// concatenated in-order traversal; trees covered by one range get plain
// spanners, trees straddling ranges get Steiner spanners sized by the
// number of ranges they touch.
#pragma once

#include <vector>

#include "geospan/core.hpp"
#include "geospan/steiner_tree.hpp"
#include "geospan/tree_spanner.hpp"

namespace geospan {

struct ForestPlan {
    int k_prime = 0;
    int range_size = 0;
    struct TreePlan {
        int sites = 0;
        int first_range = -1;
        int last_range = -1;
        bool multi_range = false;
        int steiner_budget = 0;  // K for multi-range trees
    };
    std::vector<TreePlan> trees;
};

/// Classifies every tree against the k' = floor(k/2) contiguous ranges
/// over the concatenated site order.
inline ForestPlan plan_forest(const Forest& forest, int k) {
    if (k < 0) throw input_error("k must be nonnegative");
    ForestPlan plan;
    plan.k_prime = k / 2;
    int n = forest.site_count();
    plan.trees.resize(forest.trees.size());
    if (n == 0) return plan;
    plan.range_size = plan.k_prime > 0 ? (n + plan.k_prime - 1) / plan.k_prime : n;
    int cursor = 0;
    for (size_t i = 0; i < forest.trees.size(); ++i) {
        auto& tp = plan.trees[i];
        tp.sites = forest.trees[i].site_count();
        if (tp.sites == 0) continue;
        int start = cursor;
        int end = cursor + tp.sites;  // half-open
        cursor = end;
        if (plan.k_prime == 0) {
            tp.first_range = tp.last_range = 0;
            continue;
        }
        tp.first_range = start / plan.range_size;
        tp.last_range = (end - 1) / plan.range_size;
        tp.multi_range = tp.first_range != tp.last_range;
        if (tp.multi_range) tp.steiner_budget = tp.last_range - tp.first_range + 1;
    }
    int total = 0;
    for (const auto& tp : plan.trees) total += tp.steiner_budget;
    check(total <= 2 * plan.k_prime, "forest Steiner budget stays within 2k'");
    return plan;
}

/// 2t-spanner for the forest: spanner property per tree, at most k
/// Steiner points overall, no cross-tree links.
inline SpannerGraph build_forest_spanner(const Forest& forest, int t, int k) {
    if (t < 1) throw input_error("t must be a positive integer");
    for (const auto& tree : forest.trees)
        if (tree.vertex_count() > 0) tree.validate();
    ForestPlan plan = plan_forest(forest, k);
    SpannerGraph graph(MetricTag::Forest);
    int used = 0;
    for (size_t i = 0; i < forest.trees.size(); ++i) {
        const auto& tree = forest.trees[i];
        const auto& tp = plan.trees[i];
        if (tp.sites == 0) continue;
        int budget = tp.multi_range ? std::min(tp.steiner_budget, tp.sites) : 0;
        used += build_steiner_spanner_into(tree, t, budget, graph, static_cast<int>(i));
    }
    check(used <= k, "forest Steiner budget respected");
    return graph;
}

}  // namespace geospan
