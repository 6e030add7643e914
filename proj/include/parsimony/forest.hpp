#pragma once

// Annealed recursive sampling of parsimonious decision trees. Each node costs
// one bit to mark leaf versus branch; a branch pays log2(k) bits for the
// feature and a fraction code for the threshold. Leaves carry Dirichlet count
// posteriors. A forest corrects the sampling bias with importance weights.
// Conventional entropy-split trees and bagging serve as baselines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "parsimony/codecs.hpp"
#include "parsimony/errors.hpp"
#include "parsimony/info.hpp"
#include "parsimony/rng.hpp"
#include "parsimony/special.hpp"

namespace parsimony {

struct TreeNode;
using TreeNodePtr = std::shared_ptr<const TreeNode>;

struct TreeNode {
    bool is_leaf = true;
    std::vector<std::uint64_t> counts;  // leaves: per-label training counts
    std::size_t feature = 0;            // branches
    BinaryFraction threshold{};         // branches: scaled-unit split point
    TreeNodePtr left, right;
};

inline TreeNodePtr make_leaf(std::vector<std::uint64_t> counts) {
    auto n = std::make_shared<TreeNode>();
    n->counts = std::move(counts);
    return n;
}

inline TreeNodePtr make_branch(std::size_t feature, BinaryFraction threshold, TreeNodePtr left,
                               TreeNodePtr right) {
    auto n = std::make_shared<TreeNode>();
    n->is_leaf = false;
    n->feature = feature;
    n->threshold = threshold;
    n->left = std::move(left);
    n->right = std::move(right);
    return n;
}

// Likelihood exponent per branch depth; depths beyond the list use 1. The
// default ignores the likelihood for the first two levels so deep structure
// gets proposed often enough to be weighted fairly later.
struct AnnealSchedule {
    std::vector<double> alpha = {0.0, 0.0};

    static AnnealSchedule flat() { return {{}}; }

    double at(std::size_t depth) const {
        return depth < alpha.size() ? alpha[depth] : 1.0;
    }
    void validate() const {
        for (const double a : alpha)
            if (!(a >= 0.0 && a <= 1.0)) throw OutOfRange("anneal exponent outside [0,1]");
    }
};

// Per-dimension affine map of the training range onto [0,1]. Constant
// dimensions collapse to 1/2. Points outside the range extend linearly, so
// comparisons against thresholds stay well defined without clamping.
struct FeatureScaler {
    std::vector<double> lo, hi;

    static FeatureScaler fit(const std::vector<std::vector<double>>& x) {
        if (x.empty()) throw OutOfRange("cannot fit a scaler to no data");
        FeatureScaler s;
        const std::size_t k = x.front().size();
        s.lo.assign(k, std::numeric_limits<double>::infinity());
        s.hi.assign(k, -std::numeric_limits<double>::infinity());
        for (const std::vector<double>& row : x) {
            if (row.size() != k) throw OutOfRange("ragged feature rows");
            for (std::size_t d = 0; d < k; ++d) {
                s.lo[d] = std::min(s.lo[d], row[d]);
                s.hi[d] = std::max(s.hi[d], row[d]);
            }
        }
        return s;
    }

    std::size_t dims() const { return lo.size(); }

    std::vector<double> scale(const std::vector<double>& raw) const {
        if (raw.size() != lo.size()) throw OutOfRange("feature dimension mismatch");
        std::vector<double> out(raw.size());
        for (std::size_t d = 0; d < raw.size(); ++d)
            out[d] = (hi[d] == lo[d]) ? 0.5 : (raw[d] - lo[d]) / (hi[d] - lo[d]);
        return out;
    }
};

struct ForestConfig {
    std::uint32_t trees = 1000;
    AnnealSchedule schedule{};
    IntCodeScheme threshold_z_code = IntCodeScheme::length_symbol(4);
    std::uint32_t z_cap = 10;
    bool exhaustive_candidates = false;
    std::size_t num_labels = 0;  // 0: one past the largest label seen, minimum 2
    std::uint64_t seed = 0;

    std::uint32_t effective_z_cap() const {
        return std::min(z_cap, max_fraction_z(threshold_z_code));
    }
};

inline std::size_t resolve_num_labels(const std::vector<std::size_t>& y, std::size_t requested) {
    std::size_t top = 0;
    for (const std::size_t label : y) top = std::max(top, label + 1);
    if (requested == 0) return std::max<std::size_t>(top, 2);
    if (requested < 2) throw OutOfRange("label alphabet needs at least two outcomes");
    if (top > requested) throw OutOfRange("label outside the declared alphabet");
    return requested;
}

namespace detail {

// All fractions with precision z strictly inside the open interval (a, b)
inline void fractions_in_gap(double a, double b, std::uint32_t z,
                             std::vector<BinaryFraction>& out) {
    const double denom = std::exp2(static_cast<double>(z) + 1.0);
    // index bounds widened by a margin; the strict comparison below is exact
    const double raw_lo = (a * denom + 1.0) / 2.0;
    const double raw_hi = (b * denom + 1.0) / 2.0;
    const std::uint64_t i_lo = raw_lo > 2.0 ? static_cast<std::uint64_t>(raw_lo) - 1 : 1;
    std::uint64_t i_hi = std::uint64_t{1} << z;
    if (raw_hi + 2.0 < static_cast<double>(i_hi)) i_hi = static_cast<std::uint64_t>(raw_hi) + 2;
    for (std::uint64_t i = i_lo; i <= i_hi; ++i) {
        const double q = static_cast<double>(2 * i - 1) / denom;
        if (q > a && q < b) out.emplace_back(z, i);
    }
}

}  // namespace detail

// Shortest-code fraction strictly between a and b; among equals, nearest the
// gap midpoint and then the smaller value.
inline std::optional<BinaryFraction> shortest_fraction_in_gap(double a, double b,
                                                              std::uint32_t z_cap) {
    for (std::uint32_t z = 0; z <= z_cap; ++z) {
        std::vector<BinaryFraction> found;
        detail::fractions_in_gap(a, b, z, found);
        if (found.empty()) continue;
        const double mid = 0.5 * (a + b);
        const BinaryFraction* best = &found.front();
        for (const BinaryFraction& f : found) {
            const double df = std::abs(f.value() - mid);
            const double db = std::abs(best->value() - mid);
            if (df < db - 1e-15) best = &f;
        }
        return *best;
    }
    return std::nullopt;
}

// One separating threshold per inter-point gap and dimension (or every
// representable one in exhaustive mode). Every returned split leaves both
// children nonempty; a node whose values are all equal yields no candidates.
inline std::vector<std::pair<std::size_t, BinaryFraction>> candidate_splits(
    const std::vector<std::vector<double>>& xs, const std::vector<std::size_t>& indices,
    std::uint32_t z_cap, bool exhaustive = false) {
    std::vector<std::pair<std::size_t, BinaryFraction>> out;
    if (indices.empty()) return out;
    const std::size_t k = xs[indices.front()].size();
    std::vector<double> values;
    for (std::size_t d = 0; d < k; ++d) {
        values.clear();
        for (const std::size_t i : indices) values.push_back(xs[i][d]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t g = 0; g + 1 < values.size(); ++g) {
            if (exhaustive) {
                std::vector<BinaryFraction> all;
                for (std::uint32_t z = 0; z <= z_cap; ++z)
                    detail::fractions_in_gap(values[g], values[g + 1], z, all);
                for (const BinaryFraction& f : all) out.emplace_back(d, f);
            } else if (const auto f =
                           shortest_fraction_in_gap(values[g], values[g + 1], z_cap)) {
                out.emplace_back(d, *f);
            }
        }
    }
    return out;
}

// Code cost of one node option. A leaf is the single indicator bit; a branch
// adds the feature index and the threshold fraction.
inline double node_prior_log2(std::optional<std::pair<std::size_t, BinaryFraction>> split,
                              std::size_t k, IntCodeScheme threshold_code) {
    if (!split) return -1.0;
    return -(1.0 + std::log2(static_cast<double>(k)) +
             fraction_encode(threshold_code, split->second).generalized_length());
}

inline double tree_length_bits(const TreeNodePtr& node, std::size_t k,
                               IntCodeScheme threshold_code) {
    if (node->is_leaf) return 1.0;
    return 1.0 + std::log2(static_cast<double>(k)) +
           fraction_encode(threshold_code, node->threshold).generalized_length() +
           tree_length_bits(node->left, k, threshold_code) +
           tree_length_bits(node->right, k, threshold_code);
}

// Unnormalized hyperposterior of a finished tree: the code-length prior of
// every node times the exact Dirichlet marginal of every leaf.
inline double tree_log2_posterior(const TreeNodePtr& node, std::size_t k,
                                  IntCodeScheme threshold_code) {
    if (node->is_leaf) return -1.0 + dirichlet_log_marginal(LabelCounts(node->counts));
    return -(1.0 + std::log2(static_cast<double>(k)) +
             fraction_encode(threshold_code, node->threshold).generalized_length()) +
           tree_log2_posterior(node->left, k, threshold_code) +
           tree_log2_posterior(node->right, k, threshold_code);
}

struct TreeDescription {
    TreeNodePtr root;
    double length_bits = 0.0;
    double log2_s = 0.0;          // probability this sampler run proposed this tree
    double log2_posterior = 0.0;  // unnormalized
};

namespace detail {

struct NodeOptions {
    std::vector<std::optional<std::pair<std::size_t, BinaryFraction>>> splits;  // [0] = leaf
    std::vector<double> sample_log2;  // normalized sampling log-probabilities
};

// Leaf-versus-split decision weights at one node: prior times the annealed
// child-leaf likelihood approximation.
inline NodeOptions node_options(const std::vector<std::vector<double>>& xs,
                                const std::vector<std::size_t>& y,
                                const std::vector<std::size_t>& indices, std::size_t num_labels,
                                const ForestConfig& cfg, std::size_t k, double alpha) {
    NodeOptions opt;
    std::vector<std::uint64_t> counts(num_labels, 0);
    for (const std::size_t i : indices) counts[y[i]] += 1;

    opt.splits.push_back(std::nullopt);
    opt.sample_log2.push_back(-1.0 +
                              alpha * dirichlet_log_marginal(LabelCounts(counts)));

    for (const auto& split : candidate_splits(xs, indices, cfg.effective_z_cap(),
                                              cfg.exhaustive_candidates)) {
        std::vector<std::uint64_t> left(num_labels, 0), right(num_labels, 0);
        const double thr = split.second.value();
        for (const std::size_t i : indices)
            (xs[i][split.first] < thr ? left : right)[y[i]] += 1;
        const double approx = dirichlet_log_marginal(LabelCounts(left)) +
                              dirichlet_log_marginal(LabelCounts(right));
        opt.splits.push_back(split);
        opt.sample_log2.push_back(node_prior_log2(split, k, cfg.threshold_z_code) +
                                  alpha * approx);
    }
    const double mass = log_sum_exp2(opt.sample_log2);
    for (double& w : opt.sample_log2) w -= mass;
    return opt;
}

}  // namespace detail

// Recursive tree sampling. The node decision draws leaf-or-split from the
// annealed weights; children recurse one depth down. S multiplies the
// decision probabilities actually taken, the posterior multiplies the exact
// unannealed node terms, so annealing shifts proposal mass only.
inline TreeDescription parsimony_node(const std::vector<std::vector<double>>& xs,
                                      const std::vector<std::size_t>& y,
                                      const std::vector<std::size_t>& indices,
                                      std::size_t num_labels, const ForestConfig& cfg,
                                      std::size_t depth, Rng& rng) {
    if (indices.empty()) throw OutOfRange("a tree node needs at least one point");
    const std::size_t k = xs[indices.front()].size();
    const detail::NodeOptions opt = detail::node_options(xs, y, indices, num_labels, cfg, k,
                                                         cfg.schedule.at(depth));

    std::size_t pick = 0;
    if (opt.splits.size() > 1) {
        double u = rng.uniform();
        for (std::size_t c = 0; c < opt.sample_log2.size(); ++c) {
            u -= std::exp2(opt.sample_log2[c]);
            if (u <= 0.0) {
                pick = c;
                break;
            }
            if (c + 1 == opt.sample_log2.size()) pick = c;
        }
    }

    TreeDescription out;
    out.log2_s = (opt.splits.size() > 1) ? opt.sample_log2[pick] : 0.0;  // forced leaf

    if (!opt.splits[pick]) {
        std::vector<std::uint64_t> counts(num_labels, 0);
        for (const std::size_t i : indices) counts[y[i]] += 1;
        out.root = make_leaf(std::move(counts));
        out.length_bits = 1.0;
        out.log2_posterior =
            -1.0 + dirichlet_log_marginal(LabelCounts(out.root->counts));
        return out;
    }

    const auto [feature, threshold] = *opt.splits[pick];
    const double thr = threshold.value();
    std::vector<std::size_t> left_idx, right_idx;
    for (const std::size_t i : indices)
        (xs[i][feature] < thr ? left_idx : right_idx).push_back(i);

    const TreeDescription left =
        parsimony_node(xs, y, left_idx, num_labels, cfg, depth + 1, rng);
    const TreeDescription right =
        parsimony_node(xs, y, right_idx, num_labels, cfg, depth + 1, rng);

    const double node_bits =
        1.0 + std::log2(static_cast<double>(k)) +
        fraction_encode(cfg.threshold_z_code, threshold).generalized_length();
    out.root = make_branch(feature, threshold, left.root, right.root);
    out.length_bits = node_bits + left.length_bits + right.length_bits;
    out.log2_s += left.log2_s + right.log2_s;
    out.log2_posterior = -node_bits + left.log2_posterior + right.log2_posterior;
    return out;
}

// Probability that parsimony_node would emit exactly this tree, composed from
// the same per-node decision weights. Lets externally enumerated trees be
// checked against the sampler (their S values must sum to one).
inline double tree_log2_proposal(const TreeNodePtr& node,
                                 const std::vector<std::vector<double>>& xs,
                                 const std::vector<std::size_t>& y,
                                 const std::vector<std::size_t>& indices,
                                 std::size_t num_labels, const ForestConfig& cfg,
                                 std::size_t depth) {
    if (indices.empty()) throw OutOfRange("a tree node needs at least one point");
    const std::size_t k = xs[indices.front()].size();
    const detail::NodeOptions opt = detail::node_options(xs, y, indices, num_labels, cfg, k,
                                                         cfg.schedule.at(depth));
    if (opt.splits.size() == 1) {
        if (!node->is_leaf) throw Malformed("tree splits where no candidate exists");
        return 0.0;
    }
    std::size_t pick = opt.splits.size();
    for (std::size_t c = 0; c < opt.splits.size(); ++c) {
        if (node->is_leaf && !opt.splits[c]) pick = c;
        if (!node->is_leaf && opt.splits[c] && opt.splits[c]->first == node->feature &&
            opt.splits[c]->second == node->threshold)
            pick = c;
    }
    if (pick == opt.splits.size()) throw Malformed("tree uses a split outside the candidate set");
    double s = opt.sample_log2[pick];
    if (!node->is_leaf) {
        const double thr = node->threshold.value();
        std::vector<std::size_t> left_idx, right_idx;
        for (const std::size_t i : indices)
            (xs[i][node->feature] < thr ? left_idx : right_idx).push_back(i);
        s += tree_log2_proposal(node->left, xs, y, left_idx, num_labels, cfg, depth + 1);
        s += tree_log2_proposal(node->right, xs, y, right_idx, num_labels, cfg, depth + 1);
    }
    return s;
}

struct WeightedForest {
    std::vector<TreeDescription> trees;
    std::vector<double> weights;  // normalized importance weights
    FeatureScaler scaler;
    std::size_t num_labels = 2;
    double ess = 0.0;  // 1 / sum of squared weights
};

inline WeightedForest sample_forest(const std::vector<std::vector<double>>& x,
                                    const std::vector<std::size_t>& y,
                                    const ForestConfig& cfg) {
    if (cfg.trees < 1) throw OutOfRange("need at least one tree");
    if (x.size() != y.size() || x.empty()) throw OutOfRange("features and labels must align");
    cfg.schedule.validate();

    WeightedForest forest;
    forest.scaler = FeatureScaler::fit(x);
    forest.num_labels = resolve_num_labels(y, cfg.num_labels);

    std::vector<std::vector<double>> xs;
    xs.reserve(x.size());
    for (const std::vector<double>& row : x) xs.push_back(forest.scaler.scale(row));
    std::vector<std::size_t> indices(x.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;

    std::vector<double> log2w(cfg.trees);
    forest.trees.reserve(cfg.trees);
    for (std::uint32_t t = 0; t < cfg.trees; ++t) {
        Rng rng = make_rng(cfg.seed, "forest", t);
        forest.trees.push_back(
            parsimony_node(xs, y, indices, forest.num_labels, cfg, 0, rng));
        log2w[t] = forest.trees.back().log2_posterior - forest.trees.back().log2_s;
    }
    const double mass = log_sum_exp2(log2w);
    forest.weights.reserve(cfg.trees);
    double sq = 0.0;
    for (const double lw : log2w) {
        const double w = std::exp2(lw - mass);
        forest.weights.push_back(w);
        sq += w * w;
    }
    forest.ess = 1.0 / sq;
    return forest;
}

// Laplace-smoothed label posterior of the leaf this point routes to
inline DiscreteDist tree_predict(const TreeNodePtr& node, const std::vector<double>& scaled_x) {
    const TreeNode* cur = node.get();
    while (!cur->is_leaf)
        cur = (scaled_x[cur->feature] < cur->threshold.value()) ? cur->left.get()
                                                                : cur->right.get();
    return laplace_rule(LabelCounts(cur->counts));
}

inline DiscreteDist predict(const WeightedForest& forest, const std::vector<double>& x_raw) {
    const std::vector<double> xs = forest.scaler.scale(x_raw);
    std::vector<double> acc(forest.num_labels, 0.0);
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        const DiscreteDist p = tree_predict(forest.trees[t].root, xs);
        for (std::size_t l = 0; l < acc.size(); ++l) acc[l] += forest.weights[t] * p[l];
    }
    return DiscreteDist::from_weights(std::move(acc));
}

// Conventional baseline pieces

struct ConventionalNode;
using ConventionalNodePtr = std::shared_ptr<const ConventionalNode>;

struct ConventionalNode {
    bool is_leaf = true;
    std::vector<double> probs;  // leaves: sample label frequencies
    std::size_t feature = 0;    // branches
    double threshold = 0.0;     // branches: raw-unit midpoint
    ConventionalNodePtr left, right;
};

namespace detail {

inline double counts_entropy(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (const std::uint64_t c : counts) total += c;
    if (total == 0) return 0.0;
    double h = 0.0;
    for (const std::uint64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace detail

// Information gain of a two-way split, in bits; zero when one side is empty
inline double entropy_reduction(const std::vector<std::uint64_t>& left,
                                const std::vector<std::uint64_t>& right) {
    std::vector<std::uint64_t> parent(left.size(), 0);
    std::uint64_t nl = 0, nr = 0;
    for (std::size_t i = 0; i < left.size(); ++i) {
        parent[i] = left[i] + right[i];
        nl += left[i];
        nr += right[i];
    }
    const double n = static_cast<double>(nl + nr);
    if (n == 0.0) return 0.0;
    return detail::counts_entropy(parent) -
           (static_cast<double>(nl) / n) * detail::counts_entropy(left) -
           (static_cast<double>(nr) / n) * detail::counts_entropy(right);
}

namespace detail {

inline ConventionalNodePtr grow_entropy_tree(const std::vector<std::vector<double>>& x,
                                             const std::vector<std::size_t>& y,
                                             const std::vector<std::size_t>& indices,
                                             std::size_t num_labels) {
    std::vector<std::uint64_t> counts(num_labels, 0);
    for (const std::size_t i : indices) counts[y[i]] += 1;

    const std::size_t k = x[indices.front()].size();
    double best_gain = 0.0;
    std::size_t best_dim = 0;
    double best_thr = 0.0;
    std::vector<double> values;
    for (std::size_t d = 0; d < k; ++d) {
        values.clear();
        for (const std::size_t i : indices) values.push_back(x[i][d]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t g = 0; g + 1 < values.size(); ++g) {
            const double thr = 0.5 * (values[g] + values[g + 1]);
            std::vector<std::uint64_t> left(num_labels, 0), right(num_labels, 0);
            for (const std::size_t i : indices) (x[i][d] < thr ? left : right)[y[i]] += 1;
            const double gain = entropy_reduction(left, right);
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best_dim = d;
                best_thr = thr;
            }
        }
    }

    if (best_gain <= 1e-12) {
        auto leaf = std::make_shared<ConventionalNode>();
        leaf->probs.assign(num_labels, 0.0);
        const double total = static_cast<double>(indices.size());
        for (std::size_t l = 0; l < num_labels; ++l)
            leaf->probs[l] = static_cast<double>(counts[l]) / total;
        return leaf;
    }

    std::vector<std::size_t> left_idx, right_idx;
    for (const std::size_t i : indices)
        (x[i][best_dim] < best_thr ? left_idx : right_idx).push_back(i);
    auto node = std::make_shared<ConventionalNode>();
    node->is_leaf = false;
    node->feature = best_dim;
    node->threshold = best_thr;
    node->left = grow_entropy_tree(x, y, left_idx, num_labels);
    node->right = grow_entropy_tree(x, y, right_idx, num_labels);
    return node;
}

}  // namespace detail

// Greedy tree on raw features: split while some midpoint threshold reduces
// label entropy, predict leaf sample frequencies (no smoothing).
inline ConventionalNodePtr bag_tree(const std::vector<std::vector<double>>& x,
                                    const std::vector<std::size_t>& y,
                                    const std::vector<std::size_t>& indices,
                                    std::size_t num_labels) {
    if (indices.empty()) throw OutOfRange("a tree needs at least one point");
    return detail::grow_entropy_tree(x, y, indices, num_labels);
}

inline ConventionalNodePtr entropy_split_tree(const std::vector<std::vector<double>>& x,
                                              const std::vector<std::size_t>& y,
                                              std::size_t num_labels = 0) {
    if (x.size() != y.size() || x.empty()) throw OutOfRange("features and labels must align");
    std::vector<std::size_t> indices(x.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    return bag_tree(x, y, indices, resolve_num_labels(y, num_labels));
}

inline DiscreteDist predict(const ConventionalNodePtr& tree, const std::vector<double>& x_raw) {
    const ConventionalNode* cur = tree.get();
    while (!cur->is_leaf)
        cur = (x_raw[cur->feature] < cur->threshold) ? cur->left.get() : cur->right.get();
    return DiscreteDist::from_weights(cur->probs);
}

struct BaggedForest {
    std::vector<ConventionalNodePtr> trees;
    std::size_t num_labels = 2;
};

// Bootstrap aggregation: each tree sees an n-with-replacement resample and
// predictions average with uniform weights.
inline BaggedForest bagging(const std::vector<std::vector<double>>& x,
                            const std::vector<std::size_t>& y, std::uint32_t trees,
                            std::size_t num_labels = 0, std::uint64_t seed = 0) {
    if (trees < 1) throw OutOfRange("need at least one tree");
    if (x.size() != y.size() || x.empty()) throw OutOfRange("features and labels must align");
    BaggedForest forest;
    forest.num_labels = resolve_num_labels(y, num_labels);
    forest.trees.reserve(trees);
    for (std::uint32_t t = 0; t < trees; ++t) {
        Rng rng = make_rng(seed, "bagging", t);
        std::vector<std::size_t> indices(x.size());
        for (std::size_t i = 0; i < indices.size(); ++i)
            indices[i] = static_cast<std::size_t>(rng.uniform_below(x.size()));
        forest.trees.push_back(bag_tree(x, y, indices, forest.num_labels));
    }
    return forest;
}

inline DiscreteDist predict(const BaggedForest& forest, const std::vector<double>& x_raw) {
    std::vector<double> acc(forest.num_labels, 0.0);
    for (const ConventionalNodePtr& tree : forest.trees) {
        const DiscreteDist p = predict(tree, x_raw);
        for (std::size_t l = 0; l < acc.size(); ++l) acc[l] += p[l];
    }
    for (double& v : acc) v /= static_cast<double>(forest.trees.size());
    return DiscreteDist::from_weights(std::move(acc));
}

}  // namespace parsimony
