#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "parsimony/forest.hpp"
#include "parsimony/rng.hpp"

using namespace parsimony;

namespace {

// preorder structural key, enough to bucket sampled trees
std::string tree_key(const TreeNodePtr& node) {
    if (node->is_leaf) {
        std::string s = "L(";
        for (const std::uint64_t c : node->counts) s += std::to_string(c) + ",";
        return s + ")";
    }
    return "B(" + std::to_string(node->feature) + ";" + std::to_string(node->threshold.z) +
           "," + std::to_string(node->threshold.i) + ";" + tree_key(node->left) + ";" +
           tree_key(node->right) + ")";
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

// every tree the sampler could construct, by recursive expansion of the
// candidate sets; feasible only for tiny datasets
std::vector<TreeNodePtr> enumerate_trees(const std::vector<std::vector<double>>& xs,
                                         const std::vector<std::size_t>& y,
                                         const std::vector<std::size_t>& indices,
                                         std::size_t num_labels, const ForestConfig& cfg) {
    std::vector<TreeNodePtr> out;
    std::vector<std::uint64_t> counts(num_labels, 0);
    for (const std::size_t i : indices) counts[y[i]] += 1;
    out.push_back(make_leaf(counts));
    for (const auto& [feature, threshold] :
         candidate_splits(xs, indices, cfg.effective_z_cap(), cfg.exhaustive_candidates)) {
        std::vector<std::size_t> left_idx, right_idx;
        for (const std::size_t i : indices)
            (xs[i][feature] < threshold.value() ? left_idx : right_idx).push_back(i);
        for (const TreeNodePtr& l : enumerate_trees(xs, y, left_idx, num_labels, cfg))
            for (const TreeNodePtr& r : enumerate_trees(xs, y, right_idx, num_labels, cfg))
                out.push_back(make_branch(feature, threshold, l, r));
    }
    return out;
}

// the three-point alternating-label line, the smallest instance with nesting
const std::vector<std::vector<double>> kLineX = {{0.0}, {0.5}, {1.0}};
const std::vector<std::size_t> kLineY = {0, 1, 0};

}  // namespace

TEST_SUITE("forest") {

TEST_CASE("feature scaler") {
    const FeatureScaler s = FeatureScaler::fit({{0.2, 5.0}, {0.8, 5.0}, {0.5, 5.0}});
    CHECK(s.dims() == 2);
    CHECK(s.scale({0.2, 5.0})[0] == doctest::Approx(0.0));
    CHECK(s.scale({0.8, 5.0})[0] == doctest::Approx(1.0));
    CHECK(s.scale({0.5, 5.0})[0] == doctest::Approx(0.5));
    // constant dimensions pin to the middle
    CHECK(s.scale({0.5, 5.0})[1] == doctest::Approx(0.5));
    CHECK(s.scale({0.5, 7.0})[1] == doctest::Approx(0.5));
    // out-of-range points extend linearly, no clamping
    CHECK(s.scale({1.4, 5.0})[0] == doctest::Approx(2.0));
    CHECK(s.scale({-0.4, 5.0})[0] == doctest::Approx(-1.0));
    CHECK_THROWS_AS(s.scale({1.0}), OutOfRange);
    CHECK_THROWS_AS(FeatureScaler::fit({}), OutOfRange);
}

TEST_CASE("candidate splits") {
    SUBCASE("two points get the half threshold") {
        const FeatureScaler s = FeatureScaler::fit({{0.2}, {0.8}});
        const std::vector<std::vector<double>> xs = {s.scale({0.2}), s.scale({0.8})};
        const auto splits = candidate_splits(xs, all_indices(2), 10);
        REQUIRE(splits.size() == 1);
        CHECK(splits[0].first == 0);
        CHECK(splits[0].second == BinaryFraction(0, 1));
    }
    SUBCASE("one point separates nothing") {
        CHECK(candidate_splits({{0.4}}, all_indices(1), 10).empty());
    }
    SUBCASE("each gap gets its own minimal precision fraction") {
        const FeatureScaler s = FeatureScaler::fit({{0.1}, {0.2}, {0.9}});
        const std::vector<std::vector<double>> xs = {s.scale({0.1}), s.scale({0.2}),
                                                     s.scale({0.9})};
        const auto splits = candidate_splits(xs, all_indices(3), 10);
        REQUIRE(splits.size() == 2);
        CHECK(splits[0].second == BinaryFraction(3, 1));  // 1/16 inside (0, 1/8)
        CHECK(splits[1].second == BinaryFraction(0, 1));  // 1/2 inside (1/8, 1)
        // minimality: no shorter fraction lies strictly inside the first gap
        for (std::uint32_t z = 0; z < 3; ++z)
            for (std::uint64_t i = 1; i <= (std::uint64_t{1} << z); ++i) {
                const double q = BinaryFraction(z, i).value();
                CHECK(!(q > 0.0 && q < 0.125));
            }
        // each split separates the data
        for (const auto& [d, f] : splits) {
            std::size_t below = 0;
            for (const auto& row : xs) below += row[d] < f.value() ? 1 : 0;
            CHECK(below >= 1);
            CHECK(below <= 2);
        }
    }
    SUBCASE("the minimal z fraction in a gap is unique") {
        Rng rng = make_rng(41, "test.gaps");
        for (int trial = 0; trial < 200; ++trial) {
            const double a = rng.uniform() * 0.9;
            const double b = a + 1e-3 + (1.0 - a - 1e-3) * rng.uniform();
            const auto f = shortest_fraction_in_gap(a, b, 10);
            if (!f) continue;
            CHECK(f->value() > a);
            CHECK(f->value() < b);
            std::size_t same_z = 0;
            for (std::uint64_t i = 1; i <= (std::uint64_t{1} << f->z); ++i) {
                const double q = BinaryFraction(f->z, i).value();
                if (q > a && q < b) ++same_z;
            }
            CHECK(same_z == 1);
        }
    }
}

TEST_CASE("node prior lengths") {
    const IntCodeScheme code = IntCodeScheme::length_symbol(4);
    CHECK(node_prior_log2(std::nullopt, 2, code) == doctest::Approx(-1.0));
    CHECK(node_prior_log2(std::make_pair(std::size_t{0}, BinaryFraction(0, 1)), 2, code) ==
          doctest::Approx(-4.0));
    CHECK(node_prior_log2(std::make_pair(std::size_t{1}, BinaryFraction(2, 2)), 4, code) ==
          doctest::Approx(-7.0));  // 3/8 costs four bits, feature two, marker one
}

TEST_CASE("prior normalization over exhaustive candidates") {
    Rng rng = make_rng(42, "test.norm");
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng.uniform_below(5);
        std::vector<std::vector<double>> x(n, std::vector<double>(2));
        for (auto& row : x) {
            row[0] = rng.uniform();
            row[1] = rng.uniform();
        }
        const FeatureScaler s = FeatureScaler::fit(x);
        std::vector<std::vector<double>> xs;
        for (const auto& row : x) xs.push_back(s.scale(row));

        for (const IntCodeScheme code :
             {IntCodeScheme::length_symbol(4), IntCodeScheme::elias_gamma()}) {
            ForestConfig cfg;
            cfg.threshold_z_code = code;
            cfg.exhaustive_candidates = true;
            double total = 0.5;
            for (const auto& split :
                 candidate_splits(xs, all_indices(n), cfg.effective_z_cap(), true))
                total += std::exp2(node_prior_log2(split, 2, code));
            CHECK(total <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("two separable points: decision weights and posteriors") {
    const std::vector<std::vector<double>> x = {{0.2}, {0.8}};
    const std::vector<std::size_t> y = {0, 1};
    ForestConfig cfg;
    cfg.trees = 400;
    cfg.seed = 43;
    cfg.schedule = AnnealSchedule::flat();
    const WeightedForest f = sample_forest(x, y, cfg);

    std::map<std::string, const TreeDescription*> kinds;
    for (const TreeDescription& t : f.trees) kinds[tree_key(t.root)] = &t;
    REQUIRE(kinds.size() == 2);

    double s_leaf = 0.0, s_branch = 0.0;
    for (const auto& [key, t] : kinds) {
        if (t->root->is_leaf) {
            s_leaf = std::exp2(t->log2_s);
            CHECK(t->length_bits == 1.0);
            CHECK(std::exp2(t->log2_posterior) == doctest::Approx(1.0 / 12.0));
        } else {
            s_branch = std::exp2(t->log2_s);
            CHECK(t->length_bits == 5.0);  // branch node 3 bits plus two leaf bits
            CHECK(std::exp2(t->log2_posterior) == doctest::Approx(1.0 / 128.0));
        }
    }
    // split weight (1/4)2^-3 versus leaf weight (1/6)2^-1: ratio 3/8
    CHECK(s_branch / s_leaf == doctest::Approx(3.0 / 8.0));
    CHECK(s_leaf == doctest::Approx(8.0 / 11.0));
    CHECK(s_leaf + s_branch == doctest::Approx(1.0));

    // the default schedule flattens the root likelihood but not the posterior
    ForestConfig annealed = cfg;
    annealed.schedule = AnnealSchedule{};
    const WeightedForest g = sample_forest(x, y, annealed);
    for (const TreeDescription& t : g.trees) {
        const double s = std::exp2(t.log2_s);
        if (t.root->is_leaf) {
            CHECK(s == doctest::Approx(4.0 / 5.0));
            CHECK(std::exp2(t.log2_posterior) == doctest::Approx(1.0 / 12.0));
        } else {
            CHECK(s == doctest::Approx(1.0 / 5.0));
            CHECK(std::exp2(t.log2_posterior) == doctest::Approx(1.0 / 128.0));
        }
    }
}

TEST_CASE("enumeration oracle on the three point line") {
    const ForestConfig cfg;
    const std::vector<TreeNodePtr> trees =
        enumerate_trees(kLineX, kLineY, all_indices(3), 2, cfg);
    REQUIRE(trees.size() == 5);

    SUBCASE("proposal probabilities sum to one under any schedule") {
        for (const AnnealSchedule& sched :
             {AnnealSchedule{}, AnnealSchedule::flat(), AnnealSchedule{{0.5, 1.0}}}) {
            ForestConfig c = cfg;
            c.schedule = sched;
            double total = 0.0;
            for (const TreeNodePtr& t : trees)
                total += std::exp2(tree_log2_proposal(t, kLineX, kLineY, all_indices(3), 2, c, 0));
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    SUBCASE("exact posterior masses") {
        std::vector<double> post;
        for (const TreeNodePtr& t : trees)
            post.push_back(tree_log2_posterior(t, 1, cfg.threshold_z_code));
        const double mass = log_sum_exp2(post);
        // the leaf-only tree: prior 1/2 times marginal 1/12 of counts (2,1)
        CHECK(std::exp2(post[0]) == doctest::Approx(1.0 / 24.0));
        CHECK(std::exp2(post[0] - mass) == doctest::Approx(0.9386).epsilon(1e-3));
    }

    SUBCASE("sampled forests converge to the enumerated predictive") {
        std::vector<double> post;
        for (const TreeNodePtr& t : trees)
            post.push_back(tree_log2_posterior(t, 1, cfg.threshold_z_code));
        const double mass = log_sum_exp2(post);

        for (const AnnealSchedule& sched : {AnnealSchedule{}, AnnealSchedule::flat()}) {
            ForestConfig c = cfg;
            c.schedule = sched;
            c.trees = 2000;
            c.seed = 44;
            const WeightedForest f = sample_forest(kLineX, kLineY, c);
            CHECK(f.ess > 10.0);
            for (int g = 0; g <= 20; ++g) {
                const double xg = g / 20.0;
                std::vector<double> exact(2, 0.0);
                for (std::size_t t = 0; t < trees.size(); ++t) {
                    const DiscreteDist p = tree_predict(trees[t], {xg});
                    for (std::size_t l = 0; l < 2; ++l)
                        exact[l] += std::exp2(post[t] - mass) * p[l];
                }
                const DiscreteDist approx = predict(f, {xg});
                const double tv = 0.5 * (std::abs(approx[0] - exact[0]) +
                                         std::abs(approx[1] - exact[1]));
                CHECK(tv < 0.05);
            }
        }
    }

    SUBCASE("bookkeeping matches structural recomputation") {
        ForestConfig c = cfg;
        c.trees = 200;
        c.seed = 45;
        const WeightedForest f = sample_forest(kLineX, kLineY, c);
        for (const TreeDescription& t : f.trees) {
            CHECK(tree_length_bits(t.root, 1, c.threshold_z_code) == t.length_bits);
            CHECK(tree_log2_posterior(t.root, 1, c.threshold_z_code) ==
                  doctest::Approx(t.log2_posterior).epsilon(1e-12));
            CHECK(tree_log2_proposal(t.root, kLineX, kLineY, all_indices(3), 2, c, 0) ==
                  doctest::Approx(t.log2_s).epsilon(1e-12));
        }
    }
}

TEST_CASE("forest sampling basics") {
    SUBCASE("single tree carries unit weight") {
        ForestConfig cfg;
        cfg.trees = 1;
        const WeightedForest f = sample_forest(kLineX, kLineY, cfg);
        REQUIRE(f.weights.size() == 1);
        CHECK(f.weights[0] == doctest::Approx(1.0));
        CHECK(f.ess == doctest::Approx(1.0));
    }
    SUBCASE("identical trees split the weight evenly") {
        // one point forces a leaf in every tree
        ForestConfig cfg;
        cfg.trees = 2;
        cfg.num_labels = 2;
        const WeightedForest f = sample_forest({{0.7}}, {0}, cfg);
        CHECK(f.weights[0] == doctest::Approx(0.5));
        CHECK(f.weights[1] == doctest::Approx(0.5));
        CHECK(f.ess == doctest::Approx(2.0));
        // Laplace keeps residual uncertainty that a frequency tree drops
        const DiscreteDist p = predict(f, {0.7});
        CHECK(p[0] == doctest::Approx(2.0 / 3.0));
        CHECK(p[1] == doctest::Approx(1.0 / 3.0));
        const DiscreteDist q = predict(entropy_split_tree({{0.7}}, {0}, 2), {0.7});
        CHECK(q[0] == doctest::Approx(1.0));
    }
    SUBCASE("reproducible, and per-tree streams ignore the total count") {
        ForestConfig cfg;
        cfg.trees = 5;
        cfg.seed = 46;
        const WeightedForest a = sample_forest(kLineX, kLineY, cfg);
        const WeightedForest b = sample_forest(kLineX, kLineY, cfg);
        cfg.trees = 10;
        const WeightedForest c = sample_forest(kLineX, kLineY, cfg);
        for (std::size_t t = 0; t < 5; ++t) {
            CHECK(a.trees[t].log2_posterior == b.trees[t].log2_posterior);
            CHECK(a.trees[t].log2_s == c.trees[t].log2_s);
            CHECK(tree_key(a.trees[t].root) == tree_key(c.trees[t].root));
        }
    }
    SUBCASE("label alphabet resolution") {
        CHECK(resolve_num_labels({0, 2, 1}, 0) == 3);
        CHECK(resolve_num_labels({0}, 0) == 2);
        CHECK(resolve_num_labels({0, 1}, 4) == 4);
        CHECK_THROWS_AS(resolve_num_labels({0, 3}, 2), OutOfRange);
        CHECK_THROWS_AS(resolve_num_labels({0}, 1), OutOfRange);
    }
}

TEST_CASE("forest predictions") {
    const FeatureScaler scaler = FeatureScaler::fit({{0.0}, {1.0}});
    SUBCASE("empty counts yield the uniform posterior") {
        WeightedForest f;
        f.trees.push_back({make_leaf({0, 0}), 1.0, 0.0, 0.0});
        f.weights = {1.0};
        f.scaler = scaler;
        f.num_labels = 2;
        const DiscreteDist p = predict(f, {0.3});
        CHECK(p[0] == doctest::Approx(0.5));
    }
    SUBCASE("counts two and zero give three quarters") {
        WeightedForest f;
        f.trees.push_back({make_leaf({2, 0}), 1.0, 0.0, 0.0});
        f.weights = {1.0};
        f.scaler = scaler;
        f.num_labels = 2;
        const DiscreteDist p = predict(f, {0.3});
        CHECK(p[0] == doctest::Approx(0.75));
        CHECK(p[1] == doctest::Approx(0.25));
    }
    SUBCASE("opposed trees average to the uniform") {
        WeightedForest f;
        f.trees.push_back({make_leaf({2, 0}), 1.0, 0.0, 0.0});
        f.trees.push_back({make_leaf({0, 2}), 1.0, 0.0, 0.0});
        f.weights = {0.5, 0.5};
        f.scaler = scaler;
        f.num_labels = 2;
        const DiscreteDist p = predict(f, {0.3});
        CHECK(p[0] == doctest::Approx(0.5));
    }
}

TEST_CASE("entropy split baseline") {
    CHECK(entropy_reduction({2, 0}, {0, 2}) == doctest::Approx(1.0));
    CHECK(entropy_reduction({2, 2}, {0, 0}) == doctest::Approx(0.0).scale(1.0));
    CHECK(entropy_reduction({1, 1}, {1, 1}) == doctest::Approx(0.0).scale(1.0));

    SUBCASE("pure node stops immediately") {
        const ConventionalNodePtr t = entropy_split_tree({{0.0}, {1.0}}, {1, 1});
        CHECK(t->is_leaf);
        CHECK(predict(t, {0.5})[1] == doctest::Approx(1.0));
    }
    SUBCASE("separable data is memorized exactly") {
        const std::vector<std::vector<double>> x = {{0.0}, {1.0}, {2.0}, {3.0}};
        const std::vector<std::size_t> y = {0, 1, 1, 0};
        const ConventionalNodePtr t = entropy_split_tree(x, y);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(predict(t, x[i])[y[i]] == doctest::Approx(1.0));
    }
    SUBCASE("split thresholds are midpoints in raw units") {
        const ConventionalNodePtr t = entropy_split_tree({{0.0}, {4.0}}, {0, 1});
        REQUIRE(!t->is_leaf);
        CHECK(t->threshold == doctest::Approx(2.0));
    }
}

TEST_CASE("bagging") {
    const std::vector<std::vector<double>> x = {{0.0}, {1.0}, {2.0}, {3.0}};
    const std::vector<std::size_t> y = {0, 0, 1, 1};
    SUBCASE("the identity resample reproduces the plain tree") {
        const ConventionalNodePtr bagged = bag_tree(x, y, all_indices(4), 2);
        const ConventionalNodePtr plain = entropy_split_tree(x, y);
        for (double g = -0.5; g <= 3.5; g += 0.25)
            CHECK(predict(bagged, {g})[0] == doctest::Approx(predict(plain, {g})[0]));
    }
    SUBCASE("single point datasets make identical trees") {
        const BaggedForest f = bagging({{2.0}}, {0}, 5, 2, 47);
        CHECK(f.trees.size() == 5);
        const DiscreteDist p = predict(f, {2.0});
        CHECK(p[0] == doctest::Approx(1.0));
    }
    SUBCASE("member predictions average") {
        auto a = std::make_shared<ConventionalNode>();
        a->probs = {1.0, 0.0};
        auto b = std::make_shared<ConventionalNode>();
        b->probs = {0.0, 1.0};
        BaggedForest f;
        f.trees = {a, b};
        f.num_labels = 2;
        const DiscreteDist p = predict(f, {0.0});
        CHECK(p[0] == doctest::Approx(0.5));
    }
    SUBCASE("bootstrap forests are reproducible") {
        const BaggedForest a = bagging(x, y, 8, 0, 48);
        const BaggedForest b = bagging(x, y, 8, 0, 48);
        for (double g = -0.5; g <= 3.5; g += 0.5)
            CHECK(predict(a, {g})[0] == predict(b, {g})[0]);
    }
}

TEST_CASE("importance sampling stays healthy on block structured data") {
    Rng rng = make_rng(49, "test.blocks");
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    for (int i = 0; i < 30; ++i) {
        const double u1 = rng.uniform(), u2 = rng.uniform();
        const int parity = (static_cast<int>(3.0 * u1) + static_cast<int>(3.0 * u2)) % 2;
        const std::size_t label = (rng.uniform() < 0.9) ? parity : 1 - parity;
        x.push_back({u1, u2});
        y.push_back(label);
    }
    ForestConfig cfg;
    cfg.trees = 300;
    cfg.seed = 50;
    const WeightedForest f = sample_forest(x, y, cfg);
    CAPTURE(f.ess);
    CHECK(f.ess > 10.0);
    const DiscreteDist p = predict(f, {0.15, 0.15});
    CHECK(p[0] > 0.0);
    CHECK(p[1] > 0.0);
}

}  // TEST_SUITE
