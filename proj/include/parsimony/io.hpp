#pragma once

// JSON artifact serialization. Every artifact carries format_version and kind;
// the schemas/ directory ships one schema per kind, and schema_violations
// implements the keyword subset those schemas use, so tests can hold emitted
// artifacts against the shipped contract.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parsimony/codecs.hpp"
#include "parsimony/errors.hpp"
#include "parsimony/forest.hpp"
#include "parsimony/info.hpp"
#include "parsimony/polyreg.hpp"

namespace parsimony {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

inline std::string scheme_name(IntCodeScheme s) {
    switch (s.kind) {
        case CodeKind::unary: return "unary";
        case CodeKind::elias_gamma: return "gamma";
        case CodeKind::elias_delta: return "delta";
        case CodeKind::elias_omega: return "omega";
        case CodeKind::rissanen: return "rissanen" + std::to_string(s.param);
        case CodeKind::length_symbol: return "lensym" + std::to_string(s.param);
    }
    throw Malformed("unknown code kind");
}

inline IntCodeScheme scheme_from_name(std::string_view name) {
    if (name == "unary") return IntCodeScheme::unary();
    if (name == "gamma") return IntCodeScheme::elias_gamma();
    if (name == "delta") return IntCodeScheme::elias_delta();
    if (name == "omega") return IntCodeScheme::elias_omega();
    const auto param_after = [&](std::string_view prefix) -> std::uint32_t {
        std::string_view digits = name.substr(prefix.size());
        if (digits.empty() || digits.size() > 4) throw Malformed("bad code parameter");
        std::uint32_t v = 0;
        for (const char c : digits) {
            if (c < '0' || c > '9') throw Malformed("bad code parameter");
            v = v * 10 + static_cast<std::uint32_t>(c - '0');
        }
        return v;
    };
    if (name.starts_with("rissanen")) return IntCodeScheme::rissanen(param_after("rissanen"));
    if (name.starts_with("lensym")) return IntCodeScheme::length_symbol(param_after("lensym"));
    throw Malformed("unknown code scheme '" + std::string(name) + "'");
}

inline std::string real_map_name(RealMap m) {
    return m == RealMap::tangent ? "tangent" : "probit";
}

inline RealMap real_map_from_name(std::string_view name) {
    if (name == "tangent") return RealMap::tangent;
    if (name == "probit") return RealMap::probit;
    throw Malformed("unknown coefficient map '" + std::string(name) + "'");
}

inline std::string mode_name(HyperpriorMode m) {
    return m == HyperpriorMode::parsimonious ? "parsimonious" : "flat";
}

inline HyperpriorMode mode_from_name(std::string_view name) {
    if (name == "parsimonious") return HyperpriorMode::parsimonious;
    if (name == "flat") return HyperpriorMode::flat;
    throw Malformed("unknown hyperprior mode '" + std::string(name) + "'");
}

inline Json regression_config_to_json(const RegressionConfig& c) {
    return Json{{"max_degree", c.max_degree},
                {"z_max", c.z_max},
                {"degree_code", scheme_name(c.degree_code)},
                {"fraction_code", scheme_name(c.fraction_z_code)},
                {"coeff_map", real_map_name(c.coeff_map)},
                {"coeff_scale", c.coeff_scale},
                {"noise_sigma", c.noise_sigma},
                {"samples", c.samples},
                {"seed", c.seed}};
}

inline RegressionConfig regression_config_from_json(const Json& j) {
    RegressionConfig c;
    c.max_degree = j.at("max_degree").get<std::uint32_t>();
    c.z_max = j.at("z_max").get<std::uint32_t>();
    c.degree_code = scheme_from_name(j.at("degree_code").get<std::string>());
    c.fraction_z_code = scheme_from_name(j.at("fraction_code").get<std::string>());
    c.coeff_map = real_map_from_name(j.at("coeff_map").get<std::string>());
    c.coeff_scale = j.at("coeff_scale").get<double>();
    c.noise_sigma = j.at("noise_sigma").get<double>();
    c.samples = j.at("samples").get<std::uint32_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

inline void require_kind(const Json& j, std::string_view kind) {
    if (j.at("format_version").get<int>() != kFormatVersion)
        throw Malformed("unsupported format_version");
    if (j.at("kind").get<std::string>() != kind)
        throw Malformed("artifact kind is '" + j.at("kind").get<std::string>() +
                        "', expected '" + std::string(kind) + "'");
}

// Sampled regression ensemble. Sweep records are merged by codeword; each
// member's log2_weight is its visit share. The zero-polynomial likelihood is
// stored so the parsimony objective can be computed without the dataset.
inline Json ensemble_to_json(const PolyEnsemble& e, const RegressionDataset& data) {
    std::vector<std::string> order;
    std::vector<const PolyDescription*> unique;
    std::vector<std::uint64_t> visits;
    for (const PolyDescription& m : e.members) {
        const std::string bits = encode_description(m, e.config).bit_string();
        bool found = false;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (order[i] == bits) {
                ++visits[i];
                found = true;
                break;
            }
        }
        if (!found) {
            order.push_back(bits);
            unique.push_back(&m);
            visits.push_back(1);
        }
    }
    Json members = Json::array();
    for (std::size_t i = 0; i < unique.size(); ++i) {
        const PolyDescription& d = *unique[i];
        Json fractions = Json::array();
        for (const BinaryFraction& f : d.coeffs) fractions.push_back(Json::array({f.z, f.i}));
        members.push_back(
            {{"degree", d.degree()},
             {"fractions", std::move(fractions)},
             {"bits", order[i]},
             {"length_bits", description_length(d, e.config)},
             {"log2_likelihood", log_likelihood(d, data, e.config)},
             {"log2_weight", std::log2(static_cast<double>(visits[i])) -
                                 std::log2(static_cast<double>(e.members.size()))}});
    }
    return Json{{"format_version", kFormatVersion},
                {"kind", "regress_ensemble"},
                {"seed", e.config.seed},
                {"mode", mode_name(e.mode)},
                {"config", regression_config_to_json(e.config)},
                {"x_lo", e.x_lo},
                {"x_hi", e.x_hi},
                {"noise_sigma", e.noise_sigma},
                {"log2_likelihood_zero",
                 log_likelihood(zero_polynomial(), data, e.config)},
                {"members", std::move(members)}};
}

struct StoredEnsemble {
    RegressionConfig config;
    HyperpriorMode mode = HyperpriorMode::parsimonious;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double noise_sigma = 1.0;
    double log2_likelihood_zero = 0.0;
    std::vector<PolyDescription> members;
    std::vector<std::string> bits;
    std::vector<double> length_bits;
    std::vector<double> log2_likelihood;
    std::vector<double> weights;  // normalized visit shares

    double scale_x(double raw) const {
        if (x_hi == x_lo) return 0.0;
        return -1.0 + 2.0 * (raw - x_lo) / (x_hi - x_lo);
    }
};

inline StoredEnsemble ensemble_from_json(const Json& j) {
    require_kind(j, "regress_ensemble");
    StoredEnsemble e;
    e.config = regression_config_from_json(j.at("config"));
    e.mode = mode_from_name(j.at("mode").get<std::string>());
    e.x_lo = j.at("x_lo").get<double>();
    e.x_hi = j.at("x_hi").get<double>();
    e.noise_sigma = j.at("noise_sigma").get<double>();
    e.log2_likelihood_zero = j.at("log2_likelihood_zero").get<double>();
    std::vector<double> raw_weights;
    for (const Json& m : j.at("members")) {
        std::vector<BinaryFraction> coeffs;
        for (const Json& f : m.at("fractions"))
            coeffs.emplace_back(f.at(0).get<std::uint32_t>(), f.at(1).get<std::uint64_t>());
        PolyDescription d{std::move(coeffs)};
        if (!is_canonical(d)) throw Malformed("stored member is not in canonical form");
        e.members.push_back(std::move(d));
        e.bits.push_back(m.at("bits").get<std::string>());
        e.length_bits.push_back(m.at("length_bits").get<double>());
        e.log2_likelihood.push_back(m.at("log2_likelihood").get<double>());
        raw_weights.push_back(std::exp2(m.at("log2_weight").get<double>()));
    }
    if (e.members.empty()) throw Malformed("ensemble artifact has no members");
    double total = 0.0;
    for (const double w : raw_weights) total += w;
    if (!(total > 0.0)) throw Malformed("ensemble weights sum to zero");
    for (double& w : raw_weights) w /= total;
    e.weights = std::move(raw_weights);
    return e;
}

inline Json loo_to_json(const LooEnsemble& e) {
    return Json{{"format_version", kFormatVersion},
                {"kind", "loo_baseline"},
                {"degree", e.degree},
                {"mean_holdout_log2lik", e.mean_holdout_log2lik},
                {"fold_coeffs", e.fold_coeffs},
                {"x_lo", e.x_lo},
                {"x_hi", e.x_hi},
                {"noise_sigma", e.noise_sigma}};
}

inline LooEnsemble loo_from_json(const Json& j) {
    require_kind(j, "loo_baseline");
    LooEnsemble e;
    e.degree = j.at("degree").get<std::uint32_t>();
    e.mean_holdout_log2lik = j.at("mean_holdout_log2lik").get<std::vector<double>>();
    e.fold_coeffs = j.at("fold_coeffs").get<std::vector<std::vector<double>>>();
    e.x_lo = j.at("x_lo").get<double>();
    e.x_hi = j.at("x_hi").get<double>();
    e.noise_sigma = j.at("noise_sigma").get<double>();
    if (e.fold_coeffs.empty()) throw Malformed("baseline artifact has no folds");
    return e;
}

namespace detail {

inline void append_tree_nodes(const TreeNodePtr& node, Json& arr) {
    if (node->is_leaf) {
        arr.push_back(Json{{"type", "leaf"}, {"counts", node->counts}});
        return;
    }
    arr.push_back(Json{{"type", "branch"},
                       {"feature", node->feature},
                       {"z", node->threshold.z},
                       {"i", node->threshold.i}});
    append_tree_nodes(node->left, arr);
    append_tree_nodes(node->right, arr);
}

inline TreeNodePtr tree_nodes_from_json(const Json& arr, std::size_t& cursor) {
    if (cursor >= arr.size()) throw Malformed("truncated tree node list");
    const Json& n = arr.at(cursor++);
    const std::string type = n.at("type").get<std::string>();
    if (type == "leaf") return make_leaf(n.at("counts").get<std::vector<std::uint64_t>>());
    if (type != "branch") throw Malformed("unknown node type '" + type + "'");
    const std::size_t feature = n.at("feature").get<std::size_t>();
    const BinaryFraction threshold(n.at("z").get<std::uint32_t>(),
                                   n.at("i").get<std::uint64_t>());
    TreeNodePtr left = tree_nodes_from_json(arr, cursor);
    TreeNodePtr right = tree_nodes_from_json(arr, cursor);
    return make_branch(feature, threshold, std::move(left), std::move(right));
}

inline void append_conventional_nodes(const ConventionalNodePtr& node, Json& arr) {
    if (node->is_leaf) {
        arr.push_back(Json{{"type", "leaf"}, {"probs", node->probs}});
        return;
    }
    arr.push_back(Json{{"type", "branch"},
                       {"feature", node->feature},
                       {"threshold", node->threshold}});
    append_conventional_nodes(node->left, arr);
    append_conventional_nodes(node->right, arr);
}

inline ConventionalNodePtr conventional_nodes_from_json(const Json& arr, std::size_t& cursor) {
    if (cursor >= arr.size()) throw Malformed("truncated tree node list");
    const Json& n = arr.at(cursor++);
    const std::string type = n.at("type").get<std::string>();
    auto node = std::make_shared<ConventionalNode>();
    if (type == "leaf") {
        node->probs = n.at("probs").get<std::vector<double>>();
        return node;
    }
    if (type != "branch") throw Malformed("unknown node type '" + type + "'");
    node->is_leaf = false;
    node->feature = n.at("feature").get<std::size_t>();
    node->threshold = n.at("threshold").get<double>();
    node->left = conventional_nodes_from_json(arr, cursor);
    node->right = conventional_nodes_from_json(arr, cursor);
    return node;
}

}  // namespace detail

inline Json forest_to_json(const WeightedForest& f, const ForestConfig& cfg,
                           const std::vector<std::string>& labels) {
    Json trees = Json::array();
    for (std::size_t t = 0; t < f.trees.size(); ++t) {
        Json nodes = Json::array();
        detail::append_tree_nodes(f.trees[t].root, nodes);
        trees.push_back({{"nodes", std::move(nodes)},
                         {"length_bits", f.trees[t].length_bits},
                         {"log2_s", f.trees[t].log2_s},
                         {"log2_posterior", f.trees[t].log2_posterior},
                         {"weight", f.weights[t]}});
    }
    return Json{{"format_version", kFormatVersion},
                {"kind", "forest"},
                {"seed", cfg.seed},
                {"config",
                 {{"trees", cfg.trees},
                  {"anneal", cfg.schedule.alpha},
                  {"fraction_code", scheme_name(cfg.threshold_z_code)},
                  {"z_cap", cfg.z_cap},
                  {"num_labels", f.num_labels}}},
                {"labels", labels},
                {"scaler", {{"lo", f.scaler.lo}, {"hi", f.scaler.hi}}},
                {"ess", f.ess},
                {"trees", std::move(trees)}};
}

struct StoredForest {
    WeightedForest forest;
    std::vector<std::string> labels;
    std::uint64_t seed = 0;
};

inline StoredForest forest_from_json(const Json& j) {
    require_kind(j, "forest");
    StoredForest s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.labels = j.at("labels").get<std::vector<std::string>>();
    s.forest.num_labels = j.at("config").at("num_labels").get<std::size_t>();
    s.forest.scaler.lo = j.at("scaler").at("lo").get<std::vector<double>>();
    s.forest.scaler.hi = j.at("scaler").at("hi").get<std::vector<double>>();
    s.forest.ess = j.at("ess").get<double>();
    for (const Json& t : j.at("trees")) {
        std::size_t cursor = 0;
        const Json& nodes = t.at("nodes");
        TreeDescription d;
        d.root = detail::tree_nodes_from_json(nodes, cursor);
        if (cursor != nodes.size()) throw Malformed("trailing tree nodes");
        d.length_bits = t.at("length_bits").get<double>();
        d.log2_s = t.at("log2_s").get<double>();
        d.log2_posterior = t.at("log2_posterior").get<double>();
        s.forest.trees.push_back(std::move(d));
        s.forest.weights.push_back(t.at("weight").get<double>());
    }
    if (s.forest.trees.empty()) throw Malformed("forest artifact has no trees");
    return s;
}

// Training bounding box rides along so grids can be laid out without the
// data. num_labels may exceed the names seen in training.
inline Json entropy_tree_to_json(const ConventionalNodePtr& tree,
                                 const std::vector<std::string>& labels,
                                 std::size_t num_labels, const FeatureScaler& bounds) {
    Json nodes = Json::array();
    detail::append_conventional_nodes(tree, nodes);
    return Json{{"format_version", kFormatVersion},
                {"kind", "entropy_tree"},
                {"labels", labels},
                {"num_labels", num_labels},
                {"bounds", {{"lo", bounds.lo}, {"hi", bounds.hi}}},
                {"nodes", std::move(nodes)}};
}

struct StoredConventional {
    std::vector<ConventionalNodePtr> trees;
    std::vector<std::string> labels;
    std::size_t num_labels = 2;
    FeatureScaler bounds;
};

inline StoredConventional entropy_tree_from_json(const Json& j) {
    require_kind(j, "entropy_tree");
    StoredConventional s;
    s.labels = j.at("labels").get<std::vector<std::string>>();
    s.num_labels = j.at("num_labels").get<std::size_t>();
    s.bounds.lo = j.at("bounds").at("lo").get<std::vector<double>>();
    s.bounds.hi = j.at("bounds").at("hi").get<std::vector<double>>();
    std::size_t cursor = 0;
    const Json& nodes = j.at("nodes");
    s.trees.push_back(detail::conventional_nodes_from_json(nodes, cursor));
    if (cursor != nodes.size()) throw Malformed("trailing tree nodes");
    return s;
}

inline Json bagged_to_json(const BaggedForest& f, std::uint64_t seed,
                           const std::vector<std::string>& labels,
                           const FeatureScaler& bounds) {
    Json trees = Json::array();
    for (const ConventionalNodePtr& t : f.trees) {
        Json nodes = Json::array();
        detail::append_conventional_nodes(t, nodes);
        trees.push_back(std::move(nodes));
    }
    return Json{{"format_version", kFormatVersion},
                {"kind", "bagged_forest"},
                {"seed", seed},
                {"labels", labels},
                {"num_labels", f.num_labels},
                {"bounds", {{"lo", bounds.lo}, {"hi", bounds.hi}}},
                {"trees", std::move(trees)}};
}

inline StoredConventional bagged_from_json(const Json& j) {
    require_kind(j, "bagged_forest");
    StoredConventional s;
    s.labels = j.at("labels").get<std::vector<std::string>>();
    s.num_labels = j.at("num_labels").get<std::size_t>();
    s.bounds.lo = j.at("bounds").at("lo").get<std::vector<double>>();
    s.bounds.hi = j.at("bounds").at("hi").get<std::vector<double>>();
    for (const Json& nodes : j.at("trees")) {
        std::size_t cursor = 0;
        s.trees.push_back(detail::conventional_nodes_from_json(nodes, cursor));
        if (cursor != nodes.size()) throw Malformed("trailing tree nodes");
    }
    if (s.trees.empty()) throw Malformed("bagged forest artifact has no trees");
    return s;
}

inline Json report_to_json(const ParsimonyReport& r, std::string_view baseline,
                           std::string_view source_kind) {
    return Json{{"format_version", kFormatVersion},
                {"kind", "parsimony_report"},
                {"baseline", std::string(baseline)},
                {"source_kind", std::string(source_kind)},
                {"prediction_info", r.prediction_info},
                {"inference_info", r.inference_info},
                {"description_length_expected", r.description_length_expected},
                {"q_entropy", r.q_entropy},
                {"omega", r.omega},
                {"chi", r.chi}};
}

inline Json stationary_to_json(const DiscreteDist& p, double tol) {
    std::vector<double> prior;
    prior.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) prior.push_back(p[i]);
    return Json{{"format_version", kFormatVersion},
                {"kind", "stationary_prior"},
                {"languages", p.size()},
                {"tol", tol},
                {"prior", std::move(prior)}};
}

// Structural validation against the keyword subset used by schemas/: type,
// enum, const, minimum, minItems, maxItems, properties, required,
// additionalProperties:false, items, anyOf.
namespace schema {

inline void check(const Json& sch, const Json& v, const std::string& path,
                  std::vector<std::string>& errs);

inline bool passes(const Json& sch, const Json& v) {
    std::vector<std::string> errs;
    check(sch, v, "", errs);
    return errs.empty();
}

inline void check(const Json& sch, const Json& v, const std::string& path,
                  std::vector<std::string>& errs) {
    const auto fail = [&](const std::string& what) {
        errs.push_back((path.empty() ? "$" : path) + ": " + what);
    };
    if (const auto it = sch.find("type"); it != sch.end()) {
        const std::string t = it->get<std::string>();
        const bool ok = (t == "object" && v.is_object()) || (t == "array" && v.is_array()) ||
                        (t == "string" && v.is_string()) || (t == "number" && v.is_number()) ||
                        (t == "integer" && v.is_number_integer()) ||
                        (t == "boolean" && v.is_boolean());
        if (!ok) {
            fail("expected type " + t);
            return;
        }
    }
    if (const auto it = sch.find("const"); it != sch.end() && *it != v)
        fail("value differs from required constant");
    if (const auto it = sch.find("enum"); it != sch.end()) {
        bool ok = false;
        for (const Json& cand : *it) ok = ok || (cand == v);
        if (!ok) fail("value not in enumeration");
    }
    if (const auto it = sch.find("minimum"); it != sch.end()) {
        if (v.is_number() && v.get<double>() < it->get<double>()) fail("below minimum");
    }
    if (const auto it = sch.find("anyOf"); it != sch.end()) {
        bool ok = false;
        for (const Json& cand : *it) ok = ok || passes(cand, v);
        if (!ok) fail("matched no alternative");
    }
    if (v.is_object()) {
        if (const auto it = sch.find("required"); it != sch.end())
            for (const Json& key : *it)
                if (!v.contains(key.get<std::string>()))
                    fail("missing required field '" + key.get<std::string>() + "'");
        const auto props = sch.find("properties");
        if (props != sch.end()) {
            for (const auto& [key, val] : v.items()) {
                const auto p = props->find(key);
                if (p != props->end()) {
                    check(*p, val, path + "." + key, errs);
                } else if (const auto ap = sch.find("additionalProperties");
                           ap != sch.end() && ap->is_boolean() && !ap->get<bool>()) {
                    fail("unexpected field '" + key + "'");
                }
            }
        }
    }
    if (v.is_array()) {
        if (const auto it = sch.find("minItems"); it != sch.end())
            if (v.size() < it->get<std::size_t>()) fail("too few items");
        if (const auto it = sch.find("maxItems"); it != sch.end())
            if (v.size() > it->get<std::size_t>()) fail("too many items");
        if (const auto it = sch.find("items"); it != sch.end())
            for (std::size_t i = 0; i < v.size(); ++i)
                check(*it, v.at(i), path + "[" + std::to_string(i) + "]", errs);
    }
}

inline std::vector<std::string> violations(const Json& sch, const Json& v) {
    std::vector<std::string> errs;
    check(sch, v, "", errs);
    return errs;
}

}  // namespace schema

}  // namespace parsimony
