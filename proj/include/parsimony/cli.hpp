#pragma once

// Command-line front end. Every run is a pure function of (input files, flags,
// seed): artifacts embed the resolved configuration and are written atomically
// via a temp file and rename. Failures exit with one machine-parsable line on
// stderr: "error: BadInput|BadFlag|IoFailure: reason".

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "parsimony/dataset.hpp"
#include "parsimony/errors.hpp"
#include "parsimony/interpreters.hpp"
#include "parsimony/io.hpp"

namespace parsimony::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitBadFlag = 3;
inline constexpr int kExitIoFailure = 4;

struct BadInput : Error {
    using Error::Error;
};
struct BadFlag : Error {
    using Error::Error;
};
struct IoFailure : Error {
    using Error::Error;
};

namespace detail {

// Library exceptions raised while digesting user-supplied data are input
// faults, not flag faults, whatever their concrete type.
template <typename F>
decltype(auto) as_input(F&& f) {
    try {
        return std::forward<F>(f)();
    } catch (const BadFlag&) {
        throw;
    } catch (const BadInput&) {
        throw;
    } catch (const IoFailure&) {
        throw;
    } catch (const Error& e) {
        throw BadInput(e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoFailure("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoFailure("read failed on '" + path + "'");
    return ss.str();
}

inline void atomic_write(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoFailure("cannot open '" + tmp.string() + "' for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw IoFailure("write failed on '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoFailure("cannot rename '" + tmp.string() + "' to '" + path +
                            "': " + ec.message());
}

inline void deliver(const std::string& output, std::string_view content, std::ostream& out) {
    if (output.empty())
        out << content;
    else
        atomic_write(output, content);
}

inline Json parse_json(const std::string& text, const std::string& what) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw BadInput("'" + what + "' is not valid JSON");
    return j;
}

inline std::string dump_artifact(const Json& j) { return j.dump(2) + "\n"; }

struct GridSpec {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    bool two_d = false;
};

inline GridSpec parse_grid(const std::string& s) {
    const auto parse_u32 = [&](std::string_view digits) -> std::uint32_t {
        std::uint32_t v = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || v < 1)
            throw BadFlag("--grid must be N or NxM with N, M >= 1, got '" + s + "'");
        return v;
    };
    GridSpec g;
    const std::size_t cross = s.find('x');
    if (cross == std::string::npos) {
        g.n = parse_u32(s);
    } else {
        g.n = parse_u32(std::string_view(s).substr(0, cross));
        g.m = parse_u32(std::string_view(s).substr(cross + 1));
        g.two_d = true;
    }
    return g;
}

inline std::vector<double> linspace(double a, double b, std::uint32_t n) {
    if (n == 1) return {0.5 * (a + b)};
    std::vector<double> v;
    v.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        v.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

inline AnnealSchedule parse_anneal(const std::string& s) {
    using parsimony::detail::trim;
    AnnealSchedule sch;
    sch.alpha.clear();
    if (trim(s).empty()) return sch;  // no entries: exponent 1 at every depth
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            const std::string_view field = trim(std::string_view(s).substr(start, i - start));
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
                throw BadFlag("--anneal expects comma-separated exponents, got '" + s + "'");
            sch.alpha.push_back(v);
            start = i + 1;
        }
    }
    try {
        sch.validate();
    } catch (const Error& e) {
        throw BadFlag(e.what());
    }
    return sch;
}

inline std::string label_name(const std::vector<std::string>& labels, std::size_t i) {
    return i < labels.size() ? labels[i] : "label" + std::to_string(i);
}

inline void leaf_dirichlet_infos(const TreeNodePtr& node, double& inference,
                                 double& prediction) {
    if (node->is_leaf) {
        const LabelCounts k(node->counts);
        inference += dirichlet_inference_info(k);
        prediction += dirichlet_prediction_info(k);
        return;
    }
    leaf_dirichlet_infos(node->left, inference, prediction);
    leaf_dirichlet_infos(node->right, inference, prediction);
}

}  // namespace detail

inline const std::vector<std::string>& scheme_flag_values() {
    static const std::vector<std::string> v = {"unary",     "gamma",     "delta", "omega",
                                               "rissanen2", "rissanen3", "lensym4"};
    return v;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using detail::as_input;
    using detail::deliver;
    using detail::read_file;

    CLI::App app{"minimum description length inference toolkit"};
    app.name("parsimony");
    app.require_subcommand(1);

    const auto scheme_check = CLI::IsMember(scheme_flag_values());

    struct {
        std::string scheme, bits, output;
        std::uint64_t value = 0;
        std::uint64_t zmax = 4096;
    } code_opt;

    CLI::App* enc = app.add_subcommand("encode", "Encode an integer with a universal code");
    enc->add_option("--scheme", code_opt.scheme, "integer code")->required()->check(scheme_check);
    enc->add_option("--value", code_opt.value, "nonnegative integer to encode")->required();
    enc->add_option("--output", code_opt.output, "write here instead of stdout");
    enc->callback([&] {
        const Code c = integer_encode(scheme_from_name(code_opt.scheme), code_opt.value);
        deliver(code_opt.output, c.bit_string() + "\n", out);
    });

    CLI::App* dec = app.add_subcommand("decode", "Decode one codeword back to its integer");
    dec->add_option("--scheme", code_opt.scheme, "integer code")->required()->check(scheme_check);
    dec->add_option("--bits", code_opt.bits, "codeword as a '0'/'1' string")->required();
    dec->add_option("--output", code_opt.output, "write here instead of stdout");
    dec->callback([&] {
        const DecodeResult r = as_input([&] {
            const DecodeResult d =
                integer_decode(scheme_from_name(code_opt.scheme), code_opt.bits);
            if (d.consumed != code_opt.bits.size())
                throw Malformed("trailing bits after one codeword");
            return d;
        });
        deliver(code_opt.output, std::to_string(r.value) + "\n", out);
    });

    CLI::App* kra = app.add_subcommand("kraft", "Partial Kraft sum of a code");
    kra->add_option("--scheme", code_opt.scheme, "integer code")->required()->check(scheme_check);
    kra->add_option("--zmax", code_opt.zmax, "sum codeword mass for values 0..zmax");
    kra->add_option("--output", code_opt.output, "write here instead of stdout");
    kra->callback([&] {
        const double s = kraft_sum(scheme_from_name(code_opt.scheme), code_opt.zmax);
        deliver(code_opt.output, format_double(s) + "\n", out);
    });

    struct {
        std::string input, output;
        std::string degree_code = "lensym4", fraction_code = "lensym4";
        std::uint32_t max_degree = 20, zmax = 4, samples = 200;
        std::uint64_t seed = 0;
        double noise_sigma = 1.0;
        bool flat = false;
    } reg_opt;

    CLI::App* reg = app.add_subcommand("regress", "Sample a polynomial ensemble from x,y data");
    reg->add_option("--input", reg_opt.input, "regression CSV with header x,y")->required();
    reg->add_option("--output", reg_opt.output, "ensemble JSON path");
    reg->add_option("--seed", reg_opt.seed, "master seed");
    reg->add_option("--samples", reg_opt.samples, "Gibbs sweeps to record")
        ->check(CLI::PositiveNumber);
    reg->add_option("--max-degree", reg_opt.max_degree, "largest polynomial degree");
    reg->add_option("--zmax", reg_opt.zmax, "largest coefficient fraction precision");
    reg->add_option("--degree-code", reg_opt.degree_code, "code for the degree")
        ->check(scheme_check);
    reg->add_option("--fraction-code", reg_opt.fraction_code, "code for fraction precisions")
        ->check(scheme_check);
    reg->add_option("--noise-sigma", reg_opt.noise_sigma, "observation noise scale")
        ->check(CLI::PositiveNumber);
    reg->add_flag("--flat-hyperprior", reg_opt.flat,
                  "weight descriptions by likelihood alone");
    reg->callback([&] {
        RegressionConfig cfg;
        cfg.max_degree = reg_opt.max_degree;
        cfg.z_max = reg_opt.zmax;
        cfg.degree_code = scheme_from_name(reg_opt.degree_code);
        cfg.fraction_z_code = scheme_from_name(reg_opt.fraction_code);
        cfg.noise_sigma = reg_opt.noise_sigma;
        cfg.samples = reg_opt.samples;
        cfg.seed = reg_opt.seed;
        const std::string text = read_file(reg_opt.input);
        const auto [e, data] = as_input([&] {
            std::istringstream in(text);
            const RegressionTable t = read_regression_csv(in);
            RegressionDataset d = make_dataset(t.x, t.y, cfg.noise_sigma);
            const HyperpriorMode mode =
                reg_opt.flat ? HyperpriorMode::flat : HyperpriorMode::parsimonious;
            return std::make_pair(sample_ensemble(d, cfg, mode), std::move(d));
        });
        deliver(reg_opt.output, detail::dump_artifact(ensemble_to_json(e, data)), out);
    });

    struct {
        std::string input, output;
        std::uint32_t max_degree = 20;
        double noise_sigma = 1.0;
    } loo_opt;

    CLI::App* loo = app.add_subcommand("regress-baseline",
                                       "Leave-one-out least-squares degree selection");
    loo->add_option("--input", loo_opt.input, "regression CSV with header x,y")->required();
    loo->add_option("--output", loo_opt.output, "baseline JSON path");
    loo->add_option("--max-degree", loo_opt.max_degree, "largest degree to consider");
    loo->add_option("--noise-sigma", loo_opt.noise_sigma, "observation noise scale")
        ->check(CLI::PositiveNumber);
    loo->callback([&] {
        const std::string text = read_file(loo_opt.input);
        const LooEnsemble e = as_input([&] {
            std::istringstream in(text);
            const RegressionTable t = read_regression_csv(in);
            return loo_baseline(make_dataset(t.x, t.y, loo_opt.noise_sigma),
                                loo_opt.max_degree);
        });
        deliver(loo_opt.output, detail::dump_artifact(loo_to_json(e)), out);
    });

    struct {
        std::string input, output;
        std::string fraction_code = "lensym4";
        std::string anneal = "0,0";
        std::uint32_t trees = 1000, zmax = 10;
        std::uint64_t seed = 0;
    } for_opt;

    CLI::App* fo = app.add_subcommand("forest", "Sample an importance-weighted decision forest");
    fo->add_option("--input", for_opt.input, "classification CSV ending in a label column")
        ->required();
    fo->add_option("--output", for_opt.output, "forest JSON path");
    fo->add_option("--seed", for_opt.seed, "master seed");
    fo->add_option("--trees", for_opt.trees, "trees to sample")->check(CLI::PositiveNumber);
    fo->add_option("--zmax", for_opt.zmax, "largest threshold fraction precision");
    fo->add_option("--fraction-code", for_opt.fraction_code, "code for threshold precisions")
        ->check(scheme_check);
    fo->add_option("--anneal", for_opt.anneal,
                   "per-depth proposal exponents, e.g. \"0,0,1\"; depths beyond the list "
                   "use 1; empty string anneals nowhere");
    fo->callback([&] {
        ForestConfig cfg;
        cfg.trees = for_opt.trees;
        cfg.schedule = detail::parse_anneal(for_opt.anneal);
        cfg.threshold_z_code = scheme_from_name(for_opt.fraction_code);
        cfg.z_cap = for_opt.zmax;
        cfg.seed = for_opt.seed;
        const std::string text = read_file(for_opt.input);
        const auto [f, labels] = as_input([&] {
            std::istringstream in(text);
            const ClassificationTable t = read_classification_csv(in);
            return std::make_pair(sample_forest(t.x, t.y, cfg), t.labels);
        });
        deliver(for_opt.output, detail::dump_artifact(forest_to_json(f, cfg, labels)), out);
    });

    struct {
        std::string input, output;
        std::uint32_t trees = 100;
        std::uint64_t seed = 0;
    } conv_opt;

    CLI::App* tb = app.add_subcommand("tree-baseline", "Grow one entropy-split tree");
    tb->add_option("--input", conv_opt.input, "classification CSV ending in a label column")
        ->required();
    tb->add_option("--output", conv_opt.output, "tree JSON path");
    tb->callback([&] {
        const std::string text = read_file(conv_opt.input);
        const Json artifact = as_input([&] {
            std::istringstream in(text);
            const ClassificationTable t = read_classification_csv(in);
            const ConventionalNodePtr tree = entropy_split_tree(t.x, t.y);
            return entropy_tree_to_json(tree, t.labels, resolve_num_labels(t.y, 0),
                                        FeatureScaler::fit(t.x));
        });
        deliver(conv_opt.output, detail::dump_artifact(artifact), out);
    });

    CLI::App* bag = app.add_subcommand("bagging", "Grow a bootstrap-aggregated forest");
    bag->add_option("--input", conv_opt.input, "classification CSV ending in a label column")
        ->required();
    bag->add_option("--output", conv_opt.output, "forest JSON path");
    bag->add_option("--trees", conv_opt.trees, "resampled trees to grow")
        ->check(CLI::PositiveNumber);
    bag->add_option("--seed", conv_opt.seed, "master seed");
    bag->callback([&] {
        const std::string text = read_file(conv_opt.input);
        const Json artifact = as_input([&] {
            std::istringstream in(text);
            const ClassificationTable t = read_classification_csv(in);
            const BaggedForest f = bagging(t.x, t.y, conv_opt.trees, 0, conv_opt.seed);
            return bagged_to_json(f, conv_opt.seed, t.labels, FeatureScaler::fit(t.x));
        });
        deliver(conv_opt.output, detail::dump_artifact(artifact), out);
    });

    struct {
        std::string ensemble, output, baseline;
    } obj_opt;

    CLI::App* obj = app.add_subcommand("objective",
                                       "Parsimony objective report for a stored ensemble");
    obj->add_option("--ensemble", obj_opt.ensemble, "ensemble or forest JSON artifact")
        ->required();
    obj->add_option("--baseline", obj_opt.baseline,
                    "reference predictor: zero (regression) or uniform (classification)")
        ->required()
        ->check(CLI::IsMember({"zero", "uniform"}));
    obj->add_option("--output", obj_opt.output, "report JSON path");
    obj->callback([&] {
        const Json j = detail::parse_json(read_file(obj_opt.ensemble), obj_opt.ensemble);
        const Json report = as_input([&]() -> Json {
            const std::string kind = j.at("kind").get<std::string>();
            if (kind == "regress_ensemble") {
                if (obj_opt.baseline != "zero")
                    throw BadFlag("regression ensembles take --baseline zero");
                const StoredEnsemble e = ensemble_from_json(j);
                std::vector<EnsembleMember> members;
                members.reserve(e.members.size());
                for (std::size_t i = 0; i < e.members.size(); ++i)
                    members.push_back({e.bits[i], e.length_bits[i], 0.0,
                                       e.log2_likelihood[i] - e.log2_likelihood_zero});
                const ParsimonyReport r =
                    parsimony_report(members, DiscreteDist::from_weights(e.weights));
                return report_to_json(r, obj_opt.baseline, kind);
            }
            if (kind == "forest") {
                if (obj_opt.baseline != "uniform")
                    throw BadFlag("classification forests take --baseline uniform");
                const StoredForest s = forest_from_json(j);
                std::vector<EnsembleMember> members;
                members.reserve(s.forest.trees.size());
                for (const TreeDescription& t : s.forest.trees) {
                    Json key = Json::array();
                    parsimony::detail::append_tree_nodes(t.root, key);
                    double inference = 0.0, prediction = 0.0;
                    detail::leaf_dirichlet_infos(t.root, inference, prediction);
                    members.push_back({key.dump(), t.length_bits, inference, prediction});
                }
                const ParsimonyReport r = parsimony_report(
                    members, DiscreteDist::from_weights(s.forest.weights));
                return report_to_json(r, obj_opt.baseline, kind);
            }
            throw BadInput("no parsimony objective for artifact kind '" + kind + "'");
        });
        deliver(obj_opt.output, detail::dump_artifact(report), out);
    });

    struct {
        std::string input, output;
    } int_opt;

    CLI::App* itp = app.add_subcommand("interpreters",
                                       "Stationary prior from a simulator length matrix");
    itp->add_option("--input", int_opt.input, "CSV matrix of pairwise simulator lengths")
        ->required();
    itp->add_option("--output", int_opt.output, "prior JSON path");
    itp->callback([&] {
        const std::string text = read_file(int_opt.input);
        const Json artifact = as_input([&] {
            std::istringstream in(text);
            const SimulatorLengths lengths = read_matrix_csv(in);
            validate_simulator_lengths(lengths);
            const double tol = 1e-12;
            const DiscreteDist p = stationary_prior(transition_matrix(lengths), tol);
            return stationary_to_json(p, tol);
        });
        deliver(int_opt.output, detail::dump_artifact(artifact), out);
    });

    struct {
        std::string kind, output;
        std::uint64_t samples = 100, seed = 0;
        double noise_sigma = 1.0, skew = 0.9;
    } syn_opt;

    CLI::App* syn = app.add_subcommand("synth", "Generate a deterministic synthetic dataset");
    syn->add_option("--kind", syn_opt.kind, "dataset family")
        ->required()
        ->check(CLI::IsMember({"regress1d", "blocks2d", "mixed2d"}));
    syn->add_option("--samples", syn_opt.samples, "rows to generate")
        ->check(CLI::PositiveNumber);
    syn->add_option("--seed", syn_opt.seed, "master seed");
    syn->add_option("--noise-sigma", syn_opt.noise_sigma, "regress1d noise scale")
        ->check(CLI::PositiveNumber);
    syn->add_option("--skew", syn_opt.skew, "blocks2d majority-label probability");
    syn->add_option("--output", syn_opt.output, "CSV path");
    syn->callback([&] {
        std::string csv;
        if (syn_opt.kind == "regress1d")
            csv = synth_regress1d(syn_opt.samples, syn_opt.seed, syn_opt.noise_sigma);
        else if (syn_opt.kind == "blocks2d")
            csv = synth_blocks2d(syn_opt.samples, syn_opt.seed, syn_opt.skew);
        else
            csv = synth_mixed2d(syn_opt.samples, syn_opt.seed);
        deliver(syn_opt.output, csv, out);
    });

    struct {
        std::string input, output, grid;
    } grid_opt;

    CLI::App* pg = app.add_subcommand("predict-grid",
                                      "Tabulate a stored model's predictions on a grid");
    pg->add_option("--input", grid_opt.input, "model JSON artifact")->required();
    pg->add_option("--output", grid_opt.output, "grid CSV path");
    pg->add_option("--grid", grid_opt.grid, "N for regression, NxM for two features")
        ->required();
    pg->callback([&] {
        const detail::GridSpec g = detail::parse_grid(grid_opt.grid);
        const Json j = detail::parse_json(read_file(grid_opt.input), grid_opt.input);
        const std::string csv = as_input([&]() -> std::string {
            const std::string kind = j.at("kind").get<std::string>();
            std::ostringstream csv_out;
            if (kind == "regress_ensemble" || kind == "loo_baseline") {
                if (g.two_d)
                    throw BadFlag("regression grids are one-dimensional: --grid N");
                csv_out << "x,mean,sd\n";
                const auto emit = [&](double x, double mean, double var) {
                    csv_out << format_double(x) << ',' << format_double(mean) << ','
                            << format_double(std::sqrt(var)) << '\n';
                };
                if (kind == "loo_baseline") {
                    const LooEnsemble e = loo_from_json(j);
                    for (const double x : detail::linspace(e.x_lo, e.x_hi, g.n)) {
                        const PredictiveMixture m = predict(e, x);
                        emit(x, m.mean(), m.variance());
                    }
                } else {
                    const StoredEnsemble e = ensemble_from_json(j);
                    std::vector<std::vector<double>> values;
                    values.reserve(e.members.size());
                    for (const PolyDescription& d : e.members)
                        values.push_back(coeff_values(d, e.config));
                    for (const double x : detail::linspace(e.x_lo, e.x_hi, g.n)) {
                        const double xs = e.scale_x(x);
                        std::vector<double> means;
                        means.reserve(values.size());
                        double mean = 0.0;
                        for (std::size_t i = 0; i < values.size(); ++i) {
                            means.push_back(e.noise_sigma * chebyshev_eval(values[i], xs));
                            mean += e.weights[i] * means.back();
                        }
                        double between = 0.0;
                        for (std::size_t i = 0; i < means.size(); ++i)
                            between += e.weights[i] * (means[i] - mean) * (means[i] - mean);
                        emit(x, mean, e.noise_sigma * e.noise_sigma + between);
                    }
                }
                return csv_out.str();
            }
            if (!g.two_d)
                throw BadFlag("classification grids need --grid NxM");
            std::vector<std::string> labels;
            std::size_t num_labels = 0;
            std::vector<double> lo, hi;
            std::function<DiscreteDist(const std::vector<double>&)> model;
            StoredForest forest;
            StoredConventional conventional;
            BaggedForest bag_model;
            if (kind == "forest") {
                forest = forest_from_json(j);
                labels = forest.labels;
                num_labels = forest.forest.num_labels;
                lo = forest.forest.scaler.lo;
                hi = forest.forest.scaler.hi;
                model = [&](const std::vector<double>& x) {
                    return predict(forest.forest, x);
                };
            } else if (kind == "entropy_tree") {
                conventional = entropy_tree_from_json(j);
                labels = conventional.labels;
                num_labels = conventional.num_labels;
                lo = conventional.bounds.lo;
                hi = conventional.bounds.hi;
                model = [&](const std::vector<double>& x) {
                    return predict(conventional.trees.front(), x);
                };
            } else if (kind == "bagged_forest") {
                conventional = bagged_from_json(j);
                labels = conventional.labels;
                num_labels = conventional.num_labels;
                lo = conventional.bounds.lo;
                hi = conventional.bounds.hi;
                bag_model = BaggedForest{conventional.trees, conventional.num_labels};
                model = [&](const std::vector<double>& x) { return predict(bag_model, x); };
            } else {
                throw BadInput("cannot lay a prediction grid for artifact kind '" + kind +
                               "'");
            }
            if (lo.size() != 2)
                throw BadInput("grid prediction needs exactly 2 features, artifact has " +
                               std::to_string(lo.size()));
            csv_out << "f1,f2";
            for (std::size_t l = 0; l < num_labels; ++l)
                csv_out << ",p_" << detail::label_name(labels, l);
            csv_out << '\n';
            for (const double f2 : detail::linspace(lo[1], hi[1], g.m)) {
                for (const double f1 : detail::linspace(lo[0], hi[0], g.n)) {
                    const DiscreteDist p = model({f1, f2});
                    csv_out << format_double(f1) << ',' << format_double(f2);
                    for (std::size_t l = 0; l < p.size(); ++l)
                        csv_out << ',' << format_double(p[l]);
                    csv_out << '\n';
                }
            }
            return csv_out.str();
        });
        deliver(grid_opt.output, csv, out);
    });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("parsimony");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: BadFlag: " << e.what() << '\n';
        return kExitBadFlag;
    } catch (const BadFlag& e) {
        err << "error: BadFlag: " << e.what() << '\n';
        return kExitBadFlag;
    } catch (const IoFailure& e) {
        err << "error: IoFailure: " << e.what() << '\n';
        return kExitIoFailure;
    } catch (const BadInput& e) {
        err << "error: BadInput: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const OutOfRange& e) {
        err << "error: BadFlag: " << e.what() << '\n';
        return kExitBadFlag;
    } catch (const Error& e) {
        err << "error: BadInput: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const nlohmann::json::exception& e) {
        err << "error: BadInput: " << e.what() << '\n';
        return kExitBadInput;
    }
}

inline int run(const std::vector<std::string>& args) {
    return run(args, std::cout, std::cerr);
}

}  // namespace parsimony::cli
