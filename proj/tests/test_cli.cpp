#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "parsimony/cli.hpp"

namespace {

using namespace parsimony;
namespace fs = std::filesystem;

struct RunResult {
    int code = 0;
    std::string out, err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string work_path(const std::string& name) {
    const fs::path dir = fs::path("cli_work");
    fs::create_directories(dir);
    return (dir / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    REQUIRE(f.good());
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Json load_json(const std::string& path) { return Json::parse(read_file(path)); }

Json load_schema(const std::string& name) {
    return Json::parse(read_file(std::string(PARSIMONY_SOURCE_DIR) + "/schemas/" + name));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::istringstream in(text);
    return parsimony::detail::csv_rows(in);
}

double field(const std::vector<std::string>& row, std::size_t i) {
    return parsimony::detail::parse_double(row.at(i), 0);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("integer code text commands") {
    SUBCASE("documented example") {
        const RunResult r = run_cli({"encode", "--scheme", "rissanen2", "--value", "3"});
        CHECK(r.code == 0);
        CHECK(r.out == "1100\n");
        CHECK(r.err.empty());
    }
    SUBCASE("encode agrees with the library for every scheme") {
        // 5 stays inside every flag scheme's range (rissanen2 tops out at 6)
        for (const std::string& name : cli::scheme_flag_values()) {
            for (const std::uint64_t v : {0ull, 1ull, 5ull}) {
                const RunResult r =
                    run_cli({"encode", "--scheme", name, "--value", std::to_string(v)});
                REQUIRE(r.code == 0);
                CHECK(r.out == integer_encode(scheme_from_name(name), v).bit_string() + "\n");
            }
        }
    }
    SUBCASE("decode inverts encode") {
        for (const std::string& name : cli::scheme_flag_values()) {
            for (const std::uint64_t v : {0ull, 1ull, 5ull}) {
                const std::string bits = integer_encode(scheme_from_name(name), v).bit_string();
                const RunResult r = run_cli({"decode", "--scheme", name, "--bits", bits});
                REQUIRE(r.code == 0);
                CHECK(r.out == std::to_string(v) + "\n");
            }
        }
    }
    SUBCASE("decode rejects trailing bits") {
        const RunResult r = run_cli({"decode", "--scheme", "rissanen2", "--bits", "11000"});
        CHECK(r.code == cli::kExitBadInput);
        CHECK(r.err.starts_with("error: BadInput:"));
    }
    SUBCASE("kraft matches the library sum") {
        for (const std::string& name : {std::string("unary"), std::string("omega")}) {
            const RunResult r = run_cli({"kraft", "--scheme", name, "--zmax", "2000"});
            REQUIRE(r.code == 0);
            const double printed = std::stod(r.out);
            CHECK(printed == doctest::Approx(kraft_sum(scheme_from_name(name), 2000))
                                 .epsilon(1e-15));
            CHECK(printed <= 1.0 + 1e-12);
        }
    }
    SUBCASE("out of range value is a flag error") {
        const RunResult r = run_cli({"encode", "--scheme", "lensym4", "--value", "15"});
        CHECK(r.code == cli::kExitBadFlag);
        CHECK(r.err.starts_with("error: BadFlag:"));
    }
}

TEST_CASE("synthetic generators") {
    SUBCASE("regress1d emits n rows under the x,y header") {
        const RunResult r = run_cli({"synth", "--kind", "regress1d", "--samples", "12",
                                     "--seed", "5", "--noise-sigma", "0.5"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 13);
        CHECK(rows.front() == std::vector<std::string>{"x", "y"});
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double x = field(rows[i], 0);
            CHECK(x >= -2.5);
            CHECK(x <= 2.5);
        }
    }
    SUBCASE("blocks2d single point") {
        const RunResult r =
            run_cli({"synth", "--kind", "blocks2d", "--samples", "1", "--seed", "9"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 2);
        CHECK(rows.front() == std::vector<std::string>{"f1", "f2", "label"});
        CHECK((rows[1][2] == "A" || rows[1][2] == "B"));
    }
    SUBCASE("blocks2d respects the configured skew") {
        const RunResult r = run_cli(
            {"synth", "--kind", "blocks2d", "--samples", "400", "--seed", "11"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        std::size_t diag = 0, diag_a = 0, off = 0, off_a = 0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const bool diagonal = (field(rows[i], 0) < 0.5) == (field(rows[i], 1) < 0.5);
            const bool a = rows[i][2] == "A";
            (diagonal ? diag : off) += 1;
            if (a) (diagonal ? diag_a : off_a) += 1;
        }
        // three binomial sigmas at p = 0.9 around 200 rows per side is ~0.064
        CHECK(std::abs(static_cast<double>(diag_a) / static_cast<double>(diag) - 0.9) < 0.07);
        CHECK(std::abs(static_cast<double>(off_a) / static_cast<double>(off) - 0.1) < 0.07);
    }
    SUBCASE("mixed2d label proportions near the configured mixture") {
        const RunResult r =
            run_cli({"synth", "--kind", "mixed2d", "--samples", "100", "--seed", "3"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        std::size_t a = 0;
        for (std::size_t i = 1; i < rows.size(); ++i) a += rows[i][2] == "A";
        // mean P(A) is 1/2; three binomial sigmas at n=100 is 0.15
        CHECK(std::abs(static_cast<double>(a) / 100.0 - 0.5) <= 0.15);
    }
    SUBCASE("deterministic per seed") {
        const RunResult a =
            run_cli({"synth", "--kind", "mixed2d", "--samples", "20", "--seed", "4"});
        const RunResult b =
            run_cli({"synth", "--kind", "mixed2d", "--samples", "20", "--seed", "4"});
        const RunResult c =
            run_cli({"synth", "--kind", "mixed2d", "--samples", "20", "--seed", "5"});
        CHECK(a.out == b.out);
        CHECK(a.out != c.out);
    }
}

TEST_CASE("regression pipeline artifacts") {
    const std::string data = work_path("reg.csv");
    REQUIRE(run_cli({"synth", "--kind", "regress1d", "--samples", "10", "--seed", "1",
                     "--noise-sigma", "0.5", "--output", data})
                .code == 0);

    const std::string ens = work_path("reg_ens.json");
    const std::vector<std::string> regress_args = {
        "regress",  "--input", data, "--samples", "40", "--seed", "3",
        "--noise-sigma", "0.5", "--output", ens};
    REQUIRE(run_cli(regress_args).code == 0);

    SUBCASE("identical invocations write byte-identical artifacts") {
        const std::string again = work_path("reg_ens_again.json");
        std::vector<std::string> args = regress_args;
        args.back() = again;
        REQUIRE(run_cli(args).code == 0);
        CHECK(read_file(ens) == read_file(again));
    }

    SUBCASE("artifact matches an in-process run and the schema") {
        const Json j = load_json(ens);
        CHECK(schema::violations(load_schema("regress_ensemble.v1.schema.json"), j).empty());

        RegressionConfig cfg;
        cfg.samples = 40;
        cfg.seed = 3;
        cfg.noise_sigma = 0.5;
        std::istringstream in(read_file(data));
        const RegressionTable t = read_regression_csv(in);
        const RegressionDataset d = make_dataset(t.x, t.y, cfg.noise_sigma);
        const PolyEnsemble e = sample_ensemble(d, cfg);

        const StoredEnsemble stored = ensemble_from_json(j);
        double total_weight = 0.0;
        for (const double w : stored.weights) total_weight += w;
        CHECK(total_weight == doctest::Approx(1.0).epsilon(1e-12));

        // stored weighted mean equals the in-memory mixture mean
        const double x_query = 0.5 * (stored.x_lo + stored.x_hi);
        double stored_mean = 0.0;
        for (std::size_t i = 0; i < stored.members.size(); ++i)
            stored_mean += stored.weights[i] * stored.noise_sigma *
                           chebyshev_eval(coeff_values(stored.members[i], stored.config),
                                          stored.scale_x(x_query));
        CHECK(stored_mean == doctest::Approx(predict(e, x_query).mean()).epsilon(1e-9));

        for (std::size_t i = 0; i < stored.members.size(); ++i) {
            CHECK(stored.length_bits[i] ==
                  doctest::Approx(description_length(stored.members[i], stored.config))
                      .epsilon(1e-12));
            CHECK(stored.log2_likelihood[i] ==
                  doctest::Approx(log_likelihood(stored.members[i], d, stored.config))
                      .epsilon(1e-9));
        }
    }

    SUBCASE("objective report satisfies the identity") {
        const std::string rep = work_path("reg_report.json");
        REQUIRE(run_cli({"objective", "--ensemble", ens, "--baseline", "zero", "--output",
                         rep})
                    .code == 0);
        const Json j = load_json(rep);
        CHECK(schema::violations(load_schema("parsimony_report.v1.schema.json"), j).empty());
        CHECK(j.at("inference_info").get<double>() == 0.0);
        const double omega = j.at("omega").get<double>();
        const double chi = j.at("chi").get<double>();
        const double pred = j.at("prediction_info").get<double>();
        const double infer = j.at("inference_info").get<double>();
        const double len = j.at("description_length_expected").get<double>();
        const double ent = j.at("q_entropy").get<double>();
        CHECK(omega == doctest::Approx(pred - infer - len + ent).epsilon(1e-9));
        CHECK(chi == doctest::Approx(infer + len - ent).epsilon(1e-9));
        CHECK(omega == doctest::Approx(pred - chi).epsilon(1e-9));
    }

    SUBCASE("prediction grid spans the training range") {
        const RunResult r = run_cli({"predict-grid", "--input", ens, "--grid", "5"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 6);
        CHECK(rows.front() == std::vector<std::string>{"x", "mean", "sd"});
        const Json j = load_json(ens);
        CHECK(field(rows[1], 0) == doctest::Approx(j.at("x_lo").get<double>()));
        CHECK(field(rows[5], 0) == doctest::Approx(j.at("x_hi").get<double>()));
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(field(rows[i], 2) >= 0.5);  // sd never below the observation noise
    }

    SUBCASE("leave-one-out baseline artifact and grid") {
        const std::string base = work_path("reg_loo.json");
        REQUIRE(run_cli({"regress-baseline", "--input", data, "--max-degree", "4",
                         "--noise-sigma", "0.5", "--output", base})
                    .code == 0);
        const Json j = load_json(base);
        CHECK(schema::violations(load_schema("loo_baseline.v1.schema.json"), j).empty());
        CHECK(j.at("degree").get<int>() <= 4);
        const RunResult r = run_cli({"predict-grid", "--input", base, "--grid", "4"});
        REQUIRE(r.code == 0);
        CHECK(parse_csv(r.out).size() == 5);
    }
}

TEST_CASE("classification pipeline artifacts") {
    const std::string data = work_path("cls.csv");
    REQUIRE(run_cli({"synth", "--kind", "blocks2d", "--samples", "14", "--seed", "2",
                     "--output", data})
                .code == 0);

    const std::string forest = work_path("forest.json");
    REQUIRE(run_cli({"forest", "--input", data, "--trees", "60", "--seed", "5", "--output",
                     forest})
                .code == 0);

    SUBCASE("forest artifact validates and reconstructs") {
        const Json j = load_json(forest);
        CHECK(schema::violations(load_schema("forest.v1.schema.json"), j).empty());
        CHECK(j.at("config").at("anneal") == Json::array({0.0, 0.0}));

        const StoredForest s = forest_from_json(j);
        REQUIRE(s.forest.trees.size() == 60);
        const IntCodeScheme code =
            scheme_from_name(j.at("config").at("fraction_code").get<std::string>());
        const std::size_t k = s.forest.scaler.dims();
        double total = 0.0;
        for (std::size_t t = 0; t < s.forest.trees.size(); ++t) {
            const TreeDescription& d = s.forest.trees[t];
            CHECK(d.length_bits ==
                  doctest::Approx(tree_length_bits(d.root, k, code)).epsilon(1e-9));
            CHECK(d.log2_posterior ==
                  doctest::Approx(tree_log2_posterior(d.root, k, code)).epsilon(1e-9));
            total += s.forest.weights[t];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(s.forest.ess >= 1.0);
    }

    SUBCASE("forest objective satisfies the identity") {
        const std::string rep = work_path("forest_report.json");
        REQUIRE(run_cli({"objective", "--ensemble", forest, "--baseline", "uniform",
                         "--output", rep})
                    .code == 0);
        const Json j = load_json(rep);
        CHECK(schema::violations(load_schema("parsimony_report.v1.schema.json"), j).empty());
        const double omega = j.at("omega").get<double>();
        CHECK(omega == doctest::Approx(j.at("prediction_info").get<double>() -
                                       j.at("inference_info").get<double>() -
                                       j.at("description_length_expected").get<double>() +
                                       j.at("q_entropy").get<double>())
                           .epsilon(1e-9));
        CHECK(j.at("inference_info").get<double>() > 0.0);
    }

    SUBCASE("grid rows sweep the first feature fastest and stay normalized") {
        const RunResult r = run_cli({"predict-grid", "--input", forest, "--grid", "4x3"});
        REQUIRE(r.code == 0);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 13);
        // probability columns follow the artifact's first-appearance label order
        const auto labels = load_json(forest).at("labels").get<std::vector<std::string>>();
        REQUIRE(labels.size() == 2);
        CHECK(rows.front() == std::vector<std::string>{"f1", "f2", "p_" + labels[0],
                                                       "p_" + labels[1]});
        CHECK(field(rows[1], 1) == field(rows[2], 1));
        CHECK(field(rows[1], 0) != field(rows[2], 0));
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double sum = field(rows[i], 2) + field(rows[i], 3);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    SUBCASE("entropy tree and bagged forest artifacts") {
        const std::string tree = work_path("tree.json");
        REQUIRE(run_cli({"tree-baseline", "--input", data, "--output", tree}).code == 0);
        const Json tj = load_json(tree);
        CHECK(schema::violations(load_schema("entropy_tree.v1.schema.json"), tj).empty());

        const std::string bag = work_path("bag.json");
        REQUIRE(run_cli({"bagging", "--input", data, "--trees", "12", "--seed", "4",
                         "--output", bag})
                    .code == 0);
        const Json bj = load_json(bag);
        CHECK(schema::violations(load_schema("bagged_forest.v1.schema.json"), bj).empty());
        REQUIRE(bj.at("trees").size() == 12);

        for (const std::string& path : {tree, bag}) {
            const RunResult r = run_cli({"predict-grid", "--input", path, "--grid", "3x3"});
            REQUIRE(r.code == 0);
            CHECK(parse_csv(r.out).size() == 10);
        }
    }

    SUBCASE("forest runs are deterministic") {
        const std::string again = work_path("forest_again.json");
        REQUIRE(run_cli({"forest", "--input", data, "--trees", "60", "--seed", "5",
                         "--output", again})
                    .code == 0);
        CHECK(read_file(forest) == read_file(again));
    }
}

TEST_CASE("interpreters command") {
    const std::string m = work_path("lengths.csv");
    write_file(m, "l1,l2\n0,1\n2,0\n");
    const std::string out = work_path("prior.json");
    REQUIRE(run_cli({"interpreters", "--input", m, "--output", out}).code == 0);
    const Json j = load_json(out);
    CHECK(schema::violations(load_schema("stationary_prior.v1.schema.json"), j).empty());
    CHECK(j.at("languages").get<int>() == 2);
    const std::vector<double> prior = j.at("prior").get<std::vector<double>>();
    REQUIRE(prior.size() == 2);
    CHECK(prior[0] == doctest::Approx(0.625).epsilon(1e-9));
    CHECK(prior[1] == doctest::Approx(0.375).epsilon(1e-9));
}

TEST_CASE("schema validator rejects structural drift") {
    const Json schema = load_schema("stationary_prior.v1.schema.json");
    Json good{{"format_version", 1},
              {"kind", "stationary_prior"},
              {"languages", 2},
              {"tol", 1e-12},
              {"prior", {0.625, 0.375}}};
    CHECK(schema::violations(schema, good).empty());

    Json wrong_version = good;
    wrong_version["format_version"] = 2;
    CHECK(!schema::violations(schema, wrong_version).empty());

    Json missing = good;
    missing.erase("prior");
    CHECK(!schema::violations(schema, missing).empty());

    Json extra = good;
    extra["surprise"] = true;
    CHECK(!schema::violations(schema, extra).empty());

    Json bad_type = good;
    bad_type["languages"] = "two";
    CHECK(!schema::violations(schema, bad_type).empty());
}

TEST_CASE("failure modes exit with documented codes") {
    SUBCASE("missing input file") {
        const RunResult r = run_cli({"regress", "--input", work_path("absent.csv")});
        CHECK(r.code == cli::kExitIoFailure);
        CHECK(r.err.starts_with("error: IoFailure:"));
    }
    SUBCASE("unwritable output directory") {
        const std::string data = work_path("tiny.csv");
        write_file(data, "x,y\n0,0\n1,1\n");
        const RunResult r = run_cli({"regress-baseline", "--input", data, "--output",
                                     work_path("no_such_dir") + "/x.json"});
        CHECK(r.code == cli::kExitIoFailure);
    }
    SUBCASE("malformed input data") {
        const std::string bad = work_path("bad.csv");
        write_file(bad, "x,y\n1,fnord\n");
        const RunResult r = run_cli({"regress", "--input", bad});
        CHECK(r.code == cli::kExitBadInput);
        CHECK(r.err.starts_with("error: BadInput:"));
        CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    }
    SUBCASE("wrong header") {
        const std::string bad = work_path("badheader.csv");
        write_file(bad, "a,b\n1,2\n");
        CHECK(run_cli({"regress", "--input", bad}).code == cli::kExitBadInput);
    }
    SUBCASE("non-square length matrix") {
        const std::string bad = work_path("notsquare.csv");
        write_file(bad, "l1,l2\n0,1\n");
        CHECK(run_cli({"interpreters", "--input", bad}).code == cli::kExitBadInput);
    }
    SUBCASE("too few points for the loo baseline") {
        const std::string tiny = work_path("onepoint.csv");
        write_file(tiny, "x,y\n0,0\n");
        CHECK(run_cli({"regress-baseline", "--input", tiny}).code == cli::kExitBadInput);
    }
    SUBCASE("flag violations") {
        CHECK(run_cli({"encode", "--scheme", "nope", "--value", "1"}).code ==
              cli::kExitBadFlag);
        CHECK(run_cli({"encode", "--value", "1"}).code == cli::kExitBadFlag);
        CHECK(run_cli({"frobnicate"}).code == cli::kExitBadFlag);
        CHECK(run_cli({}).code == cli::kExitBadFlag);
        CHECK(run_cli({"synth", "--kind", "regress1d", "--samples", "0"}).code ==
              cli::kExitBadFlag);
        const std::string data = work_path("anneal.csv");
        write_file(data, "f1,f2,label\n0.2,0.3,A\n0.8,0.9,B\n");
        CHECK(run_cli({"forest", "--input", data, "--anneal", "0,banana"}).code ==
              cli::kExitBadFlag);
        CHECK(run_cli({"forest", "--input", data, "--anneal", "0,2"}).code ==
              cli::kExitBadFlag);
    }
    SUBCASE("baseline and artifact kind must agree") {
        const std::string m = work_path("obj_lengths.csv");
        write_file(m, "l1,l2\n0,1\n2,0\n");
        const std::string prior = work_path("obj_prior.json");
        REQUIRE(run_cli({"interpreters", "--input", m, "--output", prior}).code == 0);
        CHECK(run_cli({"objective", "--ensemble", prior, "--baseline", "zero"}).code ==
              cli::kExitBadInput);
    }
    SUBCASE("help succeeds") {
        const RunResult r = run_cli({"--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("encode") != std::string::npos);
    }
}

TEST_CASE("atomic output leaves no temporary behind") {
    const std::string out = work_path("atomic.txt");
    REQUIRE(run_cli({"encode", "--scheme", "unary", "--value", "3", "--output", out}).code ==
            0);
    CHECK(read_file(out) == "1110\n");
    CHECK(!fs::exists(out + ".tmp"));
    // a second run replaces the file in place
    REQUIRE(run_cli({"encode", "--scheme", "unary", "--value", "5", "--output", out}).code ==
            0);
    CHECK(read_file(out) == "111110\n");
    CHECK(!fs::exists(out + ".tmp"));
}

}  // TEST_SUITE
