#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include <infodecomp/io.hpp>

using namespace infodecomp;
using nlohmann::json;

namespace {

const std::string cli = INFODECOMP_CLI_PATH;

int run_cli(const std::string& args) {
    const std::string cmd = cli + " " + args + " > /tmp/infodecomp_cli_stdout.txt 2>/tmp/infodecomp_cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string tmp(const std::string& name) { return "/tmp/infodecomp_cli_" + name; }

}  // namespace

TEST_CASE("simulate then analyze: six features, defaults echoed in the report") {
    const std::string csv = tmp("mixed6.csv");
    const std::string report = tmp("mixed6_report.json");
    REQUIRE(run_cli("simulate --scenario mixed6 --samples-per-class 150 --seed 7 --out " + csv) == 0);
    REQUIRE(run_cli("analyze --input " + csv + " --class-col class --surrogates 25 --seed 7 --threads 2 --out " +
                    report) == 0);

    const auto j = json::parse(read_text_file(report));
    CHECK(j.at("kind") == "analyze");
    CHECK(j.at("feature_names").size() == 6);
    CHECK(j.at("results").size() == 6);
    // documented defaults survive when not overridden
    CHECK(j.at("metadata").at("config").at("k") == 10);
    CHECK(j.at("metadata").at("config").at("alpha").get<double>() == 0.05);

    // plot consumes only the report: the dataset is gone by now
    std::remove(csv.c_str());
    const std::string svg = tmp("mixed6.svg");
    REQUIRE(run_cli("plot --report " + report + " --out " + svg) == 0);
    CHECK(read_text_file(svg).find("<svg") == 0);
    std::remove(report.c_str());
    std::remove(svg.c_str());
}

TEST_CASE("exit codes: 1 for usage errors, 2 for data errors") {
    CHECK(run_cli("analyze --no-such-flag") == 1);
    CHECK(run_cli("nonsense-subcommand") == 1);
    CHECK(run_cli("analyze --input /tmp/does_not_exist_12345.csv --out /tmp/x.json") == 2);
    CHECK(run_cli("simulate --scenario nope --out /tmp/x.csv") == 2);

    // ClassTooSmall surfaces as a data error with context
    const std::string csv = tmp("small.csv");
    write_text_file(csv, "a,b,class\n1,2,u\n3,4,u\n5,6,v\n7,8,v\n");
    CHECK(run_cli("analyze --input " + csv + " --out /tmp/x.json") == 2);
    const std::string err = read_text_file("/tmp/infodecomp_cli_stderr.txt");
    CHECK(err.find("k+1") != std::string::npos);
    std::remove(csv.c_str());
}

TEST_CASE("simulate --spec-out + oracle subcommand produce a theoretical report") {
    const std::string csv = tmp("syn.csv");
    const std::string spec = tmp("syn_spec.json");
    const std::string report = tmp("syn_oracle.json");
    REQUIRE(run_cli("simulate --scenario synergy --samples-per-class 50 --seed 3 --out " + csv + " --spec-out " +
                    spec) == 0);
    REQUIRE(run_cli("oracle --spec " + spec + " --mc-samples 50000 --tol 1e-3 --seed 5 --threads 2 --out " +
                    report) == 0);
    const auto j = json::parse(read_text_file(report));
    CHECK(j.at("kind") == "oracle");
    CHECK(j.at("results").size() == 2);
    const double synergy = j.at("results").at(0).at("synergistic").get<double>();
    CHECK(synergy > 0.05);
    std::remove(csv.c_str());
    std::remove(spec.c_str());
    std::remove(report.c_str());

    // nongauss has no mixture form
    CHECK(run_cli("simulate --scenario nongauss --samples-per-class 20 --out " + csv + " --spec-out " + spec) == 2);
    std::remove(csv.c_str());
}

TEST_CASE("batch: aggregate report with CSV exports and thread-independent hash") {
    const std::string r1 = tmp("batch1.json"), r2 = tmp("batch2.json");
    const std::string base =
        "batch --scenario redundancy --repeats 3 --samples-per-class 120 --surrogates 25 --seed 11 --out ";
    REQUIRE(run_cli(base + r1 + " --threads 1 --csv-prefix " + tmp("agg_")) == 0);
    REQUIRE(run_cli(base + r2 + " --threads 2") == 0);

    const auto j1 = json::parse(read_text_file(r1));
    const auto j2 = json::parse(read_text_file(r2));
    CHECK(j1.at("kind") == "batch");
    CHECK(j1.at("aggregate").at("n_repeats") == 3);
    CHECK(j1.at("determinism_hash") == j2.at("determinism_hash"));
    CHECK(read_text_file(tmp("agg_components.csv")).find("feature,mi_mean") == 0);

    // batch report plots with heatmaps
    const std::string svg = tmp("batch.svg");
    REQUIRE(run_cli("plot --report " + r1 + " --out " + svg + " --clip-zero") == 0);
    CHECK(read_text_file(svg).find("Zmin selections") != std::string::npos);

    for (const std::string& f : {r1, r2, svg, tmp("agg_components.csv"), tmp("agg_selection_min.csv"),
                                 tmp("agg_selection_max.csv"), tmp("agg_order_min.csv"), tmp("agg_order_max.csv")})
        std::remove(f.c_str());
}

TEST_CASE("bootstrap subcommand aggregates resamples of a CSV") {
    const std::string csv = tmp("boot.csv");
    const std::string report = tmp("boot_report.json");
    REQUIRE(run_cli("simulate --scenario unique --samples-per-class 120 --seed 9 --out " + csv) == 0);
    REQUIRE(run_cli("bootstrap --input " + csv + " --repeats 2 --surrogates 25 --seed 9 --threads 2 --out " +
                    report) == 0);
    const auto j = json::parse(read_text_file(report));
    CHECK(j.at("kind") == "bootstrap");
    CHECK(j.at("aggregate").at("n_repeats") == 2);
    CHECK(j.at("metadata").at("config").at("jitter_scale").get<double>() == 1e-9);
    std::remove(csv.c_str());
    std::remove(report.c_str());
}

TEST_CASE("batch --with-oracle embeds theoretical values that plot as overlays") {
    const std::string report = tmp("batch_oracle.json");
    REQUIRE(run_cli("batch --scenario synergy --repeats 2 --samples-per-class 120 --surrogates 25 --seed 13 "
                    "--with-oracle --mc-samples 20000 --threads 2 --out " +
                    report) == 0);
    const auto j = json::parse(read_text_file(report));
    CHECK(j.at("oracle").size() == 2);
    const std::string svg = tmp("batch_oracle.svg");
    REQUIRE(run_cli("plot --report " + report + " --out " + svg) == 0);
    CHECK(read_text_file(svg).find("magenta") != std::string::npos);
    std::remove(report.c_str());
    std::remove(svg.c_str());
}
