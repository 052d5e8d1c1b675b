#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <infodecomp/io.hpp>
#include <infodecomp/oracle.hpp>
#include <infodecomp/parallel.hpp>
#include <infodecomp/pipeline.hpp>
#include <infodecomp/rng.hpp>
#include <infodecomp/svg.hpp>
#include <infodecomp/version.hpp>

namespace {

using namespace infodecomp;

std::string join_argv(int argc, char** argv) {
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        if (i) cmd += ' ';
        cmd += argv[i];
    }
    return cmd;
}

struct CommonOpts {
    int k = 10;
    int surrogates = 100;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int threads = 1;
    bool no_standardize = false;
    double jitter = 0.0;

    EstimatorConfig config() const {
        EstimatorConfig cfg;
        cfg.k = k;
        cfg.n_surrogates = surrogates;
        cfg.alpha = alpha;
        cfg.seed = seed;
        cfg.standardize = !no_standardize;
        cfg.jitter_scale = jitter;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--k", o.k, "neighbor count")->capture_default_str();
    cmd->add_option("--surrogates", o.surrogates, "surrogate count")->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "significance level")->capture_default_str();
    cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker pool size")->capture_default_str();
    cmd->add_flag("--no-standardize", o.no_standardize, "skip per-feature z-scoring");
    cmd->add_option("--jitter", o.jitter, "uniform noise scale relative to feature SD")->capture_default_str();
}

int run(int argc, char** argv) {
    CLI::App app{std::string(kToolName) + " " + kToolVersion +
                 " - decomposition of class-predictive information into unique, redundant and synergistic "
                 "per-feature components"};
    app.require_subcommand(1);
    const std::string command_line = join_argv(argc, argv);

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "generate a benchmark dataset as CSV");
    std::string sim_scenario, sim_out, sim_spec_out;
    std::size_t sim_npc = 1000, sim_total = 0;
    std::uint64_t sim_seed = 0;
    simulate->add_option("--scenario", sim_scenario, "unique|synergy|redundancy|mixed6|nongauss")->required();
    simulate->add_option("--samples-per-class", sim_npc, "samples per class (nongauss: expected, total = 4x)")
        ->capture_default_str();
    simulate->add_option("--samples", sim_total, "total samples (nongauss only, overrides --samples-per-class)");
    simulate->add_option("--seed", sim_seed, "random seed")->capture_default_str();
    simulate->add_option("--out", sim_out, "output CSV path")->required();
    simulate->add_option("--spec-out", sim_spec_out, "also write the generating mixture (Gaussian scenarios)");

    // ---- analyze ----
    auto* analyze = app.add_subcommand("analyze", "decompose every feature of a CSV dataset");
    std::string an_input, an_class = "class", an_out;
    CommonOpts an_opts;
    analyze->add_option("--input", an_input, "input CSV")->required();
    analyze->add_option("--class-col", an_class, "class column name or 0-based index")->capture_default_str();
    add_common(analyze, an_opts);
    analyze->add_option("--out", an_out, "output report path")->required();

    // ---- batch ----
    auto* batch = app.add_subcommand("batch", "repeat a scenario with fresh simulated datasets and aggregate");
    std::string ba_scenario, ba_out, ba_csv_prefix;
    std::size_t ba_npc = 1000, ba_total = 0;
    int ba_repeats = 100;
    bool ba_with_oracle = false;
    long long ba_mc = 1000000;
    double ba_tol = 1e-3;
    CommonOpts ba_opts;
    batch->add_option("--scenario", ba_scenario, "unique|synergy|redundancy|mixed6|nongauss")->required();
    batch->add_option("--repeats", ba_repeats, "number of fresh datasets")->capture_default_str();
    batch->add_option("--samples-per-class", ba_npc, "samples per class per repeat")->capture_default_str();
    batch->add_option("--samples", ba_total, "total samples (nongauss only)");
    add_common(batch, ba_opts);
    batch->add_flag("--with-oracle", ba_with_oracle, "embed theoretical values (Gaussian scenarios)");
    batch->add_option("--mc-samples", ba_mc, "Monte-Carlo draws per class for the oracle")->capture_default_str();
    batch->add_option("--tol", ba_tol, "oracle acceptance threshold in nats")->capture_default_str();
    batch->add_option("--out", ba_out, "output report path")->required();
    batch->add_option("--csv-prefix", ba_csv_prefix, "also export aggregate tables as CSV files");

    // ---- bootstrap ----
    auto* bootstrap = app.add_subcommand("bootstrap", "stratified resampling of one dataset with aggregation");
    std::string bo_input, bo_class = "class", bo_out, bo_csv_prefix;
    int bo_repeats = 100;
    CommonOpts bo_opts;
    bo_opts.jitter = 1e-9;  // duplicate resampled rows need separating
    bootstrap->add_option("--input", bo_input, "input CSV")->required();
    bootstrap->add_option("--class-col", bo_class, "class column name or 0-based index")->capture_default_str();
    bootstrap->add_option("--repeats", bo_repeats, "number of resamples")->capture_default_str();
    add_common(bootstrap, bo_opts);
    bootstrap->add_option("--out", bo_out, "output report path")->required();
    bootstrap->add_option("--csv-prefix", bo_csv_prefix, "also export aggregate tables as CSV files");

    // ---- oracle ----
    auto* oracle_cmd = app.add_subcommand("oracle", "theoretical decomposition of a Gaussian mixture");
    std::string or_spec, or_out;
    long long or_mc = 1000000;
    double or_tol = 1e-3;
    std::uint64_t or_seed = 0;
    int or_threads = 1;
    oracle_cmd->add_option("--spec", or_spec, "GmmSpec file")->required();
    oracle_cmd->add_option("--mc-samples", or_mc, "Monte-Carlo draws per class")->capture_default_str();
    oracle_cmd->add_option("--tol", or_tol, "acceptance threshold in nats")->capture_default_str();
    oracle_cmd->add_option("--seed", or_seed, "random seed")->capture_default_str();
    oracle_cmd->add_option("--threads", or_threads, "worker pool size")->capture_default_str();
    oracle_cmd->add_option("--out", or_out, "output report path")->required();

    // ---- plot ----
    auto* plot = app.add_subcommand("plot", "render a report as SVG");
    std::string pl_report, pl_out;
    bool pl_clip = false;
    plot->add_option("--report", pl_report, "input report path")->required();
    plot->add_option("--out", pl_out, "output SVG path")->required();
    plot->add_flag("--clip-zero", pl_clip, "floor displayed bars at zero");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1, --help exits 0
    }

    if (simulate->parsed()) {
        auto generated = scenarios::generate(sim_scenario, sim_npc, sim_seed, sim_total);
        write_dataset_csv(generated.data, sim_out);
        std::cout << "wrote " << generated.data.n_samples() << " samples to " << sim_out << "\n";
        if (!sim_spec_out.empty()) {
            if (!generated.spec) throw Error("scenario " + sim_scenario + " has no Gaussian mixture form");
            write_gmm_spec(*generated.spec, sim_spec_out);
            std::cout << "wrote mixture spec to " << sim_spec_out << "\n";
        }
        return 0;
    }

    if (analyze->parsed()) {
        Dataset ds = ingest_csv(an_input, an_class);
        std::vector<std::string> names = ds.feature_names;
        const EstimatorConfig cfg = an_opts.config();
        auto results = run_analysis(std::move(ds), cfg, an_opts.threads);

        ReportHeader header;
        header.kind = "analyze";
        header.command = command_line;
        header.config = cfg;
        header.threads = an_opts.threads;
        header.input = an_input;
        const JDoc report = build_report(header, names, results, nullptr, nullptr);
        write_text_file(an_out, finalize_report(report));
        std::cout << "wrote report to " << an_out << "\n";
        return 0;
    }

    if (batch->parsed()) {
        BatchSpec spec;
        spec.scenario = ba_scenario;
        spec.n_per_class = ba_npc;
        spec.n_total_override = ba_total;
        spec.repeats = ba_repeats;
        spec.config = ba_opts.config();
        spec.threads = ba_opts.threads;
        BatchOutput out = run_batch(spec);

        std::vector<DecompositionResult> oracle_results;
        if (ba_with_oracle) {
            if (!scenarios::is_gaussian_scenario(ba_scenario))
                throw Error("scenario " + ba_scenario + " has no Gaussian mixture form for the oracle");
            auto spec_only = scenarios::generate(ba_scenario, 0, 0, 0).spec;
            oracle_results.resize(out.feature_names.size());
            parallel_for(oracle_results.size(), ba_opts.threads, [&](std::size_t x) {
                oracle_results[x] = oracle::oracle_decompose(*spec_only, static_cast<int>(x), ba_tol, ba_mc,
                                                             ba_opts.seed);
            });
        }

        ReportHeader header;
        header.kind = "batch";
        header.command = command_line;
        header.config = spec.config;
        header.threads = spec.threads;
        header.scenario = ba_scenario;
        header.repeats = ba_repeats;
        if (ba_with_oracle) header.tol = ba_tol;
        const JDoc report = build_report(header, out.feature_names, {}, &out.aggregate,
                                         ba_with_oracle ? &oracle_results : nullptr);
        write_text_file(ba_out, finalize_report(report));
        if (!ba_csv_prefix.empty()) write_aggregate_tables(out.aggregate, ba_csv_prefix);
        std::cout << "wrote report to " << ba_out << "\n";
        return 0;
    }

    if (bootstrap->parsed()) {
        Dataset ds = ingest_csv(bo_input, bo_class);
        const EstimatorConfig cfg = bo_opts.config();
        ValidatedDataset validated = validate(std::move(ds), cfg);
        Aggregate agg = bootstrap_decompose(validated, cfg, bo_repeats, bo_opts.threads);

        ReportHeader header;
        header.kind = "bootstrap";
        header.command = command_line;
        header.config = cfg;
        header.threads = bo_opts.threads;
        header.input = bo_input;
        header.repeats = bo_repeats;
        const JDoc report = build_report(header, validated.data.feature_names, {}, &agg, nullptr);
        write_text_file(bo_out, finalize_report(report));
        if (!bo_csv_prefix.empty()) write_aggregate_tables(agg, bo_csv_prefix);
        std::cout << "wrote report to " << bo_out << "\n";
        return 0;
    }

    if (oracle_cmd->parsed()) {
        const oracle::GmmSpec spec = read_gmm_spec(or_spec);
        std::vector<DecompositionResult> results(spec.dim());
        parallel_for(results.size(), or_threads, [&](std::size_t x) {
            results[x] = oracle::oracle_decompose(spec, static_cast<int>(x), or_tol, or_mc, or_seed);
        });

        ReportHeader header;
        header.kind = "oracle";
        header.command = command_line;
        header.config.seed = or_seed;
        header.config.mc_samples = or_mc;
        header.threads = or_threads;
        header.input = or_spec;
        header.tol = or_tol;
        std::vector<std::string> names = spec.feature_names;
        if (names.empty())
            for (std::size_t f = 0; f < spec.dim(); ++f) names.push_back("X" + std::to_string(f + 1));
        const JDoc report = build_report(header, names, results, nullptr, nullptr);
        write_text_file(or_out, finalize_report(report));
        std::cout << "wrote report to " << or_out << "\n";
        return 0;
    }

    if (plot->parsed()) {
        const std::string svg = render_report_svg(read_text_file(pl_report), pl_clip);
        write_text_file(pl_out, svg);
        std::cout << "wrote plot to " << pl_out << "\n";
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const infodecomp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
