#include <infodecomp/pipeline.hpp>

#include <infodecomp/parallel.hpp>
#include <infodecomp/rng.hpp>

namespace infodecomp {

BatchOutput run_batch(const BatchSpec& spec) {
    if (spec.repeats < 1) throw Error("repeats must be positive");
    if (!scenarios::is_known_scenario(spec.scenario)) throw Error("unknown scenario: " + spec.scenario);

    BatchOutput out;
    out.runs.resize(static_cast<std::size_t>(spec.repeats));

    parallel_for(out.runs.size(), spec.threads, [&](std::size_t rep) {
        const std::uint64_t gen_seed =
            derive_stream(spec.config.seed, {static_cast<std::uint64_t>(StreamPurpose::repeat), rep, 0});
        EstimatorConfig rep_config = spec.config;
        rep_config.seed = derive_stream(spec.config.seed, {static_cast<std::uint64_t>(StreamPurpose::repeat), rep, 1});

        auto generated = scenarios::generate(spec.scenario, spec.n_per_class, gen_seed, spec.n_total_override);
        ValidatedDataset validated = validate(std::move(generated.data), rep_config);
        out.runs[rep] = decompose_all(validated, rep_config, 1);
    });

    auto generated = scenarios::generate(spec.scenario, 0, 0, 0);  // names only; generators accept n = 0
    out.feature_names = generated.data.feature_names;
    out.aggregate = aggregate_runs(out.runs, out.feature_names);
    return out;
}

std::vector<DecompositionResult> run_analysis(Dataset dataset, const EstimatorConfig& config, int threads) {
    if (config.jitter_scale > 0.0) dataset = jitter(dataset, config);
    ValidatedDataset validated = validate(std::move(dataset), config);
    return decompose_all(validated, config, threads);
}

}  // namespace infodecomp
