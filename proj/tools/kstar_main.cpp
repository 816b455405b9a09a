#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kstar/dataset.hpp"
#include "kstar/distance.hpp"
#include "kstar/kstar.hpp"
#include "kstar/neighbor_matrix.hpp"
#include "kstar/report.hpp"
#include "kstar/synth.hpp"

namespace {

constexpr const char* kEpochTimestamp = "1970-01-01T00:00:00Z";

struct CommonOpts {
    std::string input;
    std::string labels;
    std::string format = "auto";
    std::string metric = "euclidean";
    int threads = 0;
    std::string out;
    bool fixed_timestamp = false;
};

kstar::FileFormat resolve_format(const std::string& format, const std::string& path) {
    if (format == "auto") return kstar::format_from_extension(path);
    if (format == "csv") return kstar::FileFormat::csv;
    if (format == "npy") return kstar::FileFormat::npy_pair;
    if (format == "jsonl") return kstar::FileFormat::jsonl;
    throw kstar::ValidationError("unknown format `" + format +
                                 "`; expected csv, npy, jsonl, or auto");
}

std::string default_stem(const std::string& input) {
    std::filesystem::path p(input);
    p.replace_extension("");
    return p.string();
}

std::string timestamp_for(bool fixed) {
    return fixed ? kEpochTimestamp : kstar::iso8601_utc_now();
}

kstar::AnalysisReport analyze_one(const std::string& input, const std::string& labels,
                                  const std::string& format, const kstar::Metric& metric,
                                  int threads, std::size_t bins, const std::string& preds_path,
                                  const std::string& timestamp) {
    const auto set = kstar::load_embeddings(input, resolve_format(format, input), labels);
    const auto index = kstar::build_class_index(set);
    std::vector<int> preds;
    const bool have_preds = !preds_path.empty();
    if (have_preds) preds = kstar::load_predictions(preds_path, set);
    const auto result = kstar::compute_kstar(set, index, metric, threads);
    const kstar::SourceInfo source{input, metric.name(), timestamp};
    return kstar::build_report(set, index, result, have_preds ? &preds : nullptr, bins, source);
}

int run_analyze(const CommonOpts& opts, const std::string& preds_path, std::size_t bins) {
    const auto metric = kstar::Metric::parse(opts.metric);
    const auto report = analyze_one(opts.input, opts.labels, opts.format, metric, opts.threads,
                                    bins, preds_path, timestamp_for(opts.fixed_timestamp));
    const std::string stem = opts.out.empty() ? default_stem(opts.input) : opts.out;
    for (const auto& path : kstar::write_report_artifacts(report, stem)) {
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

int run_generate(const kstar::SynthSpec& spec, const std::string& out,
                 const std::string& labels) {
    const auto set = kstar::generate(spec);
    kstar::write_embeddings(set, out, kstar::format_from_extension(out), labels);
    std::cout << "wrote " << out << " (" << set.n << " samples, " << set.d << " dims, "
              << set.num_classes() << " classes)\n";
    return 0;
}

int run_compare(const std::vector<std::string>& inputs, const std::vector<std::string>& labels,
                const CommonOpts& opts, std::size_t bins) {
    if (inputs.size() < 2) {
        throw kstar::ValidationError("compare needs at least 2 --input files");
    }
    const auto metric = kstar::Metric::parse(opts.metric);
    const std::string timestamp = timestamp_for(opts.fixed_timestamp);
    std::vector<kstar::AnalysisReport> reports;
    reports.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const std::string label_path = i < labels.size() ? labels[i] : "";
        reports.push_back(analyze_one(inputs[i], label_path, opts.format, metric, opts.threads,
                                      bins, "", timestamp));
    }
    const auto cmp = kstar::compare(reports);
    const std::string stem = opts.out.empty() ? "compare" : opts.out;
    kstar::write_comparison_json(cmp, stem + ".compare.json");
    std::cout << "wrote " << stem << ".compare.json\n";
    kstar::write_comparison_markdown(cmp, stem + ".compare.md");
    std::cout << "wrote " << stem << ".compare.md\n";
    std::cout << cmp.n_changed << " of " << cmp.class_names.size()
              << " classes changed pattern\n";
    return 0;
}

int run_matrix(const CommonOpts& opts, const std::vector<std::string>& class_names,
               bool all_classes) {
    const auto metric = kstar::Metric::parse(opts.metric);
    const auto set = kstar::load_embeddings(opts.input, resolve_format(opts.format, opts.input),
                                            opts.labels);
    const auto index = kstar::build_class_index(set);

    std::vector<int> targets;
    if (all_classes) {
        for (std::size_t c = 0; c < set.num_classes(); ++c) targets.push_back(static_cast<int>(c));
    } else {
        if (class_names.empty()) {
            throw kstar::ValidationError("pass --classes names or --all-classes");
        }
        for (const auto& name : class_names) {
            auto it = std::find(set.class_names.begin(), set.class_names.end(), name);
            if (it == set.class_names.end()) {
                throw kstar::ValidationError("unknown class `" + name + "`");
            }
            targets.push_back(static_cast<int>(it - set.class_names.begin()));
        }
    }

    const std::string stem = opts.out.empty() ? default_stem(opts.input) : opts.out;
    for (int c : targets) {
        const std::string& name = set.class_names[static_cast<std::size_t>(c)];
        const auto mat = kstar::build_neighbor_matrix(set, index, c, metric, opts.threads);
        const std::string base = stem + "." + kstar::sanitize_for_filename(name) + ".nnmatrix";
        kstar::write_matrix_csv(mat, base + ".csv");
        std::cout << "wrote " << base << ".csv\n";
        kstar::write_matrix_svg(mat, base + ".svg", name);
        std::cout << "wrote " << base << ".svg\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k* latent-space structure analyzer: per-sample rank of the first "
                 "differently-labeled neighbor, per-class distribution statistics, and "
                 "pattern classification"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from an INI/TOML file (flags win)");

    CommonOpts an, mx;
    std::string preds_path;
    std::size_t an_bins = 20, cmp_bins = 20;

    auto add_common = [](CLI::App* cmd, CommonOpts& opts, bool input_required) {
        auto* in = cmd->add_option("--input,-i", opts.input, "Embedding file");
        if (input_required) in->required();
        cmd->add_option("--labels", opts.labels, "Label file for npy input");
        cmd->add_option("--format", opts.format, "Input format: csv, npy, jsonl, auto")
            ->default_val("auto");
        cmd->add_option("--metric", opts.metric,
                        "Distance: euclidean, cityblock, maxnorm, cosine")
            ->default_val("euclidean");
        cmd->add_option("--threads", opts.threads, "Worker threads, 0 = all cores")
            ->envname("KSTAR_THREADS")
            ->default_val(0);
        cmd->add_option("--out,-o", opts.out, "Output stem");
        cmd->add_flag("--fixed-timestamp", opts.fixed_timestamp,
                      "Stamp reports with the epoch instead of the current time");
    };

    auto* analyze = app.add_subcommand("analyze", "Full pipeline: ranks, statistics, reports");
    add_common(analyze, an, true);
    analyze->add_option("--preds", preds_path, "Predicted labels, one per line");
    analyze->add_option("--bins", an_bins, "Histogram bin count")->default_val(20);

    kstar::SynthSpec spec;
    std::string layout_name, gen_out, gen_labels;
    auto* generate = app.add_subcommand("generate", "Write a synthetic embedding set");
    generate->add_option("--layout", layout_name, "clustered, overlapped, or fractured")
        ->required();
    generate->add_option("--classes", spec.classes, "Class count")->default_val(4);
    generate->add_option("--per-class", spec.per_class, "Samples per class")->default_val(100);
    generate->add_option("--dim", spec.dim, "Dimensions")->default_val(16);
    generate->add_option("--seed", spec.seed, "RNG seed")->default_val(0);
    generate->add_option("--separation", spec.separation,
                         "Clustered: pairwise center distance in cluster sigmas")
        ->default_val(10.0);
    generate->add_option("--offset", spec.offset,
                         "Overlapped: shift added to the calibrated pair separation")
        ->default_val(0.0);
    generate->add_option("--shards", spec.shards, "Fractured: sub-blobs per class")
        ->default_val(8);
    generate->add_flag("--interleave,!--no-interleave", spec.interleave,
                       "Fractured: alternate shards of different classes along the line");
    generate->add_option("--out,-o", gen_out, "Output file (.csv, .npy, or .jsonl)")->required();
    generate->add_option("--labels", gen_labels, "Label file path for npy output");

    std::vector<std::string> cmp_inputs, cmp_labels;
    CommonOpts cm;
    auto* compare = app.add_subcommand("compare", "Analyze several sets, report side by side");
    compare->add_option("--input,-i", cmp_inputs, "Embedding files (repeat, at least 2)");
    compare->add_option("--labels", cmp_labels, "Label files for npy inputs, same order");
    compare->add_option("--format", cm.format, "Input format: csv, npy, jsonl, auto")
        ->default_val("auto");
    compare->add_option("--metric", cm.metric, "Distance: euclidean, cityblock, maxnorm, cosine")
        ->default_val("euclidean");
    compare->add_option("--threads", cm.threads, "Worker threads, 0 = all cores")
        ->envname("KSTAR_THREADS")
        ->default_val(0);
    compare->add_option("--out,-o", cm.out, "Output stem")->default_val("compare");
    compare->add_option("--bins", cmp_bins, "Histogram bin count")->default_val(20);
    compare->add_flag("--fixed-timestamp", cm.fixed_timestamp,
                      "Stamp reports with the epoch instead of the current time");

    std::vector<std::string> mx_classes;
    bool mx_all = false;
    auto* matrix = app.add_subcommand("matrix", "Per-class neighbor-rank matrices");
    add_common(matrix, mx, true);
    matrix->add_option("--classes", mx_classes, "Class names to render")->delimiter(',');
    matrix->add_flag("--all-classes", mx_all, "Render every class");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(analyze)) return run_analyze(an, preds_path, an_bins);
        if (app.got_subcommand(generate)) {
            spec.layout = [&] {
                if (layout_name == "clustered") return kstar::SynthSpec::Layout::clustered;
                if (layout_name == "overlapped") return kstar::SynthSpec::Layout::overlapped;
                if (layout_name == "fractured") return kstar::SynthSpec::Layout::fractured;
                throw kstar::SpecError("unknown layout `" + layout_name +
                                       "`; expected clustered, overlapped, or fractured");
            }();
            return run_generate(spec, gen_out, gen_labels);
        }
        if (app.got_subcommand(compare)) return run_compare(cmp_inputs, cmp_labels, cm, cmp_bins);
        if (app.got_subcommand(matrix)) return run_matrix(mx, mx_classes, mx_all);
        return 1;
    } catch (const kstar::IoError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const kstar::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "Error: " << e.what() << "\n";
        return 1;
    }
}
