#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsa/bitcore.hpp"
#include "qsa/nist.hpp"
#include "qsa/qsim.hpp"
#include "qsa/registry.hpp"
#include "qsa/report.hpp"
#include "qsa/spectral.hpp"
#include "qsa/svg.hpp"
#include "qsa/transport.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw qsa::FormatError("cannot write " + path.string());
    out << content;
}

// Dataset files named like 56_10_F.csv carry n and cycle m up front.
void parse_name_metadata(const std::string& stem, uint32_t& n, uint32_t& m) {
    static const std::regex pattern(R"(^(\d+)_(\d+))");
    std::smatch match;
    if (std::regex_search(stem, match, pattern)) {
        n = static_cast<uint32_t>(std::stoul(match[1]));
        m = static_cast<uint32_t>(std::stoul(match[2]));
    }
}

int cmd_ingest(const std::vector<std::string>& paths, const fs::path& registry_path,
               const fs::path& out_dir, const std::string& origin) {
    qsa::Registry registry = qsa::Registry::load(registry_path);
    fs::create_directories(out_dir);
    int failures = 0;
    for (const auto& path : paths) {
        try {
            const std::string name = fs::path(path).stem().string();
            const fs::path cache = out_dir / (name + ".qsbm");
            const qsa::RegistryEntry* existing = registry.find(name);
            if (existing && fs::exists(cache)) {
                std::cout << name << ": cache up to date\n";
                continue;
            }
            qsa::BitMatrix bm = qsa::load_bitstrings(path, qsa::FileFormat::TextLines);
            qsa::save_bitstrings(bm, cache, qsa::FileFormat::PackedBinary);
            qsa::RegistryEntry entry;
            entry.name = name;
            entry.path = cache.string();
            entry.n = bm.cols();
            parse_name_metadata(name, entry.n, entry.m);
            entry.origin = origin;
            registry.upsert(std::move(entry));
            std::cout << name << ": M=" << bm.rows() << " n=" << bm.cols() << " cached\n";
        } catch (const std::exception& e) {
            std::cerr << path << ": " << e.what() << '\n';
            ++failures;
        }
    }
    if (failures == 0) registry.save(registry_path);
    return failures == 0 ? 0 : 1;
}

std::string csv_of_grid(const qsa::Heatmap& hm) {
    std::ostringstream os;
    for (uint32_t r = 0; r < hm.n; ++r) {
        for (uint32_t c = 0; c < hm.n; ++c) os << (c ? "," : "") << hm.cell(r, c);
        os << '\n';
    }
    return os.str();
}

std::string csv_of_spectrum(const qsa::SpectralResult& sr) {
    std::ostringstream os;
    os << "bin_left,bin_right,count\n";
    for (size_t i = 0; i < sr.bulk_histogram.counts.size(); ++i)
        os << sr.bulk_histogram.edges[i] << ',' << sr.bulk_histogram.edges[i + 1] << ','
           << sr.bulk_histogram.counts[i] << '\n';
    os << "\noutliers\n";
    for (double v : sr.outliers) os << v << '\n';
    return os.str();
}

std::string csv_of_distance_matrix(const std::vector<std::string>& names,
                                   const std::vector<std::vector<double>>& matrix) {
    std::ostringstream os;
    for (const auto& name : names) os << ',' << name;
    os << '\n';
    for (size_t i = 0; i < names.size(); ++i) {
        os << names[i];
        for (size_t j = 0; j < names.size(); ++j) os << ',' << matrix[i][j];
        os << '\n';
    }
    return os.str();
}

int cmd_analyze(const std::vector<std::string>& names, const fs::path& registry_path,
                const fs::path& out_dir, const std::vector<std::string>& analyses,
                double gamma, std::optional<size_t> nist_limit, bool single_slice) {
    const qsa::Registry registry = qsa::Registry::load(registry_path);
    fs::create_directories(out_dir);
    auto wants = [&](const std::string& a) {
        return analyses.empty() || std::find(analyses.begin(), analyses.end(), a) != analyses.end();
    };

    // Resolve every dataset before any analysis starts.
    std::vector<qsa::BitMatrix> datasets;
    for (const auto& name : names) {
        if (registry.find(name)) {
            datasets.push_back(registry.open(name));
        } else if (fs::exists(name)) {
            datasets.push_back(qsa::load_bitstrings(name, qsa::FileFormat::TextLines));
        } else {
            std::cerr << "unknown dataset: " << name << '\n';
            return 1;
        }
    }

    qsa::Report report = qsa::Report::create();
    for (const auto& bm : datasets) {
        const std::string& name = bm.meta().name;
        try {
            json& entry = report.dataset(name);
            entry["n"] = bm.cols();
            entry["m"] = bm.meta().cycle;
            entry["M"] = bm.rows();
            entry["origin"] = qsa::origin_name(bm.meta().origin);
            entry["p1"] = qsa::ones_probability(bm);
            entry["column_means"] = qsa::column_means(bm);
            if (wants("heatmap")) {
                qsa::BitMatrix first_slice(
                    std::vector<uint64_t>(bm.words().begin(),
                                          bm.words().begin() +
                                              std::min<size_t>(bm.rows(), bm.cols())),
                    bm.cols(), bm.meta());
                const qsa::Heatmap hm = qsa::heatmap(single_slice ? first_slice : bm);
                write_file(out_dir / (name + "_heatmap.svg"),
                           qsa::svg_heatmap(hm, name));
                write_file(out_dir / (name + "_heatmap.csv"), csv_of_grid(hm));
                entry["heatmap_blocks"] = hm.blocks_used;
            }
            if (wants("spectrum")) {
                const auto spectrum = qsa::empirical_spectrum(bm, gamma);
                write_file(out_dir / (name + "_spectrum.svg"),
                           qsa::svg_spectrum(spectrum, gamma, name));
                write_file(out_dir / (name + "_spectrum.csv"), csv_of_spectrum(spectrum));
                entry["spectrum"] = {{"gamma", gamma},
                                     {"k", spectrum.k},
                                     {"blocks", spectrum.blocks},
                                     {"mean_top", spectrum.mean_top},
                                     {"signed_distance", spectrum.signed_distance}};
            }
            if (wants("nist")) {
                const auto stream = qsa::stream_from_matrix(bm, nist_limit);
                const auto battery = qsa::run_battery(stream);
                write_file(out_dir / (name + "_nist.txt"),
                           qsa::format_battery_report(battery));
                json tests = json::array();
                for (const auto& r : battery.results)
                    tests.push_back({{"name", r.test_name},
                                     {"applicable", r.applicable},
                                     {"passed", r.passed},
                                     {"p_values", r.p_values}});
                entry["nist"] = {
                    {"stream_length", battery.stream_length},
                    {"verdict",
                     battery.verdict == qsa::Verdict::Random ? "Random" : "Nonrandom"},
                    {"tests", tests}};
            }
        } catch (const std::exception& e) {
            std::cerr << name << ": " << e.what() << '\n';
            return 1;
        }
    }

    if (wants("wasserstein") && datasets.size() >= 2) {
        std::vector<qsa::TransportSample> samples;
        std::vector<std::string> labels;
        for (const auto& bm : datasets) {
            samples.push_back(qsa::to_transport(bm));
            labels.push_back(bm.meta().name);
        }
        bool mixed_n = false;
        for (const auto& s : samples)
            if (s.n != samples.front().n) mixed_n = true;
        if (mixed_n)
            std::cerr << "note: comparing datasets with different n; "
                         "each is normalized by its own 2^n\n";
        const auto matrix = qsa::distance_matrix(samples);
        write_file(out_dir / "wasserstein.csv", csv_of_distance_matrix(labels, matrix));
        json jm = json::array();
        for (const auto& row : matrix) jm.push_back(row);
        report.doc["wasserstein"] = {{"names", labels}, {"matrix", jm}, {"mixed_n", mixed_n}};
        if (datasets.size() >= 3) {
            const auto tri = qsa::triangle_embed(matrix[0][1], matrix[0][2], matrix[1][2]);
            qsa::TrianglePlot labeled = tri;
            labeled.labels = {labels[0], labels[1], labels[2]};
            write_file(out_dir / "triangle.svg", qsa::svg_triangle(labeled, "W1 triangle"));
        }
    }

    report.save(out_dir / "report.json");
    std::cout << "report written to " << (out_dir / "report.json").string() << '\n';
    return 0;
}

int cmd_simulate(const std::string& spec_file, uint32_t grid_rows, uint32_t grid_cols,
                 uint32_t cycles, size_t M, uint64_t seed, uint64_t sample_seed,
                 const std::pair<double, double>& readout, double gate_rate,
                 bool uniform_sampler, const fs::path& out_dir) {
    qsa::CircuitSpec spec;
    if (!spec_file.empty()) {
        spec = qsa::load_circuit_spec(spec_file);
    } else {
        spec = qsa::grid_circuit_spec(grid_rows, grid_cols, cycles, seed);
    }
    fs::create_directories(out_dir);
    qsa::save_circuit_spec(spec, out_dir / "circuit_spec.json");

    qsa::Circuit circuit = qsa::build_random_circuit(spec);
    if (gate_rate > 0.0) circuit = qsa::apply_gate_noise(circuit, gate_rate, sample_seed ^ 0x9e3779b97f4a7c15ull);
    const qsa::StateVector state = qsa::simulate(circuit);

    qsa::NoiseSpec noise;
    if (readout.first > 0.0 || readout.second > 0.0)
        noise = qsa::NoiseSpec::uniform_readout(spec.n, readout.first, readout.second);

    qsa::BitMatrix samples =
        uniform_sampler ? qsa::generate_uniform(spec.n, M, sample_seed)
                        : qsa::sample(state, M, sample_seed, noise);
    qsa::save_bitstrings(samples, out_dir / "samples.txt", qsa::FileFormat::TextLines);
    qsa::save_bitstrings(samples, out_dir / "samples.qsbm", qsa::FileFormat::PackedBinary);

    const qsa::XebEstimate xeb = qsa::xeb_fidelity(samples, state);
    json j = {{"n", spec.n},
              {"m", spec.m},
              {"M", M},
              {"seed", spec.seed},
              {"sample_seed", sample_seed},
              {"uniform_sampler", uniform_sampler},
              {"readout_p01", readout.first},
              {"readout_p10", readout.second},
              {"gate_pauli_rate", gate_rate},
              {"xeb", {{"value", xeb.value}, {"std_error", xeb.std_error}, {"M", xeb.M}}},
              {"p1", qsa::ones_probability(samples)}};
    write_file(out_dir / "xeb.json", j.dump(2) + "\n");
    std::cout << "XEB F = " << xeb.value << " +- " << xeb.std_error << " (M=" << M << ")\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& report_files, const fs::path& out_dir) {
    std::vector<qsa::Report> reports;
    for (const auto& f : report_files) reports.push_back(qsa::Report::load(f));
    const qsa::Report merged = qsa::Report::merge(reports);
    fs::create_directories(out_dir);
    merged.save(out_dir / "merged_report.json");
    write_file(out_dir / "p1_by_nm.tsv", qsa::report_table(merged, "p1"));
    std::cout << "merged " << report_files.size() << " report(s) into "
              << (out_dir / "merged_report.json").string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomness-audit toolkit for quantum sampling outputs"};
    app.require_subcommand(1);

    std::string registry_path = qsa::default_registry_path().string();
    app.add_option("--registry", registry_path, "dataset registry file");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse text datasets into packed caches");
    std::vector<std::string> ingest_paths;
    std::string ingest_out = "datasets";
    std::string ingest_origin = "quantum-device";
    ingest->add_option("paths", ingest_paths, "text bit-string files")->required();
    ingest->add_option("--out", ingest_out, "cache directory");
    ingest->add_option("--origin", ingest_origin, "origin tag")
        ->check(CLI::IsMember({"quantum-device", "simulator", "classical-uniform"}));

    // analyze
    auto* analyze = app.add_subcommand("analyze", "run analyses over registered datasets");
    std::vector<std::string> analyze_names;
    std::vector<std::string> analyze_list;
    std::string analyze_out = "analysis";
    double gamma = 0.5;
    size_t nist_limit = 1000000;
    bool full_stream = false;
    bool single_slice = false;
    analyze->add_option("datasets", analyze_names, "registry names or file paths")->required();
    analyze->add_option("--analyses", analyze_list,
                        "subset of {heatmap,spectrum,wasserstein,nist}")
        ->check(CLI::IsMember({"heatmap", "spectrum", "wasserstein", "nist"}));
    analyze->add_option("--out", analyze_out, "output directory");
    analyze->add_option("--gamma", gamma, "rectangular ratio n/k");
    analyze->add_option("--nist-limit", nist_limit, "bit-stream prefix for the NIST battery");
    analyze->add_flag("--nist-full-stream", full_stream, "run NIST on the whole stream");
    analyze->add_flag("--single-slice", single_slice,
                      "heatmap of the first n x n slice instead of the block average");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "random-circuit sampling with XEB report");
    std::string spec_file;
    uint32_t rows = 3, cols = 4, cycles = 14;
    size_t M = 100000;
    uint64_t seed = 1, sample_seed = 1;
    std::pair<double, double> readout{0.0, 0.0};
    double gate_rate = 0.0;
    bool uniform_sampler = false;
    std::string sim_out = "simulation";
    simulate->add_option("--spec", spec_file, "circuit spec file (overrides grid options)");
    simulate->add_option("--rows", rows, "grid rows");
    simulate->add_option("--cols", cols, "grid cols");
    simulate->add_option("-m,--cycles", cycles, "cycle count");
    simulate->add_option("-M,--samples", M, "sample count");
    simulate->add_option("--seed", seed, "circuit-instance seed");
    simulate->add_option("--sample-seed", sample_seed, "sampling seed");
    simulate->add_option("--noise-readout", readout, "readout flip probabilities p01 p10");
    simulate->add_option("--noise-gate", gate_rate, "per-gate Pauli error rate");
    simulate->add_flag("--uniform-sampler", uniform_sampler,
                       "draw uniform bit-strings instead of sampling the state");
    simulate->add_option("--out", sim_out, "output directory");

    // report
    auto* report = app.add_subcommand("report", "merge analysis reports");
    std::vector<std::string> report_files;
    std::string report_out = "merged";
    report->add_option("reports", report_files, "report.json files")->required();
    report->add_option("--out", report_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(ingest_paths, registry_path, ingest_out, ingest_origin);
        if (*analyze)
            return cmd_analyze(analyze_names, registry_path, analyze_out, analyze_list, gamma,
                               full_stream ? std::nullopt : std::optional<size_t>(nist_limit),
                               single_slice);
        if (*simulate)
            return cmd_simulate(spec_file, rows, cols, cycles, M, seed, sample_seed, readout,
                                gate_rate, uniform_sampler, sim_out);
        if (*report) return cmd_report(report_files, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
