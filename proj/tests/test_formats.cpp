#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsa/registry.hpp"
#include "qsa/report.hpp"
#include "qsa/svg.hpp"

using namespace qsa;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "qsa_formats";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void require_well_formed_svg(const std::string& svg) {
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    // every open tag is closed or self-closing: crude but catches truncation
    size_t opens = 0, closes = 0, selfclosed = 0;
    for (size_t i = 0; i < svg.size(); ++i) {
        if (svg[i] == '<' && i + 1 < svg.size() && svg[i + 1] != '?' && svg[i + 1] != '!') {
            if (svg[i + 1] == '/')
                ++closes;
            else
                ++opens;
        }
        if (svg[i] == '/' && i + 1 < svg.size() && svg[i + 1] == '>') ++selfclosed;
    }
    CHECK(opens == closes + selfclosed);
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QSA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

} // namespace

TEST_CASE("registry round trip and upsert") {
    const fs::path path = scratch_dir() / "registry.json";
    fs::remove(path);

    Registry registry = Registry::load(path); // missing file -> empty
    CHECK(registry.entries().empty());

    registry.upsert({"a", "/tmp/a.qsbm", 12, 14, "quantum-device"});
    registry.upsert({"b", "/tmp/b.qsbm", 56, 10, "simulator"});
    registry.upsert({"a", "/tmp/a2.qsbm", 12, 16, "quantum-device"}); // replaces
    registry.save(path);

    const Registry back = Registry::load(path);
    CHECK(back.entries().size() == 2);
    const RegistryEntry* a = back.find("a");
    REQUIRE(a != nullptr);
    CHECK(a->path == "/tmp/a2.qsbm");
    CHECK(a->m == 16);
    CHECK(back.find("missing") == nullptr);
    fs::remove(path);
}

TEST_CASE("registry open attaches metadata") {
    const fs::path dir = scratch_dir();
    const BitMatrix bm = generate_uniform(6, 50, 4);
    save_bitstrings(bm, dir / "ds.qsbm", FileFormat::PackedBinary);
    Registry registry;
    registry.upsert({"ds", (dir / "ds.qsbm").string(), 6, 9, "simulator"});
    const BitMatrix opened = registry.open("ds");
    CHECK(opened == bm);
    CHECK(opened.meta().name == "ds");
    CHECK(opened.meta().cycle == 9);
    CHECK(opened.meta().origin == Origin::Simulator);
    CHECK_THROWS_AS(registry.open("nope"), InvalidArgument);
}

TEST_CASE("report create, save, load, merge") {
    Report a = Report::create();
    a.dataset("x")["p1"] = 0.49;
    a.dataset("x")["n"] = 12;
    a.dataset("x")["m"] = 14;
    Report b = Report::create();
    b.dataset("y")["p1"] = 0.51;
    b.dataset("y")["n"] = 56;
    b.dataset("y")["m"] = 10;

    const fs::path path = scratch_dir() / "report.json";
    a.save(path);
    const Report loaded = Report::load(path);
    CHECK(loaded.doc["datasets"]["x"]["p1"] == 0.49);

    const Report merged = Report::merge({a, b});
    CHECK(merged.doc["datasets"].size() == 2);

    SUBCASE("duplicate names rejected with the offender listed") {
        Report c = Report::create();
        c.dataset("x")["p1"] = 0.5;
        CHECK_THROWS_WITH_AS(Report::merge({a, c}), doctest::Contains("x"), InvalidArgument);
    }
    SUBCASE("schema version mismatch rejected") {
        Report old = Report::create();
        old.doc["schema_version"] = kReportSchemaVersion + 1;
        CHECK_THROWS_AS(Report::merge({a, old}), FormatError);
    }
    fs::remove(path);
}

TEST_CASE("report_table sorts by (n, m)") {
    Report r = Report::create();
    r.dataset("big")["n"] = 56;
    r.dataset("big")["m"] = 10;
    r.dataset("big")["p1"] = 0.51;
    r.dataset("small")["n"] = 12;
    r.dataset("small")["m"] = 14;
    r.dataset("small")["p1"] = 0.49;
    const std::string table = report_table(r, "p1");
    const size_t small_pos = table.find("small");
    const size_t big_pos = table.find("big");
    REQUIRE(small_pos != std::string::npos);
    REQUIRE(big_pos != std::string::npos);
    CHECK(small_pos < big_pos);
    CHECK(table.find("0.49") != std::string::npos);
}

TEST_CASE("svg outputs are well formed") {
    const BitMatrix bm = generate_uniform(8, 1000, 3);
    require_well_formed_svg(svg_heatmap(heatmap(bm), "t <&> t"));
    require_well_formed_svg(svg_spectrum(empirical_spectrum(bm, 0.5), 0.5, "spec"));
    require_well_formed_svg(svg_triangle(triangle_embed(3.0, 4.0, 5.0), "tri"));
    TrianglePlot degen = triangle_embed(2.0, 1.0, 1.0);
    const std::string svg = svg_triangle(degen, "degenerate");
    require_well_formed_svg(svg);
    CHECK(svg.find("degenerate") != std::string::npos);
}

TEST_CASE("cli end to end") {
    const fs::path dir = scratch_dir() / "cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string reg = (dir / "registry.json").string();

    // three small datasets, file names carrying n and m
    for (const auto& [name, seed] : std::vector<std::pair<std::string, uint64_t>>{
             {"10_5_a", 1}, {"10_5_b", 2}, {"10_5_c", 3}}) {
        save_bitstrings(generate_uniform(10, 4000, seed), dir / (name + ".txt"),
                        FileFormat::TextLines);
    }

    const std::string base = "--registry " + reg + " ";
    REQUIRE(run_cli(base + "ingest " + (dir / "10_5_a.txt").string() + " " +
                    (dir / "10_5_b.txt").string() + " " + (dir / "10_5_c.txt").string() +
                    " --out " + (dir / "cache").string() + " --origin classical-uniform") == 0);
    CHECK(fs::exists(dir / "cache" / "10_5_a.qsbm"));
    const Registry registry = Registry::load(reg);
    CHECK(registry.entries().size() == 3);
    const RegistryEntry* a = registry.find("10_5_a");
    REQUIRE(a != nullptr);
    CHECK(a->n == 10);
    CHECK(a->m == 5);

    SUBCASE("analyze produces plots and a report") {
        const fs::path out = dir / "analysis";
        REQUIRE(run_cli(base + "analyze 10_5_a 10_5_b 10_5_c --out " + out.string() +
                        " --analyses heatmap --analyses spectrum --analyses wasserstein") == 0);
        CHECK(fs::exists(out / "10_5_a_heatmap.svg"));
        CHECK(fs::exists(out / "10_5_a_spectrum.csv"));
        CHECK(fs::exists(out / "wasserstein.csv"));
        CHECK(fs::exists(out / "triangle.svg"));
        const Report report = Report::load(out / "report.json");
        CHECK(report.doc["datasets"].contains("10_5_a"));
        CHECK(report.doc["datasets"]["10_5_a"]["n"] == 10);

        SUBCASE("rerun is byte identical") {
            const std::string before = slurp(out / "report.json");
            REQUIRE(run_cli(base + "analyze 10_5_a 10_5_b 10_5_c --out " + out.string() +
                            " --analyses heatmap --analyses spectrum --analyses wasserstein") ==
                    0);
            CHECK(slurp(out / "report.json") == before);
        }
        SUBCASE("merge of disjoint reports") {
            // split one dataset into its own report, then merge
            const fs::path out_b = dir / "analysis_b";
            REQUIRE(run_cli(base + "analyze 10_5_a --out " + (dir / "only_a").string() +
                            " --analyses heatmap") == 0);
            REQUIRE(run_cli(base + "analyze 10_5_b --out " + (dir / "only_b").string() +
                            " --analyses heatmap") == 0);
            REQUIRE(run_cli(base + "report " + (dir / "only_a" / "report.json").string() + " " +
                            (dir / "only_b" / "report.json").string() + " --out " +
                            (dir / "merged").string()) == 0);
            CHECK(fs::exists(dir / "merged" / "merged_report.json"));
            CHECK(fs::exists(dir / "merged" / "p1_by_nm.tsv"));
        }
    }

    SUBCASE("simulate writes spec, samples, xeb") {
        const fs::path out = dir / "sim";
        REQUIRE(run_cli(base + "simulate --rows 2 --cols 2 -m 4 -M 2000 --seed 5 --out " +
                        out.string()) == 0);
        CHECK(fs::exists(out / "circuit_spec.json"));
        CHECK(fs::exists(out / "samples.txt"));
        CHECK(fs::exists(out / "samples.qsbm"));
        CHECK(fs::exists(out / "xeb.json"));
        const BitMatrix txt = load_bitstrings(out / "samples.txt", FileFormat::TextLines);
        const BitMatrix bin = load_bitstrings(out / "samples.qsbm", FileFormat::PackedBinary);
        CHECK(txt == bin);
        CHECK(txt.rows() == 2000);
        CHECK(txt.cols() == 4);
    }

    SUBCASE("ragged file fails ingest and leaves the registry untouched") {
        std::ofstream bad(dir / "8_1_bad.txt");
        bad << "0101\n011\n";
        bad.close();
        const std::string before = slurp(reg);
        CHECK(run_cli(base + "ingest " + (dir / "8_1_bad.txt").string() + " --out " +
                      (dir / "cache").string()) != 0);
        CHECK(slurp(reg) == before);
    }
}
