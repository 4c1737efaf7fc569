#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "runner.hpp"
#include "skinlat/errors.hpp"
#include "writers.hpp"

using namespace skinlat;
using namespace skinlat::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("skinlat_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json small_density() {
    return json::parse(R"({"experiment": "density",
                           "model": {"l": 6, "u": 10, "boundary": "obc", "j": 1.6}})");
}

struct Shell {
    int code;
    std::string err;
};

Shell run_binary(const std::string& args, const std::string& env = "") {
    const fs::path err = fs::temp_directory_path() / "skinlat_cli_test_stderr.txt";
    const std::string cmd = env + " " + SKINLAT_BIN + std::string(" ") + args + " >/dev/null 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WEXITSTATUS(status), slurp(err)};
}

fs::path write_config(const fs::path& dir, const json& j) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

}  // namespace

TEST(Config, MissingInteractionNamesTheField) {
    json j = small_density();
    j["model"].erase("u");
    try {
        parse_config(j);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_STREQ(e.what(), "model.u: required");
        EXPECT_EQ(e.field(), "model.u");
    }
}

TEST(Config, RejectsBadFields) {
    auto bad = [](const char* text) {
        EXPECT_THROW(parse_config(json::parse(text)), ValidationError) << text;
    };
    bad(R"({"experiment": "nope", "model": {"l": 4, "u": 1, "boundary": "obc", "j": 1}})");
    bad(R"({"experiment": "density", "model": {"l": 4, "u": 1, "boundary": "xbc", "j": 1}})");
    bad(R"({"experiment": "density", "model": {"l": 4, "u": 1, "boundary": "obc"}})");
    bad(R"({"experiment": "density", "model": {"l": 4, "u": 1, "boundary": "obc", "j": 1, "j1": 2, "j2": 1}})");
    bad(R"({"experiment": "density", "model": {"l": 4, "u": -1, "boundary": "obc", "j": 1}})");
    bad(R"({"experiment": "density", "model": {"l": 4, "u": 1, "boundary": "obc", "j": 1, "colour": 3}})");
    bad(R"({"experiment": "density", "model": {"l": 4, "u": 1, "boundary": "obc", "j": 1}, "formats": ["png"]})");
    bad(R"({"experiment": "density", "model": {"l": 4, "u": 1, "boundary": "obc", "j": 1},
            "selections": [{"rule": "modulus_nearest"}]})");
    bad(R"({"experiment": "winding", "model": {"l": 4, "u": 0, "boundary": "obc", "j": 1}})");
    bad(R"({"experiment": "circuit", "model": {"l": 4, "u": 1, "boundary": "pbc", "j": 1}, "params": {"omega": 1}})");
    bad(R"({"experiment": "bound_branch", "model": {"l": 4, "u": 0, "boundary": "pbc", "j": 1}})");
    bad(R"({"experiment": "scaling", "model": {"l": 9, "u": 1, "boundary": "obc", "j1": 1, "j2": 2},
            "params": {"j_values": [1, 2]}})");
    bad(R"({"experiment": "corner_modes", "model": {"l": 5, "u": 25, "boundary": "obc", "j1": 1, "j2": 1, "p": 5}})");
    bad(R"({"experiment": "density", "model": {"l": 4, "u": 1, "boundary": "obc", "j": 1}, "params": {"extra": 1}})");
}

TEST(Config, BetaFormMatchesExplicitHoppings) {
    const auto c = parse_config(json::parse(R"({"experiment": "winding", "params": {"loop": "k"},
        "model": {"l": 4, "u": 0, "boundary": "obc", "j0": 2.0, "beta1": 0.3, "beta2": -0.2}})"));
    EXPECT_NEAR(c.model.j1b.real(), 2.0 * std::exp(0.3), 1e-15);
    EXPECT_NEAR(c.model.j2b.real(), 2.0 * std::exp(-0.3), 1e-15);
    EXPECT_NEAR(c.model.j1a.real(), 2.0 * std::exp(-0.2), 1e-15);
    const auto d = derive(c.model);
    EXPECT_NEAR(d.beta1, 0.3, 1e-14);
    EXPECT_NEAR(d.beta2, -0.2, 1e-14);
}

TEST(Config, EveryRecipeValidates) {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(SKINLAT_RECIPES)) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 25);
}

TEST(Writers, NumberFormatting) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(-2.0), "-2");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-INFINITY), "-inf");
    CsvTable t({"a", "b"});
    t.row().add(1).add(0.5);
    EXPECT_EQ(t.str(), "a,b\n1,0.5\n");
    EXPECT_THROW(t.row().add(1).add(2).add(3), std::logic_error);
}

TEST(Writers, ConstantProfileIsMidGray) {
    DensityProfile d;
    d.grid = Eigen::MatrixXd::Constant(3, 3, 1.0 / 9.0);
    const std::string img = heatmap_pgm(d, HeatmapScale::Linear);
    const std::string pixels = img.substr(img.size() - 9);
    for (char c : pixels) EXPECT_EQ(static_cast<unsigned char>(c), 128);
    EXPECT_EQ(img.rfind("P5\n", 0), 0u);
    EXPECT_NE(img.find("row 1 is v=L"), std::string::npos);
}

TEST(Writers, DeltaProfileIsSingleWhitePixel) {
    DensityProfile d;
    d.grid = Eigen::MatrixXd::Zero(4, 4);
    d.grid(0, 3) = 1.0;  // w = 1, v = 4 lands in the top-left pixel
    for (auto scale : {HeatmapScale::Linear, HeatmapScale::Log}) {
        const std::string img = heatmap_pgm(d, scale);
        const std::string pixels = img.substr(img.size() - 16);
        EXPECT_EQ(static_cast<unsigned char>(pixels[0]), 255);
        for (std::size_t i = 1; i < pixels.size(); ++i) EXPECT_EQ(static_cast<unsigned char>(pixels[i]), 0);
    }
    const std::string svg = heatmap_svg(d, HeatmapScale::Linear);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("fill=\"#fde725\""), std::string::npos);
}

TEST(Writers, Crc32KnownValue) { EXPECT_EQ(crc32_of("123456789"), 0xCBF43926u); }

TEST(Selection, Rules) {
    const auto c = parse_config(small_density());
    const auto sol = eigendecompose(build_two_body_hamiltonian(c.model));
    Selection s;
    EXPECT_EQ(select_state(sol, c.model, s), 0);
    s.rule = Selection::Rule::Index;
    s.index = 7;
    EXPECT_EQ(select_state(sol, c.model, s), 7);
    s.index = 36;
    EXPECT_THROW(select_state(sol, c.model, s), RangeError);
    s.rule = Selection::Rule::DistanceTo;
    s.value = sol.values(5) + cplx(1e-9, 0.0);
    EXPECT_EQ(select_state(sol, c.model, s), 5);
    s.rule = Selection::Rule::ModulusNearest;
    s.value = std::abs(sol.values(35));
    EXPECT_EQ(std::abs(sol.values(select_state(sol, c.model, s))), std::abs(sol.values(35)));
    s.rule = Selection::Rule::LargestReal;
    s.state_class = StateClass::Scattering;
    EXPECT_EQ(select_state(sol, c.model, s), static_cast<Eigen::Index>(c.model.l));
}

TEST(Runner, DeterministicAndSeedCheck) {
    const auto c = parse_config(small_density());
    const auto a = run_experiment(c), b = run_experiment(c);
    ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i) EXPECT_EQ(a.artifacts[i].bytes, b.artifacts[i].bytes);
    const fs::path dir = scratch("seed");
    const auto out = run_to_directory(c, dir, true);
    EXPECT_EQ(out.exit_code, kExitOk) << out.message;
    EXPECT_TRUE(out.report["seed_checked"].get<bool>());
    EXPECT_EQ(out.report["status"], "ok");
}

TEST(Runner, ReportListsArtifactsWithChecksums) {
    const auto c = parse_config(small_density());
    const fs::path dir = scratch("report");
    const auto out = run_to_directory(c, dir, false);
    ASSERT_EQ(out.exit_code, kExitOk);
    const json rep = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(rep["schema"], kSchemaTag);
    for (const auto& a : rep["artifacts"]) {
        const std::string bytes = slurp(dir / a["file"].get<std::string>());
        EXPECT_EQ(a["bytes"].get<std::size_t>(), bytes.size());
        char crc[16];
        std::snprintf(crc, sizeof crc, "%08x", crc32_of(bytes));
        EXPECT_EQ(a["crc32"].get<std::string>(), crc);
    }
    for (const auto& ck : rep["eig_checks"]) EXPECT_TRUE(ck["passed"].get<bool>());
    for (const auto& entry : fs::directory_iterator(dir)) EXPECT_NE(entry.path().extension(), ".tmp");
    const json summary = json::parse(slurp(dir / "density.json"));
    EXPECT_EQ(summary["schema"], kSchemaTag);
    EXPECT_EQ(summary["experiment"], "density");
}

TEST(Runner, ComputationFailureIsExitThree) {
    auto j = small_density();
    j["selections"] = json::parse(R"([{"rule": "index", "index": 100000}])");
    const auto out = run_to_directory(parse_config(j), scratch("fail"), false);
    EXPECT_EQ(out.exit_code, kExitComputation);
    EXPECT_NE(out.message.find("index"), std::string::npos);
}

TEST(Golden, NetlistTwoByTwo) {
    const auto c = load_config(fs::path(SKINLAT_GOLDEN) / "netlist_l2.json");
    const auto res = run_experiment(c);
    bool found = false;
    for (const auto& a : res.artifacts)
        if (a.file == "circuit.net") {
            found = true;
            EXPECT_EQ(a.bytes, slurp(fs::path(SKINLAT_GOLDEN) / "netlist_l2.net"));
        }
    EXPECT_TRUE(found);
}

TEST(Golden, SmallDensity) {
    const auto c = load_config(fs::path(SKINLAT_GOLDEN) / "density_l6.json");
    const auto res = run_experiment(c);
    int matched = 0;
    for (const auto& a : res.artifacts) {
        if (a.file != "density.csv" && a.file != "density.pgm") continue;
        const std::string golden = a.file == "density.csv" ? "density_l6.csv" : "density_l6.pgm";
        EXPECT_EQ(a.bytes, slurp(fs::path(SKINLAT_GOLDEN) / golden)) << a.file;
        ++matched;
    }
    EXPECT_EQ(matched, 2);
}

TEST(Golden, PeriodicTopBoundStateDensity) {
    const auto c = load_config(fs::path(SKINLAT_RECIPES) / "fig4a.json");
    const auto res = run_experiment(c);
    for (const auto& a : res.artifacts)
        if (a.file == "density.csv") EXPECT_EQ(a.bytes, slurp(fs::path(SKINLAT_GOLDEN) / "fig4a_density.csv"));
}

TEST(Binary, ExitCodes) {
    const fs::path dir = scratch("binary");
    auto j = small_density();
    j["model"].erase("u");
    const auto missing = run_binary("run " + write_config(dir, j).string() + " --out " + (dir / "out").string());
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("model.u: required"), std::string::npos) << missing.err;
    EXPECT_EQ(run_binary("validate " + write_config(dir, j).string()).code, 2);

    EXPECT_EQ(run_binary("list-experiments").code, 0);
    EXPECT_EQ(run_binary("frobnicate").code, 1);
    EXPECT_EQ(run_binary("validate " + (dir / "absent.json").string()).code, 2);

    const auto cfg = write_config(dir, small_density());
    EXPECT_EQ(run_binary("validate " + cfg.string()).code, 0);
    EXPECT_EQ(run_binary("run " + cfg.string() + " --out " + (dir / "ok").string() + " --seed-check").code, 0);
    EXPECT_TRUE(fs::exists(dir / "ok" / "density.csv"));
    EXPECT_TRUE(fs::exists(dir / "ok" / "report.json"));
    EXPECT_EQ(run_binary("run " + cfg.string() + " --out " + (dir / "t").string() + " --threads 2").code, 0);
    EXPECT_EQ(run_binary("run " + cfg.string() + " --out " + (dir / "e").string(), "SKINLAT_THREADS=abc").code, 1);
    EXPECT_EQ(run_binary("run " + cfg.string() + " --out " + (dir / "f").string() + " --threads 1",
                         "SKINLAT_THREADS=abc").code,
              0);

    auto bad = small_density();
    bad["selections"] = json::parse(R"([{"rule": "index", "index": 100000}])");
    EXPECT_EQ(run_binary("run " + write_config(dir, bad).string() + " --out " + (dir / "bad").string()).code, 3);
}
