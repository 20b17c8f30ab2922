#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config_text.hpp"
#include "manifest.hpp"
#include "run_config.hpp"
#include "vncs/errors.hpp"

using namespace vncs;
using namespace vncs::cli;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
electron_energy_ev = 1e9
[laser]
harmonics = [1]
a0 = [1.3]
helicity = [1]
)";

const char* kThreeColour = R"(# three-colour synthesis
electron_energy_ev = 1.0e9
photon_helicity = -1

[laser]
harmonics = [1, 2, 3]
a0 = [1.4, 1.2, 1.0]
helicity = [1, 1, 1]

[scan]
omega_min_ev = 1.2e6
omega_max_ev = 3.2e6
omega_count = 81
theta_mrad = [2.4]
)";

std::string error_of(const std::string& text, std::vector<std::pair<std::string, std::string>> overrides = {}) {
    try {
        parse_config(text, overrides);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("minimal configuration fills the defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.n_cycle == 10);
    CHECK(c.omega1_ev == 1.55);
    CHECK(c.n_phi == 64);
    CHECK(c.n_max == 12);
    CHECK(c.photon_helicity == -1);
    CHECK(c.spin_in == 1);
    CHECK(c.workers == 1);
    CHECK(c.cep_rad == std::vector<double>{0.0});
    CHECK(c.theta_mrad == std::vector<double>{2.0});
    CHECK(c.quadrature == QuadratureSettings{});
    const ScanSpec s = c.scan_spec();
    CHECK(s.laser.modes.size() == 1);
    CHECK(s.omega.dressed_units);
}

TEST_CASE("helicity outside +-1 is rejected") {
    std::string text = kMinimal;
    text.replace(text.find("helicity = [1]"), 14, "helicity = [2]");
    CHECK(error_of(text).find("helicity must be ±1") != std::string::npos);
    CHECK(error_of(kMinimal, {{"photon_helicity", "2"}}).find("helicity must be ±1") != std::string::npos);
}

TEST_CASE("three-colour configuration") {
    const ScanSpec s = parse_config(kThreeColour).scan_spec();
    REQUIRE(s.laser.modes.size() == 3);
    const double a0[] = {1.4, 1.2, 1.0};
    for (int j = 0; j < 3; ++j) {
        CHECK(s.laser.modes[j].harmonic == j + 1);
        CHECK(s.laser.modes[j].a0 == a0[j]);
        CHECK(s.laser.modes[j].helicity == 1);
    }
    CHECK(s.thetas == std::vector<double>{2.4e-3});
    CHECK(s.omega == OmegaGrid{1.2e6, 3.2e6, 81, false});
    CHECK(s.photon_helicity == -1);
    CHECK(s.electron_energy_ev == 1e9);
}

TEST_CASE("diagnostics name the key") {
    CHECK(error_of("[laser]\nharmonics=[1]\na0=[1]\nhelicity=[1]\n").find("electron_energy_ev: required") == 0);
    CHECK(error_of("typo = 3\n" + std::string(kMinimal)).find("typo: unknown key") == 0);
    CHECK(error_of(std::string(kMinimal) + "[scan]\nomega_count = 0\n").find("scan.omega_count") == 0);
    CHECK(error_of("n_phi = 10\n" + std::string(kMinimal)).find("n_phi") == 0);
    CHECK(error_of("electron_energy_ev = 2e9\n" + std::string(kMinimal)).find("line 3") != std::string::npos);
    CHECK(error_of(std::string(kMinimal) + "[scan]\ntheta_mrad = [2.0, \n").find("line") != std::string::npos);
    CHECK(error_of(std::string(kMinimal) + "[scan]\nomega_max_dressed = 1e9\n").find("scan.omega_max_dressed") == 0);
}

TEST_CASE("overrides replace file entries") {
    const RunConfig c = parse_config(kThreeColour, {{"scan.omega_count", "11"}, {"workers", "4"}, {"laser.a0", "[1, 1, 1]"}});
    CHECK(c.omega_count == 11);
    CHECK(c.workers == 4);
    CHECK(c.a0 == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(error_of(kMinimal, {{"nonsense", "1"}}).find("nonsense: unknown key") == 0);
}

TEST_CASE("effective configuration round-trips") {
    for (const char* text : {kMinimal, kThreeColour}) {
        const RunConfig c = parse_config(text);
        CHECK(parse_config(echo_config(c)) == c);
    }
    RunConfig odd = parse_config(kThreeColour, {{"scan.a0_ladder", "[[0.8, 0.5, 0.1], [3.3, 3.0, 1.0]]"},
                                                {"profile.points", "[[2.65e6, 2.4], [1.75e6, 2.4]]"},
                                                {"output_dir", "\"out dir/\\\"quoted\\\"\""},
                                                {"laser.cep_rad", "[0.1, 0.30000000000000004, 1e-300]"}});
    CHECK(odd.output_dir == "out dir/\"quoted\"");
    CHECK(parse_config(echo_config(odd)) == odd);
}

TEST_CASE("document parser") {
    const Document d = parse_document("a = 1_000\nb = -2.5e-3 # note\n[t]\ns = \"x\\ty\"\nf = false\nn = [\n  [1, 2],\n  [3],\n]\n");
    CHECK(d.at("a").integer == 1000);
    CHECK(d.at("b").number == -2.5e-3);
    CHECK(d.at("t.s").text == "x\ty");
    CHECK(!d.at("t.f").boolean);
    CHECK(d.at("t.n").items.size() == 2);
    CHECK(d.at("t.n").items[0].items[1].integer == 2);
    CHECK_THROWS_AS(parse_document("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_document("a = \"open\n"), ConfigError);
    CHECK(format_double(2.0) == "2.0");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e9) == "1000000000.0");
}

TEST_CASE("profile points are matched against the grid") {
    RunConfig c = parse_config(kThreeColour, {{"profile.points", "[[1.2e6, 2.4], [1.21e6, 2.4], [1.2e6, 2.0]]"}});
    CHECK(c.profile_on_grid() == std::vector<bool>{true, false, false});
}

TEST_CASE("manifest lists every file with its digest") {
    const fs::path dir = scratch_dir("vncs_manifest_test");
    fs::create_directories(dir / "sub");
    std::ofstream(dir / "a.txt") << "abc";
    std::ofstream(dir / "sub" / "b.bin") << "";
    write_manifest(dir);
    const std::string m = slurp(dir / kManifestName);
    CHECK(m.find("a.txt\tba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad\t3\n") != std::string::npos);
    CHECK(m.find("sub/b.bin\te3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855\t0\n") != std::string::npos);
    std::string problem;
    CHECK(verify_manifest(dir, &problem));
    std::ofstream(dir / "a.txt") << "abd";
    CHECK(!verify_manifest(dir, &problem));
    CHECK(problem == "a.txt digest mismatch");
    write_manifest(dir);
    std::ofstream(dir / "extra") << "x";
    CHECK(!verify_manifest(dir));
    fs::remove_all(dir);
}

TEST_CASE("plan writes the atlas with the degenerate pathways") {
    const fs::path dir = scratch_dir("vncs_plan_test");
    std::string text = std::string(kMinimal);
    RunConfig c = parse_config(text, {{"laser.harmonics", "[1, 2]"}, {"laser.a0", "[1.3, 1.0]"},
                                      {"laser.helicity", "[1, 1]"}, {"output_dir", '"' + dir.string() + '"'}});
    std::ostringstream log;
    CHECK(run_plan(c, {false, 0, true}, log) == kExitOk);
    CHECK(slurp(dir / "atlas.tsv").find("(2,0)\t2\t2\t3\t1") != std::string::npos);
    CHECK(slurp(dir / "degeneracies.tsv").find("(2,0)\t(0,1)\t2\t3\t2\t1") != std::string::npos);
    CHECK(parse_config(slurp(dir / "effective_config.toml")) == c);
    CHECK(verify_manifest(dir));
    fs::remove_all(dir);
}

TEST_CASE("profile of a single-mode point is one ring with phase winding l") {
    const fs::path dir = scratch_dir("vncs_profile_cmd_test");
    RunConfig c = parse_config(kMinimal, {{"profile.points", "[[1.4e6, 2.0]]"}, {"profile.radial", "64"},
                                          {"profile.azimuthal", "64"}, {"output_dir", '"' + dir.string() + '"'}});
    std::ostringstream log;
    CHECK(run_profile(c, {false, 0, true}, log) == kExitOk);
    const std::string side = slurp(dir / "profiles" / "point_00.txt");
    CHECK(side.find("modes=2:") != std::string::npos);
    CHECK(side.find("phase_winding_on_dominant_ring=2\n") != std::string::npos);
    CHECK(side.find("evaluation=standalone") != std::string::npos);
    CHECK(fs::file_size(dir / "profiles" / "point_00_intensity.pgm") > 64 * 64);
    CHECK(verify_manifest(dir));
    fs::remove_all(dir);
}

TEST_CASE("scan, interrupt, resume and report") {
    const fs::path dir = scratch_dir("vncs_scan_cmd_test");
    RunConfig c = parse_config(kMinimal, {{"laser.harmonics", "[1, 2]"},
                                          {"laser.helicity", "[1, 1]"},
                                          {"laser.a0", "[1.3, 1.0]"},
                                          {"scan.a0_ladder", "[[0.8, 0.5], [1.3, 1.0]]"},
                                          {"scan.omega_min_dressed", "0.6"},
                                          {"scan.omega_max_dressed", "1.6"},
                                          {"scan.omega_count", "9"},
                                          {"scan.theta_mrad", "[1.0, 2.0, 3.0]"},
                                          {"n_phi", "32"},
                                          {"n_max", "8"},
                                          {"output_dir", '"' + dir.string() + '"'}});
    std::ostringstream log;
    CHECK(run_scan(c, {false, 5, true}, log) == kExitIncomplete);
    CHECK(fs::exists(dir / "intensity_0" / "checkpoint.log"));
    CHECK(run_scan(c, {true, 0, true}, log) == kExitOk);
    CHECK(!fs::exists(dir / "intensity_0" / "checkpoint.log"));
    CHECK(fs::exists(dir / "intensity_1" / "spectrum_theta02.tsv"));
    const std::string merged = slurp(dir / "band_merge.txt");
    CHECK(merged.find("[band_merge]") != std::string::npos);
    CHECK(verify_manifest(dir));

    CHECK(run_report(c, {false, 0, true}, log) == kExitOk);
    CHECK(slurp(dir / "band_merge.txt") == merged);
    CHECK(slurp(dir / "aperture.txt").find("[aperture]") != std::string::npos);
    CHECK(fs::exists(dir / "lines.txt"));
    CHECK(verify_manifest(dir));
    fs::remove_all(dir);
}
