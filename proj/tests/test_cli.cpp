#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "udnjt/commands.hpp"
#include "udnjt/config.hpp"
#include "udnjt/csv.hpp"

using namespace udnjt;
using namespace udnjt::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("udnjt_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Run {
    int code = -1;
    std::string out, err;
};

// Runs the CLI binary with the given argument string and environment prefix.
Run run_cli(const std::string& args, const fs::path& dir, const std::string& env = "") {
    const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = env + " \"" UDNJT_CLI_PATH "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

const char* kMinimal =
    "seed = 7\n"
    "lambda_b = 0.01\n"
    "n_trials = 200\n"
    "outputs = desired\n"
    "[schemes]\n"
    "nojt = yes\n"
    "[channels]\n"
    "rayleigh = yes\n";

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("config grammar") {
        const auto cfg = parse_config_text(
            "# comment\n"
            "seed = 42\n"
            "lambda_b = 0.001, 0.005,0.01\n"
            "r_l = 0.5\n"
            "alpha_s = 4\n"
            "p_s_dbm = 20\n"
            "n0_dbm = -104\n"
            "n_trials = 1000\n"
            "outputs = desired, se\n"
            "out_dir = results\n"
            "[schemes]\n"
            "nojt = yes\n"
            "2ns = yes\n"
            "cd = 2.5\n"
            "fpd_db = 6\n"
            "[channels]\n"
            "constant = 2\n"
            "rayleigh = yes\n"
            "nakagami = 2, 1.5\n");
        CHECK(cfg.seed == 42);
        CHECK(cfg.lambda_grid == std::vector<double>{0.001, 0.005, 0.01});
        CHECK(cfg.params.r_l == 0.5);
        CHECK(cfg.params.alpha_s == 4.0);
        CHECK(cfg.params.p_s == doctest::Approx(100.0).epsilon(1e-14));
        CHECK(cfg.params.n_0 == doctest::Approx(3.9810717055349695e-11).epsilon(1e-14));
        CHECK(cfg.n_trials == 1000);
        CHECK(cfg.outputs == std::vector<std::string>{"desired", "se"});
        CHECK(cfg.out_dir == fs::path("results"));
        REQUIRE(cfg.schemes.size() == 4);
        CHECK(scheme_label(cfg.schemes[2]) == "cd-2.5");
        CHECK(scheme_label(cfg.schemes[3]) == "fpd-6");
        REQUIRE(cfg.channels.size() == 3);
        CHECK(channel_label(cfg.channels[0]) == "const-2");
        CHECK(channel_label(cfg.channels[2]) == "nakagami-2-1.5");

        const auto defaults = parse_config_text("seed = 1\n[schemes]\nnojt = yes\n[channels]\nrayleigh = yes\n");
        CHECK(defaults.lambda_grid == std::vector<double>{1e-3, 2.5e-3, 5e-3, 7.5e-3, 1e-2});
        CHECK(defaults.params.p_s == doctest::Approx(dbm_to_mw(17.0)));
        CHECK(defaults.params.n_0 == 0.0);
    }

    TEST_CASE("config errors name the line") {
        auto line_of = [](const std::string& text) {
            try {
                parse_config_text(text, "t.cfg");
            } catch (const ConfigError& e) {
                return e.line();
            }
            return -1;
        };
        CHECK(line_of("seed = 1\nlambda_b = 0.01\nbogus = 3\n") == 3);
        CHECK(line_of("seed = 1\nseed = 2\n") == 2);
        CHECK(line_of("seed = 1\n[schemes]\nnojt = yes\nwarp = 2\n") == 4);
        CHECK(line_of("seed = 1\nlambda_b = 0.01, 0.005\n[schemes]\nnojt = yes\n[channels]\nrayleigh = yes\n") != -1);
        CHECK(line_of("seed = 1\noutputs = power\n[schemes]\nnojt = yes\n[channels]\nrayleigh = yes\n") == 2);
        CHECK(line_of("seed = 1\nalpha_s = abc\n") == 2);
        CHECK_THROWS_AS(parse_config_text("lambda_b = 0.01\n[schemes]\nnojt = yes\n[channels]\nrayleigh = yes\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config_text("seed = 1\n[channels]\nrayleigh = yes\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("seed = 1\n[schemes]\nnojt = yes\n"), ConfigError);
        CHECK_THROWS_AS(
            parse_config_text("seed = 1\nn_trials = 50\n[schemes]\nnojt = yes\n[channels]\nrayleigh = yes\n"),
            ConfigError);
        CHECK_THROWS_AS(
            parse_config_text("seed = 1\np_s = 50\np_s_dbm = 17\n[schemes]\nnojt = yes\n[channels]\nrayleigh = yes\n"),
            ConfigError);
    }

    TEST_CASE("figure recipes") {
        REQUIRE(figure_recipes().size() == 8);
        for (const auto& r : figure_recipes()) {
            const auto cfg = parse_config_text("seed = 3\nrecipe = " + r.id + "\n");
            CAPTURE(r.id);
            CHECK(cfg.schemes.size() == 4);
            CHECK(cfg.recipe == r.id);
        }
        const auto f2 = parse_config_text("seed = 3\nrecipe = fig2a\nalpha_s = 3.5\n");
        CHECK(f2.channels.size() == 2);
        CHECK(std::get<channel::Constant>(f2.channels[0]).h == 2.0);
        CHECK(parse_config_text("seed = 3\nrecipe = fig4a\n").n_trials == 400000);
        const auto f3 = parse_config_text("seed = 3\nrecipe = fig3b\n");
        CHECK(f3.params.alpha_s == 2.0);
        CHECK(f3.lambda_grid == std::vector<double>{0.01});
        CHECK(parse_config_text("seed = 3\nrecipe = fig5a\n").params.n_0 > 0.0);

        CHECK_THROWS_AS(parse_config_text("seed = 3\nrecipe = fig2a\nalpha_s = 4\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("seed = 3\nrecipe = fig2a\n[schemes]\nnojt = yes\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("seed = 3\nrecipe = fig9\n"), ConfigError);
    }

    TEST_CASE("scheme and channel specs") {
        CHECK(scheme_label(parse_scheme("nojt")) == "nojt");
        CHECK(scheme_label(parse_scheme("2ns")) == "2ns");
        CHECK(scheme_label(parse_scheme("cd")) == "cd-3");
        CHECK(scheme_label(parse_scheme("cd:4.5")) == "cd-4.5");
        CHECK(scheme_label(parse_scheme("fpd:3")) == "fpd-3");
        CHECK(channel_label(parse_channel("constant:2")) == "const-2");
        CHECK(channel_label(parse_channel("rayleigh")) == "rayleigh");
        CHECK(channel_label(parse_channel("nakagami:2:0.5")) == "nakagami-2-0.5");
        CHECK(parse_kind("desired") == AggregateKind::Desired);
        CHECK_THROWS_AS(parse_scheme("cd:x"), ConfigError);
        CHECK_THROWS_AS(parse_scheme("mesh"), ConfigError);
        CHECK_THROWS_AS(parse_channel("rician"), ConfigError);
        CHECK_THROWS_AS(parse_kind("signal"), ConfigError);
    }

    TEST_CASE("CSV round trip") {
        csv::Table t;
        t.header = {"a", "b"};
        t.add_row({0.1, 1e-300});
        t.add_row({1.0 / 3.0, -2.5e17});
        std::istringstream in(csv::to_string(t));
        const auto back = csv::parse(in);
        CHECK(back.header == t.header);
        CHECK(back.numeric(0, 0) == 0.1);
        CHECK(back.numeric(0, 1) == 1e-300);
        CHECK(back.numeric(1, 0) == 1.0 / 3.0);
        CHECK(back.numeric(1, 1) == -2.5e17);
        CHECK(back.column("b") == 1);
        std::istringstream bad("a,b\n1,2,3\n");
        CHECK_THROWS(csv::parse(bad));
    }

    TEST_CASE("binary: usage and configuration errors exit with 2") {
        const auto dir = scratch("errors");
        put(dir / "unknown.cfg", "seed = 1\nlambda_b = 0.01\nfrobnicate = 1\n");
        auto r = run_cli("sweep -c \"" + (dir / "unknown.cfg").string() + "\"", dir);
        CHECK(r.code == 2);
        CHECK(r.err.find(":3") != std::string::npos);
        CHECK(r.err.find("frobnicate") != std::string::npos);

        put(dir / "noschemes.cfg", "seed = 1\n[channels]\nrayleigh = yes\n");
        CHECK(run_cli("sweep -c \"" + (dir / "noschemes.cfg").string() + "\"", dir).code == 2);
        CHECK(run_cli("sweep -c \"" + (dir / "missing.cfg").string() + "\"", dir).code == 2);
        CHECK(run_cli("", dir).code == 2);
        CHECK(run_cli("frobnicate", dir).code == 2);
        const auto rec = run_cli("recipes", dir);
        CHECK(rec.code == 0);
        CHECK(rec.out.find("fig5b") != std::string::npos);
    }

    TEST_CASE("binary: minimal sweep") {
        const auto dir = scratch("sweep");
        put(dir / "min.cfg", kMinimal);
        const auto r = run_cli("sweep -c \"" + (dir / "min.cfg").string() + "\" -o \"" + (dir / "out").string() + "\"", dir);
        REQUIRE(r.code == 0);
        std::size_t files = 0;
        for (const auto& e : fs::directory_iterator(dir / "out")) files += e.path().extension() == ".csv";
        CHECK(files == 1);
        const auto t = csv::read(dir / "out" / "desired_nojt_rayleigh.csv");
        CHECK(t.header == std::vector<std::string>{"lambda_b", "analytic", "mc_mean", "mc_stderr"});
        REQUIRE(t.rows.size() == 1);
        CHECK(t.numeric(0, 0) == 0.01);
        CHECK(t.numeric(0, 1) == doctest::Approx(65.903139990427788).epsilon(1e-9));
        CHECK(r.out.find("desired_nojt_rayleigh.csv") != std::string::npos);
    }

    TEST_CASE("binary: reruns are byte-identical for any thread count") {
        const auto dir = scratch("determinism");
        put(dir / "d.cfg",
            "seed = 99\nlambda_b = 0.001, 0.01\nn_trials = 9000\nn0_dbm = -104\n"
            "outputs = desired, interference, var_interference, sinr, se\n"
            "[schemes]\nnojt = yes\n2ns = yes\ncd = 3\nfpd_db = 10\n[channels]\nrayleigh = yes\n");
        const auto cfg = "-c \"" + (dir / "d.cfg").string() + "\" -o ";
        REQUIRE(run_cli("sweep " + cfg + "\"" + (dir / "a").string() + "\"", dir, "UDNJT_THREADS=1").code == 0);
        REQUIRE(run_cli("sweep " + cfg + "\"" + (dir / "b").string() + "\"", dir, "UDNJT_THREADS=4").code == 0);
        REQUIRE(run_cli("sweep " + cfg + "\"" + (dir / "c").string() + "\"", dir, "UDNJT_THREADS=4").code == 0);
        std::size_t compared = 0;
        for (const auto& e : fs::directory_iterator(dir / "a")) {
            const auto name = e.path().filename();
            CAPTURE(name.string());
            CHECK(slurp(e.path()) == slurp(dir / "b" / name));
            CHECK(slurp(e.path()) == slurp(dir / "c" / name));
            ++compared;
        }
        CHECK(compared == 20);
    }

    TEST_CASE("binary: fig2a desired power grows with density") {
        const auto dir = scratch("fig2a");
        put(dir / "f.cfg", "seed = 5\nrecipe = fig2a\n");
        const auto r = run_cli("sweep -c \"" + (dir / "f.cfg").string() + "\" -o \"" + (dir / "out").string() + "\"", dir);
        REQUIRE(r.code == 0);
        std::size_t files = 0;
        for (const auto& e : fs::directory_iterator(dir / "out")) {
            const auto t = csv::read(e.path());
            CAPTURE(e.path().filename().string());
            REQUIRE(t.rows.size() == 5);
            for (std::size_t i = 1; i < t.rows.size(); ++i) {
                CHECK(t.numeric(i, 1) > t.numeric(i - 1, 1));
                CHECK(t.numeric(i, 2) > t.numeric(i - 1, 2));
            }
            ++files;
        }
        CHECK(files == 8);
    }

    TEST_CASE("binary: validate reports each check and catches a wrong reduction") {
        const auto dir = scratch("validate");
        const std::string base =
            "seed = 11\nlambda_b = 0.01\nr_l = 1\nn0_dbm = -104\nn_trials = 20000\n"
            "[schemes]\nnojt = yes\nfpd_db = 10\n[channels]\nconstant = 1\n";
        put(dir / "good.cfg", base);
        put(dir / "bad.cfg", "check_fpd_eta_db = 3\n" + base);
        const auto good = run_cli("validate -c \"" + (dir / "good.cfg").string() + "\" -o \"" + (dir / "g").string() + "\"", dir);
        CHECK(good.code == 0);
        CHECK(good.out.find("PASS reduction_fpd_eta0_is_nojt") != std::string::npos);
        CHECK(good.out.find("FAIL") == std::string::npos);
        const auto t = csv::read(dir / "g" / "validate.csv");
        CHECK(t.header == std::vector<std::string>{"check", "status", "observed", "tolerance"});
        CHECK(t.rows.size() > 20);

        const auto bad = run_cli("validate -c \"" + (dir / "bad.cfg").string() + "\" -o \"" + (dir / "b").string() + "\"", dir);
        CHECK(bad.code == 1);
        CHECK(bad.out.find("FAIL reduction_fpd_eta3_is_nojt") != std::string::npos);
    }

    TEST_CASE("binary: pdf writes the density and the histogram") {
        const auto dir = scratch("pdf");
        put(dir / "p.cfg",
            "seed = 4\nlambda_b = 0.01\nalpha_s = 2\nn_trials = 20000\n"
            "[schemes]\nnojt = yes\ncd = 3\n[channels]\nrayleigh = yes\n");
        const auto cfg = "-c \"" + (dir / "p.cfg").string() + "\" -o \"" + (dir / "out").string() + "\"";
        CHECK(run_cli("pdf " + cfg, dir).code == 2);  // two schemes, none chosen
        const auto r = run_cli("pdf " + cfg + " --scheme cd:3 --kind interference", dir);
        REQUIRE(r.code == 0);
        const auto pdf = csv::read(dir / "out" / "pdf_interference_cd-3_rayleigh.csv");
        CHECK(pdf.header == std::vector<std::string>{"power", "density"});
        CHECK(pdf.rows.size() >= 200);
        const auto hist = csv::read(dir / "out" / "hist_interference_cd-3_rayleigh.csv");
        CHECK(hist.header == std::vector<std::string>{"bin_lo", "bin_hi", "mass"});
        CHECK(hist.rows.size() == 50);
        CHECK(r.out.find("mass=") != std::string::npos);
    }
}
