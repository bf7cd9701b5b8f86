#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cising/runner.hpp"

using namespace cising;

namespace {

RunConfig small_config() {
    RunConfig config;
    config.modes = {Provenance::compressed_mhat};
    config.n = 4;
    config.j_max = 2.0;
    config.total_time = 10.0;
    config.steps = 200;
    config.grid_points = 11;
    return config;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config validation") {
    RunConfig config = small_config();
    CHECK_NOTHROW(config.validate());

    config.n = 6;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.n = 4;

    config.dt = 0.05;  // three of T/L/dt
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.dt.reset();

    config.modes = {Provenance::statevector};
    config.n = 16;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("uniform grid construction") {
    RunConfig config = small_config();
    config.grid_points = 5;
    const std::vector<double> grid = config.grid();
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 2.0);
    CHECK(grid[2] == doctest::Approx(1.0));

    config.explicit_grid = {1.5, 0.5};
    const std::vector<double> explicit_grid = config.grid();
    CHECK(explicit_grid.front() == 0.5);
    CHECK(explicit_grid.back() == 1.5);
}

TEST_CASE("run_sweep produces a decreasing curve and reports deviations") {
    RunConfig config = small_config();
    config.modes = {Provenance::compressed_mhat, Provenance::compressed_m,
                    Provenance::statevector};
    std::ostringstream summary;
    const SweepResult result = run_sweep(config, &summary);
    REQUIRE(result.curves.size() == 3);
    CHECK(result.curves[0].magnetization.front() == doctest::Approx(1.0));
    REQUIRE(result.deviations.size() == 2);
    CHECK(result.deviations[0] <= 1e-10);
    CHECK(result.deviations[1] <= 1e-9);
    CHECK(result.max_abs_m <= 1.0 + 1e-9);
    CHECK(summary.str().find("max deviation") != std::string::npos);
}

TEST_CASE("monotone non-increasing compressed curve at n=8") {
    RunConfig config;
    config.modes = {Provenance::compressed_mhat};
    config.n = 8;
    config.total_time = 30.0;
    config.steps = 600;
    config.grid_points = 41;
    const SweepResult result = run_sweep(config);
    const auto& m = result.curves[0].magnetization;
    CHECK(m.front() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < m.size(); ++i) CHECK(m[i] <= m[i - 1] + 1e-6);
}

TEST_CASE("csv round-trips through parse and re-run") {
    TempFile file("test_roundtrip.csv");
    RunConfig config = small_config();
    config.modes = {Provenance::compressed_mhat, Provenance::exact};
    config.seed = 9;
    config.out_path = file.path;
    run_sweep(config);

    const CsvContent content = read_csv(file.path);
    CHECK(content.header.size() == 10);
    CHECK(content.header[0] == "mode");
    CHECK(content.header[9] == "M");
    CHECK(content.rows.size() == 2 * 11);

    RunConfig re = config_from_csv(content);
    CHECK(re.n == config.n);
    CHECK(re.modes == config.modes);
    CHECK(re.seed == config.seed);
    TempFile file2("test_roundtrip2.csv");
    re.out_path = file2.path;
    run_sweep(re);
    // identical config -> byte-identical rows; only the file is renamed
    const std::string a = slurp(file.path);
    const std::string b = slurp(file2.path);
    CHECK(a == b);
}

TEST_CASE("byte-identical reruns with a fixed seed and noise") {
    TempFile file_a("test_det_a.csv");
    TempFile file_b("test_det_b.csv");
    RunConfig config = small_config();
    config.noise_x = 1e-2;
    config.seed = 123;
    config.out_path = file_a.path;
    run_sweep(config);
    config.out_path = file_b.path;
    run_sweep(config);
    CHECK(slurp(file_a.path) == slurp(file_b.path));
}

TEST_CASE("noise study aggregates and zero-amplitude rows") {
    RunConfig config = small_config();
    config.grid_points = 9;
    const NoiseStudyResult result = run_noise_study(config, {0.0, 1e-2}, 4);
    REQUIRE(result.x_values.size() == 2);
    for (double dev : result.mean_abs_dev[0]) CHECK(dev == 0.0);
    for (double dev : result.max_abs_dev[0]) CHECK(dev == 0.0);
    CHECK(result.mean_max_dev[0] == 0.0);
    CHECK(result.mean_max_dev[1] > 0.0);
}

TEST_CASE("fast verify passes and the tamper hooks trip it") {
    const VerifyReport clean = run_verify(VerifyLevel::fast);
    CHECK(clean.all_pass);

    const VerifyReport r0_flip = run_verify(VerifyLevel::fast, Tamper::flip_r0_sign);
    CHECK_FALSE(r0_flip.all_pass);
    bool eq1_check_failed = false;
    for (const auto& check : r0_flip.checks) {
        if (check.name == "r0-matches-compiled") eq1_check_failed = !check.pass;
    }
    CHECK(eq1_check_failed);

    const VerifyReport v_flip = run_verify(VerifyLevel::fast, Tamper::flip_v_sign);
    CHECK_FALSE(v_flip.all_pass);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.05, 1.0 / 3.0, 2.0, 1e-12, 0.8944271909999159}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
