#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cising/compressed.hpp"
#include "cising/curve.hpp"
#include "cising/schedule.hpp"

namespace cising {

/// Worker fan-out cap: COMPRESSED_ISING_THREADS, defaulting to the available
/// hardware concurrency.
int worker_count();

struct RunConfig {
    std::vector<Provenance> modes{Provenance::compressed_mhat};
    int n = 8;
    double j_max = 2.0;
    std::optional<double> total_time;
    std::optional<int> steps;
    std::optional<double> dt;
    int grid_points = 41;
    std::vector<double> explicit_grid;  // overrides grid_points when nonempty
    double noise_x = 0.0;
    std::uint64_t seed = 0;
    Branch branch = Branch::connected;  // exact mode only
    std::string out_path;               // empty: no file, rows go to stdout

    /// n a power of two, exactly two of {T, L, dt} set, grid within
    /// [0, j_max], statevector mode capped at n = 12.
    void validate() const;

    TrotterSchedule schedule() const;
    std::vector<double> grid() const;
};

struct SweepResult {
    std::vector<MagnetizationCurve> curves;
    double max_abs_m = 0.0;
    /// max |M_mode - M_modes[0]| per additional mode, aligned with
    /// curves[1..].
    std::vector<double> deviations;
    double runtime_seconds = 0.0;
};

/// Runs every requested mode over the J grid and writes one CSV (atomic
/// temp-file + rename; no partial files). `summary`, when given, receives
/// the human-readable report.
SweepResult run_sweep(const RunConfig& config, std::ostream* summary = nullptr);

struct NoiseStudyResult {
    MagnetizationCurve baseline;                       // x = 0
    std::vector<double> x_values;
    std::vector<std::vector<MagnetizationCurve>> curves;  // [x][seed]
    std::vector<std::vector<double>> mean_abs_dev;     // [x][j] mean |dM| over seeds
    std::vector<std::vector<double>> max_abs_dev;      // [x][j] max |dM| over seeds
    std::vector<double> mean_max_dev;                  // [x] mean over seeds of max_J |dM|
    double runtime_seconds = 0.0;
};

/// Noise study: for each error amplitude x and each seed in
/// [config.seed, config.seed + seed_count), one full compressed-mhat curve;
/// aggregates deviations against the x = 0 baseline. Seeds fan out across
/// workers.
NoiseStudyResult run_noise_study(const RunConfig& config, const std::vector<double>& x_values,
                                 int seed_count, std::ostream* summary = nullptr);

enum class VerifyLevel { fast, full };

struct VerifyReport {
    struct Check {
        std::string name;
        double residual;
        double threshold;
        bool pass;
    };
    std::vector<Check> checks;
    bool all_pass = true;
};

/// Aggregated invariant suite. fast: small registers, < 10 s. full: adds the
/// larger registers and the n=8 long-schedule reproduction run. The tamper
/// hook deliberately corrupts one operator to exercise failure detection.
VerifyReport run_verify(VerifyLevel level, Tamper tamper = Tamper::none,
                        std::ostream* progress = nullptr);

// CSV layer. Columns: mode,n,J_max,T,L,dt,seed,noise_x,J,M. A '#'-prefixed
// comment header echoes the configuration. Floating-point values use
// shortest round-trip formatting.
std::string format_double(double v);
void write_sweep_csv(const std::string& path, const RunConfig& config,
                     const std::vector<MagnetizationCurve>& curves);
void write_noise_csv(const std::string& path, const RunConfig& config,
                     const NoiseStudyResult& result, int seed_count);
std::string sweep_csv_text(const RunConfig& config,
                           const std::vector<MagnetizationCurve>& curves);

struct CsvContent {
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvContent read_csv(const std::string& path);
/// Rebuilds a RunConfig from the comment echo of a sweep CSV.
RunConfig config_from_csv(const CsvContent& content);

Provenance provenance_from_string(const std::string& s);
Branch branch_from_string(const std::string& s);

}  // namespace cising
