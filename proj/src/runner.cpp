#include "cising/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cising/exact.hpp"
#include "cising/statevector.hpp"

namespace cising {

int worker_count() {
    if (const char* env = std::getenv("COMPRESSED_ISING_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "exact") return Provenance::exact;
    if (s == "compressed-m") return Provenance::compressed_m;
    if (s == "compressed-mhat") return Provenance::compressed_mhat;
    if (s == "statevector") return Provenance::statevector;
    throw std::invalid_argument("unknown mode: " + s);
}

Branch branch_from_string(const std::string& s) {
    if (s == "ground") return Branch::ground;
    if (s == "connected") return Branch::connected;
    throw std::invalid_argument("unknown branch: " + s);
}

void RunConfig::validate() const {
    if (modes.empty()) throw std::invalid_argument("config: at least one mode required");
    if (n < 2 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("config: n must be a power of two >= 2");
    }
    if (!(j_max > 0)) throw std::invalid_argument("config: jmax must be positive");
    const int given = (total_time ? 1 : 0) + (steps ? 1 : 0) + (dt ? 1 : 0);
    if (given != 2) {
        throw std::invalid_argument("config: exactly two of T, L, dt must be given");
    }
    if (grid_points < 2 && explicit_grid.empty()) {
        throw std::invalid_argument("config: at least two grid points required");
    }
    for (double j : explicit_grid) {
        if (j < 0 || j > j_max) {
            throw std::invalid_argument("config: grid values must lie in [0, jmax]");
        }
    }
    if (noise_x < 0) throw std::invalid_argument("config: noise amplitude must be >= 0");
    for (Provenance mode : modes) {
        if (mode == Provenance::statevector && n > 12) {
            throw std::invalid_argument("config: statevector mode is capped at n = 12");
        }
    }
}

TrotterSchedule RunConfig::schedule() const {
    if (total_time && steps) return TrotterSchedule::from_time_steps(*total_time, *steps, j_max);
    if (total_time && dt) return TrotterSchedule::from_time_dt(*total_time, *dt, j_max);
    return TrotterSchedule::from_steps_dt(*steps, *dt, j_max);
}

std::vector<double> RunConfig::grid() const {
    if (!explicit_grid.empty()) {
        std::vector<double> g = explicit_grid;
        std::sort(g.begin(), g.end());
        return g;
    }
    std::vector<double> g(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        g[i] = j_max * static_cast<double>(i) / (grid_points - 1);
    }
    return g;
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad floating-point value: " + s);
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<std::string> config_echo(const RunConfig& config) {
    std::vector<std::string> lines;
    std::string modes;
    for (std::size_t i = 0; i < config.modes.size(); ++i) {
        if (i) modes += ',';
        modes += to_string(config.modes[i]);
    }
    lines.push_back("mode=" + modes);
    lines.push_back("n=" + std::to_string(config.n));
    lines.push_back("jmax=" + format_double(config.j_max));
    if (config.total_time) lines.push_back("T=" + format_double(*config.total_time));
    if (config.steps) lines.push_back("L=" + std::to_string(*config.steps));
    if (config.dt) lines.push_back("dt=" + format_double(*config.dt));
    if (!config.explicit_grid.empty()) {
        std::string grid;
        for (std::size_t i = 0; i < config.explicit_grid.size(); ++i) {
            if (i) grid += ',';
            grid += format_double(config.explicit_grid[i]);
        }
        lines.push_back("jgrid=" + grid);
    } else {
        lines.push_back("points=" + std::to_string(config.grid_points));
    }
    lines.push_back("x=" + format_double(config.noise_x));
    lines.push_back("seed=" + std::to_string(config.seed));
    lines.push_back("branch=" + to_string(config.branch));
    return lines;
}

constexpr const char* kCsvHeader = "mode,n,J_max,T,L,dt,seed,noise_x,J,M";

void append_curve_rows(std::string& out, const MagnetizationCurve& curve,
                       const std::string& mode_name) {
    const RunMeta& meta = curve.meta;
    std::string prefix = mode_name;
    prefix += ',';
    prefix += std::to_string(meta.n);
    prefix += ',';
    prefix += format_double(meta.j_max);
    prefix += ',';
    prefix += format_double(meta.total_time);
    prefix += ',';
    prefix += std::to_string(meta.steps);
    prefix += ',';
    prefix += format_double(meta.dt);
    prefix += ',';
    prefix += std::to_string(meta.seed);
    prefix += ',';
    prefix += format_double(meta.noise_x);
    for (std::size_t i = 0; i < curve.coupling.size(); ++i) {
        out += prefix;
        out += ',';
        out += format_double(curve.coupling[i]);
        out += ',';
        out += format_double(curve.magnetization[i]);
        out += '\n';
    }
}

void atomic_write(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << text;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("atomic rename to " + path + " failed");
    }
}

}  // namespace

std::string sweep_csv_text(const RunConfig& config,
                           const std::vector<MagnetizationCurve>& curves) {
    std::string text = "# compressed-ising sweep\n";
    for (const std::string& line : config_echo(config)) {
        text += "# ";
        text += line;
        text += '\n';
    }
    text += kCsvHeader;
    text += '\n';
    for (const MagnetizationCurve& curve : curves) {
        append_curve_rows(text, curve, to_string(curve.provenance));
    }
    return text;
}

void write_sweep_csv(const std::string& path, const RunConfig& config,
                     const std::vector<MagnetizationCurve>& curves) {
    atomic_write(path, sweep_csv_text(config, curves));
}

SweepResult run_sweep(const RunConfig& config, std::ostream* summary) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const TrotterSchedule sched = config.schedule();
    const std::vector<double> grid = config.grid();
    const IsingSpec spec(config.n, config.j_max);

    SweepResult result;
    for (Provenance mode : config.modes) {
        MagnetizationCurve curve;
        switch (mode) {
            case Provenance::exact:
                curve = exact_curve(config.n, grid, config.branch, config.j_max);
                curve.meta.total_time = sched.total_time;
                curve.meta.steps = sched.steps;
                curve.meta.dt = sched.dt;
                break;
            case Provenance::compressed_m:
                curve = compressed_evolution_m(spec, sched, grid);
                break;
            case Provenance::compressed_mhat: {
                NoiseSpec noise;
                if (config.noise_x > 0) {
                    noise = NoiseSpec{true, config.noise_x, config.seed};
                }
                curve = compressed_evolution_mhat(spec, sched, grid, noise);
                curve.meta.seed = config.seed;
                break;
            }
            case Provenance::statevector: {
                curve.provenance = Provenance::statevector;
                curve.meta = RunMeta{config.n, config.j_max, sched.total_time,
                                     sched.steps, sched.dt,  0,
                                     0.0};
                for (double j : grid) {
                    curve.coupling.push_back(j);
                    curve.magnetization.push_back(trotter_magnetization(config.n, sched, j));
                }
                curve.validate();
                break;
            }
        }
        result.curves.push_back(std::move(curve));
    }

    for (const MagnetizationCurve& curve : result.curves) {
        for (double m : curve.magnetization) result.max_abs_m = std::max(result.max_abs_m, std::abs(m));
    }
    for (std::size_t c = 1; c < result.curves.size(); ++c) {
        double dev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            dev = std::max(dev, std::abs(result.curves[c].magnetization[i] -
                                         result.curves[0].magnetization[i]));
        }
        result.deviations.push_back(dev);
    }

    if (!config.out_path.empty()) write_sweep_csv(config.out_path, config, result.curves);
    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (summary) {
        *summary << "sweep: n=" << config.n << " points=" << grid.size() << " modes=";
        for (std::size_t i = 0; i < config.modes.size(); ++i) {
            if (i) *summary << ",";
            *summary << to_string(config.modes[i]);
        }
        *summary << "\n";
        *summary << "max |M| = " << format_double(result.max_abs_m) << "\n";
        for (std::size_t c = 1; c < result.curves.size(); ++c) {
            *summary << "max deviation " << to_string(config.modes[c]) << " vs "
                     << to_string(config.modes[0]) << " = " << format_double(result.deviations[c - 1])
                     << "\n";
        }
        *summary << "runtime = " << result.runtime_seconds << " s\n";
        if (!config.out_path.empty()) *summary << "wrote " << config.out_path << "\n";
    }
    return result;
}

NoiseStudyResult run_noise_study(const RunConfig& config, const std::vector<double>& x_values,
                                 int seed_count, std::ostream* summary) {
    config.validate();
    if (seed_count < 1) throw std::invalid_argument("noise study: seed count must be >= 1");
    for (double x : x_values) {
        if (x < 0) throw std::invalid_argument("noise study: x must be >= 0");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const TrotterSchedule sched = config.schedule();
    const std::vector<double> grid = config.grid();
    const IsingSpec spec(config.n, config.j_max);

    NoiseStudyResult result;
    result.x_values = x_values;
    result.baseline = compressed_evolution_mhat(spec, sched, grid, {});
    result.curves.assign(x_values.size(), {});
    for (auto& per_x : result.curves) per_x.resize(seed_count);

    struct Task {
        std::size_t xi;
        int seed_offset;
    };
    std::vector<Task> tasks;
    for (std::size_t xi = 0; xi < x_values.size(); ++xi) {
        for (int s = 0; s < seed_count; ++s) tasks.push_back({xi, s});
    }
    const int workers = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run_task = [&](const Task& task) {
        const double x = x_values[task.xi];
        NoiseSpec noise{x > 0, x, config.seed + static_cast<std::uint64_t>(task.seed_offset)};
        result.curves[task.xi][task.seed_offset] =
            compressed_evolution_mhat(spec, sched, grid, noise);
    };
    if (workers <= 1) {
        for (const Task& task : tasks) run_task(task);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                try {
                    for (std::size_t i = w; i < tasks.size(); i += workers) run_task(tasks[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    result.mean_abs_dev.assign(x_values.size(), std::vector<double>(grid.size(), 0.0));
    result.max_abs_dev.assign(x_values.size(), std::vector<double>(grid.size(), 0.0));
    result.mean_max_dev.assign(x_values.size(), 0.0);
    for (std::size_t xi = 0; xi < x_values.size(); ++xi) {
        for (int s = 0; s < seed_count; ++s) {
            double run_max = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double dev = std::abs(result.curves[xi][s].magnetization[i] -
                                            result.baseline.magnetization[i]);
                result.mean_abs_dev[xi][i] += dev / seed_count;
                result.max_abs_dev[xi][i] = std::max(result.max_abs_dev[xi][i], dev);
                run_max = std::max(run_max, dev);
            }
            result.mean_max_dev[xi] += run_max / seed_count;
        }
    }

    if (!config.out_path.empty()) write_noise_csv(config.out_path, config, result, seed_count);
    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (summary) {
        *summary << "noise study: n=" << config.n << " seeds=" << seed_count << "\n";
        for (std::size_t xi = 0; xi < x_values.size(); ++xi) {
            *summary << "x=" << format_double(x_values[xi])
                     << ": mean max |dM| = " << format_double(result.mean_max_dev[xi]) << "\n";
        }
        *summary << "runtime = " << result.runtime_seconds << " s\n";
        if (!config.out_path.empty()) *summary << "wrote " << config.out_path << "\n";
    }
    return result;
}

void write_noise_csv(const std::string& path, const RunConfig& config,
                     const NoiseStudyResult& result, int seed_count) {
    std::string text = "# compressed-ising noise study\n";
    for (const std::string& line : config_echo(config)) {
        text += "# ";
        text += line;
        text += '\n';
    }
    text += "# seeds=" + std::to_string(seed_count) + "\n";
    std::string xs = "# xlist=";
    for (std::size_t i = 0; i < result.x_values.size(); ++i) {
        if (i) xs += ',';
        xs += format_double(result.x_values[i]);
    }
    text += xs + "\n";
    text += kCsvHeader;
    text += '\n';
    append_curve_rows(text, result.baseline, "compressed-mhat");
    for (std::size_t xi = 0; xi < result.x_values.size(); ++xi) {
        for (const MagnetizationCurve& curve : result.curves[xi]) {
            append_curve_rows(text, curve, "compressed-mhat");
        }
    }
    // Aggregate rows reuse the M column for the deviation statistic; the
    // seed column carries the seed count.
    for (std::size_t xi = 0; xi < result.x_values.size(); ++xi) {
        MagnetizationCurve agg;
        agg.meta = result.baseline.meta;
        agg.meta.seed = static_cast<std::uint64_t>(seed_count);
        agg.meta.noise_x = result.x_values[xi];
        for (std::size_t i = 0; i < result.baseline.coupling.size(); ++i) {
            agg.coupling.push_back(result.baseline.coupling[i]);
            agg.magnetization.push_back(result.mean_abs_dev[xi][i]);
        }
        append_curve_rows(text, agg, "aggregate-mean");
        for (std::size_t i = 0; i < agg.coupling.size(); ++i) {
            agg.magnetization[i] = result.max_abs_dev[xi][i];
        }
        append_curve_rows(text, agg, "aggregate-max");
    }
    atomic_write(path, text);
}

CsvContent read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvContent content;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body[0] == ' ') body = body.substr(1);
            content.comments.push_back(body);
            continue;
        }
        if (!header_seen) {
            content.header = split(line, ',');
            header_seen = true;
            continue;
        }
        content.rows.push_back(split(line, ','));
    }
    return content;
}

RunConfig config_from_csv(const CsvContent& content) {
    RunConfig config;
    config.modes.clear();
    for (const std::string& comment : content.comments) {
        const auto eq = comment.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = comment.substr(0, eq);
        const std::string value = comment.substr(eq + 1);
        if (key == "mode") {
            for (const std::string& m : split(value, ',')) {
                config.modes.push_back(provenance_from_string(m));
            }
        } else if (key == "n") {
            config.n = std::stoi(value);
        } else if (key == "jmax") {
            config.j_max = parse_double(value);
        } else if (key == "T") {
            config.total_time = parse_double(value);
        } else if (key == "L") {
            config.steps = std::stoi(value);
        } else if (key == "dt") {
            config.dt = parse_double(value);
        } else if (key == "points") {
            config.grid_points = std::stoi(value);
        } else if (key == "jgrid") {
            for (const std::string& j : split(value, ',')) {
                config.explicit_grid.push_back(parse_double(j));
            }
        } else if (key == "x") {
            config.noise_x = parse_double(value);
        } else if (key == "seed") {
            config.seed = std::stoull(value);
        } else if (key == "branch") {
            config.branch = branch_from_string(value);
        }
    }
    if (config.modes.empty()) config.modes.push_back(Provenance::compressed_mhat);
    return config;
}

}  // namespace cising
