#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cising {

/// Which eigenstate an exact computation follows: the true ground state of
/// H(J), or the state adiabatically connected to |0...0> (its spin-flip
/// image, M(0) = +1). Evolution runs track the connected branch.
enum class Branch { ground, connected };

enum class Provenance { exact, compressed_m, compressed_mhat, statevector };

std::string to_string(Provenance p);
std::string to_string(Branch b);

struct RunMeta {
    int n = 0;
    double j_max = 0.0;
    double total_time = 0.0;
    int steps = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    double noise_x = 0.0;
};

struct MagnetizationCurve {
    std::vector<double> coupling;       // ascending
    std::vector<double> magnetization;  // one value per coupling
    Provenance provenance = Provenance::exact;
    RunMeta meta;

    /// Equal lengths, ascending J, |M| <= 1 + 1e-6.
    void validate() const;
};

}  // namespace cising
