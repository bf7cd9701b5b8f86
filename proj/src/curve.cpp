#include "cising/curve.hpp"

#include <cmath>
#include <stdexcept>

namespace cising {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::exact: return "exact";
        case Provenance::compressed_m: return "compressed-m";
        case Provenance::compressed_mhat: return "compressed-mhat";
        case Provenance::statevector: return "statevector";
    }
    return "?";
}

std::string to_string(Branch b) {
    return b == Branch::ground ? "ground" : "connected";
}

void MagnetizationCurve::validate() const {
    if (coupling.size() != magnetization.size()) {
        throw std::runtime_error("MagnetizationCurve: length mismatch");
    }
    for (std::size_t i = 1; i < coupling.size(); ++i) {
        if (coupling[i] < coupling[i - 1]) {
            throw std::runtime_error("MagnetizationCurve: couplings not ascending");
        }
    }
    for (double m : magnetization) {
        if (!(std::abs(m) <= 1.0 + 1e-6)) {
            throw std::runtime_error("MagnetizationCurve: |M| out of range");
        }
    }
}

}  // namespace cising
