#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>

namespace cising {

// Basis-index convention, used everywhere: a register of m qubits indexes its
// computational basis states 0..2^m-1 with qubit 1 in the most significant
// bit. 1-based matrix indices k map to basis index k-1 under the same rule,
// so index pairs (2k-1, 2k) share all bits except the last qubit.

inline int qubit_bit(std::size_t index, int qubit, int m) {
    return static_cast<int>((index >> (m - qubit)) & 1u);
}

inline int bit_weight(std::size_t index) {
    return std::popcount(static_cast<std::uint64_t>(index));
}

}  // namespace cising
