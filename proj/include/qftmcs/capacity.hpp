#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qftmcs {

/// Largest statevector allowed unless the caller raises the cap (2^26
/// complex doubles = 1 GiB).
inline constexpr unsigned kDefaultMaxQubits = 26;

/// A request that would exceed a configured size limit.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::uint64_t statevector_bytes(unsigned n_qubits) { return (std::uint64_t{1} << n_qubits) * 16; }

inline void check_qubit_capacity(unsigned n_qubits, unsigned max_qubits) {
    if (n_qubits > max_qubits || n_qubits > 40) {
        throw CapacityError("simulation needs " + std::to_string(n_qubits) + " qubits (" +
                            std::to_string(statevector_bytes(n_qubits) >> 20) + " MiB per state); cap is " +
                            std::to_string(max_qubits) + " qubits");
    }
}

}  // namespace qftmcs
