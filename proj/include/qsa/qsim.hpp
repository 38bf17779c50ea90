#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "qsa/bitcore.hpp"

namespace qsa {

constexpr uint32_t kMaxSimQubits = 24;

struct Edge {
    uint32_t a = 0;
    uint32_t b = 0;
    char label = 'A'; // coupler activation class
};

/// Reproducible description of one random-circuit instance.
struct CircuitSpec {
    uint32_t n = 0;
    uint32_t m = 0; // cycles
    std::vector<Edge> edges;
    std::string pattern_sequence = "ABCDCDAB";
    double theta = std::numbers::pi / 2; // fSim swap angle
    double phi = std::numbers::pi / 6;   // fSim conditional phase
    uint64_t seed = 0;

    void validate() const;
};

/// Rectangular grid topology: qubit (r,c) has id r*cols + c. Horizontal
/// edges alternate A/B by column parity, vertical edges C/D by row parity,
/// so every pattern class is a disjoint edge set.
CircuitSpec grid_circuit_spec(uint32_t rows, uint32_t cols, uint32_t m, uint64_t seed);

void save_circuit_spec(const CircuitSpec& spec, const std::filesystem::path& path);
CircuitSpec load_circuit_spec(const std::filesystem::path& path);

enum class GateKind { SqrtX, SqrtY, SqrtW, PauliX, PauliY, PauliZ, FSim };

struct Gate {
    GateKind kind = GateKind::SqrtX;
    uint32_t q0 = 0;
    uint32_t q1 = 0; // second qubit, FSim only
    double theta = 0.0;
    double phi = 0.0;
};

struct Circuit {
    uint32_t n = 0;
    std::vector<Gate> gates;
};

/// Per cycle: one layer of single-qubit gates drawn from {sqrtX, sqrtY, sqrtW}
/// (never repeating on the same qubit in consecutive cycles), then fSim on
/// every edge of the cycle's pattern class. One extra single-qubit layer
/// after the last cycle. Deterministic given spec.seed.
Circuit build_random_circuit(const CircuitSpec& spec);

struct StateVector {
    std::vector<std::complex<double>> amplitudes; // 2^n entries
    uint32_t n = 0;

    double norm_squared() const;
};

StateVector zero_state(uint32_t n);
void apply_circuit(StateVector& state, const Circuit& circuit);
/// Adjoint gates in reverse order; undoes apply_circuit exactly.
void apply_inverse_circuit(StateVector& state, const Circuit& circuit);
StateVector simulate(const Circuit& circuit);

/// Amplitude index of bit-string x, qubit 0 as MSB (matches transport).
uint64_t bitstring_index(uint64_t row_word, uint32_t n);
double ideal_probability(const StateVector& state, uint64_t row_word);

struct NoiseSpec {
    std::vector<double> readout_p01; // per-qubit p(0 -> 1); empty = noiseless
    std::vector<double> readout_p10; // per-qubit p(1 -> 0)
    double gate_pauli_rate = 0.0;

    static NoiseSpec uniform_readout(uint32_t n, double p01, double p10);
    void validate(uint32_t n) const;
    bool has_readout() const { return !readout_p01.empty() || !readout_p10.empty(); }
};

/// M inverse-CDF draws from |amplitudes|^2, then independent per-qubit
/// readout flips. Deterministic given seed.
BitMatrix sample(const StateVector& state, size_t M, uint64_t seed,
                 const NoiseSpec& noise = {});

/// One Monte-Carlo Pauli trajectory: after each gate, with probability rate
/// a uniformly chosen non-identity Pauli is inserted on each participating
/// qubit. Deterministic given trajectory_seed.
Circuit apply_gate_noise(const Circuit& circuit, double rate, uint64_t trajectory_seed);

struct XebEstimate {
    double value = 0.0;
    double std_error = 0.0;
    size_t M = 0;
};

/// Linear cross-entropy fidelity: F = 2^n * mean(p(x) over samples) - 1.
XebEstimate xeb_fidelity(const BitMatrix& samples, const StateVector& state);

} // namespace qsa
