#include "qsa/qsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

namespace qsa {

using complex = std::complex<double>;
using Mat2 = std::array<complex, 4>;  // row-major 2x2
using Mat4 = std::array<complex, 16>; // row-major 4x4

void CircuitSpec::validate() const {
    if (n < 1) throw InvalidArgument("CircuitSpec: n must be >= 1");
    if (n > kMaxSimQubits)
        throw CapacityError("CircuitSpec: n=" + std::to_string(n) + " exceeds cap of " +
                            std::to_string(kMaxSimQubits));
    if (pattern_sequence.empty()) throw InvalidArgument("CircuitSpec: empty pattern sequence");
    for (const Edge& e : edges) {
        if (e.a >= n || e.b >= n || e.a == e.b)
            throw InvalidArgument("CircuitSpec: edge references invalid qubits");
    }
    // Edges within one pattern class must be disjoint (applied in parallel).
    for (char label : std::string("ABCD")) {
        std::vector<bool> used(n, false);
        for (const Edge& e : edges) {
            if (e.label != label) continue;
            if (used[e.a] || used[e.b])
                throw InvalidArgument(std::string("CircuitSpec: pattern ") + label +
                                      " has overlapping edges");
            used[e.a] = used[e.b] = true;
        }
    }
}

CircuitSpec grid_circuit_spec(uint32_t rows, uint32_t cols, uint32_t m, uint64_t seed) {
    if (rows < 1 || cols < 1) throw InvalidArgument("grid_circuit_spec: empty grid");
    CircuitSpec spec;
    spec.n = rows * cols;
    spec.m = m;
    spec.seed = seed;
    for (uint32_t r = 0; r < rows; ++r) {
        for (uint32_t c = 0; c < cols; ++c) {
            const uint32_t q = r * cols + c;
            if (c + 1 < cols) spec.edges.push_back({q, q + 1, c % 2 == 0 ? 'A' : 'B'});
            if (r + 1 < rows) spec.edges.push_back({q, q + cols, r % 2 == 0 ? 'C' : 'D'});
        }
    }
    spec.validate();
    return spec;
}

void save_circuit_spec(const CircuitSpec& spec, const std::filesystem::path& path) {
    nlohmann::json j;
    j["qubits"] = spec.n;
    j["cycles"] = spec.m;
    j["pattern_sequence"] = spec.pattern_sequence;
    j["theta"] = spec.theta;
    j["phi"] = spec.phi;
    j["seed"] = spec.seed;
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const Edge& e : spec.edges)
        edges.push_back({{"a", e.a}, {"b", e.b}, {"label", std::string(1, e.label)}});
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

CircuitSpec load_circuit_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    CircuitSpec spec;
    spec.n = j.at("qubits").get<uint32_t>();
    spec.m = j.at("cycles").get<uint32_t>();
    spec.pattern_sequence = j.at("pattern_sequence").get<std::string>();
    spec.theta = j.at("theta").get<double>();
    spec.phi = j.at("phi").get<double>();
    spec.seed = j.at("seed").get<uint64_t>();
    for (const auto& je : j.at("edges")) {
        Edge e;
        e.a = je.at("a").get<uint32_t>();
        e.b = je.at("b").get<uint32_t>();
        e.label = je.at("label").get<std::string>().at(0);
        spec.edges.push_back(e);
    }
    spec.validate();
    return spec;
}

namespace {

constexpr complex kI{0.0, 1.0};

Mat2 single_qubit_matrix(GateKind kind) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    switch (kind) {
    case GateKind::SqrtX:
        return {inv_sqrt2, -kI * inv_sqrt2, -kI * inv_sqrt2, complex{inv_sqrt2}};
    case GateKind::SqrtY:
        return {complex{inv_sqrt2}, complex{-inv_sqrt2}, complex{inv_sqrt2},
                complex{inv_sqrt2}};
    case GateKind::SqrtW: {
        // (1/sqrt2)(I - iW), W = (X+Y)/sqrt2
        const complex off01 = -(complex{1.0, 1.0}) / 2.0; // -(1+i)/2
        const complex off10 = (complex{1.0, -1.0}) / 2.0; // (1-i)/2
        return {complex{inv_sqrt2}, off01, off10, complex{inv_sqrt2}};
    }
    case GateKind::PauliX:
        return {complex{0.0}, complex{1.0}, complex{1.0}, complex{0.0}};
    case GateKind::PauliY:
        return {complex{0.0}, -kI, kI, complex{0.0}};
    case GateKind::PauliZ:
        return {complex{1.0}, complex{0.0}, complex{0.0}, complex{-1.0}};
    case GateKind::FSim:
        break;
    }
    throw InvalidArgument("single_qubit_matrix: not a single-qubit gate");
}

Mat4 fsim_matrix(double theta, double phi) {
    Mat4 u{};
    u[0] = 1.0;
    u[5] = std::cos(theta);
    u[6] = -kI * std::sin(theta);
    u[9] = -kI * std::sin(theta);
    u[10] = std::cos(theta);
    u[15] = std::exp(-kI * phi);
    return u;
}

Mat2 adjoint(const Mat2& u) {
    return {std::conj(u[0]), std::conj(u[2]), std::conj(u[1]), std::conj(u[3])};
}

Mat4 adjoint(const Mat4& u) {
    Mat4 a;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a[r * 4 + c] = std::conj(u[c * 4 + r]);
    return a;
}

// Qubit 0 is the MSB of the amplitude index.
void apply_single(StateVector& state, uint32_t q, const Mat2& u) {
    const uint64_t stride = uint64_t{1} << (state.n - 1 - q);
    const uint64_t dim = uint64_t{1} << state.n;
    for (uint64_t base = 0; base < dim; base += 2 * stride) {
        for (uint64_t off = 0; off < stride; ++off) {
            complex& a0 = state.amplitudes[base + off];
            complex& a1 = state.amplitudes[base + off + stride];
            const complex t0 = u[0] * a0 + u[1] * a1;
            const complex t1 = u[2] * a0 + u[3] * a1;
            a0 = t0;
            a1 = t1;
        }
    }
}

void apply_two(StateVector& state, uint32_t qa, uint32_t qb, const Mat4& u) {
    const uint64_t sa = uint64_t{1} << (state.n - 1 - qa);
    const uint64_t sb = uint64_t{1} << (state.n - 1 - qb);
    const uint64_t dim = uint64_t{1} << state.n;
    for (uint64_t i = 0; i < dim; ++i) {
        if ((i & sa) || (i & sb)) continue;
        complex& a00 = state.amplitudes[i];
        complex& a01 = state.amplitudes[i | sb];
        complex& a10 = state.amplitudes[i | sa];
        complex& a11 = state.amplitudes[i | sa | sb];
        const complex t0 = u[0] * a00 + u[1] * a01 + u[2] * a10 + u[3] * a11;
        const complex t1 = u[4] * a00 + u[5] * a01 + u[6] * a10 + u[7] * a11;
        const complex t2 = u[8] * a00 + u[9] * a01 + u[10] * a10 + u[11] * a11;
        const complex t3 = u[12] * a00 + u[13] * a01 + u[14] * a10 + u[15] * a11;
        a00 = t0;
        a01 = t1;
        a10 = t2;
        a11 = t3;
    }
}

void apply_gate(StateVector& state, const Gate& g, bool dagger) {
    if (g.kind == GateKind::FSim) {
        Mat4 u = fsim_matrix(g.theta, g.phi);
        if (dagger) u = adjoint(u);
        apply_two(state, g.q0, g.q1, u);
    } else {
        Mat2 u = single_qubit_matrix(g.kind);
        if (dagger) u = adjoint(u);
        apply_single(state, g.q0, u);
    }
}

} // namespace

Circuit build_random_circuit(const CircuitSpec& spec) {
    spec.validate();
    std::mt19937_64 eng(spec.seed);
    Circuit circuit;
    circuit.n = spec.n;
    static constexpr std::array<GateKind, 3> kChoices = {GateKind::SqrtX, GateKind::SqrtY,
                                                         GateKind::SqrtW};
    std::vector<int> previous(spec.n, -1);
    auto single_layer = [&] {
        for (uint32_t q = 0; q < spec.n; ++q) {
            int pick;
            if (previous[q] < 0) {
                pick = static_cast<int>(eng() % 3);
            } else {
                // uniform over the two gates differing from last cycle's
                pick = static_cast<int>(eng() % 2);
                if (pick >= previous[q]) ++pick;
            }
            previous[q] = pick;
            circuit.gates.push_back({kChoices[static_cast<size_t>(pick)], q, 0, 0.0, 0.0});
        }
    };
    for (uint32_t cycle = 0; cycle < spec.m; ++cycle) {
        single_layer();
        const char label = spec.pattern_sequence[cycle % spec.pattern_sequence.size()];
        for (const Edge& e : spec.edges)
            if (e.label == label)
                circuit.gates.push_back({GateKind::FSim, e.a, e.b, spec.theta, spec.phi});
    }
    single_layer();
    return circuit;
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const complex& a : amplitudes) s += std::norm(a);
    return s;
}

StateVector zero_state(uint32_t n) {
    if (n < 1) throw InvalidArgument("zero_state: n must be >= 1");
    if (n > kMaxSimQubits)
        throw CapacityError("zero_state: n=" + std::to_string(n) + " exceeds cap of " +
                            std::to_string(kMaxSimQubits));
    StateVector state;
    state.n = n;
    state.amplitudes.assign(uint64_t{1} << n, complex{0.0});
    state.amplitudes[0] = 1.0;
    return state;
}

void apply_circuit(StateVector& state, const Circuit& circuit) {
    if (state.n != circuit.n) throw InvalidArgument("apply_circuit: qubit count mismatch");
    for (const Gate& g : circuit.gates) apply_gate(state, g, false);
}

void apply_inverse_circuit(StateVector& state, const Circuit& circuit) {
    if (state.n != circuit.n) throw InvalidArgument("apply_inverse_circuit: qubit count mismatch");
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it)
        apply_gate(state, *it, true);
}

StateVector simulate(const Circuit& circuit) {
    StateVector state = zero_state(circuit.n);
    apply_circuit(state, circuit);
    return state;
}

uint64_t bitstring_index(uint64_t row_word, uint32_t n) {
    uint64_t idx = 0;
    for (uint32_t j = 0; j < n; ++j) idx |= ((row_word >> j) & 1u) << (n - 1 - j);
    return idx;
}

double ideal_probability(const StateVector& state, uint64_t row_word) {
    return std::norm(state.amplitudes[bitstring_index(row_word, state.n)]);
}

NoiseSpec NoiseSpec::uniform_readout(uint32_t n, double p01, double p10) {
    NoiseSpec spec;
    spec.readout_p01.assign(n, p01);
    spec.readout_p10.assign(n, p10);
    return spec;
}

void NoiseSpec::validate(uint32_t n) const {
    auto check = [](const std::vector<double>& v, uint32_t count, const char* what) {
        if (v.empty()) return;
        if (v.size() != count)
            throw InvalidArgument(std::string("NoiseSpec: ") + what + " size mismatch");
        for (double p : v)
            if (p < 0.0 || p > 0.5)
                throw InvalidArgument(std::string("NoiseSpec: ") + what +
                                      " probabilities must be in [0, 0.5]");
    };
    check(readout_p01, n, "readout_p01");
    check(readout_p10, n, "readout_p10");
    if (gate_pauli_rate < 0.0 || gate_pauli_rate > 0.5)
        throw InvalidArgument("NoiseSpec: gate_pauli_rate must be in [0, 0.5]");
}

BitMatrix sample(const StateVector& state, size_t M, uint64_t seed, const NoiseSpec& noise) {
    if (M < 1) throw InvalidArgument("sample: M must be >= 1");
    noise.validate(state.n);
    const uint64_t dim = uint64_t{1} << state.n;
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (uint64_t i = 0; i < dim; ++i) {
        acc += std::norm(state.amplitudes[i]);
        cdf[i] = acc;
    }
    cdf.back() = std::max(cdf.back(), 1.0); // guard against norm round-off

    std::mt19937_64 eng(seed);
    auto uniform = [&eng] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    std::vector<uint64_t> rows(M);
    for (auto& row : rows) {
        const double u = uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = static_cast<uint64_t>(it - cdf.begin());
        // index (qubit 0 = MSB) back to row word (qubit j = bit j)
        uint64_t word = 0;
        for (uint32_t j = 0; j < state.n; ++j)
            word |= ((idx >> (state.n - 1 - j)) & 1u) << j;
        if (noise.has_readout()) {
            for (uint32_t j = 0; j < state.n; ++j) {
                const bool bit = (word >> j) & 1u;
                const double p_flip = bit ? (noise.readout_p10.empty() ? 0.0 : noise.readout_p10[j])
                                          : (noise.readout_p01.empty() ? 0.0 : noise.readout_p01[j]);
                if (p_flip > 0.0 && uniform() < p_flip) word ^= uint64_t{1} << j;
            }
        }
        row = word;
    }
    DatasetMeta meta;
    meta.name = "sim-n" + std::to_string(state.n) + "-s" + std::to_string(seed);
    meta.declared_n = state.n;
    meta.origin = Origin::Simulator;
    return BitMatrix(std::move(rows), state.n, std::move(meta));
}

Circuit apply_gate_noise(const Circuit& circuit, double rate, uint64_t trajectory_seed) {
    if (rate < 0.0 || rate > 0.5)
        throw InvalidArgument("apply_gate_noise: rate must be in [0, 0.5]");
    if (rate == 0.0) return circuit;
    std::mt19937_64 eng(trajectory_seed);
    auto uniform = [&eng] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    static constexpr std::array<GateKind, 3> kPaulis = {GateKind::PauliX, GateKind::PauliY,
                                                        GateKind::PauliZ};
    Circuit noisy;
    noisy.n = circuit.n;
    for (const Gate& g : circuit.gates) {
        noisy.gates.push_back(g);
        const uint32_t participants = g.kind == GateKind::FSim ? 2 : 1;
        for (uint32_t p = 0; p < participants; ++p) {
            if (uniform() < rate) {
                const auto pauli = kPaulis[eng() % 3];
                noisy.gates.push_back({pauli, p == 0 ? g.q0 : g.q1, 0, 0.0, 0.0});
            }
        }
    }
    return noisy;
}

XebEstimate xeb_fidelity(const BitMatrix& samples, const StateVector& state) {
    if (samples.cols() != state.n)
        throw InvalidArgument("xeb_fidelity: qubit count mismatch between samples and state");
    const double scale = std::ldexp(1.0, static_cast<int>(state.n)); // 2^n
    const size_t M = samples.rows();
    double mean = 0.0;
    double m2 = 0.0;
    for (size_t i = 0; i < M; ++i) {
        const double p = ideal_probability(state, samples.row_word(i));
        const double delta = p - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (p - mean);
    }
    XebEstimate est;
    est.M = M;
    est.value = scale * mean - 1.0;
    if (M > 1) {
        const double stddev = std::sqrt(m2 / static_cast<double>(M - 1));
        est.std_error = scale * stddev / std::sqrt(static_cast<double>(M));
    }
    return est;
}

} // namespace qsa
