#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsa/bitcore.hpp"

namespace qsa {

/// Flat 0/1 stream fed to the randomness battery.
struct BitStream {
    std::vector<uint8_t> bits;

    size_t length() const { return bits.size(); }
};

BitStream stream_from_matrix(const BitMatrix& bm, std::optional<size_t> limit = std::nullopt);

constexpr double kNistAlpha = 0.01;

struct SubResult {
    std::string label; // excursion state, e.g. "-4" or "+1"
    double statistic = 0.0;
    double p_value = 0.0;
};

struct TestResult {
    std::string test_name;
    std::vector<double> p_values;
    std::vector<SubResult> sub_results;
    bool applicable = true;
    bool passed = false;

    static TestResult not_applicable(std::string name, std::string reason);
    void finalize(); // sets passed from p_values/sub_results vs alpha
    std::string reason; // set when not applicable
};

TestResult frequency_monobit(const BitStream& s);
TestResult block_frequency(const BitStream& s, size_t block_len = 128);
TestResult runs_test(const BitStream& s);
TestResult longest_run_of_ones(const BitStream& s);
TestResult binary_matrix_rank(const BitStream& s);
TestResult dft_spectral(const BitStream& s);
TestResult non_overlapping_template(const BitStream& s, size_t m = 9);
TestResult overlapping_template(const BitStream& s, size_t m = 9);
TestResult maurer_universal(const BitStream& s);
TestResult linear_complexity(const BitStream& s, size_t block_len = 500);
TestResult serial(const BitStream& s, size_t m = 16); // two p-values
TestResult approximate_entropy(const BitStream& s, size_t m = 10);
enum class CusumMode { Forward, Reverse };
TestResult cumulative_sums(const BitStream& s, CusumMode mode);
TestResult random_excursions(const BitStream& s);         // states -4..+4
TestResult random_excursions_variant(const BitStream& s); // states -9..+9

enum class Verdict { Random, Nonrandom };

struct BatteryReport {
    std::vector<TestResult> results;
    Verdict verdict = Verdict::Nonrandom;
    size_t stream_length = 0;
};

/// Runs the full 15-test battery with default parameters.
/// Verdict is Random iff every applicable test passed at alpha = 0.01.
BatteryReport run_battery(const BitStream& s);

std::string format_battery_report(const BatteryReport& report);

} // namespace qsa
