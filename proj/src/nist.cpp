#include "qsa/nist.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include <fftw3.h>
#include <boost/math/special_functions/gamma.hpp>

namespace qsa {

namespace {

double igamc(double a, double x) { return boost::math::gamma_q(a, x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

TestResult with_p(std::string name, std::initializer_list<double> ps, bool applicable = true) {
    TestResult r;
    r.test_name = std::move(name);
    r.p_values = ps;
    r.applicable = applicable;
    if (!applicable) r.reason = "below the recommended minimum stream length";
    r.finalize();
    return r;
}

} // namespace

TestResult TestResult::not_applicable(std::string name, std::string why) {
    TestResult r;
    r.test_name = std::move(name);
    r.applicable = false;
    r.passed = false;
    r.reason = std::move(why);
    return r;
}

void TestResult::finalize() {
    passed = applicable && !p_values.empty();
    for (double p : p_values)
        if (!(p >= kNistAlpha)) passed = false;
}

BitStream stream_from_matrix(const BitMatrix& bm, std::optional<size_t> limit) {
    const size_t total = bm.rows() * bm.cols();
    const size_t len = limit ? std::min(*limit, total) : total;
    BitStream s;
    s.bits.resize(len);
    size_t idx = 0;
    for (size_t i = 0; i < bm.rows() && idx < len; ++i) {
        const uint64_t w = bm.row_word(i);
        for (uint32_t j = 0; j < bm.cols() && idx < len; ++j)
            s.bits[idx++] = static_cast<uint8_t>((w >> j) & 1u);
    }
    return s;
}

TestResult frequency_monobit(const BitStream& s) {
    const auto n = static_cast<double>(s.length());
    if (s.length() == 0) return TestResult::not_applicable("Frequency (Monobit)", "empty stream");
    int64_t sum = 0;
    for (uint8_t b : s.bits) sum += 2 * static_cast<int64_t>(b) - 1;
    const double p = std::erfc(std::abs(static_cast<double>(sum)) / std::sqrt(2.0 * n));
    return with_p("Frequency (Monobit)", {p}, s.length() >= 100);
}

TestResult block_frequency(const BitStream& s, size_t block_len) {
    const char* name = "Block Frequency";
    const size_t N = s.length() / block_len;
    if (N == 0) return TestResult::not_applicable(name, "stream shorter than one block");
    double chi2 = 0.0;
    for (size_t b = 0; b < N; ++b) {
        size_t ones = 0;
        for (size_t i = 0; i < block_len; ++i) ones += s.bits[b * block_len + i];
        const double pi = static_cast<double>(ones) / static_cast<double>(block_len);
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * static_cast<double>(block_len);
    const double p = igamc(static_cast<double>(N) / 2.0, chi2 / 2.0);
    return with_p(name, {p}, s.length() >= 100);
}

TestResult runs_test(const BitStream& s) {
    const char* name = "Runs";
    const size_t n = s.length();
    if (n < 2) return TestResult::not_applicable(name, "stream too short");
    size_t ones = 0;
    for (uint8_t b : s.bits) ones += b;
    const double pi = static_cast<double>(ones) / static_cast<double>(n);
    const double tau = 2.0 / std::sqrt(static_cast<double>(n));
    if (std::abs(pi - 0.5) >= tau) return with_p(name, {0.0}, n >= 100);
    size_t v = 1;
    for (size_t i = 1; i < n; ++i)
        if (s.bits[i] != s.bits[i - 1]) ++v;
    const double nn = static_cast<double>(n);
    const double num = std::abs(static_cast<double>(v) - 2.0 * nn * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * nn) * pi * (1.0 - pi);
    return with_p(name, {std::erfc(num / den)}, n >= 100);
}

TestResult longest_run_of_ones(const BitStream& s) {
    const char* name = "Longest Run of Ones";
    const size_t n = s.length();
    size_t M, K;
    std::vector<double> pi;
    std::vector<size_t> classes; // upper bounds, last is open
    if (n < 128) return TestResult::not_applicable(name, "need at least 128 bits");
    if (n < 6272) {
        M = 8;
        K = 3;
        classes = {1, 2, 3};
        pi = {0.2148, 0.3672, 0.2305, 0.1875};
    } else if (n < 750000) {
        M = 128;
        K = 5;
        classes = {4, 5, 6, 7, 8};
        pi = {0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124};
    } else {
        M = 10000;
        K = 6;
        classes = {10, 11, 12, 13, 14, 15};
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    }
    const size_t N = n / M;
    std::vector<size_t> nu(K + 1, 0);
    for (size_t b = 0; b < N; ++b) {
        size_t longest = 0, run = 0;
        for (size_t i = 0; i < M; ++i) {
            run = s.bits[b * M + i] ? run + 1 : 0;
            longest = std::max(longest, run);
        }
        size_t cls = K;
        for (size_t c = 0; c < K; ++c)
            if (longest <= classes[c]) {
                cls = c;
                break;
            }
        nu[cls]++;
    }
    double chi2 = 0.0;
    for (size_t c = 0; c <= K; ++c) {
        const double expected = static_cast<double>(N) * pi[c];
        const double d = static_cast<double>(nu[c]) - expected;
        chi2 += d * d / expected;
    }
    const double p = igamc(static_cast<double>(K) / 2.0, chi2 / 2.0);
    return with_p(name, {p});
}

namespace {

size_t rank_gf2_32(std::array<uint32_t, 32> rows) {
    size_t rank = 0;
    for (int col = 31; col >= 0 && rank < 32; --col) {
        const uint32_t mask = 1u << col;
        size_t pivot = rank;
        while (pivot < 32 && !(rows[pivot] & mask)) ++pivot;
        if (pivot == 32) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < 32; ++r)
            if (r != rank && (rows[r] & mask)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

} // namespace

TestResult binary_matrix_rank(const BitStream& s) {
    const char* name = "Binary Matrix Rank";
    constexpr size_t kDim = 32;
    constexpr size_t kBitsPerMatrix = kDim * kDim;
    const size_t N = s.length() / kBitsPerMatrix;
    if (N < 38) return TestResult::not_applicable(name, "need at least 38 matrices (38912 bits)");
    size_t full = 0, full_minus1 = 0;
    for (size_t mi = 0; mi < N; ++mi) {
        std::array<uint32_t, 32> rows{};
        const size_t base = mi * kBitsPerMatrix;
        for (size_t r = 0; r < kDim; ++r) {
            uint32_t w = 0;
            for (size_t c = 0; c < kDim; ++c)
                w |= static_cast<uint32_t>(s.bits[base + r * kDim + c]) << (kDim - 1 - c);
            rows[r] = w;
        }
        const size_t rank = rank_gf2_32(rows);
        if (rank == kDim)
            ++full;
        else if (rank == kDim - 1)
            ++full_minus1;
    }
    const double nn = static_cast<double>(N);
    const double rest = nn - static_cast<double>(full) - static_cast<double>(full_minus1);
    // Limiting rank probabilities for 32x32 GF(2) matrices (SP 800-22 rev 1a).
    const double p_full = 0.2888, p_m1 = 0.5776, p_rest = 0.1336;
    double chi2 = 0.0;
    chi2 += std::pow(static_cast<double>(full) - p_full * nn, 2) / (p_full * nn);
    chi2 += std::pow(static_cast<double>(full_minus1) - p_m1 * nn, 2) / (p_m1 * nn);
    chi2 += std::pow(rest - p_rest * nn, 2) / (p_rest * nn);
    return with_p(name, {std::exp(-chi2 / 2.0)});
}

TestResult dft_spectral(const BitStream& s) {
    const char* name = "DFT (Spectral)";
    const size_t n = s.length();
    if (n < 1000) return TestResult::not_applicable(name, "need at least 1000 bits");
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = 2.0 * s.bits[i] - 1.0;
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const double threshold = std::sqrt(std::log(1.0 / 0.05) * static_cast<double>(n));
    size_t below = 0;
    for (size_t i = 0; i < n / 2; ++i)
        if (std::abs(out[i]) < threshold) ++below;
    const double n0 = 0.95 * static_cast<double>(n) / 2.0;
    const double d = (static_cast<double>(below) - n0) /
                     std::sqrt(static_cast<double>(n) * 0.95 * 0.05 / 4.0);
    return with_p(name, {std::erfc(std::abs(d) / std::numbers::sqrt2)});
}

TestResult non_overlapping_template(const BitStream& s, size_t m) {
    const char* name = "Non-overlapping Template";
    const size_t n = s.length();
    constexpr size_t N = 8;
    const size_t M = n / N;
    if (M < m + 1) return TestResult::not_applicable(name, "blocks shorter than the template");
    // Aperiodic template 0^(m-1) 1.
    std::vector<uint8_t> tmpl(m, 0);
    tmpl.back() = 1;
    const double mm = static_cast<double>(M);
    const double two_m = std::ldexp(1.0, static_cast<int>(m));
    const double mu = (mm - static_cast<double>(m) + 1.0) / two_m;
    const double sigma2 =
        mm * (1.0 / two_m - (2.0 * static_cast<double>(m) - 1.0) / (two_m * two_m));
    double chi2 = 0.0;
    for (size_t b = 0; b < N; ++b) {
        size_t w = 0;
        size_t i = 0;
        while (i + m <= M) {
            if (std::equal(tmpl.begin(), tmpl.end(), s.bits.begin() + b * M + i)) {
                ++w;
                i += m;
            } else {
                ++i;
            }
        }
        const double d = static_cast<double>(w) - mu;
        chi2 += d * d / sigma2;
    }
    const double p = igamc(static_cast<double>(N) / 2.0, chi2 / 2.0);
    return with_p(name, {p}, n >= 100);
}

TestResult overlapping_template(const BitStream& s, size_t m) {
    const char* name = "Overlapping Template";
    const size_t n = s.length();
    constexpr size_t M = 1032;
    constexpr size_t K = 5;
    const size_t N = n / M;
    if (n < 1000000) return TestResult::not_applicable(name, "need at least 10^6 bits");
    // Class probabilities for lambda = 2 (m = 9, M = 1032), rev 1a values.
    const std::array<double, K + 1> pi = {0.364091, 0.185659, 0.139381,
                                          0.100571, 0.070432, 0.139865};
    std::array<size_t, K + 1> nu{};
    for (size_t b = 0; b < N; ++b) {
        size_t count = 0;
        for (size_t i = 0; i + m <= M; ++i) {
            bool match = true;
            for (size_t j = 0; j < m; ++j)
                if (!s.bits[b * M + i + j]) {
                    match = false;
                    break;
                }
            if (match) ++count;
        }
        nu[std::min(count, K)]++;
    }
    double chi2 = 0.0;
    for (size_t c = 0; c <= K; ++c) {
        const double expected = static_cast<double>(N) * pi[c];
        const double d = static_cast<double>(nu[c]) - expected;
        chi2 += d * d / expected;
    }
    return with_p(name, {igamc(static_cast<double>(K) / 2.0, chi2 / 2.0)});
}

TestResult maurer_universal(const BitStream& s) {
    const char* name = "Maurer's Universal";
    const size_t n = s.length();
    if (n < 387840) return TestResult::not_applicable(name, "need at least 387840 bits");
    size_t L = 6;
    if (n >= 1059061760)
        L = 16;
    else if (n >= 496435200)
        L = 15;
    else if (n >= 231669760)
        L = 14;
    else if (n >= 107560960)
        L = 13;
    else if (n >= 49643520)
        L = 12;
    else if (n >= 22753280)
        L = 11;
    else if (n >= 10342400)
        L = 10;
    else if (n >= 4654080)
        L = 9;
    else if (n >= 2068480)
        L = 8;
    else if (n >= 904960)
        L = 7;
    // Expected value / variance tables indexed by L (SP 800-22 rev 1a, table 6-?).
    static constexpr std::array<double, 17> kExpected = {
        0, 0, 0, 0, 0, 0, 5.2177052, 6.1962507, 7.1836656, 8.1764248, 9.1723243,
        10.170032, 11.168765, 12.168070, 13.167693, 14.167488, 15.167379};
    static constexpr std::array<double, 17> kVariance = {
        0, 0, 0, 0, 0, 0, 2.954, 3.125, 3.238, 3.311, 3.356,
        3.384, 3.401, 3.410, 3.416, 3.419, 3.421};
    const size_t Q = 10u * (size_t{1} << L);
    const size_t blocks = n / L;
    const size_t K = blocks - Q;
    std::vector<size_t> last(size_t{1} << L, 0);
    auto block_value = [&](size_t b) {
        size_t v = 0;
        for (size_t j = 0; j < L; ++j) v = (v << 1) | s.bits[b * L + j];
        return v;
    };
    for (size_t b = 0; b < Q; ++b) last[block_value(b)] = b + 1;
    double sum = 0.0;
    for (size_t b = Q; b < blocks; ++b) {
        const size_t v = block_value(b);
        sum += std::log2(static_cast<double>(b + 1 - last[v]));
        last[v] = b + 1;
    }
    const double fn = sum / static_cast<double>(K);
    const double c = 0.7 - 0.8 / static_cast<double>(L) +
                     (4.0 + 32.0 / static_cast<double>(L)) *
                         std::pow(static_cast<double>(K), -3.0 / static_cast<double>(L)) / 15.0;
    const double sigma = c * std::sqrt(kVariance[L] / static_cast<double>(K));
    const double p = std::erfc(std::abs(fn - kExpected[L]) / (std::numbers::sqrt2 * sigma));
    return with_p(name, {p});
}

namespace {

// Berlekamp-Massey over GF(2); returns the linear complexity of the block.
size_t berlekamp_massey(const uint8_t* bits, size_t len) {
    const size_t words = len / 64 + 1;
    std::vector<uint64_t> c(words, 0), b(words, 0), t(words);
    c[0] = 1;
    b[0] = 1;
    size_t L = 0;
    size_t m_lag = 1;
    for (size_t i = 0; i < len; ++i) {
        // d = s_i + sum_{j=1..L} c_j s_{i-j}
        uint8_t d = bits[i];
        for (size_t j = 1; j <= L; ++j)
            d ^= static_cast<uint8_t>((c[j / 64] >> (j % 64)) & 1u) & bits[i - j];
        if (d) {
            t = c;
            // c ^= b << m_lag
            const size_t word_shift = m_lag / 64;
            const size_t bit_shift = m_lag % 64;
            for (size_t w = words; w-- > word_shift;) {
                uint64_t v = b[w - word_shift] << bit_shift;
                if (bit_shift && w > word_shift) v |= b[w - word_shift - 1] >> (64 - bit_shift);
                c[w] ^= v;
            }
            if (2 * L <= i) {
                L = i + 1 - L;
                b = t;
                m_lag = 1;
            } else {
                ++m_lag;
            }
        } else {
            ++m_lag;
        }
    }
    return L;
}

} // namespace

TestResult linear_complexity(const BitStream& s, size_t block_len) {
    const char* name = "Linear Complexity";
    const size_t n = s.length();
    const size_t N = n / block_len;
    if (N < 200)
        return TestResult::not_applicable(name, "need at least 200 blocks of " +
                                                    std::to_string(block_len) + " bits");
    const double M = static_cast<double>(block_len);
    const double sign_m = (block_len % 2 == 0) ? 1.0 : -1.0;
    const double mu = M / 2.0 + (9.0 - sign_m) / 36.0 - (M / 3.0 + 2.0 / 9.0) / std::pow(2.0, M);
    static constexpr std::array<double, 7> pi = {0.010417, 0.03125, 0.125, 0.5,
                                                 0.25, 0.0625, 0.020833};
    std::array<size_t, 7> nu{};
    for (size_t b = 0; b < N; ++b) {
        const size_t L = berlekamp_massey(s.bits.data() + b * block_len, block_len);
        const double T = sign_m * (static_cast<double>(L) - mu) + 2.0 / 9.0;
        size_t cls;
        if (T <= -2.5)
            cls = 0;
        else if (T <= -1.5)
            cls = 1;
        else if (T <= -0.5)
            cls = 2;
        else if (T <= 0.5)
            cls = 3;
        else if (T <= 1.5)
            cls = 4;
        else if (T <= 2.5)
            cls = 5;
        else
            cls = 6;
        nu[cls]++;
    }
    double chi2 = 0.0;
    for (size_t c = 0; c < 7; ++c) {
        const double expected = static_cast<double>(N) * pi[c];
        const double d = static_cast<double>(nu[c]) - expected;
        chi2 += d * d / expected;
    }
    return with_p(name, {igamc(3.0, chi2 / 2.0)});
}

namespace {

// psi^2_m over circular m-bit windows; psi^2_0 = psi^2_{-1} = 0.
double psi_squared(const BitStream& s, size_t m) {
    if (m == 0) return 0.0;
    const size_t n = s.length();
    std::vector<uint32_t> counts(size_t{1} << m, 0);
    const size_t mask = (size_t{1} << m) - 1;
    size_t window = 0;
    for (size_t i = 0; i < m - 1; ++i) window = (window << 1) | s.bits[i];
    for (size_t i = 0; i < n; ++i) {
        window = ((window << 1) | s.bits[(i + m - 1) % n]) & mask;
        counts[window]++;
    }
    double sum = 0.0;
    for (uint32_t c : counts) sum += static_cast<double>(c) * c;
    return sum * std::ldexp(1.0, static_cast<int>(m)) / static_cast<double>(n) -
           static_cast<double>(n);
}

} // namespace

TestResult serial(const BitStream& s, size_t m) {
    const char* name = "Serial";
    const size_t n = s.length();
    if (m < 1 || n < m + 1)
        return TestResult::not_applicable(name, "stream too short for m=" + std::to_string(m));
    const double psi_m = psi_squared(s, m);
    const double psi_m1 = m >= 1 ? psi_squared(s, m - 1) : 0.0;
    const double psi_m2 = m >= 2 ? psi_squared(s, m - 2) : 0.0;
    const double del1 = psi_m - psi_m1;
    const double del2 = psi_m - 2.0 * psi_m1 + psi_m2;
    const double p1 = igamc(std::ldexp(1.0, static_cast<int>(m) - 2), del1 / 2.0);
    const double p2 = igamc(std::ldexp(1.0, static_cast<int>(m) - 3), del2 / 2.0);
    return with_p(name, {p1, p2}, n >= (size_t{1} << (m + 2)));
}

TestResult approximate_entropy(const BitStream& s, size_t m) {
    const char* name = "Approximate Entropy";
    const size_t n = s.length();
    if (n < m + 2)
        return TestResult::not_applicable(name, "stream too short for m=" + std::to_string(m));
    auto phi = [&](size_t order) {
        std::vector<uint32_t> counts(size_t{1} << order, 0);
        const size_t mask = (size_t{1} << order) - 1;
        size_t window = 0;
        for (size_t i = 0; i < order - 1; ++i) window = (window << 1) | s.bits[i];
        for (size_t i = 0; i < n; ++i) {
            window = ((window << 1) | s.bits[(i + order - 1) % n]) & mask;
            counts[window]++;
        }
        double sum = 0.0;
        for (uint32_t c : counts)
            if (c) {
                const double f = static_cast<double>(c) / static_cast<double>(n);
                sum += f * std::log(f);
            }
        return sum;
    };
    const double apen = phi(m) - phi(m + 1);
    const double chi2 = 2.0 * static_cast<double>(n) * (std::numbers::ln2 - apen);
    const double p = igamc(std::ldexp(1.0, static_cast<int>(m) - 1), chi2 / 2.0);
    return with_p(name, {p}, n >= (size_t{1} << (m + 5)));
}

TestResult cumulative_sums(const BitStream& s, CusumMode mode) {
    const std::string name =
        mode == CusumMode::Forward ? "Cumulative Sums (Forward)" : "Cumulative Sums (Reverse)";
    const size_t n = s.length();
    if (n < 2) return TestResult::not_applicable(name, "stream too short");
    int64_t sum = 0;
    int64_t z = 0;
    for (size_t idx = 0; idx < n; ++idx) {
        const size_t i = mode == CusumMode::Forward ? idx : n - 1 - idx;
        sum += 2 * static_cast<int64_t>(s.bits[i]) - 1;
        z = std::max(z, std::abs(sum));
    }
    if (z == 0) return with_p(name, {0.0}, n >= 100);
    const double zn = static_cast<double>(z);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double ratio = static_cast<double>(n) / zn;
    double p = 1.0;
    {
        const auto k_lo = static_cast<int64_t>(std::floor((-ratio + 1.0) / 4.0));
        const auto k_hi = static_cast<int64_t>(std::floor((ratio - 1.0) / 4.0));
        for (int64_t k = k_lo; k <= k_hi; ++k) {
            const double kk = static_cast<double>(k);
            p -= normal_cdf((4.0 * kk + 1.0) * zn / sqrt_n) -
                 normal_cdf((4.0 * kk - 1.0) * zn / sqrt_n);
        }
    }
    {
        const auto k_lo = static_cast<int64_t>(std::floor((-ratio - 3.0) / 4.0));
        const auto k_hi = static_cast<int64_t>(std::floor((ratio - 1.0) / 4.0));
        for (int64_t k = k_lo; k <= k_hi; ++k) {
            const double kk = static_cast<double>(k);
            p += normal_cdf((4.0 * kk + 3.0) * zn / sqrt_n) -
                 normal_cdf((4.0 * kk + 1.0) * zn / sqrt_n);
        }
    }
    p = std::clamp(p, 0.0, 1.0);
    return with_p(name, {p}, n >= 100);
}

namespace {

struct Walk {
    std::vector<int64_t> partial; // S_1 .. S_n
    size_t cycles = 0;            // zero crossings incl. final padded zero
};

Walk build_walk(const BitStream& s) {
    Walk w;
    w.partial.resize(s.length());
    int64_t sum = 0;
    for (size_t i = 0; i < s.length(); ++i) {
        sum += 2 * static_cast<int64_t>(s.bits[i]) - 1;
        w.partial[i] = sum;
        if (sum == 0) w.cycles++;
    }
    if (sum != 0) w.cycles++; // walk is closed with a final zero
    return w;
}

bool excursions_applicable(size_t cycles, size_t n) {
    const double min_cycles = std::max(0.005 * std::sqrt(static_cast<double>(n)), 500.0);
    return static_cast<double>(cycles) >= min_cycles;
}

} // namespace

TestResult random_excursions(const BitStream& s) {
    const char* name = "Random Excursions";
    if (s.length() < 100) return TestResult::not_applicable(name, "stream too short");
    const Walk walk = build_walk(s);
    const auto J = static_cast<double>(walk.cycles);
    if (!excursions_applicable(walk.cycles, s.length()))
        return TestResult::not_applicable(name, "too few cycles (J=" +
                                                    std::to_string(walk.cycles) + ")");
    static constexpr std::array<int, 8> states = {-4, -3, -2, -1, 1, 2, 3, 4};
    // nu[state][k]: cycles visiting the state exactly k times (k = 5 means >= 5)
    std::array<std::array<size_t, 6>, 8> nu{};
    std::array<size_t, 8> visits_in_cycle{};
    auto close_cycle = [&] {
        for (size_t si = 0; si < 8; ++si) {
            nu[si][std::min<size_t>(visits_in_cycle[si], 5)]++;
            visits_in_cycle[si] = 0;
        }
    };
    for (int64_t v : walk.partial) {
        if (v == 0) {
            close_cycle();
        } else if (v >= -4 && v <= 4) {
            visits_in_cycle[v < 0 ? static_cast<size_t>(v + 4) : static_cast<size_t>(v + 3)]++;
        }
    }
    if (walk.partial.back() != 0) close_cycle();

    TestResult result;
    result.test_name = name;
    for (size_t si = 0; si < 8; ++si) {
        const double x = std::abs(states[si]);
        std::array<double, 6> pi;
        pi[0] = 1.0 - 1.0 / (2.0 * x);
        for (size_t k = 1; k <= 4; ++k)
            pi[k] = std::pow(pi[0], static_cast<double>(k - 1)) / (4.0 * x * x);
        pi[5] = std::pow(pi[0], 4.0) / (2.0 * x);
        double chi2 = 0.0;
        for (size_t k = 0; k < 6; ++k) {
            const double expected = J * pi[k];
            const double d = static_cast<double>(nu[si][k]) - expected;
            chi2 += d * d / expected;
        }
        const double p = igamc(2.5, chi2 / 2.0);
        result.sub_results.push_back(
            {(states[si] > 0 ? "+" : "") + std::to_string(states[si]), chi2, p});
        result.p_values.push_back(p);
    }
    result.finalize();
    return result;
}

TestResult random_excursions_variant(const BitStream& s) {
    const char* name = "Random Excursions Variant";
    if (s.length() < 100) return TestResult::not_applicable(name, "stream too short");
    const Walk walk = build_walk(s);
    const auto J = static_cast<double>(walk.cycles);
    if (!excursions_applicable(walk.cycles, s.length()))
        return TestResult::not_applicable(name, "too few cycles (J=" +
                                                    std::to_string(walk.cycles) + ")");
    std::array<size_t, 19> visits{}; // index = state + 9
    for (int64_t v : walk.partial)
        if (v >= -9 && v <= 9) visits[static_cast<size_t>(v + 9)]++;
    TestResult result;
    result.test_name = name;
    for (int state = -9; state <= 9; ++state) {
        if (state == 0) continue;
        const double xi = static_cast<double>(visits[static_cast<size_t>(state + 9)]);
        const double x = std::abs(state);
        const double p = std::erfc(std::abs(xi - J) / std::sqrt(2.0 * J * (4.0 * x - 2.0)));
        result.sub_results.push_back({(state > 0 ? "+" : "") + std::to_string(state), xi, p});
        result.p_values.push_back(p);
    }
    result.finalize();
    return result;
}

BatteryReport run_battery(const BitStream& s) {
    BatteryReport report;
    report.stream_length = s.length();
    report.results.push_back(frequency_monobit(s));
    report.results.push_back(block_frequency(s));
    report.results.push_back(runs_test(s));
    report.results.push_back(longest_run_of_ones(s));
    report.results.push_back(binary_matrix_rank(s));
    report.results.push_back(dft_spectral(s));
    report.results.push_back(non_overlapping_template(s));
    report.results.push_back(overlapping_template(s));
    report.results.push_back(maurer_universal(s));
    report.results.push_back(linear_complexity(s));
    report.results.push_back(serial(s));
    report.results.push_back(approximate_entropy(s));
    // Both cusum modes under one roster entry so the battery stays at 15 tests.
    {
        TestResult fwd = cumulative_sums(s, CusumMode::Forward);
        const TestResult rev = cumulative_sums(s, CusumMode::Reverse);
        TestResult combined;
        combined.test_name = "Cumulative Sums";
        combined.applicable = fwd.applicable && rev.applicable;
        combined.p_values = fwd.p_values;
        combined.p_values.insert(combined.p_values.end(), rev.p_values.begin(),
                                 rev.p_values.end());
        if (!fwd.p_values.empty())
            combined.sub_results.push_back({"forward", 0.0, fwd.p_values[0]});
        if (!rev.p_values.empty())
            combined.sub_results.push_back({"reverse", 0.0, rev.p_values[0]});
        combined.finalize();
        report.results.push_back(std::move(combined));
    }
    report.results.push_back(random_excursions(s));
    report.results.push_back(random_excursions_variant(s));

    bool all_passed = true;
    for (const auto& r : report.results)
        if (r.applicable && !r.passed) all_passed = false;
    report.verdict = all_passed ? Verdict::Random : Verdict::Nonrandom;
    return report;
}

std::string format_battery_report(const BatteryReport& report) {
    std::ostringstream os;
    os << "Stream length: " << report.stream_length << "\n\n";
    os << "Type of Test                                        P-Value                 Conclusion\n";
    auto line = [&](const std::string& label, const std::string& p, const std::string& verdict) {
        os << label;
        if (label.size() < 52) os << std::string(52 - label.size(), ' ');
        os << p;
        if (p.size() < 24) os << std::string(24 - p.size(), ' ');
        os << verdict << '\n';
    };
    int idx = 0;
    for (const auto& r : report.results) {
        ++idx;
        const std::string label =
            (idx < 10 ? "0" : "") + std::to_string(idx) + ". " + r.test_name;
        if (!r.applicable) {
            line(label, "-", "Not applicable (" + r.reason + ")");
            continue;
        }
        if (r.sub_results.empty()) {
            std::ostringstream ps;
            for (size_t i = 0; i < r.p_values.size(); ++i)
                ps << (i ? " " : "") << r.p_values[i];
            line(label, ps.str(), r.passed ? "Random" : "Nonrandom");
        } else {
            line(label + ":", "", "");
            for (const auto& sub : r.sub_results) {
                std::ostringstream ps;
                ps << sub.p_value;
                line("                " + sub.label, ps.str(),
                     sub.p_value >= kNistAlpha ? "Random" : "Nonrandom");
            }
        }
    }
    os << "\nVerdict: " << (report.verdict == Verdict::Random ? "Random" : "Nonrandom") << '\n';
    return os.str();
}

} // namespace qsa
