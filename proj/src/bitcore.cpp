#include "qsa/bitcore.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <random>

namespace qsa {

namespace {

constexpr char kMagic[4] = {'Q', 'S', 'B', 'M'};
constexpr uint16_t kVersion = 1;

void put_u16(std::ostream& os, uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    os.write(b, 2);
}

void put_u64(std::ostream& os, uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

uint16_t get_u16(std::istream& is) {
    unsigned char b[2];
    is.read(reinterpret_cast<char*>(b), 2);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

BitMatrix load_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    std::vector<uint64_t> rows;
    std::string line;
    uint32_t n = 0;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (n == 0) {
            if (line.size() > 64)
                throw FormatError(path.string() + ": line " + std::to_string(lineno) +
                                  " has more than 64 bits");
            n = static_cast<uint32_t>(line.size());
        } else if (line.size() != n) {
            throw FormatError(path.string() + ": ragged line " + std::to_string(lineno));
        }
        uint64_t word = 0;
        for (uint32_t j = 0; j < n; ++j) {
            char c = line[j];
            if (c == '1')
                word |= uint64_t{1} << j; // leftmost char = qubit 0
            else if (c != '0')
                throw FormatError(path.string() + ": illegal character at line " +
                                  std::to_string(lineno));
        }
        rows.push_back(word);
    }
    if (rows.empty()) throw FormatError(path.string() + ": empty input");
    DatasetMeta meta;
    meta.name = path.stem().string();
    meta.declared_n = n;
    return BitMatrix(std::move(rows), n, std::move(meta));
}

BitMatrix load_packed(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || !std::equal(magic, magic + 4, kMagic))
        throw FormatError(path.string() + ": bad magic");
    uint16_t version = get_u16(in);
    if (version != kVersion)
        throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
    uint16_t n = get_u16(in);
    uint64_t M = get_u64(in);
    if (!in || n < 1 || n > 64 || M < 1) throw FormatError(path.string() + ": bad header");
    const size_t bytes_per_row = (n + 7) / 8;
    std::vector<uint64_t> rows(M);
    std::vector<char> buf(bytes_per_row);
    for (uint64_t i = 0; i < M; ++i) {
        in.read(buf.data(), static_cast<std::streamsize>(bytes_per_row));
        if (!in) throw FormatError(path.string() + ": truncated at row " + std::to_string(i));
        uint64_t word = 0;
        for (size_t b = 0; b < bytes_per_row; ++b)
            word |= static_cast<uint64_t>(static_cast<unsigned char>(buf[b])) << (8 * b);
        rows[i] = word;
    }
    DatasetMeta meta;
    meta.name = path.stem().string();
    meta.declared_n = n;
    return BitMatrix(std::move(rows), n, std::move(meta));
}

} // namespace

std::string origin_name(Origin o) {
    switch (o) {
    case Origin::QuantumDevice: return "quantum-device";
    case Origin::Simulator: return "simulator";
    case Origin::ClassicalUniform: return "classical-uniform";
    }
    return "classical-uniform";
}

Origin origin_from_name(const std::string& s) {
    if (s == "quantum-device") return Origin::QuantumDevice;
    if (s == "simulator") return Origin::Simulator;
    if (s == "classical-uniform") return Origin::ClassicalUniform;
    throw InvalidArgument("unknown origin tag: " + s);
}

BitMatrix::BitMatrix(std::vector<uint64_t> rows, uint32_t cols, DatasetMeta meta)
    : rows_(std::move(rows)), cols_(cols), meta_(std::move(meta)) {
    if (cols_ < 1 || cols_ > 64) throw InvalidArgument("BitMatrix: cols must be in [1,64]");
    if (rows_.empty()) throw InvalidArgument("BitMatrix: at least one row required");
    const uint64_t mask = col_mask();
    for (auto& w : rows_) w &= mask;
}

BitMatrix load_bitstrings(const std::filesystem::path& path, FileFormat format) {
    return format == FileFormat::TextLines ? load_text(path) : load_packed(path);
}

void save_bitstrings(const BitMatrix& bm, const std::filesystem::path& path, FileFormat format) {
    if (format == FileFormat::TextLines) {
        std::ofstream out(path);
        if (!out) throw FormatError("cannot write " + path.string());
        std::string line(bm.cols(), '0');
        for (size_t i = 0; i < bm.rows(); ++i) {
            const uint64_t w = bm.row_word(i);
            for (uint32_t j = 0; j < bm.cols(); ++j) line[j] = ((w >> j) & 1u) ? '1' : '0';
            out << line << '\n';
        }
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw FormatError("cannot write " + path.string());
        out.write(kMagic, 4);
        put_u16(out, kVersion);
        put_u16(out, static_cast<uint16_t>(bm.cols()));
        put_u64(out, bm.rows());
        const size_t bytes_per_row = (bm.cols() + 7) / 8;
        std::vector<char> buf(bytes_per_row);
        for (size_t i = 0; i < bm.rows(); ++i) {
            const uint64_t w = bm.row_word(i);
            for (size_t b = 0; b < bytes_per_row; ++b)
                buf[b] = static_cast<char>((w >> (8 * b)) & 0xff);
            out.write(buf.data(), static_cast<std::streamsize>(bytes_per_row));
        }
    }
}

BitMatrix generate_uniform(uint32_t n, size_t M, uint64_t seed) {
    if (n < 1 || n > 64) throw InvalidArgument("generate_uniform: n must be in [1,64]");
    if (M < 1) throw InvalidArgument("generate_uniform: M must be >= 1");
    std::mt19937_64 eng(seed);
    const uint64_t mask = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
    std::vector<uint64_t> rows(M);
    for (auto& w : rows) w = eng() & mask;
    DatasetMeta meta;
    meta.name = "uniform-n" + std::to_string(n) + "-s" + std::to_string(seed);
    meta.declared_n = n;
    meta.origin = Origin::ClassicalUniform;
    return BitMatrix(std::move(rows), n, std::move(meta));
}

BitMatrix generate_biased(uint32_t n, size_t M, double p1, uint64_t seed) {
    if (n < 1 || n > 64) throw InvalidArgument("generate_biased: n must be in [1,64]");
    if (M < 1) throw InvalidArgument("generate_biased: M must be >= 1");
    if (p1 < 0.0 || p1 > 1.0) throw InvalidArgument("generate_biased: p1 must be in [0,1]");
    std::mt19937_64 eng(seed);
    std::vector<uint64_t> rows(M);
    for (auto& w : rows) {
        uint64_t word = 0;
        for (uint32_t j = 0; j < n; ++j) {
            const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
            if (u < p1) word |= uint64_t{1} << j;
        }
        w = word;
    }
    DatasetMeta meta;
    meta.name = "biased-n" + std::to_string(n) + "-s" + std::to_string(seed);
    meta.declared_n = n;
    meta.origin = Origin::ClassicalUniform;
    return BitMatrix(std::move(rows), n, std::move(meta));
}

double ones_probability(const BitMatrix& bm) {
    uint64_t ones = 0;
    for (size_t i = 0; i < bm.rows(); ++i) ones += std::popcount(bm.row_word(i));
    return static_cast<double>(ones) / (static_cast<double>(bm.rows()) * bm.cols());
}

std::vector<double> column_means(const BitMatrix& bm) {
    std::vector<uint64_t> counts(bm.cols(), 0);
    for (size_t i = 0; i < bm.rows(); ++i) {
        uint64_t w = bm.row_word(i);
        while (w) {
            counts[std::countr_zero(w)]++;
            w &= w - 1;
        }
    }
    std::vector<double> means(bm.cols());
    for (uint32_t j = 0; j < bm.cols(); ++j)
        means[j] = static_cast<double>(counts[j]) / static_cast<double>(bm.rows());
    return means;
}

Heatmap heatmap(const BitMatrix& bm) {
    const uint32_t n = bm.cols();
    if (bm.rows() < n)
        throw InsufficientRowsError("heatmap: need at least n rows, have " +
                                    std::to_string(bm.rows()));
    const size_t blocks = bm.rows() / n;
    std::vector<uint64_t> counts(static_cast<size_t>(n) * n, 0);
    for (size_t b = 0; b < blocks; ++b) {
        for (uint32_t r = 0; r < n; ++r) {
            uint64_t w = bm.row_word(b * n + r);
            const size_t base = static_cast<size_t>(r) * n;
            while (w) {
                counts[base + std::countr_zero(w)]++;
                w &= w - 1;
            }
        }
    }
    Heatmap hm;
    hm.n = n;
    hm.blocks_used = blocks;
    hm.grid.resize(counts.size());
    for (size_t i = 0; i < counts.size(); ++i)
        hm.grid[i] = static_cast<double>(counts[i]) / static_cast<double>(blocks);
    hm.p1 = ones_probability(bm);
    return hm;
}

std::vector<BlockView> slice_blocks(const BitMatrix& bm, size_t k) {
    if (k < 1) throw InvalidArgument("slice_blocks: k must be >= 1");
    if (k > bm.rows())
        throw InsufficientRowsError("slice_blocks: k=" + std::to_string(k) + " exceeds M=" +
                                    std::to_string(bm.rows()));
    const size_t count = bm.rows() / k;
    std::vector<BlockView> blocks(count);
    for (size_t b = 0; b < count; ++b) blocks[b] = BlockView{&bm, b * k, k};
    return blocks;
}

} // namespace qsa
