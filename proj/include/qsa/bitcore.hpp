#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qsa/errors.hpp"

namespace qsa {

enum class Origin { QuantumDevice, Simulator, ClassicalUniform };

std::string origin_name(Origin o);
Origin origin_from_name(const std::string& s);

struct DatasetMeta {
    std::string name;
    uint32_t declared_n = 0;
    uint32_t cycle = 0; // circuit depth m, 0 when unknown
    Origin origin = Origin::ClassicalUniform;
};

/// Packed M x n binary sample matrix. One 64-bit word per row, qubit j at
/// bit j (qubit 0 = leftmost character in the text format).
class BitMatrix {
public:
    BitMatrix(std::vector<uint64_t> rows, uint32_t cols, DatasetMeta meta = {});

    size_t rows() const { return rows_.size(); }
    uint32_t cols() const { return cols_; }
    uint64_t row_word(size_t i) const { return rows_[i]; }
    int bit(size_t i, uint32_t j) const { return static_cast<int>((rows_[i] >> j) & 1u); }
    const std::vector<uint64_t>& words() const { return rows_; }
    const DatasetMeta& meta() const { return meta_; }
    void set_meta(DatasetMeta m) { meta_ = std::move(m); }

    uint64_t col_mask() const { return cols_ == 64 ? ~uint64_t{0} : (uint64_t{1} << cols_) - 1; }

    bool operator==(const BitMatrix& other) const {
        return cols_ == other.cols_ && rows_ == other.rows_;
    }

private:
    std::vector<uint64_t> rows_;
    uint32_t cols_;
    DatasetMeta meta_;
};

/// Non-owning window of consecutive rows of a BitMatrix.
struct BlockView {
    const BitMatrix* parent = nullptr;
    size_t row_offset = 0;
    size_t rows = 0;

    uint32_t cols() const { return parent->cols(); }
    uint64_t row_word(size_t i) const { return parent->row_word(row_offset + i); }
    int bit(size_t i, uint32_t j) const { return parent->bit(row_offset + i, j); }
};

enum class FileFormat { TextLines, PackedBinary };

BitMatrix load_bitstrings(const std::filesystem::path& path, FileFormat format);
void save_bitstrings(const BitMatrix& bm, const std::filesystem::path& path, FileFormat format);

BitMatrix generate_uniform(uint32_t n, size_t M, uint64_t seed);
/// Each bit independently 1 with probability p1.
BitMatrix generate_biased(uint32_t n, size_t M, double p1, uint64_t seed);

/// Fraction of 1-bits over the whole matrix; exact integer count, one division.
double ones_probability(const BitMatrix& bm);
std::vector<double> column_means(const BitMatrix& bm);

struct Heatmap {
    std::vector<double> grid; // n*n row-major, cell means in [0,1]
    uint32_t n = 0;
    size_t blocks_used = 0;
    double p1 = 0.0;

    double cell(uint32_t r, uint32_t c) const { return grid[static_cast<size_t>(r) * n + c]; }
};

/// Element-wise mean over consecutive n x n slices; remainder rows discarded.
Heatmap heatmap(const BitMatrix& bm);

/// Consecutive non-overlapping k x n views in row order; remainder discarded.
std::vector<BlockView> slice_blocks(const BitMatrix& bm, size_t k);

} // namespace qsa
