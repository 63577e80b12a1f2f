#pragma once

#include "wabc/mesh.hpp"

#include <memory>
#include <span>
#include <vector>

namespace wabc {

/// Row-compressed nonzero structure of the P1 node-node coupling on a mesh,
/// plus, for every element, the value slots of its local (d+1)x(d+1) block.
/// Shared by every matrix assembled on that mesh so that linear combinations
/// are plain loops over value arrays.
class SparsityPattern {
public:
    explicit SparsityPattern(const Mesh& mesh);

    /// Pattern from explicit column lists (sorted and deduplicated here); the
    /// diagonal is always included. No element slots.
    static SparsityPattern from_rows(std::vector<std::vector<std::int32_t>> rows);

    std::size_t rows() const { return row_ptr_.size() - 1; }
    std::size_t nnz() const { return col_idx_.size(); }
    std::span<const std::int32_t> row_ptr() const { return row_ptr_; }
    std::span<const std::int32_t> col_idx() const { return col_idx_; }

    /// Slot of entry (i, j); -1 if structurally zero.
    std::int32_t find(std::int32_t i, std::int32_t j) const;

    /// Value slots of element e's local block, row-major over local indices.
    std::span<const std::int32_t> element_slots(std::size_t e) const {
        return {element_slots_.data() + e * block_, block_};
    }
    std::int32_t diagonal_slot(std::int32_t i) const { return diag_[static_cast<std::size_t>(i)]; }

private:
    SparsityPattern() = default;
    void build_rows(std::vector<std::vector<std::int32_t>>& rows);

    std::vector<std::int32_t> row_ptr_;
    std::vector<std::int32_t> col_idx_;
    std::vector<std::int32_t> diag_;
    std::vector<std::int32_t> element_slots_;
    std::size_t block_ = 0;
};

/// CSR matrix over a shared sparsity pattern.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
        : pattern_(std::move(pattern)), values_(pattern_->nnz(), 0.0) {}

    std::size_t size() const { return pattern_ ? pattern_->rows() : 0; }
    const SparsityPattern& pattern() const { return *pattern_; }
    const std::shared_ptr<const SparsityPattern>& pattern_ptr() const { return pattern_; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double at(std::int32_t i, std::int32_t j) const;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> operator*(std::span<const double> x) const;

    std::vector<double> diagonal() const;

    /// max |A_ij - A_ji| / max |A_ij|
    double asymmetry() const;

private:
    std::shared_ptr<const SparsityPattern> pattern_;
    std::vector<double> values_;
};

}  // namespace wabc
