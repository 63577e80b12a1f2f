#include "wabc/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace wabc {

SparsityPattern::SparsityPattern(const Mesh& mesh) {
    const std::size_t n = mesh.num_nodes();
    const int npe = mesh.nodes_per_element();
    std::vector<std::vector<std::int32_t>> adj(n);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto el = mesh.element(e);
        for (int a = 0; a < npe; ++a)
            for (int b = 0; b < npe; ++b) adj[static_cast<std::size_t>(el[a])].push_back(el[b]);
    }
    build_rows(adj);

    block_ = static_cast<std::size_t>(npe * npe);
    element_slots_.resize(mesh.num_elements() * block_);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto el = mesh.element(e);
        for (int a = 0; a < npe; ++a)
            for (int b = 0; b < npe; ++b) element_slots_[e * block_ + static_cast<std::size_t>(a * npe + b)] = find(el[a], el[b]);
    }
}

void SparsityPattern::build_rows(std::vector<std::vector<std::int32_t>>& rows) {
    const std::size_t n = rows.size();
    row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = rows[i];
        row.push_back(static_cast<std::int32_t>(i));
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        row_ptr_[i + 1] = row_ptr_[i] + static_cast<std::int32_t>(row.size());
    }
    col_idx_.clear();
    col_idx_.reserve(static_cast<std::size_t>(row_ptr_[n]));
    for (auto& row : rows) col_idx_.insert(col_idx_.end(), row.begin(), row.end());
    diag_.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag_[i] = find(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i));
}

SparsityPattern SparsityPattern::from_rows(std::vector<std::vector<std::int32_t>> rows) {
    SparsityPattern p;
    p.build_rows(rows);
    return p;
}

std::int32_t SparsityPattern::find(std::int32_t i, std::int32_t j) const {
    const auto begin = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
    const auto end = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return -1;
    return static_cast<std::int32_t>(it - col_idx_.begin());
}

double SparseMatrix::at(std::int32_t i, std::int32_t j) const {
    const auto slot = pattern_->find(i, j);
    return slot < 0 ? 0.0 : values_[static_cast<std::size_t>(slot)];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    const auto rp = pattern_->row_ptr();
    const auto ci = pattern_->col_idx();
    const double* v = values_.data();
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (auto k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[static_cast<std::size_t>(ci[static_cast<std::size_t>(k)])];
        y[i] = s;
    }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
    std::vector<double> y(size());
    multiply(x, y);
    return y;
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = values_[static_cast<std::size_t>(pattern_->diagonal_slot(static_cast<std::int32_t>(i)))];
    return d;
}

double SparseMatrix::asymmetry() const {
    const auto rp = pattern_->row_ptr();
    const auto ci = pattern_->col_idx();
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (auto k = rp[i]; k < rp[i + 1]; ++k) {
            const double a = values_[static_cast<std::size_t>(k)];
            scale = std::max(scale, std::abs(a));
            worst = std::max(worst, std::abs(a - at(ci[static_cast<std::size_t>(k)], static_cast<std::int32_t>(i))));
        }
    return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace wabc
