#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shtukalab/gf.hpp"

namespace shtukalab {

/// Sparse vector over k: (index, coefficient) pairs, sorted by index, no zeros.
using SparseKVec = std::vector<std::pair<std::uint32_t, Code>>;

SparseKVec sparse_normalize(const Fq& F, SparseKVec v);
/// out += c * v
void sparse_axpy(const Fq& F, SparseKVec& out, Code c, const SparseKVec& v);
SparseKVec sparse_scale(const Fq& F, Code c, const SparseKVec& v);
SparseKVec sparse_add(const Fq& F, const SparseKVec& a, const SparseKVec& b);
Code sparse_get(const SparseKVec& v, std::uint32_t idx);
std::vector<Code> sparse_to_dense(const SparseKVec& v, std::size_t dim);
SparseKVec dense_to_sparse(const std::vector<Code>& v);

/// Dense matrix over k, row-major.
struct MatK {
    FqPtr F;
    std::size_t rows = 0, cols = 0;
    std::vector<Code> a;

    MatK() = default;
    MatK(FqPtr f, std::size_t r, std::size_t c) : F(std::move(f)), rows(r), cols(c), a(r * c, 0) {}

    static MatK identity(FqPtr f, std::size_t n);

    Code& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    Code at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    MatK mul(const MatK& o) const;
    MatK add(const MatK& o) const;
    MatK sub(const MatK& o) const;
    /// Entrywise x -> x^(p^t).
    MatK twist_p(std::uint64_t t) const;
    /// Entrywise x -> x^(q^e), e may be negative.
    MatK twist_q(std::int64_t e) const;
    MatK transpose() const;
    bool is_zero() const;
    bool operator==(const MatK& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    std::size_t rank() const;
    /// Reduced row echelon form; records pivot columns if requested.
    MatK rref(std::vector<std::size_t>* pivots = nullptr) const;
    /// Columns form a basis of the right kernel {v : M v = 0}.
    MatK kernel() const;
    /// Columns form a basis (in reduced form) of the column space.
    MatK column_space() const;
    MatK inverse() const; // fails on singular input
    bool invertible() const { return rows == cols && rank() == rows; }
    /// Solves M x = rhs (one column per rhs column); nullopt-like failure via flag.
    bool solve(const MatK& rhs, MatK& out) const;

    std::vector<Code> apply(const std::vector<Code>& v) const;
    MatK cols_subset(const std::vector<std::size_t>& idx) const;
    static MatK hstack(const MatK& l, const MatK& r);
};

/// Dense matrix over F_p for flattened semilinear systems.
struct MatP {
    std::uint32_t p = 2;
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint32_t> a;

    MatP() = default;
    MatP(std::uint32_t pp, std::size_t r, std::size_t c) : p(pp), rows(r), cols(c), a(r * c, 0) {}

    std::uint32_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::size_t rank() const;
    /// Columns form a basis of the right kernel.
    MatP nullspace() const;
};

/// Incremental echelon structure over k for rank/membership of sparse rows.
/// Rows are kept sparse and reduced only as far as leading-index elimination
/// requires; insert() returns true when the row enlarged the span.
class SparseEchelon {
public:
    explicit SparseEchelon(FqPtr f) : F(std::move(f)) {}

    bool insert(SparseKVec v);
    /// Residual of v after reduction against the current span (empty iff member).
    SparseKVec reduce(SparseKVec v) const;
    bool contains(const SparseKVec& v) const { return reduce(v).empty(); }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<SparseKVec>& rows() const { return rows_; }

private:
    FqPtr F;
    std::vector<SparseKVec> rows_;          // each with leading coefficient 1
    std::vector<std::uint32_t> lead_;       // leading index per row (pairwise distinct)
    std::unordered_map<std::uint32_t, std::size_t> by_lead_;
};

} // namespace shtukalab
