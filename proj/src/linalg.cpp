#include "shtukalab/linalg.hpp"

#include <algorithm>
#include <map>

namespace shtukalab {

SparseKVec sparse_normalize(const Fq& F, SparseKVec v) {
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    SparseKVec out;
    out.reserve(v.size());
    for (const auto& [idx, c] : v) {
        if (!out.empty() && out.back().first == idx)
            out.back().second = F.add(out.back().second, c);
        else
            out.emplace_back(idx, c);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
    return out;
}

void sparse_axpy(const Fq& F, SparseKVec& out, Code c, const SparseKVec& v) {
    if (c == 0 || v.empty()) return;
    SparseKVec merged;
    merged.reserve(out.size() + v.size());
    std::size_t i = 0, j = 0;
    while (i < out.size() || j < v.size()) {
        if (j == v.size() || (i < out.size() && out[i].first < v[j].first)) {
            merged.push_back(out[i++]);
        } else if (i == out.size() || v[j].first < out[i].first) {
            merged.emplace_back(v[j].first, F.mul(c, v[j].second));
            ++j;
        } else {
            Code s = F.add(out[i].second, F.mul(c, v[j].second));
            if (s != 0) merged.emplace_back(out[i].first, s);
            ++i;
            ++j;
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const auto& e) { return e.second == 0; }),
                 merged.end());
    out = std::move(merged);
}

SparseKVec sparse_scale(const Fq& F, Code c, const SparseKVec& v) {
    SparseKVec out;
    if (c == 0) return out;
    out.reserve(v.size());
    for (const auto& [idx, x] : v) {
        Code t = F.mul(c, x);
        if (t != 0) out.emplace_back(idx, t);
    }
    return out;
}

SparseKVec sparse_add(const Fq& F, const SparseKVec& a, const SparseKVec& b) {
    SparseKVec out = a;
    sparse_axpy(F, out, F.one(), b);
    return out;
}

Code sparse_get(const SparseKVec& v, std::uint32_t idx) {
    auto it = std::lower_bound(v.begin(), v.end(), idx,
                               [](const auto& e, std::uint32_t i) { return e.first < i; });
    return (it != v.end() && it->first == idx) ? it->second : 0;
}

std::vector<Code> sparse_to_dense(const SparseKVec& v, std::size_t dim) {
    std::vector<Code> out(dim, 0);
    for (const auto& [idx, c] : v) out[idx] = c;
    return out;
}

SparseKVec dense_to_sparse(const std::vector<Code>& v) {
    SparseKVec out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
    return out;
}

MatK MatK::identity(FqPtr f, std::size_t n) {
    MatK I(std::move(f), n, n);
    for (std::size_t i = 0; i < n; ++i) I.at(i, i) = I.F->one();
    return I;
}

MatK MatK::mul(const MatK& o) const {
    if (cols != o.rows) fail(Errc::DimensionMismatch, "matrix product shape mismatch");
    MatK out(F, rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t t = 0; t < cols; ++t) {
            Code c = at(i, t);
            if (!c) continue;
            for (std::size_t j = 0; j < o.cols; ++j) {
                Code v = o.at(t, j);
                if (v) out.at(i, j) = F->add(out.at(i, j), F->mul(c, v));
            }
        }
    return out;
}

MatK MatK::add(const MatK& o) const {
    MatK out(F, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = F->add(a[i], o.a[i]);
    return out;
}

MatK MatK::sub(const MatK& o) const {
    MatK out(F, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = F->sub(a[i], o.a[i]);
    return out;
}

MatK MatK::twist_p(std::uint64_t t) const {
    MatK out(F, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = F->frob(a[i], t);
    return out;
}

MatK MatK::twist_q(std::int64_t e) const {
    MatK out(F, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = F->q_pow(a[i], e);
    return out;
}

MatK MatK::transpose() const {
    MatK out(F, cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out.at(j, i) = at(i, j);
    return out;
}

bool MatK::is_zero() const {
    return std::all_of(a.begin(), a.end(), [](Code c) { return c == 0; });
}

MatK MatK::rref(std::vector<std::size_t>* pivots) const {
    MatK M = *this;
    if (pivots) pivots->clear();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t sel = rank;
        while (sel < rows && M.at(sel, col) == 0) ++sel;
        if (sel == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(M.at(sel, j), M.at(rank, j));
        Code inv = F->inv(M.at(rank, col));
        for (std::size_t j = 0; j < cols; ++j) M.at(rank, j) = F->mul(M.at(rank, j), inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank) continue;
            Code c = M.at(i, col);
            if (!c) continue;
            for (std::size_t j = 0; j < cols; ++j)
                M.at(i, j) = F->sub(M.at(i, j), F->mul(c, M.at(rank, j)));
        }
        if (pivots) pivots->push_back(col);
        ++rank;
    }
    return M;
}

std::size_t MatK::rank() const {
    std::vector<std::size_t> piv;
    rref(&piv);
    return piv.size();
}

MatK MatK::kernel() const {
    std::vector<std::size_t> piv;
    MatK R = rref(&piv);
    std::vector<bool> is_piv(cols, false);
    for (std::size_t c : piv) is_piv[c] = true;
    std::size_t nfree = cols - piv.size();
    MatK K(F, cols, nfree);
    std::size_t out = 0;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_piv[fc]) continue;
        K.at(fc, out) = F->one();
        for (std::size_t i = 0; i < piv.size(); ++i) K.at(piv[i], out) = F->neg(R.at(i, fc));
        ++out;
    }
    return K;
}

MatK MatK::column_space() const {
    // reduce the transpose; nonzero rows of the result transpose back to a basis
    MatK Rt = transpose().rref();
    std::size_t r = 0;
    for (std::size_t i = 0; i < Rt.rows; ++i) {
        bool nz = false;
        for (std::size_t j = 0; j < Rt.cols; ++j) nz |= Rt.at(i, j) != 0;
        if (nz) ++r;
    }
    MatK out(F, rows, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < rows; ++j) out.at(j, i) = Rt.at(i, j);
    return out;
}

MatK MatK::inverse() const {
    if (rows != cols) fail(Errc::DimensionMismatch, "inverse of non-square matrix");
    MatK aug(F, rows, 2 * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols + i) = F->one();
    }
    std::vector<std::size_t> piv;
    MatK R = aug.rref(&piv);
    if (piv.size() != rows || piv.back() >= cols) fail(Errc::DimensionMismatch, "matrix is singular");
    for (std::size_t i = 0; i < rows; ++i)
        if (piv[i] != i) fail(Errc::DimensionMismatch, "matrix is singular");
    MatK out(F, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = R.at(i, cols + j);
    return out;
}

bool MatK::solve(const MatK& rhs, MatK& out) const {
    if (rhs.rows != rows) fail(Errc::DimensionMismatch, "solve shape mismatch");
    MatK aug(F, rows, cols + rhs.cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < rhs.cols; ++j) aug.at(i, cols + j) = rhs.at(i, j);
    }
    std::vector<std::size_t> piv;
    MatK R = aug.rref(&piv);
    // inconsistent if a pivot falls in the rhs block
    for (std::size_t c : piv)
        if (c >= cols) return false;
    out = MatK(F, cols, rhs.cols);
    for (std::size_t i = 0; i < piv.size(); ++i)
        for (std::size_t j = 0; j < rhs.cols; ++j) out.at(piv[i], j) = R.at(i, cols + j);
    return true;
}

std::vector<Code> MatK::apply(const std::vector<Code>& v) const {
    if (v.size() != cols) fail(Errc::DimensionMismatch, "vector length != cols");
    std::vector<Code> out(rows, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        Code s = 0;
        for (std::size_t j = 0; j < cols; ++j)
            if (at(i, j) && v[j]) s = F->add(s, F->mul(at(i, j), v[j]));
        out[i] = s;
    }
    return out;
}

MatK MatK::cols_subset(const std::vector<std::size_t>& idx) const {
    MatK out(F, rows, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) out.at(i, j) = at(i, idx[j]);
    return out;
}

MatK MatK::hstack(const MatK& l, const MatK& r) {
    MatK out(l.F, l.rows, l.cols + r.cols);
    for (std::size_t i = 0; i < l.rows; ++i) {
        for (std::size_t j = 0; j < l.cols; ++j) out.at(i, j) = l.at(i, j);
        for (std::size_t j = 0; j < r.cols; ++j) out.at(i, l.cols + j) = r.at(i, j);
    }
    return out;
}

namespace {
std::uint32_t inv_mod(std::uint32_t v, std::uint32_t p) {
    std::uint32_t res = 1, base = v % p, e = p - 2;
    while (e) {
        if (e & 1) res = static_cast<std::uint32_t>(static_cast<std::uint64_t>(res) * base % p);
        base = static_cast<std::uint32_t>(static_cast<std::uint64_t>(base) * base % p);
        e >>= 1;
    }
    return res;
}
} // namespace

std::size_t MatP::rank() const {
    MatP M = *this;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t sel = rank;
        while (sel < rows && M.at(sel, col) == 0) ++sel;
        if (sel == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(M.at(sel, j), M.at(rank, j));
        std::uint32_t c = inv_mod(M.at(rank, col), p);
        for (std::size_t j = 0; j < cols; ++j)
            M.at(rank, j) = static_cast<std::uint32_t>(static_cast<std::uint64_t>(M.at(rank, j)) * c % p);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            std::uint32_t f = M.at(i, col);
            if (!f) continue;
            for (std::size_t j = col; j < cols; ++j)
                M.at(i, j) = static_cast<std::uint32_t>(
                    (M.at(i, j) + static_cast<std::uint64_t>(p - f) * M.at(rank, j)) % p);
        }
        ++rank;
    }
    return rank;
}

MatP MatP::nullspace() const {
    MatP M = *this;
    std::vector<std::size_t> piv;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t sel = rank;
        while (sel < rows && M.at(sel, col) == 0) ++sel;
        if (sel == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(M.at(sel, j), M.at(rank, j));
        std::uint32_t c = inv_mod(M.at(rank, col), p);
        for (std::size_t j = 0; j < cols; ++j)
            M.at(rank, j) = static_cast<std::uint32_t>(static_cast<std::uint64_t>(M.at(rank, j)) * c % p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank) continue;
            std::uint32_t f = M.at(i, col);
            if (!f) continue;
            for (std::size_t j = 0; j < cols; ++j)
                M.at(i, j) = static_cast<std::uint32_t>(
                    (M.at(i, j) + static_cast<std::uint64_t>(p - f) * M.at(rank, j)) % p);
        }
        piv.push_back(col);
        ++rank;
    }
    std::vector<bool> is_piv(cols, false);
    for (std::size_t c : piv) is_piv[c] = true;
    MatP K(p, cols, cols - rank);
    std::size_t out = 0;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_piv[fc]) continue;
        K.at(fc, out) = 1;
        for (std::size_t i = 0; i < rank; ++i) K.at(piv[i], out) = (p - M.at(i, fc)) % p;
        ++out;
    }
    return K;
}

bool SparseEchelon::insert(SparseKVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Code inv = F->inv(v.front().second);
    v = sparse_scale(*F, inv, v);
    lead_.push_back(v.front().first);
    by_lead_[v.front().first] = rows_.size();
    rows_.push_back(std::move(v));
    return true;
}

SparseKVec SparseEchelon::reduce(SparseKVec v) const {
    // Leads are pairwise distinct, so any combination of stored rows has its
    // leading index inside the lead set; eliminating from the front decides
    // membership and strictly increases the front index each step.
    while (!v.empty()) {
        auto it = by_lead_.find(v.front().first);
        if (it == by_lead_.end()) break;
        sparse_axpy(*F, v, F->neg(v.front().second), rows_[it->second]);
    }
    return v;
}

} // namespace shtukalab
