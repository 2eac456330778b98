#include "shtukalab/shtuka.hpp"

#include <algorithm>

namespace shtukalab {

std::vector<Code> apply(const Shtuka& M, const std::vector<Code>& v) {
    if (v.size() != M.rank) fail(Errc::DimensionMismatch, "vector length != shtuka rank");
    const Fq& F = *M.field;
    std::vector<Code> tw(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) tw[i] = F.q_pow(v[i], 1);
    return M.F.apply(tw);
}

MatK composite_matrix(const Shtuka& M, std::size_t t) {
    MatK acc = MatK::identity(M.field, M.rank);
    for (std::size_t i = 0; i < t; ++i) acc = acc.mul(M.F.twist_q(static_cast<std::int64_t>(i)));
    return acc;
}

bool morphism_commutes(const Shtuka& src, const Shtuka& tgt, const MatK& C) {
    return C.mul(src.F) == tgt.F.mul(C.twist_q(1));
}

std::vector<MatK> hom_space(const Shtuka& M, const Shtuka& Mp) {
    if (!M.field->same(*Mp.field)) fail(Errc::FieldMismatch, "hom_space requires a common base field");
    const Fq& F = *M.field;
    const std::uint32_t nd = F.degree();
    const std::uint32_t p = F.p();
    const std::size_t nr = Mp.rank, nc = M.rank; // C is nr x nc
    const std::size_t nunk = nr * nc * nd;

    // digit index of entry (i, j): (i*nc + j)*nd + digit
    auto var = [&](std::size_t i, std::size_t j, std::uint32_t dig) { return (i * nc + j) * nd + dig; };

    MatP sys(p, nr * nc * nd, nunk);
    std::size_t row0 = 0;
    const auto& frob_r = F.frob_matrix(F.r() % F.degree());
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            // equation entry (i, j) of C*F - F'*C^[q] = 0, flattened to digits
            for (std::size_t t = 0; t < nc; ++t) {
                Code c = M.F.at(t, j);
                if (c) {
                    auto mulm = F.mul_matrix(c);
                    for (std::uint32_t a = 0; a < nd; ++a)
                        for (std::uint32_t b = 0; b < nd; ++b) {
                            std::uint32_t v = mulm[static_cast<std::size_t>(a) * nd + b];
                            if (!v) continue;
                            auto& cell = sys.at(row0 + a, var(i, t, b));
                            cell = (cell + v) % p;
                        }
                }
            }
            for (std::size_t t = 0; t < nr; ++t) {
                Code c = Mp.F.at(i, t);
                if (c) {
                    auto mulm = F.mul_matrix(c);
                    // mul(c) . frob_r acting on digits of C_{t,j}
                    for (std::uint32_t a = 0; a < nd; ++a)
                        for (std::uint32_t b = 0; b < nd; ++b) {
                            std::uint64_t v = 0;
                            for (std::uint32_t s = 0; s < nd; ++s)
                                v += static_cast<std::uint64_t>(mulm[static_cast<std::size_t>(a) * nd + s]) *
                                     frob_r[static_cast<std::size_t>(s) * nd + b];
                            v %= p;
                            if (!v) continue;
                            auto& cell = sys.at(row0 + a, var(t, j, b));
                            cell = static_cast<std::uint32_t>((cell + p - v) % p);
                        }
                }
            }
            row0 += nd;
        }
    }

    MatP null = sys.nullspace();
    // F_q-dimension: pick an F_q-independent subset of the F_p-solution basis
    if (null.cols % F.r() != 0) fail(Errc::Internal, "hom space F_p-dimension not divisible by r");
    auto to_mat = [&](std::size_t colidx) {
        MatK C(M.field, nr, nc);
        std::vector<std::uint32_t> digs(nd);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) {
                for (std::uint32_t dgt = 0; dgt < nd; ++dgt) digs[dgt] = null.at(var(i, j, dgt), colidx);
                C.at(i, j) = F.encode(digs.data());
            }
        return C;
    };
    SparseEchelon span(M.field);
    auto flat = [&](const MatK& C, Code scale) {
        SparseKVec v;
        for (std::size_t i = 0; i < C.a.size(); ++i) {
            Code x = F.mul(scale, C.a[i]);
            // flatten each k-entry into its F_p digits so the span is over F_p
            for (std::uint32_t dgt = 0; dgt < nd; ++dgt) {
                std::uint32_t dv = F.digit(x, dgt);
                if (dv) v.emplace_back(static_cast<std::uint32_t>(i * nd + dgt), F.from_int(dv));
            }
        }
        return sparse_normalize(F, v);
    };
    std::vector<MatK> basis;
    for (std::size_t c = 0; c < null.cols; ++c) {
        MatK C = to_mat(c);
        if (span.contains(flat(C, F.one()))) continue;
        for (Code lam : F.fq_subfield_basis()) span.insert(flat(C, lam));
        basis.push_back(std::move(C));
    }
    if (basis.size() * F.r() != null.cols) fail(Errc::Internal, "F_q basis extraction mismatch");
    return basis;
}

namespace {

/// Basis of the kernel of the semilinear power f^t: linear kernel of the
/// composite, pulled back through the bijective coordinate q^t-power.
MatK semilinear_kernel(const Shtuka& M, std::size_t t) {
    MatK K = composite_matrix(M, t).kernel();
    return K.twist_q(-static_cast<std::int64_t>(t));
}

} // namespace

SsNilSplit ss_nil_split(const Shtuka& M) {
    const std::size_t n = M.rank;
    MatK Fn = composite_matrix(M, n);
    MatK ss_basis = Fn.column_space();
    MatK nil_basis = semilinear_kernel(M, n);
    std::size_t ds = ss_basis.cols, dn = nil_basis.cols;
    if (ds + dn != n) fail(Errc::Internal, "ss/nil dimensions do not add up");

    MatK P = MatK::hstack(ss_basis, nil_basis);
    SsNilSplit out;
    out.ss_dim = ds;
    out.nil_dim = dn;
    if (n == 0) {
        out.ss = Shtuka(M.field, MatK(M.field, 0, 0));
        out.nil = Shtuka(M.field, MatK(M.field, 0, 0));
        out.basis_change = P;
        return out;
    }
    MatK Fnew = P.inverse().mul(M.F.mul(P.twist_q(1)));
    MatK Fss(M.field, ds, ds), Fnil(M.field, dn, dn);
    for (std::size_t i = 0; i < ds; ++i)
        for (std::size_t j = 0; j < ds; ++j) Fss.at(i, j) = Fnew.at(i, j);
    for (std::size_t i = 0; i < dn; ++i)
        for (std::size_t j = 0; j < dn; ++j) Fnil.at(i, j) = Fnew.at(ds + i, ds + j);
    for (std::size_t i = 0; i < ds; ++i)
        for (std::size_t j = 0; j < dn; ++j)
            if (Fnew.at(i, ds + j) != 0 || Fnew.at(ds + j, i) != 0)
                fail(Errc::Internal, "split is not f-stable");
    out.ss = Shtuka(M.field, std::move(Fss));
    out.nil = Shtuka(M.field, std::move(Fnil));
    out.basis_change = std::move(P);
    return out;
}

bool is_nilpotent(const Shtuka& M) { return composite_matrix(M, M.rank).is_zero(); }

bool is_invertible(const Shtuka& M) { return M.rank == 0 || M.F.invertible(); }

CyclicDecomposition cyclic_decompose(const Shtuka& M) {
    if (!is_nilpotent(M)) fail(Errc::NotNilpotent, "cyclic decomposition needs a nilpotent shtuka");
    const std::size_t n = M.rank;
    const Fq& F = *M.field;

    // kernel flag K_0 = 0 < K_1 <= ... <= K_nu = M
    std::vector<MatK> K; // K[t] basis of ker f^t
    K.push_back(MatK(M.field, n, 0));
    std::size_t nu = 0;
    for (std::size_t t = 1; t <= n; ++t) {
        K.push_back(semilinear_kernel(M, t));
        if (K[t].cols == n) {
            nu = t;
            break;
        }
    }
    if (n == 0) return {{}, MatK(M.field, 0, 0)};

    auto apply_f = [&](const std::vector<Code>& v) {
        std::vector<Code> tw(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) tw[i] = F.q_pow(v[i], 1);
        return M.F.apply(tw);
    };
    auto col = [&](const MatK& A, std::size_t j) {
        std::vector<Code> v(A.rows);
        for (std::size_t i = 0; i < A.rows; ++i) v[i] = A.at(i, j);
        return v;
    };

    // Walk the flag from the top: new chain heads at level t complete
    // K_{t-1} + f(heads above) to K_t.
    std::vector<std::vector<std::vector<Code>>> chains; // chains[c] = [v, f v, ...]
    std::vector<std::vector<Code>> carried;             // images of higher-level chain vectors at current level
    for (std::size_t t = nu; t >= 1; --t) {
        SparseEchelon span(M.field);
        for (std::size_t j = 0; j < K[t - 1].cols; ++j) span.insert(dense_to_sparse(col(K[t - 1], j)));
        std::vector<std::vector<Code>> next_carried;
        for (const auto& w : carried) {
            span.insert(dense_to_sparse(w));
            next_carried.push_back(apply_f(w));
        }
        for (std::size_t j = 0; j < K[t].cols; ++j) {
            std::vector<Code> v = col(K[t], j);
            if (!span.insert(dense_to_sparse(v))) continue;
            // head of a new chain of length t
            std::vector<std::vector<Code>> chain;
            std::vector<Code> cur = v;
            for (std::size_t s = 0; s < t; ++s) {
                chain.push_back(cur);
                cur = apply_f(cur);
            }
            chains.push_back(std::move(chain));
            next_carried.push_back(apply_f(v));
        }
        carried = std::move(next_carried);
        if (t == 1) break;
    }

    std::sort(chains.begin(), chains.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    CyclicDecomposition out;
    MatK P(M.field, n, n);
    std::size_t cidx = 0;
    for (const auto& chain : chains) {
        out.exponents.push_back(chain.size());
        for (const auto& v : chain) {
            for (std::size_t i = 0; i < n; ++i) P.at(i, cidx) = v[i];
            ++cidx;
        }
    }
    if (cidx != n) fail(Errc::Internal, "cyclic chains do not span");
    if (!P.invertible()) fail(Errc::Internal, "cyclic basis is singular");
    // cross-check against the kernel-chain rule
    for (std::size_t t = 1; t <= nu; ++t) {
        std::size_t expect = K[t].cols - K[t - 1].cols;
        std::size_t got = 0;
        for (auto s : out.exponents)
            if (s >= t) ++got;
        if (expect != got) fail(Errc::Internal, "kernel chain rule violated");
    }
    out.adapted_basis = std::move(P);
    return out;
}

Shtuka restrict_scalars(const Shtuka& M, std::size_t n) {
    const Fq& F = *M.field;
    if (n == 0 || F.r() % n != 0)
        fail(Errc::DegreeMismatch, "restriction degree must divide the semilinearity degree");
    FqPtr target = Fq::create(F.p(), F.r() / static_cast<std::uint32_t>(n),
                              F.m() * static_cast<std::uint32_t>(n), F.modulus());
    const std::size_t d = M.rank;
    MatK B(target, n * d, n * d);
    // identity blocks on the superdiagonal, F in the lower-left block
    for (std::size_t blk = 0; blk + 1 < n; ++blk)
        for (std::size_t i = 0; i < d; ++i) B.at(blk * d + i, (blk + 1) * d + i) = target->one();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) B.at((n - 1) * d + i, j) = M.F.at(i, j);
    return Shtuka(target, std::move(B));
}

} // namespace shtukalab
