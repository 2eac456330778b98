#include "shtukalab/functors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "shtukalab/rng.hpp"

namespace shtukalab {

GroupSchemeHandle drinfeld(const Shtuka& M, std::uint64_t cap) {
    const Fq& F = *M.field;
    HopfPresentation P;
    P.field = M.field;
    for (std::size_t j = 0; j < M.rank; ++j) {
        GeneratorSpec g;
        g.name = "x" + std::to_string(j);
        g.weight = 1;
        g.trunc = F.q();
        for (std::size_t i = 0; i < M.rank; ++i)
            if (M.F.at(i, j) != 0) g.relation.emplace_back(static_cast<std::uint32_t>(i), M.F.at(i, j));
        P.gens.push_back(std::move(g));
    }
    return GroupSchemeHandle{expand(P, cap)};
}

namespace {

/// Prim_1 basis together with the q-power matrix in that basis.
struct DieudonneData {
    std::vector<SparseKVec> basis;
    MatK F;
};

DieudonneData dieudonne_data(const GroupSchemeHandle& G) {
    const FiniteHopf& H = G.hopf;
    Primitives P = primitives(H);
    const auto& prim1 = P.by_s[0];
    const std::size_t n = prim1.size();

    MatK Z(H.field, H.dim, n);
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [b, c] : prim1[j]) Z.at(b, j) = c;
    MatK Q(H.field, H.dim, n);
    for (std::size_t j = 0; j < n; ++j) {
        SparseKVec zq = algebra_pow_q(H, prim1[j]);
        for (const auto& [b, c] : zq) Q.at(b, j) = c;
    }
    MatK X;
    if (!Z.solve(Q, X)) fail(Errc::QPowerLeavesSubspace, "q-power map leaves the Prim_1 span");
    DieudonneData out;
    out.basis = prim1;
    out.F = std::move(X);
    return out;
}

} // namespace

Shtuka dieudonne(const GroupSchemeHandle& G) {
    DieudonneData d = dieudonne_data(G);
    return Shtuka(G.hopf.field, std::move(d.F));
}

RoundtripReport roundtrip_shtuka(const Shtuka& M) {
    GroupSchemeHandle G = drinfeld(M);
    DieudonneData d = dieudonne_data(G);
    const Fq& F = *M.field;
    RoundtripReport rep;
    rep.order_lhs = M.rank;
    rep.order_rhs = d.basis.size();
    if (d.basis.size() != M.rank) {
        rep.counit_iso = false;
        rep.details = "Prim_1 rank differs from the module rank";
        return rep;
    }
    // v_M: e_j -> generator x_j expressed in the computed Prim_1 basis
    MatK Z(M.field, G.hopf.dim, d.basis.size());
    for (std::size_t j = 0; j < d.basis.size(); ++j)
        for (const auto& [b, c] : d.basis[j]) Z.at(b, j) = c;
    MatK gens(M.field, G.hopf.dim, M.rank);
    for (std::size_t j = 0; j < M.rank; ++j) {
        std::uint32_t idx = static_cast<std::uint32_t>(G.hopf.mono->stride[j]); // x_j
        gens.at(idx, j) = F.one();
    }
    MatK V;
    if (!Z.solve(gens, V)) {
        rep.counit_iso = false;
        rep.details = "generators do not lie in the Prim_1 span";
        return rep;
    }
    Shtuka Mp(M.field, d.F);
    bool commutes = morphism_commutes(M, Mp, V);
    rep.counit_iso = commutes && V.invertible();
    if (!commutes) rep.details = "v_M is not a shtuka morphism";
    return rep;
}

RoundtripReport roundtrip_group(const GroupSchemeHandle& G, std::uint64_t cap) {
    const FiniteHopf& H = G.hopf;
    const Fq& F = *H.field;
    DieudonneData d = dieudonne_data(G);
    RoundtripReport rep;
    rep.order_lhs = H.dim;

    std::uint64_t ord_gm = 1;
    for (std::size_t i = 0; i < d.basis.size(); ++i) {
        ord_gm *= F.q();
        if (ord_gm > cap) {
            rep.order_rhs = 0;
            fail(Errc::TooLarge, "ord G(M(G)) exceeds the cap");
        }
    }
    rep.order_rhs = ord_gm;

    // u_G*: monomials in the Prim_1 basis -> B_G, extended multiplicatively
    const std::size_t n = d.basis.size();
    std::vector<SparseKVec> images(static_cast<std::size_t>(ord_gm));
    images[0] = {{0, F.one()}};
    std::vector<std::uint64_t> stride(n);
    std::uint64_t s = 1;
    for (std::size_t g = 0; g < n; ++g) {
        stride[g] = s;
        s *= F.q();
    }
    for (std::uint64_t b = 1; b < ord_gm; ++b) {
        // peel one generator
        std::size_t g = 0;
        std::uint64_t v = b;
        while (v % F.q() == 0) {
            v /= F.q();
            ++g;
        }
        images[b] = algebra_mul(H, images[b - stride[g]], d.basis[g]);
    }
    MatK U(H.field, H.dim, static_cast<std::size_t>(ord_gm));
    for (std::uint64_t b = 0; b < ord_gm; ++b)
        for (const auto& [i, c] : images[b]) U.at(i, b) = c;
    rep.unit_iso = (ord_gm == H.dim) && U.rank() == H.dim;
    if (!rep.unit_iso) {
        std::ostringstream os;
        os << "ord G(M(G)) = " << ord_gm << " vs ord G = " << H.dim;
        rep.details = os.str();
    }
    return rep;
}

AdjunctionReport adjunction_dims(const GroupSchemeHandle& G, const Shtuka& M) {
    const FiniteHopf& H = G.hopf;
    const Fq& F = *H.field;
    if (!F.same(*M.field)) fail(Errc::FieldMismatch, "adjunction requires a common base field");
    const std::uint32_t nd = F.degree();
    const std::uint32_t p = F.p();

    Primitives P = primitives(H);
    const auto& prim1 = P.by_s[0];
    const std::size_t np = prim1.size();
    const std::size_t n = M.rank;
    const std::uint32_t d = H.dim;

    // dense copies of z_j and z_j^q
    std::vector<std::vector<Code>> z(np), zq(np);
    for (std::size_t j = 0; j < np; ++j) {
        z[j] = sparse_to_dense(prim1[j], d);
        zq[j] = sparse_to_dense(algebra_pow_q(H, prim1[j]), d);
    }

    // unknown U : np x n over k; digit index (j*n + i)*nd + t
    auto var = [&](std::size_t j, std::size_t i, std::uint32_t t) { return (j * n + i) * nd + t; };
    const std::size_t ncols = np * n * nd;
    MatP sys(p, static_cast<std::size_t>(d) * n * nd, ncols);
    const auto& frob_r = F.frob_matrix(F.r() % F.degree());
    std::size_t row0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t bc = 0; bc < d; ++bc) {
            // sum_j u_{ji}^q * zq[j][bc] - sum_t (F_M)_{ti} sum_j u_{jt} z[j][bc] = 0
            for (std::size_t j = 0; j < np; ++j) {
                if (zq[j][bc]) {
                    auto mulm = F.mul_matrix(zq[j][bc]);
                    for (std::uint32_t a = 0; a < nd; ++a)
                        for (std::uint32_t b = 0; b < nd; ++b) {
                            std::uint64_t v = 0;
                            for (std::uint32_t t = 0; t < nd; ++t)
                                v += static_cast<std::uint64_t>(mulm[static_cast<std::size_t>(a) * nd + t]) *
                                     frob_r[static_cast<std::size_t>(t) * nd + b];
                            v %= p;
                            if (!v) continue;
                            auto& cell = sys.at(row0 + a, var(j, i, b));
                            cell = static_cast<std::uint32_t>((cell + v) % p);
                        }
                }
                for (std::size_t t = 0; t < n; ++t) {
                    Code c = F.mul(M.F.at(t, i), z[j][bc]);
                    if (!c) continue;
                    auto mulm = F.mul_matrix(c);
                    for (std::uint32_t a = 0; a < nd; ++a)
                        for (std::uint32_t b = 0; b < nd; ++b) {
                            std::uint32_t v = mulm[static_cast<std::size_t>(a) * nd + b];
                            if (!v) continue;
                            auto& cell = sys.at(row0 + a, var(j, t, b));
                            cell = static_cast<std::uint32_t>((cell + p - v) % p);
                        }
                }
            }
            row0 += nd;
        }
    }
    MatP null = sys.nullspace();
    if (null.cols % F.r() != 0) fail(Errc::Internal, "group hom space dimension not divisible by r");

    AdjunctionReport rep;
    rep.dim_grp_hom = null.cols / F.r();
    rep.dim_sht_hom = hom_space(M, dieudonne(G)).size();
    if (null.cols > 0) {
        std::ostringstream os;
        os << "basis solution: ";
        for (std::size_t j = 0; j < np; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<std::uint32_t> digs(nd);
                for (std::uint32_t t = 0; t < nd; ++t) digs[t] = null.at(var(j, i, t), 0);
                os << F.str(F.encode(digs.data()));
                os << ((j + 1 == np && i + 1 == n) ? "" : ",");
            }
        rep.witness = os.str();
    }
    return rep;
}

MatK hopf_map_of_shtuka_morphism(const Shtuka& src, const Shtuka& tgt, const MatK& C,
                                 const GroupSchemeHandle& Gsrc, const GroupSchemeHandle& Gtgt) {
    const Fq& F = *src.field;
    if (!morphism_commutes(src, tgt, C)) fail(Errc::Internal, "matrix is not a shtuka morphism");
    // generator x_i of B_{G(src)} maps to sum_j C_{ji} x_j in B_{G(tgt)}
    std::vector<SparseKVec> images(src.rank);
    for (std::size_t i = 0; i < src.rank; ++i) {
        SparseKVec img;
        for (std::size_t j = 0; j < tgt.rank; ++j)
            if (C.at(j, i) != 0)
                img.emplace_back(static_cast<std::uint32_t>(Gtgt.hopf.mono->stride[j]), C.at(j, i));
        images[i] = sparse_normalize(F, img);
    }
    return hopf_map_from_images(Gsrc.hopf, Gtgt.hopf, images);
}

IsoResult shtukas_isomorphic(const Shtuka& M, const Shtuka& Mp, std::uint64_t seed) {
    IsoResult res;
    if (M.rank != Mp.rank) return res;
    if (M.rank == 0) {
        res.isomorphic = true;
        res.witness = MatK(M.field, 0, 0);
        return res;
    }
    std::vector<MatK> basis = hom_space(M, Mp);
    if (basis.empty()) return res;
    const Fq& F = *M.field;
    const std::size_t D = basis.size();

    double logq = std::log2(static_cast<double>(F.q()));
    bool exhaustive = D * logq <= 20.0;
    auto attempt = [&](const std::vector<Code>& lambda) -> bool {
        MatK C(M.field, M.rank, M.rank);
        for (std::size_t t = 0; t < D; ++t) {
            if (!lambda[t]) continue;
            for (std::size_t idx = 0; idx < C.a.size(); ++idx)
                C.a[idx] = F.add(C.a[idx], F.mul(lambda[t], basis[t].a[idx]));
        }
        if (!C.invertible()) return false;
        res.isomorphic = true;
        res.witness = std::move(C);
        return true;
    };
    // scalars restricted to the F_q-subfield of k
    std::vector<Code> fq_elems;
    for (std::uint64_t c = 0; c < F.card(); ++c)
        if (F.in_fq_subfield(static_cast<Code>(c))) fq_elems.push_back(static_cast<Code>(c));

    if (exhaustive) {
        std::vector<Code> lambda(D, 0);
        std::uint64_t total = 1;
        for (std::size_t t = 0; t < D; ++t) total *= fq_elems.size();
        for (std::uint64_t it = 1; it < total; ++it) {
            std::uint64_t v = it;
            for (std::size_t t = 0; t < D; ++t) {
                lambda[t] = fq_elems[v % fq_elems.size()];
                v /= fq_elems.size();
            }
            if (attempt(lambda)) return res;
        }
        return res; // certain negative
    }
    Rng rng(seed);
    std::vector<Code> lambda(D);
    for (int draw = 0; draw < 10000; ++draw) {
        for (std::size_t t = 0; t < D; ++t) lambda[t] = fq_elems[rng.below(fq_elems.size())];
        if (attempt(lambda)) return res;
    }
    res.certain = false; // probable non-isomorphism
    return res;
}

std::vector<std::vector<SparseKVec>> hopf_hom_images(const FiniteHopf& A, const FiniteHopf& B, bool graded) {
    if (!A.mono) fail(Errc::BadPresentation, "hom solving needs a presented source algebra");
    if (!A.field->same(*B.field)) fail(Errc::FieldMismatch, "hom solving requires a common base field");
    const Fq& F = *A.field;
    const std::uint32_t nd = F.degree();
    const std::uint32_t p = F.p();
    const std::uint32_t mm = F.q() > 2 ? static_cast<std::uint32_t>(F.q() - 1) : 1;
    const std::size_t ng = A.mono->gens.size();

    Primitives PB = primitives(B);
    // candidate target lines per generator: primitives, grading-matched when asked
    std::vector<std::vector<SparseKVec>> cand(ng);
    for (std::size_t g = 0; g < ng; ++g) {
        for (const auto& v : PB.all) {
            if (graded) {
                std::uint32_t cls = B.weight_class[v.front().first] % mm;
                if (cls != A.mono->gens[g].weight % mm) continue;
            }
            cand[g].push_back(v);
        }
    }

    // unknowns: coefficient of candidate line c for generator g, flattened over F_p
    std::vector<std::size_t> offset(ng + 1, 0);
    for (std::size_t g = 0; g < ng; ++g) offset[g + 1] = offset[g] + cand[g].size() * nd;
    const std::size_t ncols = offset[ng];
    const std::uint32_t d = B.dim;

    // y_g = sum_c u_{gc} cand[g][c]; conditions y_g^{e_g} = sum_h rel_h y_h
    // e_g = p^tau: y^{e} = sum u^{p^tau} cand^{p^tau}
    MatP sys(p, static_cast<std::size_t>(d) * nd * ng, ncols);
    std::size_t row0 = 0;
    for (std::size_t g = 0; g < ng; ++g) {
        std::uint32_t tau = 0;
        {
            std::uint64_t e = A.mono->gens[g].trunc;
            while (e % p == 0) {
                e /= p;
                ++tau;
            }
        }
        const auto& frob_t = F.frob_matrix(tau % F.degree());
        for (std::uint32_t bc = 0; bc < d; ++bc) {
            for (std::size_t c = 0; c < cand[g].size(); ++c) {
                SparseKVec powc = algebra_pow_p(B, cand[g][c], tau);
                Code coef = sparse_get(powc, bc);
                if (coef) {
                    auto mulm = F.mul_matrix(coef);
                    for (std::uint32_t a = 0; a < nd; ++a)
                        for (std::uint32_t b = 0; b < nd; ++b) {
                            std::uint64_t v = 0;
                            for (std::uint32_t t = 0; t < nd; ++t)
                                v += static_cast<std::uint64_t>(mulm[static_cast<std::size_t>(a) * nd + t]) *
                                     frob_t[static_cast<std::size_t>(t) * nd + b];
                            v %= p;
                            if (!v) continue;
                            auto& cell = sys.at(row0 + a, offset[g] + c * nd + b);
                            cell = static_cast<std::uint32_t>((cell + v) % p);
                        }
                }
            }
            for (const auto& [h, relc] : A.mono->gens[g].relation) {
                for (std::size_t c = 0; c < cand[h].size(); ++c) {
                    Code coef = F.mul(relc, sparse_get(cand[h][c], bc));
                    if (!coef) continue;
                    auto mulm = F.mul_matrix(coef);
                    for (std::uint32_t a = 0; a < nd; ++a)
                        for (std::uint32_t b = 0; b < nd; ++b) {
                            std::uint32_t v = mulm[static_cast<std::size_t>(a) * nd + b];
                            if (!v) continue;
                            auto& cell = sys.at(row0 + a, offset[h] + c * nd + b);
                            cell = static_cast<std::uint32_t>((cell + p - v) % p);
                        }
                }
            }
            row0 += nd;
        }
    }
    MatP null = sys.nullspace();
    std::vector<std::vector<SparseKVec>> out;
    for (std::size_t sol = 0; sol < null.cols; ++sol) {
        std::vector<SparseKVec> images(ng);
        for (std::size_t g = 0; g < ng; ++g) {
            SparseKVec img;
            for (std::size_t c = 0; c < cand[g].size(); ++c) {
                std::vector<std::uint32_t> digs(nd);
                for (std::uint32_t t = 0; t < nd; ++t)
                    digs[t] = null.at(offset[g] + c * nd + t, sol);
                Code u = F.encode(digs.data());
                if (u) sparse_axpy(F, img, u, cand[g][c]);
            }
            images[g] = std::move(img);
        }
        out.push_back(std::move(images));
    }
    return out;
}

MatK hopf_map_from_images(const FiniteHopf& A, const FiniteHopf& B, const std::vector<SparseKVec>& images) {
    const Fq& F = *A.field;
    std::vector<SparseKVec> img(A.dim);
    img[0] = {{0, F.one()}};
    // walk the monomial basis peeling one generator at a time
    for (std::uint32_t b = 1; b < A.dim; ++b) {
        std::uint64_t v = b;
        std::size_t g = 0;
        while (v % A.mono->radix[g] == 0) {
            v /= A.mono->radix[g];
            ++g;
        }
        std::uint32_t prev = static_cast<std::uint32_t>(b - A.mono->stride[g]);
        img[b] = algebra_mul(B, img[prev], images[g]);
    }
    MatK T(B.field, B.dim, A.dim);
    for (std::uint32_t b = 0; b < A.dim; ++b)
        for (const auto& [i, c] : img[b]) T.at(i, b) = c;
    return T;
}

IsoResult find_hopf_iso(const FiniteHopf& A, const FiniteHopf& B, bool graded, std::uint64_t seed) {
    IsoResult res;
    if (A.dim != B.dim) return res;
    auto sols = hopf_hom_images(A, B, graded);
    if (sols.empty()) {
        // dimension-1 algebras: the empty map is the isomorphism
        if (A.dim == 1) {
            res.isomorphic = true;
            res.witness = MatK::identity(A.field, 1);
        }
        return res;
    }
    const Fq& F = *A.field;
    const std::size_t ng = A.mono->gens.size();
    const std::size_t D = sols.size();
    double logp = std::log2(static_cast<double>(F.p()));

    auto combine = [&](const std::vector<std::uint32_t>& lambda) {
        std::vector<SparseKVec> images(ng);
        for (std::size_t t = 0; t < D; ++t) {
            if (!lambda[t]) continue;
            Code c = F.from_int(lambda[t]);
            for (std::size_t g = 0; g < ng; ++g) sparse_axpy(F, images[g], c, sols[t][g]);
        }
        return images;
    };
    auto attempt = [&](const std::vector<std::uint32_t>& lambda) -> bool {
        MatK T = hopf_map_from_images(A, B, combine(lambda));
        if (T.rank() != A.dim) return false;
        res.isomorphic = true;
        res.witness = std::move(T);
        return true;
    };
    if (D * logp <= 20.0) {
        std::uint64_t total = 1;
        for (std::size_t t = 0; t < D; ++t) total *= F.p();
        std::vector<std::uint32_t> lambda(D, 0);
        for (std::uint64_t it = 1; it < total; ++it) {
            std::uint64_t v = it;
            for (std::size_t t = 0; t < D; ++t) {
                lambda[t] = static_cast<std::uint32_t>(v % F.p());
                v /= F.p();
            }
            if (attempt(lambda)) return res;
        }
        return res;
    }
    Rng rng(seed);
    std::vector<std::uint32_t> lambda(D);
    for (int draw = 0; draw < 10000; ++draw) {
        for (std::size_t t = 0; t < D; ++t) lambda[t] = static_cast<std::uint32_t>(rng.below(F.p()));
        if (attempt(lambda)) return res;
    }
    res.certain = false;
    return res;
}

} // namespace shtukalab
