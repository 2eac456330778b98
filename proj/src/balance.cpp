#include "shtukalab/balance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shtukalab {

namespace {

/// Linearized matrix of x -> x^(p^t) between two primitive bases: columns are
/// the coordinates of src[j]^(p^t) in the tgt basis. Returns false when some
/// power leaves the target span (cannot happen for graded inputs).
bool ppow_map(const FiniteHopf& H, const std::vector<SparseKVec>& src, const std::vector<SparseKVec>& tgt,
              std::uint32_t t, MatK& out) {
    MatK Z(H.field, H.dim, tgt.size());
    for (std::size_t j = 0; j < tgt.size(); ++j)
        for (const auto& [b, c] : tgt[j]) Z.at(b, j) = c;
    MatK Q(H.field, H.dim, src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
        SparseKVec pw = algebra_pow_p(H, src[j], t);
        for (const auto& [b, c] : pw) Q.at(b, j) = c;
    }
    return Z.solve(Q, out);
}

} // namespace

BalanceReport is_balanced(const GroupSchemeHandle& G) {
    const FiniteHopf& H = G.hopf;
    const Fq& F = *H.field;
    const std::uint32_t r = F.r();

    Primitives P = primitives(H);
    BalanceReport rep;
    rep.order = H.dim;
    rep.prim_ranks.resize(r);
    for (std::uint32_t s = 0; s < r; ++s) rep.prim_ranks[s] = static_cast<std::uint32_t>(P.by_s[s].size());

    // (iii) equal ranks
    rep.cond_iii = std::all_of(rep.prim_ranks.begin(), rep.prim_ranks.end(),
                               [&](std::uint32_t v) { return v == rep.prim_ranks[0]; });

    // (i) p-power maps bijective for 0 <= t < r-1
    rep.cond_i = true;
    for (std::uint32_t t = 0; t + 1 < r; ++t) {
        if (P.by_s[t].size() != P.by_s[t + 1].size()) {
            rep.cond_i = false;
            break;
        }
        MatK L;
        if (!ppow_map(H, P.by_s[t], P.by_s[t + 1], 1, L) || !L.invertible()) {
            rep.cond_i = false;
            break;
        }
    }

    // (ii) x -> x^(p^(r-1)) injective on Prim_1
    if (r == 1) {
        rep.cond_ii = true;
    } else {
        MatK L;
        if (!ppow_map(H, P.by_s[0], P.by_s[r - 1], r - 1, L)) {
            rep.cond_ii = false;
        } else {
            rep.cond_ii = L.rank() == P.by_s[0].size();
        }
    }

    // (iv) ord(G) = q^(rk Prim_1), compared exactly via p-logarithms
    {
        std::uint64_t d = H.dim;
        std::uint32_t logp = 0;
        while (d % F.p() == 0) {
            d /= F.p();
            ++logp;
        }
        rep.cond_iv = (d == 1) && logp == r * rep.prim_ranks[0];
    }

    // additive type relative to the F_q-action: I = (Prim_1) as an ideal.
    // When every generator has weight class 1 it lies in Prim_1 itself and
    // the ideal is all of I; otherwise compute the ideal span.
    {
        std::uint32_t mm = F.q() > 2 ? static_cast<std::uint32_t>(F.q() - 1) : 1;
        bool all_weight_one = H.mono.has_value();
        if (H.mono)
            for (const auto& g : H.mono->gens) all_weight_one &= (g.weight % mm) == (1 % mm);
        if (all_weight_one) {
            rep.additive_type = true;
        } else {
            SparseEchelon span(H.field);
            std::size_t goal = H.dim - 1;
            for (std::uint32_t b = 0; b < H.dim && span.rank() < goal; ++b)
                for (const auto& z : P.by_s[0]) {
                    SparseKVec prod = algebra_mul(H, SparseKVec{{b, F.one()}}, z);
                    span.insert(prod);
                    if (span.rank() >= goal) break;
                }
            rep.additive_type = span.rank() == goal;
        }
    }
    return rep;
}

QuasiBalance is_quasi_balanced(const GroupSchemeHandle& G) {
    QuasiBalance out;
    out.ranks = eigen_profile(G.hopf);
    out.quasi_balanced =
        std::all_of(out.ranks.begin(), out.ranks.end(), [&](std::uint64_t v) { return v == out.ranks[0]; });
    return out;
}

EigenCount s_series(std::uint32_t p, std::uint32_t r, const std::vector<std::uint64_t>& s_list) {
    EigenCount out;
    out.q = 1;
    for (std::uint32_t i = 0; i < r; ++i) out.q *= p;
    out.exponents = s_list;

    std::uint64_t total = 1;
    for (std::uint64_t s : s_list) {
        for (std::uint64_t i = 0; i < s; ++i) {
            total *= p;
            if (total > (1u << 20)) fail(Errc::TooLarge, "prod p^(s_i) exceeds 2^20");
        }
    }
    std::vector<std::int64_t> coeffs{1};
    for (std::uint64_t s : s_list) {
        std::uint64_t ps = 1;
        for (std::uint64_t i = 0; i < s; ++i) ps *= p;
        std::vector<std::int64_t> next(coeffs.size() + ps - 1, 0);
        for (std::size_t a = 0; a < coeffs.size(); ++a)
            for (std::uint64_t b = 0; b < ps; ++b) next[a + b] += coeffs[a];
        coeffs = std::move(next);
    }
    out.s_coeffs = coeffs;

    std::uint64_t qm1 = out.q - 1;
    out.ranks.assign(qm1, 0);
    for (std::size_t a = 1; a < coeffs.size(); ++a) {
        std::uint64_t cls = a % qm1;
        if (cls == 0) cls = qm1; // a = 0 mod (q-1) folds into class q-1
        out.ranks[cls - 1] += static_cast<std::uint64_t>(coeffs[a]);
    }
    return out;
}

std::uint64_t count_eigen_tuples(std::uint64_t q, std::uint32_t n, std::uint32_t j, bool exhaustive) {
    std::uint64_t qm1 = q - 1;
    if (j < 1 || j > qm1) fail(Errc::BadElement, "class index out of range 1..q-1");
    if (!exhaustive) {
        std::uint64_t acc = 0, pw = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            acc += pw;
            pw *= q;
        }
        return acc;
    }
    double logtotal = n * std::log2(static_cast<double>(q));
    if (logtotal > 24.0) fail(Errc::TooLarge, "exhaustive enumeration out of range");
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < n; ++i) total *= q;
    std::uint64_t count = 0;
    for (std::uint64_t it = 1; it < total; ++it) {
        std::uint64_t v = it, sum = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            sum += v % q;
            v /= q;
        }
        std::uint64_t cls = qm1 == 1 ? 1 : (sum % qm1 == 0 ? qm1 : sum % qm1);
        if (cls == j) ++count;
    }
    return count;
}

LisaVerdict lisa_criterion(std::uint32_t p, std::uint32_t r, const std::vector<std::uint64_t>& s_list) {
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < r; ++i) q *= p;
    LisaVerdict v;
    std::size_t off = 0;
    for (std::uint64_t s : s_list)
        if (s % r != 0) ++off;
    std::ostringstream os;
    if (q != 4) {
        v.quasi_balanced = off == 0;
        os << (v.quasi_balanced ? "r divides every s_i" : std::to_string(off) + " exponent(s) not divisible by r");
    } else {
        v.quasi_balanced = off % 6 == 0;
        os << off << " exponent(s) not divisible by r; " << (v.quasi_balanced ? "a" : "not a") << " multiple of 6";
    }
    v.reason = os.str();
    return v;
}

std::vector<std::uint64_t> product_rank_formula(const std::vector<std::uint64_t>& gprof,
                                                const std::vector<std::uint64_t>& hprof, std::uint64_t q) {
    std::uint64_t qm1 = q - 1;
    if (gprof.size() != qm1 || hprof.size() != qm1)
        fail(Errc::LengthMismatch, "profiles must have length q-1");
    // extended profiles with the constant line at index 0
    auto ext = [&](const std::vector<std::uint64_t>& v, std::uint64_t k) -> std::uint64_t {
        return k == 0 ? 1 : v[k - 1];
    };
    std::vector<std::uint64_t> out(qm1, 0);
    for (std::uint64_t k = 0; k < q; ++k)
        for (std::uint64_t l = 0; l < q; ++l) {
            if (k == 0 && l == 0) continue; // A (x) A is the new constant line
            std::uint64_t cls = (k + l) % qm1;
            if (cls == 0) cls = qm1;
            out[cls - 1] += ext(gprof, k) * ext(hprof, l);
        }
    return out;
}

} // namespace shtukalab
