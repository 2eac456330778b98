#include "shtukalab/classify.hpp"

#include <algorithm>
#include <cmath>

namespace shtukalab {

namespace {

struct ExtField {
    FqPtr K;
    Code gen_image; // image of the working field's generator in K
};

/// Extension of k = F_{q^m0} of relative degree d, as F_{q^{m0*d}} with a
/// deterministic modulus, plus the embedding of k.
ExtField extension_of(const Fq& k, std::uint32_t rel_degree) {
    ExtField out;
    if (rel_degree == 1) {
        out.K = Fq::create(k.p(), k.r(), k.m(), k.modulus());
        out.gen_image = out.K->gen();
        return out;
    }
    out.K = make_extension_field(k.p(), k.r(), k.m() * rel_degree);
    out.gen_image = embed_generator(k, *out.K);
    return out;
}

/// Count of solutions of an F_p-linear "q-power fixed point" style system:
/// rows of (A . frob_tau - B) v = 0 over K, flattened to digits.
std::uint64_t additive_solution_count(const Fq& K, const std::vector<std::vector<std::pair<std::size_t, Code>>>& lhs_frob,
                                      const std::vector<std::vector<std::pair<std::size_t, Code>>>& lhs_lin,
                                      std::size_t nvars, std::uint32_t tau) {
    const std::uint32_t nd = K.degree();
    const std::uint32_t p = K.p();
    const auto& frob_t = K.frob_matrix(tau % nd);
    MatP sys(p, lhs_frob.size() * nd, nvars * nd);
    for (std::size_t e = 0; e < lhs_frob.size(); ++e) {
        for (const auto& [v, coef] : lhs_frob[e]) {
            auto mulm = K.mul_matrix(coef);
            for (std::uint32_t a = 0; a < nd; ++a)
                for (std::uint32_t b = 0; b < nd; ++b) {
                    std::uint64_t acc = 0;
                    for (std::uint32_t t = 0; t < nd; ++t)
                        acc += static_cast<std::uint64_t>(mulm[static_cast<std::size_t>(a) * nd + t]) *
                               frob_t[static_cast<std::size_t>(t) * nd + b];
                    acc %= p;
                    if (!acc) continue;
                    auto& cell = sys.at(e * nd + a, v * nd + b);
                    cell = static_cast<std::uint32_t>((cell + acc) % p);
                }
        }
        for (const auto& [v, coef] : lhs_lin[e]) {
            auto mulm = K.mul_matrix(coef);
            for (std::uint32_t a = 0; a < nd; ++a)
                for (std::uint32_t b = 0; b < nd; ++b) {
                    std::uint32_t val = mulm[static_cast<std::size_t>(a) * nd + b];
                    if (!val) continue;
                    auto& cell = sys.at(e * nd + a, v * nd + b);
                    cell = static_cast<std::uint32_t>((cell + p - val) % p);
                }
        }
    }
    std::size_t nullity = sys.nullspace().cols;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < nullity; ++i) count *= p;
    return count;
}

} // namespace

std::uint64_t count_fixed_vectors(const Shtuka& M, std::uint32_t ext_degree) {
    const Fq& k = *M.field;
    ExtField E = extension_of(k, ext_degree);
    const Fq& K = *E.K;
    // F v^[q] = v over K
    std::vector<std::vector<std::pair<std::size_t, Code>>> lhs_frob(M.rank), lhs_lin(M.rank);
    for (std::size_t i = 0; i < M.rank; ++i) {
        for (std::size_t j = 0; j < M.rank; ++j) {
            Code c = M.F.at(i, j);
            if (c) lhs_frob[i].emplace_back(j, embed_code(k, K, E.gen_image, c));
        }
        lhs_lin[i].emplace_back(i, K.one());
    }
    return additive_solution_count(K, lhs_frob, lhs_lin, M.rank, K.r());
}

std::uint64_t point_count(const GroupSchemeHandle& G, std::uint32_t m) {
    const FiniteHopf& H = G.hopf;
    const Fq& k = *H.field;
    if (!H.mono) fail(Errc::TooLarge, "point counting requires a presented algebra");
    if (H.dim > 64) fail(Errc::TooLarge, "point counting caps the algebra dimension at 64");
    if (m == 0 || m % k.m() != 0)
        fail(Errc::DegreeMismatch, "the extension degree must be a positive multiple of m");
    {
        double logqm = m * std::log2(static_cast<double>(k.q()));
        if (logqm > 12.0) fail(Errc::TooLarge, "point counting caps the field at q^m <= 2^12");
    }
    ExtField E = extension_of(k, m / k.m());
    const Fq& K = *E.K;

    const auto& gens = H.mono->gens;
    const std::size_t ng = gens.size();
    // relations x_g^{e_g} = l_g(x) are additive: one F_p-linear block per generator
    std::vector<std::vector<std::pair<std::size_t, Code>>> lhs_frob(ng), lhs_lin(ng);
    std::uint64_t count = 1;
    std::vector<std::uint32_t> taus(ng);
    for (std::size_t g = 0; g < ng; ++g) {
        std::uint64_t e = gens[g].trunc;
        std::uint32_t tau = 0;
        while (e % k.p() == 0) {
            e /= k.p();
            ++tau;
        }
        taus[g] = tau;
        lhs_frob[g].emplace_back(g, K.one());
        for (const auto& [h, c] : gens[g].relation)
            lhs_lin[g].emplace_back(h, embed_code(k, K, E.gen_image, c));
    }
    // taus may differ per generator; build the system per-row with its own twist
    {
        const std::uint32_t nd = K.degree();
        const std::uint32_t p = K.p();
        MatP sys(p, ng * nd, ng * nd);
        for (std::size_t g = 0; g < ng; ++g) {
            const auto& frob_t = K.frob_matrix(taus[g] % nd);
            for (const auto& [v, coef] : lhs_frob[g]) {
                auto mulm = K.mul_matrix(coef);
                for (std::uint32_t a = 0; a < nd; ++a)
                    for (std::uint32_t b = 0; b < nd; ++b) {
                        std::uint64_t acc = 0;
                        for (std::uint32_t t = 0; t < nd; ++t)
                            acc += static_cast<std::uint64_t>(mulm[static_cast<std::size_t>(a) * nd + t]) *
                                   frob_t[static_cast<std::size_t>(t) * nd + b];
                        acc %= p;
                        if (!acc) continue;
                        auto& cell = sys.at(g * nd + a, v * nd + b);
                        cell = static_cast<std::uint32_t>((cell + acc) % p);
                    }
            }
            for (const auto& [v, coef] : lhs_lin[g]) {
                auto mulm = K.mul_matrix(coef);
                for (std::uint32_t a = 0; a < nd; ++a)
                    for (std::uint32_t b = 0; b < nd; ++b) {
                        std::uint32_t val = mulm[static_cast<std::size_t>(a) * nd + b];
                        if (!val) continue;
                        auto& cell = sys.at(g * nd + a, v * nd + b);
                        cell = static_cast<std::uint32_t>((cell + p - val) % p);
                    }
            }
        }
        std::size_t nullity = sys.nullspace().cols;
        count = 1;
        for (std::size_t i = 0; i < nullity; ++i) count *= p;
    }

    // literal enumeration cross-check on small inputs
    double logtuples = ng * std::log2(static_cast<double>(K.card()));
    if (logtuples <= 16.0) {
        std::uint64_t total = 1;
        for (std::size_t g = 0; g < ng; ++g) total *= K.card();
        std::uint64_t brute = 0;
        std::vector<Code> v(ng);
        for (std::uint64_t it = 0; it < total; ++it) {
            std::uint64_t w = it;
            for (std::size_t g = 0; g < ng; ++g) {
                v[g] = static_cast<Code>(w % K.card());
                w /= K.card();
            }
            bool ok = true;
            for (std::size_t g = 0; g < ng && ok; ++g) {
                Code lhs = K.pow(v[g], gens[g].trunc);
                Code rhs = K.zero();
                for (const auto& [h, c] : gens[g].relation)
                    rhs = K.add(rhs, K.mul(embed_code(k, K, E.gen_image, c), v[h]));
                ok = lhs == rhs;
            }
            if (ok) ++brute;
        }
        if (brute != count) fail(Errc::Internal, "point count disagrees with enumeration");
    }
    return count;
}

StructureReport structure_decompose(const GroupSchemeHandle& G, std::uint32_t constancy_cap) {
    BalanceReport rep = is_balanced(G);
    if (!rep.balanced()) fail(Errc::NotBalanced, "structure theorem needs a balanced group scheme");
    const Fq& k = *G.hopf.field;

    Shtuka M = dieudonne(G);
    SsNilSplit split = ss_nil_split(M);
    StructureReport out;
    out.total_order = G.hopf.dim;
    out.etale_order = 1;
    for (std::size_t i = 0; i < split.ss_dim; ++i) out.etale_order *= k.q();
    out.connected_exponents = cyclic_decompose(split.nil).exponents;

    std::uint64_t conn_order = 1;
    for (std::size_t s : out.connected_exponents)
        for (std::size_t i = 0; i < s; ++i) conn_order *= k.q();
    if (out.etale_order * conn_order != out.total_order)
        fail(Errc::Internal, "order product law violated");

    for (std::uint32_t d = 1; d <= constancy_cap; ++d) {
        double bits = static_cast<double>(k.degree()) * d * std::log2(static_cast<double>(k.p()));
        if (bits > 20.0) break;
        if (count_fixed_vectors(split.ss, d) == out.etale_order) {
            out.constancy_degree = d * k.m();
            break;
        }
    }
    if (!out.constancy_degree) out.constancy_exceeds_cap = true;
    return out;
}

} // namespace shtukalab
