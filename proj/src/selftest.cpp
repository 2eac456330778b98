#include "shtukalab/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "shtukalab/rng.hpp"

namespace shtukalab {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct FieldSpec {
    std::uint32_t p, r, m;
    std::vector<std::uint32_t> modulus;
};

/// Explicit moduli for the test fields (the library itself never picks moduli
/// for job inputs).
const std::vector<FieldSpec>& field_specs() {
    static const std::vector<FieldSpec> specs = {
        {2, 1, 1, {0, 1}},       // F_2
        {3, 1, 1, {0, 1}},       // F_3
        {2, 2, 1, {1, 1, 1}},    // F_4
        {5, 1, 1, {0, 1}},       // F_5
        {2, 3, 1, {1, 1, 0, 1}}, // F_8
        {3, 2, 1, {1, 0, 1}},    // F_9
    };
    return specs;
}

FqPtr make_field(std::size_t idx) {
    const FieldSpec& s = field_specs()[idx];
    return Fq::create(s.p, s.r, s.m, s.modulus);
}

Shtuka random_shtuka(FqPtr F, std::size_t rank, Rng& rng) {
    MatK mat(F, rank, rank);
    for (auto& c : mat.a) c = static_cast<Code>(rng.below(F->card()));
    return Shtuka(std::move(F), std::move(mat));
}

/// Random F_q-additive presentation: all generators weight 1, p-power
/// truncation exponents, linear relation images where the weights allow them.
HopfPresentation random_additive_presentation(FqPtr F, Rng& rng, std::uint64_t dim_cap) {
    HopfPresentation P;
    P.field = F;
    std::size_t ngens = 1 + rng.below(3);
    std::uint64_t dim = 1;
    for (std::size_t g = 0; g < ngens; ++g) {
        if (dim * F->p() > dim_cap) break;
        // largest allowed p-power budget for this generator, capped at p^(2r)
        std::uint32_t tmax = 0;
        std::uint64_t grow = 1;
        while (dim * grow * F->p() <= dim_cap && tmax < 2 * F->r()) {
            grow *= F->p();
            ++tmax;
        }
        std::uint32_t t = 1 + static_cast<std::uint32_t>(rng.below(tmax));
        GeneratorSpec spec;
        spec.name = "x" + std::to_string(g);
        spec.weight = 1;
        spec.trunc = 1;
        for (std::uint32_t i = 0; i < t; ++i) spec.trunc *= F->p();
        dim *= spec.trunc;
        P.gens.push_back(std::move(spec));
    }
    // relation images allowed when weight(x^e) = e = 1 mod (q-1), i.e. r | log_p e
    std::uint32_t mm = F->q() > 2 ? static_cast<std::uint32_t>(F->q() - 1) : 1;
    for (auto& g : P.gens) {
        if ((g.trunc % mm) != (1 % mm)) continue;
        if (rng.below(2) == 0) continue; // half of the eligible relations stay zero
        for (std::size_t h = 0; h < P.gens.size(); ++h)
            if (rng.below(2)) {
                Code c = static_cast<Code>(rng.below(F->card()));
                if (c) g.relation.emplace_back(static_cast<std::uint32_t>(h), c);
            }
    }
    return P;
}

/// alpha_{p^{s_1}} x ... x alpha_{p^{s_h}} as a presentation.
HopfPresentation alpha_product(FqPtr F, const std::vector<std::uint64_t>& s_list) {
    HopfPresentation P;
    P.field = F;
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        GeneratorSpec g;
        g.name = "x" + std::to_string(i);
        g.weight = 1;
        g.trunc = 1;
        for (std::uint64_t t = 0; t < s_list[i]; ++t) g.trunc *= F->p();
        P.gens.push_back(std::move(g));
    }
    return P;
}

json field_json(const Fq& F) {
    json f;
    f["p"] = F.p();
    f["r"] = F.r();
    f["m"] = F.m();
    f["modulus"] = F.modulus();
    return f;
}

std::string shtuka_job(const Shtuka& M, const std::string& cmd) {
    json j;
    j["field"] = field_json(*M.field);
    json rows = json::array();
    for (std::size_t i = 0; i < M.rank; ++i) {
        json row = json::array();
        for (std::size_t jx = 0; jx < M.rank; ++jx) row.push_back(M.field->str(M.F.at(i, jx)));
        rows.push_back(row);
    }
    j["shtuka"] = {{"dim", M.rank}, {"matrix", rows}};
    j["cmd"] = cmd;
    return j.dump(2);
}

std::string presentation_job(const HopfPresentation& P, const std::string& cmd) {
    json j;
    j["field"] = field_json(*P.field);
    json gens = json::array();
    for (const auto& g : P.gens) {
        json rel = json::object();
        for (const auto& [h, c] : g.relation) rel[P.gens[h].name] = P.field->str(c);
        gens.push_back({{"name", g.name}, {"weight", g.weight}, {"trunc", g.trunc}, {"relation", rel}});
    }
    j["presentation"] = {{"generators", gens}};
    j["cmd"] = cmd;
    return j.dump(2);
}

struct Checker {
    CriterionResult res;
    Clock::time_point t0 = Clock::now();

    Checker(int id, std::string name) {
        res.id = id;
        res.name = std::move(name);
        res.pass = true;
    }
    void fail_with(const std::string& why, std::optional<std::string> job = std::nullopt) {
        if (!res.pass) return;
        res.pass = false;
        res.detail = why;
        res.counterexample_job = std::move(job);
    }
    CriterionResult finish(const std::string& ok_detail = "") {
        res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (res.pass && !ok_detail.empty()) res.detail = ok_detail;
        return res;
    }
};

// ---- criterion implementations ---------------------------------------------

CriterionResult crit_roundtrip(std::uint64_t seed) {
    Checker C(1, "round-trip equivalence on 200 random shtukas");
    Rng rng(seed ^ 0xc1);
    for (int it = 0; it < 200 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        std::size_t rank = 1 + rng.below(3);
        Shtuka M = random_shtuka(F, rank, rng);
        RoundtripReport rt = roundtrip_shtuka(M);
        if (!rt.counit_iso) {
            C.fail_with("v_M failed: " + rt.details, shtuka_job(M, "roundtrip"));
            break;
        }
        if (it % 20 == 0) {
            GroupSchemeHandle G = drinfeld(M);
            IsoResult iso = shtukas_isomorphic(M, dieudonne(G), seed);
            if (!iso.isomorphic) C.fail_with("hom-space search found no isomorphism", shtuka_job(M, "roundtrip"));
        }
    }
    auto out = C.finish("200/200 round trips");
    if (out.pass && out.seconds >= 60.0) {
        out.pass = false;
        out.detail = "runtime exceeded 60 s";
    }
    return out;
}

CriterionResult crit_orders(std::uint64_t seed) {
    Checker C(2, "order formulas ord G(M) = q^rk and ord G = p^dim Prim");
    Rng rng(seed ^ 0xc2);
    for (int it = 0; it < 60 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        std::size_t rank = rng.below(4); // include rank 0
        Shtuka M = random_shtuka(F, rank, rng);
        GroupSchemeHandle G = drinfeld(M);
        std::uint64_t expect = 1;
        for (std::size_t i = 0; i < rank; ++i) expect *= F->q();
        if (G.hopf.order() != expect) C.fail_with("ord G(M) != q^rk", shtuka_job(M, "drinfeld"));
    }
    for (int it = 0; it < 60 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        // general additive-type presentations, arbitrary p-power weights
        HopfPresentation P = random_additive_presentation(F, rng, 512);
        bool mixed = false;
        for (auto& g : P.gens)
            if (rng.below(2) && F->r() > 1) {
                std::uint32_t s = static_cast<std::uint32_t>(rng.below(F->r()));
                g.weight = 1;
                for (std::uint32_t i = 0; i < s; ++i) g.weight *= F->p();
                mixed |= g.weight != 1;
            }
        if (mixed)
            for (auto& g : P.gens) g.relation.clear(); // keep relations weight-compatible
        FiniteHopf H = expand(P);
        std::uint64_t d = H.order();
        std::uint32_t logp = 0;
        while (d % F->p() == 0) {
            d /= F->p();
            ++logp;
        }
        if (d != 1 || logp != prim_dim(H)) C.fail_with("ord G != p^dim Prim", presentation_job(P, "expand"));
    }
    return C.finish("120 samples");
}

CriterionResult crit_q4_example(std::uint64_t) {
    Checker C(3, "q=4 counterexample (alpha_2)^6: ranks 21, quasi-balanced, not balanced");
    FqPtr F = make_field(2); // F_4
    HopfPresentation P = alpha_product(F, {1, 1, 1, 1, 1, 1});
    GroupSchemeHandle G{expand(P)};
    QuasiBalance qb = is_quasi_balanced(G);
    BalanceReport b = is_balanced(G);
    if (qb.ranks != std::vector<std::uint64_t>{21, 21, 21})
        C.fail_with("eigenranks are not (21,21,21)", presentation_job(P, "quasibalance"));
    else if (!qb.quasi_balanced)
        C.fail_with("not detected as quasi-balanced", presentation_job(P, "quasibalance"));
    else if (b.balanced())
        C.fail_with("wrongly detected as balanced", presentation_job(P, "balance"));
    auto out = C.finish("rk I_j = 21 for j = 1,2,3");
    if (out.pass && out.seconds >= 5.0) {
        out.pass = false;
        out.detail = "runtime exceeded 5 s";
    }
    return out;
}

CriterionResult crit_alpha_classification(std::uint64_t) {
    Checker C(4, "alpha_{p^s} balanced iff r | s (p in {2,3}, r in {1,2}, s <= 4)");
    for (std::uint32_t p : {2u, 3u}) {
        for (std::uint32_t r : {1u, 2u}) {
            FqPtr F;
            for (std::size_t i = 0; i < field_specs().size(); ++i)
                if (field_specs()[i].p == p && field_specs()[i].r == r) F = make_field(i);
            for (std::uint64_t s = 1; s <= 4 && C.res.pass; ++s) {
                HopfPresentation P = alpha_product(F, {s});
                BalanceReport b = is_balanced(GroupSchemeHandle{expand(P)});
                bool expect = s % r == 0;
                if (b.balanced() != expect)
                    C.fail_with("alpha_{p^s} misclassified at p=" + std::to_string(p) + " r=" + std::to_string(r) +
                                    " s=" + std::to_string(s),
                                presentation_job(P, "balance"));
            }
        }
    }
    return C.finish("16 cases");
}

CriterionResult crit_balequiv(std::uint64_t seed) {
    Checker C(5, "conditions (i)-(iv) agree on 300 expanded group schemes");
    Rng rng(seed ^ 0xc5);
    for (int it = 0; it < 300 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        HopfPresentation P = random_additive_presentation(F, rng, 256);
        BalanceReport b = is_balanced(GroupSchemeHandle{expand(P)});
        if (!b.additive_type) {
            C.fail_with("sample unexpectedly not of F_q-additive type", presentation_job(P, "balance"));
            break;
        }
        if (b.cond_i != b.cond_ii || b.cond_ii != b.cond_iii || b.cond_iii != b.cond_iv)
            C.fail_with("condition flags diverge", presentation_job(P, "balance"));
    }
    return C.finish("300 samples");
}

CriterionResult crit_quasi_vs_balanced(std::uint64_t seed) {
    Checker C(6, "quasi-balanced vs balanced (q != 4 equal; q = 4 exceptions match the criterion)");
    Rng rng(seed ^ 0xc6);
    // q != 4: the two predicates agree on every F_q-additive sample
    for (int it = 0; it < 150 && C.res.pass; ++it) {
        std::size_t fidx;
        do
            fidx = rng.below(field_specs().size());
        while (field_specs()[fidx].p == 2 && field_specs()[fidx].r == 2);
        FqPtr F = make_field(fidx);
        HopfPresentation P = random_additive_presentation(F, rng, 256);
        GroupSchemeHandle G{expand(P)};
        if (is_balanced(G).balanced() != is_quasi_balanced(G).quasi_balanced)
            C.fail_with("q != 4 predicate mismatch", presentation_job(P, "quasibalance"));
    }
    // q = 4: alpha products; discrepancies exactly where 6 | #{s_i not divisible by r}
    FqPtr F4 = make_field(2);
    for (int it = 0; it < 80 && C.res.pass; ++it) {
        std::vector<std::uint64_t> s_list;
        std::size_t h = 1 + rng.below(7);
        std::uint64_t dim = 1;
        for (std::size_t i = 0; i < h; ++i) {
            std::uint64_t s = 1 + rng.below(3);
            if (dim << s > 4096) break;
            dim <<= s;
            s_list.push_back(s);
        }
        if (s_list.empty()) s_list.push_back(1);
        HopfPresentation P = alpha_product(F4, s_list);
        GroupSchemeHandle G{expand(P)};
        bool quasi = is_quasi_balanced(G).quasi_balanced;
        bool balanced = is_balanced(G).balanced();
        LisaVerdict v = lisa_criterion(2, 2, s_list);
        if (balanced && !quasi) C.fail_with("balanced but not quasi-balanced", presentation_job(P, "quasibalance"));
        if (quasi != v.quasi_balanced)
            C.fail_with("closed-form criterion disagrees with the eigenrank profile",
                        presentation_job(P, "quasibalance"));
        std::size_t off = 0;
        for (auto s : s_list)
            if (s % 2) ++off;
        if (quasi && !balanced && off % 6 != 0)
            C.fail_with("discrepancy not of the predicted shape", presentation_job(P, "quasibalance"));
    }
    return C.finish("230 samples");
}

CriterionResult crit_counting(std::uint64_t seed) {
    Checker C(7, "eigen tuple counts, S(X) vs eigen profiles, product formula");
    Rng rng(seed ^ 0xc7);
    for (std::uint64_t q : {2u, 3u, 4u, 5u}) {
        for (std::uint32_t n = 1; n <= 4 && C.res.pass; ++n)
            for (std::uint32_t j = 1; j <= q - 1; ++j) {
                std::uint64_t ex = count_eigen_tuples(q, n, j, true);
                std::uint64_t cf = count_eigen_tuples(q, n, j, false);
                if (ex != cf)
                    C.fail_with("tuple count mismatch at q=" + std::to_string(q) + " n=" + std::to_string(n) +
                                " j=" + std::to_string(j));
            }
    }
    // s_series vs eigen_profile
    for (int it = 0; it < 40 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        std::vector<std::uint64_t> s_list;
        std::uint64_t dim = 1;
        std::size_t h = 1 + rng.below(3);
        for (std::size_t i = 0; i < h; ++i) {
            std::uint64_t s = 1 + rng.below(3);
            std::uint64_t f = 1;
            for (std::uint64_t t = 0; t < s; ++t) f *= F->p();
            if (dim * f > 1024) break;
            dim *= f;
            s_list.push_back(s);
        }
        if (s_list.empty()) s_list.push_back(1);
        HopfPresentation P = alpha_product(F, s_list);
        EigenCount ec = s_series(F->p(), F->r(), s_list);
        if (ec.ranks != eigen_profile(expand(P)))
            C.fail_with("S(X) ranks differ from the expanded profile", presentation_job(P, "quasibalance"));
    }
    // product formula vs tensor profiles
    for (int it = 0; it < 50 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        HopfPresentation PA = random_additive_presentation(F, rng, 64);
        HopfPresentation PB = random_additive_presentation(F, rng, 64);
        FiniteHopf A = expand(PA), B = expand(PB);
        auto predicted = product_rank_formula(eigen_profile(A), eigen_profile(B), F->q());
        auto actual = eigen_profile(tensor_product(A, B));
        if (predicted != actual) C.fail_with("product formula mismatch", presentation_job(PA, "quasibalance"));
    }
    return C.finish("counts, 40 series, 50 products");
}

CriterionResult crit_duality(std::uint64_t seed) {
    Checker C(8, "duality: double dual equality, alpha_p self-dual, dual of constant F_p");
    Rng rng(seed ^ 0xc8);
    for (int it = 0; it < 50 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        HopfPresentation P = random_additive_presentation(F, rng, 128);
        FiniteHopf H = expand(P);
        FiniteHopf DD = cartier_dual(cartier_dual(H));
        if (!structure_equal(DD, densify(H)))
            C.fail_with("double dual differs structurally", presentation_job(P, "expand"));
    }
    for (std::uint32_t p : {2u, 3u}) {
        FqPtr F = make_field(p == 2 ? 0 : 1);
        HopfPresentation P = alpha_product(F, {1});
        FiniteHopf H = expand(P);
        IsoResult iso = find_hopf_iso(H, cartier_dual(H), /*graded=*/false, seed);
        if (!iso.isomorphic) C.fail_with("alpha_p not found self-dual at p=" + std::to_string(p));
        // constant F_p
        HopfPresentation PC = alpha_product(F, {1});
        PC.gens[0].relation = {{0, F->one()}};
        FiniteHopf D = cartier_dual(expand(PC));
        if (prim_dim(D) != 0) C.fail_with("dual of the constant group has primitives");
        auto gl = group_likes(D);
        if (gl.size() != p) C.fail_with("dual of the constant group has wrong group-like count");
        bool has_order_p = false;
        for (const auto& x : gl) {
            // order of the group-like under multiplication
            SparseKVec acc{{0, F->one()}};
            SparseKVec xv = dense_to_sparse(x);
            std::uint32_t ord = 0;
            do {
                acc = algebra_mul(D, acc, xv);
                ++ord;
            } while (!(acc.size() == 1 && acc[0].first == 0 && acc[0].second == F->one()) && ord <= p);
            if (ord == p) has_order_p = true;
        }
        if (!has_order_p) C.fail_with("no group-like of order p in the dual of the constant group");
    }
    return C.finish("50 double duals + classical pairs");
}

CriterionResult crit_verschiebung(std::uint64_t seed) {
    Checker C(9, "V vanishes on I for additive type; dim Prim = lie dim of the dual");
    Rng rng(seed ^ 0xc9);
    for (int it = 0; it < 40 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        HopfPresentation P = random_additive_presentation(F, rng, 81);
        FiniteHopf H = expand(P);
        FrobVer fv = frobenius_verschiebung(H);
        for (std::uint32_t j = 0; j < H.dim && C.res.pass; ++j)
            for (std::uint32_t i = 0; i < H.dim; ++i) {
                Code expect = (i == 0 && j == 0) ? F->one() : F->zero();
                if (j >= 1 && fv.V.at(i, j) != 0) {
                    C.fail_with("V does not vanish on I", presentation_job(P, "expand"));
                    break;
                }
                if (j == 0 && fv.V.at(i, 0) != expect && i > 0) {
                    C.fail_with("V(1) != 1", presentation_job(P, "expand"));
                    break;
                }
            }
        if (C.res.pass && prim_dim(H) != lie_dim_of_dual(H))
            C.fail_with("dim Prim != dim I/I^2 of the dual", presentation_job(P, "expand"));
        if (C.res.pass) {
            // F of the dual kills I iff I^p = 0 upstairs, i.e. all dual basis p-powers vanish
            FiniteHopf D = cartier_dual(H);
            MatK FD = frobenius_matrix(D);
            bool f_kills = true;
            for (std::uint32_t j = 1; j < D.dim; ++j)
                for (std::uint32_t i = 0; i < D.dim; ++i) f_kills &= (FD.at(i, j) == 0);
            bool ip_zero = true;
            for (std::uint32_t j = 1; j < D.dim && ip_zero; ++j)
                ip_zero = algebra_pow_p(D, {{j, F->one()}}, 1).empty();
            if (f_kills != ip_zero) C.fail_with("F_dual = 0 vs I^p = 0 disagree", presentation_job(P, "expand"));
        }
    }
    return C.finish("40 samples");
}

CriterionResult crit_functor_properties(std::uint64_t seed) {
    Checker C(10, "etale/connected criteria and cotangent dimension");
    Rng rng(seed ^ 0xca);
    for (int it = 0; it < 40 && C.res.pass; ++it) {
        FqPtr F = make_field(rng.below(field_specs().size()));
        std::size_t rank = 1 + rng.below(3);
        Shtuka M = random_shtuka(F, rank, rng);
        if (std::pow(double(F->q()), double(rank)) > 512) continue;
        GroupSchemeHandle G = drinfeld(M);

        bool etale = is_invertible(M);
        bool connected = is_nilpotent(M);
        std::size_t cot = cotangent_dim(G.hopf);
        std::size_t coker = rank - M.F.rank();
        if (cot != coker) {
            C.fail_with("dim I/I^2 != dim coker(f)", shtuka_job(M, "drinfeld"));
            break;
        }
        if (etale != (cot == 0)) {
            C.fail_with("etale flag disagrees with the cotangent space", shtuka_job(M, "drinfeld"));
            break;
        }
        SsNilSplit split = ss_nil_split(M);
        if (connected != (split.ss_dim == 0)) {
            C.fail_with("connectedness flag disagrees with the ss part", shtuka_job(M, "drinfeld"));
            break;
        }
        // point-count validation over F_{q^m}, m <= 3
        for (std::uint32_t m = 1; m <= 3; ++m) {
            if (m * std::log2(double(F->q())) > 12 || G.hopf.dim > 64) break;
            std::uint64_t pts = point_count(G, m);
            std::uint64_t expected_ss = point_count(drinfeld(split.ss), m);
            if (connected && pts != 1) {
                C.fail_with("connected sample has extra points", shtuka_job(M, "pointcount"));
                break;
            }
            if (pts != expected_ss) {
                C.fail_with("points differ from the etale part's points", shtuka_job(M, "pointcount"));
                break;
            }
        }
    }
    return C.finish("40 samples, counts m <= 3");
}

CriterionResult crit_restriction(std::uint64_t seed) {
    Checker C(11, "restriction of scalars: canonical embedding extends to a Hopf isomorphism");
    Rng rng(seed ^ 0xcb);
    for (std::uint32_t p : {2u, 3u}) {
        // k = F_{q^2} with the q^2-structure handle (p, 2, 1) and q-structure (p, 1, 2)
        FieldSpec spec = p == 2 ? field_specs()[2] : field_specs()[5];
        FqPtr F_big = Fq::create(spec.p, 2, 1, spec.modulus);
        for (std::size_t rank = 1; rank <= 2; ++rank) {
            for (int it = 0; it < 8 && C.res.pass; ++it) {
                Shtuka M = random_shtuka(F_big, rank, rng);
                if (it == 0)
                    for (auto& c : M.F.a) c = 0; // include the zero map
                if (it == 1) M.F = MatK::identity(F_big, rank);
                Shtuka R = restrict_scalars(M, 2);
                FqPtr F_small = R.field;

                // G_{q^2}(M), regraded along the forgetful functor: weight-1
                // generators with truncation q^2 over the q-structure
                HopfPresentation P;
                P.field = F_small;
                for (std::size_t j = 0; j < rank; ++j) {
                    GeneratorSpec g;
                    g.name = "y" + std::to_string(j);
                    g.weight = 1;
                    g.trunc = F_big->q();
                    for (std::size_t i = 0; i < rank; ++i)
                        if (M.F.at(i, j) != 0) g.relation.emplace_back(static_cast<std::uint32_t>(i), M.F.at(i, j));
                    P.gens.push_back(std::move(g));
                }
                FiniteHopf lhs = expand(P);
                GroupSchemeHandle rhs = drinfeld(R);

                // x_b -> copy of b in block component n-1
                std::vector<SparseKVec> images(rank);
                for (std::size_t b = 0; b < rank; ++b) {
                    std::uint32_t idx =
                        static_cast<std::uint32_t>(rhs.hopf.mono->stride[(2 - 1) * rank + b]);
                    images[b] = {{idx, F_small->one()}};
                }
                MatK T = hopf_map_from_images(lhs, rhs.hopf, images);
                if (!is_hopf_morphism(lhs, rhs.hopf, T, /*check_grading=*/true))
                    C.fail_with("canonical map is not a Hopf morphism", shtuka_job(M, "drinfeld"));
                else if (T.rank() != lhs.dim)
                    C.fail_with("canonical map is not bijective", shtuka_job(M, "drinfeld"));
            }
        }
    }
    return C.finish("2 fields x 2 ranks x 8 samples");
}

CriterionResult crit_structure(std::uint64_t seed) {
    Checker C(12, "structure theorem: decomposition and reassembly on 100 balanced samples");
    Rng rng(seed ^ 0xcc);
    int done = 0;
    while (done < 100 && C.res.pass) {
        std::size_t fidx = rng.below(4); // q in {2,3,4,5}
        FqPtr F = make_field(fidx);
        double logq = std::log2(double(F->q()));
        std::size_t max_rank = static_cast<std::size_t>(12.0 / logq);
        std::size_t rank = 1 + rng.below(std::min<std::size_t>(max_rank, done % 17 == 0 ? max_rank : 5));
        if (std::pow(double(F->q()), double(rank)) > 4096) continue;
        Shtuka M = random_shtuka(F, rank, rng);
        GroupSchemeHandle G = drinfeld(M);
        StructureReport sr = structure_decompose(G);
        ++done;

        std::uint64_t conn = 1;
        for (std::size_t s : sr.connected_exponents)
            for (std::size_t i = 0; i < s; ++i) conn *= F->q();
        if (sr.etale_order * conn != G.hopf.order()) {
            C.fail_with("order product law violated", shtuka_job(M, "classify"));
            break;
        }

        // reassemble: etale part (x) prod alpha_{q^{s_i}}
        SsNilSplit split = ss_nil_split(M);
        FiniteHopf assembled = drinfeld(split.ss).hopf;
        for (std::size_t s : sr.connected_exponents) {
            MatK J(F, s, s);
            for (std::size_t i = 0; i + 1 < s; ++i) J.at(i + 1, i) = F->one();
            assembled = tensor_product(assembled, drinfeld(Shtuka(F, std::move(J))).hopf);
        }
        if (eigen_profile(assembled) != eigen_profile(G.hopf)) {
            C.fail_with("reassembled eigenrank profile differs", shtuka_job(M, "classify"));
            break;
        }
        BalanceReport b1 = is_balanced(G);
        BalanceReport b2 = is_balanced(GroupSchemeHandle{assembled});
        if (b1.balanced() != b2.balanced() || b1.prim_ranks != b2.prim_ranks || b1.cond_i != b2.cond_i ||
            b1.cond_ii != b2.cond_ii || b1.cond_iii != b2.cond_iii || b1.cond_iv != b2.cond_iv) {
            C.fail_with("reassembled balance report differs", shtuka_job(M, "classify"));
            break;
        }
        if (G.hopf.dim <= 64) {
            for (std::uint32_t m = 1; m <= 3; ++m) {
                if (m * std::log2(double(F->q())) > 12) break;
                if (point_count(G, m) != point_count(GroupSchemeHandle{assembled}, m)) {
                    C.fail_with("reassembled point counts differ", shtuka_job(M, "classify"));
                    break;
                }
            }
        }
    }
    return C.finish("100 samples");
}

} // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, bool fail_fast, std::ostream* progress) {
    using Fn = CriterionResult (*)(std::uint64_t);
    const Fn criteria[] = {
        crit_roundtrip,      crit_orders,   crit_q4_example, crit_alpha_classification,
        crit_balequiv,       crit_quasi_vs_balanced, crit_counting, crit_duality,
        crit_verschiebung,   crit_functor_properties, crit_restriction, crit_structure,
    };
    std::vector<CriterionResult> out;
    for (Fn fn : criteria) {
        CriterionResult r = fn(seed);
        if (progress) {
            std::ostringstream os;
            os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name;
            if (!r.detail.empty()) os << " (" << r.detail << ")";
            os << " [" << r.seconds << "s]\n";
            (*progress) << os.str() << std::flush;
        }
        bool failed = !r.pass;
        out.push_back(std::move(r));
        if (failed && fail_fast) break;
    }
    return out;
}

} // namespace shtukalab
