#include <doctest.h>

#include "shtukalab/classify.hpp"
#include "shtukalab/functors.hpp"
#include "shtukalab/rng.hpp"

using namespace shtukalab;

namespace {

FqPtr f2() { return Fq::create(2, 1, 1, {0, 1}); }
FqPtr f4() { return Fq::create(2, 2, 1, {1, 1, 1}); }
FqPtr f9() { return Fq::create(3, 2, 1, {1, 0, 1}); }

Shtuka scalar_shtuka(FqPtr F, Code a) {
    MatK M(F, 1, 1);
    M.at(0, 0) = a;
    return Shtuka(std::move(F), std::move(M));
}

Shtuka random_shtuka(FqPtr F, std::size_t rank, Rng& rng) {
    MatK M(F, rank, rank);
    for (auto& c : M.a) c = static_cast<Code>(rng.below(F->card()));
    return Shtuka(std::move(F), std::move(M));
}

HopfPresentation alpha(FqPtr F, std::uint64_t trunc, bool constant = false) {
    HopfPresentation P;
    P.field = F;
    P.gens.push_back({"x", 1, trunc, {}});
    if (constant) P.gens[0].relation = {{0, F->one()}};
    return P;
}

} // namespace

TEST_CASE("drinfeld: frozen examples") {
    auto F = f4();
    // F = [0] gives alpha_q
    FiniteHopf G0 = drinfeld(scalar_shtuka(F, 0)).hopf;
    CHECK(G0.dim == 4);
    CHECK(structure_equal(densify(G0), densify(expand(alpha(F, 4)))));
    // F = [1] gives the constant group
    FiniteHopf G1 = drinfeld(scalar_shtuka(F, F->one())).hopf;
    CHECK(structure_equal(densify(G1), densify(expand(alpha(F, 4, true)))));
    // rank 2: order q^2
    Rng rng(41);
    CHECK(drinfeld(random_shtuka(F, 2, rng)).hopf.order() == 16);
    CHECK_THROWS_AS(drinfeld(random_shtuka(F, 7, rng)), Error); // 4^7 > 4096
}

TEST_CASE("dieudonne: frozen examples") {
    auto F = f4();
    Shtuka M0 = dieudonne(GroupSchemeHandle{expand(alpha(F, 4))});
    CHECK(M0.rank == 1);
    CHECK(M0.F.at(0, 0) == 0);
    Shtuka M1 = dieudonne(GroupSchemeHandle{expand(alpha(F, 4, true))});
    CHECK(M1.rank == 1);
    CHECK(M1.F.at(0, 0) == F->one());
}

TEST_CASE("roundtrip: shtuka side is the identity-like witness, group side by rank") {
    auto F = f4();
    Rng rng(42);
    for (int it = 0; it < 10; ++it) {
        Shtuka M = random_shtuka(F, 1 + rng.below(2), rng);
        CHECK(roundtrip_shtuka(M).counit_iso);
    }
    CHECK(roundtrip_group(GroupSchemeHandle{expand(alpha(F, 4))}).unit_iso);
    // (alpha_2)^3 at q = 4: unbalanced, 64 vs 8
    HopfPresentation P;
    P.field = F;
    for (int i = 0; i < 3; ++i) P.gens.push_back({"x" + std::to_string(i), 1, 2, {}});
    RoundtripReport rt = roundtrip_group(GroupSchemeHandle{expand(P)});
    CHECK_FALSE(rt.unit_iso);
    CHECK(rt.order_lhs == 8);
    CHECK(rt.order_rhs == 64);
}

TEST_CASE("adjunction dimensions: frozen examples") {
    auto F = f4();
    GroupSchemeHandle aq{expand(alpha(F, 4))};
    AdjunctionReport r = adjunction_dims(aq, scalar_shtuka(F, 0));
    CHECK(r.dim_grp_hom == 1);
    CHECK(r.dim_sht_hom == 1);
    r = adjunction_dims(aq, scalar_shtuka(F, F->one()));
    CHECK(r.dim_grp_hom == 0);
    CHECK(r.dim_sht_hom == 0);
    GroupSchemeHandle cg{expand(alpha(F, 4, true))};
    r = adjunction_dims(cg, scalar_shtuka(F, F->one()));
    CHECK(r.dim_grp_hom == 1);
    CHECK(r.dim_sht_hom == 1);
}

TEST_CASE("adjunction dimensions agree on random pairs, including unbalanced G") {
    Rng rng(43);
    for (auto F : {f2(), f4(), f9()}) {
        for (int it = 0; it < 8; ++it) {
            Shtuka M = random_shtuka(F, 1 + rng.below(2), rng);
            // G: random presentation, possibly unbalanced (alpha_p at q > p)
            HopfPresentation P = alpha(F, F->p());
            if (rng.below(2)) P = alpha(F, F->q());
            AdjunctionReport r = adjunction_dims(GroupSchemeHandle{expand(P)}, M);
            CHECK(r.dim_grp_hom == r.dim_sht_hom);
        }
    }
}

TEST_CASE("contravariant functoriality on morphisms") {
    Rng rng(44);
    auto F = f4();
    for (int it = 0; it < 6; ++it) {
        Shtuka A = random_shtuka(F, 1 + rng.below(2), rng);
        Shtuka B = random_shtuka(F, 1 + rng.below(2), rng);
        Shtuka C = random_shtuka(F, 1 + rng.below(2), rng);
        auto homAB = hom_space(A, B);
        auto homBC = hom_space(B, C);
        if (homAB.empty() || homBC.empty()) continue;
        GroupSchemeHandle GA = drinfeld(A), GB = drinfeld(B), GC = drinfeld(C);
        const MatK& f = homAB[rng.below(homAB.size())];
        const MatK& g = homBC[rng.below(homBC.size())];
        MatK Tf = hopf_map_of_shtuka_morphism(A, B, f, GA, GB);
        MatK Tg = hopf_map_of_shtuka_morphism(B, C, g, GB, GC);
        CHECK(is_hopf_morphism(GA.hopf, GB.hopf, Tf, true));
        MatK Tgf = hopf_map_of_shtuka_morphism(A, C, g.mul(f), GA, GC);
        // composition: the map of g o f equals Tg o Tf
        CHECK(Tg.mul(Tf) == Tgf);
        // identity maps to identity
        MatK Tid = hopf_map_of_shtuka_morphism(A, A, MatK::identity(F, A.rank), GA, GA);
        CHECK(Tid == MatK::identity(F, GA.hopf.dim));
    }
}

TEST_CASE("drinfeld etale/connected flags against cotangent data") {
    Rng rng(45);
    auto F = f9();
    for (int it = 0; it < 10; ++it) {
        Shtuka M = random_shtuka(F, 1 + rng.below(2), rng);
        GroupSchemeHandle G = drinfeld(M);
        CHECK(cotangent_dim(G.hopf) == M.rank - M.F.rank());
        CHECK(is_invertible(M) == (cotangent_dim(G.hopf) == 0));
    }
}

TEST_CASE("isomorphism search reports certainty") {
    auto F = f4();
    Shtuka A = scalar_shtuka(F, 0);
    Shtuka B = scalar_shtuka(F, F->one());
    IsoResult r = shtukas_isomorphic(A, B);
    CHECK_FALSE(r.isomorphic);
    CHECK(r.certain);
    r = shtukas_isomorphic(A, A);
    CHECK(r.isomorphic);
    REQUIRE(r.witness.has_value());
    CHECK(morphism_commutes(A, A, *r.witness));
}
