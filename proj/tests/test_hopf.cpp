#include <doctest.h>

#include <sstream>

#include "shtukalab/functors.hpp"
#include "shtukalab/hopf.hpp"
#include "shtukalab/rng.hpp"

using namespace shtukalab;

namespace {

FqPtr f2() { return Fq::create(2, 1, 1, {0, 1}); }
FqPtr f3() { return Fq::create(3, 1, 1, {0, 1}); }
FqPtr f4() { return Fq::create(2, 2, 1, {1, 1, 1}); }
FqPtr f9() { return Fq::create(3, 2, 1, {1, 0, 1}); }

HopfPresentation alpha(FqPtr F, std::uint64_t trunc) {
    HopfPresentation P;
    P.field = F;
    P.gens.push_back({"x", 1, trunc, {}});
    return P;
}

HopfPresentation constant_group(FqPtr F, std::uint64_t trunc) {
    HopfPresentation P = alpha(F, trunc);
    P.gens[0].relation = {{0, F->one()}};
    return P;
}

/// Copy with the monomial structure stripped, to force the generic dense code
/// paths.
FiniteHopf dense_only(const FiniteHopf& H) {
    FiniteHopf D = densify(H);
    D.mono.reset();
    return D;
}

} // namespace

TEST_CASE("expand: frozen examples") {
    // alpha_q over F_4: dimension q
    FiniteHopf aq = expand(alpha(f4(), 4));
    CHECK(aq.dim == 4);
    // constant F_q: dimension q; its group-likes are the points of the dual
    // mu-type group, a single one in characteristic p
    FiniteHopf cg = expand(constant_group(f4(), 4));
    CHECK(cg.dim == 4);
    CHECK(group_likes(cg).size() == 1);
    // x_1, ..., x_r with weights p^(i-1) and x_i^p = 0: dimension p^r
    HopfPresentation P;
    P.field = f4();
    P.gens.push_back({"x1", 1, 2, {}});
    P.gens.push_back({"x2", 2, 2, {}});
    FiniteHopf H = expand(P);
    CHECK(H.dim == 4);
    CHECK(eigen_profile(H) == std::vector<std::uint64_t>{1, 1, 1});
}

TEST_CASE("expand: validation errors") {
    auto F = f4();
    HopfPresentation P = alpha(F, 6); // not a p-power
    CHECK_THROWS_AS(expand(P), Error);
    P = alpha(F, 4);
    P.gens[0].weight = 3; // not in {1, 2}
    CHECK_THROWS_AS(expand(P), Error);
    P = alpha(F, 2);
    P.gens[0].relation = {{0, F->one()}}; // x^2 = x is weight incompatible at q = 4
    CHECK_THROWS_AS(expand(P), Error);
    P = alpha(F, 4096 * 4);
    CHECK_THROWS_AS(expand(P), Error); // cap
}

TEST_CASE("full axiom suite on representative algebras of every provenance") {
    // expanded
    verify_axioms(expand(alpha(f9(), 9)), 128);
    verify_axioms(expand(constant_group(f4(), 4)), 128);
    // with a nontrivial relation x^q = g x
    HopfPresentation P = alpha(f4(), 4);
    P.gens[0].relation = {{0, f4()->gen()}};
    FiniteHopf H = expand(P);
    verify_axioms(H, 128);
    // dual
    verify_axioms(cartier_dual(H), 128);
    verify_axioms(cartier_dual(expand(constant_group(f3(), 3))), 128);
    // tensor (monomial route) and dense tensor
    FiniteHopf T = tensor_product(H, expand(alpha(f4(), 2)));
    verify_axioms(T, 128);
    FiniteHopf DT = tensor_product(dense_only(expand(alpha(f4(), 2))), dense_only(expand(alpha(f4(), 2))));
    verify_axioms(DT, 128);
}

TEST_CASE("primitives: frozen examples") {
    // alpha_{p^s}: Prim = span(x, x^p, ..., x^{p^{s-1}})
    FiniteHopf a8 = expand(alpha(f2(), 8));
    CHECK(prim_dim(a8) == 3);
    // with the q-action: Prim_1 = span(x^{q^a} : a < s/r)
    FiniteHopf a16 = expand(alpha(f4(), 16)); // s = 4, r = 2: Prim_1 = {x, x^4}
    Primitives Pr = primitives(a16);
    CHECK(Pr.all.size() == 4);
    CHECK(Pr.by_s[0].size() == 2);
    CHECK(Pr.by_s[1].size() == 2);
    // mu_p = dual of the constant group: Prim = 0 (generic dense route)
    FiniteHopf mup = cartier_dual(expand(constant_group(f3(), 3)));
    CHECK(prim_dim(mup) == 0);
}

TEST_CASE("primitives: combinatorial route agrees with the generic solver") {
    Rng rng(31);
    for (auto F : {f2(), f4(), f9()}) {
        for (int it = 0; it < 6; ++it) {
            HopfPresentation P;
            P.field = F;
            std::size_t ng = 1 + rng.below(2);
            std::uint64_t dim = 1;
            for (std::size_t g = 0; g < ng; ++g) {
                std::uint64_t e = F->p();
                if (rng.below(2)) e *= F->p();
                if (dim * e > 81) e = F->p();
                dim *= e;
                GeneratorSpec spec{"x" + std::to_string(g), 1, e, {}};
                P.gens.push_back(spec);
            }
            // eligible relations
            std::uint32_t mm = F->q() > 2 ? static_cast<std::uint32_t>(F->q() - 1) : 1;
            for (auto& g : P.gens)
                if ((g.trunc % mm) == (1 % mm) && rng.below(2))
                    g.relation = {{static_cast<std::uint32_t>(rng.below(P.gens.size())),
                                   static_cast<Code>(1 + rng.below(F->card() - 1))}};
            FiniteHopf H = expand(P);
            Primitives fast = primitives(H);
            Primitives slow = primitives(dense_only(H));
            REQUIRE(fast.all.size() == slow.all.size());
            for (std::uint32_t s = 0; s < F->r(); ++s) CHECK(fast.by_s[s].size() == slow.by_s[s].size());
        }
    }
}

TEST_CASE("eigen profiles: frozen examples") {
    auto F = f4();
    HopfPresentation P;
    P.field = F;
    for (int i = 0; i < 6; ++i) P.gens.push_back({"x" + std::to_string(i), 1, 2, {}});
    CHECK(eigen_profile(expand(P)) == std::vector<std::uint64_t>{21, 21, 21});
    CHECK(eigen_profile(expand(alpha(F, 4))) == std::vector<std::uint64_t>{1, 1, 1});
    CHECK(eigen_profile(expand(alpha(F, 2))) == std::vector<std::uint64_t>{1, 0, 0});
}

TEST_CASE("cartier duality: involution, gradings, classical pairs") {
    auto F = f4();
    FiniteHopf a2 = expand(alpha(F, 2));
    FiniteHopf D = cartier_dual(a2);
    // dual of a weight-1 line carries weight q-1-1 = 2
    CHECK(D.weight_class == std::vector<std::uint32_t>{0, 2});
    CHECK(structure_equal(cartier_dual(D), densify(a2)));

    // alpha_p is self-dual (ungraded Hopf isomorphism, p = 2 and 3)
    for (auto Fp : {f2(), f3()}) {
        FiniteHopf ap = expand(alpha(Fp, Fp->p()));
        IsoResult iso = find_hopf_iso(ap, cartier_dual(ap), /*graded=*/false);
        CHECK(iso.isomorphic);
        REQUIRE(iso.witness.has_value());
        CHECK(is_hopf_morphism(ap, cartier_dual(ap), *iso.witness, false));
    }

    // dual of the constant group: group-like generator of order p, Prim = 0
    for (auto Fp : {f2(), f3()}) {
        FiniteHopf mup = cartier_dual(expand(constant_group(Fp, Fp->p())));
        CHECK(prim_dim(mup) == 0);
        CHECK(group_likes(mup).size() == Fp->p());
    }
}

TEST_CASE("duality swaps frobenius and verschiebung") {
    // alpha_p: F vanishes on I
    auto F = f4();
    FiniteHopf ap = expand(alpha(F, 2));
    MatK L = frobenius_matrix(ap);
    CHECK(L.at(0, 0) == F->one());
    CHECK(L.at(0, 1) == 0);
    CHECK(L.at(1, 1) == 0);

    // weight-1 expanded algebras: V = 0 on I (counit projection)
    FrobVer fv = frobenius_verschiebung(expand(alpha(F, 4)));
    for (std::size_t j = 1; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) CHECK(fv.V.at(i, j) == 0);
    CHECK(fv.V.at(0, 0) == F->one());

    // mu_p: V is an isomorphism (dual of the constant group's Frobenius)
    for (auto Fp : {f2(), f3()}) {
        FiniteHopf mup = cartier_dual(expand(constant_group(Fp, Fp->p())));
        FrobVer fv2 = frobenius_verschiebung(mup);
        CHECK(fv2.V.invertible());
    }
}

TEST_CASE("tensor products") {
    auto F = f3();
    FiniteHopf ap = expand(alpha(F, 3));
    FiniteHopf T = tensor_product(ap, ap);
    CHECK(T.dim == 9);
    CHECK(prim_dim(T) == prim_dim(ap) * 2);

    // Prim additivity on random pairs, monomial and dense routes
    Rng rng(32);
    for (int it = 0; it < 6; ++it) {
        auto Fq4 = f4();
        HopfPresentation PA = alpha(Fq4, 1 + rng.below(2) ? 4 : 2);
        HopfPresentation PB = alpha(Fq4, 2);
        FiniteHopf A = expand(PA), B = expand(PB);
        CHECK(prim_dim(tensor_product(A, B)) == prim_dim(A) + prim_dim(B));
        FiniteHopf DTT = tensor_product(dense_only(A), dense_only(B));
        CHECK(prim_dim(DTT) == prim_dim(A) + prim_dim(B));
    }

    // dual of tensor = tensor of duals
    FiniteHopf lhs = cartier_dual(T);
    FiniteHopf rhs = tensor_product(cartier_dual(ap), cartier_dual(ap));
    CHECK(structure_equal(lhs, rhs));
    CHECK_THROWS_AS(tensor_product(expand(alpha(F, 81)), expand(alpha(F, 81))), Error);
}

TEST_CASE("lie dimension of the dual: frozen examples") {
    CHECK(lie_dim_of_dual(expand(alpha(f3(), 3))) == 1);            // alpha_p
    CHECK(lie_dim_of_dual(expand(constant_group(f3(), 3))) == 1);   // via mu_p
    auto F = f4();
    FiniteHopf aq = expand(alpha(F, 4));
    FiniteHopf T = tensor_product(aq, aq);
    CHECK(lie_dim_of_dual(T) == 2 * F->r()); // = dim Prim(alpha_q (x) alpha_q)
    CHECK(lie_dim_of_dual(T) == prim_dim(T));
}

TEST_CASE("grading idempotents e_j on the augmentation ideal") {
    auto F = f4();
    std::uint32_t qm1 = 3;
    FiniteHopf H = expand(alpha(F, 4));
    // e_j acts on the weight-w line of I as [w = j mod (q-1)] (classes fold 0 -> q-1)
    auto ej = [&](std::uint32_t j, std::uint32_t i) -> Code {
        // (q-1)^{-1} sum_alpha chi_j^{-1}(alpha) alpha^{w_i} over F_q^x
        Code sum = 0;
        Code inv_qm1 = F->inv(F->from_int(qm1 % F->p()));
        for (Code a = 1; a < F->card(); ++a) {
            if (!F->in_fq_subfield(a)) continue;
            Code chi_inv = F->inv(F->pow(a, j));
            sum = F->add(sum, F->mul(chi_inv, F->pow(a, H.weight_class[i])));
        }
        return F->mul(inv_qm1, sum);
    };
    for (std::uint32_t i = 1; i < H.dim; ++i) {
        Code total = 0;
        for (std::uint32_t j = 1; j <= qm1; ++j) {
            Code v = ej(j, i);
            // idempotent diagonal action: v is 0 or 1
            CHECK((v == 0 || v == F->one()));
            total = F->add(total, v);
            for (std::uint32_t l = 1; l <= qm1; ++l)
                if (l != j) CHECK(F->mul(ej(j, i), ej(l, i)) == 0);
        }
        CHECK(total == F->one()); // sum e_j = identity on I
    }
}

TEST_CASE("structure dump is deterministic") {
    FiniteHopf H = expand(alpha(f2(), 2));
    std::ostringstream a, b;
    dump_structure(H, a);
    dump_structure(H, b);
    CHECK(a.str() == b.str());
    CHECK(a.str() == "dim=2\n"
                     "basis 0 1 weight=0\n"
                     "basis 1 x weight=0\n"
                     "mult 0 0 -> 0:1\n"
                     "mult 0 1 -> 1:1\n"
                     "mult 1 0 -> 1:1\n"
                     "mult 1 1 ->\n"
                     "comult 0 -> (0,0):1\n"
                     "comult 1 -> (0,1):1 (1,0):1\n");
}
