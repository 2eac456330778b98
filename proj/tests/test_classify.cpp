#include <doctest.h>

#include "shtukalab/classify.hpp"
#include "shtukalab/rng.hpp"

using namespace shtukalab;

namespace {

FqPtr f4() { return Fq::create(2, 2, 1, {1, 1, 1}); }

Shtuka from_strings(FqPtr F, const std::vector<std::vector<const char*>>& rows) {
    MatK M(F, rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) M.at(i, j) = F->parse(rows[i][j]);
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

TEST_CASE("structure decomposition: frozen examples") {
    auto F = f4();
    // diag(1, 0): F_q x alpha_q
    StructureReport r = structure_decompose(drinfeld(from_strings(F, {{"1", "0"}, {"0", "0"}})));
    CHECK(r.etale_order == 4);
    CHECK(r.connected_exponents == std::vector<std::size_t>{1});
    CHECK(r.total_order == 16);
    REQUIRE(r.constancy_degree.has_value());
    CHECK(*r.constancy_degree == 1);

    // 2x2 nilpotent Jordan block: alpha_{q^2}
    r = structure_decompose(drinfeld(from_strings(F, {{"0", "1"}, {"0", "0"}})));
    CHECK(r.etale_order == 1);
    CHECK(r.connected_exponents == std::vector<std::size_t>{2});

    // identity of rank 2: etale of order q^2, constant already over F_q
    r = structure_decompose(drinfeld(from_strings(F, {{"1", "0"}, {"0", "1"}})));
    CHECK(r.etale_order == 16);
    CHECK(r.connected_exponents.empty());
    CHECK(*r.constancy_degree == 1);
}

TEST_CASE("structure decomposition rejects unbalanced input") {
    auto F = f4();
    CHECK_THROWS_AS(structure_decompose(GroupSchemeHandle{expand(alpha(F, 2))}), Error);
}

TEST_CASE("non-split etale parts need an extension") {
    auto F = f4();
    // x^q = g x has no rational points besides 0 over F_4; the group becomes
    // constant over the cubic extension (g is a cube in F_64)
    StructureReport r = structure_decompose(drinfeld(from_strings(F, {{"g"}})));
    CHECK(r.etale_order == 4);
    REQUIRE(r.constancy_degree.has_value());
    CHECK(*r.constancy_degree > 1);
}

TEST_CASE("point counts: frozen examples") {
    auto F = f4();
    GroupSchemeHandle aq{expand(alpha(F, 4))};
    for (std::uint32_t m = 1; m <= 3; ++m) CHECK(point_count(aq, m) == 1);
    GroupSchemeHandle cg{expand(alpha(F, 4, true))};
    for (std::uint32_t m = 1; m <= 3; ++m) CHECK(point_count(cg, m) == 4);
    CHECK(point_count(drinfeld(from_strings(F, {{"g"}})), 1) == 1);
    CHECK_THROWS_AS(point_count(aq, 12), Error); // q^m cap
}

TEST_CASE("points come from the etale part and stabilize at the constancy degree") {
    auto F = f4();
    Rng rng(51);
    for (int it = 0; it < 10; ++it) {
        MatK mat(F, 2, 2);
        for (auto& c : mat.a) c = static_cast<Code>(rng.below(4));
        Shtuka M(F, std::move(mat));
        GroupSchemeHandle G = drinfeld(M);
        SsNilSplit split = ss_nil_split(M);
        for (std::uint32_t m = 1; m <= 3; ++m)
            CHECK(point_count(G, m) == point_count(drinfeld(split.ss), m));
        StructureReport r = structure_decompose(G);
        if (r.constancy_degree && *r.constancy_degree <= 3)
            CHECK(point_count(G, *r.constancy_degree) == r.etale_order);
    }
}

TEST_CASE("fixed-vector counts match the algebra-morphism counts") {
    // two independent counting routes for the etale points
    auto F = f4();
    Rng rng(52);
    for (int it = 0; it < 12; ++it) {
        MatK mat(F, 1 + rng.below(2), 1 + rng.below(2));
        mat.cols = mat.rows;
        mat.a.assign(mat.rows * mat.cols, 0);
        for (auto& c : mat.a) c = static_cast<Code>(rng.below(4));
        Shtuka M(F, std::move(mat));
        if (!is_invertible(M)) continue;
        for (std::uint32_t m = 1; m <= 2; ++m)
            CHECK(count_fixed_vectors(M, m) == point_count(drinfeld(M), m));
    }
}

TEST_CASE("connected blocks are the alpha_{q^s}") {
    auto F = f4();
    // drinfeld of a nilpotent cyclic block of size s is Hopf-isomorphic to
    // k[x]/(x^{q^s}) with the standard action
    for (std::size_t s : {1u, 2u}) {
        MatK J(F, s, s);
        for (std::size_t i = 0; i + 1 < s; ++i) J.at(i + 1, i) = F->one();
        GroupSchemeHandle G = drinfeld(Shtuka(F, std::move(J)));
        FiniteHopf target = expand(alpha(F, G.hopf.order()));
        IsoResult iso = find_hopf_iso(target, G.hopf, /*graded=*/true);
        CHECK(iso.isomorphic);
    }
}
