#include <doctest.h>

#include "shtukalab/balance.hpp"
#include "shtukalab/rng.hpp"

using namespace shtukalab;

namespace {

FqPtr f4() { return Fq::create(2, 2, 1, {1, 1, 1}); }
FqPtr f9() { return Fq::create(3, 2, 1, {1, 0, 1}); }

HopfPresentation alphas(FqPtr F, const std::vector<std::uint64_t>& s_list) {
    HopfPresentation P;
    P.field = F;
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        std::uint64_t trunc = 1;
        for (std::uint64_t t = 0; t < s_list[i]; ++t) trunc *= F->p();
        P.gens.push_back({"x" + std::to_string(i), 1, trunc, {}});
    }
    return P;
}

// independent oracle for count_eigen_tuples: odometer enumeration
std::uint64_t tuple_count_oracle(std::uint64_t q, std::uint32_t n, std::uint32_t j) {
    std::vector<std::uint64_t> e(n, 0);
    std::uint64_t count = 0;
    while (true) {
        std::uint64_t sum = 0;
        bool nonzero = false;
        for (auto v : e) {
            sum += v;
            nonzero |= v != 0;
        }
        if (nonzero) {
            std::uint64_t cls = sum % (q - 1);
            if (cls == 0) cls = q - 1;
            if (cls == j) ++count;
        }
        std::size_t i = 0;
        while (i < n && ++e[i] == q) e[i++] = 0;
        if (i == n) break;
    }
    return count;
}

} // namespace

TEST_CASE("balance: frozen examples") {
    auto F = f4();
    CHECK(is_balanced(GroupSchemeHandle{expand(alphas(F, {2}))}).balanced());       // alpha_q
    CHECK_FALSE(is_balanced(GroupSchemeHandle{expand(alphas(F, {1}))}).balanced()); // alpha_p at q=p^2
    BalanceReport b = is_balanced(GroupSchemeHandle{expand(alphas(F, {1, 1, 1, 1, 1, 1}))});
    CHECK_FALSE(b.balanced());
    CHECK(b.additive_type);
    CHECK(b.prim_ranks == std::vector<std::uint32_t>{6, 0});
}

TEST_CASE("quasi-balance: frozen examples") {
    auto F = f4();
    auto qb = is_quasi_balanced(GroupSchemeHandle{expand(alphas(F, {1, 1, 1, 1, 1, 1}))});
    CHECK(qb.quasi_balanced);
    CHECK(qb.ranks == std::vector<std::uint64_t>{21, 21, 21});
    qb = is_quasi_balanced(GroupSchemeHandle{expand(alphas(F, {1}))});
    CHECK_FALSE(qb.quasi_balanced);
    CHECK(qb.ranks == std::vector<std::uint64_t>{1, 0, 0});
    // balanced implies quasi-balanced
    CHECK(is_quasi_balanced(GroupSchemeHandle{expand(alphas(F, {2, 2}))}).quasi_balanced);
}

TEST_CASE("quasi-balanced orders are q-powers with the geometric rank") {
    for (auto F : {f4(), f9()}) {
        for (std::vector<std::uint64_t> s : {std::vector<std::uint64_t>{2}, {2, 2}}) {
            if (F->p() == 3 && s.size() > 1) continue; // dim 9^2 = 81 fine, keep both
            GroupSchemeHandle G{expand(alphas(F, s))};
            auto qb = is_quasi_balanced(G);
            REQUIRE(qb.quasi_balanced);
            std::uint64_t n = 0, ord = G.hopf.order();
            while (ord > 1) {
                ord /= F->q();
                ++n;
            }
            std::uint64_t expect = 0, pw = 1;
            for (std::uint64_t i = 0; i < n; ++i) {
                expect += pw;
                pw *= F->q();
            }
            for (auto rk : qb.ranks) CHECK(rk == expect);
        }
    }
}

TEST_CASE("s_series: frozen examples") {
    EigenCount ec = s_series(2, 2, {1, 1, 1, 1, 1, 1});
    CHECK(ec.s_coeffs == std::vector<std::int64_t>{1, 6, 15, 20, 15, 6, 1}); // (X+1)^6
    CHECK(ec.ranks == std::vector<std::uint64_t>{21, 21, 21});
    ec = s_series(2, 2, {2});
    CHECK(ec.ranks == std::vector<std::uint64_t>{1, 1, 1}); // alpha_q
    ec = s_series(2, 2, {1});
    CHECK(ec.ranks == std::vector<std::uint64_t>{1, 0, 0});
    CHECK_THROWS_AS(s_series(2, 2, std::vector<std::uint64_t>(25, 1)), Error); // 2^25 > 2^20
}

TEST_CASE("eigen tuple counts: enumeration, closed form, and an independent oracle") {
    CHECK(count_eigen_tuples(3, 2, 1, true) == 4);
    CHECK(count_eigen_tuples(4, 2, 3, true) == 5);
    for (std::uint64_t q : {2u, 3u, 4u, 5u})
        for (std::uint32_t j = 1; j < q; ++j) CHECK(count_eigen_tuples(q, 1, j, true) == 1);
    for (std::uint64_t q : {2u, 3u, 4u, 5u})
        for (std::uint32_t n = 1; n <= 3; ++n)
            for (std::uint32_t j = 1; j < q; ++j) {
                CHECK(count_eigen_tuples(q, n, j, true) == tuple_count_oracle(q, n, j));
                CHECK(count_eigen_tuples(q, n, j, false) == tuple_count_oracle(q, n, j));
            }
    CHECK_THROWS_AS(count_eigen_tuples(5, 11, 1, true), Error); // enumeration cap
}

TEST_CASE("closed-form quasi-balance criterion") {
    CHECK(lisa_criterion(2, 2, {1, 1, 1, 1, 1, 1}).quasi_balanced);
    CHECK_FALSE(lisa_criterion(3, 2, {1}).quasi_balanced);
    CHECK_FALSE(lisa_criterion(2, 2, {1, 1, 1}).quasi_balanced);
    CHECK(lisa_criterion(2, 2, {2, 2}).quasi_balanced);
    CHECK(lisa_criterion(3, 1, {1, 2, 3}).quasi_balanced); // r = 1: always
}

TEST_CASE("product formula: identity and tensor cross-check") {
    auto F = f4();
    std::vector<std::uint64_t> aq = {1, 1, 1};
    std::vector<std::uint64_t> zero = {0, 0, 0}; // order-1 group
    CHECK(product_rank_formula(aq, zero, 4) == aq);
    auto sq = product_rank_formula(aq, aq, 4);
    FiniteHopf A = expand(alphas(F, {2}));
    CHECK(sq == eigen_profile(tensor_product(A, A)));
    CHECK(sq == std::vector<std::uint64_t>{5, 5, 5});
    CHECK_THROWS_AS(product_rank_formula({1, 1}, aq, 4), Error);
}

TEST_CASE("two-out-of-three for balance on products") {
    auto F = f4();
    FiniteHopf bal = expand(alphas(F, {2}));
    FiniteHopf unbal = expand(alphas(F, {1}));
    auto balanced = [](const FiniteHopf& H) { return is_balanced(GroupSchemeHandle{H}).balanced(); };
    // two balanced: product balanced
    CHECK(balanced(tensor_product(bal, bal)));
    // product and one factor balanced never pairs with an unbalanced other factor
    CHECK_FALSE(balanced(tensor_product(bal, unbal)));
    CHECK_FALSE(balanced(tensor_product(unbal, unbal)));
}
