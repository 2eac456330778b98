#include <doctest.h>

#include "shtukalab/linalg.hpp"
#include "shtukalab/rng.hpp"

using namespace shtukalab;

namespace {
FqPtr f4() { return Fq::create(2, 2, 1, {1, 1, 1}); }

MatK random_mat(FqPtr F, std::size_t r, std::size_t c, Rng& rng) {
    MatK M(F, r, c);
    for (auto& x : M.a) x = static_cast<Code>(rng.below(F->card()));
    return M;
}
} // namespace

TEST_CASE("rref, rank, kernel over k") {
    auto F = f4();
    Rng rng(11);
    for (int it = 0; it < 30; ++it) {
        MatK M = random_mat(F, 3 + rng.below(3), 3 + rng.below(3), rng);
        MatK K = M.kernel();
        CHECK(M.mul(K).is_zero());
        CHECK(M.rank() + K.cols == M.cols);
        MatK CS = M.column_space();
        CHECK(CS.cols == M.rank());
    }
}

TEST_CASE("inverse and solve") {
    auto F = f4();
    Rng rng(12);
    int found = 0;
    while (found < 10) {
        MatK M = random_mat(F, 3, 3, rng);
        if (!M.invertible()) continue;
        ++found;
        MatK I = M.mul(M.inverse());
        CHECK(I == MatK::identity(F, 3));
        MatK rhs = random_mat(F, 3, 2, rng);
        MatK X;
        REQUIRE(M.solve(rhs, X));
        CHECK(M.mul(X) == rhs);
    }
    // inconsistent system detected
    MatK Z(F, 2, 2);
    MatK rhs(F, 2, 1);
    rhs.at(0, 0) = F->one();
    MatK X;
    CHECK_FALSE(Z.solve(rhs, X));
}

TEST_CASE("F_p nullspace") {
    MatP M(3, 2, 3);
    // x + 2y = 0, z free
    M.at(0, 0) = 1;
    M.at(0, 1) = 2;
    MatP K = M.nullspace();
    CHECK(K.cols == 2);
    for (std::size_t c = 0; c < K.cols; ++c) {
        std::uint32_t lhs = (K.at(0, c) + 2 * K.at(1, c)) % 3;
        CHECK(lhs == 0);
    }
}

TEST_CASE("sparse echelon rank matches dense rank") {
    auto F = f4();
    Rng rng(13);
    for (int it = 0; it < 20; ++it) {
        std::size_t rows = 4 + rng.below(4), cols = 5;
        MatK M = random_mat(F, rows, cols, rng);
        SparseEchelon ech(F);
        for (std::size_t i = 0; i < rows; ++i) {
            SparseKVec v;
            for (std::size_t j = 0; j < cols; ++j)
                if (M.at(i, j)) v.emplace_back(static_cast<std::uint32_t>(j), M.at(i, j));
            ech.insert(v);
        }
        CHECK(ech.rank() == M.transpose().rank());
        // membership: every row reduces to zero
        for (std::size_t i = 0; i < rows; ++i) {
            SparseKVec v;
            for (std::size_t j = 0; j < cols; ++j)
                if (M.at(i, j)) v.emplace_back(static_cast<std::uint32_t>(j), M.at(i, j));
            CHECK(ech.contains(v));
        }
    }
}

TEST_CASE("twists act entrywise") {
    auto F = f4();
    MatK M(F, 1, 1);
    M.at(0, 0) = F->gen();
    CHECK(M.twist_q(1).at(0, 0) == F->frob(F->gen(), 2));
    CHECK(M.twist_q(-1).at(0, 0) == F->frob_inv(F->gen(), 2));
    CHECK(M.twist_p(1).at(0, 0) == F->parse("g+1"));
}
