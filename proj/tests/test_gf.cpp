#include <doctest.h>

#include "shtukalab/gf.hpp"

using namespace shtukalab;

namespace {

FqPtr f4() { return Fq::create(2, 2, 1, {1, 1, 1}); }
FqPtr f8() { return Fq::create(2, 3, 1, {1, 1, 0, 1}); }
FqPtr f9() { return Fq::create(3, 2, 1, {1, 0, 1}); }

// independent reference: schoolbook polynomial arithmetic mod (modulus, p)
Code ref_mul(const Fq& F, Code a, Code b) {
    std::vector<std::uint32_t> prod(2 * F.degree(), 0);
    for (std::uint32_t i = 0; i < F.degree(); ++i)
        for (std::uint32_t j = 0; j < F.degree(); ++j)
            prod[i + j] = (prod[i + j] + F.digit(a, i) * F.digit(b, j)) % F.p();
    // long division by the monic modulus
    const auto& mod = F.modulus();
    for (std::size_t d = prod.size(); d-- > F.degree();) {
        std::uint32_t c = prod[d];
        if (!c) continue;
        prod[d] = 0;
        for (std::uint32_t i = 0; i < F.degree(); ++i)
            prod[d - F.degree() + i] =
                (prod[d - F.degree() + i] + (F.p() - mod[i] % F.p()) * c) % F.p();
    }
    return F.encode(prod.data());
}

} // namespace

TEST_CASE("field creation accepts the documented examples") {
    auto F = f4();
    CHECK(F->card() == 4);
    CHECK(F->q() == 4);
    // g^2 = g + 1 under t^2 + t + 1
    Code g = F->gen();
    CHECK(F->mul(g, g) == F->add(g, F->one()));

    auto F2 = Fq::create(2, 1, 1, {0, 1});
    CHECK(F2->card() == 2);
}

TEST_CASE("field creation rejects bad input") {
    CHECK_THROWS_AS(Fq::create(4, 1, 1, {0, 1}), Error);          // not prime
    CHECK_THROWS_AS(Fq::create(2, 2, 1, {1, 0, 1}), Error);       // (x+1)^2
    CHECK_THROWS_AS(Fq::create(3, 1, 1, {0, 1, 1}), Error);       // degree 2 vs r*m = 1
    CHECK_THROWS_AS(Fq::create(2, 2, 1, {1, 1, 2}), Error);       // not monic after reduction mod 2
    CHECK_THROWS_AS(Fq::create(2, 21, 1, std::vector<std::uint32_t>(22, 1)), Error); // over the cap
    try {
        Fq::create(2, 2, 1, {1, 0, 1});
        FAIL("expected ReducibleModulus");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ReducibleModulus);
    }
}

TEST_CASE("frobenius powers match the frozen examples") {
    auto F = f4();
    Code g = F->gen();
    CHECK(F->frob(g, 1) == F->parse("g+1")); // g^2 mod t^2+t+1
    CHECK(F->frob(g, 2) == g);               // g^4 = g
    for (Code x = 0; x < F->card(); ++x) CHECK(F->frob(x, 0) == x);
}

TEST_CASE("frobenius is a field automorphism and has order r*m") {
    for (auto F : {f4(), f8(), f9()}) {
        for (std::uint32_t t = 1; t < F->degree() + 2; ++t)
            for (Code x = 0; x < F->card(); ++x) {
                for (Code y = 0; y < F->card(); ++y) {
                    CHECK(F->frob(F->add(x, y), t) == F->add(F->frob(x, t), F->frob(y, t)));
                    CHECK(F->frob(F->mul(x, y), t) == F->mul(F->frob(x, t), F->frob(y, t)));
                }
                CHECK(F->frob(x, F->degree()) == x);
                CHECK(F->frob_inv(F->frob(x, t), t) == x);
            }
    }
}

TEST_CASE("the F_q subfield is the fixed locus of frob(., r) and has q elements") {
    // k = F_16 with q = 4, and k = F_9 with q = 3
    auto F16 = Fq::create(2, 2, 2, {1, 1, 0, 0, 1});
    auto F9m = Fq::create(3, 1, 2, {1, 0, 1});
    for (auto F : {F16, F9m}) {
        std::size_t fixed = 0;
        for (Code x = 0; x < F->card(); ++x)
            if (F->in_fq_subfield(x)) ++fixed;
        CHECK(fixed == F->q());
        CHECK(F->fq_subfield_basis().size() == F->r());
    }
}

TEST_CASE("multiplication agrees with schoolbook polynomial arithmetic") {
    for (auto F : {f4(), f8(), f9(), Fq::create(2, 2, 2, {1, 1, 0, 0, 1})}) {
        for (Code a = 0; a < F->card(); ++a)
            for (Code b = 0; b < F->card(); ++b) CHECK(F->mul(a, b) == ref_mul(*F, a, b));
    }
}

TEST_CASE("inverses and powers") {
    auto F = f8();
    for (Code x = 1; x < F->card(); ++x) {
        CHECK(F->mul(x, F->inv(x)) == F->one());
        CHECK(F->pow(x, F->card() - 1) == F->one());
    }
    CHECK_THROWS_AS(F->inv(0), Error);
}

TEST_CASE("element parsing and printing") {
    auto F = f9();
    CHECK(F->parse("0") == 0);
    CHECK(F->parse("1") == F->one());
    CHECK(F->parse("g") == F->gen());
    CHECK(F->parse("2g+1") == F->add(F->mul(F->from_int(2), F->gen()), F->one()));
    CHECK(F->parse("2*g + 1") == F->parse("2g+1"));
    CHECK(F->parse("g^2") == F->mul(F->gen(), F->gen()));
    CHECK(F->parse("g - g") == 0);
    for (Code x = 0; x < F->card(); ++x) CHECK(F->parse(F->str(x)) == x);
    CHECK_THROWS_AS(F->parse("h+1"), Error);
    CHECK_THROWS_AS(F->parse(""), Error);
    CHECK_THROWS_AS(F->parse("g^"), Error);
}

TEST_CASE("deterministic internal extensions embed the working field") {
    auto k = f4();
    auto K = make_extension_field(2, 2, 2); // F_16 with the lex-smallest modulus
    CHECK(K->card() == 16);
    Code img = embed_generator(*k, *K);
    // the image satisfies k's modulus and generates a copy of F_4
    Code acc = K->add(K->mul(img, img), K->add(img, K->one()));
    CHECK(acc == 0);
    CHECK(embed_code(*k, *K, img, k->parse("g+1")) == K->add(img, K->one()));
}
