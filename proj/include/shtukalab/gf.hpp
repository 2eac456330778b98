#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "shtukalab/error.hpp"

namespace shtukalab {

/// Packed element of a finite field: base-p digit vector encoded as
/// sum(digit[i] * p^i). Always interpreted relative to an Fq instance.
using Code = std::uint32_t;

/// The working field k = F_{p^(r*m)} together with the distinguished
/// intermediate field F_q, q = p^r. Elements are residues of F_p[x] modulo an
/// explicit monic irreducible polynomial of degree r*m; the residue class of x
/// prints as "g".
///
/// Instances are immutable after construction and safe to share across
/// threads. All arithmetic is exact.
class Fq {
public:
    /// Largest permitted field size p^(r*m).
    static constexpr std::uint64_t kMaxCard = 1u << 20;

    /// Validates primality of p, the degree/monicity of the modulus and its
    /// irreducibility over F_p, then precomputes Frobenius matrices and the
    /// F_p-basis of the F_q-subfield.
    static std::shared_ptr<const Fq> create(std::uint32_t p, std::uint32_t r, std::uint32_t m,
                                            std::vector<std::uint32_t> modulus);

    std::uint32_t p() const { return p_; }
    std::uint32_t r() const { return r_; }
    std::uint32_t m() const { return m_; }
    /// Degree of k over F_p.
    std::uint32_t degree() const { return n_; }
    std::uint64_t q() const { return q_; }
    /// Number of elements of k.
    std::uint64_t card() const { return card_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    Code zero() const { return 0; }
    Code one() const { return 1; }
    /// Residue class of x.
    Code gen() const { return gen_; }

    Code add(Code a, Code b) const;
    Code sub(Code a, Code b) const;
    Code neg(Code a) const;
    Code mul(Code a, Code b) const;
    Code inv(Code a) const;
    Code pow(Code a, std::uint64_t e) const;
    /// Scalar action of integers (the image of n in F_p).
    Code from_int(std::uint64_t v) const { return static_cast<Code>(v % p_); }

    /// x -> x^(p^t). A field automorphism; frob(x, degree()) == x.
    Code frob(Code a, std::uint64_t t) const;
    /// Inverse of frob(., t).
    Code frob_inv(Code a, std::uint64_t t) const { return frob(a, n_ - (t % n_)); }
    /// x -> x^(q^e) with e allowed negative.
    Code q_pow(Code a, std::int64_t e) const;

    bool in_fq_subfield(Code a) const { return frob(a, r_) == a; }
    /// F_p-basis of the F_q-subfield of k (r elements; first is 1).
    const std::vector<Code>& fq_subfield_basis() const { return fq_basis_; }

    std::uint32_t digit(Code a, std::uint32_t i) const;
    void decode(Code a, std::uint32_t* digits) const;
    Code encode(const std::uint32_t* digits) const;

    /// Row-major n x n matrix over F_p of multiplication by a.
    std::vector<std::uint32_t> mul_matrix(Code a) const;
    /// Row-major n x n matrix over F_p of x -> x^(p^t).
    const std::vector<std::uint32_t>& frob_matrix(std::uint32_t t) const;

    /// Canonical polynomial string in the generator symbol, e.g. "g^2+2g+1".
    std::string str(Code a) const;
    /// Parses the string form; accepts terms like "2g^3", "g", "1", joined by
    /// +/-, with optional '*' and whitespace.
    Code parse(std::string_view s) const;

    /// Structural equality: same p, r, m and modulus.
    bool same(const Fq& o) const;
    /// Same p and modulus (element codes interchangeable), any (r, m) split.
    bool same_elements(const Fq& o) const { return p_ == o.p_ && modulus_ == o.modulus_; }

    std::string describe() const;

private:
    Fq() = default;

    std::uint32_t p_ = 0, r_ = 0, m_ = 0, n_ = 0;
    std::uint64_t q_ = 0, card_ = 0;
    std::vector<std::uint32_t> modulus_;
    Code gen_ = 0;
    std::vector<std::uint64_t> pow_p_;              // p^i, i = 0..n
    std::vector<std::vector<std::uint32_t>> red_;   // digits of x^(n+i) mod modulus
    std::vector<std::vector<std::uint32_t>> frob_;  // frob matrices, t = 0..n-1
    std::vector<Code> fq_basis_;
    std::vector<Code> mul_table_;                   // full table for small fields

    Code mul_slow(Code a, Code b) const;
};

using FqPtr = std::shared_ptr<const Fq>;

/// Deterministic internal extension: the field (p, r, m) whose modulus is the
/// lexicographically smallest monic irreducible polynomial of degree r*m over
/// F_p (coefficients compared from the constant term up).
FqPtr make_extension_field(std::uint32_t p, std::uint32_t r, std::uint32_t m);

/// Image of the generator of `small` under the embedding into `big` that picks
/// the root of small's modulus with the least code. Requires degree divisibility.
Code embed_generator(const Fq& small, const Fq& big);

/// Transport a code along the generator image computed by embed_generator.
Code embed_code(const Fq& small, const Fq& big, Code gen_image, Code a);

} // namespace shtukalab
