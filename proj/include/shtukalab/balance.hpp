#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shtukalab/functors.hpp"

namespace shtukalab {

struct BalanceReport {
    bool additive_type = false; // Prim_1 generates the augmentation ideal
    bool cond_i = false;        // all p-power maps Prim_{p^t} -> Prim_{p^(t+1)} bijective
    bool cond_ii = false;       // x -> x^(p^(r-1)) injective on Prim_1
    bool cond_iii = false;      // all Prim_{p^s} ranks equal
    bool cond_iv = false;       // ord(G) = q^(rk Prim_1)
    std::vector<std::uint32_t> prim_ranks; // dim Prim_{p^s}, s = 0..r-1
    std::uint64_t order = 0;

    bool balanced() const { return additive_type && cond_i; }
};

BalanceReport is_balanced(const GroupSchemeHandle& G);

struct QuasiBalance {
    bool quasi_balanced = false;
    std::vector<std::uint64_t> ranks; // rk I_1 .. rk I_{q-1}
};

QuasiBalance is_quasi_balanced(const GroupSchemeHandle& G);

struct EigenCount {
    std::uint64_t q = 0;
    std::vector<std::uint64_t> exponents;  // s_i with factors alpha_{p^{s_i}}
    std::vector<std::int64_t> s_coeffs;    // coefficients of prod (1 + X + ... + X^{p^{s_i}-1})
    std::vector<std::uint64_t> ranks;      // folded into classes 1..q-1
};

/// Integer-polynomial route to the eigenrank profile of prod alpha_{p^{s_i}};
/// independent of the Hopf expansion and used as its second opinion.
EigenCount s_series(std::uint32_t p, std::uint32_t r, const std::vector<std::uint64_t>& s_list);

/// #{0 != e in [0,q)^n : sum e_i = j mod (q-1)}; exhaustive enumeration when
/// q^n <= 10^7, closed form q^(n-1) + ... + q + 1 otherwise (exhaustive = true
/// forces enumeration and errors out of range).
std::uint64_t count_eigen_tuples(std::uint64_t q, std::uint32_t n, std::uint32_t j, bool exhaustive);

struct LisaVerdict {
    bool quasi_balanced = false;
    std::string reason;
};

/// Closed-form quasi-balance criterion for prod alpha_{p^{s_i}}: for q != 4
/// all s_i must be divisible by r; for q = 4 the number of s_i not divisible
/// by r must be a multiple of 6.
LisaVerdict lisa_criterion(std::uint32_t p, std::uint32_t r, const std::vector<std::uint64_t>& s_list);

/// Convolution of eigenrank profiles with the constant line rk I_0 = 1
/// included; indices are folded mod (q-1) into classes 1..q-1.
std::vector<std::uint64_t> product_rank_formula(const std::vector<std::uint64_t>& gprof,
                                                const std::vector<std::uint64_t>& hprof, std::uint64_t q);

} // namespace shtukalab
