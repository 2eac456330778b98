#pragma once

#include <optional>

#include "shtukalab/balance.hpp"

namespace shtukalab {

struct StructureReport {
    std::uint64_t etale_order = 1;
    std::vector<std::size_t> connected_exponents; // s_1 >= ... >= s_h, factors alpha_{q^{s_i}}
    std::optional<std::uint32_t> constancy_degree; // smallest m with pi_0 constant over F_{q^m}
    bool constancy_exceeds_cap = false;
    std::uint64_t total_order = 0;
};

/// Splits a balanced group scheme into its etale part and a product of
/// alpha_{q^{s_i}} via the ss/nil decomposition of its shtuka. The constancy
/// degree is found by counting fixed vectors of the semisimple part over
/// growing extensions (default cap 8).
StructureReport structure_decompose(const GroupSchemeHandle& G, std::uint32_t constancy_cap = 8);

/// Number of algebra morphisms B_G -> F_{q^m}, i.e. points over F_{q^m}.
/// Requires a presented (expanded) algebra with dim <= 64 and q^m <= 2^12;
/// relations are additive, so the count is solved as an F_p-linear system and
/// cross-checked by literal enumeration on small inputs.
std::uint64_t point_count(const GroupSchemeHandle& G, std::uint32_t m);

/// Solutions of f(v) = v on K^rank for the degree-d extension K of the
/// working field (used for the constancy search; exposed for tests).
std::uint64_t count_fixed_vectors(const Shtuka& M, std::uint32_t ext_degree);

} // namespace shtukalab
