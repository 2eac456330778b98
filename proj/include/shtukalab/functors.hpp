#pragma once

#include <optional>

#include "shtukalab/hopf.hpp"
#include "shtukalab/shtuka.hpp"

namespace shtukalab {

struct GroupSchemeHandle {
    FiniteHopf hopf;
};

/// Group scheme of a shtuka: one weight-1 generator per basis vector with
/// truncation exponent q and relation image f(e_j). The order is q^rank.
GroupSchemeHandle drinfeld(const Shtuka& M, std::uint64_t cap = dimension_cap());

/// Inverse direction: (Prim_1(B_G), x -> x^q) with the q-power map expressed
/// in the computed Prim_1 basis. QPowerLeavesSubspace signals a malformed
/// input (cannot occur for valid graded Hopf algebras).
Shtuka dieudonne(const GroupSchemeHandle& G);

struct RoundtripReport {
    bool unit_iso = false;
    bool counit_iso = false;
    std::uint64_t order_lhs = 0, order_rhs = 0;
    std::string details;
};

/// Checks that v_M : M -> dieudonne(drinfeld(M)) is an isomorphism of shtukas.
RoundtripReport roundtrip_shtuka(const Shtuka& M);
/// Materializes u_G*: Sym(Prim_1)/(x^q - x^q-image) -> B_G on the monomial
/// basis and decides bijectivity by rank; reports the order discrepancy for
/// unbalanced G.
RoundtripReport roundtrip_group(const GroupSchemeHandle& G, std::uint64_t cap = dimension_cap());

struct AdjunctionReport {
    std::size_t dim_grp_hom = 0; // F_q-dimension
    std::size_t dim_sht_hom = 0; // F_q-dimension
    std::string witness;
};

/// Left side: Hopf-with-action morphisms B_{G(M)} -> B_G via generator images
/// in Prim_1(B_G) subject to Phi(x)^q = Phi(f(x)), flattened over F_p (the
/// q-power is evaluated as an algebra power, independently of dieudonne's
/// coordinates). Right side: hom_space(M, dieudonne(G)).
AdjunctionReport adjunction_dims(const GroupSchemeHandle& G, const Shtuka& M);

/// Hopf algebra map B_{G(src)} -> B_{G(tgt)} induced by a shtuka morphism
/// C : src -> tgt (columns = images of the source monomial basis).
MatK hopf_map_of_shtuka_morphism(const Shtuka& src, const Shtuka& tgt, const MatK& C,
                                 const GroupSchemeHandle& Gsrc, const GroupSchemeHandle& Gtgt);

struct IsoResult {
    bool isomorphic = false;
    bool certain = true; // false = sampled verdict ("probable")
    std::optional<MatK> witness;
};

/// Searches hom_space(M, M') for an invertible element: exhaustively over the
/// F_q-span while q^dim stays enumerable, by seeded sampling (10^4 draws)
/// beyond.
IsoResult shtukas_isomorphic(const Shtuka& M, const Shtuka& Mp, std::uint64_t seed = 1);

/// Hopf morphisms A -> B where A is presentation-expanded: determined by
/// primitive generator images subject to the truncation relations, an
/// F_p-linear system after flattening. Returns per-generator image tuples
/// forming an F_p-basis of the solution space.
std::vector<std::vector<SparseKVec>> hopf_hom_images(const FiniteHopf& A, const FiniteHopf& B, bool graded);

/// Extends generator images multiplicatively to the full basis matrix.
MatK hopf_map_from_images(const FiniteHopf& A, const FiniteHopf& B, const std::vector<SparseKVec>& images);

/// Searches for a Hopf algebra isomorphism A -> B (A presentation-expanded).
IsoResult find_hopf_iso(const FiniteHopf& A, const FiniteHopf& B, bool graded, std::uint64_t seed = 1);

} // namespace shtukalab
