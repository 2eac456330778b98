#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shtukalab/linalg.hpp"

namespace shtukalab {

/// Default cap on Hopf algebra dimensions (structure tensors); the
/// SHTUKALAB_CAP environment variable overrides it.
std::uint64_t dimension_cap();
/// Cap for operations that materialize the full multiplication table
/// (dualization, dense tensor products).
std::uint64_t dense_cap();

struct GeneratorSpec {
    std::string name;
    std::uint32_t weight = 1;  // F_q^x character exponent, one of p^0..p^(r-1)
    std::uint64_t trunc = 0;   // truncation exponent, a p-power >= p
    SparseKVec relation;       // image of x^trunc as a linear form in the generators
};

struct HopfPresentation {
    FqPtr field;
    std::vector<GeneratorSpec> gens;
};

/// Index into B (x) B: lhs * dim + rhs.
using PairIdx = std::uint64_t;
using SparsePairVec = std::vector<std::pair<PairIdx, Code>>;

/// A finite Hopf algebra over k on an explicit basis with basis[0] = 1 and
/// counit = projection onto coordinate 0. Weight classes grade the basis by
/// the F_q^x-action: [alpha]* scales basis element i by alpha^weight_class[i].
///
/// Presentation-expanded algebras keep their monomial structure (products are
/// computed by head rewriting on demand); duals and dense tensors carry
/// explicit structure-constant tables. Immutable after construction.
class FiniteHopf {
public:
    enum class Provenance { Expanded, Dual, Tensor };

    FqPtr field;
    std::uint32_t dim = 0;
    Provenance provenance = Provenance::Expanded;
    std::vector<std::uint32_t> weight_class;

    struct MonomialRep {
        std::vector<GeneratorSpec> gens;
        std::vector<std::uint64_t> radix;   // trunc per generator
        std::vector<std::uint64_t> stride;  // mixed radix strides, generator 0 least significant
        // [g * dim + b] = x_g * b, fully reduced. Filled eagerly for small
        // dimensions and lazily (under a lock) beyond; a pure cache either way.
        mutable std::vector<SparseKVec> gen_mul;
        mutable std::vector<char> gen_mul_done;
    };

    struct DenseRep {
        std::vector<std::uint64_t> mult_off; // dim*dim + 1
        std::vector<std::pair<std::uint32_t, Code>> mult_ent;
        std::vector<std::uint64_t> comult_off; // dim + 1
        std::vector<std::pair<PairIdx, Code>> comult_ent;
    };

    std::optional<MonomialRep> mono;
    std::optional<DenseRep> dense;

    bool monomial() const { return mono.has_value(); }
    std::size_t n_generators() const { return mono ? mono->gens.size() : 0; }

    /// b_i * b_j as a reduced basis combination.
    SparseKVec mult(std::uint32_t i, std::uint32_t j) const;
    /// Delta(b_i) in B (x) B.
    SparsePairVec comult(std::uint32_t i) const;
    Code counit(std::uint32_t i) const { return i == 0 ? field->one() : field->zero(); }

    /// Exponent vector of basis element i (monomial representation only).
    std::vector<std::uint32_t> exponents(std::uint32_t i) const;
    std::string basis_label(std::uint32_t i) const;

    std::uint64_t order() const { return dim; }
};

/// Expands a presentation onto the monomial basis {prod x_i^{a_i} : a_i < e_i}
/// with multiplicative comultiplication from primitive generators. Validates
/// weight compatibility of the relations and verifies the Hopf axioms.
FiniteHopf expand(const HopfPresentation& P, std::uint64_t cap = dimension_cap());

/// Transposes the structure tensors. Requires dim <= dense_cap (the full
/// multiplication table is materialized). The dual of a weight-w line carries
/// weight (q-1-w) mod (q-1).
FiniteHopf cartier_dual(const FiniteHopf& H, std::uint64_t cap = dense_cap());

FiniteHopf tensor_product(const FiniteHopf& A, const FiniteHopf& B, std::uint64_t cap = dimension_cap());

/// Dense copy with materialized tensors (for structural comparisons).
FiniteHopf densify(const FiniteHopf& H, std::uint64_t cap = dense_cap());

/// Exact structural equality of basis, grading and both tensors.
bool structure_equal(const FiniteHopf& A, const FiniteHopf& B);

/// Verifies unit/counit laws and the grading exhaustively, associativity /
/// coassociativity / the bialgebra law exhaustively up to exhaustive_limit
/// and on seeded random triples beyond. Constructors use the light default;
/// the test suite raises the limit on representative algebras. Throws
/// Errc::Internal on violation.
void verify_axioms(const FiniteHopf& H, std::uint64_t exhaustive_limit = 16);

// -- algebra element helpers ------------------------------------------------

SparseKVec algebra_mul(const FiniteHopf& H, const SparseKVec& u, const SparseKVec& v);
/// v^(p^t); exact in characteristic p (the p-power map is additive).
SparseKVec algebra_pow_p(const FiniteHopf& H, const SparseKVec& v, std::uint64_t t);
/// v^q.
SparseKVec algebra_pow_q(const FiniteHopf& H, const SparseKVec& v);
SparsePairVec comult_of(const FiniteHopf& H, const SparseKVec& v);

// -- structural invariants ---------------------------------------------------

struct Primitives {
    std::vector<SparseKVec> all;                 // deterministic order
    std::vector<std::vector<SparseKVec>> by_s;   // Prim_{p^s}, s = 0..r-1
};

/// Solves Delta(z) = z(x)1 + 1(x)z and splits by the grading idempotents.
/// Monomial algebras take the combinatorial route (a basis monomial is
/// primitive iff every proper split has vanishing binomial coefficient, which
/// singles out the one-variable p-power monomials); dense algebras solve the
/// linear system over k. The two routes are cross-checked in the tests.
Primitives primitives(const FiniteHopf& H);

std::size_t prim_dim(const FiniteHopf& H);

/// (rk I_1, ..., rk I_{q-1}); weight-0 non-constant lines count in class q-1.
std::vector<std::uint64_t> eigen_profile(const FiniteHopf& H);

/// Linearized matrix L of x -> x^p on the basis: (x^p)-coords = L * coords^[p].
MatK frobenius_matrix(const FiniteHopf& H);

struct FrobVer {
    MatK F; // p-power map, linearized
    MatK V; // transpose of the dual's Frobenius matrix
};
FrobVer frobenius_verschiebung(const FiniteHopf& H);

/// dim I/I^2 of the Cartier dual.
std::size_t lie_dim_of_dual(const FiniteHopf& H);

/// dim I/I^2 of H itself.
std::size_t cotangent_dim(const FiniteHopf& H);

/// Brute-force group-like elements (Delta x = x(x)x, counit 1); enumeration
/// guard: card^(dim-1) <= 2^20.
std::vector<std::vector<Code>> group_likes(const FiniteHopf& H);

/// Deterministic structure dump (sorted basis, row-major tensors).
void dump_structure(const FiniteHopf& H, std::ostream& os);

/// Verifies that T (columns = images of A's basis) is a Hopf algebra morphism
/// A -> B; optionally requires grading equivariance.
bool is_hopf_morphism(const FiniteHopf& A, const FiniteHopf& B, const MatK& T, bool check_grading);

} // namespace shtukalab
