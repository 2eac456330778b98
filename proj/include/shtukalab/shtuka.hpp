#pragma once

#include <cstddef>
#include <vector>

#include "shtukalab/linalg.hpp"

namespace shtukalab {

/// A finite shtuka (M, f) over the working field: a free module of rank n
/// together with the q-semilinear endomorphism f(v) = F * v^[q], where v^[q]
/// raises coordinates to the q-th power and the columns of F are the images
/// f(e_j). The semilinearity degree q is the one carried by the field handle.
struct Shtuka {
    FqPtr field;
    std::size_t rank = 0;
    MatK F; // rank x rank

    Shtuka() = default;
    Shtuka(FqPtr f, MatK mat) : field(std::move(f)), rank(mat.rows), F(std::move(mat)) {
        if (F.rows != F.cols) fail(Errc::DimensionMismatch, "shtuka matrix must be square");
    }
};

/// A module map commuting with the structure maps: C * F_src = F_tgt * C^[q].
struct ShtukaMorphism {
    const Shtuka* source = nullptr;
    const Shtuka* target = nullptr;
    MatK C;
};

/// f(v) = F * v^[q].
std::vector<Code> apply(const Shtuka& M, const std::vector<Code>& v);

/// Matrix of the t-fold composite f^t, namely F * F^[q] * ... * F^[q^(t-1)]
/// (f^t(v) = composite * v^[q^t]).
MatK composite_matrix(const Shtuka& M, std::size_t t);

bool morphism_commutes(const Shtuka& src, const Shtuka& tgt, const MatK& C);

/// F_q-basis of {C : C F = F' C^[q]}, solved by flattening to an F_p-linear
/// system in the entries' digit coordinates. The returned dimension over F_q
/// is basis.size().
std::vector<MatK> hom_space(const Shtuka& M, const Shtuka& Mp);

struct SsNilSplit {
    Shtuka ss;
    Shtuka nil;
    MatK basis_change; // columns: adapted basis, ss block first
    std::size_t ss_dim = 0, nil_dim = 0;
};

/// Fitting decomposition: M_ss = im(f^n) with f bijective on it, M_nil =
/// ker(f^n) with f nilpotent on it. Kernels of semilinear powers are computed
/// as linear kernels of the composite followed by the inverse coordinate
/// twist.
SsNilSplit ss_nil_split(const Shtuka& M);

bool is_nilpotent(const Shtuka& M);
bool is_invertible(const Shtuka& M);

struct CyclicDecomposition {
    std::vector<std::size_t> exponents; // sorted descending
    MatK adapted_basis;                 // columns grouped chain by chain: v, f(v), ..., f^(s-1)(v)
};

/// Block sizes of a nilpotent shtuka via the kernel-chain rule
/// #\{i : s_i >= t\} = dim ker(f^t) - dim ker(f^(t-1)), plus an adapted basis
/// realizing the blocks. Throws NotNilpotent otherwise.
CyclicDecomposition cyclic_decompose(const Shtuka& M);

/// Restriction of scalars from the q^n-structure to the q-structure: the
/// rank n*rk(M) shtuka with identity blocks on the superdiagonal and the
/// F-block in the lower-left corner. The input's field handle must read
/// (p, r*n, m); the result lives over (p, r, n*m) with the same modulus.
Shtuka restrict_scalars(const Shtuka& M, std::size_t n);

} // namespace shtukalab
