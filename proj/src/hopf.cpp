#include "shtukalab/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "shtukalab/rng.hpp"

namespace shtukalab {

std::uint64_t dimension_cap() {
    static const std::uint64_t cap = [] {
        if (const char* env = std::getenv("SHTUKALAB_CAP")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v >= 2) return std::min<std::uint64_t>(v, 1u << 20);
        }
        return std::uint64_t{4096};
    }();
    return cap;
}

std::uint64_t dense_cap() { return std::min<std::uint64_t>(dimension_cap(), 1024); }

namespace {

std::uint32_t weight_modulus(const Fq& F) {
    return F.q() > 2 ? static_cast<std::uint32_t>(F.q() - 1) : 1;
}

// binomial coefficient mod p via Lucas
std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
    std::uint64_t res = 1;
    while (n || k) {
        std::uint64_t ni = n % p, ki = k % p;
        if (ki > ni) return 0;
        // multiplicative formula for binom(ni, ki) mod p
        std::uint64_t num = 1, den = 1;
        for (std::uint64_t t = 0; t < ki; ++t) {
            num = num * ((ni - t) % p) % p;
            den = den * ((t + 1) % p) % p;
        }
        std::uint64_t deninv = 1, base = den, e = p - 2;
        while (e) {
            if (e & 1) deninv = deninv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        res = res * (num % p) % p * deninv % p;
        n /= p;
        k /= p;
    }
    return static_cast<std::uint32_t>(res % p);
}

bool is_p_power(std::uint64_t v, std::uint32_t p, std::uint32_t* log = nullptr) {
    if (v == 0) return false;
    std::uint32_t t = 0;
    while (v % p == 0) {
        v /= p;
        ++t;
    }
    if (log) *log = t;
    return v == 1;
}

SparsePairVec normalize_pairs(const Fq& F, SparsePairVec v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparsePairVec out;
    out.reserve(v.size());
    for (const auto& [idx, c] : v) {
        if (!out.empty() && out.back().first == idx)
            out.back().second = F.add(out.back().second, c);
        else
            out.emplace_back(idx, c);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
    return out;
}

/// Dense scratch accumulator for merging many sparse vectors.
class Accum {
public:
    void reset(std::size_t dim) {
        if (buf_.size() < dim) buf_.resize(dim, 0);
        touched_.clear();
    }
    void axpy(const Fq& F, Code c, const SparseKVec& v) {
        for (const auto& [idx, x] : v) {
            if (buf_[idx] == 0 && x != 0) touched_.push_back(idx);
            buf_[idx] = F.add(buf_[idx], F.mul(c, x));
        }
    }
    SparseKVec take() {
        std::sort(touched_.begin(), touched_.end());
        SparseKVec out;
        out.reserve(touched_.size());
        for (std::uint32_t idx : touched_) {
            if (buf_[idx] != 0) out.emplace_back(idx, buf_[idx]);
            buf_[idx] = 0;
        }
        touched_.clear();
        return out;
    }

private:
    std::vector<Code> buf_;
    std::vector<std::uint32_t> touched_;
};

thread_local Accum t_accum;

std::mutex& gen_mul_mutex() {
    static std::mutex mu;
    return mu;
}

/// x_g * b, computed through head rewriting; recursion strictly decreases the
/// total degree, so dependencies are always resolvable.
const SparseKVec& gen_entry(const FiniteHopf& H, std::size_t g, std::uint32_t b) {
    auto& rep = *H.mono;
    std::size_t slot = g * H.dim + b;
    if (rep.gen_mul_done[slot]) return rep.gen_mul[slot];
    const Fq& F = *H.field;
    auto e = H.exponents(b);
    SparseKVec out;
    if (e[g] + 1 < rep.radix[g]) {
        out = {{static_cast<std::uint32_t>(b + rep.stride[g]), F.one()}};
    } else {
        std::uint32_t rest = static_cast<std::uint32_t>(b - static_cast<std::uint64_t>(e[g]) * rep.stride[g]);
        Accum acc;
        acc.reset(H.dim);
        for (const auto& [h, c] : rep.gens[g].relation) acc.axpy(F, c, gen_entry(H, h, rest));
        out = acc.take();
    }
    std::lock_guard<std::mutex> lock(gen_mul_mutex());
    if (!rep.gen_mul_done[slot]) {
        rep.gen_mul[slot] = std::move(out);
        rep.gen_mul_done[slot] = 1;
    }
    return rep.gen_mul[slot];
}

} // namespace

std::vector<std::uint32_t> FiniteHopf::exponents(std::uint32_t i) const {
    if (!mono) fail(Errc::Internal, "exponents() needs the monomial representation");
    std::vector<std::uint32_t> out(mono->gens.size());
    std::uint64_t v = i;
    for (std::size_t g = 0; g < mono->gens.size(); ++g) {
        out[g] = static_cast<std::uint32_t>(v % mono->radix[g]);
        v /= mono->radix[g];
    }
    return out;
}

std::string FiniteHopf::basis_label(std::uint32_t i) const {
    if (!mono) return "b" + std::to_string(i);
    if (i == 0) return "1";
    auto e = exponents(i);
    std::ostringstream os;
    bool first = true;
    for (std::size_t g = 0; g < e.size(); ++g) {
        if (!e[g]) continue;
        if (!first) os << "*";
        first = false;
        os << mono->gens[g].name;
        if (e[g] > 1) os << "^" << e[g];
    }
    return os.str();
}

SparseKVec FiniteHopf::mult(std::uint32_t i, std::uint32_t j) const {
    const Fq& F = *field;
    if (dense) {
        std::uint64_t row = static_cast<std::uint64_t>(i) * dim + j;
        SparseKVec out(dense->mult_ent.begin() + static_cast<std::ptrdiff_t>(dense->mult_off[row]),
                       dense->mult_ent.begin() + static_cast<std::ptrdiff_t>(dense->mult_off[row + 1]));
        return out;
    }
    if (i == 0) return {{j, F.one()}};
    if (j == 0) return {{i, F.one()}};
    SparseKVec cur{{i, F.one()}};
    std::uint64_t v = j;
    for (std::size_t g = 0; g < mono->gens.size(); ++g) {
        std::uint32_t e = static_cast<std::uint32_t>(v % mono->radix[g]);
        v /= mono->radix[g];
        for (std::uint32_t rep = 0; rep < e; ++rep) {
            t_accum.reset(dim);
            for (const auto& [b, c] : cur) t_accum.axpy(F, c, gen_entry(*this, g, b));
            cur = t_accum.take();
            if (cur.empty()) return cur;
        }
    }
    return cur;
}

SparsePairVec FiniteHopf::comult(std::uint32_t i) const {
    const Fq& F = *field;
    if (dense) {
        return SparsePairVec(dense->comult_ent.begin() + static_cast<std::ptrdiff_t>(dense->comult_off[i]),
                             dense->comult_ent.begin() + static_cast<std::ptrdiff_t>(dense->comult_off[i + 1]));
    }
    const std::uint32_t p = F.p();
    SparsePairVec cur{{0, F.one()}};
    std::uint64_t v = i;
    for (std::size_t g = 0; g < mono->gens.size(); ++g) {
        std::uint64_t a = v % mono->radix[g];
        v /= mono->radix[g];
        if (!a) continue;
        std::uint64_t stride = mono->stride[g];
        SparsePairVec nxt;
        for (std::uint64_t k = 0; k <= a; ++k) {
            std::uint32_t bc = binom_mod_p(a, k, p);
            if (!bc) continue;
            Code bcc = F.from_int(bc);
            std::uint64_t shift = k * stride * dim + (a - k) * stride;
            for (const auto& [pidx, c] : cur) nxt.emplace_back(pidx + shift, F.mul(bcc, c));
        }
        cur = normalize_pairs(F, std::move(nxt));
    }
    return cur;
}

FiniteHopf expand(const HopfPresentation& P, std::uint64_t cap) {
    if (!P.field) fail(Errc::BadPresentation, "presentation has no field");
    const Fq& F = *P.field;
    const std::uint32_t mm = weight_modulus(F);

    std::uint64_t dim = 1;
    for (const auto& g : P.gens) {
        std::uint32_t tlog = 0;
        if (!is_p_power(g.trunc, F.p(), &tlog) || tlog == 0)
            fail(Errc::BadPresentation, "truncation exponent of " + g.name + " must be a p-power >= p");
        std::uint32_t wlog = 0;
        if (!is_p_power(g.weight, F.p(), &wlog) || wlog >= F.r())
            fail(Errc::BadPresentation, "weight of " + g.name + " must be one of p^0..p^(r-1)");
        dim *= g.trunc;
        if (dim > cap) fail(Errc::TooLarge, "presentation dimension exceeds the cap " + std::to_string(cap));
    }
    for (std::size_t i = 0; i < P.gens.size(); ++i)
        for (std::size_t j = i + 1; j < P.gens.size(); ++j)
            if (P.gens[i].name == P.gens[j].name)
                fail(Errc::NonConfluent, "duplicate generator name " + P.gens[i].name);
    for (const auto& g : P.gens) {
        for (const auto& [h, c] : g.relation) {
            if (h >= P.gens.size()) fail(Errc::BadPresentation, "relation of " + g.name + " names a missing generator");
            if (c == 0) continue;
            std::uint64_t lhs = static_cast<std::uint64_t>(g.weight) % mm * (g.trunc % mm) % mm;
            if (lhs != P.gens[h].weight % mm)
                fail(Errc::WeightIncompatibleRelation,
                     "relation " + g.name + "^" + std::to_string(g.trunc) + " -> " + P.gens[h].name);
        }
    }

    FiniteHopf H;
    H.field = P.field;
    H.dim = static_cast<std::uint32_t>(dim);
    H.provenance = FiniteHopf::Provenance::Expanded;
    FiniteHopf::MonomialRep rep;
    rep.gens = P.gens;
    for (auto& g : rep.gens) g.relation = sparse_normalize(F, g.relation);
    rep.radix.resize(rep.gens.size());
    rep.stride.resize(rep.gens.size());
    std::uint64_t s = 1;
    for (std::size_t g = 0; g < rep.gens.size(); ++g) {
        rep.radix[g] = rep.gens[g].trunc;
        rep.stride[g] = s;
        s *= rep.radix[g];
    }
    H.mono = std::move(rep);

    // grading
    H.weight_class.resize(H.dim);
    for (std::uint32_t i = 0; i < H.dim; ++i) {
        auto e = H.exponents(i);
        std::uint64_t w = 0;
        for (std::size_t g = 0; g < e.size(); ++g)
            w += static_cast<std::uint64_t>(e[g]) * H.mono->gens[g].weight;
        H.weight_class[i] = static_cast<std::uint32_t>(w % mm);
    }

    // generator multiplication tables: eager for small dimensions, filled on
    // demand beyond (rewriting for dense random relations can be sizable)
    const std::size_t ng = H.mono->gens.size();
    H.mono->gen_mul.assign(ng * H.dim, {});
    H.mono->gen_mul_done.assign(ng * H.dim, 0);
    if (static_cast<std::uint64_t>(H.dim) <= 1024) {
        std::vector<std::uint32_t> order(H.dim);
        std::iota(order.begin(), order.end(), 0u);
        std::vector<std::uint32_t> deg(H.dim, 0);
        for (std::uint32_t i = 0; i < H.dim; ++i) {
            auto e = H.exponents(i);
            deg[i] = std::accumulate(e.begin(), e.end(), 0u);
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return deg[a] < deg[b]; });
        for (std::uint32_t b : order)
            for (std::size_t g = 0; g < ng; ++g) gen_entry(H, g, b);
    }

    verify_axioms(H);
    return H;
}

namespace {

// Materialized multiplication rows for a monomial algebra, deduplicated by the
// combined exponent vector.
class ProductCache {
public:
    explicit ProductCache(const FiniteHopf& H) : H_(H) {}

    const SparseKVec& product(std::uint32_t i, std::uint32_t j) {
        std::uint64_t key = 0;
        auto ei = H_.exponents(i), ej = H_.exponents(j);
        for (std::size_t g = ei.size(); g-- > 0;)
            key = key * (2 * H_.mono->radix[g] - 1) + ei[g] + ej[g];
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(key, H_.mult(i, j)).first->second;
    }

private:
    const FiniteHopf& H_;
    std::unordered_map<std::uint64_t, SparseKVec> cache_;
};

FiniteHopf::DenseRep materialize(const FiniteHopf& H) {
    FiniteHopf::DenseRep d;
    const std::uint64_t n = H.dim;
    d.mult_off.assign(n * n + 1, 0);
    std::optional<ProductCache> cache;
    if (H.mono) cache.emplace(H);
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < n; ++j) {
            SparseKVec row = cache ? cache->product(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j))
                                   : H.mult(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
            for (const auto& e : row) d.mult_ent.push_back(e);
            d.mult_off[i * n + j + 1] = d.mult_ent.size();
        }
    d.comult_off.assign(n + 1, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto row = H.comult(static_cast<std::uint32_t>(i));
        for (const auto& e : row) d.comult_ent.push_back(e);
        d.comult_off[i + 1] = d.comult_ent.size();
    }
    return d;
}

} // namespace

FiniteHopf densify(const FiniteHopf& H, std::uint64_t cap) {
    if (H.dim > cap) fail(Errc::TooLarge, "dimension exceeds the dense materialization cap");
    FiniteHopf out;
    out.field = H.field;
    out.dim = H.dim;
    out.provenance = H.provenance;
    out.weight_class = H.weight_class;
    out.mono = H.mono;
    out.dense = materialize(H);
    return out;
}

FiniteHopf cartier_dual(const FiniteHopf& H, std::uint64_t cap) {
    if (H.dim > cap) fail(Errc::TooLarge, "dualization cap exceeded");
    const Fq& F = *H.field;
    const std::uint64_t n = H.dim;
    const std::uint32_t mm = weight_modulus(F);

    FiniteHopf out;
    out.field = H.field;
    out.dim = H.dim;
    out.provenance = FiniteHopf::Provenance::Dual;
    out.weight_class.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) out.weight_class[i] = (mm - H.weight_class[i] % mm) % mm;

    FiniteHopf::DenseRep src = H.dense ? *H.dense : materialize(H);
    FiniteHopf::DenseRep d;

    // dual multiplication = transpose of the comultiplication
    {
        std::vector<std::vector<std::pair<std::uint32_t, Code>>> rows(n * n);
        for (std::uint64_t b = 0; b < n; ++b)
            for (std::uint64_t e = src.comult_off[b]; e < src.comult_off[b + 1]; ++e) {
                const auto& [pidx, c] = src.comult_ent[e];
                rows[pidx].emplace_back(static_cast<std::uint32_t>(b), c);
            }
        d.mult_off.assign(n * n + 1, 0);
        for (std::uint64_t r = 0; r < n * n; ++r) {
            std::sort(rows[r].begin(), rows[r].end());
            for (const auto& e : rows[r]) d.mult_ent.push_back(e);
            d.mult_off[r + 1] = d.mult_ent.size();
        }
    }
    // dual comultiplication = transpose of the multiplication
    {
        std::vector<SparsePairVec> rows(n);
        for (std::uint64_t i = 0; i < n; ++i)
            for (std::uint64_t j = 0; j < n; ++j) {
                std::uint64_t r = i * n + j;
                for (std::uint64_t e = src.mult_off[r]; e < src.mult_off[r + 1]; ++e) {
                    const auto& [k, c] = src.mult_ent[e];
                    rows[k].emplace_back(i * n + j, c);
                }
            }
        d.comult_off.assign(n + 1, 0);
        for (std::uint64_t k = 0; k < n; ++k) {
            rows[k] = normalize_pairs(F, std::move(rows[k]));
            for (const auto& e : rows[k]) d.comult_ent.push_back(e);
            d.comult_off[k + 1] = d.comult_ent.size();
        }
    }
    out.dense = std::move(d);
    verify_axioms(out);
    return out;
}

FiniteHopf tensor_product(const FiniteHopf& A, const FiniteHopf& B, std::uint64_t cap) {
    if (!A.field->same(*B.field)) fail(Errc::FieldMismatch, "tensor factors live over different fields");
    const std::uint64_t dim = static_cast<std::uint64_t>(A.dim) * B.dim;
    if (dim > cap) fail(Errc::TooLarge, "tensor dimension exceeds the cap");

    if (A.mono && B.mono) {
        // concatenated presentation; pair index (i, j) -> i + dimA * j
        HopfPresentation P;
        P.field = A.field;
        P.gens = A.mono->gens;
        for (auto g : B.mono->gens) {
            for (auto& [h, c] : g.relation) h += static_cast<std::uint32_t>(A.mono->gens.size());
            g.name += "'";
            P.gens.push_back(std::move(g));
        }
        // names may collide between factors; disambiguate deterministically
        for (std::size_t i = 0; i < P.gens.size(); ++i)
            for (std::size_t j = i + 1; j < P.gens.size(); ++j)
                if (P.gens[i].name == P.gens[j].name) P.gens[j].name += "_" + std::to_string(j);
        FiniteHopf H = expand(P, cap);
        H.provenance = FiniteHopf::Provenance::Tensor;
        return H;
    }

    if (dim > dense_cap()) fail(Errc::TooLarge, "dense tensor product exceeds the dense cap");
    FiniteHopf DA = A.dense ? A : densify(A);
    FiniteHopf DB = B.dense ? B : densify(B);
    const Fq& F = *A.field;
    const std::uint32_t mm = weight_modulus(F);

    FiniteHopf out;
    out.field = A.field;
    out.dim = static_cast<std::uint32_t>(dim);
    out.provenance = FiniteHopf::Provenance::Tensor;
    out.weight_class.resize(dim);
    auto pair_index = [&](std::uint64_t i, std::uint64_t j) { return i + static_cast<std::uint64_t>(A.dim) * j; };
    for (std::uint64_t i = 0; i < A.dim; ++i)
        for (std::uint64_t j = 0; j < B.dim; ++j)
            out.weight_class[pair_index(i, j)] = (A.weight_class[i] + B.weight_class[j]) % mm;

    FiniteHopf::DenseRep d;
    d.mult_off.assign(dim * dim + 1, 0);
    for (std::uint64_t x = 0; x < dim; ++x) {
        std::uint64_t i1 = x % A.dim, i2 = x / A.dim;
        for (std::uint64_t y = 0; y < dim; ++y) {
            std::uint64_t j1 = y % A.dim, j2 = y / A.dim;
            SparseKVec ra = DA.mult(static_cast<std::uint32_t>(i1), static_cast<std::uint32_t>(j1));
            SparseKVec rb = DB.mult(static_cast<std::uint32_t>(i2), static_cast<std::uint32_t>(j2));
            SparseKVec row;
            for (const auto& [ka, ca] : ra)
                for (const auto& [kb, cb] : rb)
                    row.emplace_back(static_cast<std::uint32_t>(pair_index(ka, kb)), F.mul(ca, cb));
            row = sparse_normalize(F, std::move(row));
            for (const auto& e : row) d.mult_ent.push_back(e);
            d.mult_off[x * dim + y + 1] = d.mult_ent.size();
        }
    }
    d.comult_off.assign(dim + 1, 0);
    for (std::uint64_t x = 0; x < dim; ++x) {
        std::uint64_t i1 = x % A.dim, i2 = x / A.dim;
        auto ra = DA.comult(static_cast<std::uint32_t>(i1));
        auto rb = DB.comult(static_cast<std::uint32_t>(i2));
        SparsePairVec row;
        for (const auto& [pa, ca] : ra) {
            std::uint64_t la = pa / DA.dim, raa = pa % DA.dim;
            for (const auto& [pb, cb] : rb) {
                std::uint64_t lb = pb / DB.dim, rbb = pb % DB.dim;
                std::uint64_t l = pair_index(la, lb), r = pair_index(raa, rbb);
                row.emplace_back(l * dim + r, F.mul(ca, cb));
            }
        }
        row = normalize_pairs(F, std::move(row));
        for (const auto& e : row) d.comult_ent.push_back(e);
        d.comult_off[x + 1] = d.comult_ent.size();
    }
    out.dense = std::move(d);
    verify_axioms(out);
    return out;
}

bool structure_equal(const FiniteHopf& A, const FiniteHopf& B) {
    if (A.dim != B.dim || !A.field->same(*B.field)) return false;
    if (A.weight_class != B.weight_class) return false;
    for (std::uint32_t i = 0; i < A.dim; ++i) {
        if (A.comult(i) != B.comult(i)) return false;
        for (std::uint32_t j = 0; j < A.dim; ++j)
            if (A.mult(i, j) != B.mult(i, j)) return false;
    }
    return true;
}

namespace {

/// Product in B (x) B with an operation budget; returns false when the budget
/// is exhausted (callers treat that as "skip this sample").
bool pair_mult_budgeted(const FiniteHopf& H, const SparsePairVec& u, const SparsePairVec& v,
                        std::uint64_t budget, SparsePairVec& result) {
    const Fq& F = *H.field;
    const std::uint64_t d = H.dim;
    std::map<PairIdx, Code> acc;
    for (const auto& [pu, cu] : u) {
        std::uint32_t ul = static_cast<std::uint32_t>(pu / d), ur = static_cast<std::uint32_t>(pu % d);
        for (const auto& [pv, cv] : v) {
            std::uint32_t vl = static_cast<std::uint32_t>(pv / d), vr = static_cast<std::uint32_t>(pv % d);
            Code c = F.mul(cu, cv);
            SparseKVec left = H.mult(ul, vl);
            SparseKVec right = H.mult(ur, vr);
            std::uint64_t cost = static_cast<std::uint64_t>(left.size()) * right.size();
            if (cost > budget) return false;
            budget -= cost;
            for (const auto& [bl, cl] : left)
                for (const auto& [br, cr] : right) {
                    Code& slot = acc[static_cast<std::uint64_t>(bl) * d + br];
                    slot = F.add(slot, F.mul(c, F.mul(cl, cr)));
                }
        }
    }
    result.clear();
    for (const auto& [k, c] : acc)
        if (c != 0) result.emplace_back(k, c);
    return true;
}

} // namespace

void verify_axioms(const FiniteHopf& H, std::uint64_t exhaustive_limit) {
    const Fq& F = *H.field;
    const std::uint64_t d = H.dim;
    const std::uint32_t mm = weight_modulus(F);
    if (H.weight_class.size() != d || H.weight_class[0] != 0) fail(Errc::Internal, "bad grading vector");

    // unit laws and counit rows
    for (std::uint32_t i = 0; i < d; ++i) {
        SparseKVec want{{i, F.one()}};
        if (H.mult(0, i) != want || H.mult(i, 0) != want) fail(Errc::Internal, "unit law fails");
        auto cm = H.comult(i);
        SparsePairVec lhsL, lhsR;
        for (const auto& [pidx, c] : cm) {
            std::uint32_t l = static_cast<std::uint32_t>(pidx / d), r = static_cast<std::uint32_t>(pidx % d);
            if ((H.weight_class[l] + H.weight_class[r]) % mm != H.weight_class[i])
                fail(Errc::Internal, "comultiplication breaks the grading");
            if (l == 0) lhsL.emplace_back(r, c);
            if (r == 0) lhsR.emplace_back(l, c);
        }
        SparsePairVec want1{{i, F.one()}};
        if (normalize_pairs(F, std::move(lhsL)) != want1 || normalize_pairs(F, std::move(lhsR)) != want1)
            fail(Errc::Internal, "counit law fails");
    }

    Rng rng(0x5eedULL + d);
    auto pick = [&](std::uint64_t n) { return static_cast<std::uint32_t>(rng.below(n)); };

    // coassociativity
    auto check_coassoc = [&](std::uint32_t i) {
        std::map<std::uint64_t, Code> lhs, rhs; // l*d^2 + m*d + r
        for (const auto& [pidx, c] : H.comult(i)) {
            std::uint32_t l = static_cast<std::uint32_t>(pidx / d), r = static_cast<std::uint32_t>(pidx % d);
            for (const auto& [pl, cl] : H.comult(l)) {
                std::uint64_t key = (pl / d) * d * d + (pl % d) * d + r;
                Code& slot = lhs[key];
                slot = F.add(slot, F.mul(c, cl));
            }
            for (const auto& [pr, cr] : H.comult(r)) {
                std::uint64_t key = static_cast<std::uint64_t>(l) * d * d + (pr / d) * d + (pr % d);
                Code& slot = rhs[key];
                slot = F.add(slot, F.mul(c, cr));
            }
        }
        for (auto& [k, v] : lhs)
            if (v != (rhs.count(k) ? rhs[k] : 0)) fail(Errc::Internal, "coassociativity fails");
        for (auto& [k, v] : rhs)
            if (v != (lhs.count(k) ? lhs[k] : 0)) fail(Errc::Internal, "coassociativity fails");
    };
    if (d <= std::max<std::uint64_t>(exhaustive_limit, 64))
        for (std::uint32_t i = 0; i < d; ++i) check_coassoc(i);
    else
        for (int t = 0; t < 32; ++t) check_coassoc(pick(d));

    // associativity, multiplicative grading, counit multiplicativity, bialgebra law
    auto check_pair = [&](std::uint32_t i, std::uint32_t j, std::uint64_t budget) -> std::uint64_t {
        SparseKVec prod = H.mult(i, j);
        for (const auto& [k, c] : prod) {
            (void)c;
            if ((H.weight_class[i] + H.weight_class[j]) % mm != H.weight_class[k])
                fail(Errc::Internal, "multiplication breaks the grading");
        }
        if (i != 0 && j != 0 && sparse_get(prod, 0) != 0) fail(Errc::Internal, "counit is not multiplicative");
        // bialgebra law
        SparsePairVec lhs;
        if (!pair_mult_budgeted(H, H.comult(i), H.comult(j), budget, lhs)) return 0;
        SparsePairVec rhs;
        for (const auto& [k, c] : prod)
            for (const auto& [pidx, ck] : H.comult(k)) rhs.emplace_back(pidx, F.mul(c, ck));
        if (lhs != normalize_pairs(F, std::move(rhs))) fail(Errc::Internal, "bialgebra law fails");
        return 1;
    };
    auto check_triple = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k, std::uint64_t budget) -> std::uint64_t {
        SparseKVec l = H.mult(i, j);
        SparseKVec r = H.mult(j, k);
        if ((l.size() + 1) * (r.size() + 1) > budget) return 0;
        SparseKVec lhs;
        for (const auto& [b, c] : l) sparse_axpy(F, lhs, c, H.mult(b, k));
        SparseKVec rhs;
        for (const auto& [b, c] : r) sparse_axpy(F, rhs, c, H.mult(i, b));
        if (lhs != rhs) fail(Errc::Internal, "associativity fails");
        return 1;
    };
    const std::uint64_t kBig = ~std::uint64_t{0};
    if (d <= exhaustive_limit) {
        for (std::uint32_t i = 0; i < d; ++i)
            for (std::uint32_t j = 0; j < d; ++j) check_pair(i, j, kBig);
        if (d <= 64)
            for (std::uint32_t i = 0; i < d; ++i)
                for (std::uint32_t j = 0; j < d; ++j)
                    for (std::uint32_t k = 0; k < d; ++k) check_triple(i, j, k, kBig);
        else
            for (int t = 0; t < 512; ++t) check_triple(pick(d), pick(d), pick(d), kBig);
    } else {
        // budgeted sampling: pathological samples are skipped, not ground through
        for (int t = 0; t < 64; ++t) check_pair(pick(d), pick(d), 1u << 16);
        for (int t = 0; t < 64; ++t) check_triple(pick(d), pick(d), pick(d), 1u << 14);
    }
}

SparseKVec algebra_mul(const FiniteHopf& H, const SparseKVec& u, const SparseKVec& v) {
    const Fq& F = *H.field;
    SparseKVec out;
    for (const auto& [i, ci] : u)
        for (const auto& [j, cj] : v) sparse_axpy(F, out, F.mul(ci, cj), H.mult(i, j));
    return out;
}

namespace {

SparseKVec basis_pow(const FiniteHopf& H, std::uint32_t i, std::uint64_t e) {
    const Fq& F = *H.field;
    SparseKVec acc{{0, F.one()}};
    SparseKVec base{{i, F.one()}};
    while (e) {
        if (e & 1) acc = algebra_mul(H, acc, base);
        base = algebra_mul(H, base, base);
        e >>= 1;
    }
    return acc;
}

} // namespace

namespace {

/// x_g^(p^t) expanded over single-variable p-power monomials; the rewrite
/// x^(p^t) = relation^(p^(t-tau)) keeps the recursion inside that set.
SparseKVec ppow_single(const FiniteHopf& H, std::size_t g, std::uint64_t t) {
    const Fq& F = *H.field;
    const std::uint64_t radix = H.mono->radix[g];
    std::uint64_t pt = 1;
    bool small = true;
    for (std::uint64_t i = 0; i < t; ++i) {
        pt *= F.p();
        if (pt >= radix) {
            small = false;
            break;
        }
    }
    if (small) return {{static_cast<std::uint32_t>(pt * H.mono->stride[g]), F.one()}};
    std::uint64_t tau = 0, e = radix;
    while (e % F.p() == 0) {
        e /= F.p();
        ++tau;
    }
    SparseKVec acc;
    for (const auto& [h, c] : H.mono->gens[g].relation)
        sparse_axpy(F, acc, F.frob(c, t - tau), ppow_single(H, h, t - tau));
    return acc;
}

/// Index of x_g^(p^s) if the basis element is a single-variable p-power
/// monomial (or the unit); nullopt otherwise.
std::optional<std::pair<std::size_t, std::uint64_t>> single_ppow_of(const FiniteHopf& H, std::uint32_t i) {
    auto e = H.exponents(i);
    std::size_t gen = e.size();
    for (std::size_t g = 0; g < e.size(); ++g) {
        if (!e[g]) continue;
        if (gen != e.size()) return std::nullopt;
        gen = g;
    }
    if (gen == e.size()) return std::nullopt; // the unit, handled by the caller
    std::uint64_t v = e[gen], s = 0;
    while (v % H.field->p() == 0) {
        v /= H.field->p();
        ++s;
    }
    if (v != 1) return std::nullopt;
    return std::make_pair(gen, s);
}

} // namespace

SparseKVec algebra_pow_p(const FiniteHopf& H, const SparseKVec& v, std::uint64_t t) {
    const Fq& F = *H.field;
    if (t == 0) return v;
    if (H.mono) {
        // fast path when the support consists of single-variable p-power
        // monomials (primitive combinations always do)
        bool fast = true;
        for (const auto& [i, c] : v) {
            (void)c;
            if (i != 0 && !single_ppow_of(H, i)) {
                fast = false;
                break;
            }
        }
        if (fast) {
            SparseKVec out;
            for (const auto& [i, c] : v) {
                Code ct = F.frob(c, t);
                if (i == 0) {
                    sparse_axpy(F, out, ct, {{0u, F.one()}});
                } else {
                    auto sv = single_ppow_of(H, i);
                    sparse_axpy(F, out, ct, ppow_single(H, sv->first, sv->second + t));
                }
            }
            return out;
        }
    }
    SparseKVec cur = v;
    for (std::uint64_t s = 0; s < t; ++s) {
        SparseKVec nxt;
        for (const auto& [i, c] : cur) sparse_axpy(F, nxt, F.frob(c, 1), basis_pow(H, i, F.p()));
        cur = std::move(nxt);
    }
    return cur;
}

SparseKVec algebra_pow_q(const FiniteHopf& H, const SparseKVec& v) { return algebra_pow_p(H, v, H.field->r()); }

SparsePairVec comult_of(const FiniteHopf& H, const SparseKVec& v) {
    const Fq& F = *H.field;
    SparsePairVec out;
    for (const auto& [i, c] : v)
        for (const auto& [pidx, cc] : H.comult(i)) out.emplace_back(pidx, F.mul(c, cc));
    return normalize_pairs(F, std::move(out));
}

Primitives primitives(const FiniteHopf& H) {
    const Fq& F = *H.field;
    const std::uint32_t mm = weight_modulus(F);
    Primitives out;
    out.by_s.resize(F.r());

    if (H.mono) {
        // a monomial is primitive iff every proper split has binomial
        // coefficient 0 mod p: exactly the one-variable p-power monomials
        struct Cand {
            std::uint32_t deg_log;
            std::size_t gen;
            std::uint32_t idx;
            std::uint32_t s;
        };
        std::vector<Cand> cands;
        for (std::size_t g = 0; g < H.mono->gens.size(); ++g) {
            std::uint32_t wlog = 0;
            is_p_power(H.mono->gens[g].weight, F.p(), &wlog);
            std::uint64_t pw = 1;
            std::uint32_t t = 0;
            while (pw < H.mono->radix[g]) {
                std::uint32_t idx = static_cast<std::uint32_t>(pw * H.mono->stride[g]);
                cands.push_back({t, g, idx, (wlog + t) % F.r()});
                pw *= F.p();
                ++t;
            }
        }
        std::stable_sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
            if (a.deg_log != b.deg_log) return a.deg_log < b.deg_log; // graded
            return a.gen < b.gen;                                     // then lexicographic
        });
        for (const auto& c : cands) {
            SparseKVec v{{c.idx, F.one()}};
            out.by_s[c.s].push_back(v);
            out.all.push_back(std::move(v));
        }
        return out;
    }

    // dense route: kernel of the linear system Delta(z) - z(x)1 - 1(x)z = 0
    const std::uint32_t d = H.dim;
    std::map<PairIdx, std::map<std::uint32_t, Code>> rows;
    for (std::uint32_t b = 0; b < d; ++b) {
        for (const auto& [pidx, c] : H.comult(b)) {
            Code& slot = rows[pidx][b];
            slot = F.add(slot, c);
        }
        PairIdx right = static_cast<PairIdx>(b) * d; // (b, 0)
        Code& s1 = rows[right][b];
        s1 = F.sub(s1, F.one());
        PairIdx left = b; // (0, b)
        Code& s2 = rows[left][b];
        s2 = F.sub(s2, F.one());
    }
    MatK sys(H.field, rows.size(), d);
    std::size_t rr = 0;
    for (const auto& [pidx, row] : rows) {
        (void)pidx;
        for (const auto& [b, c] : row) sys.at(rr, b) = c;
        ++rr;
    }
    MatK K = sys.kernel();
    // split each kernel vector by weight class and re-echelon per class
    std::vector<SparseEchelon> spans;
    for (std::uint32_t s = 0; s < F.r(); ++s) spans.emplace_back(H.field);
    auto class_of_s = [&](std::uint32_t s) {
        std::uint64_t pw = 1;
        for (std::uint32_t t = 0; t < s; ++t) pw = pw * F.p() % mm;
        return static_cast<std::uint32_t>(pw % mm);
    };
    for (std::uint32_t s = 0; s < F.r(); ++s) {
        std::uint32_t cls = class_of_s(s);
        for (std::size_t col = 0; col < K.cols; ++col) {
            SparseKVec part;
            for (std::uint32_t b = 0; b < d; ++b)
                if (K.at(b, col) != 0 && H.weight_class[b] == cls) part.emplace_back(b, K.at(b, col));
            if (part.empty()) continue;
            if (spans[s].insert(part)) out.by_s[s].push_back(spans[s].rows().back());
        }
        for (const auto& v : out.by_s[s]) out.all.push_back(v);
    }
    return out;
}

std::size_t prim_dim(const FiniteHopf& H) { return primitives(H).all.size(); }

std::vector<std::uint64_t> eigen_profile(const FiniteHopf& H) {
    const Fq& F = *H.field;
    const std::uint32_t qm1 = static_cast<std::uint32_t>(F.q() - 1);
    std::vector<std::uint64_t> out(qm1, 0);
    for (std::uint32_t i = 1; i < H.dim; ++i) {
        std::uint32_t cls = H.weight_class[i] % std::max(1u, qm1);
        if (cls == 0) cls = qm1; // alpha^0 = alpha^(q-1) on F_q^x
        out[cls - 1] += 1;
    }
    return out;
}

MatK frobenius_matrix(const FiniteHopf& H) {
    MatK L(H.field, H.dim, H.dim);
    for (std::uint32_t i = 0; i < H.dim; ++i) {
        SparseKVec v = basis_pow(H, i, H.field->p());
        for (const auto& [b, c] : v) L.at(b, i) = c;
    }
    return L;
}

FrobVer frobenius_verschiebung(const FiniteHopf& H) {
    FrobVer out{frobenius_matrix(H), MatK()};
    out.V = frobenius_matrix(cartier_dual(H)).transpose();
    return out;
}

namespace {

std::size_t ideal_square_dim(const FiniteHopf& H) {
    SparseEchelon span(H.field);
    if (H.mono) {
        // products depend only on the combined exponent vector
        ProductCache cache(H);
        std::vector<std::uint32_t> nonunit;
        for (std::uint32_t i = 1; i < H.dim; ++i) nonunit.push_back(i);
        std::unordered_map<std::uint64_t, bool> seen;
        for (std::uint32_t i : nonunit)
            for (std::uint32_t j : nonunit) {
                auto ei = H.exponents(i), ej = H.exponents(j);
                std::uint64_t key = 0;
                for (std::size_t g = ei.size(); g-- > 0;) key = key * (2 * H.mono->radix[g] - 1) + ei[g] + ej[g];
                if (seen.emplace(key, true).second) span.insert(cache.product(i, j));
            }
    } else {
        for (std::uint32_t i = 1; i < H.dim; ++i)
            for (std::uint32_t j = 1; j < H.dim; ++j) span.insert(H.mult(i, j));
    }
    return span.rank();
}

} // namespace

std::size_t cotangent_dim(const FiniteHopf& H) { return (H.dim - 1) - ideal_square_dim(H); }

std::size_t lie_dim_of_dual(const FiniteHopf& H) { return cotangent_dim(cartier_dual(H)); }

std::vector<std::vector<Code>> group_likes(const FiniteHopf& H) {
    const Fq& F = *H.field;
    const std::uint32_t d = H.dim;
    // enumeration over I-coordinates
    double log_total = (d - 1) * std::log2(static_cast<double>(F.card()));
    if (log_total > 20.0) fail(Errc::TooLarge, "group-like enumeration out of range");
    std::vector<std::vector<Code>> found;
    std::vector<Code> y(d, 0);
    y[0] = F.one();
    std::uint64_t total = 1;
    for (std::uint32_t i = 1; i < d; ++i) total *= F.card();
    for (std::uint64_t it = 0; it < total; ++it) {
        std::uint64_t v = it;
        for (std::uint32_t i = 1; i < d; ++i) {
            y[i] = static_cast<Code>(v % F.card());
            v /= F.card();
        }
        SparseKVec x = dense_to_sparse(y);
        SparsePairVec lhs = comult_of(H, x);
        SparsePairVec rhs;
        for (const auto& [i, ci] : x)
            for (const auto& [j, cj] : x) rhs.emplace_back(static_cast<std::uint64_t>(i) * d + j, F.mul(ci, cj));
        if (lhs == normalize_pairs(F, std::move(rhs))) found.push_back(y);
    }
    return found;
}

void dump_structure(const FiniteHopf& H, std::ostream& os) {
    const Fq& F = *H.field;
    os << "dim=" << H.dim << "\n";
    for (std::uint32_t i = 0; i < H.dim; ++i)
        os << "basis " << i << " " << H.basis_label(i) << " weight=" << H.weight_class[i] << "\n";
    for (std::uint32_t i = 0; i < H.dim; ++i)
        for (std::uint32_t j = 0; j < H.dim; ++j) {
            os << "mult " << i << " " << j << " ->";
            for (const auto& [k, c] : H.mult(i, j)) os << " " << k << ":" << F.str(c);
            os << "\n";
        }
    for (std::uint32_t i = 0; i < H.dim; ++i) {
        os << "comult " << i << " ->";
        for (const auto& [pidx, c] : H.comult(i))
            os << " (" << pidx / H.dim << "," << pidx % H.dim << "):" << F.str(c);
        os << "\n";
    }
}

bool is_hopf_morphism(const FiniteHopf& A, const FiniteHopf& B, const MatK& T, bool check_grading) {
    const Fq& F = *A.field;
    if (T.rows != B.dim || T.cols != A.dim) return false;
    auto col = [&](std::uint32_t j) {
        SparseKVec v;
        for (std::size_t i = 0; i < T.rows; ++i)
            if (T.at(i, j) != 0) v.emplace_back(static_cast<std::uint32_t>(i), T.at(i, j));
        return v;
    };
    // unit, counit
    if (col(0) != SparseKVec{{0, F.one()}}) return false;
    for (std::uint32_t j = 1; j < A.dim; ++j)
        if (T.at(0, j) != 0) return false;
    if (check_grading) {
        const std::uint32_t mm = weight_modulus(F);
        for (std::uint32_t j = 0; j < A.dim; ++j)
            for (std::size_t i = 0; i < B.dim; ++i)
                if (T.at(i, j) != 0 && B.weight_class[i] % mm != A.weight_class[j] % mm) return false;
    }
    // algebra map
    for (std::uint32_t i = 0; i < A.dim; ++i)
        for (std::uint32_t j = 0; j < A.dim; ++j) {
            SparseKVec lhs;
            for (const auto& [k, c] : A.mult(i, j)) sparse_axpy(F, lhs, c, col(k));
            SparseKVec rhs = algebra_mul(B, col(i), col(j));
            if (lhs != rhs) return false;
        }
    // coalgebra map
    const std::uint64_t dB = B.dim;
    for (std::uint32_t i = 0; i < A.dim; ++i) {
        SparsePairVec lhs;
        for (const auto& [pidx, c] : A.comult(i)) {
            std::uint32_t l = static_cast<std::uint32_t>(pidx / A.dim), r = static_cast<std::uint32_t>(pidx % A.dim);
            for (const auto& [bl, cl] : col(l))
                for (const auto& [br, cr] : col(r))
                    lhs.emplace_back(static_cast<std::uint64_t>(bl) * dB + br, F.mul(c, F.mul(cl, cr)));
        }
        SparsePairVec rhs = comult_of(B, col(i));
        if (normalize_pairs(F, std::move(lhs)) != rhs) return false;
    }
    return true;
}

} // namespace shtukalab
