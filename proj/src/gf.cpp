#include "shtukalab/gf.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace shtukalab {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::ReducibleModulus: return "ReducibleModulus";
        case Errc::DegreeMismatch: return "DegreeMismatch";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::FieldMismatch: return "FieldMismatch";
        case Errc::NotNilpotent: return "NotNilpotent";
        case Errc::TooLarge: return "TooLarge";
        case Errc::WeightIncompatibleRelation: return "WeightIncompatibleRelation";
        case Errc::NonConfluent: return "NonConfluent";
        case Errc::BadPresentation: return "BadPresentation";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::NotBalanced: return "NotBalanced";
        case Errc::CapExceeded: return "CapExceeded";
        case Errc::QPowerLeavesSubspace: return "QPowerLeavesSubspace";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::UnknownKey: return "UnknownKey";
        case Errc::BadElement: return "BadElement";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

namespace {

bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

// Dense polynomial arithmetic over F_p, used for modulus validation only.
using Poly = std::vector<std::uint32_t>;

void poly_trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
    // g monic
    while (f.size() >= g.size()) {
        std::uint32_t lead = f.back();
        if (lead != 0) {
            std::size_t shift = f.size() - g.size();
            for (std::size_t i = 0; i < g.size(); ++i) {
                std::uint64_t t = f[shift + i] + static_cast<std::uint64_t>(p - g[i] % p) * lead;
                f[shift + i] = static_cast<std::uint32_t>(t % p);
            }
        }
        f.pop_back();
    }
    poly_trim(f);
    return f;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& g, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = static_cast<std::uint32_t>((out[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    }
    return poly_mod(std::move(out), g, p);
}

Poly poly_xpow_mod(std::uint64_t e, const Poly& g, std::uint32_t p) {
    // x^e mod g by square-and-multiply
    Poly base = poly_mod({0, 1}, g, p);
    Poly acc = {1};
    while (e) {
        if (e & 1) acc = poly_mulmod(acc, base, g, p);
        base = poly_mulmod(base, base, g, p);
        e >>= 1;
    }
    return acc;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
    auto inv_mod_p = [p](std::uint32_t v) {
        std::uint32_t res = 1, e = p - 2, base = v % p;
        while (e) {
            if (e & 1) res = static_cast<std::uint32_t>(static_cast<std::uint64_t>(res) * base % p);
            base = static_cast<std::uint32_t>(static_cast<std::uint64_t>(base) * base % p);
            e >>= 1;
        }
        return res;
    };
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // make b monic, reduce a mod b
        std::uint32_t c = inv_mod_p(b.back());
        for (auto& x : b) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * c % p);
        a = poly_mod(std::move(a), b, p);
        std::swap(a, b);
    }
    return a;
}

bool poly_is_irreducible(const Poly& g, std::uint32_t p) {
    // g monic of degree n >= 1: irreducible iff x^(p^n) == x mod g and
    // gcd(x^(p^(n/l)) - x, g) = 1 for every prime l | n.
    std::size_t n = g.size() - 1;
    if (n == 1) return true;
    auto xq_minus_x = [&](std::uint64_t e) {
        Poly f = poly_xpow_mod(e, g, p);
        if (f.size() < 2) f.resize(2, 0);
        f[1] = static_cast<std::uint32_t>((f[1] + p - 1) % p);
        poly_trim(f);
        return f;
    };
    std::uint64_t pn = 1;
    for (std::size_t i = 0; i < n; ++i) pn *= p;
    if (!xq_minus_x(pn).empty()) return false;
    std::size_t rest = n;
    for (std::size_t l = 2; l <= rest; ++l) {
        if (rest % l) continue;
        while (rest % l == 0) rest /= l;
        std::uint64_t e = 1;
        for (std::size_t i = 0; i < n / l; ++i) e *= p;
        Poly f = xq_minus_x(e);
        Poly d = poly_gcd(g, f, p);
        if (d.size() != 1) return false;
    }
    return true;
}

} // namespace

FqPtr Fq::create(std::uint32_t p, std::uint32_t r, std::uint32_t m, std::vector<std::uint32_t> modulus) {
    if (!is_prime(p)) fail(Errc::NotPrime, "p = " + std::to_string(p) + " is not prime");
    if (r == 0 || m == 0) fail(Errc::DegreeMismatch, "r and m must be positive");
    std::uint32_t n = r * m;
    if (modulus.size() != n + 1)
        fail(Errc::DegreeMismatch, "modulus has degree " + std::to_string(modulus.empty() ? 0 : modulus.size() - 1) +
                                       ", expected r*m = " + std::to_string(n));
    for (auto& c : modulus) c %= p;
    if (modulus.back() != 1) fail(Errc::DegreeMismatch, "modulus is not monic");

    std::uint64_t card = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        card *= p;
        if (card > kMaxCard) fail(Errc::TooLarge, "field size p^(r*m) exceeds 2^20");
    }
    if (!poly_is_irreducible(modulus, p)) fail(Errc::ReducibleModulus, "modulus is reducible over F_p");

    auto f = std::shared_ptr<Fq>(new Fq());
    f->p_ = p;
    f->r_ = r;
    f->m_ = m;
    f->n_ = n;
    f->card_ = card;
    f->q_ = 1;
    for (std::uint32_t i = 0; i < r; ++i) f->q_ *= p;
    f->modulus_ = std::move(modulus);

    f->pow_p_.resize(n + 1);
    f->pow_p_[0] = 1;
    for (std::uint32_t i = 1; i <= n; ++i) f->pow_p_[i] = f->pow_p_[i - 1] * p;

    // reduction rows: digits of x^(n+i) mod modulus for i = 0..n-2
    {
        Poly g = f->modulus_;
        Poly cur = poly_mod({0, 1}, g, p); // x
        // advance to x^n
        for (std::uint32_t i = 1; i < n; ++i) cur = poly_mulmod(cur, poly_mod({0, 1}, g, p), g, p);
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
            Poly row = cur;
            row.resize(n, 0);
            f->red_.push_back(row);
            cur = poly_mulmod(cur, poly_mod({0, 1}, g, p), g, p);
        }
        if (n == 1)
            f->gen_ = static_cast<Code>((p - f->modulus_[0] % p) % p); // x = -c0
        else
            f->gen_ = static_cast<Code>(f->pow_p_[1]); // just x
    }

    // Frobenius matrices: out_digit[i] = sum_j M[i][j] in_digit[j], column j = digits of (x^(p^t))^j
    {
        f->frob_.assign(n, std::vector<std::uint32_t>(static_cast<std::size_t>(n) * n, 0));
        for (std::uint32_t i = 0; i < n; ++i) f->frob_[0][static_cast<std::size_t>(i) * n + i] = 1;
        Code xpt = f->gen_;
        for (std::uint32_t t = 1; t < n; ++t) {
            xpt = f->pow(xpt, p); // x^(p^t)
            Code b = f->one();
            for (std::uint32_t j = 0; j < n; ++j) {
                for (std::uint32_t i = 0; i < n; ++i)
                    f->frob_[t][static_cast<std::size_t>(i) * n + j] = f->digit(b, i);
                b = f->mul(b, xpt);
            }
        }
    }

    // mul table for small fields
    if (card <= 256) {
        f->mul_table_.resize(static_cast<std::size_t>(card) * card);
        for (std::uint64_t a = 0; a < card; ++a)
            for (std::uint64_t b = 0; b <= a; ++b) {
                Code v = f->mul_slow(static_cast<Code>(a), static_cast<Code>(b));
                f->mul_table_[a * card + b] = v;
                f->mul_table_[b * card + a] = v;
            }
    }

    // F_p-basis of the F_q-subfield: nullspace of (frob_r - id) over F_p
    {
        std::vector<Code> basis;
        // Gaussian elimination on the n x n system
        const auto& Fr = f->frob_matrix(r % n);
        std::vector<std::vector<std::uint32_t>> rows(n, std::vector<std::uint32_t>(n, 0));
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
                std::uint32_t v = Fr[static_cast<std::size_t>(i) * n + j];
                if (i == j) v = (v + p - 1) % p;
                rows[i][j] = v;
            }
        // row reduce
        std::vector<int> pivot_col(n, -1);
        std::uint32_t rank = 0;
        auto inv_mod_p = [p](std::uint32_t v) {
            std::uint32_t res = 1, e = p - 2, base = v % p;
            while (e) {
                if (e & 1) res = static_cast<std::uint32_t>(static_cast<std::uint64_t>(res) * base % p);
                base = static_cast<std::uint32_t>(static_cast<std::uint64_t>(base) * base % p);
                e >>= 1;
            }
            return res;
        };
        for (std::uint32_t col = 0; col < n && rank < n; ++col) {
            std::uint32_t sel = rank;
            while (sel < n && rows[sel][col] == 0) ++sel;
            if (sel == n) continue;
            std::swap(rows[sel], rows[rank]);
            std::uint32_t c = inv_mod_p(rows[rank][col]);
            for (auto& x : rows[rank]) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * c % p);
            for (std::uint32_t i = 0; i < n; ++i) {
                if (i == rank || rows[i][col] == 0) continue;
                std::uint32_t factor = rows[i][col];
                for (std::uint32_t j = 0; j < n; ++j)
                    rows[i][j] = static_cast<std::uint32_t>(
                        (rows[i][j] + static_cast<std::uint64_t>(p - factor) * rows[rank][j]) % p);
            }
            pivot_col[rank] = static_cast<int>(col);
            ++rank;
        }
        std::vector<bool> is_pivot(n, false);
        for (std::uint32_t i = 0; i < rank; ++i) is_pivot[static_cast<std::uint32_t>(pivot_col[i])] = true;
        for (std::uint32_t freec = 0; freec < n; ++freec) {
            if (is_pivot[freec]) continue;
            std::vector<std::uint32_t> sol(n, 0);
            sol[freec] = 1;
            for (std::uint32_t i = 0; i < rank; ++i) {
                std::uint32_t c = rows[i][freec];
                sol[static_cast<std::uint32_t>(pivot_col[i])] = (p - c) % p;
            }
            basis.push_back(f->encode(sol.data()));
        }
        if (basis.size() != r) fail(Errc::Internal, "F_q subfield has wrong dimension");
        // put 1 first for readability
        std::sort(basis.begin(), basis.end());
        f->fq_basis_ = std::move(basis);
    }

    return f;
}

std::uint32_t Fq::digit(Code a, std::uint32_t i) const {
    return static_cast<std::uint32_t>((a / pow_p_[i]) % p_);
}

void Fq::decode(Code a, std::uint32_t* digits) const {
    for (std::uint32_t i = 0; i < n_; ++i) {
        digits[i] = a % p_;
        a /= p_;
    }
}

Code Fq::encode(const std::uint32_t* digits) const {
    std::uint64_t v = 0;
    for (std::uint32_t i = n_; i-- > 0;) v = v * p_ + (digits[i] % p_);
    return static_cast<Code>(v);
}

Code Fq::add(Code a, Code b) const {
    if (p_ == 2) return a ^ b;
    std::uint64_t out = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
        std::uint32_t s = static_cast<std::uint32_t>((a % p_ + b % p_) % p_);
        out += s * pow_p_[i];
        a /= p_;
        b /= p_;
    }
    return static_cast<Code>(out);
}

Code Fq::neg(Code a) const {
    if (p_ == 2) return a;
    std::uint64_t out = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
        out += ((p_ - a % p_) % p_) * pow_p_[i];
        a /= p_;
    }
    return static_cast<Code>(out);
}

Code Fq::sub(Code a, Code b) const { return add(a, neg(b)); }

Code Fq::mul_slow(Code a, Code b) const {
    std::array<std::uint32_t, 64> da{}, db{}, prod{};
    decode(a, da.data());
    decode(b, db.data());
    for (std::uint32_t i = 0; i < n_; ++i) {
        if (!da[i]) continue;
        for (std::uint32_t j = 0; j < n_; ++j)
            prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
    }
    // fold degrees >= n through the reduction rows
    for (std::uint32_t d = 2 * n_ - 2; d >= n_ && d < 64; --d) {
        std::uint32_t c = prod[d];
        if (c) {
            prod[d] = 0;
            const auto& row = red_[d - n_];
            for (std::uint32_t j = 0; j < n_; ++j)
                prod[j] = static_cast<std::uint32_t>((prod[j] + static_cast<std::uint64_t>(c) * row[j]) % p_);
        }
        if (d == n_) break;
    }
    return encode(prod.data());
}

Code Fq::mul(Code a, Code b) const {
    if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * card_ + b];
    return mul_slow(a, b);
}

Code Fq::pow(Code a, std::uint64_t e) const {
    Code acc = one(), base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

Code Fq::inv(Code a) const {
    if (a == 0) fail(Errc::BadElement, "division by zero");
    return pow(a, card_ - 2);
}

const std::vector<std::uint32_t>& Fq::frob_matrix(std::uint32_t t) const { return frob_[t % n_]; }

Code Fq::frob(Code a, std::uint64_t t) const {
    t %= n_;
    if (t == 0) return a;
    const auto& M = frob_[t];
    std::array<std::uint32_t, 32> in{}, out{};
    decode(a, in.data());
    for (std::uint32_t i = 0; i < n_; ++i) {
        std::uint64_t s = 0;
        for (std::uint32_t j = 0; j < n_; ++j) s += static_cast<std::uint64_t>(M[static_cast<std::size_t>(i) * n_ + j]) * in[j];
        out[i] = static_cast<std::uint32_t>(s % p_);
    }
    return encode(out.data());
}

Code Fq::q_pow(Code a, std::int64_t e) const {
    std::int64_t t = (e % n_) * static_cast<std::int64_t>(r_) % n_;
    t = ((t % n_) + n_) % n_;
    return frob(a, static_cast<std::uint64_t>(t));
}

std::vector<std::uint32_t> Fq::mul_matrix(Code a) const {
    std::vector<std::uint32_t> M(static_cast<std::size_t>(n_) * n_);
    Code b = a;
    Code xj = one();
    for (std::uint32_t j = 0; j < n_; ++j) {
        b = mul(a, xj);
        for (std::uint32_t i = 0; i < n_; ++i) M[static_cast<std::size_t>(i) * n_ + j] = digit(b, i);
        xj = mul(xj, gen_);
    }
    return M;
}

std::string Fq::str(Code a) const {
    if (a == 0) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::uint32_t i = n_; i-- > 0;) {
        std::uint32_t c = digit(a, i);
        if (!c) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << c;
        } else {
            if (c != 1) os << c;
            os << "g";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

Code Fq::parse(std::string_view s) const {
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
    Code acc = 0;
    bool any = false;
    skip_ws();
    int sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
    }
    while (true) {
        skip_ws();
        if (i >= s.size()) break;
        std::uint64_t coeff = 1;
        bool saw_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            coeff = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                coeff = coeff * 10 + static_cast<std::uint64_t>(s[i] - '0');
                if (coeff > (1ull << 40)) coeff %= p_;
                ++i;
            }
            saw_coeff = true;
            skip_ws();
            if (i < s.size() && s[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        std::uint32_t exp = 0;
        if (i < s.size() && s[i] == 'g') {
            ++i;
            exp = 1;
            skip_ws();
            if (i < s.size() && s[i] == '^') {
                ++i;
                skip_ws();
                if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                    fail(Errc::BadElement, "expected exponent after '^' in \"" + std::string(s) + "\"");
                exp = 0;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                    exp = exp * 10 + static_cast<std::uint32_t>(s[i++] - '0');
            }
        } else if (!saw_coeff) {
            fail(Errc::BadElement, "unexpected character '" + std::string(1, s[i]) + "' in \"" + std::string(s) + "\"");
        }
        Code term = mul(from_int(coeff), pow(gen_, exp));
        if (sign < 0) term = neg(term);
        acc = add(acc, term);
        any = true;
        skip_ws();
        if (i >= s.size()) break;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else {
            fail(Errc::BadElement, "expected '+' or '-' at position " + std::to_string(i) + " in \"" + std::string(s) + "\"");
        }
    }
    if (!any) fail(Errc::BadElement, "empty element string");
    return acc;
}

bool Fq::same(const Fq& o) const { return p_ == o.p_ && r_ == o.r_ && m_ == o.m_ && modulus_ == o.modulus_; }

std::string Fq::describe() const {
    std::ostringstream os;
    os << "F_" << card_ << " (p=" << p_ << ", q=" << q_ << ", k=F_q";
    if (m_ > 1) os << "^" << m_;
    os << ")";
    return os.str();
}

FqPtr make_extension_field(std::uint32_t p, std::uint32_t r, std::uint32_t m) {
    static std::mutex mu;
    static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, FqPtr> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({p, r, m});
        if (it != cache.end()) return it->second;
    }
    auto remember = [&](FqPtr f) {
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(std::make_tuple(p, r, m), f);
        return f;
    };
    std::uint32_t n = r * m;
    if (n == 1) return remember(Fq::create(p, r, m, {0, 1}));
    // smallest monic irreducible in lexicographic order of (c0, c1, ..., c_{n-1})
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        total *= p;
        if (total > Fq::kMaxCard) fail(Errc::TooLarge, "extension field exceeds the size cap");
    }
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> mod(n + 1, 0);
        std::uint64_t v = code;
        for (std::uint32_t i = 0; i < n; ++i) {
            mod[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        mod[n] = 1;
        if (mod[0] == 0) continue; // reducible: x divides
        if (poly_is_irreducible(mod, p)) return remember(Fq::create(p, r, m, std::move(mod)));
    }
    fail(Errc::Internal, "no irreducible polynomial found");
}

Code embed_generator(const Fq& small, const Fq& big) {
    if (small.p() != big.p() || big.degree() % small.degree() != 0)
        fail(Errc::FieldMismatch, "no embedding between these fields");
    struct Key {
        std::vector<std::uint32_t> small_mod, big_mod;
        std::uint32_t p;
        bool operator<(const Key& o) const {
            return std::tie(p, small_mod, big_mod) < std::tie(o.p, o.small_mod, o.big_mod);
        }
    };
    static std::mutex mu;
    static std::map<Key, Code> cache;
    Key key{small.modulus(), big.modulus(), small.p()};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const auto& mod = small.modulus();
    for (std::uint64_t cand = 0; cand < big.card(); ++cand) {
        Code acc = big.zero(), xp = big.one();
        Code c = static_cast<Code>(cand);
        for (std::size_t i = 0; i < mod.size(); ++i) {
            acc = big.add(acc, big.mul(big.from_int(mod[i]), xp));
            xp = big.mul(xp, c);
        }
        if (acc == big.zero()) {
            std::lock_guard<std::mutex> lock(mu);
            cache.emplace(std::move(key), c);
            return c;
        }
    }
    fail(Errc::Internal, "modulus has no root in the big field");
}

Code embed_code(const Fq& small, const Fq& big, Code gen_image, Code a) {
    Code acc = big.zero(), xp = big.one();
    for (std::uint32_t i = 0; i < small.degree(); ++i) {
        acc = big.add(acc, big.mul(big.from_int(small.digit(a, i)), xp));
        xp = big.mul(xp, gen_image);
    }
    return acc;
}

} // namespace shtukalab
