#ifndef BILINEARFQ_FINITE_FIELD_HPP
#define BILINEARFQ_FINITE_FIELD_HPP

// Exact arithmetic in F_q, q = p^m.
//
// An element is stored as its base-p code: the coefficient vector
// (c_0, ..., c_{m-1}) of the reduced polynomial c_0 + c_1 t + ... maps to
// c_0 + c_1 p + ... + c_{m-1} p^{m-1}. Codes are canonical, so equality and
// hashing are plain integer comparisons, and ascending code order is the
// base-p counter order used for enumeration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace bfq {

struct FieldElement {
    std::uint32_t code = 0;

    constexpr FieldElement() = default;
    constexpr explicit FieldElement(std::uint32_t c) : code(c) {}

    constexpr bool is_zero() const noexcept { return code == 0; }
    friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

/// Largest q for which the field caches full addition/multiplication tables.
inline constexpr std::uint32_t kTableLimit = 512;
/// Largest q accepted by any constructor.
inline constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 31;

namespace detail {

using Poly = std::vector<std::uint32_t>;  // little-endian over F_p

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return (a * b) % p;  // p < 2^32, so a*b < 2^64
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Remainder of a modulo b (b nonzero, trimmed).
inline Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    const std::uint64_t lead_inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
        const std::uint64_t factor = mulmod(a.back(), lead_inv, p);
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) {
            const std::uint64_t sub = mulmod(factor, b[i], p);
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + mulmod(a[i], b[j], p)) % p);
    }
    trim(r);
    return r;
}

inline Poly poly_sub(Poly a, const Poly& b, std::uint32_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

/// Monic polynomial of the given degree whose lower coefficients are the
/// base-p digits of `index` (constant term least significant).
inline Poly monic_from_index(std::uint32_t degree, std::uint64_t index, std::uint32_t p) {
    Poly f(degree + 1, 0);
    for (std::uint32_t i = 0; i < degree; ++i) {
        f[i] = static_cast<std::uint32_t>(index % p);
        index /= p;
    }
    f[degree] = 1;
    return f;
}

/// Exhaustive factor search: f has no monic divisor of degree 1..deg/2.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
    const std::uint32_t deg = static_cast<std::uint32_t>(f.size() - 1);
    for (std::uint32_t k = 1; 2 * k <= deg; ++k) {
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < k; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx)
            if (poly_mod(f, monic_from_index(k, idx, p), p).empty()) return false;
    }
    return true;
}

}  // namespace detail

/// F_q = F_p[t]/(modulus). Immutable; copies share one table set.
class Field {
public:
    std::uint32_t p() const noexcept { return impl_->p; }
    std::uint32_t m() const noexcept { return impl_->m; }
    std::uint32_t q() const noexcept { return impl_->q; }
    const std::vector<std::uint32_t>& modulus() const noexcept { return impl_->modulus; }

    friend bool operator==(const Field& a, const Field& b) {
        return a.impl_ == b.impl_ ||
               (a.p() == b.p() && a.m() == b.m() && a.modulus() == b.modulus());
    }

    FieldElement zero() const noexcept { return FieldElement{0}; }
    FieldElement one() const noexcept { return FieldElement{1}; }

    FieldElement element(std::uint64_t code) const {
        if (code >= q())
            throw Error(ErrorCode::InvalidArgument,
                        "element code " + std::to_string(code) + " outside F_" + std::to_string(q()));
        return FieldElement{static_cast<std::uint32_t>(code)};
    }

    /// Image of an integer in the prime subfield.
    FieldElement from_integer(std::int64_t n) const {
        const std::int64_t r = n % static_cast<std::int64_t>(p());
        return FieldElement{static_cast<std::uint32_t>(r < 0 ? r + p() : r)};
    }

    FieldElement from_coeffs(std::span<const std::uint32_t> coeffs) const {
        if (coeffs.size() != m())
            throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(m()) + " coefficients");
        std::uint64_t code = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            if (coeffs[i] >= p())
                throw Error(ErrorCode::InvalidArgument, "coefficient not reduced mod p");
            code = code * p() + coeffs[i];
        }
        return FieldElement{static_cast<std::uint32_t>(code)};
    }

    std::vector<std::uint32_t> coeffs(FieldElement x) const {
        std::vector<std::uint32_t> c(m());
        std::uint32_t v = x.code;
        for (auto& ci : c) {
            ci = v % p();
            v /= p();
        }
        return c;
    }

    FieldElement add(FieldElement a, FieldElement b) const {
        if (has_tables()) return FieldElement{impl_->add[index(a, b)]};
        if (m() == 1) return FieldElement{static_cast<std::uint32_t>((std::uint64_t{a.code} + b.code) % p())};
        std::uint64_t r = 0, scale = 1;
        std::uint32_t x = a.code, y = b.code;
        for (std::uint32_t i = 0; i < m(); ++i) {
            r += ((x % p() + y % p()) % p()) * scale;
            x /= p();
            y /= p();
            scale *= p();
        }
        return FieldElement{static_cast<std::uint32_t>(r)};
    }

    FieldElement neg(FieldElement a) const {
        if (has_tables()) return FieldElement{impl_->neg[a.code]};
        if (m() == 1) return FieldElement{a.code == 0 ? 0 : p() - a.code};
        std::uint64_t r = 0, scale = 1;
        std::uint32_t x = a.code;
        for (std::uint32_t i = 0; i < m(); ++i) {
            const std::uint32_t c = x % p();
            r += ((p() - c) % p()) * scale;
            x /= p();
            scale *= p();
        }
        return FieldElement{static_cast<std::uint32_t>(r)};
    }

    FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

    FieldElement mul(FieldElement a, FieldElement b) const {
        if (has_tables()) return FieldElement{impl_->mul[index(a, b)]};
        return slow_mul(*impl_, a, b);
    }

    FieldElement inv(FieldElement a) const {
        if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
        if (has_tables()) return FieldElement{impl_->inv[a.code]};
        return slow_inv(*impl_, a);
    }

    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

    FieldElement pow(FieldElement a, std::uint64_t e) const {
        FieldElement r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    /// Tr(x) = x + x^p + ... + x^{p^{m-1}}, an element of the prime subfield.
    FieldElement trace(FieldElement x) const {
        if (!impl_->trace.empty()) return FieldElement{impl_->trace[x.code]};
        return slow_trace(*this, x);
    }

    /// e^{2 pi i j / p}.
    std::complex<double> root_of_unity(std::uint32_t j) const {
        if (!impl_->roots.empty()) return impl_->roots[j];
        return unit_root(j, p());
    }

    /// chi_s(x) = exp(2 pi i Tr(s x) / p); trivial exactly when s = 0.
    std::complex<double> character(FieldElement s, FieldElement x) const {
        return root_of_unity(trace(mul(s, x)).code);
    }

    /// All q elements in ascending code order.
    std::vector<FieldElement> elements() const {
        std::vector<FieldElement> out(q());
        for (std::uint32_t i = 0; i < q(); ++i) out[i] = FieldElement{i};
        return out;
    }

    /// {x^k : x in F_q}, ascending.
    std::vector<FieldElement> kth_powers(std::uint64_t k) const {
        if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
        std::vector<char> seen(q(), 0);
        for (std::uint32_t i = 0; i < q(); ++i) seen[pow(FieldElement{i}, k).code] = 1;
        std::vector<FieldElement> out;
        for (std::uint32_t i = 0; i < q(); ++i)
            if (seen[i]) out.emplace_back(i);
        return out;
    }

    bool has_tables() const noexcept { return !impl_->mul.empty(); }

    friend Field make_prime_field(std::uint64_t p);
    friend Field make_extension_field(std::uint64_t p, std::uint64_t m);
    friend Field make_field_with_modulus(std::uint64_t p, std::vector<std::uint32_t> modulus);

private:
    struct Impl {
        std::uint32_t p = 0, m = 0, q = 0;
        std::vector<std::uint32_t> modulus;
        std::vector<std::uint32_t> add, mul, neg, inv, trace;
        std::vector<std::complex<double>> roots;
    };

    explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::size_t index(FieldElement a, FieldElement b) const noexcept {
        return static_cast<std::size_t>(a.code) * impl_->q + b.code;
    }

    static std::complex<double> unit_root(std::uint32_t j, std::uint32_t p) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(p);
        return {std::cos(angle), std::sin(angle)};
    }

    static detail::Poly to_poly(const Impl& f, FieldElement x) {
        detail::Poly a(f.m);
        std::uint32_t v = x.code;
        for (auto& c : a) {
            c = v % f.p;
            v /= f.p;
        }
        detail::trim(a);
        return a;
    }

    static FieldElement from_poly(const Impl& f, const detail::Poly& a) {
        std::uint64_t code = 0;
        for (std::size_t i = a.size(); i-- > 0;) code = code * f.p + a[i];
        return FieldElement{static_cast<std::uint32_t>(code)};
    }

    static FieldElement slow_mul(const Impl& f, FieldElement a, FieldElement b) {
        if (f.m == 1) return FieldElement{static_cast<std::uint32_t>(detail::mulmod(a.code, b.code, f.p))};
        const auto prod = detail::poly_mul(to_poly(f, a), to_poly(f, b), f.p);
        return from_poly(f, detail::poly_mod(prod, f.modulus, f.p));
    }

    // Extended Euclid over F_p[t]; Fermat for prime fields.
    static FieldElement slow_inv(const Impl& f, FieldElement a) {
        if (f.m == 1) return FieldElement{static_cast<std::uint32_t>(detail::powmod(a.code, f.p - 2, f.p))};
        using detail::Poly;
        Poly r0 = f.modulus, r1 = to_poly(f, a);
        Poly s0{}, s1{1};
        while (!r1.empty()) {
            // (quotient, remainder) of r0 / r1
            Poly rem = r0;
            Poly quot(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
            const std::uint64_t lead_inv = detail::powmod(r1.back(), f.p - 2, f.p);
            while (rem.size() >= r1.size()) {
                const std::uint64_t factor = detail::mulmod(rem.back(), lead_inv, f.p);
                const std::size_t shift = rem.size() - r1.size();
                quot[shift] = static_cast<std::uint32_t>(factor);
                for (std::size_t i = 0; i < r1.size(); ++i) {
                    const std::uint64_t sub = detail::mulmod(factor, r1[i], f.p);
                    rem[shift + i] = static_cast<std::uint32_t>((rem[shift + i] + f.p - sub) % f.p);
                }
                detail::trim(rem);
            }
            detail::trim(quot);
            Poly s2 = detail::poly_sub(s0, detail::poly_mul(quot, s1, f.p), f.p);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant c; inverse is s0 / c.
        const std::uint64_t c_inv = detail::powmod(r0[0], f.p - 2, f.p);
        for (auto& c : s0) c = static_cast<std::uint32_t>(detail::mulmod(c, c_inv, f.p));
        return from_poly(f, detail::poly_mod(s0, f.modulus, f.p));
    }

    static FieldElement slow_trace(const Field& field, FieldElement x) {
        FieldElement sum = field.zero(), term = x;
        for (std::uint32_t i = 0; i < field.m(); ++i) {
            sum = field.add(sum, term);
            term = field.pow(term, field.p());
        }
        return sum;
    }

    static Field build(std::uint32_t p, std::vector<std::uint32_t> modulus) {
        auto impl = std::make_shared<Impl>();
        impl->p = p;
        impl->m = static_cast<std::uint32_t>(modulus.size() - 1);
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < impl->m; ++i) {
            q *= p;
            if (q > kMaxOrder) throw Error(ErrorCode::TooLarge, "field order exceeds 2^31");
        }
        impl->q = static_cast<std::uint32_t>(q);
        impl->modulus = std::move(modulus);
        if (p <= 65536) {
            impl->roots.resize(p);
            for (std::uint32_t j = 0; j < p; ++j) impl->roots[j] = unit_root(j, p);
        }
        if (impl->q <= kTableLimit) {
            const std::uint32_t n = impl->q;
            const Field bare{impl};
            impl->add.resize(std::size_t{n} * n);
            impl->neg.resize(n);
            for (std::uint32_t a = 0; a < n; ++a) impl->neg[a] = bare.neg(FieldElement{a}).code;
            for (std::uint32_t a = 0; a < n; ++a)
                for (std::uint32_t b = 0; b < n; ++b)
                    impl->add[std::size_t{a} * n + b] = bare.add(FieldElement{a}, FieldElement{b}).code;
            std::vector<std::uint32_t> mul(std::size_t{n} * n), inv(n, 0);
            for (std::uint32_t a = 0; a < n; ++a)
                for (std::uint32_t b = a; b < n; ++b) {
                    const auto c = slow_mul(*impl, FieldElement{a}, FieldElement{b}).code;
                    mul[std::size_t{a} * n + b] = c;
                    mul[std::size_t{b} * n + a] = c;
                    if (c == 1) {
                        inv[a] = b;
                        inv[b] = a;
                    }
                }
            impl->mul = std::move(mul);
            impl->inv = std::move(inv);
            std::vector<std::uint32_t> tr(n);
            for (std::uint32_t a = 0; a < n; ++a) tr[a] = slow_trace(bare, FieldElement{a}).code;
            impl->trace = std::move(tr);
        }
        return Field{std::move(impl)};
    }

    std::shared_ptr<const Impl> impl_;
};

inline Field make_prime_field(std::uint64_t p) {
    if (!detail::is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
    if (p > kMaxOrder) throw Error(ErrorCode::TooLarge, "field order exceeds 2^31");
    return Field::build(static_cast<std::uint32_t>(p), {0, 1});
}

/// F_{p^m} reduced by the first monic irreducible of degree m in ascending
/// order of its lower coefficients read as a base-p number, constant term
/// least significant. For m = 1 this is t, i.e. no reduction.
inline Field make_extension_field(std::uint64_t p, std::uint64_t m) {
    if (!detail::is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
    if (m == 0) throw Error(ErrorCode::InvalidArgument, "extension degree must be >= 1");
    if (m == 1) return make_prime_field(p);
    long double order = 1;
    for (std::uint64_t i = 0; i < m; ++i) order *= static_cast<long double>(p);
    if (order > static_cast<long double>(kMaxOrder)) throw Error(ErrorCode::TooLarge, "field order exceeds 2^31");
    const auto pp = static_cast<std::uint32_t>(p);
    const auto mm = static_cast<std::uint32_t>(m);
    const auto count = static_cast<std::uint64_t>(order);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        auto f = detail::monic_from_index(mm, idx, pp);
        if (f[0] != 0 && detail::is_irreducible(f, pp)) return Field::build(pp, std::move(f));
    }
    throw Error(ErrorCode::InvalidArgument, "no irreducible polynomial found");  // unreachable
}

/// Field from an explicit reduction polynomial (used when loading JSON).
inline Field make_field_with_modulus(std::uint64_t p, std::vector<std::uint32_t> modulus) {
    if (!detail::is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
    if (modulus.size() < 2 || modulus.back() != 1)
        throw Error(ErrorCode::InvalidArgument, "modulus must be monic of degree >= 1");
    for (auto c : modulus)
        if (c >= p) throw Error(ErrorCode::InvalidArgument, "modulus coefficient not reduced mod p");
    if (modulus.size() == 2) return make_prime_field(p);
    if (!detail::is_irreducible(modulus, static_cast<std::uint32_t>(p)))
        throw Error(ErrorCode::InvalidArgument, "modulus is reducible");
    return Field::build(static_cast<std::uint32_t>(p), std::move(modulus));
}

}  // namespace bfq

#endif  // BILINEARFQ_FINITE_FIELD_HPP
