#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <set>

#include "bilinearfq/finite_field.hpp"
#include "bilinearfq/prng.hpp"

using namespace bfq;

namespace {

// Independent polynomial arithmetic on coefficient vectors for the oracle.
std::vector<std::uint32_t> naive_mul_mod(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b,
                                         const std::vector<std::uint32_t>& modulus, std::uint32_t p) {
    const std::size_t m = modulus.size() - 1;
    std::vector<std::uint32_t> prod(2 * m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    for (std::size_t deg = 2 * m - 1; deg >= m; --deg) {
        const std::uint32_t c = prod[deg];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= m; ++i)
            prod[deg - m + i] = (prod[deg - m + i] + (p - c) * modulus[i] % p) % p;
    }
    prod.resize(m);
    return prod;
}

const std::vector<std::pair<std::uint64_t, std::uint64_t>> kFields = {{2, 1}, {3, 1}, {5, 1}, {7, 1}, {2, 2},
                                                                       {3, 2}, {2, 3}, {5, 2}, {2, 4}, {13, 1}};

}  // namespace

TEST(Field, PrimeFieldArithmetic) {
    const Field f = make_prime_field(7);
    EXPECT_EQ(f.q(), 7u);
    EXPECT_EQ(f.mul(f.element(3), f.element(5)).code, 1u);
    EXPECT_EQ(f.inv(f.element(3)).code, 5u);
    EXPECT_EQ(f.add(f.element(4), f.element(5)).code, 2u);
    EXPECT_EQ(f.neg(f.element(2)).code, 5u);
    EXPECT_EQ(f.from_integer(-1).code, 6u);
}

TEST(Field, F4Example) {
    const Field f = make_extension_field(2, 2);
    EXPECT_EQ(f.modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
    const FieldElement t = f.element(2);  // the class of x
    EXPECT_EQ(f.mul(t, t).code, 3u);       // t^2 = t + 1
    EXPECT_EQ(f.trace(t).code, 1u);
    EXPECT_EQ(f.trace(f.one()).code, 0u);
}

TEST(Field, ModulusChoice) {
    EXPECT_EQ(make_extension_field(2, 3).modulus(), (std::vector<std::uint32_t>{1, 1, 0, 1}));
    EXPECT_EQ(make_extension_field(3, 2).modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
    EXPECT_EQ(make_extension_field(2, 4).modulus(), (std::vector<std::uint32_t>{1, 1, 0, 0, 1}));
}

TEST(Field, Errors) {
    EXPECT_THROW(make_prime_field(9), Error);
    EXPECT_THROW(make_extension_field(4, 2), Error);
    EXPECT_THROW(make_field_with_modulus(2, {1, 0, 1}), Error);  // x^2 + 1 = (x + 1)^2
    const Field f = make_prime_field(5);
    try {
        f.inv(f.zero());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
    }
    EXPECT_THROW(f.element(5), Error);
}

TEST(Field, MultiplicationMatchesPolynomialOracle) {
    for (auto [p, m] : kFields) {
        const Field f = make_extension_field(p, m);
        for (auto a : f.elements())
            for (auto b : f.elements()) {
                const auto got = f.coeffs(f.mul(a, b));
                const auto want = naive_mul_mod(f.coeffs(a), f.coeffs(b), f.modulus(), static_cast<std::uint32_t>(p));
                ASSERT_EQ(got, want) << "p=" << p << " m=" << m;
            }
    }
}

TEST(Field, AxiomsOnRandomTriples) {
    SplitMix64 rng(2024);
    for (auto [p, m] : kFields) {
        const Field f = make_extension_field(p, m);
        for (int trial = 0; trial < 1000; ++trial) {
            const FieldElement a = f.element(rng.next_below(f.q()));
            const FieldElement b = f.element(rng.next_below(f.q()));
            const FieldElement c = f.element(rng.next_below(f.q()));
            ASSERT_EQ(f.add(a, b), f.add(b, a));
            ASSERT_EQ(f.mul(a, b), f.mul(b, a));
            ASSERT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            ASSERT_EQ(f.add(a, f.neg(a)), f.zero());
            if (!a.is_zero()) {
                ASSERT_EQ(f.mul(a, f.inv(a)), f.one());
            }
        }
    }
}

TEST(Field, LargeFieldSlowPathAgreesWithFermat) {
    const Field f = make_extension_field(3, 7);  // q = 2187, above the table limit
    EXPECT_FALSE(f.has_tables());
    SplitMix64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const FieldElement a = f.element(1 + rng.next_below(f.q() - 1));
        EXPECT_EQ(f.inv(a), f.pow(a, f.q() - 2));
        EXPECT_EQ(f.pow(a, f.q() - 1), f.one());
    }
}

TEST(Field, TraceIsAdditiveAndOnto) {
    for (auto [p, m] : kFields) {
        const Field f = make_extension_field(p, m);
        std::vector<std::uint64_t> fiber(p, 0);
        for (auto x : f.elements()) {
            const auto t = f.trace(x);
            ASSERT_LT(t.code, p);
            ++fiber[t.code];
            // Tr(x) = x + x^p + ... + x^{p^{m-1}}
            FieldElement sum = f.zero(), power = x;
            for (std::uint64_t i = 0; i < m; ++i) {
                sum = f.add(sum, power);
                power = f.pow(power, p);
            }
            ASSERT_EQ(sum, t);
        }
        for (auto c : fiber) EXPECT_EQ(c, f.q() / p);
    }
}

TEST(Field, KthPowerCount) {
    const Field f5 = make_prime_field(5);
    EXPECT_EQ(f5.kth_powers(2), (std::vector<FieldElement>{FieldElement{0}, FieldElement{1}, FieldElement{4}}));
    for (auto [p, m] : kFields) {
        const Field f = make_extension_field(p, m);
        for (std::uint64_t k = 1; k <= 8; ++k) {
            const auto powers = f.kth_powers(k);
            const std::uint64_t g = std::gcd<std::uint64_t>(k, f.q() - 1);
            EXPECT_EQ(powers.size(), (f.q() - 1) / g + 1) << "q=" << f.q() << " k=" << k;
            std::set<std::uint32_t> brute;
            for (auto x : f.elements()) brute.insert(f.pow(x, k).code);
            EXPECT_EQ(powers.size(), brute.size());
        }
    }
}

TEST(Field, CharacterOrthogonality) {
    for (auto [p, m] : kFields) {
        const Field f = make_extension_field(p, m);
        for (auto s : f.elements()) {
            std::complex<double> sum = 0;
            for (auto x : f.elements()) sum += f.character(s, x);
            const double want = s.is_zero() ? static_cast<double>(f.q()) : 0.0;
            EXPECT_NEAR(sum.real(), want, 1e-9);
            EXPECT_NEAR(sum.imag(), 0.0, 1e-9);
        }
        // chi(s(x + y)) = chi(sx) chi(sy)
        const auto s = f.element(f.q() - 1);
        for (auto x : f.elements())
            for (auto y : f.elements())
                ASSERT_LT(std::abs(f.character(s, f.add(x, y)) - f.character(s, x) * f.character(s, y)), 1e-9);
    }
}
