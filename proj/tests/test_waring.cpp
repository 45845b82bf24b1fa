#include <gtest/gtest.h>

#include <numeric>

#include "bilinearfq/waring.hpp"

using namespace bfq;

namespace {

// Least number of k-th powers summing to each residue, by dynamic programming
// over the residues (unbounded-knapsack style); independent of the sumset BFS.
std::vector<std::uint32_t> min_summands(std::uint64_t k, std::uint32_t p) {
    std::vector<std::uint32_t> powers;
    for (std::uint32_t x = 1; x < p; ++x) {
        std::uint64_t y = 1;
        for (std::uint64_t i = 0; i < k; ++i) y = y * x % p;
        powers.push_back(static_cast<std::uint32_t>(y));
    }
    constexpr std::uint32_t kInf = ~0u;
    std::vector<std::uint32_t> best(p, kInf);
    best[0] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t r = 0; r < p; ++r) {
            if (best[r] == kInf) continue;
            for (auto y : powers) {
                const std::uint32_t t = (r + y) % p;
                if (best[r] + 1 < best[t]) {
                    best[t] = best[r] + 1;
                    changed = true;
                }
            }
        }
    }
    return best;
}

bool is_prime_naive(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

TEST(Waring, KnownValues) {
    EXPECT_EQ(waring_number(2, 5).gamma, 2u);
    EXPECT_EQ(waring_number(3, 7).gamma, 3u);
    EXPECT_EQ(waring_number(2, 5).reachable_by_stage, (std::vector<std::uint32_t>{3, 5}));
}

TEST(Waring, MatchesDynamicProgrammingOracle) {
    for (std::uint32_t p = 2; p <= 200; ++p) {
        if (!is_prime_naive(p)) continue;
        for (std::uint64_t k = 1; k <= 10; ++k) {
            const auto best = min_summands(k, p);
            // 0 is the empty sum in the oracle but x^k with x = 0 in the sumset; a single power covers it
            std::uint32_t gamma_star = 0, gamma = 1;
            bool generating = true;
            for (std::uint32_t r = 1; r < p; ++r) {
                if (best[r] == ~0u) generating = false;
                else gamma_star = std::max(gamma_star, best[r]);
            }
            if (!generating) {
                EXPECT_THROW(waring_number(k, p), Error);
                continue;
            }
            gamma = std::max(gamma_star, 1u);
            const WaringResult w = waring_number(k, p);
            ASSERT_EQ(w.gamma_star, gamma_star) << "k=" << k << " p=" << p;
            ASSERT_EQ(w.gamma, gamma) << "k=" << k << " p=" << p;
        }
    }
}

TEST(Waring, CoprimeExponentIsOne) {
    for (std::uint64_t p : {3, 5, 7, 11, 13, 101}) {
        for (std::uint64_t k = 1; k <= 12; ++k)
            if (std::gcd(k, p - 1) == 1) {
                EXPECT_EQ(waring_number(k, p).gamma, 1u);
            }
    }
}

TEST(Waring, Errors) {
    EXPECT_THROW(waring_number(2, 9), Error);
    EXPECT_THROW(waring_number(0, 5), Error);
    // only 0 and 1 are sixth powers mod 7, which still generate
    EXPECT_EQ(waring_number(6, 7).gamma, 6u);
}

TEST(Waring, RemarkRouteCountsSolvableResidues) {
    // Either route must count the a != 0 that are sums of d k-th powers.
    for (std::uint64_t p : {5, 7, 11, 13, 31}) {
        for (std::uint64_t k = 1; k <= 3; ++k) {
            const auto best = min_summands(k, static_cast<std::uint32_t>(p));
            for (std::uint32_t d = 1; d <= 3; ++d) {
                std::uint64_t want = 0;
                for (std::uint32_t a = 1; a < p; ++a) want += best[a] <= d;
                const RemarkCheck r = check_remark_bound(k, p, d);
                EXPECT_EQ(r.pair_count_route, want) << "k=" << k << " p=" << p << " d=" << d << " via " << r.route;
                EXPECT_TRUE(r.route_agrees);
                if (r.route == "count_pairs") {
                    EXPECT_TRUE(r.pair_bound_holds);
                }
            }
        }
    }
}

TEST(Waring, RemarkScanHasNoCounterexamples) {
    for (std::uint64_t p = 2; p <= 100; ++p) {
        if (!detail::is_prime(p)) continue;
        for (std::uint64_t k = 1; k <= 3; ++k)
            for (std::uint32_t d = 1; d <= 3; ++d) {
                const RemarkCheck r = check_remark_bound(k, p, d);
                EXPECT_TRUE(r.consistent) << "k=" << k << " p=" << p << " d=" << d;
                EXPECT_TRUE(r.route_agrees);
            }
    }
}
