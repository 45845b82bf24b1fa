#ifndef BILINEARFQ_WARING_HPP
#define BILINEARFQ_WARING_HPP

// Waring's number mod p by sumset expansion, and the solvability route
// through pair counting: with A the k-th powers and V = U = A^d, the values
// of the dot product on V x U are exactly the sums of d k-th powers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bilinear.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "finite_field.hpp"

namespace bfq {

struct WaringResult {
    std::uint64_t k = 0;
    std::uint32_t p = 0;
    std::uint32_t gamma = 0;       // least s with S_s = Z_p
    std::uint32_t gamma_star = 0;  // least s with S_s containing Z_p \ {0}
    std::vector<std::uint32_t> reachable_by_stage;  // |S_s| for s = 1, 2, ...
};

/// k-th power residues mod p as a 0/1 table.
inline std::vector<char> kth_power_residues(std::uint64_t k, std::uint32_t p) {
    std::vector<char> s(p, 0);
    for (std::uint32_t x = 0; x < p; ++x) s[detail::powmod(x, k, p)] = 1;
    return s;
}

inline WaringResult waring_number(std::uint64_t k, std::uint64_t p) {
    if (!detail::is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    if (p > (std::uint64_t{1} << 20)) throw Error(ErrorCode::TooLarge, "sumset tables limited to p <= 2^20");
    const auto pp = static_cast<std::uint32_t>(p);
    const auto base = kth_power_residues(k, pp);
    std::vector<std::uint32_t> powers;
    for (std::uint32_t x = 0; x < pp; ++x)
        if (base[x]) powers.push_back(x);

    WaringResult r;
    r.k = k;
    r.p = pp;
    std::vector<char> reach = base;
    auto count = [&] {
        std::uint32_t c = 0;
        for (char x : reach) c += x;
        return c;
    };
    auto covers_nonzero = [&] {
        for (std::uint32_t x = 1; x < pp; ++x)
            if (!reach[x]) return false;
        return true;
    };
    std::uint32_t size = count();
    r.reachable_by_stage.push_back(size);
    long double work = 0;
    for (std::uint32_t s = 1;; ++s) {
        if (r.gamma_star == 0 && covers_nonzero()) r.gamma_star = s;
        if (size == pp) {
            r.gamma = s;
            return r;
        }
        work += static_cast<long double>(size) * powers.size();
        require_within_guardrail(work, "sumset expansion");
        std::vector<char> next(pp, 0);
        for (std::uint32_t x = 0; x < pp; ++x) {
            if (!reach[x]) continue;
            for (auto y : powers) next[(x + y) % pp] = 1;
        }
        reach.swap(next);
        const std::uint32_t next_size = count();
        if (next_size == size)
            throw Error(ErrorCode::NotGenerating, "k-th powers stabilize at " + std::to_string(size) + " residues");
        size = next_size;
        r.reachable_by_stage.push_back(size);
    }
}

struct RemarkCheck {
    std::uint64_t k = 0;
    std::uint32_t p = 0;
    std::uint32_t d = 0;
    bool condition_holds = false;     // p^{(d-1)/(2d)} >= k
    std::uint32_t gamma_star = 0;
    bool gamma_star_le_d = false;
    /// Number of a != 0 with N^a(A^d, A^d) > 0, i.e. solvable with s = d.
    std::uint64_t pair_count_route = 0;
    std::string route;                // "count_pairs" or "convolution"
    bool route_agrees = false;        // (pair_count_route == p - 1) == gamma_star_le_d
    bool pair_bound_holds = true;     // pair-count deviation bound on every a != 0 (count_pairs route)
    bool consistent = false;          // condition_holds implies gamma_star_le_d
};

/// Budget under which the pair route runs count_pairs once per residue.
inline constexpr long double kRemarkPairBudget = 5e6L;

inline RemarkCheck check_remark_bound(std::uint64_t k, std::uint64_t p, std::uint32_t d) {
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "d must be positive");
    const WaringResult w = waring_number(k, p);
    const auto pp = static_cast<std::uint32_t>(p);
    const auto residues = kth_power_residues(k, pp);
    std::vector<std::uint32_t> A;
    for (std::uint32_t x = 0; x < pp; ++x)
        if (residues[x]) A.push_back(x);

    RemarkCheck r;
    r.k = k;
    r.p = pp;
    r.d = d;
    r.condition_holds = std::pow(static_cast<long double>(p), static_cast<long double>(d - 1) / (2.0L * d)) >=
                        static_cast<long double>(k);
    r.gamma_star = w.gamma_star;
    r.gamma_star_le_d = w.gamma_star <= d;

    const long double nv = std::pow(static_cast<long double>(A.size()), static_cast<long double>(d));
    const long double pd1 = std::pow(static_cast<long double>(p), static_cast<long double>(d) - 1);
    const long double cost = (p - 1) * (nv * pd1 + nv * nv);
    if (d <= kMaxDimension && cost <= kRemarkPairBudget) {
        r.route = "count_pairs";
        const Field field = make_prime_field(p);
        const VectorSpace space(field, d);
        std::vector<std::uint64_t> idx;
        std::vector<std::uint32_t> digits(d, 0);
        // A^d in index order: odometer over A in every coordinate.
        for (;;) {
            idx.push_back(space.encode(digits));
            std::uint32_t i = 0;
            for (; i < d; ++i) {
                auto it = std::upper_bound(A.begin(), A.end(), digits[i]);
                if (it != A.end()) {
                    digits[i] = *it;
                    break;
                }
                digits[i] = A.front();
            }
            if (i == d) break;
        }
        const VectorSet V = VectorSet::from_indices(space, std::move(idx));
        const BilinearForm form = dot_form(field, d);
        for (std::uint32_t a = 1; a < pp; ++a) {
            const CountReport rep = count_pairs(form, FieldElement{a}, V, V);
            r.pair_count_route += rep.exact_count > 0;
            r.pair_bound_holds = r.pair_bound_holds && rep.bound_satisfied.value_or(false);
        }
    } else {
        // Histogram of v u over A x A, convolved d times: the dot-product value
        // histogram on A^d x A^d.
        r.route = "convolution";
        require_within_guardrail(static_cast<long double>(p) * p * d, "power-sum convolution");
        std::vector<std::uint64_t> single(pp, 0);
        for (auto v : A)
            for (auto u : A) ++single[static_cast<std::uint64_t>(v) * u % pp];
        std::vector<std::uint64_t> total = single;
        for (std::uint32_t step = 1; step < d; ++step) {
            std::vector<std::uint64_t> next(pp, 0);
            for (std::uint32_t x = 0; x < pp; ++x) {
                if (!total[x]) continue;
                for (std::uint32_t y = 0; y < pp; ++y) next[(x + y) % pp] += total[x] * single[y];
            }
            total.swap(next);
        }
        for (std::uint32_t a = 1; a < pp; ++a) r.pair_count_route += total[a] > 0;
    }
    r.route_agrees = (r.pair_count_route == pp - 1) == r.gamma_star_le_d;
    r.consistent = !r.condition_holds || r.gamma_star_le_d;
    return r;
}

}  // namespace bfq

#endif  // BILINEARFQ_WARING_HPP
