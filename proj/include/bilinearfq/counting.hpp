#ifndef BILINEARFQ_COUNTING_HPP
#define BILINEARFQ_COUNTING_HPP

// Exact solution counts for bilinear equations B(a_i, a_j) = lambda_ij with
// variables restricted to sets in F_q^d, together with the main terms and
// error bounds they are compared against.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bilinear.hpp"
#include "error.hpp"
#include "finite_field.hpp"
#include "parallel.hpp"

namespace bfq {

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

struct CountReport {
    std::uint32_t q = 0;
    std::uint32_t d = 0;
    std::vector<std::uint64_t> set_sizes;
    std::uint64_t exact_count = 0;
    double main_term = 0;
    std::optional<double> error_bound;  // absent when no explicit bound applies
    double deviation = 0;               // |exact - main|
    std::optional<bool> bound_satisfied;
    double relative_deviation = 0;      // deviation / main_term
};

struct CountOptions {
    bool allow_zero_lambda = false;
};

namespace detail {

inline void require_nonzero(FieldElement lambda, const CountOptions& opt, const char* what) {
    if (lambda.is_zero() && !opt.allow_zero_lambda)
        throw Error(ErrorCode::ZeroLambda, std::string(what) + " requires lambda in F_q^*");
}

inline void require_same_space(const BilinearForm& form, const VectorSet& s, const char* what) {
    if (!(s.space() == form.space()))
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": set does not live in the form's space");
}

inline void require_in_field(const Field& f, FieldElement x) {
    if (x.code >= f.q()) throw Error(ErrorCode::InvalidArgument, "element outside the field");
}

inline std::uint64_t pow_u64(std::uint64_t base, std::uint32_t e) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= base;
    return r;
}

inline double relative(double deviation, double main) { return main > 0 ? deviation / main : 0.0; }

/// Left images a^T M for every member of a set, flat.
inline std::vector<std::uint32_t> left_images(const BilinearForm& form, const VectorSet& s) {
    const std::uint32_t d = form.dim();
    std::vector<std::uint32_t> out(s.size() * d);
    for (std::size_t i = 0; i < s.size(); ++i) form.left_apply(s[i], {out.data() + i * d, d});
    return out;
}

}  // namespace detail

/// Histogram of B(v, u) over V x U, indexed by element code (length q).
inline std::vector<std::uint64_t> pair_histogram(const BilinearForm& form, const VectorSet& V, const VectorSet& U) {
    detail::require_same_space(form, V, "pair_histogram");
    detail::require_same_space(form, U, "pair_histogram");
    require_within_guardrail(static_cast<long double>(V.size()) * U.size(), "pair histogram");
    const Field& f = form.field();
    const std::uint32_t d = form.dim();
    const std::uint32_t q = f.q();
    const auto rows = detail::left_images(form, V);
    auto parts = parallel::map_chunks<std::vector<std::uint64_t>>(V.size(), [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<std::uint64_t> hist(q, 0);
        for (std::size_t i = b; i < e; ++i) {
            const std::span<const std::uint32_t> w{rows.data() + i * d, d};
            for (std::size_t j = 0; j < U.size(); ++j) ++hist[BilinearForm::dot(f, w, U[j]).code];
        }
        return hist;
    });
    std::vector<std::uint64_t> hist(q, 0);
    for (const auto& part : parts)
        for (std::uint32_t x = 0; x < q; ++x) hist[x] += part[x];
    return hist;
}

/// sum_{v in V} |N^lambda_U(v)|, walking each hyperplane N^lambda(v) and
/// testing membership in U.
inline std::uint64_t count_pairs_by_neighborhoods(const BilinearForm& form, FieldElement lambda, const VectorSet& V,
                                                  const VectorSet& U) {
    detail::require_same_space(form, V, "count_pairs");
    detail::require_same_space(form, U, "count_pairs");
    require_within_guardrail(static_cast<long double>(V.size()) * (form.space().size() / form.field().q()),
                             "neighborhood counting");
    const auto member = U.membership();
    auto parts = parallel::map_chunks<std::uint64_t>(V.size(), [&](std::size_t, std::size_t b, std::size_t e) {
        std::uint64_t total = 0;
        for (std::size_t i = b; i < e; ++i) total += count_neighborhood(form, lambda, V[i], member);
        return total;
    });
    return std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
}

/// N^lambda(V, U) against |V||U|/q with the bound sqrt(q^{d-1}|V||U|).
/// The count is taken by hyperplane walking and by a value histogram; the
/// two must agree.
inline CountReport count_pairs(const BilinearForm& form, FieldElement lambda, const VectorSet& V, const VectorSet& U,
                               const CountOptions& opt = {}) {
    detail::require_in_field(form.field(), lambda);
    detail::require_nonzero(lambda, opt, "count_pairs");
    const std::uint64_t by_walk = count_pairs_by_neighborhoods(form, lambda, V, U);
    const std::uint64_t by_hist = pair_histogram(form, V, U)[lambda.code];
    if (by_walk != by_hist)
        throw Error(ErrorCode::OracleMismatch, "hyperplane walk and histogram disagree: " + std::to_string(by_walk) + " vs " +
                                                    std::to_string(by_hist));
    const std::uint64_t q = form.field().q();
    const std::uint64_t nv = V.size(), nu = U.size();
    const u128 prod = static_cast<u128>(nv) * nu;
    CountReport r;
    r.q = form.field().q();
    r.d = form.dim();
    r.set_sizes = {nv, nu};
    r.exact_count = by_walk;
    r.main_term = static_cast<double>(static_cast<long double>(prod) / q);
    r.error_bound = static_cast<double>(
        std::sqrt(static_cast<long double>(detail::pow_u64(q, form.dim() - 1)) * static_cast<long double>(prod)));
    // |exact - prod/q| < sqrt(q^{d-1} prod)  <=>  (q exact - prod)^2 < q^{d+1} prod
    const i128 diff = static_cast<i128>(q) * by_walk - static_cast<i128>(prod);
    const u128 lhs = static_cast<u128>(diff < 0 ? -diff : diff) * static_cast<u128>(diff < 0 ? -diff : diff);
    const u128 rhs = static_cast<u128>(detail::pow_u64(q, form.dim() + 1)) * prod;
    r.deviation = static_cast<double>(static_cast<long double>(diff < 0 ? -diff : diff) / q);
    r.bound_satisfied = lhs < rhs;
    r.relative_deviation = detail::relative(r.deviation, r.main_term);
    if (lambda.is_zero()) {  // the bound is stated for lambda != 0 only
        r.error_bound.reset();
        r.bound_satisfied.reset();
    }
    return r;
}

struct VarianceReport {
    double value = 0;        // sum_v (|N^lambda_V(v)| - |V|/q)^2
    double bound = 0;        // q^{d-1} |V|
    bool strictly_below = false;
};

/// Variance of the neighborhood counts over all v in F_q^d, evaluated exactly as
/// q^{-2} sum_v (q |N^lambda_V(v)| - |V|)^2.
inline VarianceReport variance_sum(const BilinearForm& form, FieldElement lambda, const VectorSet& V,
                                   const CountOptions& opt = {}) {
    detail::require_in_field(form.field(), lambda);
    detail::require_nonzero(lambda, opt, "variance_sum");
    detail::require_same_space(form, V, "variance_sum");
    const VectorSpace& space = form.space();
    const std::uint64_t q = form.field().q();
    require_within_guardrail(static_cast<long double>(space.size()) * (space.size() / q), "variance sum");
    const auto member = V.membership();
    const std::uint32_t d = form.dim();
    auto parts = parallel::map_chunks<u128>(space.size(), [&](std::size_t, std::size_t b, std::size_t e) {
        u128 acc = 0;
        std::uint32_t v[kMaxDimension];
        for (std::size_t idx = b; idx < e; ++idx) {
            space.decode(idx, {v, d});
            const std::uint64_t n = count_neighborhood(form, lambda, {v, d}, member);
            const i128 dev = static_cast<i128>(q) * n - static_cast<i128>(V.size());
            acc += static_cast<u128>(dev < 0 ? -dev : dev) * static_cast<u128>(dev < 0 ? -dev : dev);
        }
        return acc;
    });
    u128 scaled = 0;
    for (auto part : parts) scaled += part;
    VarianceReport r;
    r.value = static_cast<double>(static_cast<long double>(scaled) / (static_cast<long double>(q) * q));
    const u128 bound_scaled = static_cast<u128>(detail::pow_u64(q, d + 1)) * V.size();
    r.bound = static_cast<double>(detail::pow_u64(q, d - 1)) * static_cast<double>(V.size());
    r.strictly_below = scaled < bound_scaled;
    return r;
}

struct RIdentities {
    std::complex<double> r1;
    std::complex<double> r2;
    std::int64_t r1_rounded = 0;
    std::int64_t r2_rounded = 0;
    std::int64_t r1_expected = 0;  // (q-1) q^d |V|
    std::int64_t r2_lower = 0;     // -(q-2) q^d |V|
    double variance = 0;           // variance_sum on the same data
    double combined = 0;           // (R1 + R2) / q^2
    bool r1_exact = false;         // |R1 - r1_expected| < 0.25 and imaginary part < 0.25
    bool r2_bounded = false;       // round(R2) >= r2_lower
    bool variance_matches = false; // |combined - variance| < 0.25
};

/// Evaluates the character sum
///   sum_{v, u, u' in F_q^d; s, s' in F_q^*} chi(s(B(v,u) - lambda)) conj(chi(s'(B(v,u') - lambda))) V(u) V(u')
/// split into R1 (s = s') and R2 (s != s'). For each v the inner sums
/// T_s(v) = sum_{u in V} chi(s(B(v,u) - lambda)) are formed first, so the
/// quadruple sum factors into sum_v T_s(v) conj(T_{s'}(v)).
inline RIdentities r_identities(const BilinearForm& form, FieldElement lambda, const VectorSet& V,
                                const CountOptions& opt = {}) {
    detail::require_in_field(form.field(), lambda);
    detail::require_nonzero(lambda, opt, "r_identities");
    detail::require_same_space(form, V, "r_identities");
    const Field& f = form.field();
    const VectorSpace& space = form.space();
    const std::uint32_t q = f.q();
    const std::uint32_t d = form.dim();
    require_within_guardrail(static_cast<long double>(space.size()) * (q - 1) * (static_cast<long double>(V.size()) + q),
                             "R1/R2 character sums");

    struct Partial {
        std::complex<long double> r1{0, 0}, r2{0, 0};
    };
    // Per-v contributions land in fixed slots and are summed in index order.
    std::vector<std::complex<long double>> r1_by_v(space.size()), r2_by_v(space.size());
    parallel::for_each_index(space.size(), [&](std::size_t idx) {
        std::uint32_t v[kMaxDimension], w[kMaxDimension];
        space.decode(idx, {v, d});
        form.left_apply({v, d}, {w, d});
        std::vector<std::complex<double>> T(q, {0.0, 0.0});
        for (std::size_t j = 0; j < V.size(); ++j) {
            const FieldElement shifted = f.sub(BilinearForm::dot(f, {w, d}, V[j]), lambda);
            for (std::uint32_t s = 1; s < q; ++s) T[s] += f.character(FieldElement{s}, shifted);
        }
        std::complex<long double> a1{0, 0}, a2{0, 0};
        for (std::uint32_t s = 1; s < q; ++s)
            for (std::uint32_t t = 1; t < q; ++t) {
                const std::complex<double> term = T[s] * std::conj(T[t]);
                const std::complex<long double> lt{term.real(), term.imag()};
                if (s == t)
                    a1 += lt;
                else
                    a2 += lt;
            }
        r1_by_v[idx] = a1;
        r2_by_v[idx] = a2;
    });
    std::complex<long double> r1{0, 0}, r2{0, 0};
    for (std::size_t idx = 0; idx < space.size(); ++idx) {
        r1 += r1_by_v[idx];
        r2 += r2_by_v[idx];
    }

    RIdentities out;
    out.r1 = {static_cast<double>(r1.real()), static_cast<double>(r1.imag())};
    out.r2 = {static_cast<double>(r2.real()), static_cast<double>(r2.imag())};
    out.r1_rounded = static_cast<std::int64_t>(std::llround(out.r1.real()));
    out.r2_rounded = static_cast<std::int64_t>(std::llround(out.r2.real()));
    const auto qd = static_cast<std::int64_t>(space.size());
    const auto nv = static_cast<std::int64_t>(V.size());
    out.r1_expected = (static_cast<std::int64_t>(q) - 1) * qd * nv;
    out.r2_lower = -(static_cast<std::int64_t>(q) - 2) * qd * nv;
    out.variance = variance_sum(form, lambda, V, opt).value;
    out.combined = static_cast<double>((r1.real() + r2.real()) / (static_cast<long double>(q) * q));
    out.r1_exact = std::abs(out.r1.real() - static_cast<double>(out.r1_expected)) < 0.25 && std::abs(out.r1.imag()) < 0.25;
    out.r2_bounded = out.r2_rounded >= out.r2_lower;
    out.variance_matches = std::abs(out.combined - out.variance) < 0.25;
    return out;
}

/// Solutions of B(a, b) = lambda1, B(a, c) = lambda2 over A x Bset x C via
/// sum_{a in A} |N^{lambda1}_{Bset}(a)| |N^{lambda2}_C(a)|, with the
/// three-term deviation bound
///   |Bset|/q sqrt(q^{d-1}|A||C|) + |C|/q sqrt(q^{d-1}|A||Bset|) + q^{d-1} sqrt(|Bset||C|).
inline CountReport count_two_eq_three_var(const BilinearForm& form, FieldElement lambda1, FieldElement lambda2,
                                          const VectorSet& A, const VectorSet& Bset, const VectorSet& C,
                                          const CountOptions& opt = {}) {
    detail::require_in_field(form.field(), lambda1);
    detail::require_in_field(form.field(), lambda2);
    detail::require_nonzero(lambda1, opt, "count_two_eq_three_var");
    detail::require_nonzero(lambda2, opt, "count_two_eq_three_var");
    detail::require_same_space(form, A, "count_two_eq_three_var");
    detail::require_same_space(form, Bset, "count_two_eq_three_var");
    detail::require_same_space(form, C, "count_two_eq_three_var");
    require_within_guardrail(static_cast<long double>(A.size()) * (Bset.size() + C.size()), "two-equation count");
    const Field& f = form.field();
    const std::uint32_t d = form.dim();
    const auto rows = detail::left_images(form, A);
    auto parts = parallel::map_chunks<std::uint64_t>(A.size(), [&](std::size_t, std::size_t b, std::size_t e) {
        std::uint64_t total = 0;
        for (std::size_t i = b; i < e; ++i) {
            const std::span<const std::uint32_t> w{rows.data() + i * d, d};
            std::uint64_t nb = 0, nc = 0;
            for (std::size_t j = 0; j < Bset.size(); ++j) nb += BilinearForm::dot(f, w, Bset[j]) == lambda1;
            for (std::size_t j = 0; j < C.size(); ++j) nc += BilinearForm::dot(f, w, C[j]) == lambda2;
            total += nb * nc;
        }
        return total;
    });
    const std::uint64_t exact = std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});

    const long double q = f.q();
    const long double qd1 = static_cast<long double>(detail::pow_u64(f.q(), d - 1));
    const long double na = A.size(), nb = Bset.size(), nc = C.size();
    const long double main = na * nb * nc / (q * q);
    const long double bound = nb / q * std::sqrt(qd1 * na * nc) + nc / q * std::sqrt(qd1 * na * nb) + qd1 * std::sqrt(nb * nc);
    const long double dev = std::fabs(static_cast<long double>(exact) - main);

    CountReport r;
    r.q = f.q();
    r.d = d;
    r.set_sizes = {A.size(), Bset.size(), C.size()};
    r.exact_count = exact;
    r.main_term = static_cast<double>(main);
    r.error_bound = static_cast<double>(bound);
    r.deviation = static_cast<double>(dev);
    r.bound_satisfied = dev <= bound * (1 + 1e-12L);
    r.relative_deviation = detail::relative(r.deviation, r.main_term);
    return r;
}

struct Edge {
    std::uint32_t i = 0;  // 0-based, i < j
    std::uint32_t j = 0;
    FieldElement lambda;
};

/// Constraint graph of the system B(a_i, a_j) = lambda_ij.
class EquationSystem {
public:
    EquationSystem(std::uint32_t k, std::vector<Edge> edges, const CountOptions& opt = {}) : k_(k) {
        if (k == 0) throw Error(ErrorCode::ArityMismatch, "system needs at least one variable");
        degree_.assign(k, 0);
        for (auto e : edges) {
            if (e.i == e.j) throw Error(ErrorCode::InvalidArgument, "an equation needs two distinct variables");
            if (e.i > e.j) throw Error(ErrorCode::InvalidArgument, "edges must satisfy i < j");
            if (e.j >= k) throw Error(ErrorCode::ArityMismatch, "edge refers to a variable beyond k");
            detail::require_nonzero(e.lambda, opt, "EquationSystem");
            for (const auto& seen : edges_)
                if (seen.i == e.i && seen.j == e.j) throw Error(ErrorCode::InvalidArgument, "duplicate equation");
            edges_.push_back(e);
            ++degree_[e.i];
            ++degree_[e.j];
        }
    }

    std::uint32_t k() const noexcept { return k_; }
    std::size_t l() const noexcept { return edges_.size(); }
    std::uint32_t t() const noexcept { return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end()); }
    std::uint32_t degree(std::uint32_t v) const { return degree_.at(v); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Descending degree, ties by smaller index.
    std::vector<std::uint32_t> search_order() const {
        std::vector<std::uint32_t> order(k_);
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return degree_[a] > degree_[b]; });
        return order;
    }

private:
    std::uint32_t k_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> degree_;
};

using SetFamily = std::vector<VectorSet>;

/// Exact count of solutions of the whole system by backtracking over the
/// variables in search_order(), pruning as soon as an equation between two
/// assigned variables fails. Variables of degree zero are not enumerated;
/// they multiply the count by |A_i|.
inline CountReport count_system(const BilinearForm& form, const EquationSystem& system, const SetFamily& family) {
    if (family.size() != system.k())
        throw Error(ErrorCode::ArityMismatch, "family has " + std::to_string(family.size()) + " sets for " +
                                                  std::to_string(system.k()) + " variables");
    for (const auto& s : family) detail::require_same_space(form, s, "count_system");
    for (const auto& e : system.edges()) {
        detail::require_in_field(form.field(), e.lambda);
        if (e.lambda.is_zero()) throw Error(ErrorCode::ZeroLambda, "count_system requires lambda in F_q^*");
    }
    const Field& f = form.field();
    const std::uint32_t d = form.dim();
    const auto order = system.search_order();
    std::vector<std::uint32_t> position(system.k());
    for (std::uint32_t p = 0; p < order.size(); ++p) position[order[p]] = p;

    // For each search level: checks against earlier levels. An edge (i, j)
    // needs B(a_i, a_j); when a_i is assigned first the check on a_j is
    // (a_i^T M) . a_j, otherwise it is (M a_j) . a_i, i.e. a_i . (M a_j).
    struct Check {
        std::uint32_t earlier_level;
        bool use_left;  // earlier variable is the left argument
        FieldElement lambda;
    };
    std::vector<std::vector<Check>> checks(order.size());
    for (const auto& e : system.edges()) {
        const std::uint32_t pi = position[e.i], pj = position[e.j];
        if (pi < pj)
            checks[pj].push_back({pi, true, e.lambda});
        else
            checks[pi].push_back({pj, false, e.lambda});
    }
    std::uint32_t depth = 0;  // levels with at least one constrained variable
    for (std::uint32_t p = 0; p < order.size(); ++p)
        if (system.degree(order[p]) > 0) depth = p + 1;

    long double free_factor = 1;
    for (std::uint32_t p = depth; p < order.size(); ++p) free_factor *= family[order[p]].size();

    std::uint64_t exact = 0;
    bool any_empty = false;
    for (const auto& s : family) any_empty = any_empty || s.empty();
    if (!any_empty && depth > 0) {
        // Left (a^T M) and right (M a) images of every candidate, per level.
        std::vector<std::vector<std::uint32_t>> left(depth), right(depth);
        for (std::uint32_t p = 0; p < depth; ++p) {
            const VectorSet& s = family[order[p]];
            left[p].resize(s.size() * d);
            right[p].resize(s.size() * d);
            for (std::size_t i = 0; i < s.size(); ++i) {
                form.left_apply(s[i], {left[p].data() + i * d, d});
                form.right_apply(s[i], {right[p].data() + i * d, d});
            }
        }
        const std::uint64_t cap = guardrail();
        const VectorSet& first = family[order[0]];
        auto parts = parallel::map_chunks<std::pair<std::uint64_t, std::uint64_t>>(
            first.size(), [&](std::size_t, std::size_t b, std::size_t e) {
                std::vector<std::size_t> chosen(depth, 0);
                std::uint64_t count = 0, nodes = 0;
                auto consistent = [&](std::uint32_t level, std::size_t cand) {
                    const auto c = family[order[level]][cand];
                    for (const auto& chk : checks[level]) {
                        const std::size_t prev = chosen[chk.earlier_level];
                        const std::uint32_t* img = chk.use_left ? left[chk.earlier_level].data() + prev * d
                                                                : right[chk.earlier_level].data() + prev * d;
                        if (BilinearForm::dot(f, {img, d}, c) != chk.lambda) return false;
                    }
                    return true;
                };
                auto recurse = [&](auto&& self, std::uint32_t level) -> void {
                    const VectorSet& s = family[order[level]];
                    if (level + 1 == depth) {
                        for (std::size_t cand = 0; cand < s.size(); ++cand) count += consistent(level, cand);
                        nodes += s.size();
                        return;
                    }
                    for (std::size_t cand = 0; cand < s.size(); ++cand) {
                        if (++nodes > cap) throw Error(ErrorCode::TooLarge, "backtracking exceeded the guardrail");
                        if (!consistent(level, cand)) continue;
                        chosen[level] = cand;
                        self(self, level + 1);
                    }
                };
                for (std::size_t cand = b; cand < e; ++cand) {
                    chosen[0] = cand;
                    if (depth == 1)
                        ++count;
                    else
                        recurse(recurse, 1);
                    if (nodes > cap) throw Error(ErrorCode::TooLarge, "backtracking exceeded the guardrail");
                }
                return std::pair{count, nodes};
            });
        for (const auto& [c, n] : parts) exact += c;
    }
    if (!any_empty) {
        const long double total = (depth > 0 ? static_cast<long double>(exact) : 1.0L) * free_factor;
        if (total > static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
            throw Error(ErrorCode::TooLarge, "solution count exceeds 64 bits");
        exact = depth > 0 ? exact * static_cast<std::uint64_t>(free_factor) : static_cast<std::uint64_t>(free_factor);
    }

    long double main = 1;
    for (const auto& s : family) main *= s.size();
    for (std::size_t i = 0; i < system.l(); ++i) main /= f.q();

    CountReport r;
    r.q = f.q();
    r.d = d;
    for (const auto& s : family) r.set_sizes.push_back(s.size());
    r.exact_count = exact;
    r.main_term = static_cast<double>(main);
    r.deviation = static_cast<double>(std::fabs(static_cast<long double>(exact) - main));
    r.relative_deviation = detail::relative(r.deviation, r.main_term);
    return r;
}

/// S intersected with (F_q^*)^d.
inline VectorSet nonzero_coordinates(const VectorSet& s) {
    return s.filter([](std::span<const std::uint32_t> v) {
        return std::all_of(v.begin(), v.end(), [](std::uint32_t c) { return c != 0; });
    });
}

/// S without the origin.
inline VectorSet without_origin(const VectorSet& s) {
    return s.filter([](std::span<const std::uint32_t> v) {
        return std::any_of(v.begin(), v.end(), [](std::uint32_t c) { return c != 0; });
    });
}

struct TriplesResult {
    std::uint64_t count = 0;  // distinct (lambda1, lambda2, lambda3) in (F_q^*)^3
    std::uint64_t total = 0;  // (q-1)^3
    double density = 0;       // count / (q-1)^3
    /// fibers[(lambda1-1)(q-1) + (lambda2-1)] = number of lambda3 reached for
    /// that (lambda1, lambda2), for prime fields ordered by code.
    std::vector<std::uint64_t> fibers;
    std::optional<std::vector<std::array<FieldElement, 3>>> triples;
};

/// Distinct value triples (B(a,b), B(a,c), B(b,c)) with all three nonzero,
/// over A x Bset x C. Each worker marks a q^3 bitmap; bitmaps are OR-ed.
inline TriplesResult solvable_triples(const BilinearForm& form, const VectorSet& A, const VectorSet& Bset,
                                      const VectorSet& C, bool materialize = false) {
    detail::require_same_space(form, A, "solvable_triples");
    detail::require_same_space(form, Bset, "solvable_triples");
    detail::require_same_space(form, C, "solvable_triples");
    if (form.dim() < 2) throw Error(ErrorCode::DimensionMismatch, "solvable_triples needs d >= 2");
    const Field& f = form.field();
    const std::uint32_t d = form.dim();
    const std::uint64_t q = f.q();
    require_within_guardrail(static_cast<long double>(A.size()) * Bset.size() * C.size(), "triple enumeration");
    if (q * q * q > (std::uint64_t{1} << 30)) throw Error(ErrorCode::TooLarge, "q^3 value bitmap too large");

    // B(b, c) for every pair, precomputed once.
    require_within_guardrail(static_cast<long double>(Bset.size()) * C.size(), "B x C value table");
    const auto brows = detail::left_images(form, Bset);
    std::vector<std::uint32_t> bc(Bset.size() * C.size());
    for (std::size_t i = 0; i < Bset.size(); ++i)
        for (std::size_t j = 0; j < C.size(); ++j)
            bc[i * C.size() + j] = BilinearForm::dot(f, {brows.data() + i * d, d}, C[j]).code;
    const auto arows = detail::left_images(form, A);

    const std::size_t words = (q * q * q + 63) / 64;
    auto parts = parallel::map_chunks<std::vector<std::uint64_t>>(A.size(), [&](std::size_t, std::size_t b, std::size_t e) {
        std::vector<std::uint64_t> bits(words, 0);
        std::vector<std::uint32_t> to_b(Bset.size()), to_c(C.size());
        for (std::size_t i = b; i < e; ++i) {
            const std::span<const std::uint32_t> w{arows.data() + i * d, d};
            for (std::size_t j = 0; j < Bset.size(); ++j) to_b[j] = BilinearForm::dot(f, w, Bset[j]).code;
            for (std::size_t j = 0; j < C.size(); ++j) to_c[j] = BilinearForm::dot(f, w, C[j]).code;
            for (std::size_t j = 0; j < Bset.size(); ++j) {
                if (to_b[j] == 0) continue;
                const std::uint64_t base1 = to_b[j] * q * q;
                const std::uint32_t* row = bc.data() + j * C.size();
                for (std::size_t c = 0; c < C.size(); ++c) {
                    if (to_c[c] == 0 || row[c] == 0) continue;
                    const std::uint64_t key = base1 + to_c[c] * q + row[c];
                    bits[key >> 6] |= std::uint64_t{1} << (key & 63);
                }
            }
        }
        return bits;
    });
    std::vector<std::uint64_t> bits(words, 0);
    for (const auto& part : parts)
        for (std::size_t i = 0; i < words; ++i) bits[i] |= part[i];

    TriplesResult r;
    r.total = (q - 1) * (q - 1) * (q - 1);
    r.fibers.assign((q - 1) * (q - 1), 0);
    if (materialize) r.triples.emplace();
    for (std::uint64_t l1 = 1; l1 < q; ++l1)
        for (std::uint64_t l2 = 1; l2 < q; ++l2)
            for (std::uint64_t l3 = 1; l3 < q; ++l3) {
                const std::uint64_t key = (l1 * q + l2) * q + l3;
                if (!((bits[key >> 6] >> (key & 63)) & 1)) continue;
                ++r.count;
                ++r.fibers[(l1 - 1) * (q - 1) + (l2 - 1)];
                if (materialize)
                    r.triples->push_back({FieldElement{static_cast<std::uint32_t>(l1)},
                                          FieldElement{static_cast<std::uint32_t>(l2)},
                                          FieldElement{static_cast<std::uint32_t>(l3)}});
            }
    r.density = r.total ? static_cast<double>(r.count) / static_cast<double>(r.total) : 0.0;
    return r;
}

struct ValueSetReport {
    std::uint64_t size = 0;              // |Pi(E, F)|
    double lower_bound = 0;              // q / (1 + q^d / (|E||F|))
    bool bound_holds = false;            // size >= lower_bound (exact rational comparison)
    bool bound_asserted = false;         // d >= 3
    std::vector<std::uint64_t> incidences;  // v_lambda(E, F), indexed by lambda code
    std::uint64_t second_moment = 0;     // sum_lambda v_lambda^2
    bool cauchy_schwarz_holds = false;   // |E|^2|F|^2 <= |Pi(E,F)| sum_lambda v_lambda^2
};

/// Pi_lambda(a) = {v : B(a, v) = lambda}.
inline VectorSet hyperplane(const BilinearForm& form, const Vector& a, FieldElement lambda) {
    return neighborhood(form, lambda, a);
}

namespace detail {
inline void require_in_hyperplane(const BilinearForm& form, const Vector& a, FieldElement lambda, const VectorSet& s,
                                  const char* name) {
    std::uint32_t av[kMaxDimension];
    for (std::uint32_t i = 0; i < form.dim(); ++i) av[i] = a.coords[i].code;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (form.evaluate({av, form.dim()}, s[i]) != lambda)
            throw Error(ErrorCode::NotInHyperplane, std::string(name) + " has a member off the hyperplane B(a, .) = lambda");
}
}  // namespace detail

/// Value set of B on E x F for E in Pi_{lambda1}(a), F in Pi_{lambda2}(a),
/// with the lower bound q / (1 + q^d / (|E||F|)).
inline ValueSetReport value_set_bound(const BilinearForm& form, const Vector& a, FieldElement lambda1,
                                      FieldElement lambda2, const VectorSet& E, const VectorSet& F) {
    form.space().check(a);
    if (a.is_zero()) throw Error(ErrorCode::ZeroVector, "a must be nonzero");
    detail::require_in_field(form.field(), lambda1);
    detail::require_in_field(form.field(), lambda2);
    if (lambda1.is_zero() || lambda2.is_zero()) throw Error(ErrorCode::ZeroLambda, "value_set_bound requires lambda in F_q^*");
    detail::require_same_space(form, E, "value_set_bound");
    detail::require_same_space(form, F, "value_set_bound");
    detail::require_in_hyperplane(form, a, lambda1, E, "E");
    detail::require_in_hyperplane(form, a, lambda2, F, "F");

    ValueSetReport r;
    r.incidences = pair_histogram(form, E, F);
    for (auto v : r.incidences) {
        r.size += v > 0;
        r.second_moment += v * v;
    }
    const std::uint64_t q = form.field().q();
    const std::uint64_t qd = form.space().size();
    const u128 ef = static_cast<u128>(E.size()) * F.size();
    r.lower_bound = ef == 0 ? 0.0 : static_cast<double>(static_cast<long double>(q) / (1.0L + static_cast<long double>(qd) / static_cast<long double>(ef)));
    // size >= q ef / (ef + q^d)  <=>  size (ef + q^d) >= q ef
    r.bound_holds = static_cast<u128>(r.size) * (ef + qd) >= static_cast<u128>(q) * ef;
    r.bound_asserted = form.dim() >= 3;
    r.cauchy_schwarz_holds = ef * ef <= static_cast<u128>(r.size) * r.second_moment;
    return r;
}

}  // namespace bfq

#endif  // BILINEARFQ_COUNTING_HPP
