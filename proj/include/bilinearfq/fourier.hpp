#ifndef BILINEARFQ_FOURIER_HPP
#define BILINEARFQ_FOURIER_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "bilinear.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "finite_field.hpp"
#include "parallel.hpp"

namespace bfq {

/// Dense complex function on F_q^d, indexed like VectorSpace.
struct GridFunction {
    VectorSpace space;
    std::vector<std::complex<double>> values;

    explicit GridFunction(VectorSpace s) : space(std::move(s)), values(space.size(), {0.0, 0.0}) {}
    GridFunction(VectorSpace s, std::vector<std::complex<double>> v) : space(std::move(s)), values(std::move(v)) {
        if (values.size() != space.size()) throw Error(ErrorCode::DimensionMismatch, "grid needs exactly q^d values");
    }

    static GridFunction indicator(const VectorSet& s) {
        GridFunction g(s.space());
        for (auto idx : s.indices()) g.values[idx] = 1.0;
        return g;
    }

    std::complex<double>& operator[](std::uint64_t idx) { return values[idx]; }
    const std::complex<double>& operator[](std::uint64_t idx) const { return values[idx]; }
};

namespace detail {

// Sum over x of chi(sign * x.k) g(x) for every k, chi(y) = e^{2 pi i Tr(y)/p}.
inline std::vector<std::complex<double>> character_transform(const GridFunction& g, bool negate) {
    const VectorSpace& space = g.space;
    const Field& f = space.field();
    const std::uint32_t d = space.dim();
    const std::uint64_t n = space.size();
    require_within_guardrail(static_cast<long double>(n) * n * d, "Fourier transform");
    std::vector<std::uint32_t> coords(n * d);
    for (std::uint64_t idx = 0; idx < n; ++idx) space.decode(idx, {coords.data() + idx * d, d});
    std::vector<std::complex<double>> out(n);
    parallel::for_each_index(n, [&](std::size_t k) {
        const std::span<const std::uint32_t> kv{coords.data() + k * d, d};
        std::complex<double> acc{0.0, 0.0};
        for (std::uint64_t x = 0; x < n; ++x) {
            if (g.values[x] == std::complex<double>{0.0, 0.0}) continue;
            FieldElement dot = BilinearForm::dot(f, {coords.data() + x * d, d}, kv);
            if (negate) dot = f.neg(dot);
            acc += f.root_of_unity(f.trace(dot).code) * g.values[x];
        }
        out[k] = acc;
    });
    return out;
}

}  // namespace detail

/// fhat(k) = q^{-d} sum_x chi(-x.k) f(x), direct O(q^{2d}) evaluation.
inline GridFunction fourier_forward(const GridFunction& f) {
    auto out = detail::character_transform(f, true);
    const double scale = 1.0 / static_cast<double>(f.space.size());
    for (auto& v : out) v *= scale;
    return GridFunction(f.space, std::move(out));
}

/// f(x) = sum_k chi(x.k) g(k).
inline GridFunction fourier_inverse(const GridFunction& g) {
    return GridFunction(g.space, detail::character_transform(g, false));
}

struct SecondMomentReport {
    std::uint64_t lhs = 0;        // sum_lambda v_lambda(E, F)^2
    double rhs = 0;               // full three-term bound
    double main_part = 0;         // |E|^2 |F|^2 / q
    double line_part = 0;         // |E| q^{2d-1} sum_{f != 0} |F cap l_f| |Fhat(f)|^2
    double origin_part = 0;       // (q-1) q^{-1} |E||F| F(0)
    bool holds = false;           // lhs <= rhs (1 + 1e-6)
    std::uint64_t max_line_meet = 0;  // max_{f != 0} |F cap l_f|
    bool line_condition = false;      // max_line_meet <= 1
    std::optional<double> simplified_rhs;  // |E|^2|F|^2/q + |E||F| q^{d-1}, when line_condition
    std::optional<bool> simplified_holds;
};

struct SecondMomentOptions {
    /// Skip the hyperplane and origin preconditions so the displayed bound can
    /// be evaluated on arbitrary F.
    bool allow_general_f = false;
};

/// Checks sum_lambda v_lambda^2 <= |E|^2|F|^2/q + |E| q^{2d-1} sum_{f != 0}
/// |F cap l_f| |Fhat(f)|^2 + (q-1)/q |E||F| F(0), with l_f = {t f : t != 0}
/// and Fhat the transform of F's indicator.
inline SecondMomentReport second_moment_check(const BilinearForm& form, const Vector& a, FieldElement lambda2,
                                              const VectorSet& E, const VectorSet& F,
                                              const SecondMomentOptions& opt = {}) {
    const VectorSpace& space = form.space();
    const Field& f = form.field();
    const std::uint32_t d = form.dim();
    const std::uint64_t q = f.q();
    detail::require_same_space(form, E, "second_moment_check");
    detail::require_same_space(form, F, "second_moment_check");
    if (!opt.allow_general_f) {
        space.check(a);
        if (a.is_zero()) throw Error(ErrorCode::ZeroVector, "a must be nonzero");
        if (lambda2.is_zero()) throw Error(ErrorCode::ZeroLambda, "second_moment_check requires lambda2 in F_q^*");
        if (F.contains(0)) throw Error(ErrorCode::OriginInF, "F contains the origin");
        detail::require_in_hyperplane(form, a, lambda2, F, "F");
    }

    SecondMomentReport r;
    for (auto v : pair_histogram(form, E, F)) r.lhs += v * v;

    const GridFunction fhat = fourier_forward(GridFunction::indicator(F));
    const auto member = F.membership();
    std::uint32_t fv[kMaxDimension], tv[kMaxDimension];
    long double line_sum = 0;
    for (std::uint64_t idx = 1; idx < space.size(); ++idx) {
        space.decode(idx, {fv, d});
        std::uint64_t meet = 0;
        for (std::uint32_t t = 1; t < q; ++t) {
            for (std::uint32_t i = 0; i < d; ++i) tv[i] = f.mul(FieldElement{t}, FieldElement{fv[i]}).code;
            meet += member[space.encode({tv, d})];
        }
        r.max_line_meet = std::max(r.max_line_meet, meet);
        if (meet) line_sum += static_cast<long double>(meet) * std::norm(fhat.values[idx]);
    }
    const long double ne = E.size(), nf = F.size(), lq = q;
    const long double q2d1 = std::pow(lq, 2.0L * d - 1);
    r.main_part = static_cast<double>(ne * ne * nf * nf / lq);
    r.line_part = static_cast<double>(ne * q2d1 * line_sum);
    r.origin_part = static_cast<double>((lq - 1) / lq * ne * nf * (member[0] ? 1.0L : 0.0L));
    r.rhs = r.main_part + r.line_part + r.origin_part;
    r.holds = static_cast<double>(r.lhs) <= r.rhs * (1 + 1e-6);
    r.line_condition = r.max_line_meet <= 1;
    if (r.line_condition) {
        r.simplified_rhs = static_cast<double>(ne * ne * nf * nf / lq + ne * nf * std::pow(lq, static_cast<long double>(d) - 1));
        // q lhs <= |E|^2|F|^2 + |E||F| q^d, exactly
        const u128 ef = static_cast<u128>(E.size()) * F.size();
        r.simplified_holds = static_cast<u128>(q) * r.lhs <= ef * ef + ef * space.size();
    }
    return r;
}

}  // namespace bfq

#endif  // BILINEARFQ_FOURIER_HPP
