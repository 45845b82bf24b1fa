#ifndef BILINEARFQ_BILINEAR_HPP
#define BILINEARFQ_BILINEAR_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "finite_field.hpp"

namespace bfq {

inline constexpr std::uint32_t kMaxDimension = 8;

struct Vector {
    std::vector<FieldElement> coords;

    std::size_t dim() const noexcept { return coords.size(); }
    bool is_zero() const noexcept {
        return std::all_of(coords.begin(), coords.end(), [](FieldElement x) { return x.is_zero(); });
    }
    friend auto operator<=>(const Vector&, const Vector&) = default;
    friend bool operator==(const Vector&, const Vector&) = default;
};

/// F_q^d with the base-q index sum_i code(x_i) q^i (coordinate 0 least
/// significant), which is the base-p counter order over all m*d digits.
class VectorSpace {
public:
    VectorSpace(Field field, std::uint32_t d) : field_(std::move(field)), d_(d) {
        if (d == 0 || d > kMaxDimension)
            throw Error(ErrorCode::DimensionMismatch, "dimension must be in [1, 8]");
        long double size = 1;
        for (std::uint32_t i = 0; i < d; ++i) size *= field_.q();
        if (size > static_cast<long double>(kMaxOrder))
            throw Error(ErrorCode::TooLarge, "q^d exceeds 2^31");
        size_ = static_cast<std::uint64_t>(size);
    }

    const Field& field() const noexcept { return field_; }
    std::uint32_t dim() const noexcept { return d_; }
    std::uint64_t size() const noexcept { return size_; }

    std::uint64_t encode(std::span<const std::uint32_t> codes) const {
        std::uint64_t idx = 0;
        for (std::size_t i = codes.size(); i-- > 0;) idx = idx * field_.q() + codes[i];
        return idx;
    }

    std::uint64_t encode(const Vector& v) const {
        check(v);
        std::uint64_t idx = 0;
        for (std::size_t i = v.coords.size(); i-- > 0;) idx = idx * field_.q() + v.coords[i].code;
        return idx;
    }

    void decode(std::uint64_t idx, std::span<std::uint32_t> out) const {
        for (auto& c : out) {
            c = static_cast<std::uint32_t>(idx % field_.q());
            idx /= field_.q();
        }
    }

    Vector vector(std::uint64_t idx) const {
        Vector v;
        v.coords.resize(d_);
        for (auto& c : v.coords) {
            c = FieldElement{static_cast<std::uint32_t>(idx % field_.q())};
            idx /= field_.q();
        }
        return v;
    }

    void check(const Vector& v) const {
        if (v.dim() != d_)
            throw Error(ErrorCode::DimensionMismatch,
                        "vector of dimension " + std::to_string(v.dim()) + " in F_q^" + std::to_string(d_));
        for (auto c : v.coords)
            if (c.code >= field_.q()) throw Error(ErrorCode::InvalidArgument, "coordinate outside the field");
    }

    friend bool operator==(const VectorSpace& a, const VectorSpace& b) {
        return a.d_ == b.d_ && a.field_ == b.field_;
    }

private:
    Field field_;
    std::uint32_t d_;
    std::uint64_t size_ = 0;
};

/// Deduplicated set of vectors, iterated in ascending index order. Coordinates
/// are stored flat (size() x dim() codes) for the counting loops.
class VectorSet {
public:
    explicit VectorSet(VectorSpace space) : space_(std::move(space)) {}

    static VectorSet from_indices(VectorSpace space, std::vector<std::uint64_t> indices) {
        VectorSet s(std::move(space));
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
        if (!indices.empty() && indices.back() >= s.space_.size())
            throw Error(ErrorCode::InvalidArgument, "vector index outside F_q^d");
        s.indices_ = std::move(indices);
        s.coords_.resize(s.indices_.size() * s.space_.dim());
        for (std::size_t i = 0; i < s.indices_.size(); ++i)
            s.space_.decode(s.indices_[i], {s.coords_.data() + i * s.space_.dim(), s.space_.dim()});
        return s;
    }

    static VectorSet from_vectors(VectorSpace space, const std::vector<Vector>& vectors) {
        std::vector<std::uint64_t> idx;
        idx.reserve(vectors.size());
        for (const auto& v : vectors) idx.push_back(space.encode(v));
        return from_indices(std::move(space), std::move(idx));
    }

    const VectorSpace& space() const noexcept { return space_; }
    const Field& field() const noexcept { return space_.field(); }
    std::uint32_t dim() const noexcept { return space_.dim(); }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }

    std::span<const std::uint32_t> operator[](std::size_t i) const noexcept {
        return {coords_.data() + i * space_.dim(), space_.dim()};
    }
    std::uint64_t index(std::size_t i) const noexcept { return indices_[i]; }
    const std::vector<std::uint64_t>& indices() const noexcept { return indices_; }

    Vector vector(std::size_t i) const { return space_.vector(indices_[i]); }

    bool contains(std::uint64_t idx) const {
        return std::binary_search(indices_.begin(), indices_.end(), idx);
    }
    bool contains(const Vector& v) const { return contains(space_.encode(v)); }

    /// Dense 0/1 membership table over all q^d indices.
    std::vector<char> membership() const {
        std::vector<char> mask(space_.size(), 0);
        for (auto i : indices_) mask[i] = 1;
        return mask;
    }

    template <typename Pred>
    VectorSet filter(Pred&& keep) const {
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (keep((*this)[i])) out.push_back(indices_[i]);
        return from_indices(space_, std::move(out));
    }

    friend bool operator==(const VectorSet& a, const VectorSet& b) {
        return a.space_ == b.space_ && a.indices_ == b.indices_;
    }

private:
    VectorSpace space_;
    std::vector<std::uint64_t> indices_;
    std::vector<std::uint32_t> coords_;
};

namespace detail {

/// Rank-revealing elimination; returns the determinant.
inline FieldElement determinant(const Field& f, std::vector<FieldElement> a, std::uint32_t d) {
    FieldElement det = f.one();
    for (std::uint32_t col = 0; col < d; ++col) {
        std::uint32_t pivot = col;
        while (pivot < d && a[pivot * d + col].is_zero()) ++pivot;
        if (pivot == d) return f.zero();
        if (pivot != col) {
            for (std::uint32_t j = 0; j < d; ++j) std::swap(a[pivot * d + j], a[col * d + j]);
            det = f.neg(det);
        }
        const FieldElement lead = a[col * d + col];
        det = f.mul(det, lead);
        const FieldElement lead_inv = f.inv(lead);
        for (std::uint32_t r = col + 1; r < d; ++r) {
            const FieldElement factor = f.mul(a[r * d + col], lead_inv);
            if (factor.is_zero()) continue;
            for (std::uint32_t j = col; j < d; ++j)
                a[r * d + j] = f.sub(a[r * d + j], f.mul(factor, a[col * d + j]));
        }
    }
    return det;
}

}  // namespace detail

/// B(x, y) = x^T M y with M invertible.
class BilinearForm {
public:
    const VectorSpace& space() const noexcept { return space_; }
    const Field& field() const noexcept { return space_.field(); }
    std::uint32_t dim() const noexcept { return space_.dim(); }
    FieldElement entry(std::uint32_t i, std::uint32_t j) const { return matrix_[i * dim() + j]; }
    FieldElement determinant() const { return det_; }

    /// w = x^T M, so that B(x, y) = sum_j w_j y_j.
    void left_apply(std::span<const std::uint32_t> x, std::span<std::uint32_t> w) const {
        const Field& f = field();
        const std::uint32_t d = dim();
        for (std::uint32_t j = 0; j < d; ++j) {
            FieldElement acc = f.zero();
            for (std::uint32_t i = 0; i < d; ++i)
                acc = f.add(acc, f.mul(FieldElement{x[i]}, matrix_[i * d + j]));
            w[j] = acc.code;
        }
    }

    /// M y, so that B(x, y) = sum_i x_i (M y)_i.
    void right_apply(std::span<const std::uint32_t> y, std::span<std::uint32_t> out) const {
        const Field& f = field();
        const std::uint32_t d = dim();
        for (std::uint32_t i = 0; i < d; ++i) {
            FieldElement acc = f.zero();
            for (std::uint32_t j = 0; j < d; ++j)
                acc = f.add(acc, f.mul(matrix_[i * d + j], FieldElement{y[j]}));
            out[i] = acc.code;
        }
    }

    FieldElement evaluate(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) const {
        if (x.size() != dim() || y.size() != dim())
            throw Error(ErrorCode::DimensionMismatch, "vector dimension does not match the form");
        std::uint32_t w[kMaxDimension];
        left_apply(x, {w, dim()});
        return dot(field(), {w, dim()}, y);
    }

    FieldElement evaluate(const Vector& x, const Vector& y) const {
        space_.check(x);
        space_.check(y);
        std::uint32_t xs[kMaxDimension], ys[kMaxDimension];
        for (std::uint32_t i = 0; i < dim(); ++i) {
            xs[i] = x.coords[i].code;
            ys[i] = y.coords[i].code;
        }
        return evaluate({xs, dim()}, {ys, dim()});
    }

    static FieldElement dot(const Field& f, std::span<const std::uint32_t> w, std::span<const std::uint32_t> y) {
        FieldElement acc = f.zero();
        for (std::size_t j = 0; j < w.size(); ++j) acc = f.add(acc, f.mul(FieldElement{w[j]}, FieldElement{y[j]}));
        return acc;
    }

    friend BilinearForm make_form(const Field& field, const std::vector<std::vector<FieldElement>>& rows);

private:
    BilinearForm(VectorSpace space, std::vector<FieldElement> matrix, FieldElement det)
        : space_(std::move(space)), matrix_(std::move(matrix)), det_(det) {}

    VectorSpace space_;
    std::vector<FieldElement> matrix_;  // row-major d x d
    FieldElement det_;
};

/// Validates squareness and non-degeneracy (det M != 0).
inline BilinearForm make_form(const Field& field, const std::vector<std::vector<FieldElement>>& rows) {
    const auto d = static_cast<std::uint32_t>(rows.size());
    if (d == 0) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
    std::vector<FieldElement> flat;
    flat.reserve(std::size_t{d} * d);
    for (const auto& row : rows) {
        if (row.size() != d) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
        for (auto x : row) {
            if (x.code >= field.q()) throw Error(ErrorCode::InvalidArgument, "matrix entry outside the field");
            flat.push_back(x);
        }
    }
    VectorSpace space(field, d);
    const FieldElement det = detail::determinant(field, flat, d);
    if (det.is_zero()) throw Error(ErrorCode::Degenerate, "matrix is singular");
    return BilinearForm(std::move(space), std::move(flat), det);
}

inline BilinearForm dot_form(const Field& field, std::uint32_t d) {
    std::vector<std::vector<FieldElement>> rows(d, std::vector<FieldElement>(d, field.zero()));
    for (std::uint32_t i = 0; i < d; ++i) rows[i][i] = field.one();
    return make_form(field, rows);
}

/// diag(1, kappa, ..., kappa); for d = 2 this is x_1 y_1 + kappa x_2 y_2.
inline BilinearForm diagonal_form(const Field& field, std::uint32_t d, FieldElement kappa) {
    std::vector<std::vector<FieldElement>> rows(d, std::vector<FieldElement>(d, field.zero()));
    for (std::uint32_t i = 0; i < d; ++i) rows[i][i] = i == 0 ? field.one() : kappa;
    return make_form(field, rows);
}

/// Visits every u with w . u = lambda (w given as codes). For w != 0 this is
/// an affine hyperplane of q^{d-1} points, parametrized by the coordinates
/// other than the last nonzero position of w.
template <typename Visit>
void for_each_on_hyperplane(const VectorSpace& space, std::span<const std::uint32_t> w, FieldElement lambda,
                            Visit&& visit) {
    const Field& f = space.field();
    const std::uint32_t d = space.dim();
    const std::uint32_t q = f.q();
    std::int64_t pivot = -1;
    for (std::uint32_t j = 0; j < d; ++j)
        if (w[j] != 0) pivot = j;
    std::uint32_t u[kMaxDimension] = {};
    if (pivot < 0) {
        if (!lambda.is_zero()) return;
        for (std::uint64_t idx = 0; idx < space.size(); ++idx) visit(idx);
        return;
    }
    const auto pj = static_cast<std::uint32_t>(pivot);
    const FieldElement pivot_inv = f.inv(FieldElement{w[pj]});
    std::uint64_t pivot_weight = 1;
    for (std::uint32_t j = 0; j < pj; ++j) pivot_weight *= q;
    const std::uint64_t free_count = space.size() / q;
    for (std::uint64_t n = 0; n < free_count; ++n) {
        std::uint64_t rest = n;
        FieldElement partial = f.zero();
        for (std::uint32_t j = 0; j < d; ++j) {
            if (j == pj) continue;
            u[j] = static_cast<std::uint32_t>(rest % q);
            rest /= q;
            partial = f.add(partial, f.mul(FieldElement{w[j]}, FieldElement{u[j]}));
        }
        u[pj] = f.mul(f.sub(lambda, partial), pivot_inv).code;
        visit(space.encode({u, d}));
    }
}

/// |N^lambda_V(v)| = |{u in V : B(v, u) = lambda}| using a membership table of V.
inline std::uint64_t count_neighborhood(const BilinearForm& form, FieldElement lambda,
                                        std::span<const std::uint32_t> v, const std::vector<char>& member) {
    std::uint32_t w[kMaxDimension];
    form.left_apply(v, {w, form.dim()});
    std::uint64_t count = 0;
    for_each_on_hyperplane(form.space(), {w, form.dim()}, lambda, [&](std::uint64_t idx) { count += member[idx]; });
    return count;
}

/// N^lambda_V(v); with V absent, the whole solution set N^lambda(v).
inline VectorSet neighborhood(const BilinearForm& form, FieldElement lambda, const Vector& v,
                              const std::optional<VectorSet>& within = std::nullopt) {
    form.space().check(v);
    if (lambda.code >= form.field().q()) throw Error(ErrorCode::InvalidArgument, "lambda outside the field");
    if (within && !(within->space() == form.space()))
        throw Error(ErrorCode::DimensionMismatch, "set lives in a different space");
    std::uint32_t vs[kMaxDimension], w[kMaxDimension];
    for (std::uint32_t i = 0; i < form.dim(); ++i) vs[i] = v.coords[i].code;
    form.left_apply({vs, form.dim()}, {w, form.dim()});
    std::vector<std::uint64_t> out;
    for_each_on_hyperplane(form.space(), {w, form.dim()}, lambda, [&](std::uint64_t idx) {
        if (!within || within->contains(idx)) out.push_back(idx);
    });
    return VectorSet::from_indices(form.space(), std::move(out));
}

}  // namespace bfq

#endif  // BILINEARFQ_BILINEAR_HPP
