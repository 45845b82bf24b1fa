#ifndef BILINEARFQ_SETS_HPP
#define BILINEARFQ_SETS_HPP

// Standard vector sets used by experiments: full space, punctured space,
// the grid (F_q^*)^d, and seeded random subsets.

#include <cstdint>
#include <numeric>
#include <vector>

#include "bilinear.hpp"
#include "error.hpp"
#include "prng.hpp"

namespace bfq {

inline VectorSet full_set(const VectorSpace& space) {
    std::vector<std::uint64_t> idx(space.size());
    std::iota(idx.begin(), idx.end(), std::uint64_t{0});
    return VectorSet::from_indices(space, std::move(idx));
}

/// F_q^d without the origin.
inline VectorSet punctured_full_set(const VectorSpace& space) {
    std::vector<std::uint64_t> idx(space.size() - 1);
    std::iota(idx.begin(), idx.end(), std::uint64_t{1});
    return VectorSet::from_indices(space, std::move(idx));
}

/// (F_q^*)^d.
inline VectorSet star_grid_set(const VectorSpace& space) {
    return full_set(space).filter([](std::span<const std::uint32_t> v) {
        for (auto c : v)
            if (c == 0) return false;
        return true;
    });
}

/// Keeps each member independently with probability `density`, drawing one
/// SplitMix64 double per member in index order.
inline VectorSet random_subset(const VectorSet& from, double density, SplitMix64& rng) {
    if (!(density >= 0.0 && density <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "density must lie in [0, 1]");
    std::vector<std::uint64_t> idx;
    for (auto i : from.indices())
        if (rng.next_unit() < density) idx.push_back(i);
    return VectorSet::from_indices(from.space(), std::move(idx));
}

/// Random subset of F_q^d reproducible from (density, seed) alone.
inline VectorSet random_set(const VectorSpace& space, double density, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return random_subset(full_set(space), density, rng);
}

/// Uniformly random element of F_q^*.
inline FieldElement random_nonzero(const Field& f, SplitMix64& rng) {
    return FieldElement{static_cast<std::uint32_t>(1 + rng.next_below(f.q() - 1))};
}

/// Uniformly random nonzero vector of F_q^d.
inline Vector random_nonzero_vector(const VectorSpace& space, SplitMix64& rng) {
    return space.vector(1 + rng.next_below(space.size() - 1));
}

/// Random invertible matrix by rejection.
inline BilinearForm random_form(const Field& f, std::uint32_t d, SplitMix64& rng) {
    for (;;) {
        std::vector<std::vector<FieldElement>> rows(d, std::vector<FieldElement>(d));
        for (auto& row : rows)
            for (auto& x : row) x = FieldElement{static_cast<std::uint32_t>(rng.next_below(f.q()))};
        try {
            return make_form(f, rows);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Degenerate) throw;
        }
    }
}

}  // namespace bfq

#endif  // BILINEARFQ_SETS_HPP
