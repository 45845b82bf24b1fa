#include <gtest/gtest.h>

#include "bilinearfq/bilinear.hpp"
#include "bilinearfq/prng.hpp"
#include "bilinearfq/sets.hpp"

using namespace bfq;

TEST(VectorSpace, EncodeDecodeRoundTrip) {
    const VectorSpace space(make_extension_field(3, 2), 3);
    EXPECT_EQ(space.size(), 729u);
    for (std::uint64_t idx = 0; idx < space.size(); ++idx) EXPECT_EQ(space.encode(space.vector(idx)), idx);
    // coordinate 0 is least significant
    EXPECT_EQ(space.encode(Vector{{FieldElement{1}, FieldElement{0}, FieldElement{0}}}), 1u);
    EXPECT_EQ(space.encode(Vector{{FieldElement{0}, FieldElement{1}, FieldElement{0}}}), 9u);
}

TEST(VectorSpace, Limits) {
    EXPECT_THROW(VectorSpace(make_prime_field(3), 0), Error);
    EXPECT_THROW(VectorSpace(make_prime_field(3), 9), Error);
    try {
        VectorSpace(make_prime_field(65537), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLarge);
    }
}

TEST(VectorSet, DeduplicatesAndSorts) {
    const VectorSpace space(make_prime_field(5), 2);
    const auto s = VectorSet::from_indices(space, {7, 3, 7, 0});
    EXPECT_EQ(s.indices(), (std::vector<std::uint64_t>{0, 3, 7}));
    EXPECT_TRUE(s.contains(3));
    EXPECT_FALSE(s.contains(4));
    EXPECT_THROW(VectorSet::from_indices(space, {25}), Error);
}

TEST(Form, DegenerateRejected) {
    const Field f = make_prime_field(5);
    try {
        make_form(f, {{f.element(1), f.element(2)}, {f.element(2), f.element(4)}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Degenerate);
    }
    EXPECT_THROW(make_form(f, {{f.element(1), f.element(2)}}), Error);
    EXPECT_THROW(diagonal_form(f, 2, f.zero()), Error);
}

TEST(Form, EvaluateMatchesMatrixProduct) {
    const Field f = make_extension_field(2, 2);
    SplitMix64 rng(11);
    const BilinearForm form = random_form(f, 3, rng);
    const VectorSpace& space = form.space();
    for (int trial = 0; trial < 500; ++trial) {
        const Vector x = space.vector(rng.next_below(space.size()));
        const Vector y = space.vector(rng.next_below(space.size()));
        FieldElement want = f.zero();
        for (std::uint32_t i = 0; i < 3; ++i)
            for (std::uint32_t j = 0; j < 3; ++j)
                want = f.add(want, f.mul(x.coords[i], f.mul(form.entry(i, j), y.coords[j])));
        ASSERT_EQ(form.evaluate(x, y), want);
    }
}

TEST(Form, DiagonalForm) {
    const Field f = make_prime_field(7);
    const BilinearForm form = diagonal_form(f, 3, f.element(3));
    EXPECT_EQ(form.entry(0, 0).code, 1u);
    EXPECT_EQ(form.entry(1, 1).code, 3u);
    EXPECT_EQ(form.entry(2, 2).code, 3u);
    EXPECT_EQ(form.entry(0, 1).code, 0u);
    EXPECT_EQ(form.determinant().code, 2u);  // 9 mod 7
}

TEST(Neighborhood, HasQToTheDMinusOnePoints) {
    for (auto [p, m, d] : std::vector<std::array<std::uint64_t, 3>>{{3, 1, 2}, {5, 1, 3}, {2, 2, 3}, {7, 1, 2}}) {
        const Field f = make_extension_field(p, m);
        SplitMix64 rng(p * 100 + d);
        const BilinearForm form = random_form(f, static_cast<std::uint32_t>(d), rng);
        const VectorSpace& space = form.space();
        for (int trial = 0; trial < 20; ++trial) {
            const Vector v = random_nonzero_vector(space, rng);
            const FieldElement lambda = f.element(rng.next_below(f.q()));
            const VectorSet n = neighborhood(form, lambda, v);
            ASSERT_EQ(n.size(), space.size() / f.q());
            for (std::size_t i = 0; i < n.size(); ++i) ASSERT_EQ(form.evaluate(v, n.vector(i)), lambda);
        }
        // zero vector: everything for lambda = 0, nothing otherwise
        const Vector zero = space.vector(0);
        EXPECT_EQ(neighborhood(form, f.zero(), zero).size(), space.size());
        EXPECT_EQ(neighborhood(form, f.one(), zero).size(), 0u);
    }
}

TEST(Neighborhood, ChangeOfBasisPreservesSizes) {
    // B'(x, y) = B(Px, Py) with P invertible: |N'_V'(v')| = |N_V(Pv')| for V = P V'.
    const Field f = make_prime_field(5);
    SplitMix64 rng(3);
    const BilinearForm form = random_form(f, 2, rng);
    const BilinearForm P = random_form(f, 2, rng);  // an invertible matrix
    const VectorSpace& space = form.space();
    auto apply = [&](const Vector& x) {
        Vector y;
        for (std::uint32_t i = 0; i < 2; ++i) {
            FieldElement s = f.zero();
            for (std::uint32_t j = 0; j < 2; ++j) s = f.add(s, f.mul(P.entry(i, j), x.coords[j]));
            y.coords.push_back(s);
        }
        return y;
    };
    std::vector<std::vector<FieldElement>> rows(2, std::vector<FieldElement>(2));
    for (std::uint32_t i = 0; i < 2; ++i)
        for (std::uint32_t j = 0; j < 2; ++j) {
            Vector ei = space.vector(0), ej = space.vector(0);
            ei.coords[i] = f.one();
            ej.coords[j] = f.one();
            rows[i][j] = form.evaluate(apply(ei), apply(ej));
        }
    const BilinearForm pulled = make_form(f, rows);
    const VectorSet Vp = random_set(space, 0.5, 9);
    std::vector<Vector> image;
    for (std::size_t i = 0; i < Vp.size(); ++i) image.push_back(apply(Vp.vector(i)));
    const VectorSet V = VectorSet::from_vectors(space, image);
    for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
        const Vector v = space.vector(idx);
        ASSERT_EQ(neighborhood(form, f.one(), apply(v), V).size(), neighborhood(pulled, f.one(), v, Vp).size());
    }
}
