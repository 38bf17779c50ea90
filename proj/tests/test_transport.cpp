#include <doctest.h>

#include <cmath>
#include <random>

#include "qsa/transport.hpp"

using namespace qsa;

namespace {

TransportSample sample_of(std::vector<double> values) {
    TransportSample s;
    s.values = std::move(values);
    s.n = 1;
    return s;
}

TransportSample random_sample(std::mt19937_64& eng, size_t count) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    TransportSample s;
    s.n = 1;
    s.values.resize(count);
    for (auto& v : s.values) v = dist(eng);
    return s;
}

} // namespace

TEST_CASE("to_transport embedding, qubit 0 = MSB") {
    SUBCASE("row (1,0) with n=2 -> 0.5") {
        const BitMatrix bm({0b01}, 2); // qubit 0 set
        CHECK(to_transport(bm).values[0] == 0.5);
    }
    SUBCASE("all zeros -> 0") {
        const BitMatrix bm({0}, 8);
        CHECK(to_transport(bm).values[0] == 0.0);
    }
    SUBCASE("all ones n=8 -> 255/256") {
        const BitMatrix bm({0xff}, 8);
        CHECK(to_transport(bm).values[0] == 255.0 / 256.0);
    }
    SUBCASE("values always in [0,1)") {
        const BitMatrix bm = generate_uniform(20, 10000, 3);
        for (double v : to_transport(bm).values) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
        }
    }
    SUBCASE("n > 63 rejected") {
        const BitMatrix bm({0}, 64);
        CHECK_THROWS_AS(to_transport(bm), InvalidArgument);
    }
}

TEST_CASE("wasserstein1 basics") {
    SUBCASE("identical multisets -> exactly 0") {
        const auto a = sample_of({0.25, 0.5, 0.5, 0.9});
        CHECK(wasserstein1(a, a) == 0.0);
    }
    SUBCASE("hand example {0,1} vs {1,1}") {
        CHECK(wasserstein1(sample_of({0.0, 1.0}), sample_of({1.0, 1.0})) == 0.5);
    }
    SUBCASE("empty sample rejected") {
        TransportSample empty;
        CHECK_THROWS_AS(wasserstein1(empty, sample_of({0.5})), InvalidArgument);
    }
    SUBCASE("symmetry is exact") {
        std::mt19937_64 eng(1);
        const auto a = random_sample(eng, 101);
        const auto b = random_sample(eng, 257);
        CHECK(wasserstein1(a, b) == wasserstein1(b, a));
    }
}

TEST_CASE("equal-size and quantile paths agree under duplication") {
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_sample(eng, 50);
        const auto b = random_sample(eng, 50);
        const double direct = wasserstein1(a, b); // sorted-matching path
        TransportSample a2 = a, b2 = b;
        a2.values.insert(a2.values.end(), a.values.begin(), a.values.end());
        b2.values.insert(b2.values.end(), b.values.begin(), b.values.end());
        // tripling one side forces the quantile path
        TransportSample b3 = b2;
        b3.values.insert(b3.values.end(), b.values.begin(), b.values.end());
        const double quantile = wasserstein1(a2, b3);
        CHECK(std::abs(direct - quantile) <= 1e-12);
    }
}

TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 eng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_sample(eng, 40 + eng() % 60);
        const auto b = random_sample(eng, 40 + eng() % 60);
        const auto c = random_sample(eng, 40 + eng() % 60);
        CHECK(wasserstein1(a, c) <= wasserstein1(a, b) + wasserstein1(b, c) + 1e-12);
    }
}

TEST_CASE("translation invariance") {
    std::mt19937_64 eng(19);
    auto a = random_sample(eng, 64);
    auto b = random_sample(eng, 80);
    const double before = wasserstein1(a, b);
    for (auto& v : a.values) v += 0.37;
    for (auto& v : b.values) v += 0.37;
    CHECK(std::abs(wasserstein1(a, b) - before) <= 1e-12);
}

TEST_CASE("two independent uniform syntheses are close") {
    const auto a = to_transport(generate_uniform(20, 100000, 101));
    const auto b = to_transport(generate_uniform(20, 100000, 202));
    CHECK(wasserstein1(a, b) <= 0.01);
}

TEST_CASE("distance_matrix") {
    SUBCASE("identical samples -> zero matrix") {
        const auto a = sample_of({0.1, 0.2});
        const auto matrix = distance_matrix({a, a});
        CHECK(matrix[0][0] == 0.0);
        CHECK(matrix[0][1] == 0.0);
        CHECK(matrix[1][0] == 0.0);
        CHECK(matrix[1][1] == 0.0);
    }
    SUBCASE("symmetric with zero diagonal, triangle inequality holds") {
        std::mt19937_64 eng(3);
        const std::vector<TransportSample> samples = {
            random_sample(eng, 30), random_sample(eng, 45), random_sample(eng, 60)};
        const auto matrix = distance_matrix(samples);
        for (size_t i = 0; i < 3; ++i) {
            CHECK(matrix[i][i] == 0.0);
            for (size_t j = 0; j < 3; ++j) CHECK(matrix[i][j] == matrix[j][i]);
        }
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 3; ++j)
                for (size_t k = 0; k < 3; ++k)
                    CHECK(matrix[i][k] <= matrix[i][j] + matrix[j][k] + 1e-12);
    }
}

TEST_CASE("triangle_embed") {
    SUBCASE("3-4-5 right triangle") {
        const auto tri = triangle_embed(3.0, 4.0, 5.0);
        CHECK(tri.coordinates[2][0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(tri.coordinates[2][1] == doctest::Approx(4.0).epsilon(1e-12));
        CHECK_FALSE(tri.degenerate);
    }
    SUBCASE("equilateral") {
        const auto tri = triangle_embed(1.0, 1.0, 1.0);
        CHECK(tri.coordinates[2][0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(tri.coordinates[2][1] == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    }
    SUBCASE("collinear boundary case flags degenerate") {
        const auto tri = triangle_embed(2.0, 1.0, 1.0);
        CHECK(tri.degenerate);
        CHECK(tri.coordinates[2][0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(tri.coordinates[2][1] == 0.0);
    }
    SUBCASE("edge lengths reproduced within 1e-9 when strictly non-degenerate") {
        const auto tri = triangle_embed(0.025, 0.024, 0.0014);
        auto dist = [&](int i, int j) {
            const double dx = tri.coordinates[i][0] - tri.coordinates[j][0];
            const double dy = tri.coordinates[i][1] - tri.coordinates[j][1];
            return std::hypot(dx, dy);
        };
        CHECK(std::abs(dist(0, 1) - 0.025) < 1e-9);
        CHECK(std::abs(dist(0, 2) - 0.024) < 1e-9);
        CHECK(std::abs(dist(1, 2) - 0.0014) < 1e-9);
    }
    SUBCASE("inconsistent zero base") {
        CHECK_THROWS_AS(triangle_embed(0.0, 1.0, 2.0), InvalidArgument);
        CHECK_NOTHROW(triangle_embed(0.0, 1.0, 1.0));
    }
}
