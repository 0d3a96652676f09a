#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "tgemb/rng.hpp"

using namespace tgemb;

TEST_SUITE("rng") {

TEST_CASE("splitmix64 matches the published stepper") {
    // first two outputs of the reference implementation from state 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("engine follows the standard mt19937_64 sequence") {
    Rng r(42);
    CHECK(r.next_u64() == 13930160852258120406ULL);
    CHECK(r.next_u64() == 11788048577503494824ULL);
}

TEST_CASE("mix_seed separates streams") {
    std::map<std::uint64_t, int> seen;
    for (std::uint64_t seed = 0; seed < 4; ++seed)
        for (std::uint64_t a = 0; a < 8; ++a)
            for (std::uint64_t b = 0; b < 8; ++b) ++seen[mix_seed(seed, a, b)];
    CHECK(seen.size() == 4 * 8 * 8);  // no collisions over the grid
    CHECK(mix_seed(7, 3, 1) == mix_seed(7, 3, 1));
}

TEST_CASE("next_double lies in [0,1) with the right mean") {
    Rng r(1);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = r.next_double();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        sum += x;
    }
    double mean = sum / n;
    double sigma = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(mean - 0.5) < 4.0 * sigma);
}

TEST_CASE("next_below is bounded and unbiased") {
    Rng r(2);
    CHECK(r.next_below(0) == 0);
    CHECK(r.next_below(1) == 0);
    const std::uint64_t n = 7;
    const int draws = 70000;
    std::array<int, 7> counts{};
    for (int i = 0; i < draws; ++i) {
        std::uint64_t x = r.next_below(n);
        REQUIRE(x < n);
        ++counts[x];
    }
    double p = 1.0 / static_cast<double>(n);
    double sigma = std::sqrt(draws * p * (1.0 - p));
    for (int c : counts) CHECK(std::abs(c - draws * p) < 4.0 * sigma);
}

TEST_CASE("gaussian moments") {
    Rng r(3);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = r.next_gaussian();
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("shuffle is uniform over permutations") {
    Rng r(4);
    const int trials = 120000;
    std::map<std::array<int, 4>, int> counts;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> v{0, 1, 2, 3};
        r.shuffle(v);
        counts[{v[0], v[1], v[2], v[3]}]++;
    }
    CHECK(counts.size() == 24);
    double p = 1.0 / 24.0;
    double sigma = std::sqrt(trials * p * (1.0 - p));
    for (const auto& [perm, c] : counts) CHECK(std::abs(c - trials * p) < 5.0 * sigma);
}

TEST_CASE("alias table reproduces its weights") {
    std::vector<double> weights{1.0, 2.0, 3.0, 4.0};
    AliasTable table(weights);
    REQUIRE(table.size() == 4);
    Rng r(5);
    const int draws = 200000;
    std::array<int, 4> counts{};
    for (int i = 0; i < draws; ++i) ++counts[table.sample(r)];
    double total = 10.0;
    for (int i = 0; i < 4; ++i) {
        double p = weights[i] / total;
        double sigma = std::sqrt(draws * p * (1.0 - p));
        CHECK(std::abs(counts[i] - draws * p) < 4.0 * sigma);
    }
}

TEST_CASE("alias table degenerate inputs") {
    AliasTable single(std::vector<double>{3.5});
    Rng r(6);
    for (int i = 0; i < 10; ++i) CHECK(single.sample(r) == 0);

    AliasTable zeros(std::vector<double>{0.0, 0.0});  // falls back to uniform
    std::array<int, 2> counts{};
    for (int i = 0; i < 1000; ++i) ++counts[zeros.sample(r)];
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);

    AliasTable empty;
    CHECK(empty.empty());
}

TEST_CASE("streams are reproducible and seed-sensitive") {
    Rng a(99), b(99), c(100);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        std::uint64_t x = a.next_u64();
        all_equal = all_equal && x == b.next_u64();
        any_diff = any_diff || x != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

}  // TEST_SUITE
