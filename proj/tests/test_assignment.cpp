#include <gtest/gtest.h>

#include <random>

#include "courtrack/assignment.hpp"
#include "courtrack/errors.hpp"
#include "courtrack/synth.hpp"
#include "oracles.hpp"

using namespace courtrack;

namespace {

std::vector<std::vector<double>> random_values(std::mt19937_64& rng, std::size_t r, std::size_t c,
                                               bool integers) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> small(0, 2);
    std::vector<std::vector<double>> v(r, std::vector<double>(c));
    for (auto& row : v) {
        for (auto& x : row) x = integers ? small(rng) : u(rng);
    }
    return v;
}

}  // namespace

TEST(SolveAssignment, Fixtures) {
    const CostMatrix one(std::vector<std::vector<double>>{{0.2}});
    EXPECT_EQ(solve_assignment(one), (Assignment{{0, 0}}));
    const CostMatrix two({{1, 10}, {10, 1}});
    const auto a = solve_assignment(two);
    EXPECT_EQ(a, (Assignment{{0, 0}, {1, 1}}));
    EXPECT_EQ(assignment_cost(two, a), 2.0);
    EXPECT_TRUE(solve_assignment(CostMatrix(0, 3)).empty());
}

TEST(SolveAssignment, MatchesExhaustiveMinimum) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t r = dim(rng), c = dim(rng);
        const auto v = random_values(rng, r, c, false);
        const CostMatrix m(v);
        const auto got = solve_assignment(m);
        EXPECT_EQ(got.size(), std::min(r, c));
        EXPECT_NEAR(assignment_cost(m, got), oracle::brute_min_cost(v), 1e-12);
        EXPECT_EQ(assignment_cost(m, got), brute_force_assignment(m).second);
    }
}

TEST(SolveAssignment, LexicographicTieBreak) {
    EXPECT_EQ(solve_assignment(CostMatrix(3, 3, 1e6, 0.0)), (Assignment{{0, 0}, {1, 1}, {2, 2}}));
    EXPECT_EQ(solve_assignment(CostMatrix({{1, 1}, {1, 1}})), (Assignment{{0, 0}, {1, 1}}));
    EXPECT_EQ(solve_assignment(CostMatrix({{0, 0, 5}, {5, 0, 0}})), (Assignment{{0, 0}, {1, 1}}));

    // heavily tied integer matrices: the brute-force search keeps the first
    // optimum in lexicographic order, which must coincide with the solver
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t r = dim(rng);
        const std::size_t c = r + dim(rng) % 3;
        const CostMatrix m(random_values(rng, r, c, true));
        EXPECT_EQ(solve_assignment(m), brute_force_assignment(m).first);
    }
}

TEST(SolveAssignment, ConstantShiftOfRowOrColumn) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> dim(2, 6);
    std::uniform_real_distribution<double> k(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = dim(rng);
        auto v = random_values(rng, n, n, false);
        const double base = assignment_cost(CostMatrix(v), solve_assignment(CostMatrix(v)));
        const double shift = k(rng);
        const std::size_t which = rng() % n;
        auto rows = v;
        for (auto& x : rows[which]) x += shift;
        auto cols = v;
        for (auto& row : cols) row[which] += shift;
        EXPECT_NEAR(assignment_cost(CostMatrix(rows), solve_assignment(CostMatrix(rows))), base + shift, 1e-9);
        EXPECT_NEAR(assignment_cost(CostMatrix(cols), solve_assignment(CostMatrix(cols))), base + shift, 1e-9);
    }
}

TEST(SolveAssignment, PaddingDropsDummyPairs) {
    // 3 rows, 1 column: only the cheapest row is matched
    const CostMatrix m({{0.5}, {0.1}, {0.7}}, 100.0);
    EXPECT_EQ(solve_assignment(m), (Assignment{{1, 0}}));
}

TEST(SolveAssignment, RejectsNonFinite) {
    CostMatrix m(2, 2);
    m(0, 1) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(solve_assignment(m), std::invalid_argument);
}

TEST(BruteForceAssignment, FixturesAndLimit) {
    const auto one = brute_force_assignment(CostMatrix(std::vector<std::vector<double>>{{0.2}}));
    EXPECT_EQ(one.first, (Assignment{{0, 0}}));
    EXPECT_EQ(one.second, 0.2);
    const auto two = brute_force_assignment(CostMatrix({{1, 10}, {10, 1}}));
    EXPECT_EQ(two.first, (Assignment{{0, 0}, {1, 1}}));
    EXPECT_EQ(two.second, 2.0);
    EXPECT_THROW(brute_force_assignment(CostMatrix(10, 2)), TooLarge);
}
