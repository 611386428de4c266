#include "gbdeer/grid.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace gbdeer;

namespace
{

GridLayout square(double r, int cols, int rows)
{
    return GridLayout{r, cols, rows, r * cols, r * rows};
}

bool has(const std::vector<CellIndex>& v, CellIndex c) { return std::find(v.begin(), v.end(), c) != v.end(); }

}  // namespace

TEST_SUITE("grid")
{
    TEST_CASE("cell_size")
    {
        CHECK(cell_size(250.0) == doctest::Approx(111.80339887498948).epsilon(1e-15));
        CHECK(cell_size(std::sqrt(5.0)) == doctest::Approx(1.0));
        CHECK_THROWS_AS(cell_size(0.0), std::domain_error);
        CHECK_THROWS_AS(cell_size(-3.0), std::domain_error);
    }

    TEST_CASE("make_layout keeps partial boundary cells")
    {
        const auto g = make_layout(600.0, 250.0, 250.0);
        CHECK(g.cols == 6);  // ceil(600 / 111.8)
        CHECK(g.rows == 3);  // ceil(250 / 111.8)
        CHECK(g.cell_count() == 18);
        CHECK(g.unflat(g.flat({4, 2})) == CellIndex{4, 2});
    }

    TEST_CASE("cell_of examples")
    {
        const auto g = square(100.0, 3, 3);
        CHECK(cell_of({0, 0}, g) == CellIndex{0, 0});
        CHECK(cell_of({150, 249}, g) == CellIndex{1, 2});
        CHECK(cell_of({100, 100}, g) == CellIndex{1, 1});
    }

    TEST_CASE("cell_of rejects positions outside the area")
    {
        const auto g = square(100.0, 3, 3);
        CHECK_THROWS_AS(cell_of({-0.1, 5}, g), std::out_of_range);
        CHECK_THROWS_AS(cell_of({300, 5}, g), std::out_of_range);
        CHECK_THROWS_AS(cell_of({5, 300.5}, g), std::out_of_range);
        CHECK(cell_of_clamped({300, 300}, g) == CellIndex{2, 2});
    }

    TEST_CASE("cell_of is consistent with cell bounds")
    {
        const auto g = make_layout(600.0, 450.0, 250.0);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> ux(0.0, 600.0);
        std::uniform_real_distribution<double> uy(0.0, 450.0);
        for (int i = 0; i < 20000; ++i)
        {
            const Vec2 p{ux(rng), uy(rng)};
            const auto c = cell_of(p, g);
            REQUIRE(g.contains(c));
            CHECK(p.x >= c.ix * g.r);
            CHECK(p.x < (c.ix + 1) * g.r);
            CHECK(p.y >= c.iy * g.r);
            CHECK(p.y < (c.iy + 1) * g.r);
        }
    }

    TEST_CASE("neighbor_cells examples")
    {
        const auto g = square(10.0, 3, 3);
        const auto corner = neighbor_cells({0, 0}, g);
        CHECK(corner.size() == 2);
        CHECK(has(corner, {1, 0}));
        CHECK(has(corner, {0, 1}));

        const auto mid = neighbor_cells({1, 1}, g);
        CHECK(mid == std::vector<CellIndex>{{0, 1}, {2, 1}, {1, 0}, {1, 2}});

        const auto row = square(10.0, 3, 1);
        CHECK(neighbor_cells({2, 0}, row) == std::vector<CellIndex>{{1, 0}});
    }

    TEST_CASE("neighbor relation is symmetric")
    {
        const auto g = square(10.0, 5, 4);
        for (int i = 0; i < g.cell_count(); ++i)
        {
            for (int j = 0; j < g.cell_count(); ++j)
            {
                const auto a = g.unflat(i);
                const auto b = g.unflat(j);
                CHECK(has(neighbor_cells(a, g), b) == has(neighbor_cells(b, g), a));
            }
        }
    }

    TEST_CASE("adjacency_bound")
    {
        CHECK(adjacency_bound(square(111.80339887, 1, 1)) == doctest::Approx(250.0).epsilon(1e-10));
        CHECK(adjacency_bound(square(1.0, 1, 1)) == doctest::Approx(std::sqrt(5.0)));
        CHECK(adjacency_bound(square(100.0, 1, 1)) == doctest::Approx(223.60679774997897));
        CHECK(adjacency_bound(make_layout(500, 500, 250)) == doctest::Approx(250.0));
    }

    TEST_CASE("points in adjacent cells are within R")
    {
        const double R = 250.0;
        const auto g = make_layout(500.0, 500.0, R);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < g.cell_count(); ++i)
        {
            const auto a = g.unflat(i);
            for (const auto b : neighbor_cells(a, g))
            {
                for (int k = 0; k < 500; ++k)
                {
                    const Vec2 p{(a.ix + u(rng)) * g.r, (a.iy + u(rng)) * g.r};
                    const Vec2 q{(b.ix + u(rng)) * g.r, (b.iy + u(rng)) * g.r};
                    CHECK(distance(p, q) <= R + 1e-9);
                }
            }
        }
    }
}
