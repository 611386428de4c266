#include "gbdeer/election.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>

using namespace gbdeer;

namespace
{

NodeState member(int id, double e_res, double speed = 0.0, double e_init = 1.0)
{
    NodeState n;
    n.id = id;
    n.e_init = e_init;
    n.e_res = e_res;
    n.vel = {speed, 0.0};
    return n;
}

}  // namespace

TEST_SUITE("election")
{
    TEST_CASE("weight examples")
    {
        CHECK(weight(member(0, 1.0, 0.0), 10.0) == doctest::Approx(1.0));
        CHECK(weight(member(0, 1e-9, 10.0), 10.0) == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(weight(member(0, 0.8, 4.0), 10.0) == doctest::Approx(0.7));
        // faster than v_max saturates
        CHECK(weight(member(0, 1.0, 30.0), 10.0) == doctest::Approx(0.5));
        // without mobility every node is equally still
        CHECK(weight(member(0, 0.5, 3.0), 0.0) == doctest::Approx(0.75));
        CHECK(weight(member(0, 0.8, 4.0), 10.0, 1.0) == doctest::Approx(0.8));
    }

    TEST_CASE("elect breaks ties toward the lower id")
    {
        // equal weights 0.9 for 3 and 7, 0.2 for 1
        const std::vector<NodeState> nodes{member(7, 0.8), member(3, 0.8), member(1, 0.8, 14.0)};
        const auto r = elect({0, 0}, nodes, 10.0);
        CHECK(r.supervisor == 3);
        CHECK(r.subordinate == 7);
        CHECK(r.members == std::vector<int>{1, 3, 7});
    }

    TEST_CASE("singleton and empty cells")
    {
        const std::vector<NodeState> one{member(5, 0.4)};
        const auto r = elect({1, 2}, one, 10.0);
        CHECK(r.supervisor == 5);
        CHECK_FALSE(r.subordinate);
        CHECK(r.cell == CellIndex{1, 2});

        const auto empty = elect({0, 0}, std::vector<NodeState>{}, 10.0);
        CHECK_FALSE(empty.supervisor);
        CHECK(empty.members.empty());
    }

    TEST_CASE("dead nodes are not candidates")
    {
        auto dead = member(0, 1.0);
        dead.alive = false;
        const std::vector<NodeState> nodes{dead, member(4, 0.3)};
        const auto r = elect({0, 0}, nodes, 10.0);
        CHECK(r.supervisor == 4);
        CHECK_FALSE(r.subordinate);
        CHECK(r.members == std::vector<int>{4});
    }

    TEST_CASE("promote examples")
    {
        CellRoster r;
        r.supervisor = 3;
        r.subordinate = 7;
        r.members = {3, 7, 9};
        // node 3 has left; 7 and 9 remain
        const std::vector<NodeState> rest{member(7, 0.9), member(9, 0.5)};
        const auto next = promote(r, rest, 10.0);
        CHECK(next.supervisor == 7);
        CHECK(next.subordinate == 9);

        r.members = {3, 7};
        const std::vector<NodeState> pair{member(3, 0.1), member(7, 0.9)};
        const auto exhausted = promote(r, pair, 10.0);
        CHECK(exhausted.supervisor == 7);
        CHECK_FALSE(exhausted.subordinate);  // the outgoing supervisor is never re-picked

        CellRoster lone;
        lone.supervisor = 3;
        lone.members = {3};
        const auto none = promote(lone, std::vector<NodeState>{member(3, 0.1)}, 10.0);
        CHECK_FALSE(none.supervisor);
    }

    TEST_CASE("scaling energies keeps the roster")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial)
        {
            std::vector<NodeState> a;
            std::vector<NodeState> b;
            const double k = 0.01 + 100.0 * u(rng);
            for (int id = 0; id < 6; ++id)
            {
                const double e = u(rng);
                const double v = 10.0 * u(rng);
                a.push_back(member(id, e, v, 1.0));
                b.push_back(member(id, e * k, v, k));
            }
            const auto ra = elect({0, 0}, a, 10.0);
            const auto rb = elect({0, 0}, b, 10.0);
            CHECK(ra.supervisor == rb.supervisor);
            CHECK(ra.subordinate == rb.subordinate);
        }
    }

    TEST_CASE("supervisor has the best weight")
    {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 300; ++trial)
        {
            std::vector<NodeState> nodes;
            for (int id = 0; id < 1 + trial % 8; ++id)
            {
                nodes.push_back(member(id * 3, u(rng), 5.0 * u(rng)));
            }
            const auto r = elect({0, 0}, nodes, 5.0);
            REQUIRE(r.supervisor);
            const auto sup = std::find_if(nodes.begin(), nodes.end(), [&](auto& n) { return n.id == *r.supervisor; });
            for (const auto& n : nodes)
            {
                CHECK(weight(*sup, 5.0) >= weight(n, 5.0));
            }
            CHECK(elect({0, 0}, nodes, 5.0).supervisor == r.supervisor);
            if (r.subordinate)
            {
                CHECK(*r.subordinate != *r.supervisor);
            }
        }
    }
}
