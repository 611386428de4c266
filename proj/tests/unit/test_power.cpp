#include "gbdeer/energy.hpp"
#include "gbdeer/power.hpp"

#include "../support/oracles.hpp"
#include "doctest.h"

#include <random>

using namespace gbdeer;

namespace
{

PowerTable table() { return default_config().power_table; }

}  // namespace

TEST_SUITE("power")
{
    TEST_CASE("min_sufficient_level examples")
    {
        const auto t = table();
        CHECK(min_sufficient_level(50.0, t) == Level::Tmin);
        CHECK(min_sufficient_level(100.0, t) == Level::Tmid);
        CHECK(min_sufficient_level(250.0, t) == Level::Tmax);
        CHECK_FALSE(min_sufficient_level(300.0, t));
        CHECK(min_sufficient_level(0.0, t) == Level::Tmin);
        CHECK(min_sufficient_level(80.0, t) == Level::Tmin);
    }

    TEST_CASE("handshake examples")
    {
        const auto t = table();
        const EnergyParams p;
        const auto mid = handshake(100.0, t, p, 64);
        CHECK(mid.level == Level::Tmid);
        CHECK(mid.attempts == 2);
        CHECK(mid.sender_joules ==
              doctest::Approx(tx_cost(80.0, 64, p) + tx_cost(160.0, 64, p) + rx_cost(64, p)));
        CHECK(mid.receiver_joules == doctest::Approx(rx_cost(64, p) + tx_cost(160.0, 64, p)));
        CHECK(mid.bits_sent == 3 * 64);

        const auto near = handshake(10.0, t, p, 64);
        CHECK(near.level == Level::Tmin);
        CHECK(near.attempts == 1);

        const auto far = handshake(400.0, t, p, 64);
        CHECK_FALSE(far.reachable());
        CHECK(far.attempts == 3);
        CHECK(far.receiver_joules == 0.0);
        CHECK(far.bits_sent == 3 * 64);
    }

    TEST_CASE("escalation agrees with a linear scan")
    {
        const auto t = table();
        const std::vector<double> ranges{80.0, 160.0, 250.0};
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 400.0);
        for (int i = 0; i < 2000; ++i)
        {
            const double d = u(rng);
            const auto h = handshake(d, t, EnergyParams{}, 64);
            const auto want = oracle::level_scan(d, ranges);
            if (want)
            {
                REQUIRE(h.level);
                CHECK(static_cast<int>(*h.level) == *want);
                CHECK(h.attempts == *want + 1);
            }
            else
            {
                CHECK_FALSE(h.level);
                CHECK(h.attempts == 3);
            }
        }
    }

    TEST_CASE("adjust_range examples")
    {
        const auto t = table();
        const auto away = adjust_range(160.0, 5.0, 4.0, Direction::Away, t);
        CHECK(away.effective_range == 180.0);
        CHECK(away.level == Level::Tmax);
        CHECK_FALSE(away.saturated);

        const auto toward = adjust_range(160.0, 5.0, 4.0, Direction::Toward, t);
        CHECK(toward.effective_range == 140.0);
        CHECK(toward.level == Level::Tmid);

        const auto low = adjust_range(100.0, 10.0, 10.0, Direction::Toward, t);
        CHECK(low.effective_range == 80.0);
        CHECK(low.level == Level::Tmin);

        const auto high = adjust_range(240.0, 10.0, 10.0, Direction::Away, t);
        CHECK(high.effective_range == 250.0);
        CHECK(high.saturated);
    }

    TEST_CASE("mutual_separation")
    {
        CHECK(mutual_separation(5, 2, 3, 1) == 13.0);
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0.0, 20.0);
        for (int i = 0; i < 500; ++i)
        {
            const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
            CHECK(mutual_separation(a, b, c, d) == mutual_separation(c, d, a, b));
            CHECK(mutual_separation(2 * a, b, 2 * c, d) == doctest::Approx(2 * mutual_separation(a, b, c, d)));
            CHECK(mutual_separation(a, b, 0, d) == a * b);
        }
    }

    TEST_CASE("handshake cost does not fall with distance")
    {
        const auto t = table();
        const EnergyParams p;
        double prev = 0.0;
        for (double d = 0.0; d <= 250.0; d += 0.5)
        {
            const auto h = handshake(d, t, p, 64);
            const double total = h.sender_joules + h.receiver_joules;
            CHECK(total >= prev);
            prev = total;
        }
    }

    TEST_CASE("node overload uses the separation")
    {
        NodeState a;
        NodeState b;
        a.pos = {0, 0};
        b.pos = {0, 150};
        const auto h = handshake(a, b, table(), EnergyParams{}, 32);
        CHECK(h.level == Level::Tmid);
        CHECK(h.bits_sent == 3 * 32);
    }
}
