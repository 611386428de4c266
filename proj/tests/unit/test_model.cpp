#include "gbdeer/config.hpp"
#include "gbdeer/model.hpp"

#include "doctest.h"
#include "json.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <string>

using namespace gbdeer;

namespace
{

std::string violation(const ScenarioConfig& cfg)
{
    try
    {
        validate_config(cfg);
    }
    catch (const ConfigError& e)
    {
        return e.what();
    }
    return {};
}

// The type invariants, stated directly.
bool invariants_hold(const ScenarioConfig& c)
{
    const double a = c.power_table.levels[0].range;
    const double b = c.power_table.levels[1].range;
    const double m = c.power_table.levels[2].range;
    return a > 0 && a < b && b < m && c.radio_range_R == m && c.handover_threshold < c.e_init &&
           c.mobility.v_min <= c.mobility.v_max && c.duration > 0;
}

}  // namespace

TEST_SUITE("model")
{
    TEST_CASE("default config passes validation unchanged")
    {
        const auto cfg = default_config();
        const auto out = validate_config(cfg);
        CHECK(out.power_table.range(Level::Tmin) == 80.0);
        CHECK(out.power_table.range(Level::Tmid) == 160.0);
        CHECK(out.power_table.range(Level::Tmax) == 250.0);
        CHECK(out.radio_range_R == 250.0);
        CHECK(dump_config(out) == dump_config(cfg));
    }

    TEST_CASE("duration 0 is rejected by name")
    {
        auto cfg = default_config();
        cfg.duration = 0.0;
        CHECK(violation(cfg).find("duration > 0") != std::string::npos);
    }

    TEST_CASE("threshold equal to e_init is rejected")
    {
        auto cfg = default_config();
        cfg.handover_threshold = cfg.e_init;
        CHECK(violation(cfg).find("handover_threshold < e_init") != std::string::npos);
    }

    TEST_CASE("out-of-order ranges name the PowerTable invariant")
    {
        auto cfg = default_config();
        cfg.power_table.levels[0].range = 200.0;
        const auto msg = violation(cfg);
        CHECK(msg.find("PowerTable") != std::string::npos);
        CHECK(msg.find("range(Tmin) < range(Tmid)") != std::string::npos);
    }

    TEST_CASE("power table entries are reordered by level")
    {
        auto cfg = default_config();
        std::swap(cfg.power_table.levels[0], cfg.power_table.levels[2]);
        const auto out = validate_config(cfg);
        CHECK(out.power_table.levels[0].level == Level::Tmin);
        CHECK(out.power_table.levels[0].range == 80.0);
        CHECK(out.power_table.levels[2].range == 250.0);
    }

    TEST_CASE("R must equal range(Tmax)")
    {
        auto cfg = default_config();
        cfg.radio_range_R = 240.0;
        CHECK(violation(cfg).find("radio_range_R") != std::string::npos);
    }

    TEST_CASE("traffic endpoints are checked")
    {
        auto cfg = default_config();
        cfg.traffic = {FlowSpec{0, 0, 1000, 1, 0, 10}};
        CHECK(violation(cfg).find("src != dst") != std::string::npos);
        cfg.traffic = {FlowSpec{0, 100, 1000, 1, 0, 10}};
        CHECK(violation(cfg).find("dst < n_nodes") != std::string::npos);
    }

    TEST_CASE("accepts exactly the configs that satisfy the invariants")
    {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> u(-50.0, 400.0);
        std::bernoulli_distribution coin(0.5);
        int accepted = 0;
        int rejected = 0;
        for (int i = 0; i < 3000; ++i)
        {
            auto cfg = default_config();
            cfg.power_table.levels[0].range = u(rng);
            cfg.power_table.levels[1].range = u(rng);
            cfg.power_table.levels[2].range = u(rng);
            if (coin(rng))
            {
                // half the draws start from a correctly ordered table
                std::array<double, 3> r{cfg.power_table.levels[0].range, cfg.power_table.levels[1].range,
                                        cfg.power_table.levels[2].range};
                std::sort(r.begin(), r.end());
                for (std::size_t k = 0; k < 3; ++k)
                {
                    cfg.power_table.levels[k].range = r[k];
                }
            }
            cfg.radio_range_R = coin(rng) ? cfg.power_table.levels[2].range : u(rng);
            cfg.e_init = std::abs(u(rng)) / 40.0 + 0.1;
            cfg.handover_threshold = std::abs(u(rng)) / 40.0;
            cfg.mobility.v_min = std::abs(u(rng)) / 20.0;
            cfg.mobility.v_max = std::abs(u(rng)) / 20.0;
            cfg.duration = coin(rng) ? u(rng) : std::abs(u(rng));
            const bool ok = violation(cfg).empty();
            CHECK(ok == invariants_hold(cfg));
            (ok ? accepted : rejected)++;
        }
        CHECK(accepted > 50);
        CHECK(rejected > 50);
    }

    TEST_CASE("string forms round-trip")
    {
        for (Level l : kAllLevels)
        {
            CHECK(parse_level(to_string(l)) == l);
        }
        for (Protocol p : {Protocol::Gbdeer, Protocol::GafFixed, Protocol::MinHop})
        {
            CHECK(parse_protocol(to_string(p)) == p);
        }
        CHECK_FALSE(parse_protocol("bogus").has_value());
        CHECK(to_string(Role::Subordinate) == "Subordinate");
        CHECK(to_string(GafState::Sleep) == "Sleep");
    }

    TEST_CASE("config documents round-trip through JSON")
    {
        auto cfg = default_config();
        cfg.traffic = {FlowSpec{1, 2, 512, 0.5, 1.0, 9.0}};
        cfg.nodes = {NodeOverride{3, Vec2{10, 20}, Vec2{1, -1}, 2.5}};
        cfg.control_bits = 0;
        const auto back = parse_config(dump_config(cfg));
        CHECK(dump_config(back) == dump_config(cfg));
        REQUIRE(back.nodes.size() == 1);
        CHECK(back.nodes[0].pos == Vec2{10, 20});
        CHECK(back.nodes[0].e_res == doctest::Approx(2.5));
        CHECK(back.control_bits == 0);
    }

    TEST_CASE("missing and mistyped fields are named")
    {
        const auto doc = nlohmann::json::parse(dump_config(default_config()));
        auto missing = doc;
        missing.erase("e_init");
        CHECK_THROWS_WITH_AS(parse_config(missing.dump()), doctest::Contains("missing field: e_init"), ConfigError);

        auto nested = doc;
        nested["mobility"].erase("pause");
        CHECK_THROWS_WITH_AS(parse_config(nested.dump()), doctest::Contains("missing field: mobility.pause"),
                             ConfigError);

        auto typed = doc;
        typed["n_nodes"] = "x";
        CHECK_THROWS_WITH_AS(parse_config(typed.dump()), doctest::Contains("n_nodes"), ConfigError);

        auto proto = doc;
        proto["protocol"] = "bogus";
        CHECK_THROWS_WITH_AS(parse_config(proto.dump()), doctest::Contains("gaf-fixed"), ConfigError);

        CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
        CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    }

    TEST_CASE("optional knobs default when absent")
    {
        auto doc = nlohmann::json::parse(dump_config(default_config()));
        for (const char* key : {"control_bits", "hop_latency", "mobility_tick", "weight_alpha"})
        {
            doc.erase(key);
        }
        const auto cfg = parse_config(doc.dump());
        CHECK(cfg.control_bits == 64);
        CHECK(cfg.hop_latency == doctest::Approx(0.002));
        CHECK(cfg.mobility_tick == doctest::Approx(1.0));
        CHECK(cfg.weight_alpha == doctest::Approx(0.5));
    }
}
