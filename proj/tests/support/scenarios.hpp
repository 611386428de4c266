#pragma once

#include "gbdeer/grid.hpp"
#include "gbdeer/model.hpp"

#include <cmath>

namespace scenario
{

using gbdeer::FlowSpec;
using gbdeer::NodeOverride;
using gbdeer::ScenarioConfig;
using gbdeer::Vec2;

inline ScenarioConfig static_base()
{
    auto cfg = gbdeer::default_config();
    cfg.mobility = {0.0, 0.0, 0.0};
    cfg.traffic.clear();
    cfg.nodes.clear();
    return cfg;
}

// Two parked nodes in neighboring cells, one flow between them.
inline ScenarioConfig two_nodes(gbdeer::Protocol p = gbdeer::Protocol::Gbdeer)
{
    auto cfg = static_base();
    cfg.area_w = 223.0;
    cfg.area_h = 100.0;
    cfg.n_nodes = 2;
    cfg.duration = 20.0;
    cfg.protocol = p;
    cfg.nodes = {NodeOverride{0, Vec2{50, 50}, Vec2{0, 0}, {}}, NodeOverride{1, Vec2{170, 50}, Vec2{0, 0}, {}}};
    cfg.traffic = {FlowSpec{0, 1, 1000, 1.0, 0.5, 20.0}};
    return cfg;
}

// The cell-1 supervisor (node 0) drives west at 1 m/s and crosses into
// cell 0 at t = 50. Its subordinate (node 1) is parked in cell 1. Flow 2 -> 3
// runs through cell 1 the whole time.
struct HandoverScenario
{
    ScenarioConfig cfg;
    double crossing_t = 50.0;
};

inline HandoverScenario handover()
{
    auto cfg = static_base();
    cfg.area_w = 400.0;
    cfg.area_h = 120.0;
    cfg.n_nodes = 4;
    cfg.mobility = {0.0, 10.0, 0.0};
    cfg.duration = 100.0;
    cfg.maintenance_interval = 1.0;
    const double r = gbdeer::cell_size(cfg.radio_range_R);
    double x0 = r + 50.0;
    while (x0 - 50.0 < r)
    {
        x0 = std::nextafter(x0, 1e9);  // must still be inside cell 1 at exactly t = 50
    }
    cfg.nodes = {
        NodeOverride{0, Vec2{x0, 50}, Vec2{-1, 0}, {}},
        NodeOverride{1, Vec2{160, 60}, Vec2{0, 0}, 4.0},
        NodeOverride{2, Vec2{50, 50}, Vec2{0, 0}, {}},
        NodeOverride{3, Vec2{300, 50}, Vec2{0, 0}, {}},
    };
    cfg.traffic = {FlowSpec{2, 3, 1000, 1.0, 0.5, 100.0}};
    return {cfg, 50.0};
}

// Random static deployment; node positions come from the seed.
inline ScenarioConfig static_random(std::uint64_t seed, int n, double w, double h, gbdeer::Protocol p)
{
    auto cfg = static_base();
    cfg.seed = seed;
    cfg.n_nodes = n;
    cfg.area_w = w;
    cfg.area_h = h;
    cfg.protocol = p;
    return cfg;
}

}  // namespace scenario
