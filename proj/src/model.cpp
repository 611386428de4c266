#include "gbdeer/model.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace gbdeer
{

std::string_view to_string(Role r)
{
    switch (r)
    {
    case Role::Supervisor: return "Supervisor";
    case Role::Subordinate: return "Subordinate";
    case Role::Common: return "Common";
    }
    return "?";
}

std::string_view to_string(GafState s)
{
    switch (s)
    {
    case GafState::Discovery: return "Discovery";
    case GafState::Active: return "Active";
    case GafState::Sleep: return "Sleep";
    }
    return "?";
}

std::string_view to_string(Level l)
{
    switch (l)
    {
    case Level::Tmin: return "Tmin";
    case Level::Tmid: return "Tmid";
    case Level::Tmax: return "Tmax";
    }
    return "?";
}

std::optional<Level> parse_level(std::string_view name)
{
    for (Level l : kAllLevels)
    {
        if (to_string(l) == name)
        {
            return l;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Protocol p)
{
    switch (p)
    {
    case Protocol::Gbdeer: return "gbdeer";
    case Protocol::GafFixed: return "gaf-fixed";
    case Protocol::MinHop: return "minhop";
    }
    return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name)
{
    for (Protocol p : {Protocol::Gbdeer, Protocol::GafFixed, Protocol::MinHop})
    {
        if (to_string(p) == name)
        {
            return p;
        }
    }
    return std::nullopt;
}

ScenarioConfig default_config()
{
    ScenarioConfig cfg;
    cfg.area_w = 600.0;
    cfg.area_h = 600.0;
    cfg.n_nodes = 100;
    cfg.radio_range_R = 250.0;
    cfg.power_table.levels = {PowerLevel{Level::Tmin, 80.0}, PowerLevel{Level::Tmid, 160.0},
                              PowerLevel{Level::Tmax, 250.0}};
    cfg.e_init = 5.0;
    cfg.handover_threshold = 0.5;
    cfg.maintenance_interval = 1.0;
    cfg.mobility = MobilityParams{0.0, 2.0, 10.0};
    cfg.duration = 300.0;
    cfg.seed = 1;
    cfg.protocol = Protocol::Gbdeer;
    return cfg;
}

namespace
{

void require(bool ok, std::string_view invariant)
{
    if (!ok)
    {
        throw ConfigError(fmt::format("invariant violated: {}", invariant));
    }
}

bool inside_area(Vec2 p, const ScenarioConfig& cfg)
{
    return p.x >= 0.0 && p.x < cfg.area_w && p.y >= 0.0 && p.y < cfg.area_h;
}

}  // namespace

ScenarioConfig validate_config(ScenarioConfig cfg)
{
    require(std::isfinite(cfg.area_w) && cfg.area_w > 0.0, "area_w > 0");
    require(std::isfinite(cfg.area_h) && cfg.area_h > 0.0, "area_h > 0");
    require(cfg.n_nodes >= 1, "n_nodes >= 1");

    auto& lv = cfg.power_table.levels;
    std::array<int, 3> seen{};
    for (const auto& p : lv)
    {
        ++seen[static_cast<std::size_t>(p.level)];
    }
    require(seen == std::array<int, 3>{1, 1, 1}, "PowerTable: exactly one each of Tmin, Tmid, Tmax");
    std::sort(lv.begin(), lv.end(),
              [](const PowerLevel& a, const PowerLevel& b) { return a.level < b.level; });
    const auto& pt = cfg.power_table;
    require(std::isfinite(pt.range(Level::Tmin)) && pt.range(Level::Tmin) > 0.0,
            "PowerTable: range(Tmin) > 0");
    require(pt.range(Level::Tmin) < pt.range(Level::Tmid), "PowerTable: range(Tmin) < range(Tmid)");
    require(pt.range(Level::Tmid) < pt.range(Level::Tmax), "PowerTable: range(Tmid) < range(Tmax)");
    require(std::isfinite(pt.range(Level::Tmax)), "PowerTable: range(Tmax) finite");
    require(cfg.radio_range_R == pt.range(Level::Tmax), "radio_range_R = range(Tmax)");

    require(std::isfinite(cfg.e_init) && cfg.e_init > 0.0, "e_init > 0");
    const auto& ep = cfg.energy_params;
    require(ep.e_elec >= 0.0 && ep.e_amp >= 0.0 && ep.p_idle >= 0.0 && ep.p_sleep >= 0.0,
            "energy_params non-negative");
    require(ep.p_sleep < ep.p_idle, "p_sleep < p_idle");
    require(cfg.handover_threshold >= 0.0, "handover_threshold >= 0");
    require(cfg.handover_threshold < cfg.e_init, "handover_threshold < e_init");
    require(std::isfinite(cfg.maintenance_interval) && cfg.maintenance_interval > 0.0,
            "maintenance_interval > 0");

    require(cfg.mobility.v_min >= 0.0, "v_min >= 0");
    require(cfg.mobility.v_min <= cfg.mobility.v_max, "v_min <= v_max");
    require(std::isfinite(cfg.mobility.v_max), "v_max finite");
    require(std::isfinite(cfg.mobility.pause) && cfg.mobility.pause >= 0.0, "pause >= 0");

    for (const auto& f : cfg.traffic)
    {
        require(f.src >= 0 && f.src < cfg.n_nodes, "traffic: src < n_nodes");
        require(f.dst >= 0 && f.dst < cfg.n_nodes, "traffic: dst < n_nodes");
        require(f.src != f.dst, "traffic: src != dst");
        require(f.packet_size_bits >= 0, "traffic: packet_size_bits >= 0");
        require(std::isfinite(f.interval) && f.interval > 0.0, "traffic: interval > 0");
        require(f.start >= 0.0 && f.start <= f.stop, "traffic: 0 <= start <= stop");
    }

    require(std::isfinite(cfg.duration) && cfg.duration > 0.0, "duration > 0");

    require(cfg.control_bits >= 0, "control_bits >= 0");
    require(cfg.hop_latency >= 0.0, "hop_latency >= 0");
    require(cfg.mobility_tick > 0.0, "mobility_tick > 0");
    require(cfg.weight_alpha >= 0.0 && cfg.weight_alpha <= 1.0, "0 <= weight_alpha <= 1");

    for (const auto& o : cfg.nodes)
    {
        require(o.id >= 0 && o.id < cfg.n_nodes, "nodes: id < n_nodes");
        require(!o.pos || inside_area(*o.pos, cfg), "nodes: pos inside area");
        require(!o.e_res || (*o.e_res >= 0.0 && *o.e_res <= cfg.e_init), "nodes: 0 <= e_res <= e_init");
    }
    return cfg;
}

}  // namespace gbdeer
