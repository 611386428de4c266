#include "gbdeer/mobility.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace gbdeer
{

namespace
{

constexpr double kForever = std::numeric_limits<double>::infinity();

Vec2 clamp_to_area(Vec2 p, const MobilityModel& m)
{
    return {std::clamp(p.x, 0.0, m.area_w), std::clamp(p.y, 0.0, m.area_h)};
}

void start_random_leg(NodeState& node, WaypointState& wp, const MobilityModel& m)
{
    wp.origin = node.pos;
    wp.leg_start = wp.now;
    wp.target = {draw_uniform(wp.rng, 0.0, m.area_w), draw_uniform(wp.rng, 0.0, m.area_h)};
    wp.speed = m.params.v_min == m.params.v_max ? m.params.v_min
                                                : draw_uniform(wp.rng, m.params.v_min, m.params.v_max);
}

Vec2 heading(const WaypointState& wp)
{
    const Vec2 d = wp.target - wp.origin;
    const double len = d.norm();
    return len > 0.0 ? Vec2{d.x / len, d.y / len} : Vec2{};
}

// Point where the ray from `p` along `v` leaves the closed area.
Vec2 exit_point(Vec2 p, Vec2 v, const MobilityModel& m)
{
    double t = kForever;
    if (v.x > 0.0) t = std::min(t, (m.area_w - p.x) / v.x);
    if (v.x < 0.0) t = std::min(t, -p.x / v.x);
    if (v.y > 0.0) t = std::min(t, (m.area_h - p.y) / v.y);
    if (v.y < 0.0) t = std::min(t, -p.y / v.y);
    return clamp_to_area(p + v * t, m);
}

}  // namespace

std::uint64_t node_stream_id(std::uint64_t seed, int node_id)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(node_id), 0x6762'6465u};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double draw_uniform(std::mt19937_64& rng, double lo, double hi)
{
    // 53 random mantissa bits; std::uniform_real_distribution is not
    // bit-reproducible across standard libraries.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

void place_node(NodeState& node, WaypointState& wp, std::uint64_t seed, const MobilityModel& model,
                const NodeOverride* scripted)
{
    wp = WaypointState{};
    wp.stream_id = node_stream_id(seed, node.id);
    wp.rng.seed(wp.stream_id);
    node.pos = {draw_uniform(wp.rng, 0.0, model.area_w), draw_uniform(wp.rng, 0.0, model.area_h)};
    if (scripted && scripted->pos)
    {
        node.pos = *scripted->pos;
    }

    if (scripted && scripted->vel)
    {
        const Vec2 v = *scripted->vel;
        const double speed = v.norm();
        const Vec2 target = speed > 0.0 ? exit_point(node.pos, v, model) : node.pos;
        const auto rng = wp.rng;
        const auto id = wp.stream_id;
        wp = make_leg(node.pos, target, speed, 0.0);
        wp.rng = rng;
        wp.stream_id = id;
        wp.scripted = true;
        node.vel = target == node.pos ? Vec2{} : v;
        return;
    }

    start_random_leg(node, wp, model);
    node.vel = heading(wp) * wp.speed;
}

WaypointState make_leg(Vec2 from, Vec2 target, double speed, double t)
{
    WaypointState wp;
    wp.origin = from;
    wp.target = target;
    wp.speed = speed;
    wp.leg_start = t;
    wp.now = t;
    wp.pause_until = t;
    return wp;
}

void advance_to(NodeState& node, WaypointState& wp, double t, const MobilityModel& model)
{
    while (true)
    {
        if (wp.now < wp.pause_until)
        {
            node.vel = {};
            if (t <= wp.pause_until)
            {
                wp.now = std::max(wp.now, t);
                return;
            }
            wp.now = wp.pause_until;
            start_random_leg(node, wp, model);
        }

        const double leg_len = distance(wp.origin, wp.target);
        if (wp.speed <= 0.0)
        {
            // never arrives; a zero-speed leg is a parked node
            node.vel = {};
            wp.now = std::max(wp.now, t);
            return;
        }

        const double arrival = wp.leg_start + leg_len / wp.speed;
        if (t < arrival)
        {
            const Vec2 u = heading(wp);
            node.pos = clamp_to_area(wp.origin + u * (wp.speed * (t - wp.leg_start)), model);
            node.vel = u * wp.speed;
            wp.now = std::max(wp.now, t);
            return;
        }

        node.pos = clamp_to_area(wp.target, model);
        node.vel = {};
        wp.now = arrival;
        wp.pause_until = wp.scripted ? kForever : arrival + model.params.pause;
        if (wp.pause_until <= wp.now)
        {
            if (t == arrival)
            {
                return;
            }
            start_random_leg(node, wp, model);
        }
    }
}

std::pair<NodeState, WaypointState> advance(NodeState node, WaypointState wp, double dt, const MobilityModel& model)
{
    advance_to(node, wp, wp.now + dt, model);
    return {std::move(node), std::move(wp)};
}

std::optional<double> depart_time(const NodeState& node, CellIndex cell, const GridLayout& layout)
{
    const Vec2 v = node.vel;
    if (v.x == 0.0 && v.y == 0.0)
    {
        return std::nullopt;
    }
    const double lo_x = cell.ix * layout.r;
    const double lo_y = cell.iy * layout.r;
    // edge cells end at the area boundary
    const double hi_x = std::min(lo_x + layout.r, layout.area_w);
    const double hi_y = std::min(lo_y + layout.r, layout.area_h);
    double t = kForever;
    if (v.x > 0.0) t = std::min(t, (hi_x - node.pos.x) / v.x);
    if (v.x < 0.0) t = std::min(t, (node.pos.x - lo_x) / -v.x);
    if (v.y > 0.0) t = std::min(t, (hi_y - node.pos.y) / v.y);
    if (v.y < 0.0) t = std::min(t, (node.pos.y - lo_y) / -v.y);
    return std::max(t, 0.0);
}

}  // namespace gbdeer
