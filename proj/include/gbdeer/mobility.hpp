#pragma once

#include "gbdeer/grid.hpp"
#include "gbdeer/model.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <utility>

namespace gbdeer
{

struct MobilityModel
{
    double area_w = 0.0;
    double area_h = 0.0;
    MobilityParams params{};
};

/// Random-waypoint state for one node. Positions are computed from the
/// current leg's anchor (origin, leg_start), so the trajectory does not
/// depend on how often the node is advanced.
struct WaypointState
{
    Vec2 target;
    double pause_until = 0.0;
    std::uint64_t stream_id = 0;
    std::mt19937_64 rng;

    Vec2 origin;
    double leg_start = 0.0;
    double speed = 0.0;
    double now = 0.0;
    bool scripted = false;  // straight-line override, no further waypoints
};

/// Seed of a node's private random stream; depends only on (seed, node id).
std::uint64_t node_stream_id(std::uint64_t seed, int node_id);

/// Uniform double in [lo, hi) drawn from a node stream.
double draw_uniform(std::mt19937_64& rng, double lo, double hi);

/// Initial position and first leg for a node. Draws the position from the
/// node's stream even when `scripted` supplies one, so streams stay aligned.
void place_node(NodeState& node, WaypointState& wp, std::uint64_t seed, const MobilityModel& model,
                const NodeOverride* scripted = nullptr);

/// A waypoint state heading from `from` to `target` at `speed`, starting at
/// time `t`. Used for scripted legs and tests.
WaypointState make_leg(Vec2 from, Vec2 target, double speed, double t);

/// Moves the node to absolute time `t` (>= wp.now), handling arrivals,
/// pauses, and new legs in between.
void advance_to(NodeState& node, WaypointState& wp, double t, const MobilityModel& model);

std::pair<NodeState, WaypointState> advance(NodeState node, WaypointState wp, double dt, const MobilityModel& model);

/// Earliest t > 0 at which straight-line motion at the node's current
/// velocity leaves `cell`; nullopt for a stationary node.
std::optional<double> depart_time(const NodeState& node, CellIndex cell, const GridLayout& layout);

}  // namespace gbdeer
