#pragma once

#include "gbdeer/model.hpp"

#include <cstdint>
#include <optional>

namespace gbdeer
{

/// Lowest level whose range covers `d`; nullopt beyond range(Tmax).
std::optional<Level> min_sufficient_level(double d, const PowerTable& table);

/// Outcome of the Listen_ctrl / ACKListen_ctrl escalation between two nodes.
///
/// The sender probes at Tmin, Tmid, Tmax in turn, paying tx_cost for each
/// probe. The first probe that reaches the receiver is acknowledged at the
/// same level: the receiver pays rx for the probe plus tx for the ACK, and
/// the sender pays rx for the ACK. Failed probes cost the receiver nothing.
/// Bystanders overhearing a broadcast probe are charged by the engine.
struct HandshakeResult
{
    std::optional<Level> level;  // nullopt: Unreachable after three probes
    int attempts = 0;
    double sender_joules = 0.0;
    double receiver_joules = 0.0;
    std::int64_t bits_sent = 0;  // probes plus ACK

    bool reachable() const { return level.has_value(); }
};

HandshakeResult handshake(double separation, const PowerTable& table, const EnergyParams& params,
                          std::int64_t control_bits);
HandshakeResult handshake(const NodeState& sender, const NodeState& receiver, const PowerTable& table,
                          const EnergyParams& params, std::int64_t control_bits);

enum class Direction : std::uint8_t { Toward, Away };

struct RangeAdjustment
{
    double effective_range = 0.0;  // clamped to [range(Tmin), range(Tmax)]
    Level level = Level::Tmid;     // smallest level covering effective_range
    bool saturated = false;        // the unclamped value exceeded range(Tmax)
};

/// Maintenance-time range tracking: base - speed*time when the pair closes,
/// base + speed*time when it separates.
RangeAdjustment adjust_range(double base, double speed, double time, Direction dir, const PowerTable& table);

/// Worst-case growth of a link when both ends move apart:
/// speed_s*time_s + speed_d*time_d.
double mutual_separation(double speed_s, double time_s, double speed_d, double time_d);

/// Power setting of one directed link. `adjusted_at` is when effective_range
/// was last brought up to date.
struct LinkPower
{
    int from = 0;
    int to = 0;
    Level level = Level::Tmax;
    double effective_range = 0.0;
    double adjusted_at = 0.0;
};

}  // namespace gbdeer
