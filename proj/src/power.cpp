#include "gbdeer/power.hpp"

#include "gbdeer/energy.hpp"

#include <algorithm>

namespace gbdeer
{

std::optional<Level> min_sufficient_level(double d, const PowerTable& table)
{
    for (Level l : kAllLevels)
    {
        if (table.range(l) >= d)
        {
            return l;
        }
    }
    return std::nullopt;
}

HandshakeResult handshake(double separation, const PowerTable& table, const EnergyParams& params,
                          std::int64_t control_bits)
{
    HandshakeResult r;
    for (Level l : kAllLevels)
    {
        ++r.attempts;
        r.bits_sent += control_bits;
        r.sender_joules += tx_cost(table.range(l), control_bits, params);
        if (separation <= table.range(l))
        {
            r.level = l;
            r.receiver_joules = rx_cost(control_bits, params) + tx_cost(table.range(l), control_bits, params);
            r.sender_joules += rx_cost(control_bits, params);
            r.bits_sent += control_bits;
            break;
        }
    }
    return r;
}

HandshakeResult handshake(const NodeState& sender, const NodeState& receiver, const PowerTable& table,
                          const EnergyParams& params, std::int64_t control_bits)
{
    return handshake(distance(sender.pos, receiver.pos), table, params, control_bits);
}

RangeAdjustment adjust_range(double base, double speed, double time, Direction dir, const PowerTable& table)
{
    const double shift = speed * time;
    const double raw = dir == Direction::Away ? base + shift : base - shift;
    RangeAdjustment out;
    out.saturated = raw > table.max_range();
    out.effective_range = std::clamp(raw, table.range(Level::Tmin), table.max_range());
    out.level = min_sufficient_level(out.effective_range, table).value_or(Level::Tmax);
    return out;
}

double mutual_separation(double speed_s, double time_s, double speed_d, double time_d)
{
    return speed_s * time_s + speed_d * time_d;
}

}  // namespace gbdeer
