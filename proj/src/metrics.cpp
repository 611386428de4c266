#include "gbdeer/metrics.hpp"

#include "gbdeer/engine.hpp"

#include <algorithm>
#include <deque>
#include <fmt/format.h>
#include <map>
#include <stdexcept>

namespace gbdeer
{

Metrics aggregate(const Trace& trace, const EnergyLedger& ledger)
{
    Metrics m;
    std::int64_t generated = 0;
    double delay_sum = 0.0;
    std::map<long, double> open_partitions;  // flow -> time it became unroutable

    for (const auto& row : trace.rows())
    {
        if (row.kind == "Send")
        {
            ++generated;
        }
        else if (row.kind == "Deliver")
        {
            ++m.delivered;
            delay_sum += row.number("delay");
        }
        else if (row.kind == "Drop")
        {
            ++m.dropped;
        }
        else if (row.kind == "Retx")
        {
            ++m.retransmissions;
        }
        else if (row.kind == "Death")
        {
            if (!m.first_death_t)
            {
                m.first_death_t = row.t;
            }
        }
        else if (row.kind == "Partition")
        {
            ++m.partition_count;
            open_partitions.emplace(static_cast<long>(row.number("flow")), row.t);
        }
        else if (row.kind == "Recover")
        {
            open_partitions.erase(static_cast<long>(row.number("flow")));
        }
        else if (row.kind == "Handover")
        {
            ++m.handover_count;
        }
        else if (row.kind == "Rediscovery")
        {
            ++m.rediscovery_count;
        }
        else if (row.kind == "Segments")
        {
            m.segment_count = std::max(m.segment_count, static_cast<std::int64_t>(row.number("count")));
        }

        if (row.kind == "PacketHop" || row.kind == "Retx" || row.kind == "Handshake" ||
            row.kind == "SupervisorError")
        {
            m.bits_transmitted_total += static_cast<std::int64_t>(row.number("bits"));
        }
    }

    m.delivery_ratio = generated > 0 ? static_cast<double>(m.delivered) / static_cast<double>(generated) : 0.0;
    m.mean_e2e_delay = m.delivered > 0 ? delay_sum / static_cast<double>(m.delivered) : 0.0;
    for (const auto& [flow, t] : open_partitions)
    {
        if (!m.network_lifetime_t || t < *m.network_lifetime_t)
        {
            m.network_lifetime_t = t;
        }
    }

    m.energy_per_node.reserve(ledger.node_count());
    for (std::size_t i = 0; i < ledger.node_count(); ++i)
    {
        m.energy_per_node.push_back(ledger.sum(static_cast<int>(i)));
        m.energy_total += m.energy_per_node.back();
    }
    return m;
}

namespace
{

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : "null"; }

}  // namespace

std::string to_text(const Metrics& m)
{
    std::string out;
    auto line = [&out](std::string_view key, const auto& value) { out += fmt::format("{}: {}\n", key, value); };
    line("delivered", m.delivered);
    line("dropped", m.dropped);
    line("retransmissions", m.retransmissions);
    line("delivery_ratio", m.delivery_ratio);
    line("mean_e2e_delay", m.mean_e2e_delay);
    line("energy_total", m.energy_total);
    line("energy_per_node", fmt::format("[{}]", fmt::join(m.energy_per_node, ", ")));
    line("first_death_t", opt(m.first_death_t));
    line("network_lifetime_t", opt(m.network_lifetime_t));
    line("partition_count", m.partition_count);
    line("handover_count", m.handover_count);
    line("rediscovery_count", m.rediscovery_count);
    line("segment_count", m.segment_count);
    line("bits_transmitted_total", m.bits_transmitted_total);
    return out;
}

std::string comparison_csv_header()
{
    return "protocol,seed,delivered,dropped,retransmissions,delivery_ratio,mean_e2e_delay,energy_total,"
           "energy_per_node,first_death_t,network_lifetime_t,partition_count,handover_count,rediscovery_count,"
           "segment_count,bits_transmitted_total";
}

std::string comparison_csv_row(std::string_view protocol, std::uint64_t seed, const Metrics& m)
{
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", protocol, seed, m.delivered, m.dropped,
                       m.retransmissions, m.delivery_ratio, m.mean_e2e_delay, m.energy_total,
                       fmt::join(m.energy_per_node, ";"), m.first_death_t ? fmt::format("{}", *m.first_death_t) : "",
                       m.network_lifetime_t ? fmt::format("{}", *m.network_lifetime_t) : "", m.partition_count,
                       m.handover_count, m.rediscovery_count, m.segment_count, m.bits_transmitted_total);
}

std::optional<std::vector<int>> min_hop_path(std::span<const NodeState> nodes, double radius, int src, int dst)
{
    const auto n = nodes.size();
    auto ok = [&](int id) { return id >= 0 && static_cast<std::size_t>(id) < n && nodes[static_cast<std::size_t>(id)].alive; };
    if (!ok(src) || !ok(dst))
    {
        return std::nullopt;
    }
    std::vector<int> parent(n, -1);
    parent[static_cast<std::size_t>(src)] = src;
    std::deque<int> frontier{src};
    while (!frontier.empty() && parent[static_cast<std::size_t>(dst)] < 0)
    {
        const int cur = frontier.front();
        frontier.pop_front();
        const Vec2 at = nodes[static_cast<std::size_t>(cur)].pos;
        for (std::size_t j = 0; j < n; ++j)
        {
            if (parent[j] < 0 && nodes[j].alive && distance(at, nodes[j].pos) <= radius)
            {
                parent[j] = cur;
                frontier.push_back(static_cast<int>(j));
            }
        }
    }
    if (parent[static_cast<std::size_t>(dst)] < 0)
    {
        return std::nullopt;
    }
    std::vector<int> path{dst};
    while (path.back() != src)
    {
        path.push_back(parent[static_cast<std::size_t>(path.back())]);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Metrics run_baseline(const ScenarioConfig& cfg)
{
    if (cfg.protocol != Protocol::GafFixed && cfg.protocol != Protocol::MinHop)
    {
        throw std::invalid_argument(
            fmt::format("run_baseline: {} is not a baseline protocol", to_string(cfg.protocol)));
    }
    return run(cfg).metrics;
}

}  // namespace gbdeer
