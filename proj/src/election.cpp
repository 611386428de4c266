#include "gbdeer/election.hpp"

#include <algorithm>

namespace gbdeer
{

bool CellRoster::has_member(int id) const { return std::binary_search(members.begin(), members.end(), id); }

double weight(const NodeState& node, double v_max, double alpha)
{
    const double energy = node.e_init > 0.0 ? node.e_res / node.e_init : 0.0;
    const double mobility = v_max > 0.0 ? 1.0 - std::min(node.speed(), v_max) / v_max : 1.0;
    return alpha * energy + (1.0 - alpha) * mobility;
}

namespace
{

// Alive nodes ordered best-first: higher weight, then lower id.
std::vector<const NodeState*> ranked(std::span<const NodeState> nodes, double v_max, double alpha)
{
    std::vector<std::pair<double, const NodeState*>> scored;
    for (const auto& n : nodes)
    {
        if (n.alive)
        {
            scored.emplace_back(weight(n, v_max, alpha), &n);
        }
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
        {
            return a.first > b.first;
        }
        return a.second->id < b.second->id;
    });
    std::vector<const NodeState*> out;
    out.reserve(scored.size());
    for (const auto& [w, n] : scored)
    {
        out.push_back(n);
    }
    return out;
}

std::vector<int> alive_ids(std::span<const NodeState> nodes)
{
    std::vector<int> ids;
    for (const auto& n : nodes)
    {
        if (n.alive)
        {
            ids.push_back(n.id);
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

CellRoster elect(CellIndex cell, std::span<const NodeState> nodes, double v_max, double alpha)
{
    CellRoster roster;
    roster.cell = cell;
    roster.members = alive_ids(nodes);
    const auto order = ranked(nodes, v_max, alpha);
    if (!order.empty())
    {
        roster.supervisor = order[0]->id;
    }
    if (order.size() > 1)
    {
        roster.subordinate = order[1]->id;
    }
    return roster;
}

CellRoster promote(const CellRoster& roster, std::span<const NodeState> nodes, double v_max, double alpha)
{
    CellRoster out;
    out.cell = roster.cell;
    out.members = alive_ids(nodes);
    if (!roster.subordinate || !out.has_member(*roster.subordinate))
    {
        return out;
    }
    out.supervisor = roster.subordinate;
    for (const NodeState* n : ranked(nodes, v_max, alpha))
    {
        if (n->id != *out.supervisor && n->id != roster.supervisor)
        {
            out.subordinate = n->id;
            break;
        }
    }
    return out;
}

}  // namespace gbdeer
