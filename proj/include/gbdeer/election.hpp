#pragma once

#include "gbdeer/grid.hpp"
#include "gbdeer/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gbdeer
{

struct CellRoster
{
    CellIndex cell;
    std::optional<int> supervisor;
    std::optional<int> subordinate;
    std::vector<int> members;  // ascending node ids

    bool has_member(int id) const;
};

/// Election score in [0, 1]: alpha * e_res/e_init + (1 - alpha) * (1 - min(|v|, v_max)/v_max).
/// With v_max == 0 every node is stationary and the mobility term is 1.
double weight(const NodeState& node, double v_max, double alpha = 0.5);

/// Supervisor = best weight, subordinate = second best; ties go to the lower
/// id. Dead nodes in `nodes` are ignored. Empty input yields a roster with
/// no supervisor.
CellRoster elect(CellIndex cell, std::span<const NodeState> nodes, double v_max, double alpha = 0.5);

/// Succession: the subordinate takes over and a fresh subordinate is picked
/// from `nodes` (the cell's current members), never the outgoing supervisor.
/// Without a subordinate the result has no supervisor and the caller must
/// re-elect or rediscover.
CellRoster promote(const CellRoster& roster, std::span<const NodeState> nodes, double v_max, double alpha = 0.5);

}  // namespace gbdeer
