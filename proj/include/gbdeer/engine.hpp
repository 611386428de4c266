#pragma once

#include "gbdeer/election.hpp"
#include "gbdeer/energy.hpp"
#include "gbdeer/grid.hpp"
#include "gbdeer/metrics.hpp"
#include "gbdeer/model.hpp"
#include "gbdeer/power.hpp"
#include "gbdeer/trace.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace gbdeer
{

// Declaration order is the tiebreak rank at equal timestamps.
enum class EventKind : std::uint8_t { NodeDeath, Maintenance, DepartAlarm, PacketHop, PacketSend, MobilityTick, Rediscovery };

std::string_view to_string(EventKind k);

struct Event
{
    double t = 0.0;
    EventKind kind = EventKind::Maintenance;
    std::uint64_t seq = 0;
    int subject = -1;          // node, flow or packet depending on kind
    std::uint64_t token = 0;   // depart-alarm arm id

    friend bool operator>(const Event& a, const Event& b)
    {
        if (a.t != b.t)
        {
            return a.t > b.t;
        }
        if (a.kind != b.kind)
        {
            return a.kind > b.kind;
        }
        return a.seq > b.seq;
    }
};

struct DataPacket
{
    int flow = 0;
    int src = 0;
    int dst = 0;
    std::int64_t size_bits = 0;
    double created_t = 0.0;
    std::vector<int> hops_taken;
    int retx_count = 0;
};

enum class MaintenanceAction : std::uint8_t { None, Handover, Reelect };

std::string_view to_string(MaintenanceAction a);

/// Supervisor check for one cell. Handover when the supervisor is dead,
/// below `threshold`, or outside the cell and a subordinate can take over;
/// Reelect when nobody is left to promote. An energy-triggered handover
/// to a subordinate that is itself below threshold is skipped (None).
MaintenanceAction maintenance_check(const CellRoster& roster, std::span<const NodeState> nodes,
                                    const GridLayout& layout, double threshold);

/// Supervisors Active, subordinates and everyone else asleep. Roles follow
/// the rosters; dead nodes are left untouched.
void gaf_states_tick(std::span<const CellRoster> rosters, std::span<NodeState> nodes);

/// Absolute time at which a supervisor's straight-line motion leaves `cell`,
/// or nullopt when it is not moving.
std::optional<double> depart_alarm_time(const NodeState& supervisor, CellIndex cell, const GridLayout& layout,
                                        double now);

/// Brings a link's effective range up to `t`: grows by the summed speeds
/// when the ends separate, shrinks by the closing rate otherwise.
RangeAdjustment update_link(LinkPower& link, const NodeState& from, const NodeState& to, double t,
                            const PowerTable& table);

struct WorldView
{
    double t = 0.0;
    std::span<const NodeState> nodes;
    std::span<const CellRoster> rosters;  // empty for minhop
    const EnergyLedger* ledger = nullptr;
    const GridLayout* layout = nullptr;
    Protocol protocol = Protocol::Gbdeer;
};

struct RunResult
{
    Metrics metrics;
    Trace trace;
    EnergyLedger ledger;
    std::vector<NodeState> final_nodes;
};

class RunCancelled : public std::runtime_error
{
public:
    RunCancelled() : std::runtime_error("run cancelled") {}
};

class Simulator
{
public:
    /// Validates `cfg`; throws ConfigError when it is not acceptable.
    explicit Simulator(const ScenarioConfig& cfg);
    ~Simulator();
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    /// Called after every processed event.
    void set_observer(std::function<void(const WorldView&)> observer);
    /// Checked between events; a set flag aborts the run with RunCancelled.
    void set_cancel_flag(const std::atomic<bool>* flag);

    RunResult run();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Validates and runs `cfg` with its configured protocol. Duration 0 yields
/// an empty result.
RunResult run(const ScenarioConfig& cfg);

}  // namespace gbdeer
