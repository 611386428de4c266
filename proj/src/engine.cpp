#include "gbdeer/engine.hpp"

#include "gbdeer/mobility.hpp"
#include "gbdeer/routing.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <map>
#include <queue>
#include <spdlog/spdlog.h>
#include <utility>

namespace gbdeer
{

std::string_view to_string(EventKind k)
{
    switch (k)
    {
    case EventKind::NodeDeath: return "NodeDeath";
    case EventKind::Maintenance: return "Maintenance";
    case EventKind::DepartAlarm: return "DepartAlarm";
    case EventKind::PacketHop: return "PacketHop";
    case EventKind::PacketSend: return "PacketSend";
    case EventKind::MobilityTick: return "MobilityTick";
    case EventKind::Rediscovery: return "Rediscovery";
    }
    return "?";
}

std::string_view to_string(MaintenanceAction a)
{
    switch (a)
    {
    case MaintenanceAction::None: return "None";
    case MaintenanceAction::Handover: return "Handover";
    case MaintenanceAction::Reelect: return "Reelect";
    }
    return "?";
}

namespace
{

// Alarms fire just past the computed crossing so the node is already
// registered in the next cell (boundaries belong to the higher index).
constexpr double kAlarmGuard = 1e-6;

bool in_cell(const NodeState& n, CellIndex cell, const GridLayout& layout)
{
    return cell_of_clamped(n.pos, layout) == cell;
}

std::string cell_str(CellIndex c) { return fmt::format("{}:{}", c.ix, c.iy); }

}  // namespace

MaintenanceAction maintenance_check(const CellRoster& roster, std::span<const NodeState> nodes,
                                    const GridLayout& layout, double threshold)
{
    if (!roster.supervisor)
    {
        const bool anyone = std::any_of(roster.members.begin(), roster.members.end(),
                                        [&](int id) { return nodes[static_cast<std::size_t>(id)].alive; });
        return anyone ? MaintenanceAction::Reelect : MaintenanceAction::None;
    }
    const NodeState& sup = nodes[static_cast<std::size_t>(*roster.supervisor)];
    const bool departed = sup.alive && !in_cell(sup, roster.cell, layout);
    const bool low = sup.alive && sup.e_res < threshold;
    if (sup.alive && !departed && !low)
    {
        return MaintenanceAction::None;
    }

    const NodeState* sub = roster.subordinate ? &nodes[static_cast<std::size_t>(*roster.subordinate)] : nullptr;
    const bool sub_ok =
        sub && sub->alive && roster.has_member(sub->id) && in_cell(*sub, roster.cell, layout);
    if (!sub_ok)
    {
        return MaintenanceAction::Reelect;
    }
    if (!sup.alive || departed)
    {
        return MaintenanceAction::Handover;
    }
    // energy trigger: handing over to a node that would trip again at once is pointless
    return sub->e_res >= threshold ? MaintenanceAction::Handover : MaintenanceAction::None;
}

void gaf_states_tick(std::span<const CellRoster> rosters, std::span<NodeState> nodes)
{
    for (auto& n : nodes)
    {
        if (n.alive)
        {
            n.role = Role::Common;
            n.gaf_state = GafState::Sleep;
        }
    }
    for (const auto& r : rosters)
    {
        if (r.subordinate)
        {
            auto& n = nodes[static_cast<std::size_t>(*r.subordinate)];
            if (n.alive)
            {
                n.role = Role::Subordinate;
            }
        }
        if (r.supervisor)
        {
            auto& n = nodes[static_cast<std::size_t>(*r.supervisor)];
            if (n.alive)
            {
                n.role = Role::Supervisor;
                n.gaf_state = GafState::Active;
            }
        }
    }
}

std::optional<double> depart_alarm_time(const NodeState& supervisor, CellIndex cell, const GridLayout& layout,
                                        double now)
{
    const auto dt = depart_time(supervisor, cell, layout);
    if (!dt)
    {
        return std::nullopt;
    }
    return now + *dt;
}

RangeAdjustment update_link(LinkPower& link, const NodeState& from, const NodeState& to, double t,
                            const PowerTable& table)
{
    const double elapsed = t - link.adjusted_at;
    if (elapsed <= 0.0)
    {
        return {link.effective_range, link.level, false};
    }
    const Vec2 rel = to.pos - from.pos;
    const Vec2 dv = to.vel - from.vel;
    const double d = rel.norm();
    const double rate = d > 0.0 ? dot(rel, dv) / d : dv.norm();
    RangeAdjustment adj;
    if (rate > 0.0)
    {
        // worst case: both ends run straight apart
        const double spread = mutual_separation(from.speed(), elapsed, to.speed(), elapsed);
        adj = adjust_range(link.effective_range, spread / elapsed, elapsed, Direction::Away, table);
    }
    else
    {
        adj = adjust_range(link.effective_range, -rate, elapsed, Direction::Toward, table);
    }
    link.effective_range = adj.effective_range;
    link.level = adj.level;
    link.adjusted_at = t;
    return adj;
}

struct Simulator::Impl
{
    struct FlowState
    {
        FlowSpec spec;
        std::optional<std::vector<int>> path;
        bool partitioned = false;
    };

    ScenarioConfig cfg;
    GridLayout layout;
    MobilityModel mob;

    std::vector<NodeState> nodes;
    std::vector<WaypointState> wps;
    std::vector<CellRoster> rosters;
    std::vector<int> home;  // flat index of the cell a node is registered in, -1 when none
    std::vector<double> drained_to;
    std::vector<std::uint64_t> arm_id;
    std::vector<std::optional<std::pair<Vec2, int>>> armed;

    EnergyLedger ledger;
    Trace trace;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    std::uint64_t next_seq = 0;

    SupervisorTree tree;
    std::map<std::pair<int, int>, LinkPower> links;
    std::vector<FlowState> flows;
    std::map<int, DataPacket> packets;
    int next_packet = 0;

    std::uint64_t epoch = 0;
    std::uint64_t discovery_epoch = 0;
    double discovery_t = -std::numeric_limits<double>::infinity();

    double now = 0.0;
    std::function<void(const WorldView&)> observer;
    const std::atomic<bool>* cancel = nullptr;

    bool grid() const { return cfg.protocol != Protocol::MinHop; }
    bool adaptive() const { return cfg.protocol == Protocol::Gbdeer; }
    NodeState& node(int id) { return nodes[static_cast<std::size_t>(id)]; }
    double v_max() const { return cfg.mobility.v_max; }

    void schedule(double t, EventKind kind, int subject = -1, std::uint64_t token = 0)
    {
        queue.push(Event{t, kind, next_seq++, subject, token});
    }

    // ---- energy ----

    void spend(int id, EnergyCause cause, double joules)
    {
        if (joules <= 0.0 || !node(id).alive)
        {
            return;
        }
        if (charge(node(id), ledger, cause, joules, now))
        {
            schedule(now, EventKind::NodeDeath, id);
        }
    }

    void settle(int id)
    {
        auto& n = node(id);
        const double dt = now - drained_to[static_cast<std::size_t>(id)];
        drained_to[static_cast<std::size_t>(id)] = now;
        if (!n.alive || dt <= 0.0)
        {
            return;
        }
        if (n.gaf_state == GafState::Sleep)
        {
            spend(id, EnergyCause::Sleep, cfg.energy_params.p_sleep * dt);
        }
        else
        {
            spend(id, EnergyCause::Idle, cfg.energy_params.p_idle * dt);
        }
    }

    void settle_all()
    {
        for (const auto& n : nodes)
        {
            settle(n.id);
        }
    }

    // Bystanders with their radio on hear a broadcast from `sender`.
    void overhear(int sender, double range, std::int64_t bits, int except)
    {
        if (bits <= 0)
        {
            return;
        }
        const Vec2 at = node(sender).pos;
        for (const auto& n : nodes)
        {
            if (n.id == sender || n.id == except || !n.alive || n.gaf_state == GafState::Sleep)
            {
                continue;
            }
            if (distance(n.pos, at) <= range)
            {
                spend(n.id, EnergyCause::Rx, rx_cost(bits, cfg.energy_params));
            }
        }
    }

    // ---- membership ----

    std::vector<NodeState> nodes_of(const std::vector<int>& ids, std::optional<int> except = std::nullopt)
    {
        std::vector<NodeState> out;
        for (int id : ids)
        {
            if (id != except && node(id).alive)
            {
                out.push_back(node(id));
            }
        }
        return out;
    }

    std::optional<int> sup_of(int id) const
    {
        const int h = home[static_cast<std::size_t>(id)];
        return h < 0 ? std::nullopt : rosters[static_cast<std::size_t>(h)].supervisor;
    }

    void pick_subordinate(CellRoster& r)
    {
        r.subordinate = elect(r.cell, nodes_of(r.members, r.supervisor), v_max(), cfg.weight_alpha).supervisor;
    }

    void leave(int id)
    {
        int& h = home[static_cast<std::size_t>(id)];
        if (h < 0)
        {
            return;
        }
        auto& r = rosters[static_cast<std::size_t>(h)];
        h = -1;
        r.members.erase(std::remove(r.members.begin(), r.members.end(), id), r.members.end());
        if (r.subordinate == id)
        {
            pick_subordinate(r);
        }
    }

    void join(int id)
    {
        const int c = layout.flat(cell_of_clamped(node(id).pos, layout));
        if (home[static_cast<std::size_t>(id)] == c)
        {
            return;
        }
        leave(id);
        home[static_cast<std::size_t>(id)] = c;
        auto& r = rosters[static_cast<std::size_t>(c)];
        r.members.insert(std::upper_bound(r.members.begin(), r.members.end(), id), id);
        if (!r.supervisor)
        {
            r.supervisor = id;
            r.subordinate.reset();
            ++epoch;
            trace.add(now, "Elect", {id}, fmt::format("cell={};reason=join", cell_str(r.cell)));
        }
        else if (!r.subordinate)
        {
            pick_subordinate(r);
        }
    }

    // Supervisors stay registered in their cell until maintenance hands them over.
    void refresh_membership()
    {
        for (const auto& n : nodes)
        {
            if (n.alive && sup_of(n.id) != n.id)
            {
                join(n.id);
            }
        }
    }

    void apply_states()
    {
        if (!grid())
        {
            return;
        }
        std::vector<NodeState> next = nodes;
        gaf_states_tick(rosters, next);
        for (auto& n : nodes)
        {
            const auto& m = next[static_cast<std::size_t>(n.id)];
            if (n.alive && n.gaf_state != m.gaf_state)
            {
                settle(n.id);
                n.gaf_state = m.gaf_state;
            }
            n.role = m.role;
        }
    }

    void arm_alarms()
    {
        if (!grid())
        {
            return;
        }
        for (const auto& n : nodes)
        {
            const auto i = static_cast<std::size_t>(n.id);
            const bool is_sup = n.alive && sup_of(n.id) == n.id;
            if (!is_sup)
            {
                if (armed[i])
                {
                    armed[i].reset();
                    ++arm_id[i];
                }
                continue;
            }
            const std::pair<Vec2, int> key{n.vel, home[i]};
            if (armed[i] && *armed[i] == key)
            {
                continue;
            }
            ++arm_id[i];
            armed[i] = key;
            if (const auto at = depart_alarm_time(n, layout.unflat(home[i]), layout, now))
            {
                schedule(*at + kAlarmGuard, EventKind::DepartAlarm, n.id, arm_id[i]);
            }
        }
    }

    // ---- control traffic ----

    void broadcast_error(int sender)
    {
        const auto bits = cfg.control_bits;
        spend(sender, EnergyCause::Tx, tx_cost(cfg.power_table.max_range(), bits, cfg.energy_params));
        overhear(sender, cfg.power_table.max_range(), bits, -1);
        trace.add(now, "SupervisorError", {sender}, fmt::format("level=Tmax;bits={}", bits));
    }

    // Listen_ctrl escalation with the engine-side charges.
    std::optional<Level> do_handshake(int a, int b)
    {
        const auto& table = cfg.power_table;
        const auto& p = cfg.energy_params;
        const auto bits = cfg.control_bits;
        const auto hs = handshake(node(a), node(b), table, p, bits);
        for (int k = 0; k < hs.attempts; ++k)
        {
            const double range = table.range(kAllLevels[static_cast<std::size_t>(k)]);
            spend(a, EnergyCause::Tx, tx_cost(range, bits, p));
            overhear(a, range, bits, b);
        }
        if (hs.level)
        {
            const double range = table.range(*hs.level);
            spend(b, EnergyCause::Rx, rx_cost(bits, p));
            spend(b, EnergyCause::Tx, tx_cost(range, bits, p));
            overhear(b, range, bits, a);
            spend(a, EnergyCause::Rx, rx_cost(bits, p));
        }
        trace.add(now, "Handshake", {a, b},
                  fmt::format("level={};attempts={};outcome={};bits={}", hs.level ? to_string(*hs.level) : "none",
                              hs.attempts, hs.level ? "ok" : "unreachable", hs.bits_sent));
        return hs.level;
    }

    void erase_links_of(int id)
    {
        std::erase_if(links, [id](const auto& kv) { return kv.first.first == id || kv.first.second == id; });
    }

    // ---- routes ----

    std::optional<std::vector<int>> compute_path(int from, int to)
    {
        if (!node(from).alive || !node(to).alive)
        {
            return std::nullopt;
        }
        std::optional<std::vector<int>> hops;
        if (!grid())
        {
            hops = min_hop_path(nodes, cfg.radio_range_R, from, to);
        }
        else if (auto p = route_path(tree, Endpoint{from, sup_of(from)}, Endpoint{to, sup_of(to)}))
        {
            hops = std::move(p->hops);
        }
        if (hops && std::any_of(hops->begin(), hops->end(), [&](int id) { return !node(id).alive; }))
        {
            return std::nullopt;
        }
        return hops;
    }

    bool establish_links(const std::vector<int>& hops)
    {
        for (std::size_t i = 0; i + 1 < hops.size(); ++i)
        {
            const int a = hops[i];
            const int b = hops[i + 1];
            if (!adaptive())
            {
                if (distance(node(a).pos, node(b).pos) > cfg.power_table.max_range())
                {
                    return false;
                }
                continue;
            }
            if (links.contains({a, b}))
            {
                continue;
            }
            const auto level = do_handshake(a, b);
            if (!level)
            {
                return false;
            }
            links[{a, b}] = LinkPower{a, b, *level, cfg.power_table.range(*level), now};
        }
        return true;
    }

    void mark_partition(std::size_t fi)
    {
        auto& f = flows[fi];
        f.path.reset();
        if (!f.partitioned)
        {
            f.partitioned = true;
            trace.add(now, "Partition", {f.spec.src, f.spec.dst}, fmt::format("flow={}", fi));
        }
    }

    bool finished(std::size_t fi) const { return now >= flows[fi].spec.stop; }

    bool establish_flow(std::size_t fi)
    {
        auto& f = flows[fi];
        if (finished(fi))
        {
            f.path.reset();
            return true;
        }
        auto hops = compute_path(f.spec.src, f.spec.dst);
        if (!hops || !establish_links(*hops))
        {
            mark_partition(fi);
            return false;
        }
        if (f.partitioned)
        {
            f.partitioned = false;
            trace.add(now, "Recover", {f.spec.src, f.spec.dst}, fmt::format("flow={}", fi));
        }
        std::string levels;
        if (adaptive())
        {
            for (std::size_t i = 0; i + 1 < hops->size(); ++i)
            {
                levels += fmt::format("{}{}", i ? ">" : "", to_string(links.at({(*hops)[i], (*hops)[i + 1]}).level));
            }
        }
        else
        {
            for (std::size_t i = 0; i + 1 < hops->size(); ++i)
            {
                levels += i ? ">Tmax" : "Tmax";
            }
        }
        trace.add(now, "Route", *hops, fmt::format("flow={};levels={}", fi, levels));
        f.path = std::move(hops);
        return true;
    }

    void discover(bool initial)
    {
        trace.add(now, initial ? "Discovery" : "Rediscovery", {}, fmt::format("epoch={}", epoch));
        if (grid())
        {
            refresh_membership();
            for (std::size_t ci = 0; ci < rosters.size(); ++ci)
            {
                auto& r = rosters[ci];
                if (r.supervisor && node(*r.supervisor).alive)
                {
                    continue;
                }
                auto fresh = elect(r.cell, nodes_of(r.members), v_max(), cfg.weight_alpha);
                if (fresh.supervisor)
                {
                    ++epoch;
                    trace.add(now, "Elect", {*fresh.supervisor}, fmt::format("cell={};reason=rediscovery", cell_str(r.cell)));
                }
                r = std::move(fresh);
            }
            apply_states();
            arm_alarms();

            std::vector<TreeVertex> sups;
            for (const auto& r : rosters)
            {
                if (r.supervisor && node(*r.supervisor).alive)
                {
                    sups.push_back({*r.supervisor, node(*r.supervisor).pos});
                }
            }
            std::sort(sups.begin(), sups.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
            tree = sups.empty() ? SupervisorTree{} : build_mst(sups);
            if (!flows.empty())
            {
                if (const auto s = sup_of(flows.front().spec.src); s && tree.contains(*s))
                {
                    tree.root = *s;
                }
            }
            const auto segments = segment_tree(tree);
            trace.add(now, "Segments", {},
                      fmt::format("count={};vertices={};length={}", segments.size(), tree.vertices.size(),
                                  tree.total_length()));
        }
        links.clear();
        for (std::size_t fi = 0; fi < flows.size(); ++fi)
        {
            establish_flow(fi);
        }
        discovery_epoch = epoch;
        discovery_t = now;
    }

    bool rediscovery_allowed() const
    {
        return epoch != discovery_epoch || now - discovery_t >= cfg.maintenance_interval;
    }

    bool try_rediscover()
    {
        if (!rediscovery_allowed())
        {
            return false;
        }
        discover(false);
        return true;
    }

    // Hands the old supervisor's tree position to its successor and
    // re-routes every flow that went through it.
    void splice(int old_id, int new_id)
    {
        if (tree.contains(old_id) && !tree.contains(new_id))
        {
            tree.relabel(old_id, new_id, node(new_id).pos);
        }
        erase_links_of(old_id);
        bool broken = false;
        for (std::size_t fi = 0; fi < flows.size(); ++fi)
        {
            const auto& path = flows[fi].path;
            const bool affected =
                !path || std::find(path->begin(), path->end(), old_id) != path->end() ||
                std::find(path->begin(), path->end(), new_id) != path->end();
            if (affected && !establish_flow(fi))
            {
                broken = true;
            }
        }
        if (broken)
        {
            schedule(now, EventKind::Rediscovery);
        }
    }

    // ---- maintenance ----

    void run_maintenance(std::size_t ci)
    {
        auto& r = rosters[ci];
        auto action = maintenance_check(r, nodes, layout, cfg.handover_threshold);
        if (action == MaintenanceAction::None)
        {
            return;
        }
        const std::optional<int> old = r.supervisor;
        const bool old_alive = old && node(*old).alive;
        const bool departed = old_alive && !in_cell(node(*old), r.cell, layout);
        if (departed)
        {
            // it is re-registered in its new cell once succession is settled
            r.members.erase(std::remove(r.members.begin(), r.members.end(), *old), r.members.end());
            home[static_cast<std::size_t>(*old)] = -1;
        }

        if (action == MaintenanceAction::Handover)
        {
            auto next = promote(r, nodes_of(r.members), v_max(), cfg.weight_alpha);
            if (next.supervisor)
            {
                const char* reason = !old_alive ? "dead" : departed ? "departed" : "energy";
                trace.add(now, "Handover", {*old, *next.supervisor},
                          fmt::format("cell={};reason={}", cell_str(r.cell), reason));
                if (old_alive)
                {
                    broadcast_error(*old);
                }
                r = std::move(next);
                const int successor = *r.supervisor;
                if (departed)
                {
                    join(*old);
                }
                ++epoch;
                splice(*old, successor);
                return;
            }
            action = MaintenanceAction::Reelect;
        }

        auto next = elect(r.cell, nodes_of(r.members), v_max(), cfg.weight_alpha);
        if (next.supervisor == old)
        {
            r.subordinate = next.subordinate;
            return;
        }
        if (old_alive)
        {
            broadcast_error(*old);
        }
        r = std::move(next);
        if (departed)
        {
            join(*old);
        }
        ++epoch;
        if (r.supervisor)
        {
            std::vector<int> subjects;
            if (old)
            {
                subjects.push_back(*old);
            }
            subjects.push_back(*r.supervisor);
            trace.add(now, "Reelect", subjects, fmt::format("cell={}", cell_str(r.cell)));
            if (old)
            {
                splice(*old, *r.supervisor);
            }
            return;
        }
        trace.add(now, "Hole", old ? std::vector<int>{*old} : std::vector<int>{},
                  fmt::format("cell={}", cell_str(r.cell)));
        if (old)
        {
            erase_links_of(*old);
        }
        schedule(now, EventKind::Rediscovery);
    }

    // ---- forwarding ----

    std::optional<int> next_hop(const DataPacket& p, int holder)
    {
        const auto& path = flows[static_cast<std::size_t>(p.flow)].path;
        if (path)
        {
            auto it = std::find(path->begin(), path->end(), holder);
            if (it != path->end() && it + 1 != path->end())
            {
                return *(it + 1);
            }
        }
        // off the current path (spliced out, or the path is gone): detour from here
        if (auto hops = compute_path(holder, p.dst); hops && hops->size() >= 2)
        {
            return (*hops)[1];
        }
        return std::nullopt;
    }

    bool transmit(DataPacket& p, int from, int to)
    {
        const auto& table = cfg.power_table;
        const auto& ep = cfg.energy_params;
        const auto bits = p.size_bits;
        const double d = distance(node(from).pos, node(to).pos);

        if (!adaptive())
        {
            if (d > table.max_range())
            {
                spend(from, EnergyCause::Tx, tx_cost(table.max_range(), bits, ep));
                ++p.retx_count;
                trace.add(now, "Retx", {from, to}, fmt::format("level=Tmax;bits={}", bits));
                return false;
            }
            spend(from, EnergyCause::Tx, tx_cost(table.max_range(), bits, ep));
            spend(to, EnergyCause::Rx, rx_cost(bits, ep));
            trace.add(now, "PacketHop", {from, to}, fmt::format("level=Tmax;bits={}", bits));
            return true;
        }

        auto it = links.find({from, to});
        if (it == links.end())
        {
            const auto level = do_handshake(from, to);
            if (!level)
            {
                return false;
            }
            it = links.insert_or_assign({from, to}, LinkPower{from, to, *level, table.range(*level), now}).first;
        }
        LinkPower& link = it->second;
        update_link(link, node(from), node(to), now, table);
        if (d > link.effective_range)
        {
            spend(from, EnergyCause::Tx, tx_cost(table.range(link.level), bits, ep));
            ++p.retx_count;
            trace.add(now, "Retx", {from, to}, fmt::format("level={};bits={}", to_string(link.level), bits));
            const auto level = do_handshake(from, to);
            if (!level)
            {
                links.erase(it);
                return false;
            }
            link = LinkPower{from, to, *level, table.range(*level), now};
        }
        spend(from, EnergyCause::Tx, tx_cost(table.range(link.level), bits, ep));
        spend(to, EnergyCause::Rx, rx_cost(bits, ep));
        trace.add(now, "PacketHop", {from, to}, fmt::format("level={};bits={}", to_string(link.level), bits));
        return true;
    }

    void drop(int pid, std::string_view reason)
    {
        const auto& p = packets.at(pid);
        trace.add(now, "Drop", {p.src, p.dst}, fmt::format("flow={};pkt={};reason={}", p.flow, pid, reason));
        packets.erase(pid);
    }

    void hop(int pid)
    {
        auto& p = packets.at(pid);
        const int holder = p.hops_taken.back();
        if (holder == p.dst)
        {
            trace.add(now, "Deliver", {p.src, p.dst},
                      fmt::format("flow={};pkt={};delay={};hops={};retx={}", p.flow, pid, now - p.created_t,
                                  p.hops_taken.size() - 1, p.retx_count));
            packets.erase(pid);
            return;
        }
        if (p.hops_taken.size() > 2 * nodes.size() + 2)
        {
            drop(pid, "ttl");
            return;
        }
        for (int attempt = 0; attempt < 2; ++attempt)
        {
            if (!node(holder).alive)
            {
                break;
            }
            const auto next = next_hop(p, holder);
            if (next && node(*next).alive && transmit(p, holder, *next))
            {
                p.hops_taken.push_back(*next);
                schedule(now + cfg.hop_latency, EventKind::PacketHop, pid);
                return;
            }
            if (attempt == 0)
            {
                try_rediscover();
            }
        }
        trace.add(now, "NoRoute", {holder, p.dst}, fmt::format("flow={};pkt={}", p.flow, pid));
        const auto fi = static_cast<std::size_t>(p.flow);
        drop(pid, "noroute");
        mark_partition(fi);
    }

    void send(std::size_t fi, std::uint64_t k)
    {
        const auto& spec = flows[fi].spec;
        const double next_t = spec.start + static_cast<double>(k + 1) * spec.interval;
        if (next_t < spec.stop && next_t < cfg.duration)
        {
            schedule(next_t, EventKind::PacketSend, static_cast<int>(fi), k + 1);
        }
        const int pid = next_packet++;
        trace.add(now, "Send", {spec.src, spec.dst}, fmt::format("flow={};pkt={}", fi, pid));
        packets.emplace(pid, DataPacket{static_cast<int>(fi), spec.src, spec.dst, spec.packet_size_bits, now,
                                        {spec.src}, 0});
        hop(pid);
    }

    // ---- events ----

    void on_death(int id)
    {
        trace.add(now, "Death", {id});
        erase_links_of(id);
        if (grid())
        {
            const int h = home[static_cast<std::size_t>(id)];
            leave(id);
            if (h >= 0 && rosters[static_cast<std::size_t>(h)].supervisor == id)
            {
                run_maintenance(static_cast<std::size_t>(h));
            }
            apply_states();
            arm_alarms();
        }
        for (std::size_t fi = 0; fi < flows.size(); ++fi)
        {
            if (!finished(fi) && (flows[fi].spec.src == id || flows[fi].spec.dst == id))
            {
                mark_partition(fi);
            }
        }
    }

    void on_depart_alarm(int id, std::uint64_t token)
    {
        const auto i = static_cast<std::size_t>(id);
        if (token != arm_id[i] || !node(id).alive || sup_of(id) != id)
        {
            return;
        }
        const auto ci = static_cast<std::size_t>(home[i]);
        std::vector<int> woken;
        for (int m : rosters[ci].members)
        {
            if (m != id && node(m).alive && node(m).gaf_state == GafState::Sleep)
            {
                settle(m);
                node(m).gaf_state = GafState::Discovery;
                woken.push_back(m);
            }
        }
        if (!woken.empty())
        {
            trace.add(now, "Wake", woken, fmt::format("cell={};supervisor={}", cell_str(rosters[ci].cell), id));
        }
        run_maintenance(ci);
        armed[i].reset();
        apply_states();
        arm_alarms();
    }

    void on_maintenance(std::uint64_t k)
    {
        settle_all();
        if (grid())
        {
            refresh_membership();
            for (std::size_t ci = 0; ci < rosters.size(); ++ci)
            {
                run_maintenance(ci);
            }
            if (adaptive())
            {
                for (auto& [key, link] : links)
                {
                    update_link(link, node(key.first), node(key.second), now, cfg.power_table);
                }
            }
            apply_states();
            arm_alarms();
        }
        const double next_t = static_cast<double>(k + 1) * cfg.maintenance_interval;
        if (next_t <= cfg.duration)
        {
            schedule(next_t, EventKind::Maintenance, -1, k + 1);
        }
    }

    void on_tick(std::uint64_t k)
    {
        refresh_membership();
        apply_states();
        arm_alarms();
        const double next_t = static_cast<double>(k + 1) * cfg.mobility_tick;
        if (next_t <= cfg.duration)
        {
            schedule(next_t, EventKind::MobilityTick, -1, k + 1);
        }
    }

    void advance_all(double t)
    {
        for (auto& n : nodes)
        {
            if (n.alive)
            {
                advance_to(n, wps[static_cast<std::size_t>(n.id)], t, mob);
            }
        }
    }

    void observe()
    {
        if (observer)
        {
            observer(WorldView{now, nodes, rosters, &ledger, &layout, cfg.protocol});
        }
    }

    void init()
    {
        layout = make_layout(cfg.area_w, cfg.area_h, cfg.radio_range_R);
        mob = MobilityModel{cfg.area_w, cfg.area_h, cfg.mobility};

        const auto n = static_cast<std::size_t>(cfg.n_nodes);
        nodes.resize(n);
        wps.resize(n);
        std::map<int, const NodeOverride*> overrides;
        for (const auto& o : cfg.nodes)
        {
            overrides[o.id] = &o;
        }
        bool anything_moves = cfg.mobility.v_max > 0.0;
        std::vector<double> opening;
        for (std::size_t i = 0; i < n; ++i)
        {
            auto& nd = nodes[i];
            nd.id = static_cast<int>(i);
            nd.e_init = cfg.e_init;
            nd.e_res = cfg.e_init;
            nd.gaf_state = GafState::Discovery;
            const auto it = overrides.find(nd.id);
            const NodeOverride* ov = it == overrides.end() ? nullptr : it->second;
            place_node(nd, wps[i], cfg.seed, mob, ov);
            if (ov && ov->e_res)
            {
                nd.e_res = *ov->e_res;
                if (nd.e_res <= 0.0)
                {
                    nd.alive = false;
                    schedule(0.0, EventKind::NodeDeath, nd.id);
                }
            }
            if (ov && ov->vel && ov->vel->norm() > 0.0)
            {
                anything_moves = true;
            }
            opening.push_back(nd.e_res);
        }
        ledger = EnergyLedger(std::move(opening));
        drained_to.assign(n, 0.0);
        arm_id.assign(n, 0);
        armed.assign(n, std::nullopt);
        home.assign(n, -1);

        for (const auto& f : cfg.traffic)
        {
            flows.push_back(FlowState{f, std::nullopt, false});
        }

        if (grid())
        {
            rosters.resize(static_cast<std::size_t>(layout.cell_count()));
            for (int ci = 0; ci < layout.cell_count(); ++ci)
            {
                rosters[static_cast<std::size_t>(ci)].cell = layout.unflat(ci);
            }
            for (auto& nd : nodes)
            {
                const int c = layout.flat(cell_of_clamped(nd.pos, layout));
                home[static_cast<std::size_t>(nd.id)] = c;
                rosters[static_cast<std::size_t>(c)].members.push_back(nd.id);
            }
            for (auto& r : rosters)
            {
                if (r.members.empty())
                {
                    continue;
                }
                r = elect(r.cell, nodes_of(r.members), v_max(), cfg.weight_alpha);
                std::vector<int> subjects{*r.supervisor};
                if (r.subordinate)
                {
                    subjects.push_back(*r.subordinate);
                }
                trace.add(now, "Elect", subjects, fmt::format("cell={};reason=initial", cell_str(r.cell)));
            }
            ++epoch;
            apply_states();
            arm_alarms();
        }
        else
        {
            for (auto& nd : nodes)
            {
                nd.role = Role::Supervisor;
                nd.gaf_state = GafState::Active;
            }
        }

        discover(true);

        schedule(cfg.maintenance_interval, EventKind::Maintenance, -1, 1);
        if (grid() && anything_moves)
        {
            schedule(cfg.mobility_tick, EventKind::MobilityTick, -1, 1);
        }
        for (std::size_t fi = 0; fi < flows.size(); ++fi)
        {
            const auto& s = flows[fi].spec;
            if (s.start < s.stop && s.start < cfg.duration)
            {
                schedule(s.start, EventKind::PacketSend, static_cast<int>(fi), 0);
            }
        }
    }

    void finish()
    {
        advance_all(cfg.duration);
        now = cfg.duration;
        settle_all();
        while (!packets.empty())
        {
            drop(packets.begin()->first, "expired");
        }
        trace.add(now, "End", {});
    }

    RunResult run()
    {
        init();
        observe();
        while (!queue.empty() && queue.top().t <= cfg.duration)
        {
            if (cancel && cancel->load())
            {
                throw RunCancelled();
            }
            const Event ev = queue.top();
            queue.pop();
            advance_all(ev.t);
            now = ev.t;
            switch (ev.kind)
            {
            case EventKind::NodeDeath: on_death(ev.subject); break;
            case EventKind::Maintenance: on_maintenance(ev.token); break;
            case EventKind::DepartAlarm: on_depart_alarm(ev.subject, ev.token); break;
            case EventKind::PacketHop:
                if (packets.contains(ev.subject))
                {
                    hop(ev.subject);
                }
                break;
            case EventKind::PacketSend: send(static_cast<std::size_t>(ev.subject), ev.token); break;
            case EventKind::MobilityTick: on_tick(ev.token); break;
            case EventKind::Rediscovery:
                try_rediscover();
                break;
            }
            observe();
        }
        finish();
        observe();
        spdlog::debug("run finished: {} trace rows, {} events", trace.rows().size(), next_seq);

        RunResult out;
        out.metrics = aggregate(trace, ledger);
        out.trace = std::move(trace);
        out.ledger = std::move(ledger);
        out.final_nodes = std::move(nodes);
        return out;
    }
};

Simulator::Simulator(const ScenarioConfig& cfg) : impl_(std::make_unique<Impl>())
{
    impl_->cfg = validate_config(cfg);
}

Simulator::~Simulator() = default;

void Simulator::set_observer(std::function<void(const WorldView&)> observer) { impl_->observer = std::move(observer); }

void Simulator::set_cancel_flag(const std::atomic<bool>* flag) { impl_->cancel = flag; }

RunResult Simulator::run() { return impl_->run(); }

RunResult run(const ScenarioConfig& cfg)
{
    if (cfg.duration == 0.0)
    {
        // everything else must still hold
        ScenarioConfig probe = cfg;
        probe.duration = 1.0;
        validate_config(probe);
        return RunResult{};
    }
    Simulator sim(cfg);
    return sim.run();
}

}  // namespace gbdeer
