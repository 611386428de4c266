#pragma once

#include "gbdeer/energy.hpp"
#include "gbdeer/model.hpp"
#include "gbdeer/trace.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gbdeer
{

struct Metrics
{
    std::int64_t delivered = 0;
    std::int64_t dropped = 0;
    std::int64_t retransmissions = 0;
    double delivery_ratio = 0.0;
    double mean_e2e_delay = 0.0;  // over delivered packets
    double energy_total = 0.0;
    std::vector<double> energy_per_node;
    std::optional<double> first_death_t;
    std::optional<double> network_lifetime_t;  // first permanent unroutability of any flow
    std::int64_t partition_count = 0;
    std::int64_t handover_count = 0;
    std::int64_t rediscovery_count = 0;
    std::int64_t segment_count = 0;
    std::int64_t bits_transmitted_total = 0;  // data + control, stands in for bandwidth use
};

Metrics aggregate(const Trace& trace, const EnergyLedger& ledger);

/// Flat `key: value` document, one field per line, in declaration order.
std::string to_text(const Metrics& m);

std::string comparison_csv_header();
std::string comparison_csv_row(std::string_view protocol, std::uint64_t seed, const Metrics& m);

/// BFS over the unit-disk graph of alive nodes (edge when distance <= radius).
/// Neighbors are visited in ascending id, so ties resolve to lower ids.
std::optional<std::vector<int>> min_hop_path(std::span<const NodeState> nodes, double radius, int src, int dst);

/// Runs a comparison protocol (gaf-fixed or minhop) on `cfg`.
/// Throws std::invalid_argument for any other protocol.
Metrics run_baseline(const ScenarioConfig& cfg);

}  // namespace gbdeer
