#pragma once

#include "gbdeer/model.hpp"

#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

namespace gbdeer
{

enum class EnergyCause : std::uint8_t { Tx, Rx, Idle, Sleep };

std::string_view to_string(EnergyCause c);

struct LedgerEntry
{
    double t = 0.0;
    EnergyCause cause = EnergyCause::Tx;
    double joules = 0.0;
};

/// Per-node record of every charge. `opening` holds each node's residual
/// energy when the ledger was opened, so opening - e_res == sum(entries).
class EnergyLedger
{
public:
    EnergyLedger() = default;
    explicit EnergyLedger(std::vector<double> opening);

    void append(int node, LedgerEntry e);

    std::size_t node_count() const { return entries_.size(); }
    const std::vector<LedgerEntry>& entries(int node) const { return entries_.at(static_cast<std::size_t>(node)); }
    double opening(int node) const { return opening_.at(static_cast<std::size_t>(node)); }
    double sum(int node) const;
    double total() const;

    /// node_id,timestamp,cause,joules
    void write_csv(std::ostream& out) const;

private:
    std::vector<double> opening_;
    std::vector<std::vector<LedgerEntry>> entries_;
};

/// First-order radio: (e_elec + e_amp * range^2) * bits.
double tx_cost(double range, std::int64_t bits, const EnergyParams& p);
inline double tx_cost(const PowerLevel& level, std::int64_t bits, const EnergyParams& p)
{
    return tx_cost(level.range, bits, p);
}
double rx_cost(std::int64_t bits, const EnergyParams& p);

/// Deducts `joules` (floored at zero residual) and logs the amount actually
/// deducted. Returns true when this charge killed the node. Charging a dead
/// node logs a zero entry and changes nothing.
bool charge(NodeState& node, EnergyLedger& ledger, EnergyCause cause, double joules, double t);

}  // namespace gbdeer
