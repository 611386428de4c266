#include "gbdeer/energy.hpp"

#include <fmt/format.h>
#include <numeric>
#include <stdexcept>

namespace gbdeer
{

std::string_view to_string(EnergyCause c)
{
    switch (c)
    {
    case EnergyCause::Tx: return "Tx";
    case EnergyCause::Rx: return "Rx";
    case EnergyCause::Idle: return "Idle";
    case EnergyCause::Sleep: return "Sleep";
    }
    return "?";
}

EnergyLedger::EnergyLedger(std::vector<double> opening)
    : opening_(std::move(opening)), entries_(opening_.size())
{
}

void EnergyLedger::append(int node, LedgerEntry e) { entries_.at(static_cast<std::size_t>(node)).push_back(e); }

double EnergyLedger::sum(int node) const
{
    double s = 0.0;
    for (const auto& e : entries(node))
    {
        s += e.joules;
    }
    return s;
}

double EnergyLedger::total() const
{
    double s = 0.0;
    for (std::size_t n = 0; n < entries_.size(); ++n)
    {
        s += sum(static_cast<int>(n));
    }
    return s;
}

void EnergyLedger::write_csv(std::ostream& out) const
{
    out << "node_id,timestamp,cause,joules\n";
    for (std::size_t n = 0; n < entries_.size(); ++n)
    {
        for (const auto& e : entries_[n])
        {
            out << fmt::format("{},{:.17g},{},{:.17g}\n", n, e.t, to_string(e.cause), e.joules);
        }
    }
}

double tx_cost(double range, std::int64_t bits, const EnergyParams& p)
{
    return (p.e_elec + p.e_amp * range * range) * static_cast<double>(bits);
}

double rx_cost(std::int64_t bits, const EnergyParams& p) { return p.e_elec * static_cast<double>(bits); }

bool charge(NodeState& node, EnergyLedger& ledger, EnergyCause cause, double joules, double t)
{
    if (joules < 0.0)
    {
        throw std::invalid_argument("charge: joules must be non-negative");
    }
    if (!node.alive)
    {
        ledger.append(node.id, {t, cause, 0.0});
        return false;
    }
    const double applied = joules >= node.e_res ? node.e_res : joules;
    node.e_res = joules >= node.e_res ? 0.0 : node.e_res - applied;
    ledger.append(node.id, {t, cause, applied});
    if (node.e_res == 0.0)
    {
        node.alive = false;
        return true;
    }
    return false;
}

}  // namespace gbdeer
