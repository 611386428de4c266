#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gbdeer
{

/// One line of the event trace. `seq` numbers rows in execution order;
/// `detail` is a `key=value;key=value` list.
struct TraceRow
{
    double t = 0.0;
    std::uint64_t seq = 0;
    std::string kind;
    std::vector<int> subjects;
    std::string detail;

    std::optional<std::string_view> field(std::string_view key) const;
    double number(std::string_view key, double fallback = 0.0) const;
};

class Trace
{
public:
    void add(double t, std::string_view kind, std::vector<int> subjects, std::string detail = {});

    const std::vector<TraceRow>& rows() const { return rows_; }
    std::size_t count(std::string_view kind) const;

    /// t,seq,kind,subject_ids,detail
    void write_csv(std::ostream& out) const;

private:
    std::vector<TraceRow> rows_;
};

}  // namespace gbdeer
