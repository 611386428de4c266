#include "gbdeer/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>

namespace gbdeer
{

std::optional<std::string_view> TraceRow::field(std::string_view key) const
{
    // manual scan; GCC 11 misreports string_view::find here (-Wstringop-overread)
    const auto* p = detail.data();
    const auto* end = p + detail.size();
    while (p < end)
    {
        const auto* item_end = std::find(p, end, ';');
        const auto* eq = std::find(p, item_end, '=');
        if (eq != item_end && std::string_view(p, static_cast<std::size_t>(eq - p)) == key)
        {
            return std::string_view(eq + 1, static_cast<std::size_t>(item_end - eq - 1));
        }
        p = item_end + 1;
    }
    return std::nullopt;
}

double TraceRow::number(std::string_view key, double fallback) const
{
    const auto v = field(key);
    if (!v)
    {
        return fallback;
    }
    double out = fallback;
    std::from_chars(v->data(), v->data() + v->size(), out);
    return out;
}

void Trace::add(double t, std::string_view kind, std::vector<int> subjects, std::string detail)
{
    rows_.push_back(TraceRow{t, rows_.size(), std::string(kind), std::move(subjects), std::move(detail)});
}

std::size_t Trace::count(std::string_view kind) const
{
    return static_cast<std::size_t>(
        std::count_if(rows_.begin(), rows_.end(), [&](const TraceRow& r) { return r.kind == kind; }));
}

void Trace::write_csv(std::ostream& out) const
{
    out << "t,seq,kind,subject_ids,detail\n";
    for (const auto& r : rows_)
    {
        out << fmt::format("{},{},{},{},{}\n", r.t, r.seq, r.kind, fmt::join(r.subjects, " "), r.detail);
    }
}

}  // namespace gbdeer
