#include "gbdeer/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace gbdeer
{

double cell_size(double radio_range)
{
    if (!(radio_range > 0.0) || !std::isfinite(radio_range))
    {
        throw std::domain_error(fmt::format("cell_size: radio range must be > 0 (got {})", radio_range));
    }
    return radio_range / std::sqrt(5.0);
}

GridLayout make_layout(double area_w, double area_h, double radio_range)
{
    if (!(area_w > 0.0) || !(area_h > 0.0))
    {
        throw std::domain_error("make_layout: area must be non-empty");
    }
    GridLayout g;
    g.r = cell_size(radio_range);
    g.cols = static_cast<int>(std::ceil(area_w / g.r));
    g.rows = static_cast<int>(std::ceil(area_h / g.r));
    g.area_w = area_w;
    g.area_h = area_h;
    return g;
}

CellIndex cell_of(Vec2 pos, const GridLayout& layout)
{
    if (!(pos.x >= 0.0 && pos.x < layout.area_w && pos.y >= 0.0 && pos.y < layout.area_h))
    {
        throw std::out_of_range(fmt::format("cell_of: ({}, {}) lies outside the deployment area", pos.x, pos.y));
    }
    CellIndex c{static_cast<int>(std::floor(pos.x / layout.r)), static_cast<int>(std::floor(pos.y / layout.r))};
    // x / r can round up to cols when x sits a hair below area_w
    c.ix = std::min(c.ix, layout.cols - 1);
    c.iy = std::min(c.iy, layout.rows - 1);
    return c;
}

CellIndex cell_of_clamped(Vec2 pos, const GridLayout& layout)
{
    pos.x = std::clamp(pos.x, 0.0, std::nextafter(layout.area_w, 0.0));
    pos.y = std::clamp(pos.y, 0.0, std::nextafter(layout.area_h, 0.0));
    return cell_of(pos, layout);
}

std::vector<CellIndex> neighbor_cells(CellIndex c, const GridLayout& layout)
{
    std::vector<CellIndex> out;
    for (CellIndex n : {CellIndex{c.ix - 1, c.iy}, CellIndex{c.ix + 1, c.iy}, CellIndex{c.ix, c.iy - 1},
                        CellIndex{c.ix, c.iy + 1}})
    {
        if (layout.contains(n))
        {
            out.push_back(n);
        }
    }
    return out;
}

double adjacency_bound(const GridLayout& layout) { return layout.r * std::sqrt(5.0); }

}  // namespace gbdeer
