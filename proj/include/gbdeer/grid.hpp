#pragma once

#include "gbdeer/model.hpp"

#include <compare>
#include <vector>

namespace gbdeer
{

struct CellIndex
{
    int ix = 0;  // column
    int iy = 0;  // row

    friend constexpr auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Square virtual grid over the deployment area. Boundary cells may be
/// partial (cols = ceil(area_w / r)).
struct GridLayout
{
    double r = 0.0;
    int cols = 0;
    int rows = 0;
    double area_w = 0.0;
    double area_h = 0.0;

    int cell_count() const { return cols * rows; }
    bool contains(CellIndex c) const { return c.ix >= 0 && c.iy >= 0 && c.ix < cols && c.iy < rows; }
    int flat(CellIndex c) const { return c.iy * cols + c.ix; }
    CellIndex unflat(int i) const { return {i % cols, i / cols}; }
};

/// Largest cell side that keeps every pair of edge-adjacent cells inside
/// one radio range: R / sqrt(5). Throws std::domain_error for R <= 0.
double cell_size(double radio_range);

GridLayout make_layout(double area_w, double area_h, double radio_range);

/// Cell containing `pos`; boundaries belong to the higher-index cell.
/// Throws std::out_of_range outside [0, area_w) x [0, area_h).
CellIndex cell_of(Vec2 pos, const GridLayout& layout);

/// Like cell_of, but snaps positions on the far area edge into the last
/// row/column. Mobility keeps nodes in the closed area, so the engine uses this.
CellIndex cell_of_clamped(Vec2 pos, const GridLayout& layout);

/// Edge-adjacent cells (4-neighborhood) clipped to the layout, ordered
/// west, east, south, north.
std::vector<CellIndex> neighbor_cells(CellIndex c, const GridLayout& layout);

/// Supremum distance between points of two edge-adjacent cells (r * sqrt(5)).
double adjacency_bound(const GridLayout& layout);

}  // namespace gbdeer
