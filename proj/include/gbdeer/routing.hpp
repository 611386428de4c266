#pragma once

#include "gbdeer/model.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace gbdeer
{

struct TreeVertex
{
    int id = 0;
    Vec2 pos;
};

struct TreeEdge
{
    int u = 0;  // u < v
    int v = 0;
    double length = 0.0;

    friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// Spanning tree over grid supervisors. Vertices are kept sorted by id.
struct SupervisorTree
{
    std::vector<TreeVertex> vertices;
    std::vector<TreeEdge> edges;
    int root = -1;

    bool contains(int id) const;
    const TreeVertex* find(int id) const;
    std::vector<int> neighbors(int id) const;  // ascending
    double total_length() const;

    /// Hands a vertex's tree position to another node (supervisor handover):
    /// the id and position change, the topology does not.
    void relabel(int old_id, int new_id, Vec2 new_pos);
};

/// Minimum spanning tree of the complete Euclidean graph (Kruskal). Ties
/// are broken by (length, min id, max id). Throws std::invalid_argument on
/// an empty vertex set. The root defaults to the lowest id.
SupervisorTree build_mst(std::span<const TreeVertex> supervisors);

struct RoutePath
{
    std::vector<int> hops;
    std::vector<Level> hop_levels;  // one per hop, filled by power control
};

/// A route endpoint: the node itself and the supervisor of the cell it sits in.
struct Endpoint
{
    int node = 0;
    std::optional<int> cell_supervisor;
};

/// Tree path between the two endpoint supervisors wrapped with the
/// attachment hops; nullopt (NoRoute) when an endpoint cell has no
/// supervisor in the tree.
std::optional<RoutePath> route_path(const SupervisorTree& tree, Endpoint src, Endpoint dst);

struct TreeSegment
{
    int root = 0;
    std::vector<TreeEdge> edges;
    int depth = 0;
    std::optional<std::size_t> parent;  // segment this one hangs off
};

/// Splits the rooted tree into chained subtrees of depth <= max_depth. A
/// vertex at depth max_depth that still has children roots the next segment.
std::vector<TreeSegment> segment_tree(const SupervisorTree& tree, int max_depth = 3);

void write_tree_csv(std::ostream& out, const SupervisorTree& tree);
std::string format_hops(std::span<const int> hops);

}  // namespace gbdeer
