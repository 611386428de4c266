#include "gbdeer/routing.hpp"

#include <algorithm>
#include <deque>
#include <fmt/format.h>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace gbdeer
{

bool SupervisorTree::contains(int id) const { return find(id) != nullptr; }

const TreeVertex* SupervisorTree::find(int id) const
{
    auto it = std::lower_bound(vertices.begin(), vertices.end(), id,
                               [](const TreeVertex& v, int key) { return v.id < key; });
    return it != vertices.end() && it->id == id ? &*it : nullptr;
}

std::vector<int> SupervisorTree::neighbors(int id) const
{
    std::vector<int> out;
    for (const auto& e : edges)
    {
        if (e.u == id)
        {
            out.push_back(e.v);
        }
        else if (e.v == id)
        {
            out.push_back(e.u);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double SupervisorTree::total_length() const
{
    return std::accumulate(edges.begin(), edges.end(), 0.0,
                           [](double s, const TreeEdge& e) { return s + e.length; });
}

void SupervisorTree::relabel(int old_id, int new_id, Vec2 new_pos)
{
    if (old_id == new_id || !contains(old_id))
    {
        return;
    }
    if (contains(new_id))
    {
        throw std::logic_error(fmt::format("relabel: node {} is already a tree vertex", new_id));
    }
    for (auto& v : vertices)
    {
        if (v.id == old_id)
        {
            v = TreeVertex{new_id, new_pos};
        }
    }
    std::sort(vertices.begin(), vertices.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (auto& e : edges)
    {
        if (e.u == old_id) e.u = new_id;
        if (e.v == old_id) e.v = new_id;
        if (e.u > e.v) std::swap(e.u, e.v);
        e.length = distance(find(e.u)->pos, find(e.v)->pos);
    }
    if (root == old_id)
    {
        root = new_id;
    }
}

namespace
{

class DisjointSets
{
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x)
        {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
        {
            return false;
        }
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

SupervisorTree build_mst(std::span<const TreeVertex> supervisors)
{
    if (supervisors.empty())
    {
        throw std::invalid_argument("build_mst: no supervisors");
    }
    SupervisorTree tree;
    tree.vertices.assign(supervisors.begin(), supervisors.end());
    std::sort(tree.vertices.begin(), tree.vertices.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    tree.root = tree.vertices.front().id;

    const auto& vs = tree.vertices;
    struct Candidate
    {
        double length;
        std::size_t a, b;  // indices into vs, a < b, so ids ascend too
    };
    std::vector<Candidate> candidates;
    candidates.reserve(vs.size() * (vs.size() - 1) / 2);
    for (std::size_t a = 0; a < vs.size(); ++a)
    {
        for (std::size_t b = a + 1; b < vs.size(); ++b)
        {
            candidates.push_back({distance(vs[a].pos, vs[b].pos), a, b});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
        return std::tie(x.length, vs[x.a].id, vs[x.b].id) < std::tie(y.length, vs[y.a].id, vs[y.b].id);
    });

    DisjointSets sets(vs.size());
    for (const auto& c : candidates)
    {
        if (sets.unite(c.a, c.b))
        {
            tree.edges.push_back({vs[c.a].id, vs[c.b].id, c.length});
            if (tree.edges.size() + 1 == vs.size())
            {
                break;
            }
        }
    }
    return tree;
}

namespace
{

std::optional<std::vector<int>> tree_walk(const SupervisorTree& tree, int from, int to)
{
    std::map<int, int> parent{{from, from}};
    std::deque<int> frontier{from};
    while (!frontier.empty())
    {
        const int cur = frontier.front();
        frontier.pop_front();
        if (cur == to)
        {
            break;
        }
        for (int n : tree.neighbors(cur))
        {
            if (parent.emplace(n, cur).second)
            {
                frontier.push_back(n);
            }
        }
    }
    if (!parent.contains(to))
    {
        return std::nullopt;
    }
    std::vector<int> path{to};
    while (path.back() != from)
    {
        path.push_back(parent.at(path.back()));
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::optional<RoutePath> route_path(const SupervisorTree& tree, Endpoint src, Endpoint dst)
{
    if (!src.cell_supervisor || !dst.cell_supervisor || !tree.contains(*src.cell_supervisor) ||
        !tree.contains(*dst.cell_supervisor))
    {
        return std::nullopt;
    }
    auto core = tree_walk(tree, *src.cell_supervisor, *dst.cell_supervisor);
    if (!core)
    {
        return std::nullopt;
    }
    RoutePath path;
    if (core->front() != src.node)
    {
        path.hops.push_back(src.node);
    }
    path.hops.insert(path.hops.end(), core->begin(), core->end());
    if (path.hops.back() != dst.node)
    {
        path.hops.push_back(dst.node);
    }
    // an endpoint may itself be a tree vertex further along the walk
    auto dup = std::find(path.hops.begin() + 1, path.hops.end(), src.node);
    if (dup != path.hops.end())
    {
        path.hops.erase(path.hops.begin(), dup);
    }
    auto first_dst = std::find(path.hops.begin(), path.hops.end(), dst.node);
    path.hops.erase(first_dst + 1, path.hops.end());
    return path;
}

std::vector<TreeSegment> segment_tree(const SupervisorTree& tree, int max_depth)
{
    std::vector<TreeSegment> segments;
    if (tree.vertices.empty())
    {
        return segments;
    }
    const int root = tree.contains(tree.root) ? tree.root : tree.vertices.front().id;

    std::map<int, std::vector<int>> children;
    std::map<int, const TreeEdge*> edge_to_parent;
    {
        std::map<int, int> parent{{root, root}};
        std::deque<int> frontier{root};
        while (!frontier.empty())
        {
            const int cur = frontier.front();
            frontier.pop_front();
            for (int n : tree.neighbors(cur))
            {
                if (parent.emplace(n, cur).second)
                {
                    children[cur].push_back(n);
                    frontier.push_back(n);
                }
            }
        }
        for (const auto& e : tree.edges)
        {
            const int child = parent.at(e.u) == e.v ? e.u : e.v;
            edge_to_parent[child] = &e;
        }
    }

    std::deque<std::pair<int, std::optional<std::size_t>>> pending{{root, std::nullopt}};
    while (!pending.empty())
    {
        auto [seg_root, parent_seg] = pending.front();
        pending.pop_front();
        TreeSegment seg;
        seg.root = seg_root;
        seg.parent = parent_seg;
        const std::size_t index = segments.size();

        std::deque<std::pair<int, int>> frontier{{seg_root, 0}};
        while (!frontier.empty())
        {
            auto [cur, depth] = frontier.front();
            frontier.pop_front();
            seg.depth = std::max(seg.depth, depth);
            if (!children.contains(cur))
            {
                continue;
            }
            if (depth == max_depth)
            {
                pending.emplace_back(cur, index);
                continue;
            }
            for (int c : children.at(cur))
            {
                seg.edges.push_back(*edge_to_parent.at(c));
                frontier.emplace_back(c, depth + 1);
            }
        }
        segments.push_back(std::move(seg));
    }
    return segments;
}

void write_tree_csv(std::ostream& out, const SupervisorTree& tree)
{
    out << "u,v,length\n";
    for (const auto& e : tree.edges)
    {
        out << fmt::format("{},{},{:.17g}\n", e.u, e.v, e.length);
    }
}

std::string format_hops(std::span<const int> hops) { return fmt::format("{}", fmt::join(hops, ">")); }

}  // namespace gbdeer
