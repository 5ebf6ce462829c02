#include "floqsim/homology.hpp"
#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace floqsim {

Homology::Homology(const Tiling& tiling) : t(&tiling) {
    for (int f = 0; f < t->nf(); f++) bound.add(face_boundary(f));
    par.assign(t->nv, {-1, -1});
    std::vector<bool> seen(t->nv, false);
    seen[0] = true;
    std::deque<int> dq{0};
    std::set<int> tree;
    while (!dq.empty()) {
        int u = dq.front();
        dq.pop_front();
        std::vector<int> es = t->v2e[u];
        std::sort(es.begin(), es.end());
        for (int e : es) {
            int w = t->edges[e][0] == u ? t->edges[e][1] : t->edges[e][0];
            if (!seen[w]) {
                seen[w] = true;
                par[w] = {u, e};
                tree.insert(e);
                dq.push_back(w);
            }
        }
    }
    Echelon space;
    for (auto& [p, row] : bound.piv) space.add(row.first);
    for (int e = 0; e < t->ne(); e++) {
        if (tree.count(e)) continue;
        Bits m = Bits::one(size_t(e)) ^ tree_path(t->edges[e][0], t->edges[e][1]);
        if (space.add(m)) h1.push_back(m);
    }
    for (auto& [p, row] : bound.piv) coord.add(row.first, Bits());
    for (size_t i = 0; i < h1.size(); i++) coord.add(h1[i], Bits::one(i));
}

Bits Homology::face_boundary(int f) const {
    Bits m;
    for (int e : t->fedges[f]) m.flip(size_t(e));
    return m;
}

Bits Homology::tree_path(int a, int b) const {
    std::set<int> aset;
    for (int v = a;; v = par[v].first) {
        aset.insert(v);
        if (par[v].first < 0) break;
    }
    int lca = b;
    while (!aset.count(lca)) lca = par[lca].first;
    Bits m;
    for (int start : {a, b})
        for (int v = start; v != lca; v = par[v].first)
            m.flip(size_t(par[v].second));
    return m;
}

bool Homology::is_cycle(const Bits& m) const {
    std::vector<int> deg(t->nv, 0);
    m.for_each_set([&](size_t e) {
        deg[t->edges[e][0]]++;
        deg[t->edges[e][1]]++;
    });
    for (int d : deg)
        if (d % 2) return false;
    return true;
}

Bits Homology::klass(const Bits& m) const {
    auto [v, a] = coord.reduce(m);
    if (v.any()) throw std::runtime_error("edge set not in cycle space");
    return a;
}

Bits Homology::shorten(Bits m) const {
    bool improved = true;
    while (improved) {
        improved = false;
        for (int f = 0; f < t->nf(); f++) {
            Bits cand = m ^ face_boundary(f);
            if (cand.popcount() < m.popcount()) {
                m = cand;
                improved = true;
            }
        }
    }
    return m;
}

std::vector<std::vector<int>> cycle_components(const Tiling& t, const Bits& m) {
    std::map<int, std::vector<int>> inc;
    std::vector<int> es = m.to_indices();
    for (int e : es) {
        inc[t.edges[e][0]].push_back(e);
        inc[t.edges[e][1]].push_back(e);
    }
    for (auto& [v, l] : inc)
        if (l.size() != 2)
            throw std::runtime_error("edge set is not a disjoint union of cycles");
    std::set<int> unused(es.begin(), es.end());
    std::vector<std::vector<int>> walks;
    while (!unused.empty()) {
        int e0 = *unused.begin();
        unused.erase(unused.begin());
        int a = t.edges[e0][0], b = t.edges[e0][1];
        std::vector<int> walk{a, b};
        int cur = b, prev_e = e0;
        while (true) {
            int e = inc[cur][0] == prev_e ? inc[cur][1] : inc[cur][0];
            unused.erase(e);
            cur = t.edges[e][0] == cur ? t.edges[e][1] : t.edges[e][0];
            prev_e = e;
            if (cur == walk[0]) break;
            walk.push_back(cur);
        }
        walks.push_back(walk);
    }
    return walks;
}

namespace {

std::set<std::pair<int, int>> walk_darts(const std::vector<int>& walk) {
    std::set<std::pair<int, int>> d;
    size_t n = walk.size();
    for (size_t i = 0; i < n; i++) {
        d.insert({walk[i], walk[(i + 1) % n]});
        d.insert({walk[(i + 1) % n], walk[i]});
    }
    return d;
}

// crossing parity of two closed walks: contract shared segments, then test
// whether the four exit darts interleave around the contracted segment
int cross_parity(const Tiling& t, const std::vector<int>& w1,
                 const std::vector<int>& w2) {
    auto d1 = walk_darts(w1), d2 = walk_darts(w2);
    std::set<std::pair<int, int>> e1, e2;
    for (auto& [a, b] : d1) e1.insert({std::min(a, b), std::max(a, b)});
    for (auto& [a, b] : d2) e2.insert({std::min(a, b), std::max(a, b)});
    if (e1 == e2) return 0;
    std::set<std::pair<int, int>> shared;
    for (auto& e : e1)
        if (e2.count(e)) shared.insert(e);
    std::map<int, std::vector<int>> sv;
    for (auto& [a, b] : shared) {
        sv[a].push_back(b);
        sv[b].push_back(a);
    }
    std::set<std::pair<int, int>> seen_e;
    int parity = 0;
    for (auto& fs : shared) {
        if (seen_e.count(fs)) continue;
        std::deque<int> seg{fs.first, fs.second};
        seen_e.insert(fs);
        bool grew = true;
        while (grew) {
            grew = false;
            for (int side = 0; side < 2 && !grew; side++) {
                int end = side == 0 ? seg.front() : seg.back();
                for (int nb : sv[end]) {
                    auto key = std::make_pair(std::min(end, nb), std::max(end, nb));
                    if (seen_e.count(key)) continue;
                    seen_e.insert(key);
                    if (side == 0) seg.push_front(nb);
                    else seg.push_back(nb);
                    grew = true;
                    break;
                }
            }
        }
        int u = seg.front(), w = seg.back();
        int su = seg[1], sw = seg[seg.size() - 2];
        auto off = [&](const std::set<std::pair<int, int>>& dset, int v,
                       int s) -> int {
            int hit = -1, cnt = 0;
            for (int x : t.rot[v])
                if (x != s && dset.count({v, x})) {
                    hit = x;
                    cnt++;
                }
            if (cnt != 1)
                throw std::runtime_error("segment end has no unique exit dart");
            return hit;
        };
        int o1u = off(d1, u, su), o2u = off(d2, u, su);
        int o1w = off(d1, w, sw), o2w = off(d2, w, sw);
        int iu = 0;
        while (t.rot[u][iu] != su) iu++;
        int p = t.rot[u][(iu + 1) % 3], q = t.rot[u][(iu + 2) % 3];
        int iw = 0;
        while (t.rot[w][iw] != sw) iw++;
        int r = t.rot[w][(iw + 1) % 3], s2 = t.rot[w][(iw + 2) % 3];
        // cyclic order around the contracted segment: u-side CCW then w-side
        std::pair<char, int> D[4] = {{'u', p}, {'u', q}, {'w', r}, {'w', s2}};
        std::vector<int> m1, m2;
        for (int i = 0; i < 4; i++) {
            bool hit1 = (D[i].first == 'u' && D[i].second == o1u) ||
                        (D[i].first == 'w' && D[i].second == o1w);
            bool hit2 = (D[i].first == 'u' && D[i].second == o2u) ||
                        (D[i].first == 'w' && D[i].second == o2w);
            if (hit1) m1.push_back(i);
            if (hit2) m2.push_back(i);
        }
        if (m1.size() != 2 || m2.size() != 2)
            throw std::runtime_error("exit darts not found around segment");
        int c = 0;
        for (int x : m2)
            if (m1[0] < x && x < m1[1]) c++;
        parity ^= c & 1;
    }
    return parity;
}

} // namespace

int intersection(const Tiling& t, const Bits& ma, const Bits& mb) {
    int p = 0;
    for (auto& u : cycle_components(t, ma))
        for (auto& v : cycle_components(t, mb)) p ^= cross_parity(t, u, v);
    return p;
}

HomologyBasis homology_basis(const Tiling& t) {
    Homology H(t);
    int g = t.genus();
    if (H.rank_h1() != 2 * g)
        throw std::runtime_error("homology rank " + std::to_string(H.rank_h1()) +
                                 " != 2g");
    HomologyBasis out;
    for (auto& m : H.h1) {
        Bits s = H.shorten(m);
        if (!H.is_cycle(s)) throw std::runtime_error("shortened loop not a cycle");
        out.loops.push_back(s);
        out.walks.push_back(cycle_components(t, s));
    }
    size_t n = out.loops.size();
    out.J.assign(n, std::vector<uint8_t>(n, 0));
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++)
            out.J[i][j] = uint8_t(intersection(t, out.loops[i], out.loops[j]));
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++)
            if (out.J[i][j] != out.J[j][i])
                throw std::runtime_error("intersection matrix not symmetric");
    if (f2_det(out.J) != 1)
        throw std::runtime_error("intersection matrix singular over F2");
    return out;
}

std::vector<StringOp> skeleton_strings(const Tiling& t, int color) {
    std::vector<int> cf;
    for (int f = 0; f < t.nf(); f++)
        if (t.fcol[f] == color) cf.push_back(f);
    std::map<int, int> vface, node;
    for (size_t i = 0; i < cf.size(); i++) {
        node[cf[i]] = int(i);
        for (int v : t.faces[cf[i]]) vface[v] = cf[i];
    }
    struct Link {
        int x, y, ei;
    };
    std::vector<Link> links;
    std::map<int, std::vector<std::pair<int, int>>> adj; // node -> (other, link)
    for (int ei = 0; ei < t.ne(); ei++) {
        if (t.ecol[ei] != color) continue;
        int li = int(links.size());
        int x = node.at(vface.at(t.edges[ei][0]));
        int y = node.at(vface.at(t.edges[ei][1]));
        links.push_back({x, y, ei});
        adj[x].push_back({y, li});
        adj[y].push_back({x, li});
    }
    std::map<int, std::pair<int, int>> par; // node -> (parent node, link)
    par[0] = {-1, -1};
    std::deque<int> dq{0};
    std::set<int> tree_links;
    while (!dq.empty()) {
        int u = dq.front();
        dq.pop_front();
        auto nbrs = adj[u];
        std::sort(nbrs.begin(), nbrs.end());
        for (auto [w, li] : nbrs) {
            if (par.count(w)) continue;
            par[w] = {u, li};
            tree_links.insert(li);
            dq.push_back(w);
        }
    }
    if (par.size() != cf.size())
        throw std::runtime_error("color skeleton disconnected");

    // lift a directed closed skeleton walk back to a lattice cycle
    auto lift = [&](const std::vector<std::array<int, 3>>& step) -> Bits {
        Bits m;
        size_t k = step.size();
        std::vector<int> exits(k), entries(k);
        for (size_t i = 0; i < k; i++) {
            auto [nf, li, nt] = step[i];
            int ei = links[li].ei;
            m.flip(size_t(ei));
            int a = t.edges[ei][0], b = t.edges[ei][1];
            int ffrom = cf[nf], fto = cf[nt];
            int ex, en;
            if (ffrom != fto) {
                ex = vface.at(a) == ffrom ? a : b;
                en = ex == a ? b : a;
            } else {
                ex = a;
                en = b;
            }
            exits[i] = ex;
            entries[i] = en;
        }
        for (size_t i = 0; i < k; i++) {
            int f = cf[step[i][2]];
            int v_in = entries[i], v_out = exits[(i + 1) % k];
            if (v_in == v_out) continue;
            auto& cyc = t.faces[f];
            size_t n = cyc.size();
            size_t i0 = 0, i1 = 0;
            while (cyc[i0] != v_in) i0++;
            while (cyc[i1] != v_out) i1++;
            for (size_t j = i0; j != i1; j = (j + 1) % n)
                m.flip(size_t(t.edge_index(cyc[j], cyc[(j + 1) % n])));
        }
        return m;
    };

    std::vector<StringOp> out;
    for (size_t li = 0; li < links.size(); li++) {
        if (tree_links.count(int(li))) continue;
        int x = links[li].x, y = links[li].y;
        std::set<int> aset;
        for (int v = x;; v = par[v].first) {
            aset.insert(v);
            if (par[v].first < 0) break;
        }
        std::vector<std::array<int, 3>> step{{x, int(li), y}};
        int v = y;
        while (!aset.count(v)) {
            auto [u, l2] = par[v];
            step.push_back({v, l2, u});
            v = u;
        }
        int lca = v;
        std::vector<std::array<int, 3>> down;
        for (int u = x; u != lca;) {
            auto [uu, l2] = par[u];
            down.push_back({uu, l2, u});
            u = uu;
        }
        for (auto it = down.rbegin(); it != down.rend(); ++it) step.push_back(*it);
        StringOp s;
        for (auto& h : step) s.hop_edges.push_back(links[h[1]].ei);
        s.lifted = lift(step);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace floqsim
