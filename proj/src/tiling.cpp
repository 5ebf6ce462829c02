#include "floqsim/tiling.hpp"
#include <algorithm>
#include <cassert>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace floqsim {

char color_char(int c) {
    assert(c >= 0 && c < 3);
    return "rgb"[c];
}

int color_of_char(char c) {
    switch (c) {
    case 'r': return 0;
    case 'g': return 1;
    case 'b': return 2;
    }
    throw std::runtime_error(std::string("bad color char '") + c + "'");
}

int Tiling::edge_index(int a, int b) const {
    auto it = eidx.find({std::min(a, b), std::max(a, b)});
    if (it == eidx.end()) throw std::runtime_error("no such edge");
    return it->second;
}

int Tiling::genus() const {
    int chi = nv - ne() + nf();
    if (chi % 2) throw std::runtime_error("odd Euler characteristic");
    return (2 - chi) / 2;
}

int genus_formula(int p, int q, int num_edges) {
    if (p < 3 || q < 3 || num_edges <= 0)
        throw std::runtime_error("invalid tiling parameters");
    // g = 1 - E(1/p + 1/q - 1/2) = (2pq - E(2q + 2p - pq)) / (2pq)
    long long denom = 2LL * p * q;
    long long num = denom - (long long)num_edges * (2 * q + 2 * p - p * q);
    if (num % denom != 0 || num < 0)
        throw std::runtime_error("invalid tiling parameters: genus not a "
                                 "non-negative integer");
    return int(num / denom);
}

void Tiling::finalize() {
    for (auto& e : edges)
        if (e[0] > e[1]) std::swap(e[0], e[1]);
    eidx.clear();
    for (int i = 0; i < ne(); i++) {
        auto key = std::make_pair(edges[i][0], edges[i][1]);
        if (eidx.count(key)) throw std::runtime_error("duplicate edge in tiling");
        eidx[key] = i;
    }
    fedges.assign(faces.size(), {});
    for (int fi = 0; fi < nf(); fi++) {
        auto& f = faces[fi];
        for (size_t i = 0; i < f.size(); i++)
            fedges[fi].push_back(edge_index(f[i], f[(i + 1) % f.size()]));
    }
    e2f.assign(ne(), {-1, -1});
    for (int fi = 0; fi < nf(); fi++)
        for (int ei : fedges[fi]) {
            if (e2f[ei][0] < 0) e2f[ei][0] = fi;
            else if (e2f[ei][1] < 0) e2f[ei][1] = fi;
            else throw std::runtime_error("edge on more than two faces");
        }
    ecol.assign(ne(), -1);
    for (int ei = 0; ei < ne(); ei++) {
        if (e2f[ei][1] < 0) throw std::runtime_error("edge on fewer than two faces");
        int c = 3 - fcol[e2f[ei][0]] - fcol[e2f[ei][1]];
        ecol[ei] = c; // may land outside 0..2 when face colors clash; validator reports it
    }
    v2e.assign(nv, {});
    for (int ei = 0; ei < ne(); ei++) {
        v2e[edges[ei][0]].push_back(ei);
        v2e[edges[ei][1]].push_back(ei);
    }
    v2f.assign(nv, {});
    for (int fi = 0; fi < nf(); fi++)
        for (int v : faces[fi]) v2f[v].push_back(fi);

    // rotation from face traces: in a face ... u, v, w ... the dart (v,w)
    // follows (u,v), so w comes after u in rot[v]
    std::vector<std::map<int, int>> succ(nv);
    for (auto& f : faces) {
        size_t m = f.size();
        for (size_t i = 0; i < m; i++) {
            int u = f[i], v = f[(i + 1) % m], w = f[(i + 2) % m];
            if (succ[v].count(u)) throw std::runtime_error("dart traced twice");
            succ[v][u] = w;
        }
    }
    rot.assign(nv, {-1, -1, -1});
    for (int v = 0; v < nv; v++) {
        if (succ[v].size() != 3) continue; // validator reports degree breakage
        int a = succ[v].begin()->first;
        int b = succ[v][a], c = succ[v][b];
        if (succ[v][c] != a) throw std::runtime_error("rotation not a 3-cycle");
        rot[v] = {a, b, c};
    }
}

std::vector<std::vector<int>> trace_faces(
    int nv, const std::vector<std::array<int, 2>>& edges,
    const std::vector<std::array<int, 3>>& rot) {
    (void)nv;
    std::set<std::pair<int, int>> used;
    std::vector<std::pair<int, int>> darts;
    for (auto& e : edges) {
        darts.push_back({e[0], e[1]});
        darts.push_back({e[1], e[0]});
    }
    std::sort(darts.begin(), darts.end());
    std::vector<std::vector<int>> out;
    for (auto d0 : darts) {
        if (used.count(d0)) continue;
        std::vector<int> cyc;
        auto d = d0;
        while (true) {
            used.insert(d);
            cyc.push_back(d.first);
            auto [u, v] = d;
            int i = 0;
            while (rot[v][i] != u) i++;
            d = {v, rot[v][(i + 1) % 3]};
            if (d == d0) break;
        }
        out.push_back(cyc);
    }
    return out;
}

std::vector<std::string> validate_tiling(const Tiling& t) {
    std::vector<std::string> errs;
    auto add = [&](const std::string& s) { errs.push_back(s); };
    if (3 * t.nv != 2 * t.ne())
        add("3|V| != 2|E|");
    size_t fsum = 0;
    for (auto& f : t.faces) fsum += f.size();
    if (fsum != 2 * size_t(t.ne()))
        add("face size sum != 2|E|");
    for (int v = 0; v < t.nv; v++) {
        if (t.v2e[v].size() != 3) {
            add("vertex " + std::to_string(v) + " degree " +
                std::to_string(t.v2e[v].size()));
            continue;
        }
        std::vector<int> cs, fs;
        for (int e : t.v2e[v]) cs.push_back(t.ecol[e]);
        for (int f : t.v2f[v]) fs.push_back(t.fcol[f]);
        std::sort(cs.begin(), cs.end());
        std::sort(fs.begin(), fs.end());
        if (cs != std::vector<int>{0, 1, 2})
            add("vertex " + std::to_string(v) + " edge colors not {r,g,b}");
        if (fs != std::vector<int>{0, 1, 2})
            add("vertex " + std::to_string(v) + " face colors not {r,g,b}");
    }
    for (int e = 0; e < t.ne(); e++) {
        auto [f1, f2] = t.e2f[e];
        if (t.fcol[f1] == t.fcol[f2])
            add("adjacent faces " + std::to_string(f1) + "," +
                std::to_string(f2) + " share color");
        if (t.ecol[e] == t.fcol[f1] || t.ecol[e] == t.fcol[f2])
            add("edge " + std::to_string(e) + " color clashes with incident face");
    }
    for (int fi = 0; fi < t.nf(); fi++) {
        if (t.faces[fi].size() % 2)
            add("face " + std::to_string(fi) + " odd size");
        auto& fe = t.fedges[fi];
        for (size_t i = 0; i < fe.size(); i++)
            if (t.ecol[fe[i]] == t.ecol[fe[(i + 1) % fe.size()]])
                add("face " + std::to_string(fi) +
                    " consecutive boundary edges share color");
    }
    for (int c = 0; c < 3; c++) {
        std::set<int> cover;
        int cnt = 0;
        for (int e = 0; e < t.ne(); e++)
            if (t.ecol[e] == c) {
                cnt++;
                cover.insert(t.edges[e][0]);
                cover.insert(t.edges[e][1]);
            }
        if (int(cover.size()) != t.nv || cnt * 2 != t.nv)
            add(std::string("color ") + color_char(c) + " edges not a perfect matching");
    }
    if ((t.nv - t.ne() + t.nf()) % 2)
        add("odd Euler characteristic");
    if (t.ell == 1) {
        for (int fi = 0; fi < t.nf(); fi++)
            if (int(t.faces[fi].size()) != t.p)
                add("base face " + std::to_string(fi) + " is not a " +
                    std::to_string(t.p) + "-gon");
    } else {
        for (int fi = 0; fi < t.nf(); fi++) {
            size_t s = t.faces[fi].size();
            if (s != 6 && int(s) != t.p)
                add("refined face " + std::to_string(fi) + " has size " +
                    std::to_string(s));
        }
    }
    return errs;
}

// ------------------------------------------------------------- hcf16
// Generalized Petersen graph GP(8,3): outer octagon, spokes, inner star.
// The flip set picks the orientation making all traced faces octagons.
static const std::set<int> kHcf16Flip = {1, 2, 3, 4, 5, 6, 11, 12};

Tiling base_hcf16() {
    std::vector<std::array<int, 2>> edges;
    for (int i = 0; i < 8; i++) edges.push_back({i, (i + 1) % 8});
    for (int i = 0; i < 8; i++) edges.push_back({i, 8 + i});
    for (int i = 0; i < 8; i++) {
        int a = 8 + i, b = 8 + ((i + 3) % 8);
        edges.push_back({std::min(a, b), std::max(a, b)});
    }
    std::vector<std::vector<int>> nbr(16);
    for (auto& e : edges) {
        nbr[e[0]].push_back(e[1]);
        nbr[e[1]].push_back(e[0]);
    }
    std::vector<std::array<int, 3>> rot(16);
    for (int v = 0; v < 16; v++) {
        std::sort(nbr[v].begin(), nbr[v].end());
        if (kHcf16Flip.count(v)) rot[v] = {nbr[v][0], nbr[v][2], nbr[v][1]};
        else rot[v] = {nbr[v][0], nbr[v][1], nbr[v][2]};
    }
    auto faces = trace_faces(16, edges, rot);
    if (faces.size() != 6)
        throw std::runtime_error("hcf16 trace did not give 6 faces");
    for (auto& f : faces)
        if (f.size() != 8) throw std::runtime_error("hcf16 face not an octagon");

    // face adjacency, then 3-color by backtracking
    std::vector<std::set<int>> fe(6);
    std::map<std::pair<int, int>, int> ei;
    for (size_t i = 0; i < edges.size(); i++) ei[{edges[i][0], edges[i][1]}] = int(i);
    for (int fi = 0; fi < 6; fi++)
        for (size_t i = 0; i < faces[fi].size(); i++) {
            int a = faces[fi][i], b = faces[fi][(i + 1) % faces[fi].size()];
            fe[fi].insert(ei[{std::min(a, b), std::max(a, b)}]);
        }
    bool adj[6][6] = {};
    for (int i = 0; i < 6; i++)
        for (int j = i + 1; j < 6; j++) {
            std::vector<int> inter;
            std::set_intersection(fe[i].begin(), fe[i].end(), fe[j].begin(),
                                  fe[j].end(), std::back_inserter(inter));
            adj[i][j] = adj[j][i] = !inter.empty();
        }
    std::vector<int> col(6, -1);
    auto go = [&](auto&& self, int i) -> bool {
        if (i == 6) return true;
        for (int c = 0; c < 3; c++) {
            bool ok = true;
            for (int j = 0; j < i; j++)
                if (adj[i][j] && col[j] == c) ok = false;
            if (!ok) continue;
            col[i] = c;
            if (self(self, i + 1)) return true;
        }
        col[i] = -1;
        return false;
    };
    if (!go(go, 0)) throw std::runtime_error("hcf16 faces not 3-colorable");

    Tiling t;
    t.p = 8;
    t.q = 3;
    t.ell = 1;
    t.nv = 16;
    t.edges = edges;
    t.faces = faces;
    t.fcol = col;
    t.finalize();
    return t;
}

// ------------------------------------------------------------- refinement
// Dual triangulate, subdivide each dual triangle ell x ell, dual back.
namespace {

struct RefineCtx {
    const Tiling& t;
    int ell;
    std::vector<std::array<int, 3>> tri; // corner faces per vertex, rotation order
    std::map<std::array<long long, 5>, int> mid;
    std::map<int, int> mcol;

    explicit RefineCtx(const Tiling& tt, int l) : t(tt), ell(l) {
        for (int v = 0; v < t.nv; v++) {
            std::array<int, 3> fs{};
            for (int i = 0; i < 3; i++) {
                int u = t.rot[v][i], w = t.rot[v][(i + 1) % 3];
                int e1 = t.edge_index(v, u), e2 = t.edge_index(v, w);
                int shared = -1;
                for (int fa : t.e2f[e1])
                    for (int fb : t.e2f[e2])
                        if (fa == fb) shared = fa;
                if (shared < 0) throw std::runtime_error("corner faces disjoint");
                fs[i] = shared;
            }
            tri.push_back(fs);
        }
    }

    int side_eid(int v, int f1, int f2) const {
        for (int e : t.v2e[v]) {
            auto [a, b] = t.e2f[e];
            if ((a == f1 && b == f2) || (a == f2 && b == f1)) return e;
        }
        throw std::runtime_error("no side edge");
    }

    std::array<long long, 5> key(int v, int i, int j) const {
        auto [fA, fB, fC] = tri[v];
        if (i == 0 && j == 0) return {0, fA, 0, 0, 0};
        if (i == ell && j == 0) return {0, fB, 0, 0, 0};
        if (i == 0 && j == ell) return {0, fC, 0, 0, 0};
        if (j == 0) {
            auto [a, b, k] = fA < fB ? std::array<int, 3>{fA, fB, i}
                                     : std::array<int, 3>{fB, fA, ell - i};
            return {1, side_eid(v, fA, fB), a, b, k};
        }
        if (i == 0) {
            auto [a, b, k] = fA < fC ? std::array<int, 3>{fA, fC, j}
                                     : std::array<int, 3>{fC, fA, ell - j};
            return {1, side_eid(v, fA, fC), a, b, k};
        }
        if (i + j == ell) {
            auto [a, b, k] = fB < fC ? std::array<int, 3>{fB, fC, j}
                                     : std::array<int, 3>{fC, fB, ell - j};
            return {1, side_eid(v, fB, fC), a, b, k};
        }
        return {2, v, i, j, 0};
    }

    int gid(int v, int i, int j) {
        auto k = key(v, i, j);
        auto it = mid.find(k);
        if (it != mid.end()) return it->second;
        int id = int(mid.size());
        mid[k] = id;
        return id;
    }
};

} // namespace

Tiling refine(const Tiling& t, int ell) {
    if (ell < 1) throw std::runtime_error("refinement level must be >= 1");
    if (ell == 1) return t;
    RefineCtx ctx(t, ell);

    // corner color rule: affine interpolation when ell has an inverse mod 3,
    // otherwise monochrome corners with a bipartition-chirality interior
    std::vector<int> side;
    int inv = 0;
    if (ell % 3 != 0) {
        inv = (ell % 3 == 1) ? 1 : 2;
    } else {
        side.assign(t.nv, -1);
        side[0] = 0;
        std::deque<int> dq{0};
        while (!dq.empty()) {
            int u = dq.front();
            dq.pop_front();
            for (int e : t.v2e[u]) {
                int w = t.edges[e][0] == u ? t.edges[e][1] : t.edges[e][0];
                if (side[w] < 0) {
                    side[w] = 1 - side[u];
                    dq.push_back(w);
                } else if (side[w] == side[u]) {
                    throw std::runtime_error(
                        "base graph not bipartite; ell divisible by 3 unrefinable");
                }
            }
        }
    }
    auto colr = [&](int v, int i, int j) -> int {
        if (ell % 3 != 0) {
            int cA = t.fcol[ctx.tri[v][0]], cB = t.fcol[ctx.tri[v][1]],
                cC = t.fcol[ctx.tri[v][2]];
            long long x = cA + (long long)(cB - cA) * inv * i +
                          (long long)(cC - cA) * inv * j;
            return int(((x % 3) + 3) % 3);
        }
        int s = side[v] == 0 ? 1 : 2;
        return (s * (i + 2 * j)) % 3;
    };

    std::vector<std::array<int, 3>> rv_corners;
    std::map<std::pair<int, int>, std::vector<int>> micro_of_edge;
    auto add_tri = [&](int c0, int c1, int c2) {
        int vid = int(rv_corners.size());
        rv_corners.push_back({c0, c1, c2});
        for (auto [a, b] : {std::pair{c0, c1}, {c1, c2}, {c2, c0}})
            micro_of_edge[{std::min(a, b), std::max(a, b)}].push_back(vid);
    };

    for (int v = 0; v < t.nv; v++)
        for (int i = 0; i < ell; i++)
            for (int j = 0; j < ell - i; j++) {
                int a = ctx.gid(v, i, j);
                int b = ctx.gid(v, i + 1, j);
                int c = ctx.gid(v, i, j + 1);
                add_tri(a, b, c);
                if (i + j < ell - 1) {
                    int d = ctx.gid(v, i + 1, j + 1);
                    add_tri(b, d, c);
                }
            }

    for (int v = 0; v < t.nv; v++)
        for (int i = 0; i <= ell; i++)
            for (int j = 0; j <= ell - i; j++) {
                int g = ctx.gid(v, i, j);
                if (!ctx.mcol.count(g)) ctx.mcol[g] = colr(v, i, j);
            }

    int nrv = int(rv_corners.size());
    std::vector<std::array<int, 2>> redges;
    std::map<std::pair<int, int>, int> reidx;
    for (auto& [me, vids] : micro_of_edge) {
        if (vids.size() != 2)
            throw std::runtime_error("micro edge not shared by two triangles");
        std::array<int, 2> e{std::min(vids[0], vids[1]), std::max(vids[0], vids[1])};
        if (!reidx.count({e[0], e[1]})) {
            reidx[{e[0], e[1]}] = int(redges.size());
            redges.push_back(e);
        }
    }
    std::vector<std::array<int, 3>> rrot(nrv);
    for (int vid = 0; vid < nrv; vid++) {
        auto [c0, c1, c2] = rv_corners[vid];
        int k = 0;
        for (auto [a, b] : {std::pair{c0, c1}, {c1, c2}, {c2, c0}}) {
            auto& vids = micro_of_edge[{std::min(a, b), std::max(a, b)}];
            rrot[vid][k++] = vids[0] == vid ? vids[1] : vids[0];
        }
    }
    auto rfaces = trace_faces(nrv, redges, rrot);
    std::vector<int> rfcol;
    for (auto& f : rfaces) {
        std::set<int> common(rv_corners[f[0]].begin(), rv_corners[f[0]].end());
        for (size_t i = 1; i < f.size(); i++) {
            std::set<int> nxt;
            for (int c : rv_corners[f[i]])
                if (common.count(c)) nxt.insert(c);
            common = nxt;
        }
        if (common.size() != 1)
            throw std::runtime_error("refined face has no unique corner");
        rfcol.push_back(ctx.mcol.at(*common.begin()));
    }

    Tiling out;
    out.p = t.p;
    out.q = t.q;
    out.ell = t.ell * ell;
    out.nv = nrv;
    out.edges = redges;
    out.faces = rfaces;
    out.fcol = rfcol;
    out.finalize();
    return out;
}

// ------------------------------------------------------------- file io
std::string emit_lattice(const Tiling& t) {
    std::ostringstream os;
    os << "p " << t.p << "\n";
    os << "q " << t.q << "\n";
    os << "refinement_level " << t.ell << "\n";
    os << "vertex_count " << t.nv << "\n";
    os << "edges " << t.ne() << "\n";
    for (auto& e : t.edges) {
        int ei = t.eidx.at({e[0], e[1]});
        os << e[0] << " " << e[1] << " " << color_char(t.ecol[ei]) << "\n";
    }
    os << "faces " << t.nf() << "\n";
    for (int fi = 0; fi < t.nf(); fi++) {
        os << color_char(t.fcol[fi]);
        for (int v : t.faces[fi]) os << " " << v;
        os << "\n";
    }
    return os.str();
}

Tiling parse_lattice(const std::string& text) {
    std::istringstream is(text);
    Tiling t;
    std::string key;
    int edge_count = -1, face_count = -1;
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) throw std::runtime_error("lattice parse error: " + what);
    };
    need(bool(is >> key) && key == "p" && bool(is >> t.p), "header p");
    need(bool(is >> key) && key == "q" && bool(is >> t.q), "header q");
    need(bool(is >> key) && key == "refinement_level" && bool(is >> t.ell),
         "header refinement_level");
    need(bool(is >> key) && key == "vertex_count" && bool(is >> t.nv),
         "header vertex_count");
    need(bool(is >> key) && key == "edges" && bool(is >> edge_count), "edge count");
    std::vector<int> file_ecol;
    for (int i = 0; i < edge_count; i++) {
        int a, b;
        char c;
        need(bool(is >> a >> b >> c), "edge line " + std::to_string(i));
        need(a >= 0 && a < t.nv && b >= 0 && b < t.nv && a != b,
             "edge endpoints line " + std::to_string(i));
        t.edges.push_back({std::min(a, b), std::max(a, b)});
        file_ecol.push_back(color_of_char(c));
    }
    need(bool(is >> key) && key == "faces" && bool(is >> face_count), "face count");
    for (int i = 0; i < face_count; i++) {
        char c;
        need(bool(is >> c), "face color line " + std::to_string(i));
        t.fcol.push_back(color_of_char(c));
        std::string rest;
        std::getline(is, rest);
        std::istringstream ls(rest);
        std::vector<int> cyc;
        int v;
        while (ls >> v) {
            need(v >= 0 && v < t.nv, "face vertex line " + std::to_string(i));
            cyc.push_back(v);
        }
        need(cyc.size() >= 3, "face too small line " + std::to_string(i));
        t.faces.push_back(cyc);
    }
    t.finalize();
    for (int e = 0; e < t.ne(); e++)
        if (t.ecol[e] != file_ecol[e])
            throw std::runtime_error(
                "edge " + std::to_string(e) +
                " color in file disagrees with incident faces");
    return t;
}

Tiling build_base_lattice(const std::string& name_or_path) {
    Tiling t;
    if (name_or_path == "hcf16") {
        t = base_hcf16();
    } else {
        std::ifstream f(name_or_path);
        if (!f) throw std::runtime_error("unknown lattice '" + name_or_path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        t = parse_lattice(ss.str());
    }
    auto errs = validate_tiling(t);
    if (!errs.empty())
        throw std::runtime_error("lattice invariant violation: " + errs.front());
    return t;
}

} // namespace floqsim
