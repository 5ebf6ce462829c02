#include "floqsim/dem.hpp"
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace floqsim {

static const char* kPauliPairs[15] = {
    "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI",
    "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ"};

static Fault pair_fault(const MeasurementCircuit& c, int time, int e, int k) {
    Fault f;
    f.time = time;
    int a = c.t.edges[size_t(e)][0], b = c.t.edges[size_t(e)][1];
    const char* pp = kPauliPairs[k];
    for (int i = 0; i < 2; i++) {
        char pc = pp[i];
        int q = i == 0 ? a : b;
        if (pc == 'X' || pc == 'Y') f.x.set(size_t(q));
        if (pc == 'Z' || pc == 'Y') f.z.set(size_t(q));
    }
    return f;
}

std::vector<std::pair<double, Fault>> site_faults(const MeasurementCircuit& c,
                                                  const NoiseSite& s) {
    std::vector<std::pair<double, Fault>> out;
    switch (s.kind) {
        case SiteKind::Prep: {
            Fault f;
            f.time = 0;
            if (c.beta == 'Z') f.x.set(size_t(s.loc));
            else f.z.set(size_t(s.loc));
            out.push_back({s.prob, std::move(f)});
            break;
        }
        case SiteKind::Depol2:
            for (int k = 0; k < 15; k++)
                out.push_back({s.prob / 15, pair_fault(c, s.time, s.loc, k)});
            break;
        case SiteKind::MeasFlip: {
            Fault f;
            f.time = s.time;
            f.flip_out = c.out_of(s.time, s.loc);
            out.push_back({s.prob, std::move(f)});
            break;
        }
        case SiteKind::Corr: {
            int flip_idx = c.out_of(s.time, s.loc);
            for (int k = 0; k < 15; k++)
                out.push_back({s.prob / 31, pair_fault(c, s.time, s.loc, k)});
            for (int k = 0; k < 15; k++) {
                Fault f = pair_fault(c, s.time, s.loc, k);
                f.flip_out = flip_idx;
                out.push_back({s.prob / 31, std::move(f)});
            }
            Fault f;
            f.time = s.time;
            f.flip_out = flip_idx;
            out.push_back({s.prob / 31, std::move(f)});
            break;
        }
        case SiteKind::Idle:
            for (char pc : {'X', 'Y', 'Z'}) {
                Fault f;
                f.time = s.time;
                if (pc == 'X' || pc == 'Y') f.x.set(size_t(s.loc));
                if (pc == 'Z' || pc == 'Y') f.z.set(size_t(s.loc));
                out.push_back({s.prob / 3, std::move(f)});
            }
            break;
    }
    return out;
}

DetectorErrorModel compile_dem(const MeasurementCircuit& c) {
    if (c.noise_model.empty())
        throw std::runtime_error("circuit carries no noise annotations");
    if (c.detectors.empty())
        throw std::runtime_error("circuit carries no detectors");
    std::map<FaultSignature, std::pair<double, std::vector<SiteRef>>> acc;
    for (const NoiseSite& site : c.noise) {
        auto faults = site_faults(c, site);
        for (size_t k = 0; k < faults.size(); k++) {
            auto& [prob, fault] = faults[k];
            FaultSignature sig = signature(c, frame_flips(c, fault));
            if (sig.dets.empty() && sig.obs == 0) continue;
            auto it = acc.find(sig);
            if (it == acc.end()) {
                acc[sig] = {prob, {{site.kind, site.time, site.loc, int(k)}}};
            } else {
                double& q = it->second.first;
                q = q * (1 - prob) + prob * (1 - q);
                it->second.second.push_back(
                    {site.kind, site.time, site.loc, int(k)});
            }
        }
    }
    DetectorErrorModel dem;
    dem.num_detectors = int(c.detectors.size());
    dem.num_observables = int(c.observables.size());
    for (auto& [sig, pv] : acc)
        dem.mechanisms.push_back({sig.dets, sig.obs, pv.first,
                                  std::move(pv.second)});
    return dem;
}

std::map<int, std::pair<long long, double>> weight_histogram(
    const DetectorErrorModel& dem) {
    std::map<int, std::pair<long long, double>> h;
    for (const auto& m : dem.mechanisms) h[int(m.dets.size())].first++;
    for (auto& [w, cf] : h)
        cf.second = double(cf.first) / double(dem.mechanisms.size());
    return h;
}

std::string emit_dem(const DetectorErrorModel& dem) {
    std::ostringstream os;
    os << "dem detectors " << dem.num_detectors << " observables "
       << dem.num_observables << "\n";
    char buf[64];
    for (const auto& m : dem.mechanisms) {
        std::snprintf(buf, sizeof buf, "%.17g", m.p);
        os << "error " << buf << " :";
        for (int d : m.dets) os << " D" << d;
        for (int i = 0; i < dem.num_observables; i++)
            if (m.obs >> i & 1) os << " L" << i;
        os << "\n";
    }
    os << "end\n";
    return os.str();
}

DetectorErrorModel parse_dem(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    DetectorErrorModel dem;
    if (!(is >> tok) || tok != "dem") throw std::runtime_error("not a dem file");
    if (!(is >> tok >> dem.num_detectors) || tok != "detectors")
        throw std::runtime_error("bad dem header");
    if (!(is >> tok >> dem.num_observables) || tok != "observables")
        throw std::runtime_error("bad dem header");
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line == "end") return dem;
        std::istringstream ls(line);
        FaultMechanism m;
        if (!(ls >> tok >> m.p) || tok != "error")
            throw std::runtime_error("bad dem line: " + line);
        ls >> tok; // ":"
        while (ls >> tok) {
            if (tok[0] == 'D') m.dets.push_back(std::stoi(tok.substr(1)));
            else if (tok[0] == 'L') m.obs |= uint32_t(1) << std::stoi(tok.substr(1));
            else throw std::runtime_error("bad dem token: " + tok);
        }
        dem.mechanisms.push_back(std::move(m));
    }
    throw std::runtime_error("missing dem end marker");
}

// ---------------------------------------------------------- decomposition

namespace {

struct LowIndex {
    // existing 1- and 2-detector signatures with their observable variants
    std::map<std::vector<int>, std::vector<std::pair<uint32_t, double>>> low;
    std::map<int, std::vector<const std::vector<int>*>> by_det;

    explicit LowIndex(const DetectorErrorModel& dem) {
        for (const auto& m : dem.mechanisms) {
            if (m.dets.empty() || m.dets.size() > 2) continue;
            low[m.dets].push_back({m.obs, m.p});
        }
        for (auto& [k, v] : low) {
            std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
                return a.second != b.second ? a.second > b.second
                                            : a.first < b.first;
            });
            for (int d : k) by_det[d].push_back(&k);
        }
    }
};

using Partition = std::vector<const std::vector<int>*>;

void enum_partitions(const LowIndex& ix, std::set<int>& remaining,
                     Partition& cur, std::vector<Partition>& out) {
    if (remaining.empty()) {
        out.push_back(cur);
        return;
    }
    int d0 = *remaining.begin();
    auto it = ix.by_det.find(d0);
    if (it == ix.by_det.end()) return;
    for (const std::vector<int>* key : it->second) {
        bool ok = true;
        for (int d : *key)
            if (!remaining.count(d)) { ok = false; break; }
        if (!ok) continue;
        for (int d : *key) remaining.erase(d);
        cur.push_back(key);
        enum_partitions(ix, remaining, cur, out);
        cur.pop_back();
        for (int d : *key) remaining.insert(d);
    }
}

// best-probability observable-variant assignment reaching `target`
struct ObsChoice {
    bool ok = false;
    double score = 0;
    std::vector<uint32_t> obs; // per part
};

ObsChoice match_obs(const LowIndex& ix, const Partition& parts,
                    uint32_t target) {
    std::map<uint32_t, std::pair<double, std::vector<uint32_t>>> dp;
    dp[0] = {0.0, {}};
    for (const std::vector<int>* key : parts) {
        std::map<uint32_t, std::pair<double, std::vector<uint32_t>>> nx;
        const auto& variants = ix.low.at(*key);
        for (auto& [mask, sc] : dp) {
            for (auto& [obs, p] : variants) {
                uint32_t nm = mask ^ obs;
                double ns = sc.first + std::log(p);
                auto it = nx.find(nm);
                if (it == nx.end() || ns > it->second.first) {
                    auto ch = sc.second;
                    ch.push_back(obs);
                    nx[nm] = {ns, std::move(ch)};
                }
            }
        }
        dp = std::move(nx);
    }
    auto it = dp.find(target);
    if (it == dp.end()) return {};
    return {true, it->second.first, it->second.second};
}

} // namespace

std::vector<Decomposition> decompose_hyperedges(const DetectorErrorModel& dem) {
    LowIndex ix(dem);
    std::vector<Decomposition> out;
    for (size_t mi = 0; mi < dem.mechanisms.size(); mi++) {
        const auto& m = dem.mechanisms[mi];
        if (m.dets.size() < 3) continue;
        std::set<int> rem(m.dets.begin(), m.dets.end());
        std::vector<Partition> parts_list;
        Partition cur;
        enum_partitions(ix, rem, cur, parts_list);
        // exact cover whose observable variants can reproduce the mask
        bool found = false;
        double best = 0;
        Decomposition d{mi, {}};
        for (const Partition& parts : parts_list) {
            ObsChoice ch = match_obs(ix, parts, m.obs);
            if (!ch.ok) continue;
            if (!found || ch.score > best) {
                found = true;
                best = ch.score;
                d.parts.clear();
                for (size_t i = 0; i < parts.size(); i++)
                    d.parts.push_back({*parts[i], ch.obs[i], false});
            }
        }
        if (!found) {
            // leave one remnant of at most two detectors to absorb the
            // residual observables; cover the rest exactly
            std::vector<std::vector<int>> remnants;
            std::vector<int> ds(m.dets);
            for (size_t i = 0; i < ds.size(); i++) remnants.push_back({ds[i]});
            for (size_t i = 0; i < ds.size(); i++)
                for (size_t j = i + 1; j < ds.size(); j++)
                    remnants.push_back({ds[i], ds[j]});
            for (const auto& rset : remnants) {
                std::set<int> rest(ds.begin(), ds.end());
                for (int r : rset) rest.erase(r);
                std::vector<Partition> pl;
                Partition c2;
                enum_partitions(ix, rest, c2, pl);
                for (const Partition& parts : pl) {
                    double score = 0;
                    uint32_t acc = 0;
                    std::vector<uint32_t> obs;
                    for (const std::vector<int>* key : parts) {
                        auto& v = ix.low.at(*key).front(); // highest p
                        score += std::log(v.second);
                        acc ^= v.first;
                        obs.push_back(v.first);
                    }
                    if (!found || score > best) {
                        found = true;
                        best = score;
                        d.parts.clear();
                        for (size_t i = 0; i < parts.size(); i++)
                            d.parts.push_back({*parts[i], obs[i], false});
                        d.parts.push_back({rset, m.obs ^ acc, true});
                    }
                }
            }
        }
        if (!found) {
            std::ostringstream os;
            os << "no decomposition for mechanism on detectors {";
            for (size_t i = 0; i < m.dets.size(); i++)
                os << (i ? "," : "") << m.dets[i];
            os << "}";
            if (!m.prov.empty())
                os << " first seen at step " << m.prov[0].time;
            throw std::runtime_error(os.str());
        }
        out.push_back(std::move(d));
    }
    return out;
}

// --------------------------------------------------------- matching graph

uint32_t MatchingGraph::path_obs(int from, int to) const {
    uint32_t acc = 0;
    int cur = to;
    while (cur != from) {
        int eid = pred[size_t(from)][size_t(cur)];
        if (eid < 0) throw std::runtime_error("no path between matched nodes");
        const GraphEdge& e = edges[size_t(eid)];
        acc ^= e.obs;
        cur = (e.u == cur) ? e.v : e.u;
    }
    return acc;
}

MatchingGraph to_matching_graph(const DetectorErrorModel& dem,
                                bool literal_weights) {
    MatchingGraph g;
    g.nd = dem.num_detectors;
    g.literal_weights = literal_weights;
    int bnd = g.nd;
    std::map<std::pair<int, int>, std::vector<std::pair<double, uint32_t>>> acc;
    auto add = [&](const std::vector<int>& dets, uint32_t obs, double p) {
        int u, v;
        if (dets.size() == 1) { u = dets[0]; v = bnd; }
        else { u = std::min(dets[0], dets[1]); v = std::max(dets[0], dets[1]); }
        acc[{u, v}].push_back({p, obs});
    };
    for (const auto& m : dem.mechanisms)
        if (m.dets.size() >= 1 && m.dets.size() <= 2) add(m.dets, m.obs, m.p);
    for (const auto& d : decompose_hyperedges(dem)) {
        double p = dem.mechanisms[d.mech].p;
        for (const auto& part : d.parts) add(part.dets, part.obs, p);
    }
    for (auto& [uv, contrib] : acc) {
        std::sort(contrib.begin(), contrib.end(), [](auto& a, auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        double P = 0;
        for (auto& [p, obs] : contrib) P = P * (1 - p) + p * (1 - P);
        GraphEdge e;
        e.u = uv.first;
        e.v = uv.second;
        e.p = P;
        e.obs = contrib.front().second; // payload of the dominant mechanism
        e.w = literal_weights ? -std::log(P) : -std::log(P / (1 - P));
        if (!(e.w > 0))
            throw std::runtime_error("non-positive edge weight; p too large");
        e.wq = std::max<int64_t>(1, llround(e.w * double(kWeightScale)));
        g.edges.push_back(e);
    }
    g.adj.assign(size_t(g.nd + 1), {});
    for (size_t i = 0; i < g.edges.size(); i++) {
        g.adj[size_t(g.edges[i].u)].push_back(int(i));
        g.adj[size_t(g.edges[i].v)].push_back(int(i));
    }
    // all-pairs shortest paths; per-shot decoding then only reads tables
    int n = g.nd + 1;
    g.dist.assign(size_t(n), std::vector<int64_t>(size_t(n), kDistInf));
    g.pred.assign(size_t(n), std::vector<int32_t>(size_t(n), -1));
    for (int src = 0; src < n; src++) {
        auto& dist = g.dist[size_t(src)];
        auto& pred = g.pred[size_t(src)];
        dist[size_t(src)] = 0;
        using Item = std::pair<int64_t, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        pq.push({0, src});
        while (!pq.empty()) {
            auto [dc, u] = pq.top();
            pq.pop();
            if (dc > dist[size_t(u)]) continue;
            for (int eid : g.adj[size_t(u)]) {
                const GraphEdge& e = g.edges[size_t(eid)];
                int v = e.u == u ? e.v : e.u;
                int64_t nd2 = dc + e.wq;
                if (nd2 < dist[size_t(v)] ||
                    (nd2 == dist[size_t(v)] && pred[size_t(v)] >= 0 &&
                     eid < pred[size_t(v)])) {
                    dist[size_t(v)] = nd2;
                    pred[size_t(v)] = int32_t(eid);
                    pq.push({nd2, v});
                }
            }
        }
    }
    return g;
}

} // namespace floqsim
