#include "floqsim/mwpm.hpp"
#include <algorithm>
#include <deque>
#include <stdexcept>

namespace floqsim {

namespace {

// primal-dual blossom matcher on a dense graph, O(V^3). Vertices are
// 1-indexed; ids above n are contracted blossoms. Weight 0 means no edge.
struct BlossomMatcher {
    struct E {
        int u = 0, v = 0;
        int64_t w = 0;
    };
    int n, n_x;
    int vis_t = 0;
    std::vector<std::vector<E>> g;
    std::vector<int64_t> lab;
    std::vector<int> match, slack, st, pa, S, vis;
    std::vector<std::vector<int>> flower, flower_from;
    std::deque<int> q;

    explicit BlossomMatcher(const std::vector<std::vector<int64_t>>& w) {
        n = int(w.size());
        int cap = n + n / 2 + 2;
        g.assign(size_t(cap), std::vector<E>(size_t(cap)));
        lab.assign(size_t(cap), 0);
        match.assign(size_t(cap), 0);
        slack.assign(size_t(cap), 0);
        st.assign(size_t(cap), 0);
        pa.assign(size_t(cap), 0);
        S.assign(size_t(cap), -1);
        vis.assign(size_t(cap), 0);
        flower.assign(size_t(cap), {});
        flower_from.assign(size_t(cap), std::vector<int>(size_t(n + 1), 0));
        for (int u = 1; u <= n; u++)
            for (int v = 1; v <= n; v++)
                g[size_t(u)][size_t(v)] = {u, v, w[size_t(u - 1)][size_t(v - 1)]};
    }

    int64_t e_delta(const E& e) const {
        return lab[size_t(e.u)] + lab[size_t(e.v)] -
               g[size_t(e.u)][size_t(e.v)].w * 2;
    }

    void update_slack(int u, int x) {
        if (!slack[size_t(x)] ||
            e_delta(g[size_t(u)][size_t(x)]) <
                e_delta(g[size_t(slack[size_t(x)])][size_t(x)]))
            slack[size_t(x)] = u;
    }

    void set_slack(int x) {
        slack[size_t(x)] = 0;
        for (int u = 1; u <= n; u++)
            if (g[size_t(u)][size_t(x)].w > 0 && st[size_t(u)] != x &&
                S[size_t(st[size_t(u)])] == 0)
                update_slack(u, x);
    }

    void q_push(int x) {
        if (x <= n) {
            q.push_back(x);
            return;
        }
        for (int p : flower[size_t(x)]) q_push(p);
    }

    void set_st(int x, int b) {
        st[size_t(x)] = b;
        if (x > n)
            for (int p : flower[size_t(x)]) set_st(p, b);
    }

    int get_pr(int b, int xr) {
        auto& f = flower[size_t(b)];
        int pr = int(std::find(f.begin(), f.end(), xr) - f.begin());
        if (pr % 2 == 1) {
            std::reverse(f.begin() + 1, f.end());
            return int(f.size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match[size_t(u)] = g[size_t(u)][size_t(v)].v;
        if (u <= n) return;
        E e = g[size_t(u)][size_t(v)];
        int xr = flower_from[size_t(u)][size_t(e.u)];
        int pr = get_pr(u, xr);
        auto& f = flower[size_t(u)];
        for (int i = 0; i < pr; i++) set_match(f[size_t(i)], f[size_t(i ^ 1)]);
        set_match(xr, v);
        std::rotate(f.begin(), f.begin() + pr, f.end());
    }

    void augment(int u, int v) {
        while (true) {
            int xnv = st[size_t(match[size_t(u)])];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st[size_t(pa[size_t(xnv)])]);
            u = st[size_t(pa[size_t(xnv)])];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        for (++vis_t; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis[size_t(u)] == vis_t) return u;
            vis[size_t(u)] = vis_t;
            u = st[size_t(match[size_t(u)])];
            if (u) u = st[size_t(pa[size_t(u)])];
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n + 1;
        while (b <= n_x && st[size_t(b)]) b++;
        if (b > n_x) n_x++;
        lab[size_t(b)] = 0;
        S[size_t(b)] = 0;
        match[size_t(b)] = match[size_t(lca)];
        auto& f = flower[size_t(b)];
        f.clear();
        f.push_back(lca);
        for (int x = u, y; x != lca; x = st[size_t(pa[size_t(y)])]) {
            f.push_back(x);
            f.push_back(y = st[size_t(match[size_t(x)])]);
            q_push(y);
        }
        std::reverse(f.begin() + 1, f.end());
        for (int x = v, y; x != lca; x = st[size_t(pa[size_t(y)])]) {
            f.push_back(x);
            f.push_back(y = st[size_t(match[size_t(x)])]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x; x++)
            g[size_t(b)][size_t(x)].w = g[size_t(x)][size_t(b)].w = 0;
        for (int x = 1; x <= n; x++) flower_from[size_t(b)][size_t(x)] = 0;
        for (int xs : f) {
            for (int x = 1; x <= n_x; x++)
                if (g[size_t(b)][size_t(x)].w == 0 ||
                    e_delta(g[size_t(xs)][size_t(x)]) <
                        e_delta(g[size_t(b)][size_t(x)])) {
                    g[size_t(b)][size_t(x)] = g[size_t(xs)][size_t(x)];
                    g[size_t(x)][size_t(b)] = g[size_t(x)][size_t(xs)];
                }
            for (int x = 1; x <= n; x++)
                if (flower_from[size_t(xs)][size_t(x)])
                    flower_from[size_t(b)][size_t(x)] = xs;
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        auto& f = flower[size_t(b)];
        for (int xs : f) set_st(xs, xs);
        int xr = flower_from[size_t(b)][size_t(g[size_t(b)][size_t(pa[size_t(b)])].u)];
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = f[size_t(i)], xns = f[size_t(i + 1)];
            pa[size_t(xs)] = g[size_t(xns)][size_t(xs)].u;
            S[size_t(xs)] = 1;
            S[size_t(xns)] = 0;
            slack[size_t(xs)] = 0;
            set_slack(xns);
            q_push(xns);
        }
        S[size_t(xr)] = 1;
        pa[size_t(xr)] = pa[size_t(b)];
        for (size_t i = size_t(pr) + 1; i < f.size(); i++) {
            S[size_t(f[i])] = -1;
            set_slack(f[i]);
        }
        st[size_t(b)] = 0;
    }

    bool on_found_edge(const E& e) {
        int u = st[size_t(e.u)], v = st[size_t(e.v)];
        if (S[size_t(v)] == -1) {
            pa[size_t(v)] = e.u;
            S[size_t(v)] = 1;
            int nu = st[size_t(match[size_t(v)])];
            slack[size_t(v)] = slack[size_t(nu)] = 0;
            S[size_t(nu)] = 0;
            q_push(nu);
        } else if (S[size_t(v)] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool matching() {
        std::fill(S.begin(), S.end(), -1);
        std::fill(slack.begin(), slack.end(), 0);
        q.clear();
        for (int x = 1; x <= n_x; x++)
            if (st[size_t(x)] == x && !match[size_t(x)]) {
                pa[size_t(x)] = 0;
                S[size_t(x)] = 0;
                q_push(x);
            }
        if (q.empty()) return false;
        while (true) {
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                if (S[size_t(st[size_t(u)])] == 1) continue;
                for (int v = 1; v <= n; v++)
                    if (g[size_t(u)][size_t(v)].w > 0 &&
                        st[size_t(u)] != st[size_t(v)]) {
                        if (e_delta(g[size_t(u)][size_t(v)]) == 0) {
                            if (on_found_edge(g[size_t(u)][size_t(v)]))
                                return true;
                        } else {
                            update_slack(u, st[size_t(v)]);
                        }
                    }
            }
            int64_t d = kDistInf;
            for (int b = n + 1; b <= n_x; b++)
                if (st[size_t(b)] == b && S[size_t(b)] == 1)
                    d = std::min(d, lab[size_t(b)] / 2);
            for (int x = 1; x <= n_x; x++)
                if (st[size_t(x)] == x && slack[size_t(x)]) {
                    if (S[size_t(x)] == -1)
                        d = std::min(d, e_delta(g[size_t(slack[size_t(x)])][size_t(x)]));
                    else if (S[size_t(x)] == 0)
                        d = std::min(d, e_delta(g[size_t(slack[size_t(x)])][size_t(x)]) / 2);
                }
            for (int u = 1; u <= n; u++) {
                if (S[size_t(st[size_t(u)])] == 0) {
                    if (lab[size_t(u)] <= d) return false;
                    lab[size_t(u)] -= d;
                } else if (S[size_t(st[size_t(u)])] == 1) {
                    lab[size_t(u)] += d;
                }
            }
            for (int b = n + 1; b <= n_x; b++)
                if (st[size_t(b)] == b) {
                    if (S[size_t(b)] == 0) lab[size_t(b)] += d * 2;
                    else if (S[size_t(b)] == 1) lab[size_t(b)] -= d * 2;
                }
            q.clear();
            for (int x = 1; x <= n_x; x++)
                if (st[size_t(x)] == x && slack[size_t(x)] &&
                    st[size_t(slack[size_t(x)])] != x &&
                    e_delta(g[size_t(slack[size_t(x)])][size_t(x)]) == 0)
                    if (on_found_edge(g[size_t(slack[size_t(x)])][size_t(x)]))
                        return true;
            for (int b = n + 1; b <= n_x; b++)
                if (st[size_t(b)] == b && S[size_t(b)] == 1 && lab[size_t(b)] == 0)
                    expand_blossom(b);
        }
    }

    void solve() {
        n_x = n;
        int64_t w_max = 0;
        for (int u = 1; u <= n; u++) {
            st[size_t(u)] = u;
            flower_from[size_t(u)][size_t(u)] = u;
            for (int v = 1; v <= n; v++)
                w_max = std::max(w_max, g[size_t(u)][size_t(v)].w);
        }
        for (int u = 1; u <= n; u++) lab[size_t(u)] = w_max;
        while (matching()) {}
    }
};

} // namespace

std::vector<int> max_weight_matching(const std::vector<std::vector<int64_t>>& w) {
    BlossomMatcher bm(w);
    bm.solve();
    std::vector<int> out(w.size() + 1, 0);
    for (int u = 1; u <= bm.n; u++) out[size_t(u)] = bm.match[size_t(u)];
    return out;
}

int64_t min_cost_pairing_brute(const std::vector<std::vector<int64_t>>& cost) {
    int n = int(cost.size());
    if (n % 2) throw std::runtime_error("odd pairing");
    std::vector<int> used(size_t(n), 0);
    int64_t best = kDistInf;
    std::vector<std::pair<int, int>> cur;
    auto rec = [&](auto&& self, int64_t acc) -> void {
        if (acc >= best) return;
        int a = -1;
        for (int i = 0; i < n; i++)
            if (!used[size_t(i)]) { a = i; break; }
        if (a < 0) {
            best = acc;
            return;
        }
        used[size_t(a)] = 1;
        for (int b = a + 1; b < n; b++) {
            if (used[size_t(b)] || cost[size_t(a)][size_t(b)] >= kDistInf)
                continue;
            used[size_t(b)] = 1;
            self(self, acc + cost[size_t(a)][size_t(b)]);
            used[size_t(b)] = 0;
        }
        used[size_t(a)] = 0;
    };
    rec(rec, 0);
    return best;
}

MwpmResult mwpm_decode(const MatchingGraph& g, const std::vector<int>& defects) {
    MwpmResult res;
    int k = int(defects.size());
    if (k == 0) return res;
    // nodes: 1..k defects, k+1..2k one boundary image each. A defect reaches
    // the boundary only through its own image; images connect to each other
    // freely so unused ones pair off.
    int n = 2 * k;
    int bnd = g.boundary();
    std::vector<std::vector<int64_t>> W(size_t(n),
                                        std::vector<int64_t>(size_t(n), kDistInf));
    int64_t maxw = 0;
    auto dist = [&](int a, int b) { return g.dist[size_t(a)][size_t(b)]; };
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            int64_t d = dist(defects[size_t(i)], defects[size_t(j)]);
            W[size_t(i)][size_t(j)] = W[size_t(j)][size_t(i)] = d;
            if (d < kDistInf) maxw = std::max(maxw, d);
        }
        int64_t db = dist(defects[size_t(i)], bnd);
        W[size_t(i)][size_t(k + i)] = W[size_t(k + i)][size_t(i)] = db;
        if (db < kDistInf) maxw = std::max(maxw, db);
        for (int j = 0; j < k; j++)
            if (j != i) W[size_t(k + i)][size_t(k + j)] = 0;
    }
    // transform to maximization with positive weights; forbidden pairs get 0
    int64_t big = maxw + 2;
    std::vector<std::vector<int64_t>> A(size_t(n),
                                        std::vector<int64_t>(size_t(n), 0));
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            if (i == j) continue;
            if (W[size_t(i)][size_t(j)] < kDistInf)
                A[size_t(i)][size_t(j)] = big - W[size_t(i)][size_t(j)];
        }
    auto match = max_weight_matching(A);
    for (int i = 0; i < k; i++) {
        int mi = match[size_t(i + 1)] - 1;
        if (mi < 0 || W[size_t(i)][size_t(mi)] >= kDistInf)
            throw std::runtime_error("syndrome cannot be matched");
        if (mi < i) continue;
        if (mi < k) {
            res.cost += W[size_t(i)][size_t(mi)];
            res.obs ^= g.path_obs(defects[size_t(i)], defects[size_t(mi)]);
            res.pairs.push_back({defects[size_t(i)], defects[size_t(mi)]});
        } else {
            res.cost += W[size_t(i)][size_t(mi)];
            res.obs ^= g.path_obs(defects[size_t(i)], bnd);
            res.pairs.push_back({defects[size_t(i)], -1});
        }
    }
    return res;
}

} // namespace floqsim
