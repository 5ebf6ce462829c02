#include "floqsim/bposd.hpp"
#include "floqsim/bits.hpp"
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace floqsim {

BposdDecoder::BposdDecoder(const DetectorErrorModel& dem, BposdConfig c)
    : cfg(c), nd(dem.num_detectors) {
    for (const auto& m : dem.mechanisms) {
        if (m.dets.empty()) continue;
        col_rows.push_back(m.dets);
        col_obs.push_back(m.obs);
        col_llr.push_back(std::log((1 - m.p) / m.p));
    }
    row_entries.assign(size_t(nd), {});
    for (size_t c2 = 0; c2 < col_rows.size(); c2++)
        for (size_t k = 0; k < col_rows[c2].size(); k++)
            row_entries[size_t(col_rows[c2][k])].push_back({int(c2), int(k)});
}

BposdResult BposdDecoder::decode(const std::vector<int>& defects) const {
    BposdResult res;
    if (defects.empty()) {
        res.bp_converged = true;
        return res;
    }
    size_t nc = col_rows.size();
    std::vector<uint8_t> synd(size_t(nd), 0);
    for (int d : defects) synd[size_t(d)] = 1;

    // messages stored column-major: slot k of column c
    std::vector<std::vector<double>> m_cr(nc), m_rc(nc);
    for (size_t c = 0; c < nc; c++) {
        m_cr[c].assign(col_rows[c].size(), col_llr[c]);
        m_rc[c].assign(col_rows[c].size(), 0.0);
    }
    std::vector<double> post(nc, 0.0);
    std::vector<uint8_t> hard(nc, 0);
    bool converged = false;
    for (int it = 0; it < cfg.max_iters && !converged; it++) {
        for (int r = 0; r < nd; r++) {
            const auto& ents = row_entries[size_t(r)];
            double min1 = HUGE_VAL, min2 = HUGE_VAL;
            int arg = -1;
            int sgn = synd[size_t(r)] ? 1 : 0;
            for (size_t j = 0; j < ents.size(); j++) {
                double v = m_cr[size_t(ents[j].first)][size_t(ents[j].second)];
                if (v < 0) sgn ^= 1;
                double a = std::fabs(v);
                if (a < min1) { min2 = min1; min1 = a; arg = int(j); }
                else if (a < min2) { min2 = a; }
            }
            for (size_t j = 0; j < ents.size(); j++) {
                double v = m_cr[size_t(ents[j].first)][size_t(ents[j].second)];
                int s = sgn ^ (v < 0 ? 1 : 0); // exclude own sign
                double mag = (int(j) == arg) ? min2 : min1;
                m_rc[size_t(ents[j].first)][size_t(ents[j].second)] =
                    cfg.alpha * (s ? -mag : mag);
            }
        }
        for (size_t c = 0; c < nc; c++) {
            double total = col_llr[c];
            for (double v : m_rc[c]) total += v;
            post[c] = total;
            hard[c] = total < 0;
            for (size_t k = 0; k < m_cr[c].size(); k++)
                m_cr[c][k] = total - m_rc[c][k];
        }
        converged = true;
        for (int r = 0; r < nd && converged; r++) {
            int par = 0;
            for (auto& [c, k] : row_entries[size_t(r)]) par ^= hard[size_t(c)];
            if (par != synd[size_t(r)]) converged = false;
        }
    }
    if (converged) {
        res.bp_converged = true;
        for (size_t c = 0; c < nc; c++)
            if (hard[c]) {
                res.support.push_back(int(c));
                res.obs ^= col_obs[c];
            }
        return res;
    }

    // ordered statistics: most-likely-flipped columns first
    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return post[size_t(a)] < post[size_t(b)];
    });
    // row-reduce over the permuted columns until every row is pivoted
    std::vector<Bits> rows(size_t(nd), Bits{nc});
    std::vector<uint8_t> rhs(size_t(nd), 0);
    for (size_t pos = 0; pos < nc; pos++) {
        int c = order[pos];
        for (int r : col_rows[size_t(c)]) rows[size_t(r)].set(pos);
    }
    for (int r = 0; r < nd; r++) rhs[size_t(r)] = synd[size_t(r)];
    int rank = 0;
    std::vector<int> piv_col; // permuted position per pivot row
    for (size_t pos = 0; pos < nc && rank < nd; pos++) {
        int hit = -1;
        for (int r = rank; r < nd; r++)
            if (rows[size_t(r)].get(pos)) { hit = r; break; }
        if (hit < 0) continue;
        std::swap(rows[size_t(hit)], rows[size_t(rank)]);
        std::swap(rhs[size_t(hit)], rhs[size_t(rank)]);
        for (int r = 0; r < nd; r++) {
            if (r == rank || !rows[size_t(r)].get(pos)) continue;
            rows[size_t(r)] ^= rows[size_t(rank)];
            rhs[size_t(r)] ^= rhs[size_t(rank)];
        }
        piv_col.push_back(int(pos));
        rank++;
    }
    for (int r = rank; r < nd; r++)
        if (rhs[size_t(r)])
            throw std::runtime_error("syndrome outside the mechanism span");

    std::vector<uint8_t> in_pivot(nc, 0);
    for (int pos : piv_col) in_pivot[size_t(pos)] = 1;
    auto colw = [&](size_t pos) { return col_llr[size_t(order[pos])]; };
    double base_cost = 0;
    for (int r = 0; r < rank; r++)
        if (rhs[size_t(r)]) base_cost += colw(size_t(piv_col[size_t(r)]));
    double best_cost = base_cost;
    int best_extra = -1; // permuted position of the flipped non-pivot column
    if (cfg.osd_order >= 1) {
        for (size_t pos = 0; pos < nc; pos++) {
            if (in_pivot[pos]) continue;
            double cost = colw(pos);
            if (cost >= best_cost) continue; // remaining terms only add
            for (int r = 0; r < rank; r++) {
                uint8_t bit = rhs[size_t(r)] ^ rows[size_t(r)].get(pos);
                if (bit) cost += colw(size_t(piv_col[size_t(r)]));
                if (cost >= best_cost) break;
            }
            if (cost < best_cost) {
                best_cost = cost;
                best_extra = int(pos);
            }
        }
    }
    for (int r = 0; r < rank; r++) {
        uint8_t bit = rhs[size_t(r)];
        if (best_extra >= 0) bit ^= rows[size_t(r)].get(size_t(best_extra));
        if (bit) res.support.push_back(order[size_t(piv_col[size_t(r)])]);
    }
    if (best_extra >= 0) res.support.push_back(order[size_t(best_extra)]);
    std::sort(res.support.begin(), res.support.end());
    for (int c : res.support) res.obs ^= col_obs[size_t(c)];
    return res;
}

} // namespace floqsim
