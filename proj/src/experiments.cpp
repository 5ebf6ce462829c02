#include "floqsim/experiments.hpp"
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <thread>

namespace floqsim {

DemSampler::DemSampler(const DetectorErrorModel& d) : nd(d.num_detectors),
                                                      dem(&d) {
    std::map<double, std::vector<int>> by_p;
    for (size_t i = 0; i < d.mechanisms.size(); i++)
        by_p[d.mechanisms[i].p].push_back(int(i));
    for (auto& [p, idx] : by_p)
        groups.push_back({p, std::log1p(-p), std::move(idx)});
}

void DemSampler::sample(SplitMix64& rng, std::vector<int>& defects,
                        uint32_t& obs) const {
    static thread_local std::vector<uint8_t> par;
    static thread_local std::vector<int> touched;
    par.assign(size_t(nd), 0);
    touched.clear();
    obs = 0;
    for (const Group& g : groups) {
        if (!(g.p > 0)) continue;
        size_t i = 0;
        while (i < g.idx.size()) {
            double u = 1.0 - rng.next_double(); // (0,1]
            double jump = std::floor(std::log(u) / g.log1m);
            if (jump >= double(g.idx.size() - i)) break;
            i += size_t(jump);
            const FaultMechanism& m = dem->mechanisms[size_t(g.idx[i])];
            for (int det : m.dets) {
                if (!par[size_t(det)]) touched.push_back(det);
                par[size_t(det)] ^= 1;
            }
            obs ^= m.obs;
            i++;
        }
    }
    defects.clear();
    for (int det : touched) {
        if (par[size_t(det)]) { // dets can repeat in touched; emit once
            defects.push_back(det);
            par[size_t(det)] = 0;
        }
    }
    std::sort(defects.begin(), defects.end());
}

static int resolve_threads(int threads) {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("FLOQSIM_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

SampleStats run_memory_experiment(const DetectorErrorModel& dem,
                                  const std::string& decoder, long long shots,
                                  uint64_t seed, int threads,
                                  bool literal_weights) {
    if (decoder != "mwpm" && decoder != "bposd")
        throw std::runtime_error("unknown decoder: " + decoder);
    DemSampler sampler(dem);
    MatchingGraph graph;
    BposdDecoder* bposd = nullptr;
    if (decoder == "mwpm") graph = to_matching_graph(dem, literal_weights);
    BposdDecoder bp_dec = decoder == "bposd"
                              ? BposdDecoder(dem)
                              : BposdDecoder(DetectorErrorModel{});
    if (decoder == "bposd") bposd = &bp_dec;

    int nt = resolve_threads(threads);
    std::vector<SampleStats> partial(static_cast<size_t>(nt));
    auto work = [&](int ti) {
        SampleStats& st = partial[size_t(ti)];
        st.obs_failures.assign(size_t(dem.num_observables), 0);
        std::vector<int> defects;
        for (long long shot = ti; shot < shots; shot += nt) {
            SplitMix64 rng(mix64(seed, uint64_t(shot)));
            uint32_t truth = 0;
            sampler.sample(rng, defects, truth);
            uint32_t guess = 0;
            auto t0 = std::chrono::steady_clock::now();
            if (bposd) {
                guess = bposd->decode(defects).obs;
            } else {
                try {
                    guess = mwpm_decode(graph, defects).obs;
                } catch (const std::runtime_error&) {
                    st.undecodable++;
                    guess = 0;
                }
            }
            auto t1 = std::chrono::steady_clock::now();
            st.decode_seconds +=
                std::chrono::duration<double>(t1 - t0).count();
            st.shots++;
            uint32_t diff = guess ^ truth;
            if (diff) st.failures++;
            for (int b = 0; b < dem.num_observables; b++)
                if (diff >> b & 1) st.obs_failures[size_t(b)]++;
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int ti = 0; ti < nt; ti++) pool.emplace_back(work, ti);
        for (auto& th : pool) th.join();
    }
    SampleStats out;
    out.obs_failures.assign(size_t(dem.num_observables), 0);
    for (const auto& st : partial) {
        out.shots += st.shots;
        out.failures += st.failures;
        out.undecodable += st.undecodable;
        out.decode_seconds += st.decode_seconds;
        for (size_t b = 0; b < st.obs_failures.size(); b++)
            out.obs_failures[b] += st.obs_failures[b];
    }
    return out;
}

std::pair<double, double> wilson_interval(long long fails, long long shots,
                                          double z) {
    if (shots == 0) return {0, 1};
    double n = double(shots), ph = double(fails) / n, z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (ph + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double crossing_point(const std::vector<double>& ps,
                      const std::vector<double>& pl_a,
                      const std::vector<double>& pl_b) {
    for (size_t i = 0; i + 1 < ps.size(); i++) {
        if (pl_a[i] <= 0 || pl_b[i] <= 0 || pl_a[i + 1] <= 0 || pl_b[i + 1] <= 0)
            continue;
        double d0 = std::log(pl_a[i]) - std::log(pl_b[i]);
        double d1 = std::log(pl_a[i + 1]) - std::log(pl_b[i + 1]);
        if (d0 == 0) return ps[i];
        if (d0 * d1 < 0) {
            double f = d0 / (d0 - d1);
            double lp = std::log(ps[i]) +
                        f * (std::log(ps[i + 1]) - std::log(ps[i]));
            return std::exp(lp);
        }
    }
    return std::nan("");
}

ThresholdEstimate threshold_with_bootstrap(
    const std::vector<double>& ps,
    const std::vector<std::vector<long long>>& fails,
    const std::vector<long long>& shots, int resamples, uint64_t seed) {
    size_t nsz = fails.size();
    std::vector<std::vector<double>> pl(nsz, std::vector<double>(ps.size()));
    for (size_t a = 0; a < nsz; a++)
        for (size_t i = 0; i < ps.size(); i++)
            pl[a][i] = double(fails[a][i]) / double(shots[a]);
    ThresholdEstimate est;
    est.p_th = est.p_min = est.p_max = std::nan("");
    est.lo = est.hi = std::nan("");
    double acc = 0;
    int cnt = 0;
    for (size_t a = 0; a < nsz; a++)
        for (size_t b = a + 1; b < nsz; b++) {
            PairCrossing pc{int(a), int(b), std::nan(""), true};
            for (size_t i = 0; i < ps.size(); i++)
                if (pl[a][i] != pl[b][i]) { pc.degenerate = false; break; }
            if (pc.degenerate) {
                est.degenerate = true; // equal everywhere: no usable point
            } else {
                pc.p = crossing_point(ps, pl[a], pl[b]);
            }
            if (!std::isnan(pc.p)) {
                acc += std::log(pc.p);
                cnt++;
                est.p_min = est.crossed ? std::min(est.p_min, pc.p) : pc.p;
                est.p_max = est.crossed ? std::max(est.p_max, pc.p) : pc.p;
                est.crossed = true;
            }
            est.pairs.push_back(pc);
        }
    if (!est.crossed) return est;
    est.p_th = std::exp(acc / cnt);
    std::mt19937_64 rng(seed);
    std::vector<double> boots;
    for (int r = 0; r < resamples; r++) {
        double racc = 0;
        int rcnt = 0;
        std::vector<std::vector<double>> rpl(nsz,
                                             std::vector<double>(ps.size()));
        for (size_t a = 0; a < nsz; a++)
            for (size_t i = 0; i < ps.size(); i++) {
                std::binomial_distribution<long long> bin(shots[a], pl[a][i]);
                rpl[a][i] = double(bin(rng)) / double(shots[a]);
            }
        for (const PairCrossing& pc : est.pairs) {
            if (pc.degenerate) continue;
            double c = crossing_point(ps, rpl[size_t(pc.a)],
                                      rpl[size_t(pc.b)]);
            if (!std::isnan(c)) { racc += std::log(c); rcnt++; }
        }
        if (rcnt) boots.push_back(std::exp(racc / rcnt));
    }
    std::sort(boots.begin(), boots.end());
    if (!boots.empty()) {
        est.lo = boots[size_t(0.025 * double(boots.size()))];
        est.hi = boots[std::min(boots.size() - 1,
                                size_t(0.975 * double(boots.size())))];
    }
    return est;
}

TimingStats decode_timing(const DetectorErrorModel& dem,
                          const std::string& decoder, long long shots,
                          uint64_t seed) {
    if (decoder != "mwpm" && decoder != "bposd")
        throw std::runtime_error("unknown decoder: " + decoder);
    DemSampler sampler(dem);
    std::vector<std::vector<int>> syndromes(size_t(shots));
    std::vector<int> defects;
    uint32_t obs;
    for (long long s = 0; s < shots; s++) {
        SplitMix64 rng(mix64(seed, uint64_t(s)));
        sampler.sample(rng, defects, obs);
        syndromes[size_t(s)] = defects;
    }
    MatchingGraph graph;
    BposdDecoder bp = decoder == "bposd" ? BposdDecoder(dem)
                                         : BposdDecoder(DetectorErrorModel{});
    if (decoder == "mwpm") graph = to_matching_graph(dem);
    std::vector<double> times(size_t(shots));
    double total = 0;
    for (long long s = 0; s < shots; s++) {
        auto t0 = std::chrono::steady_clock::now();
        if (decoder == "mwpm") {
            try {
                mwpm_decode(graph, syndromes[size_t(s)]);
            } catch (const std::runtime_error&) {
            }
        } else {
            bp.decode(syndromes[size_t(s)]);
        }
        auto t1 = std::chrono::steady_clock::now();
        times[size_t(s)] = std::chrono::duration<double>(t1 - t0).count();
        total += times[size_t(s)];
    }
    std::sort(times.begin(), times.end());
    TimingStats st;
    st.shots = shots;
    st.tmin = times.front();
    st.tmed = times[size_t(shots / 2)];
    st.tmean = total / double(shots);
    st.tmax = times.back();
    return st;
}

PowerFit fit_power_law(const std::vector<double>& n,
                       const std::vector<double>& t) {
    size_t k = n.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < k; i++) {
        double x = std::log(n[i]), y = std::log(t[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double denom = double(k) * sxx - sx * sx;
    PowerFit f;
    f.alpha = (double(k) * sxy - sx * sy) / denom;
    f.beta = (sy - f.alpha * sx) / double(k);
    double ss_res = 0, ss_tot = 0, ym = sy / double(k);
    for (size_t i = 0; i < k; i++) {
        double y = std::log(t[i]);
        double yh = f.beta + f.alpha * std::log(n[i]);
        ss_res += (y - yh) * (y - yh);
        ss_tot += (y - ym) * (y - ym);
    }
    f.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
    return f;
}

std::string git_describe() {
    FILE* p = popen("git describe --always --dirty 2>/dev/null", "r");
    if (!p) return "unknown";
    char buf[128] = {0};
    size_t got = fread(buf, 1, sizeof buf - 1, p);
    pclose(p);
    std::string s(buf, got);
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s.empty() ? "unknown" : s;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace floqsim
