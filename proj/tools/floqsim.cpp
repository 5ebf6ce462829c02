#include "floqsim/experiments.hpp"
#include "floqsim/tiling.hpp"
#include <CLI11.hpp>
#include <json.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace floqsim;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

Tiling make_lattice(const std::string& name, int ell) {
    Tiling t = build_base_lattice(name);
    if (ell > 1) t = refine(t, ell);
    auto errs = validate_tiling(t);
    if (!errs.empty())
        throw std::runtime_error("lattice invalid: " + errs.front());
    return t;
}

std::vector<double> parse_p_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw std::runtime_error("empty probability list");
    return out;
}

struct RunCfg {
    std::string family = "hcf", lattice = "hcf16", noise = "em3-ind",
                decoder = "mwpm", out, plist = "1e-3";
    int ell = 1, periods = 8, threads = 0;
    long long shots = 10000;
    uint64_t seed = 1;
    char basis = 'Z';
    bool literal_weights = false;
};

int cmd_run(const RunCfg& cfg) {
    Tiling t = make_lattice(cfg.lattice, cfg.ell);
    MeasurementCircuit c =
        build_memory_circuit(t, cfg.family, cfg.periods, cfg.basis);
    auto ps = parse_p_list(cfg.plist);
    std::ostringstream csv;
    csv << "family,lattice,ell,n,basis,steps,noise,p,decoder,shots,failures,"
           "p_logical,wilson_lo,wilson_hi,undecodable,decode_seconds\n";
    json rows = json::array();
    for (double p : ps) {
        apply_noise(c, cfg.noise, p);
        DetectorErrorModel dem = compile_dem(c);
        SampleStats st = run_memory_experiment(dem, cfg.decoder, cfg.shots,
                                               cfg.seed, cfg.threads,
                                               cfg.literal_weights);
        auto [lo, hi] = wilson_interval(st.failures, st.shots);
        csv << cfg.family << "," << cfg.lattice << "," << cfg.ell << ","
            << t.nv << "," << cfg.basis << "," << c.T << "," << cfg.noise
            << "," << p << "," << cfg.decoder << "," << st.shots << ","
            << st.failures << "," << st.p_logical() << "," << lo << "," << hi
            << "," << st.undecodable << "," << st.decode_seconds << "\n";
        json row = {{"p", p},
                    {"shots", st.shots},
                    {"failures", st.failures},
                    {"p_logical", st.p_logical()},
                    {"wilson", {lo, hi}},
                    {"undecodable", st.undecodable},
                    {"decode_seconds", st.decode_seconds},
                    {"obs_failures", st.obs_failures}};
        rows.push_back(row);
        std::cerr << "p=" << p << " p_logical=" << st.p_logical() << " ("
                  << st.failures << "/" << st.shots << ")\n";
    }
    std::ostringstream cfgs;
    cfgs << cfg.family << cfg.lattice << cfg.ell << cfg.basis << cfg.periods
         << cfg.noise << cfg.plist << cfg.decoder << cfg.shots << cfg.seed;
    json report = {{"command", "run"},
                   {"family", cfg.family},
                   {"lattice", cfg.lattice},
                   {"ell", cfg.ell},
                   {"qubits", t.nv},
                   {"basis", std::string(1, cfg.basis)},
                   {"steps", c.T},
                   {"noise", cfg.noise},
                   {"decoder", cfg.decoder},
                   {"seed", cfg.seed},
                   {"git", git_describe()},
                   {"config_hash", fnv1a(cfgs.str())},
                   {"points", rows}};
    if (!cfg.out.empty()) {
        spit(cfg.out, csv.str());
        spit(cfg.out + ".json", report.dump(2) + "\n");
    } else {
        std::cout << csv.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"floquet-code workbench"};
    app.require_subcommand(1);

    RunCfg rc;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--family", rc.family)->check(CLI::IsMember({"hcf", "hf"}));
        cmd->add_option("--lattice", rc.lattice);
        cmd->add_option("--ell", rc.ell)->check(CLI::PositiveNumber);
        cmd->add_option("--periods", rc.periods)->check(CLI::PositiveNumber);
        cmd->add_option("--basis", rc.basis)->check(CLI::IsMember({'X', 'Z'}));
        cmd->add_option("--noise", rc.noise)
            ->check(CLI::IsMember({"em3-ind", "em3-cor", "em3-ind-bg"}));
        cmd->add_option("--p", rc.plist);
        cmd->add_option("--decoder", rc.decoder)
            ->check(CLI::IsMember({"mwpm", "bposd"}));
        cmd->add_option("--shots", rc.shots)->check(CLI::PositiveNumber);
        cmd->add_option("--seed", rc.seed);
        cmd->add_option("--threads", rc.threads);
        cmd->add_option("--out", rc.out);
        cmd->add_flag("--literal-weights", rc.literal_weights,
                      "edge weight -log p instead of -log p/(1-p)");
    };

    auto* run = app.add_subcommand("run", "memory experiment sweep");
    add_common(run);

    auto* lat = app.add_subcommand("lattice", "build/validate/export lattices");
    std::string lat_out, lat_in;
    bool lat_validate = false;
    lat->add_option("--lattice", rc.lattice);
    lat->add_option("--ell", rc.ell)->check(CLI::PositiveNumber);
    lat->add_option("--out", lat_out);
    lat->add_flag("--validate", lat_validate);

    auto* demc = app.add_subcommand("dem", "compile detector error model");
    std::string dem_out;
    double dem_p = 1e-3;
    bool dem_hist = false;
    add_common(demc);
    demc->add_option("--single-p", dem_p);
    demc->add_option("--dem-out", dem_out);
    demc->add_flag("--histogram", dem_hist);

    auto* dec = app.add_subcommand("decode", "decode one syndrome from a dem file");
    std::string dec_dem, dec_dets, dec_decoder = "mwpm";
    dec->add_option("--dem", dec_dem)->required();
    dec->add_option("--dets", dec_dets, "comma-separated fired detectors");
    dec->add_option("--decoder", dec_decoder)
        ->check(CLI::IsMember({"mwpm", "bposd"}));

    auto* bench = app.add_subcommand("bench", "decoder timing comparison");
    std::string bench_ells = "1,2,3";
    add_common(bench);
    bench->add_option("--ells", bench_ells, "comma-separated refinement levels");

    auto* thr = app.add_subcommand("threshold", "crossing estimate over sizes");
    std::string thr_ells = "1,2";
    int thr_resamples = 200;
    add_common(thr);
    thr->add_option("--ells", thr_ells, "comma-separated refinement levels");
    thr->add_option("--resamples", thr_resamples);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(rc);

        if (lat->parsed()) {
            Tiling t = make_lattice(rc.lattice, rc.ell);
            if (lat_validate) {
                auto errs = validate_tiling(t);
                for (auto& e : errs) std::cerr << e << "\n";
                std::cout << (errs.empty() ? "valid" : "invalid") << " n="
                          << t.nv << " edges=" << t.ne() << " faces="
                          << t.nf() << " genus=" << t.genus() << "\n";
                return errs.empty() ? 0 : 1;
            }
            std::string text = emit_lattice(t);
            if (lat_out.empty()) std::cout << text;
            else spit(lat_out, text);
            return 0;
        }

        if (demc->parsed()) {
            Tiling t = make_lattice(rc.lattice, rc.ell);
            MeasurementCircuit c =
                build_memory_circuit(t, rc.family, rc.periods, rc.basis);
            apply_noise(c, rc.noise, dem_p);
            DetectorErrorModel dem = compile_dem(c);
            if (dem_hist) {
                std::cout << "weight,count,percent\n";
                for (auto& [w, cf] : weight_histogram(dem))
                    std::cout << w << "," << cf.first << ","
                              << 100.0 * cf.second << "\n";
            }
            if (!dem_out.empty()) spit(dem_out, emit_dem(dem));
            else if (!dem_hist) std::cout << emit_dem(dem);
            return 0;
        }

        if (dec->parsed()) {
            DetectorErrorModel dem = parse_dem(slurp(dec_dem));
            std::vector<int> defects;
            if (!dec_dets.empty()) {
                std::stringstream ss(dec_dets);
                std::string item;
                while (std::getline(ss, item, ','))
                    defects.push_back(std::stoi(item));
            }
            uint32_t obs;
            if (dec_decoder == "mwpm") {
                MatchingGraph g = to_matching_graph(dem);
                auto r = mwpm_decode(g, defects);
                obs = r.obs;
                std::cout << "cost " << r.cost << "\n";
            } else {
                BposdDecoder d(dem);
                auto r = d.decode(defects);
                obs = r.obs;
                std::cout << "bp_converged " << r.bp_converged << "\n";
            }
            std::cout << "obs_mask " << obs << "\n";
            return 0;
        }

        if (bench->parsed()) {
            auto ps = parse_p_list(rc.plist);
            std::vector<int> ells;
            {
                std::stringstream ss(bench_ells);
                std::string item;
                while (std::getline(ss, item, ','))
                    ells.push_back(std::stoi(item));
            }
            std::vector<double> sizes;
            std::vector<std::vector<double>> means(2);
            std::cout << "n,decoder,shots,min_s,median_s,mean_s,max_s\n";
            for (int ell : ells) {
                Tiling t = make_lattice(rc.lattice, ell);
                MeasurementCircuit c =
                    build_memory_circuit(t, rc.family, rc.periods, rc.basis);
                apply_noise(c, rc.noise, ps[0]);
                DetectorErrorModel dem = compile_dem(c);
                sizes.push_back(double(t.nv));
                const char* dnames[2] = {"mwpm", "bposd"};
                for (int d = 0; d < 2; d++) {
                    TimingStats ts =
                        decode_timing(dem, dnames[d], rc.shots, rc.seed);
                    means[size_t(d)].push_back(ts.tmean);
                    std::cout << t.nv << "," << dnames[d] << "," << ts.shots
                              << "," << ts.tmin << "," << ts.tmed << ","
                              << ts.tmean << "," << ts.tmax << "\n";
                }
            }
            if (sizes.size() >= 2) {
                const char* dnames[2] = {"mwpm", "bposd"};
                for (int d = 0; d < 2; d++) {
                    PowerFit f = fit_power_law(sizes, means[size_t(d)]);
                    std::cout << "fit," << dnames[d] << ",alpha=" << f.alpha
                              << ",beta=" << std::exp(f.beta)
                              << ",r2=" << f.r2 << "\n";
                }
            }
            return 0;
        }

        if (thr->parsed()) {
            auto ps = parse_p_list(rc.plist);
            std::vector<int> ells;
            {
                std::stringstream ss(thr_ells);
                std::string item;
                while (std::getline(ss, item, ','))
                    ells.push_back(std::stoi(item));
            }
            std::vector<std::vector<long long>> fails;
            std::vector<long long> shots_per;
            for (int ell : ells) {
                Tiling t = make_lattice(rc.lattice, ell);
                MeasurementCircuit c =
                    build_memory_circuit(t, rc.family, rc.periods, rc.basis);
                std::vector<long long> row;
                for (double p : ps) {
                    apply_noise(c, rc.noise, p);
                    DetectorErrorModel dem = compile_dem(c);
                    SampleStats st = run_memory_experiment(
                        dem, rc.decoder, rc.shots, rc.seed, rc.threads);
                    row.push_back(st.failures);
                    std::cerr << "ell=" << ell << " p=" << p
                              << " p_logical=" << st.p_logical() << "\n";
                }
                fails.push_back(row);
                shots_per.push_back(rc.shots);
            }
            auto est = threshold_with_bootstrap(ps, fails, shots_per,
                                                thr_resamples, rc.seed);
            for (const auto& pc : est.pairs)
                std::cout << "pair " << ells[size_t(pc.a)] << " "
                          << ells[size_t(pc.b)] << " "
                          << (pc.degenerate ? "degenerate"
                              : std::isnan(pc.p) ? "no-crossing"
                                                 : std::to_string(pc.p))
                          << "\n";
            if (!est.crossed) {
                std::cout << "no crossing inside the grid"
                          << (est.degenerate ? " (degenerate pair present)"
                                             : "")
                          << "\n";
                return 2;
            }
            std::cout << "p_th " << est.p_th << "\nrange " << est.p_min << " "
                      << est.p_max << "\nci " << est.lo << " " << est.hi
                      << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
