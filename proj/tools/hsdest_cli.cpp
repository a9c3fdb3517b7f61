// SPDX-License-Identifier: Apache-2.0
//
// hsdest - hybrid sparse/diffuse channel estimation and CRB analysis toolbox
// Copyright (C) 2026 hsdest contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "hsdest/baselines.hpp"
#include "hsdest/crb.hpp"
#include "hsdest/csv.hpp"
#include "hsdest/hals_solver.hpp"
#include "hsdest/postprocess.hpp"
#include "hsdest/signal_model.hpp"
#include "hsdest/structured_linalg.hpp"
#include "hsdest/sweep.hpp"
#include "hsdest/trace_io.hpp"

namespace {

using namespace hsdest;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<long> seed;
    int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_out) {
    cmd->add_option("--config", args.config_path, "flat key=value config file")->required();
    auto* out = cmd->add_option("--out", args.out_path, "output CSV path");
    if (need_out) out->required();
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--workers", args.workers, "parallel worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig load(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args.config_path);
    if (args.seed) cfg.seed = static_cast<std::uint64_t>(*args.seed);
    return cfg;
}

int cmd_sweep(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    SweepResult res = run_sweep(cfg, args.workers);
    emit_csv(res, args.out_path);
    std::cout << "wrote " << res.rows.size() << " rows to " << args.out_path << "\n";
    return 0;
}

int cmd_trace(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    cfg.scenario = "trace_eval";
    cfg.validate();
    SweepResult res = run_sweep(cfg, args.workers);
    emit_csv(res, args.out_path);
    std::cout << "wrote " << res.rows.size() << " rows to " << args.out_path << "\n";
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    const ModelDims& dims = cfg.dims;
    const double snr = cfg.snr_db_list.empty() ? 20.0 : cfg.snr_db_list.front();

    Rng rng = Rng::derive(cfg.seed, {0xC0, 0, 0});
    std::vector<int> cells(dims.L);
    for (int i = 0; i < dims.L; ++i) cells[i] = i;
    for (int i = 0; i < dims.m; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(dims.L - i)));
        std::swap(cells[i], cells[j]);
    }
    std::vector<double> f(dims.m);
    for (int i = 0; i < dims.m; ++i)
        f[i] = canonical_frequency(static_cast<double>(cells[i]) / dims.L + cfg.delta);

    AhsdChannel ch = draw_channel(rng, dims, cfg.fading, f);
    double sigma = sigma_for_snr(ch, snr);
    MeasurementSet ms = draw_pilots_and_observe(rng, ch, dims.G, sigma);
    CMat D = build_diffuse_basis(dims.N, dims.L);
    Hyperparams hp = select_hyperparams(dims.N, sigma, expected_diffuse_energy(cfg.fading, dims.L),
                                        cfg.tau_scale, cfg.lam_scale, cfg.ed_headroom);

    std::printf("instance: N=%d L=%d m=%d G=%d snr=%.2f dB sigma=%.6g\n", dims.N, dims.L, dims.m,
                dims.G, snr, sigma);
    std::printf("hyperparams: tau=%.6g lam=%.6g e_d=%.6g\n", hp.tau, hp.lam, hp.e_d);
    std::printf("true frequencies:");
    for (double v : ch.f) std::printf(" %.6f", v);
    std::printf("\n");

    HalsSolution sol = solve_p2(ms.y_avg, D, hp.tau, hp.e_d, SolverOptions{});
    Hyperparams eff = hp;
    eff.lam = sol.lam > 0 ? sol.lam : hp.lam;
    OptimalityDiagnostics diag = check_optimality(sol, ms.y_avg, D, eff);

    std::printf("solver: iters=%d converged=%d obj=%.9g gap=%.3e\n", sol.iters,
                sol.converged ? 1 : 0, sol.primal_obj, sol.gap);
    std::printf("kkt: dual-excess=%.3e ridge=%.3e alignment=%.3e\n", diag.dual_excess_rel,
                diag.ridge_residual_rel, diag.alignment_residual_rel);

    std::vector<double> freqs = extract_support(sol.z, sol.tau);
    auto [h_db, amps] = debias(ms.y_avg, D, sol.gamma, freqs);
    std::vector<bool> kept = threshold_support(amps, sol.gamma);
    std::printf("support:");
    for (size_t i = 0; i < freqs.size(); ++i)
        std::printf(" %.6f(%s)", freqs[i], kept[i] ? "kept" : "cut");
    std::printf("\n");

    CVec h_hat = h_db + D * sol.gamma;
    std::printf("nmse: h=%.4e", (ch.h - h_hat).squaredNorm() / ch.h.squaredNorm());
    if (ch.h_s.squaredNorm() > 0)
        std::printf(" h_s=%.4e", (ch.h_s - h_db).squaredNorm() / ch.h_s.squaredNorm());
    if (ch.h_d.squaredNorm() > 0)
        std::printf(" h_d=%.4e",
                    (ch.h_d - D * sol.gamma).squaredNorm() / ch.h_d.squaredNorm());
    std::printf("\n");

    try {
        CrbParams p = crb_parameters(fim_theta(ch.f, ch.alpha, dims.N, dims.L, dims.G, sigma));
        std::printf("crb: f_mean=%.4e alpha_mean=%.4e gamma_mean=%.4e cond=%.3e\n",
                    p.crb_f.size() ? p.crb_f.mean() : 0.0,
                    p.crb_alpha.size() ? p.crb_alpha.mean() : 0.0, p.crb_gamma.mean(),
                    p.condition_number);
    } catch (const std::exception& ex) {
        std::printf("crb: unavailable (%s)\n", ex.what());
    }
    return 0;
}

int cmd_crb(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    const ModelDims& dims = cfg.dims;
    const double snr = cfg.snr_db_list.empty() ? 20.0 : cfg.snr_db_list.front();

    double f_mean = 0, a_mean = 0, g_mean = 0, half = 0, cond_max = 0;
    double env[6] = {0, 0, 0, 0, 0, 0};
    int env_ok = 0;
    for (int c = 0; c < cfg.trials_channel; ++c) {
        Rng rng = Rng::derive(cfg.seed, {0xC0, 0, static_cast<std::uint64_t>(c)});
        std::vector<int> cells(dims.L);
        for (int i = 0; i < dims.L; ++i) cells[i] = i;
        for (int i = 0; i < dims.m; ++i) {
            int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(dims.L - i)));
            std::swap(cells[i], cells[j]);
        }
        std::vector<double> f(dims.m);
        for (int i = 0; i < dims.m; ++i)
            f[i] = canonical_frequency(static_cast<double>(cells[i]) / dims.L + cfg.delta);
        AhsdChannel ch = draw_channel(rng, dims, cfg.fading, f);
        double sigma = sigma_for_snr(ch, snr);

        CrbParams p = crb_parameters(fim_theta(ch.f, ch.alpha, dims.N, dims.L, dims.G, sigma));
        if (p.crb_f.size()) f_mean += p.crb_f.mean();
        if (p.crb_alpha.size()) a_mean += p.crb_alpha.mean();
        g_mean += p.crb_gamma.mean();
        half += (sigma * sigma / dims.G) * (1.5 * dims.m + dims.L);
        cond_max = std::max(cond_max, p.condition_number);
        try {
            CrbEnvelopes e = crb_bounds(dims.N, min_separation(ch.f, dims.L).delta, dims.G, sigma,
                                        ch.alpha);
            env[0] += e.f_lo.size() ? e.f_lo.mean() : 0.0;
            env[1] += e.f_hi.size() ? e.f_hi.mean() : 0.0;
            env[2] += e.alpha_lo;
            env[3] += e.alpha_hi;
            env[4] += e.gamma_lo;
            env[5] += e.gamma_hi;
            ++env_ok;
        } catch (const std::exception&) {
        }
    }
    const int n = cfg.trials_channel;
    std::printf("channels=%d snr=%.2f dB\n", n, snr);
    std::printf("crb_f_mean=%.6e crb_alpha_mean=%.6e crb_gamma_mean=%.6e\n", f_mean / n, a_mean / n,
                g_mean / n);
    std::printf("channel half-trace bound=%.6e worst FIM condition=%.3e\n", half / n, cond_max);
    if (env_ok > 0)
        std::printf("envelopes (mean over %d channels): f=[%.4e, %.4e] alpha=[%.4e, %.4e] "
                    "gamma=[%.4e, %.4e]\n",
                    env_ok, env[0] / env_ok, env[1] / env_ok, env[2] / env_ok, env[3] / env_ok,
                    env[4] / env_ok, env[5] / env_ok);
    else
        std::printf("envelopes undefined (N*delta <= 2)\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid sparse/diffuse channel estimation harness"};
    app.require_subcommand(1);

    CommonArgs sim_args, sweep_args, crb_args, trace_args;
    CLI::App* sim = app.add_subcommand("simulate", "run one instance and print diagnostics");
    add_common(sim, sim_args, false);
    CLI::App* sweep = app.add_subcommand("sweep", "run the configured scenario to CSV");
    add_common(sweep, sweep_args, true);
    CLI::App* crb = app.add_subcommand("crb", "report bounds for the configured model");
    add_common(crb, crb_args, false);
    CLI::App* trace = app.add_subcommand("trace", "ingest a trace file and evaluate denoising");
    add_common(trace, trace_args, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (crb->parsed()) return cmd_crb(crb_args);
        if (trace->parsed()) return cmd_trace(trace_args);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
