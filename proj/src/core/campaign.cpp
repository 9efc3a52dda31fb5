#include "core/campaign.hpp"

#include <chrono>
#include <cmath>
#include <mutex>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/parallel.hpp"
#include "core/scattering.hpp"

namespace rgkit {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t substream(std::uint64_t domain, int seed_idx, std::uint64_t item) {
    return domain ^ (static_cast<std::uint64_t>(seed_idx + 1) << 40) ^ item;
}

std::vector<TestFunction> default_test_functions() {
    return {TestFunction::gaussian({0.0, 0.0, 0.0}, 0.8, "gauss0"),
            TestFunction::gaussian({1.0, 0.0, 0.0}, 0.6, "gauss1"),
            TestFunction::poly(3, 2.5, "poly3")};
}

MdEnsemble build_md_ensemble(const RunConfig& rc, double eps, int seed_idx,
                             const PotentialPtr& pot, int n_traj, double sample_time) {
    MdEnsemble ens;
    ens.count = static_cast<std::size_t>(n_traj);
    SimConfig cfg = rc.sim(eps);
    cfg.validate();

    struct Slot {
        PhaseSample sample;
        MarkedTree tree;
        TreeClassification cls;
        bool overlap = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_traj));

    parallel_for(static_cast<std::size_t>(n_traj), [&](std::size_t k) {
        StreamRng rng_init(rc.seed, substream(rng_domain::kInitial, seed_idx, k));
        StreamRng rng_bg(rc.seed, substream(rng_domain::kBackground, seed_idx, k));
        const Vec3 x0 = rc.initial.sample_position(rng_init);
        const Vec3 v0 = rc.initial.sample_velocity(rng_init);
        const Background bg = sample_background(cfg, rc.background, x0, rng_bg);
        const Trajectory traj = run_trajectory(cfg, pot, x0, v0, bg);

        Slot& slot = slots[k];
        Vec3 x, v;
        traj.tagged_at(sample_time, x, v);
        slot.sample.x = wrap01(x);
        slot.sample.v = v;
        slot.sample.n_collisions = 0;
        for (const auto& e : traj.events)
            if (e.t_entry <= sample_time) ++slot.sample.n_collisions;
        slot.overlap = traj.any_overlap;
        if (!slot.overlap) {
            slot.tree = extract_tree(traj, cfg);
            slot.cls = classify(slot.tree, traj, bg, cfg);
        }
    });

    for (auto& slot : slots) {
        ens.samples.push_back(slot.sample);
        if (slot.overlap) {
            ++ens.overlap_count;
        } else {
            ens.trees.push_back(std::move(slot.tree));
            ens.classes.push_back(slot.cls);
        }
    }
    return ens;
}

std::vector<JumpWalker> build_lbe_ensemble(const RunConfig& rc, double eps, int seed_idx,
                                           const PotentialPtr& p_short, int n_walkers,
                                           double horizon) {
    LbeParams par;
    par.p_short = p_short;
    par.g = rc.background;
    par.horizon = horizon;
    par.quad_tol = rc.quad_tol;
    (void)eps;

    std::vector<JumpWalker> walkers(static_cast<std::size_t>(n_walkers));
    parallel_for(static_cast<std::size_t>(n_walkers), [&](std::size_t k) {
        StreamRng rng(rc.seed, substream(rng_domain::kWalker, seed_idx, k));
        JumpWalker w;
        w.state.x = rc.initial.sample_position(rng);
        w.state.v = rc.initial.sample_velocity(rng);
        w.state.t = 0.0;
        w.tree.root_x = w.state.x;
        w.tree.root_v = w.state.v;
        walkers[k] = evolve_walker(rng, std::move(w), par);
    });
    return walkers;
}

std::vector<PhaseSample> walker_samples(const std::vector<JumpWalker>& walkers) {
    std::vector<PhaseSample> out;
    out.reserve(walkers.size());
    for (const auto& w : walkers) {
        PhaseSample s;
        s.x = w.state.x;
        s.v = w.state.v;
        s.n_collisions = static_cast<int>(w.tree.n());
        out.push_back(s);
    }
    return out;
}

XiCheck xi_acceptance_check(const RunConfig& rc, double eps, int seed_idx, int n_samples) {
    SimConfig cfg = rc.sim(eps);
    XiCheck chk;
    chk.xi_formula = cfg.xi();
    chk.samples = static_cast<std::size_t>(n_samples);
    const double r_excl = cfg.R() * eps;
    std::size_t accepted = 0;
    StreamRng rng(rc.seed, substream(rng_domain::kGeneric, seed_idx, 0xA11));
    for (int i = 0; i < n_samples; ++i) {
        const Vec3 x0{rng.uniform(), rng.uniform(), rng.uniform()};
        bool clean = true;
        for (int j = 0; j < cfg.n(); ++j) {
            const Vec3 xj{rng.uniform(), rng.uniform(), rng.uniform()};
            if (torus_dist(x0, xj) <= r_excl) clean = false;
        }
        if (clean) ++accepted;
    }
    chk.acceptance = static_cast<double>(accepted) / n_samples;
    chk.stderr_ = std::sqrt(chk.acceptance * (1.0 - chk.acceptance) / n_samples);
    return chk;
}

DivergenceCell divergence_cell(const RunConfig& rc, double eps, int seed_idx, int n_traj) {
    SimConfig cfg = rc.sim(eps);
    cfg.validate();
    const PotentialPtr p_long = rc.potential();
    const PotentialPtr p_short = rc.potential_truncated(eps);

    struct Slot {
        double gap = 0.0;
        bool matched = false;
        bool restricted = false;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_traj));
    parallel_for(static_cast<std::size_t>(n_traj), [&](std::size_t k) {
        StreamRng rng_init(rc.seed, substream(rng_domain::kInitial, seed_idx, k));
        StreamRng rng_bg(rc.seed, substream(rng_domain::kBackground, seed_idx, k));
        const Vec3 x0 = rc.initial.sample_position(rng_init);
        const Vec3 v0 = rc.initial.sample_velocity(rng_init);
        const Background bg = sample_background(cfg, rc.background, x0, rng_bg);
        const DivergenceResult d = divergence(cfg, p_long, p_short, x0, v0, bg);
        slots[k].gap = d.sup_gap;
        slots[k].matched = d.matched_collisions;
        if (!d.short_range.any_overlap) {
            const MarkedTree tree = extract_tree(d.short_range, cfg);
            slots[k].restricted = classify(tree, d.short_range, bg, cfg).in_R_eps;
        }
    });

    DivergenceCell cell;
    cell.epsilon = eps;
    cell.seed = rc.seed;
    cell.trajectories = n_traj;
    std::vector<double> matched_gaps;
    std::size_t differing = 0, not_restricted = 0;
    for (const auto& s : slots) {
        if (s.matched) matched_gaps.push_back(s.gap);
        else ++differing;
        if (!s.restricted) ++not_restricted;
        cell.max_gap = std::max(cell.max_gap, s.gap);
    }
    cell.median_gap = median(matched_gaps);
    cell.median_ci = bootstrap_ci(
        matched_gaps, [](std::span<const double> xs) {
            return median(std::vector<double>(xs.begin(), xs.end()));
        },
        200, rc.seed ^ 0xD1);
    cell.fraction_differing = static_cast<double>(differing) / n_traj;
    cell.differing_ci = wilson(differing, static_cast<std::size_t>(n_traj));
    cell.fraction_not_restricted = static_cast<double>(not_restricted) / n_traj;
    return cell;
}

namespace {

void write_manifest(const RunConfig& rc, const fs::path& out, const std::string& command,
                    double wall_seconds, const json& extra = json::object()) {
    json m;
    m["command"] = command;
    m["config"] = json::parse(rc.canonical_json());
    m["config_fingerprint"] = fingerprint(rc.canonical_json());
    m["wall_seconds"] = wall_seconds;
    m["master_seed"] = rc.seed;
    m["substream_rule"] =
        "StreamRng(master_seed, domain ^ ((seed_idx+1)<<40) ^ item); domains: "
        "background=0x10..,trajectory=0x20..,walker=0x30..,initial=0x40..,generic=0x50..";
    json derived = json::array();
    for (double eps : rc.epsilon_grid) {
        const SimConfig s = rc.sim(eps);
        derived.push_back({{"epsilon", eps},
                           {"N", s.n()},
                           {"R", s.R()},
                           {"M", s.M()},
                           {"V1", s.V1()},
                           {"V2", s.V2()},
                           {"delta", s.delta()},
                           {"b", s.b()},
                           {"xi", s.xi()}});
    }
    m["derived"] = derived;
    for (auto& [k, v] : extra.items()) m[k] = v;
    write_text(out / "manifest.json", m.dump(2));
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

}  // namespace

int run_scatter(const RunConfig& rc, const fs::path& out) {
    Timer timer;
    const PotentialPtr p = rc.potential();
    const PotentialPtr pR = truncate(p, rc.scatter_R);
    std::vector<double> rs = rc.scatter_r;
    if (rs.empty()) {
        for (int i = 0; i < 64; ++i)
            rs.push_back(0.05 * std::pow(2.0 * rc.scatter_R / 0.05, i / 63.0));
    }
    CsvWriter csv(out / "scatter.csv", {"r", "w", "theta", "theta_R", "rho_star", "tau_star",
                                        "gap"});
    for (double w : rc.scatter_w) {
        for (double r : rs) {
            const auto gap = angle_gap(*p, *pR, r, w, rc.quad_tol);
            const double rho_star = closest_approach(*p, r, w);
            const double tau =
                (r < rc.scatter_R) ? scattering_time(*pR, r, w, rc.quad_tol) : 0.0;
            csv.row({r, w, gap.theta, gap.theta_R, rho_star, tau, gap.gap});
        }
    }
    write_manifest(rc, out, "scatter", timer.seconds());
    return 0;
}

int run_simulate_md(const RunConfig& rc, const fs::path& out) {
    Timer timer;
    for (double eps : rc.epsilon_grid) {
        const PotentialPtr pR = rc.potential_truncated(eps);
        SimConfig cfg = rc.sim(eps);
        cfg.validate();
        for (int s = 0; s < rc.seeds; ++s) {
            const fs::path cell =
                out / ("eps_" + format_double(eps)) / ("seed_" + std::to_string(s));
            CsvWriter traj_csv(cell / "trajectories.csv",
                               {"id", "t", "x0", "x1", "x2", "v0", "v1", "v2"});
            std::string events_jsonl, trees_jsonl;
            CsvWriter cls_csv(cell / "classification.csv",
                              {"id", "good_dynamics", "velocity_separation", "time_separation",
                               "no_initial_overlap", "no_recollision", "good_tree",
                               "speed_bound", "separation_bound", "count_bound", "gap_bound",
                               "in_R_eps"});
            for (int k = 0; k < rc.trajectories; ++k) {
                StreamRng rng_init(rc.seed, substream(rng_domain::kInitial, s,
                                                      static_cast<std::uint64_t>(k)));
                StreamRng rng_bg(rc.seed, substream(rng_domain::kBackground, s,
                                                    static_cast<std::uint64_t>(k)));
                const Vec3 x0 = rc.initial.sample_position(rng_init);
                const Vec3 v0 = rc.initial.sample_velocity(rng_init);
                const Background bg = sample_background(cfg, rc.background, x0, rng_bg);
                RunOptions opt;
                opt.sample_dt = rc.sample_dt;
                const Trajectory traj = run_trajectory(cfg, pR, x0, v0, bg, opt);
                for (const auto& smp : traj.samples)
                    traj_csv.row({static_cast<double>(k), smp.t, smp.x.x, smp.x.y, smp.x.z,
                                  smp.v.x, smp.v.y, smp.v.z});
                for (const auto& e : traj.events) {
                    json ej = {{"id", k},
                               {"j", e.bg_index},
                               {"t_entry", e.t_entry},
                               {"t_exit", e.t_exit},
                               {"r", e.r_impact},
                               {"zeta", e.zeta},
                               {"v_bg", {e.v_bg_entry.x, e.v_bg_entry.y, e.v_bg_entry.z}},
                               {"min_sep", e.min_sep},
                               {"overlap", e.overlap}};
                    events_jsonl += ej.dump() + "\n";
                }
                if (!traj.any_overlap) {
                    const MarkedTree tree = extract_tree(traj, cfg);
                    trees_jsonl += tree_to_json(tree) + "\n";
                    const TreeClassification c = classify(tree, traj, bg, cfg);
                    cls_csv.row({static_cast<double>(k), static_cast<double>(c.good_dynamics),
                                 static_cast<double>(c.velocity_separation),
                                 static_cast<double>(c.time_separation),
                                 static_cast<double>(c.no_initial_overlap),
                                 static_cast<double>(c.no_recollision),
                                 static_cast<double>(c.good_tree),
                                 static_cast<double>(c.speed_bound),
                                 static_cast<double>(c.separation_bound),
                                 static_cast<double>(c.count_bound),
                                 static_cast<double>(c.gap_bound),
                                 static_cast<double>(c.in_R_eps)});
                }
            }
            write_text(cell / "events.jsonl", events_jsonl);
            write_text(cell / "trees.jsonl", trees_jsonl);
        }
    }
    write_manifest(rc, out, "simulate-md", timer.seconds());
    return 0;
}

int run_simulate_lbe(const RunConfig& rc, const fs::path& out) {
    Timer timer;
    for (double eps : rc.epsilon_grid) {
        const PotentialPtr pR = rc.potential_truncated(eps);
        for (int s = 0; s < rc.seeds; ++s) {
            const fs::path cell =
                out / ("eps_" + format_double(eps)) / ("seed_" + std::to_string(s));
            const auto walkers =
                build_lbe_ensemble(rc, eps, s, pR, rc.walkers, rc.horizon);
            CsvWriter snap(cell / "walkers.csv", {"id", "t", "x0", "x1", "x2", "v0", "v1", "v2"});
            std::string trees_jsonl;
            for (std::size_t k = 0; k < walkers.size(); ++k) {
                const auto& w = walkers[k];
                snap.row({static_cast<double>(k), w.state.t, w.state.x.x, w.state.x.y,
                          w.state.x.z, w.state.v.x, w.state.v.y, w.state.v.z});
                trees_jsonl += tree_to_json(w.tree) + "\n";
            }
            write_text(cell / "trees.jsonl", trees_jsonl);
            const auto est = estimate_density(walkers, rc.bins, {});
            CsvWriter est_csv(cell / "estimators.csv", {"bin", "value", "stderr"});
            for (std::size_t b = 0; b < est.bin_mass.size(); ++b) {
                if (est.bin_mass[b] == 0.0) continue;
                const double se = std::sqrt(est.bin_mass[b] * (1.0 - est.bin_mass[b]) /
                                            static_cast<double>(walkers.size()));
                est_csv.row({static_cast<double>(b), est.bin_mass[b], se});
            }
        }
    }
    write_manifest(rc, out, "simulate-lbe", timer.seconds());
    return 0;
}

int run_compare(const RunConfig& rc, const fs::path& out) {
    Timer timer;
    const auto tests = default_test_functions();
    CsvWriter table(out / "distance_report.csv",
                    {"epsilon", "seed_idx", "tv", "tv_lo", "tv_hi", "tv_counts",
                     "occupancy_warning", "gap_gauss0", "se_gauss0", "gap_gauss1", "se_gauss1",
                     "gap_poly3", "se_poly3"});
    // Stage decomposition of the end-to-end weak gap: long MD vs short MD vs
    // cutoff Boltzmann vs a larger-cutoff Boltzmann proxy for the limit.
    CsvWriter stages(out / "pipeline_stages.csv",
                     {"epsilon", "seed_idx", "test", "end_to_end", "stage_md", "stage_markov",
                      "stage_cutoff", "triangle_ok"});
    json summary;
    summary["cells"] = json::array();
    for (double eps : rc.epsilon_grid) {
        const PotentialPtr pR = rc.potential_truncated(eps);
        const double R_big = 2.0 * ((rc.explicit_cutoff > 0.0) ? rc.explicit_cutoff
                                                               : rc.sim(eps).R());
        const PotentialPtr pBig = truncate(rc.potential(), R_big);
        for (int s = 0; s < rc.seeds; ++s) {
            const auto md =
                build_md_ensemble(rc, eps, s, pR, rc.trajectories, rc.sample_time);
            const auto walkers = build_lbe_ensemble(rc, eps, s, pR, rc.walkers, rc.sample_time);
            const auto rep = density_distance(md.samples, walker_samples(walkers), rc.bins,
                                              tests, rc.seed ^ static_cast<std::uint64_t>(s));
            table.row({eps, static_cast<double>(s), rep.tv_binned, rep.tv_ci.lo, rep.tv_ci.hi,
                       rep.tv_collision_count, static_cast<double>(rep.occupancy_warning),
                       rep.weak_gaps[0].gap, rep.weak_gaps[0].stderr_, rep.weak_gaps[1].gap,
                       rep.weak_gaps[1].stderr_, rep.weak_gaps[2].gap,
                       rep.weak_gaps[2].stderr_});

            const auto md_long =
                build_md_ensemble(rc, eps, s, rc.potential(), rc.trajectories, rc.sample_time);
            const auto walkers_big =
                build_lbe_ensemble(rc, eps, s, pBig, rc.walkers, rc.sample_time);
            for (const auto& h : tests) {
                auto mean_h = [&h](const std::vector<PhaseSample>& xs) {
                    double m = 0.0;
                    for (const auto& x : xs) m += h(x.v);
                    return m / std::max<std::size_t>(xs.size(), 1);
                };
                const double a = mean_h(md_long.samples);
                const double b = mean_h(md.samples);
                const double cc = mean_h(walker_samples(walkers));
                const double d = mean_h(walker_samples(walkers_big));
                const double lhs = std::abs(a - d);
                const double rhs =
                    std::abs(a - b) + std::abs(b - cc) + std::abs(cc - d);
                stages.row_mixed({format_double(eps), std::to_string(s), h.id,
                                  format_double(lhs), format_double(std::abs(a - b)),
                                  format_double(std::abs(b - cc)),
                                  format_double(std::abs(cc - d)),
                                  (lhs <= rhs + 1e-12) ? "1" : "0"});
                if (lhs > rhs + 1e-12)
                    throw NumericalError("triangle decomposition violated (arithmetic)");
            }
            summary["cells"].push_back({{"epsilon", eps},
                                        {"seed_idx", s},
                                        {"tv", rep.tv_binned},
                                        {"md_overlap_fraction",
                                         static_cast<double>(md.overlap_count) /
                                             std::max<std::size_t>(md.count, 1)}});
        }
    }
    write_manifest(rc, out, "compare", timer.seconds(), summary);
    return 0;
}

int run_sweep(const RunConfig& rc, const fs::path& out) {
    Timer timer;
    CsvWriter div_csv(out / "divergence.csv",
                      {"epsilon", "seed_idx", "median_gap", "median_lo", "median_hi", "max_gap",
                       "fraction_differing", "differing_lo", "differing_hi",
                       "fraction_not_restricted"});
    CsvWriter excl_csv(out / "excluded.csv",
                       {"epsilon", "seed_idx", "fraction_not_good_tree",
                        "fraction_not_restricted", "lambda_bound", "xi_formula",
                        "xi_acceptance", "xi_stderr"});
    for (double eps : rc.epsilon_grid) {
        const PotentialPtr pR = rc.potential_truncated(eps);
        for (int s = 0; s < rc.seeds; ++s) {
            const auto cell = divergence_cell(rc, eps, s, rc.trajectories);
            div_csv.row({eps, static_cast<double>(s), cell.median_gap, cell.median_ci.lo,
                         cell.median_ci.hi, cell.max_gap, cell.fraction_differing,
                         cell.differing_ci.lo, cell.differing_ci.hi,
                         cell.fraction_not_restricted});
            const auto md = build_md_ensemble(rc, eps, s, pR, rc.trajectories, rc.sample_time);
            const auto rep = measure_excluded(rc.sim(eps), md.classes);
            const auto xi = xi_acceptance_check(rc, eps, s, 400);
            excl_csv.row({eps, static_cast<double>(s), rep.fraction_not_good_tree,
                          rep.fraction_not_restricted, rep.lambda_bound, xi.xi_formula,
                          xi.acceptance, xi.stderr_});
        }
    }
    write_manifest(rc, out, "sweep", timer.seconds());
    return 0;
}

int run_validate(const RunConfig& rc, const fs::path& out) {
    Timer timer;
    std::string report;
    bool ok = true;
    auto check = [&](const std::string& name, bool pass, const std::string& detail = "") {
        report += std::string(pass ? "PASS " : "FAIL ") + name +
                  (detail.empty() ? "" : " (" + detail + ")") + "\n";
        ok = ok && pass;
    };

    // Scattering conservation mini-suite.
    {
        StreamRng rng(rc.seed, rng_domain::kGeneric);
        auto p = make_power_law(4.0);
        bool pass = true;
        for (int i = 0; i < 500; ++i) {
            const Vec3 v = rng.gaussian3(1.0);
            Vec3 vs = rng.gaussian3(1.0);
            if (norm(vs - v) < 1e-9) vs.x += 1.0;
            const auto g = ImpactGeometry::make(rng.uniform(0.0, 5.0),
                                                rng.uniform(0.0, 2.0 * M_PI), vs - v);
            const auto o = scatter(*p, g, v, vs, 1e-10);
            pass = pass && norm((o.v_prime + o.v_star_prime) - (v + vs)) < 1e-12;
            pass = pass &&
                   std::abs((norm2(o.v_prime) + norm2(o.v_star_prime)) - (norm2(v) + norm2(vs))) <
                       1e-12 * std::max(1.0, norm2(v) + norm2(vs));
        }
        check("scatter_conservation", pass);
    }
    // Free / head-on exactness.
    {
        auto zero = make_zero_potential();
        auto p = make_power_law(4.0);
        check("free_angle_zero", std::abs(deviation_angle(*zero, 1.0, 1.0, 1e-10)) < 1e-10);
        check("head_on_pi", std::abs(deviation_angle(*p, 0.0, 1.0, 1e-10) - M_PI) < 1e-10);
    }
    // C1 decreasing.
    {
        double prev = 1e100;
        bool pass = true;
        for (double R : {10.0, 100.0, 1000.0}) {
            const double c1 = c1_formula(R, 4.0, 1.0).total;
            pass = pass && c1 < prev;
            prev = c1;
        }
        check("c1_decreasing", pass);
    }
    // Scattering-time bound shape.
    {
        auto pR = truncate(make_power_law(4.0), 10.0);
        const double eta = 0.2;
        double worst = 0.0;
        for (double r : {0.0, 2.0, 5.0, 8.0})
            for (double w : {0.2, 0.5, 1.0})
                worst = std::max(worst, scattering_time(*pR, r, w, 1e-9) * eta / 10.0);
        check("tau_bound_shape", worst < 10.0, "max tau*eta/R = " + format_double(worst));
    }
    // Determinism mini: two identical tiny LBE runs byte-compare.
    {
        RunConfig mini = rc;
        mini.walkers = 50;
        mini.seeds = 1;
        const double eps = rc.epsilon_grid.front();
        const auto w1 = build_lbe_ensemble(mini, eps, 0, mini.potential_truncated(eps), 50,
                                           mini.horizon);
        const auto w2 = build_lbe_ensemble(mini, eps, 0, mini.potential_truncated(eps), 50,
                                           mini.horizon);
        bool pass = w1.size() == w2.size();
        for (std::size_t i = 0; pass && i < w1.size(); ++i)
            pass = w1[i].state.x.x == w2[i].state.x.x && w1[i].state.v.x == w2[i].state.v.x &&
                   w1[i].tree.n() == w2[i].tree.n();
        check("determinism", pass);
    }

    write_text(out / "validate.txt", report);
    write_manifest(rc, out, "validate", timer.seconds());
    return ok ? 0 : 3;
}

int run_subcommand(const std::string& name, const std::string& config_path,
                   const std::string& output_override) {
    try {
        const RunConfig rc = RunConfig::from_file(config_path);
        const fs::path out =
            output_override.empty() ? fs::path(rc.output_dir) / name : fs::path(output_override);
        std::filesystem::create_directories(out);
        if (name == "scatter") return run_scatter(rc, out);
        if (name == "simulate-md") return run_simulate_md(rc, out);
        if (name == "simulate-lbe") return run_simulate_lbe(rc, out);
        if (name == "compare") return run_compare(rc, out);
        if (name == "sweep") return run_sweep(rc, out);
        if (name == "validate") return run_validate(rc, out);
        std::fprintf(stderr, "unknown subcommand '%s'\n", name.c_str());
        return 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
}

}  // namespace rgkit
