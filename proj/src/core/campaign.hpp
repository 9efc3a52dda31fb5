#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "core/compare.hpp"
#include "core/config.hpp"
#include "core/lbe_mc.hpp"
#include "core/trees.hpp"

namespace rgkit {

// Substream derivation shared by every campaign: one independent counter
// stream per (purpose, replica seed, item index).
std::uint64_t substream(std::uint64_t domain, int seed_idx, std::uint64_t item);

struct MdEnsemble {
    std::vector<PhaseSample> samples;  // tagged phase state at the sample time
    std::vector<MarkedTree> trees;     // overlap-free trajectories only
    std::vector<TreeClassification> classes;
    std::size_t overlap_count = 0;
    std::size_t count = 0;
};

// Molecular-dynamics ensemble under the given potential: per-trajectory
// backgrounds are conditioned on no initial overlap around the tagged start.
MdEnsemble build_md_ensemble(const RunConfig& rc, double eps, int seed_idx,
                             const PotentialPtr& pot, int n_traj, double sample_time);

std::vector<JumpWalker> build_lbe_ensemble(const RunConfig& rc, double eps, int seed_idx,
                                           const PotentialPtr& p_short, int n_walkers,
                                           double horizon);

std::vector<PhaseSample> walker_samples(const std::vector<JumpWalker>& walkers);

// Unconditioned-background acceptance fraction vs xi(eps, R).
struct XiCheck {
    double xi_formula = 0.0;
    double acceptance = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};
XiCheck xi_acceptance_check(const RunConfig& rc, double eps, int seed_idx, int n_samples);

// Divergence campaign cell (long vs truncated dynamics on shared data).
DivergenceCell divergence_cell(const RunConfig& rc, double eps, int seed_idx, int n_traj);

// Subcommand drivers; each writes its artifacts plus manifest.json under out.
int run_scatter(const RunConfig& rc, const std::filesystem::path& out);
int run_simulate_md(const RunConfig& rc, const std::filesystem::path& out);
int run_simulate_lbe(const RunConfig& rc, const std::filesystem::path& out);
int run_compare(const RunConfig& rc, const std::filesystem::path& out);
int run_sweep(const RunConfig& rc, const std::filesystem::path& out);
int run_validate(const RunConfig& rc, const std::filesystem::path& out);

// Dispatch by name; returns the process exit code contract:
// 0 ok, 1 config error, 2 numerical failure, 3 validation threshold violation.
int run_subcommand(const std::string& name, const std::string& config_path,
                   const std::string& output_override);

std::vector<TestFunction> default_test_functions();

}  // namespace rgkit
