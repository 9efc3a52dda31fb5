#pragma once

#include <string>
#include <vector>

#include "core/dynamics.hpp"
#include "core/potentials.hpp"
#include "core/stats.hpp"

namespace rgkit {

// Collision-history record: root state plus one node per near collision.
struct TreeNode {
    double t = 0.0;     // entry time of the collision
    double r = 0.0;     // microscopic impact parameter in [0, R]
    double zeta = 0.0;  // azimuth in [0, 2 pi)
    Vec3 v;             // pre-collision background velocity
};

struct MarkedTree {
    Vec3 root_x, root_v;
    std::vector<TreeNode> nodes;

    std::size_t n() const { return nodes.size(); }
    double tau() const { return nodes.empty() ? 0.0 : nodes.back().t; }
    const TreeNode& final_marker() const { return nodes.back(); }
    // The bar operation: drop the final collision.
    MarkedTree dropped_final() const;
};

struct TreeClassification {
    // Good-dynamics conditions (Def-level flags).
    bool velocity_separation = true;  // min |v(t_i^-) - v_i| > 0
    bool time_separation = true;      // strictly increasing t_i
    bool no_initial_overlap = true;   // all backgrounds outside R eps at t=0
    bool no_recollision = true;
    bool good_dynamics = true;

    // Good-tree conditions on top of good dynamics.
    bool speed_bound = true;       // sup |v|, max |v_j| <= V2
    bool separation_bound = true;  // min |v(t_i^-) - v_i| >= V1
    bool count_bound = true;       // n <= M
    bool gap_bound = true;         // |t_i - t_{i-1}| > delta
    bool good_tree = true;

    bool impact_bound = true;  // r_i <= R - (b/eps)(1 + 1/V1)
    bool in_R_eps = true;
};

// One node per near-collision event. Throws on overlapping events (two
// backgrounds simultaneously inside R eps); such trajectories are excluded
// from the good set by construction.
MarkedTree extract_tree(const Trajectory& traj, const SimConfig& cfg);

// Evaluates every good-dynamics / good-tree / restricted-set condition.
TreeClassification classify(const MarkedTree& tree, const Trajectory& traj,
                            const Background& bg, const SimConfig& cfg);

// Replays root + nodes through the scattering map (free transport between
// collisions); returns the idealized final state.
PhaseState replay_tree(const MarkedTree& tree, const PotentialPtr& p_short, double horizon,
                       double quad_tol);

struct ExcludedMeasureRow {
    std::string condition;
    std::size_t failures = 0;
    std::size_t total = 0;
    WilsonInterval ci;
};

struct ExcludedMeasureReport {
    std::vector<ExcludedMeasureRow> rows;
    double lambda_bound = 0.0;  // V2 sum_k (T V2 b (1+1/V1))^k
    double fraction_not_good_tree = 0.0;
    double fraction_not_restricted = 0.0;
};

ExcludedMeasureReport measure_excluded(const SimConfig& cfg,
                                       const std::vector<TreeClassification>& classes);

// JSON-lines serialization: {"root":[[x],[v]],"nodes":[[t,r,zeta,[v]],...]}.
std::string tree_to_json(const MarkedTree& tree);
MarkedTree tree_from_json(const std::string& line);

}  // namespace rgkit
