#include "core/trees.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/scattering.hpp"

namespace rgkit {

MarkedTree MarkedTree::dropped_final() const {
    MarkedTree t = *this;
    if (!t.nodes.empty()) t.nodes.pop_back();
    return t;
}

MarkedTree extract_tree(const Trajectory& traj, const SimConfig& cfg) {
    (void)cfg;
    if (traj.any_overlap)
        throw NumericalError("extract_tree: overlapping events; tree is not well formed");
    MarkedTree tree;
    Vec3 x0, v0;
    traj.tagged_at(0.0, x0, v0);
    tree.root_x = wrap01(x0);
    tree.root_v = v0;
    for (const auto& e : traj.events) {
        TreeNode node;
        node.t = e.t_entry;
        node.r = e.r_impact;
        node.zeta = e.zeta;
        node.v = e.v_bg_entry;
        tree.nodes.push_back(node);
    }
    std::sort(tree.nodes.begin(), tree.nodes.end(),
              [](const TreeNode& a, const TreeNode& b) { return a.t < b.t; });
    return tree;
}

namespace {

// Minimum tagged-background separation over [t0, t1], sampling free legs
// analytically and dense steps at their integrator resolution.
double min_separation(const Trajectory& traj, int j, double t0, double t1) {
    double best = 1e30;
    for (const auto& piece : traj.pieces) {
        const double a = std::max(piece.t0, t0);
        const double b = std::min(piece.t1, t1);
        if (b <= a) continue;
        if (piece.free) {
            // Straight vs straight, split at the background's leg boundaries,
            // chunked so the minimum image is stable within a chunk.
            const auto& legs = traj.bg_legs[static_cast<std::size_t>(j)];
            double seg_a = a;
            while (seg_a < b) {
                const BgLeg* leg = &legs.front();
                double seg_b = b;
                for (const auto& cand : legs) {
                    if (cand.t0 <= seg_a) leg = &cand;
                    else { seg_b = std::min(seg_b, cand.t0); break; }
                }
                const Vec3 xt = piece.x0 + piece.v * (seg_a - piece.t0);
                const Vec3 xj = leg->x0 + leg->v * (seg_a - leg->t0);
                const Vec3 u = piece.v - leg->v;
                Vec3 rel = min_image(xt - xj);
                const double span = seg_b - seg_a;
                const double speed = std::max(norm(u), 1e-300);
                const double chunk = 0.2 / speed;
                double s = 0.0;
                while (s < span) {
                    const double ds = std::min(chunk, span - s);
                    const double qstar = std::clamp(-dot(rel, u) / (speed * speed), 0.0, ds);
                    for (double q : {0.0, qstar, ds})
                        best = std::min(best, norm(rel + u * q));
                    rel = min_image(rel + u * ds);
                    s += ds;
                }
                seg_a = seg_b;
            }
        } else {
            for (const auto& st : piece.steps) {
                if (st.t1 < a || st.t0 > b) continue;
                for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    const double tt = std::clamp(st.t0 + frac * (st.t1 - st.t0), a, b);
                    Vec3 x, v;
                    traj.tagged_at(tt, x, v);
                    best = std::min(best, norm(min_image(x - traj.background_at(j, tt))));
                }
            }
        }
    }
    return best;
}

}  // namespace

TreeClassification classify(const MarkedTree& tree, const Trajectory& traj,
                            const Background& bg, const SimConfig& cfg) {
    TreeClassification c;
    const double R = cfg.R();
    const double eps = cfg.epsilon;
    const double r_event = R * eps;

    // Good dynamics (1): velocity separation > 0, and good tree (2): >= V1.
    double min_vsep = 1e30;
    for (const auto& e : traj.events)
        min_vsep = std::min(min_vsep, norm(e.v_tag_entry - e.v_bg_entry));
    if (!tree.nodes.empty()) {
        c.velocity_separation = min_vsep > 0.0;
        c.separation_bound = min_vsep >= cfg.V1();
    }

    // (2) strictly increasing collision times.
    for (std::size_t i = 1; i < tree.nodes.size(); ++i)
        if (!(tree.nodes[i].t > tree.nodes[i - 1].t)) c.time_separation = false;

    // (3) no initial overlap at diameter R eps.
    for (std::size_t j = 0; j < bg.size(); ++j)
        if (torus_dist(wrap01(tree.root_x), bg.x0[j]) <= r_event) c.no_initial_overlap = false;

    // (4) recollision free: each collided background stays further than R eps
    // outside its own scattering window.
    for (const auto& e : traj.events) {
        const double before = min_separation(traj, e.bg_index, 0.0, e.t_entry - 1e-12);
        const double after = min_separation(traj, e.bg_index, e.t_exit + 1e-12, cfg.horizon);
        const double guard = r_event * (1.0 - 1e-9);
        if (before < guard || after < guard) c.no_recollision = false;
    }
    if (traj.any_overlap) c.no_recollision = false;

    c.good_dynamics = c.velocity_separation && c.time_separation && c.no_initial_overlap &&
                      c.no_recollision;

    // Good-tree quantitative conditions.
    const double V2 = cfg.V2();
    double vmax = norm(tree.root_v);
    const double tau = tree.tau();
    for (const auto& piece : traj.pieces) {
        if (piece.t0 > tau) break;
        if (piece.free) {
            vmax = std::max(vmax, norm(piece.v));
        } else {
            for (const auto& st : piece.steps) {
                if (st.t0 > tau) break;
                vmax = std::max(vmax, std::max(norm(st.v0), norm(st.v1)));
            }
        }
    }
    for (const auto& node : tree.nodes) vmax = std::max(vmax, norm(node.v));
    c.speed_bound = vmax <= V2;
    c.count_bound = static_cast<double>(tree.n()) <= cfg.M();
    for (std::size_t i = 1; i < tree.nodes.size(); ++i)
        if (!(tree.nodes[i].t - tree.nodes[i - 1].t > cfg.delta())) c.gap_bound = false;
    c.good_tree = c.good_dynamics && c.speed_bound && c.separation_bound && c.count_bound &&
                  c.gap_bound;

    // Restricted impact parameters (the set removed against grazing leakage).
    const double r_cap = R - cfg.b() / eps * (1.0 + 1.0 / cfg.V1());
    for (const auto& node : tree.nodes)
        if (!(node.r <= r_cap)) c.impact_bound = false;
    c.in_R_eps = c.good_tree && c.impact_bound;
    return c;
}

PhaseState replay_tree(const MarkedTree& tree, const PotentialPtr& p_short, double horizon,
                       double quad_tol) {
    Vec3 x = tree.root_x;
    Vec3 v = tree.root_v;
    double t = 0.0;
    for (const auto& node : tree.nodes) {
        x += v * (node.t - t);
        t = node.t;
        const Vec3 w = node.v - v;
        if (norm(w) > 0.0) {
            const auto g = ImpactGeometry::make(node.r, node.zeta, w);
            const auto out = scatter(*p_short, g, v, node.v, quad_tol, /*with_tau=*/false);
            v = out.v_prime;
        }
    }
    x += v * (horizon - t);
    return {wrap01(x), v, horizon};
}

ExcludedMeasureReport measure_excluded(const SimConfig& cfg,
                                       const std::vector<TreeClassification>& classes) {
    ExcludedMeasureReport rep;
    const std::size_t n = classes.size();
    auto add = [&](const std::string& name, auto pred) {
        ExcludedMeasureRow row;
        row.condition = name;
        row.total = n;
        for (const auto& c : classes)
            if (!pred(c)) ++row.failures;
        row.ci = wilson(row.failures, n);
        rep.rows.push_back(row);
    };
    add("velocity_separation", [](const TreeClassification& c) { return c.velocity_separation; });
    add("time_separation", [](const TreeClassification& c) { return c.time_separation; });
    add("no_initial_overlap", [](const TreeClassification& c) { return c.no_initial_overlap; });
    add("no_recollision", [](const TreeClassification& c) { return c.no_recollision; });
    add("good_dynamics", [](const TreeClassification& c) { return c.good_dynamics; });
    add("speed_bound", [](const TreeClassification& c) { return c.speed_bound; });
    add("separation_bound", [](const TreeClassification& c) { return c.separation_bound; });
    add("count_bound", [](const TreeClassification& c) { return c.count_bound; });
    add("gap_bound", [](const TreeClassification& c) { return c.gap_bound; });
    add("good_tree", [](const TreeClassification& c) { return c.good_tree; });
    add("in_R_eps", [](const TreeClassification& c) { return c.in_R_eps; });

    if (n > 0) {
        std::size_t bad_tree = 0, bad_restricted = 0;
        for (const auto& c : classes) {
            if (!c.good_tree) ++bad_tree;
            if (!c.in_R_eps) ++bad_restricted;
        }
        rep.fraction_not_good_tree = static_cast<double>(bad_tree) / n;
        rep.fraction_not_restricted = static_cast<double>(bad_restricted) / n;
    }

    // Lemma-style measure bound: lambda(G \ R) <= V2 sum_k (T V2 b (1+1/V1))^k.
    const double base = cfg.horizon * cfg.V2() * cfg.b() * (1.0 + 1.0 / cfg.V1());
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= static_cast<int>(std::floor(cfg.M())); ++k) {
        term *= base;
        sum += term;
    }
    rep.lambda_bound = cfg.V2() * sum;
    return rep;
}

std::string tree_to_json(const MarkedTree& tree) {
    nlohmann::json j;
    j["root"] = {{tree.root_x.x, tree.root_x.y, tree.root_x.z},
                 {tree.root_v.x, tree.root_v.y, tree.root_v.z}};
    auto& nodes = j["nodes"];
    nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes)
        nodes.push_back({n.t, n.r, n.zeta, {n.v.x, n.v.y, n.v.z}});
    return j.dump();
}

MarkedTree tree_from_json(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    MarkedTree t;
    t.root_x = {j["root"][0][0], j["root"][0][1], j["root"][0][2]};
    t.root_v = {j["root"][1][0], j["root"][1][1], j["root"][1][2]};
    for (const auto& n : j["nodes"]) {
        TreeNode node;
        node.t = n[0];
        node.r = n[1];
        node.zeta = n[2];
        node.v = {n[3][0], n[3][1], n[3][2]};
        t.nodes.push_back(node);
    }
    return t;
}

}  // namespace rgkit
