#include "core/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/integrator.hpp"

namespace rgkit {

int SimConfig::n() const {
    if (n_background > 0) return n_background;
    return static_cast<int>(std::lround(1.0 / (epsilon * epsilon)));
}

double SimConfig::r_exp() const {
    return (r_exponent > 0.0) ? r_exponent : 1.0 / (3.0 + pot_gamma);
}

double SimConfig::R() const { return std::pow(epsilon, -r_exp()); }

double SimConfig::b() const {
    return cb * std::exp(-cb * std::pow(1.0 / epsilon, pot_gamma / (3.0 + pot_gamma)));
}

double SimConfig::xi() const {
    const double ball = 4.0 / 3.0 * M_PI * std::pow(R() * epsilon, 3.0);
    return std::pow(1.0 - ball, static_cast<double>(n()));
}

void SimConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (!(R() * epsilon < 0.25))
        throw ConfigError("interaction diameter R*eps must be below 1/4 of the torus");
    const double x = xi();
    if (!(x > 0.0 && x <= 1.0)) throw ConfigError("xi(eps,R) must lie in (0,1]");
    if (!(pot_s > 2.0)) throw ConfigError("decay exponent s must exceed 2");
    if (!(pot_gamma > 0.0)) throw ConfigError("gamma must be positive");
}

Background sample_background(const SimConfig& cfg, const VelocityDensity& g,
                             const std::optional<Vec3>& exclusion, StreamRng& rng) {
    const double r_excl = cfg.R() * cfg.epsilon;
    if (exclusion) {
        const double ball = 4.0 / 3.0 * M_PI * r_excl * r_excl * r_excl;
        if (ball >= 0.5)
            throw ConfigError("exclusion ball fills half the torus; cannot condition");
    }
    Background bg;
    const int n = cfg.n();
    bg.x0.reserve(n);
    bg.v0.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec3 x;
        for (int guard = 0;; ++guard) {
            x = {rng.uniform(), rng.uniform(), rng.uniform()};
            if (!exclusion || torus_dist(x, *exclusion) > r_excl) break;
            if (guard > 1'000'000) throw NumericalError("background rejection loop overran");
        }
        bg.x0.push_back(x);
        bg.v0.push_back(g.sample(rng));
    }
    return bg;
}

double activation_radius(const RadialPotential& p, double eps, double force_threshold) {
    if (p.cutoff) return *p.cutoff * eps;
    // Smallest rho beyond which the (monotone) force stays under threshold.
    double lo = std::max(p.rho2, 1e-6), hi = lo;
    if (-p.dpsi(lo) <= force_threshold) return lo * eps;
    while (-p.dpsi(hi) > force_threshold) {
        hi *= 2.0;
        if (hi > 1e9) return 1e9 * eps;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (-p.dpsi(mid) > force_threshold) lo = mid; else hi = mid;
    }
    return hi * eps;
}

namespace {

// Cubic Hermite interpolation across one dense step.
inline Vec3 hermite_pos(const DenseStep& s, double t) {
    const double h = s.t1 - s.t0;
    if (h <= 0.0) return s.x1;
    const double u = (t - s.t0) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    return s.x0 * h00 + s.v0 * (h10 * h) + s.x1 * h01 + s.v1 * (h11 * h);
}
inline Vec3 hermite_vel(const DenseStep& s, double t) {
    const double h = s.t1 - s.t0;
    if (h <= 0.0) return s.v1;
    const double u = (t - s.t0) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    return s.v0 * h00 + s.a0 * (h10 * h) + s.v1 * h01 + s.a1 * (h11 * h);
}

// Earliest time in (0, horizon] at which the straight relative motion
// y(s) = minimg(y0 + s u) reaches the given radius. Chunked so the nearest
// image cannot change within a chunk (radius < 0.3, displacement <= 0.2).
std::optional<double> straight_entry_time(const Vec3& y0_in, const Vec3& u, double radius,
                                          double horizon) {
    const double speed = norm(u);
    if (speed <= 0.0 || horizon <= 0.0) return std::nullopt;
    const double chunk = 0.2 / speed;
    double s0 = 0.0;
    Vec3 base = min_image(y0_in);
    while (s0 < horizon) {
        const double ds = std::min(chunk, horizon - s0);
        const double a = speed * speed;
        const double b = 2.0 * dot(base, u);
        const double c = norm2(base) - radius * radius;
        if (c <= 0.0) return s0;  // already inside at chunk start
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0 && b < 0.0) {
            const double root = (-b - std::sqrt(disc)) / (2.0 * a);
            if (root >= 0.0 && root <= ds) return s0 + root;
        }
        s0 += ds;
        base = min_image(base + u * ds);
    }
    return std::nullopt;
}

struct Engine {
    const SimConfig& cfg;
    const RadialPotential& pot;
    double eps;
    double r_event;   // R(eps)*eps, the near-collision radius
    double rho_act;   // activation radius >= r_event
    bool always_active = false;

    double t = 0.0;
    Vec3 x_tag, v_tag;  // tagged position kept unwrapped
    std::vector<std::vector<BgLeg>> legs;
    std::vector<int> active;
    std::vector<double> y;        // state vector while any body is active
    std::vector<int> open_event;  // bg index -> index into out.events, or -1
    Trajectory out;
    Rk45 rk;

    Engine(const SimConfig& c, const RadialPotential& p, const Background& b, const Vec3& x0,
           const Vec3& v0)
        : cfg(c), pot(p), eps(c.epsilon) {
        r_event = c.R() * eps;
        rho_act = std::max(r_event, activation_radius(p, eps, c.force_threshold));
        always_active = rho_act > 0.3;
        x_tag = wrap01(x0);
        v_tag = v0;
        legs.assign(b.size(), {});
        for (std::size_t j = 0; j < b.size(); ++j) legs[j].push_back({0.0, b.x0[j], b.v0[j]});
        open_event.assign(b.size(), -1);
        rk.rtol = c.integrator_rtol;
        rk.atol = c.integrator_atol;
        out.force_range = rho_act;
    }

    Vec3 bg_pos(int j, double at) const {
        const BgLeg& L = legs[static_cast<std::size_t>(j)].back();
        return L.x0 + L.v * (at - L.t0);
    }
    Vec3 bg_vel(int j) const { return legs[static_cast<std::size_t>(j)].back().v; }

    bool is_active(int j) const {
        return std::find(active.begin(), active.end(), j) != active.end();
    }

    // State layout: [x_tag, v_tag, then (x_j, v_j) for j in `active`].
    void deriv(const std::vector<double>& s, std::vector<double>& d) const {
        d.assign(s.size(), 0.0);
        const Vec3 xt{s[0], s[1], s[2]};
        Vec3 acc{};
        d[0] = s[3];
        d[1] = s[4];
        d[2] = s[5];
        for (std::size_t k = 0; k < active.size(); ++k) {
            const std::size_t o = 6 + 6 * k;
            d[o] = s[o + 3];
            d[o + 1] = s[o + 4];
            d[o + 2] = s[o + 5];
            const Vec3 xj{s[o], s[o + 1], s[o + 2]};
            const Vec3 yrel = min_image(xt - xj);
            const double dist = norm(yrel);
            if (dist <= 0.0 || dist > rho_act) continue;
            const double f = pot.dpsi(dist / eps);  // <= 0
            if (f == 0.0) continue;
            // Momentum-conserving pair force, half on each side.
            const Vec3 a = yrel * (-f / (2.0 * eps * dist));
            acc += a;
            d[o + 3] = -a.x;
            d[o + 4] = -a.y;
            d[o + 5] = -a.z;
        }
        d[3] = acc.x;
        d[4] = acc.y;
        d[5] = acc.z;
    }

    double max_speed(const std::vector<double>& s) const {
        double m = norm(Vec3{s[3], s[4], s[5]});
        for (std::size_t k = 0; k < active.size(); ++k) {
            const std::size_t o = 6 + 6 * k;
            m = std::max(m, norm(Vec3{s[o + 3], s[o + 4], s[o + 5]}));
        }
        return m;
    }

    void open_encounter(int j, double at, const Vec3& xt, const Vec3& vt, const Vec3& xj,
                        const Vec3& vj, bool at_start) {
        EncounterEvent e;
        e.bg_index = j;
        e.t_entry = at;
        e.t_exit = cfg.horizon;
        e.entered_at_start = at_start;
        e.v_bg_entry = vj;
        e.v_tag_entry = vt;
        const Vec3 yrel = min_image(xt - xj);
        const Vec3 u = vt - vj;
        const double un = norm(u);
        e.min_sep = norm(yrel);
        if (un > 0.0) {
            const Vec3 uhat = u / un;
            const Vec3 perp = yrel - uhat * dot(yrel, uhat);
            e.r_impact = norm(perp) / eps;
            if (norm(perp) > 0.0) {
                // e(zeta) points opposite the perpendicular offset; basis built
                // on what, w = v_bg - v_tag = -u.
                const Vec3 what = uhat * -1.0;
                int least = 0;
                double best = std::abs(what[0]);
                for (int i = 1; i < 3; ++i)
                    if (std::abs(what[i]) < best) { best = std::abs(what[i]); least = i; }
                Vec3 axis{};
                axis[least] = 1.0;
                const Vec3 b1 = normalized(axis - what * dot(axis, what));
                const Vec3 b2 = cross(what, b1);
                const Vec3 target = normalized(perp) * -1.0;
                e.zeta = std::atan2(dot(target, b2), dot(target, b1));
                if (e.zeta < 0.0) e.zeta += 2.0 * M_PI;
            }
        }
        for (std::size_t jj = 0; jj < open_event.size(); ++jj) {
            if (open_event[jj] >= 0) {
                out.events[static_cast<std::size_t>(open_event[jj])].overlap = true;
                e.overlap = true;
                out.any_overlap = true;
            }
        }
        open_event[static_cast<std::size_t>(j)] = static_cast<int>(out.events.size());
        out.events.push_back(e);
    }

    void close_encounter(int j, double at, bool clipped) {
        if (open_event[static_cast<std::size_t>(j)] < 0) return;
        EncounterEvent& e = out.events[static_cast<std::size_t>(open_event[j])];
        e.t_exit = at;
        e.clipped_at_end = clipped;
        open_event[static_cast<std::size_t>(j)] = -1;
    }

    void free_leg_until(double t_end) {
        if (t_end <= t) return;
        PathPiece piece;
        piece.free = true;
        piece.t0 = t;
        piece.t1 = t_end;
        piece.x0 = x_tag;
        piece.v = v_tag;
        out.pieces.push_back(piece);
        x_tag += v_tag * (t_end - t);
        t = t_end;
    }

    std::optional<std::pair<double, int>> next_activation(double t_max) const {
        std::optional<std::pair<double, int>> best;
        for (std::size_t j = 0; j < legs.size(); ++j) {
            const int jj = static_cast<int>(j);
            if (is_active(jj)) continue;
            const Vec3 yrel = x_tag - bg_pos(jj, t);
            const Vec3 u = v_tag - bg_vel(jj);
            auto s = straight_entry_time(yrel, u, rho_act, t_max - t);
            if (s && (!best || *s < best->first)) best = std::make_pair(*s, jj);
        }
        return best;
    }

    void push_tagged_state() {
        y.assign(6, 0.0);
        y[0] = x_tag.x; y[1] = x_tag.y; y[2] = x_tag.z;
        y[3] = v_tag.x; y[4] = v_tag.y; y[5] = v_tag.z;
    }

    void activate(int j, double at) {
        const Vec3 xj = bg_pos(j, at);
        const Vec3 vj = bg_vel(j);
        legs[static_cast<std::size_t>(j)].back().valid_until = at;
        active.push_back(j);
        y.resize(6 + 6 * active.size());
        const std::size_t o = y.size() - 6;
        y[o] = xj.x; y[o + 1] = xj.y; y[o + 2] = xj.z;
        y[o + 3] = vj.x; y[o + 4] = vj.y; y[o + 5] = vj.z;
        // Truncated potentials: activation boundary is the event boundary, so
        // the encounter opens here with exact straight-line entry data.
        if (rho_act <= r_event * (1.0 + 1e-12) && open_event[static_cast<std::size_t>(j)] < 0)
            open_encounter(j, at, x_tag, v_tag, xj, vj, at <= 0.0);
    }

    void deactivate(std::size_t k, double at) {
        const int j = active[k];
        const std::size_t o = 6 + 6 * k;
        legs[static_cast<std::size_t>(j)].push_back(
            {at, Vec3{y[o], y[o + 1], y[o + 2]}, Vec3{y[o + 3], y[o + 4], y[o + 5]}});
        active.erase(active.begin() + static_cast<long>(k));
        y.erase(y.begin() + static_cast<long>(o), y.begin() + static_cast<long>(o + 6));
    }

    void sync_tagged_from_state() {
        x_tag = {y[0], y[1], y[2]};
        v_tag = {y[3], y[4], y[5]};
    }

    void run_active_until(double t_max) {
        PathPiece piece;
        piece.free = false;
        piece.t0 = t;

        std::vector<int> candidates;
        double cand_valid_until = t;
        const double margin = std::max(4.0 * rho_act, 0.05);
        auto rebuild_candidates = [&]() {
            candidates.clear();
            if (always_active) { cand_valid_until = t_max; return; }
            double vmax_bg = 0.0;
            const Vec3 xt{y[0], y[1], y[2]};
            for (std::size_t j = 0; j < legs.size(); ++j) {
                const int jj = static_cast<int>(j);
                if (is_active(jj)) continue;
                const double d = norm(min_image(xt - bg_pos(jj, t)));
                if (d < rho_act + margin) candidates.push_back(jj);
                vmax_bg = std::max(vmax_bg, norm(bg_vel(jj)));
            }
            const double vcap = norm(Vec3{y[3], y[4], y[5]}) + vmax_bg + 1e-12;
            cand_valid_until = t + 0.5 * margin / vcap;
        };
        rebuild_candidates();

        auto derivative = [this](const std::vector<double>& s, std::vector<double>& d) {
            deriv(s, d);
        };

        std::vector<double> d0, d1;
        double h_next = 0.0;
        while (!active.empty() && t < t_max) {
            if (t >= cand_valid_until) rebuild_candidates();
            const double clamp = eps / (4.0 * std::max(max_speed(y), 1e-12));
            if (h_next <= 0.0) h_next = clamp;
            const double h_try = std::min({h_next, clamp, t_max - t});

            const std::vector<double> y_pre = y;
            deriv(y_pre, d0);
            auto res = rk.step(derivative, y, h_try);
            double t0 = t, t1 = t + res.h_taken;
            deriv(y, d1);

            auto tagged_step = [&]() {
                return DenseStep{t0, t1,
                                 {y_pre[0], y_pre[1], y_pre[2]}, {y_pre[3], y_pre[4], y_pre[5]},
                                 {d0[3], d0[4], d0[5]},
                                 {y[0], y[1], y[2]}, {y[3], y[4], y[5]},
                                 {d1[3], d1[4], d1[5]}};
            };

            // Arrival of a new background inside rho_act: cut the step at the
            // crossing and splice the body into the system.
            int arrived = -1;
            double t_arr = t1;
            for (int c : candidates) {
                if (is_active(c)) continue;
                const Vec3 xt1{y[0], y[1], y[2]};
                if (norm(min_image(xt1 - bg_pos(c, t1))) < rho_act) {
                    const DenseStep st = tagged_step();
                    double lo = t0, hi = t1;
                    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        if (norm(min_image(hermite_pos(st, mid) - bg_pos(c, mid))) < rho_act)
                            hi = mid;
                        else
                            lo = mid;
                    }
                    if (lo < t_arr) { t_arr = lo; arrived = c; }
                }
            }
            if (arrived >= 0 && t_arr > t0 + 1e-13) {
                y = y_pre;
                auto res2 = rk.step(derivative, y, t_arr - t0);
                t1 = t0 + res2.h_taken;
                deriv(y, d1);
                res.h_next = res2.h_next;
            }

            const DenseStep st = tagged_step();
            piece.steps.push_back(st);
            t = t1;

            // Event-radius crossings and minimum separation per active body.
            for (std::size_t k = 0; k < active.size(); ++k) {
                const int j = active[k];
                const std::size_t o = 6 + 6 * k;
                const DenseStep sj{t0, t1,
                                   {y_pre[o], y_pre[o + 1], y_pre[o + 2]},
                                   {y_pre[o + 3], y_pre[o + 4], y_pre[o + 5]},
                                   {d0[o + 3], d0[o + 4], d0[o + 5]},
                                   {y[o], y[o + 1], y[o + 2]},
                                   {y[o + 3], y[o + 4], y[o + 5]},
                                   {d1[o + 3], d1[o + 4], d1[o + 5]}};
                auto rel_dist = [&](double tt) {
                    return norm(min_image(hermite_pos(st, tt) - hermite_pos(sj, tt)));
                };
                const double da = rel_dist(t0), db = rel_dist(t1);
                const bool open = open_event[static_cast<std::size_t>(j)] >= 0;
                if (open) {
                    EncounterEvent& e =
                        out.events[static_cast<std::size_t>(open_event[j])];
                    for (double frac : {0.25, 0.5, 0.75, 1.0})
                        e.min_sep = std::min(e.min_sep, rel_dist(t0 + frac * (t1 - t0)));
                }
                if (da > r_event && db <= r_event && !open) {
                    double lo = t0, hi = t1;
                    for (int it = 0; it < 80 && hi - lo > 1e-11; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        if (rel_dist(mid) <= r_event) hi = mid; else lo = mid;
                    }
                    open_encounter(j, hi, hermite_pos(st, hi), hermite_vel(st, hi),
                                   hermite_pos(sj, hi), hermite_vel(sj, hi), false);
                } else if (da <= r_event && db > r_event && open) {
                    double lo = t0, hi = t1;
                    for (int it = 0; it < 80 && hi - lo > 1e-11; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        if (rel_dist(mid) <= r_event) lo = mid; else hi = mid;
                    }
                    close_encounter(j, lo, false);
                }
            }

            // Departures: outside rho_act, receding, encounter closed.
            if (!always_active) {
                for (std::size_t k = active.size(); k-- > 0;) {
                    const int j = active[k];
                    if (open_event[static_cast<std::size_t>(j)] >= 0) continue;
                    const std::size_t o = 6 + 6 * k;
                    const Vec3 xt{y[0], y[1], y[2]}, vt{y[3], y[4], y[5]};
                    const Vec3 xj{y[o], y[o + 1], y[o + 2]},
                        vj{y[o + 3], y[o + 4], y[o + 5]};
                    const Vec3 yrel = min_image(xt - xj);
                    if (norm(yrel) >= rho_act && dot(yrel, vt - vj) > 0.0) deactivate(k, t);
                }
            }
            if (arrived >= 0) {
                sync_tagged_from_state();
                activate(arrived, t);
                rebuild_candidates();
            }
            h_next = res.h_next;
            sync_tagged_from_state();
        }

        if (t >= t_max) {
            for (std::size_t k = active.size(); k-- > 0;) {
                const int j = active[k];
                if (open_event[static_cast<std::size_t>(j)] >= 0) close_encounter(j, t, true);
                deactivate(k, t);
            }
        }
        sync_tagged_from_state();
        piece.t1 = t;
        if (!piece.steps.empty()) out.pieces.push_back(piece);
    }

    void run(const RunOptions& opt) {
        const double T = cfg.horizon;
        for (std::size_t j = 0; j < legs.size(); ++j) {
            const int jj = static_cast<int>(j);
            const double d = norm(min_image(x_tag - bg_pos(jj, 0.0)));
            if (d <= rho_act * (1.0 + 1e-12)) {
                if (active.empty()) push_tagged_state();
                activate(jj, 0.0);
                if (d <= r_event && open_event[j] < 0)
                    open_encounter(jj, 0.0, x_tag, v_tag, bg_pos(jj, 0.0), bg_vel(jj), true);
            }
        }
        if (always_active) {
            if (active.empty()) push_tagged_state();
            for (std::size_t j = 0; j < legs.size(); ++j)
                if (!is_active(static_cast<int>(j))) activate(static_cast<int>(j), t);
        }

        while (t < T) {
            if (!active.empty()) {
                run_active_until(T);
                continue;
            }
            auto nxt = next_activation(T);
            if (!nxt) {
                free_leg_until(T);
                break;
            }
            free_leg_until(t + nxt->first);
            push_tagged_state();
            for (std::size_t j = 0; j < legs.size(); ++j) {
                const int jj = static_cast<int>(j);
                const double d = norm(min_image(x_tag - bg_pos(jj, t)));
                if (!is_active(jj) && d <= rho_act + 1e-14) activate(jj, t);
            }
            if (active.empty()) activate(nxt->second, t);
        }

        finalize(opt);
    }

    void finalize(const RunOptions& opt) {
        out.final_state = {wrap01(x_tag), v_tag, t};
        out.final_bg_x.resize(legs.size());
        out.final_bg_v.resize(legs.size());
        for (std::size_t j = 0; j < legs.size(); ++j) {
            out.final_bg_x[j] = wrap01(bg_pos(static_cast<int>(j), t));
            out.final_bg_v[j] = bg_vel(static_cast<int>(j));
        }
        out.bg_legs = legs;
        if (opt.sample_dt > 0.0) {
            for (double ts = 0.0; ts <= cfg.horizon + 1e-12; ts += opt.sample_dt) {
                Vec3 x, v;
                out.tagged_at(std::min(ts, cfg.horizon), x, v);
                out.samples.push_back({std::min(ts, cfg.horizon), wrap01(x), v});
            }
        } else {
            Vec3 x, v;
            out.tagged_at(0.0, x, v);
            out.samples.push_back({0.0, wrap01(x), v});
            out.samples.push_back({cfg.horizon, out.final_state.x, out.final_state.v});
        }
        std::sort(out.events.begin(), out.events.end(),
                  [](const EncounterEvent& a, const EncounterEvent& b) {
                      return a.t_entry < b.t_entry;
                  });
    }
};

}  // namespace

void Trajectory::tagged_at(double t, Vec3& x, Vec3& v) const {
    for (const auto& piece : pieces) {
        if (t > piece.t1 + 1e-15) continue;
        if (piece.free) {
            x = piece.x0 + piece.v * (t - piece.t0);
            v = piece.v;
            return;
        }
        for (const auto& s : piece.steps) {
            if (t <= s.t1 + 1e-15) {
                x = hermite_pos(s, t);
                v = hermite_vel(s, t);
                return;
            }
        }
        x = piece.steps.back().x1;
        v = piece.steps.back().v1;
        return;
    }
    if (!pieces.empty() && pieces.back().free) {
        const auto& last = pieces.back();
        x = last.x0 + last.v * (t - last.t0);
        v = last.v;
        return;
    }
    x = final_state.x;
    v = final_state.v;
}

Vec3 Trajectory::background_at(int j, double t) const {
    const auto& L = bg_legs[static_cast<std::size_t>(j)];
    std::size_t k = 0;
    for (std::size_t i = 0; i < L.size(); ++i)
        if (L[i].t0 <= t) k = i;
    // Engaged gap between this leg's validity end and the next leg: the next
    // leg back-extrapolates exactly for compact supports.
    if (t > L[k].valid_until && k + 1 < L.size()) ++k;
    return L[k].x0 + L[k].v * (t - L[k].t0);
}

Trajectory run_trajectory(const SimConfig& cfg, const PotentialPtr& p, const Vec3& x0,
                          const Vec3& v0, const Background& bg, const RunOptions& opt) {
    Engine eng(cfg, *p, bg, x0, v0);
    eng.run(opt);
    return std::move(eng.out);
}

PhaseState step_tagged(const PhaseState& state, const Background& bg, const RadialPotential& p,
                       double eps, double dt_max, double tol) {
    if (!(dt_max > 0.0)) throw ConfigError("step_tagged requires dt_max > 0");
    Rk45 rk;
    rk.rtol = tol;
    rk.atol = tol * 1e-2;
    const double t0 = state.t;
    auto deriv = [&](const std::vector<double>& s, std::vector<double>& d) {
        d.assign(6, 0.0);
        d[0] = s[3];
        d[1] = s[4];
        d[2] = s[5];
        const Vec3 xt{s[0], s[1], s[2]};
        Vec3 acc{};
        for (std::size_t j = 0; j < bg.size(); ++j) {
            const Vec3 xj = bg.x0[j] + bg.v0[j] * t0;
            const Vec3 yrel = min_image(xt - xj);
            const double dist = norm(yrel);
            if (dist <= 0.0) continue;
            const double f = p.dpsi(dist / eps);
            if (f == 0.0) continue;
            acc += yrel * (-f / (2.0 * eps * dist));
        }
        d[3] = acc.x;
        d[4] = acc.y;
        d[5] = acc.z;
    };
    std::vector<double> y = {state.x.x, state.x.y, state.x.z, state.v.x, state.v.y, state.v.z};
    auto res = rk.step(deriv, y, dt_max);
    PhaseState next;
    next.x = wrap01(Vec3{y[0], y[1], y[2]});
    next.v = {y[3], y[4], y[5]};
    next.t = state.t + res.h_taken;
    return next;
}

DivergenceResult divergence(const SimConfig& cfg, const PotentialPtr& p_long,
                            const PotentialPtr& p_short, const Vec3& x0, const Vec3& v0,
                            const Background& bg, int grid_points) {
    DivergenceResult r;
    r.long_range = run_trajectory(cfg, p_long, x0, v0, bg);
    r.short_range = run_trajectory(cfg, p_short, x0, v0, bg);
    for (int i = 0; i < grid_points; ++i) {
        const double t = cfg.horizon * i / (grid_points - 1.0);
        Vec3 xa, va, xb, vb;
        r.long_range.tagged_at(t, xa, va);
        r.short_range.tagged_at(t, xb, vb);
        r.sup_gap = std::max(r.sup_gap, torus_dist(wrap01(xa), wrap01(xb)) + norm(va - vb));
    }
    auto keys = [](const Trajectory& tr) {
        std::vector<int> k;
        for (const auto& e : tr.events) k.push_back(e.bg_index);
        return k;
    };
    r.matched_collisions = keys(r.long_range) == keys(r.short_range);
    return r;
}

double total_energy(const PotentialPtr& p, double eps, const Vec3& x_tag, const Vec3& v_tag,
                    const std::vector<Vec3>& bg_x, const std::vector<Vec3>& bg_v) {
    double e = 0.5 * norm2(v_tag);
    for (std::size_t j = 0; j < bg_x.size(); ++j) {
        e += 0.5 * norm2(bg_v[j]);
        e += 0.5 * p->psi(torus_dist(x_tag, bg_x[j]) / eps);
    }
    return e;
}

}  // namespace rgkit
