#include "core/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/io.hpp"

namespace rgkit {

namespace {

using nlohmann::json;

VelocityDensity parse_density(const json& j, const std::string& where) {
    const std::string kind = j.value("kind", "");
    if (kind == "maxwellian") return VelocityDensity::maxwellian(j.value("temperature", 1.0));
    if (kind == "uniform_ball") return VelocityDensity::uniform_ball(j.value("radius", 1.0));
    if (kind == "point") {
        const auto& v = j.at("v");
        return VelocityDensity::point({v.at(0), v.at(1), v.at(2)});
    }
    throw ConfigError(where + ": unknown velocity density kind '" + kind +
                      "' (expected maxwellian | uniform_ball | point)");
}

json density_json(const VelocityDensity& g) {
    json j;
    switch (g.kind) {
        case VelocityDensity::Kind::maxwellian:
            j["kind"] = "maxwellian";
            j["temperature"] = g.temperature;
            break;
        case VelocityDensity::Kind::uniform_ball:
            j["kind"] = "uniform_ball";
            j["radius"] = g.radius;
            break;
        case VelocityDensity::Kind::point:
            j["kind"] = "point";
            j["v"] = {g.v0.x, g.v0.y, g.v0.z};
            break;
    }
    return j;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig c;
    c.source_json = text;
    try {
        c.seed = j.value("seed", std::uint64_t{1});
        if (j.contains("epsilon_grid"))
            c.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
        c.horizon = j.value("horizon", 1.0);
        if (j.contains("potential")) {
            const auto& p = j.at("potential");
            c.potential_kind = p.value("kind", "stretched_exp");
            c.pot_s = p.value("s", 4.0);
            c.pot_c = p.value("c", 1.0);
            c.pot_gamma = p.value("gamma", 1.0);
            c.explicit_cutoff = p.value("cutoff", 0.0);
        }
        if (j.contains("background"))
            c.background = parse_density(j.at("background"), "background");
        if (j.contains("initial")) {
            const auto& i = j.at("initial");
            if (i.contains("velocity"))
                c.initial.velocity = parse_density(i.at("velocity"), "initial.velocity");
            if (i.contains("position_box")) {
                const auto& b = i.at("position_box");
                c.initial.box_restricted = true;
                c.initial.box_lo = {b.at(0).at(0), b.at(0).at(1), b.at(0).at(2)};
                c.initial.box_hi = {b.at(1).at(0), b.at(1).at(1), b.at(1).at(2)};
            }
        }
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            c.integrator_rtol = t.value("integrator_rtol", c.integrator_rtol);
            c.integrator_atol = t.value("integrator_atol", c.integrator_atol);
            c.quad_tol = t.value("quadrature", c.quad_tol);
        }
        if (j.contains("overrides")) {
            const auto& o = j.at("overrides");
            c.cb = o.value("cb", c.cb);
            c.r_exponent = o.value("r_exponent", c.r_exponent);
            c.force_threshold = o.value("force_threshold", c.force_threshold);
            c.n_background_override = o.value("n_background", c.n_background_override);
        }
        if (j.contains("mc")) {
            const auto& m = j.at("mc");
            c.walkers = m.value("walkers", c.walkers);
            c.trajectories = m.value("trajectories", c.trajectories);
            c.seeds = m.value("seeds", c.seeds);
            c.sample_time = m.value("sample_time", c.sample_time);
            c.sample_dt = m.value("sample_dt", c.sample_dt);
        }
        if (j.contains("bins")) {
            const auto& b = j.at("bins");
            c.bins.nx = b.value("nx", c.bins.nx);
            c.bins.nv = b.value("nv", c.bins.nv);
            c.bins.vmax = b.value("vmax", c.bins.vmax);
        }
        if (j.contains("scatter")) {
            const auto& s = j.at("scatter");
            if (s.contains("r")) c.scatter_r = s.at("r").get<std::vector<double>>();
            if (s.contains("w")) c.scatter_w = s.at("w").get<std::vector<double>>();
            c.scatter_R = s.value("R", c.scatter_R);
        }
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    return from_json_text(read_text(path));
}

PotentialPtr RunConfig::potential() const {
    if (potential_kind == "power_law") return make_power_law(pot_s);
    if (potential_kind == "stretched_exp") return make_stretched_exponential(pot_c, pot_gamma);
    throw ConfigError("unknown potential kind '" + potential_kind + "'");
}

PotentialPtr RunConfig::potential_truncated(double epsilon) const {
    const double R = (explicit_cutoff > 0.0) ? explicit_cutoff : sim(epsilon).R();
    return truncate(potential(), R);
}

SimConfig RunConfig::sim(double epsilon) const {
    SimConfig s;
    s.epsilon = epsilon;
    s.n_background = n_background_override;
    s.horizon = horizon;
    s.pot_gamma = (potential_kind == "power_law") ? 1.0 : pot_gamma;
    s.pot_s = (potential_kind == "power_law") ? pot_s : 3.0;
    s.seed = seed;
    s.integrator_rtol = integrator_rtol;
    s.integrator_atol = integrator_atol;
    s.quad_tol = quad_tol;
    s.cb = cb;
    s.r_exponent = r_exponent;
    s.force_threshold = force_threshold;
    return s;
}

void RunConfig::validate() const {
    if (epsilon_grid.empty()) throw ConfigError("epsilon_grid must be nonempty");
    for (double e : epsilon_grid) sim(e).validate();
    background.validate();
    initial.validate();
    if (potential_kind == "power_law" && !(pot_s > 2.0))
        throw ConfigError("power-law potential requires s > 2");
    if (potential_kind != "power_law" && potential_kind != "stretched_exp")
        throw ConfigError("unknown potential kind '" + potential_kind + "'");
    if (walkers < 1 || trajectories < 0 || seeds < 1) throw ConfigError("mc sizes invalid");
    if (!(sample_time >= 0.0 && sample_time <= horizon))
        throw ConfigError("sample_time must lie in [0, horizon]");
    if (!(quad_tol >= 1e-13 && quad_tol <= 1e-6))
        throw ConfigError("quadrature tolerance must lie in [1e-13, 1e-6]");
}

std::string RunConfig::canonical_json() const {
    json j;
    j["seed"] = seed;
    j["epsilon_grid"] = epsilon_grid;
    j["horizon"] = horizon;
    j["potential"] = {{"kind", potential_kind}, {"s", pot_s},      {"c", pot_c},
                      {"gamma", pot_gamma},     {"cutoff", explicit_cutoff}};
    j["background"] = density_json(background);
    json init;
    init["velocity"] = density_json(initial.velocity);
    if (initial.box_restricted)
        init["position_box"] = {{initial.box_lo.x, initial.box_lo.y, initial.box_lo.z},
                                {initial.box_hi.x, initial.box_hi.y, initial.box_hi.z}};
    j["initial"] = init;
    j["tolerances"] = {{"integrator_rtol", integrator_rtol},
                       {"integrator_atol", integrator_atol},
                       {"quadrature", quad_tol}};
    j["overrides"] = {{"cb", cb},
                      {"r_exponent", r_exponent},
                      {"force_threshold", force_threshold},
                      {"n_background", n_background_override}};
    j["mc"] = {{"walkers", walkers},
               {"trajectories", trajectories},
               {"seeds", seeds},
               {"sample_time", sample_time},
               {"sample_dt", sample_dt}};
    j["bins"] = {{"nx", bins.nx}, {"nv", bins.nv}, {"vmax", bins.vmax}};
    j["scatter"] = {{"r", scatter_r}, {"w", scatter_w}, {"R", scatter_R}};
    j["output_dir"] = output_dir;
    return j.dump(2);
}

}  // namespace rgkit
