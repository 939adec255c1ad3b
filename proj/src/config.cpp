#include "chemfront/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

extern char** environ;

namespace chemfront {

namespace {

// Object view that tracks consumed keys and rejects leftovers.
class StrictObject {
  public:
    StrictObject(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw config_error("config error at " + path_ + ": expected object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const ordered_json& require(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end())
            throw config_error("config error: missing required key " + join(key));
        return *it;
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return fallback;
        return cast<T>(*it, join(key));
    }

    template <typename T>
    T require_as(const std::string& key) {
        return cast<T>(require(key), join(key));
    }

    StrictObject child(const std::string& key) { return StrictObject(require(key), join(key)); }

    bool maybe_child(const std::string& key, StrictObject& out) {
        if (!has(key)) return false;
        out = StrictObject(j_.at(key), join(key));
        return true;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw config_error("config error: unknown key " + join(it.key()));
    }

    std::string join(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    template <typename T>
    static T cast(const ordered_json& v, const std::string& path) {
        try {
            return v.get<T>();
        } catch (const nlohmann::json::exception&) {
            throw config_error("config error at " + path + ": wrong value type");
        }
    }

  private:
    ordered_json j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::array<double, 3> axis_array(const ordered_json& v, const std::string& path, int dim,
                                 double fill = 0.0) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        throw config_error("config error at " + path + ": expected an array of length " +
                           std::to_string(dim));
    std::array<double, 3> out{fill, fill, fill};
    for (int a = 0; a < dim; ++a) {
        if (!v[a].is_number())
            throw config_error("config error at " + path + ": expected numbers");
        out[a] = v[a].get<double>();
    }
    return out;
}

}  // namespace

std::vector<double> RunConfig::absolute_thresholds() const {
    std::vector<double> out;
    const double cap = params.a / params.b;
    for (double r : thresholds_rel) out.push_back(r * cap);
    return out;
}

void RunConfig::validate() const {
    params.validate();
    grid.validate();
    if (grid.dim != params.dim)
        throw config_error("config error: grid dimension does not match params.dim");
    try {
        scheme.validate(grid.dim);
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config error: ") + e.what());
    }
    if (!(horizon >= 0.0)) throw config_error("config error: horizon must be >= 0");
    if (!(cadence > 0.0)) throw config_error("config error: observers.cadence must be > 0");
    for (double r : thresholds_rel)
        if (!(r > 0.0 && r < 1.0))
            throw config_error("config error: thresholds_rel entries must lie in (0, 1)");
    if (!(clearance_fraction > 0.0 && clearance_fraction < 0.5))
        throw config_error("config error: clearance_fraction must lie in (0, 0.5)");
    if (!(monitors.eps > 0.0 && monitors.eps < std::sqrt(params.a)))
        throw config_error("config error: monitors.eps must lie in (0, sqrt(a))");
}

RunConfig parse_run_config(const ordered_json& j) {
    RunConfig c;
    StrictObject root(j, "");

    {
        StrictObject p = root.child("params");
        c.params.a = p.require_as<double>("a");
        c.params.b = p.require_as<double>("b");
        c.params.chi = p.require_as<double>("chi");
        c.params.lambda = p.require_as<double>("lambda");
        c.params.mu = p.require_as<double>("mu");
        c.params.dim = p.require_as<int>("dim");
        p.finish();
    }
    {
        StrictObject g = root.child("grid");
        const int dim = c.params.dim;
        c.grid.dim = dim;
        c.grid.lo = axis_array(g.require("lo"), g.join("lo"), dim);
        c.grid.hi = axis_array(g.require("hi"), g.join("hi"), dim);
        const ordered_json& narr = g.require("n");
        if (!narr.is_array() || static_cast<int>(narr.size()) != dim)
            throw config_error("config error at grid.n: expected an array of length " +
                               std::to_string(dim));
        c.grid.n = {1, 1, 1};
        for (int a = 0; a < dim; ++a) c.grid.n[a] = StrictObject::cast<int>(narr[a], g.join("n"));
        c.grid.boundary = boundary_from_string(g.get<std::string>("boundary", "neumann"));
        g.finish();
    }
    {
        StrictObject s(ordered_json::object(), "scheme");
        if (root.maybe_child("scheme", s)) {
            c.scheme.dt = s.get<double>("dt", c.scheme.dt);
            c.scheme.dt_policy = dt_policy_from_string(
                s.get<std::string>("dt_policy", to_string(c.scheme.dt_policy)));
            c.scheme.safety = s.get<double>("safety", c.scheme.safety);
            c.scheme.flux = flux_from_string(s.get<std::string>("flux", to_string(c.scheme.flux)));
            c.scheme.diffusion = diffusion_from_string(
                s.get<std::string>("diffusion", to_string(c.scheme.diffusion)));
            c.scheme.frame_speed = s.get<double>("frame_speed", 0.0);
            if (s.has("frame_direction"))
                c.scheme.frame_direction = axis_array(s.require("frame_direction"),
                                                      s.join("frame_direction"), c.params.dim);
            c.scheme.negativity_tol = s.get<double>("negativity_tol", c.scheme.negativity_tol);
            s.finish();
        }
    }
    {
        StrictObject i(ordered_json::object(), "initial");
        if (root.maybe_child("initial", i)) {
            c.initial.kind =
                initial_kind_from_string(i.get<std::string>("kind", "compact_bump"));
            c.initial.amplitude = i.get<double>("amplitude", c.initial.amplitude);
            c.initial.v_amplitude = i.get<double>("v_amplitude", c.initial.v_amplitude);
            c.initial.radius = i.get<double>("radius", c.initial.radius);
            c.initial.interface_pos = i.get<double>("interface", c.initial.interface_pos);
            c.initial.width = i.get<double>("width", c.initial.width);
            if (i.has("direction"))
                c.initial.direction =
                    axis_array(i.require("direction"), i.join("direction"), c.params.dim);
            c.initial.u_file = i.get<std::string>("u_file", "");
            c.initial.v_file = i.get<std::string>("v_file", "");
            i.finish();
        }
    }
    c.horizon = root.get<double>("horizon", c.horizon);
    {
        StrictObject o(ordered_json::object(), "observers");
        if (root.maybe_child("observers", o)) {
            c.cadence = o.get<double>("cadence", c.cadence);
            c.thresholds_rel = o.get<std::vector<double>>("thresholds_rel", c.thresholds_rel);
            c.clearance_fraction = o.get<double>("clearance_fraction", c.clearance_fraction);
            o.finish();
        }
    }
    {
        StrictObject m(ordered_json::object(), "monitors");
        if (root.maybe_child("monitors", m)) {
            c.monitors.regions = m.get<bool>("regions", c.monitors.regions);
            c.monitors.eps = m.get<double>("eps", c.monitors.eps);
            c.monitors.interior_floor = m.get<double>("interior_floor", c.monitors.interior_floor);
            c.monitors.exterior_ceiling =
                m.get<double>("exterior_ceiling", c.monitors.exterior_ceiling);
            c.monitors.residual = m.get<bool>("residual", c.monitors.residual);
            c.monitors.residual_coeff = m.get<double>("residual_coeff", c.monitors.residual_coeff);
            c.monitors.envelope = m.get<bool>("envelope", c.monitors.envelope);
            c.monitors.envelope_k = m.get<double>("envelope_k", c.monitors.envelope_k);
            c.monitors.envelope_m = m.get<double>("envelope_m", c.monitors.envelope_m);
            c.monitors.persistence = m.get<bool>("persistence", c.monitors.persistence);
            c.monitors.persistence_eta_rel =
                m.get<double>("persistence_eta_rel", c.monitors.persistence_eta_rel);
            c.monitors.persistence_burn_in =
                m.get<double>("persistence_burn_in", c.monitors.persistence_burn_in);
            c.monitors.persistence_big_m =
                m.get<double>("persistence_big_m", c.monitors.persistence_big_m);
            c.monitors.persistence_floor =
                m.get<double>("persistence_floor", c.monitors.persistence_floor);
            m.finish();
        }
    }
    {
        StrictObject o(ordered_json::object(), "output");
        if (root.maybe_child("output", o)) {
            c.output.snapshots = o.get<bool>("snapshots", c.output.snapshots);
            c.output.fronts = o.get<bool>("fronts", c.output.fronts);
            o.finish();
        }
    }
    root.finish();
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("config error: ") + e.what());
    }
    return c;
}

ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    j["params"] = {{"a", c.params.a},     {"b", c.params.b},   {"chi", c.params.chi},
                   {"lambda", c.params.lambda}, {"mu", c.params.mu}, {"dim", c.params.dim}};
    ordered_json grid;
    grid["lo"] = std::vector<double>(c.grid.lo.begin(), c.grid.lo.begin() + c.grid.dim);
    grid["hi"] = std::vector<double>(c.grid.hi.begin(), c.grid.hi.begin() + c.grid.dim);
    grid["n"] = std::vector<int>(c.grid.n.begin(), c.grid.n.begin() + c.grid.dim);
    grid["boundary"] = to_string(c.grid.boundary);
    j["grid"] = grid;
    j["scheme"] = {{"dt", c.scheme.dt},
                   {"dt_policy", to_string(c.scheme.dt_policy)},
                   {"safety", c.scheme.safety},
                   {"flux", to_string(c.scheme.flux)},
                   {"diffusion", to_string(c.scheme.diffusion)},
                   {"frame_speed", c.scheme.frame_speed},
                   {"frame_direction",
                    std::vector<double>(c.scheme.frame_direction.begin(),
                                        c.scheme.frame_direction.begin() + c.grid.dim)},
                   {"negativity_tol", c.scheme.negativity_tol}};
    j["initial"] = {{"kind", to_string(c.initial.kind)},
                    {"amplitude", c.initial.amplitude},
                    {"v_amplitude", c.initial.v_amplitude},
                    {"radius", c.initial.radius},
                    {"interface", c.initial.interface_pos},
                    {"width", c.initial.width},
                    {"direction",
                     std::vector<double>(c.initial.direction.begin(),
                                         c.initial.direction.begin() + c.grid.dim)},
                    {"u_file", c.initial.u_file},
                    {"v_file", c.initial.v_file}};
    j["horizon"] = c.horizon;
    j["observers"] = {{"cadence", c.cadence},
                      {"thresholds_rel", c.thresholds_rel},
                      {"clearance_fraction", c.clearance_fraction}};
    j["monitors"] = {{"regions", c.monitors.regions},
                     {"eps", c.monitors.eps},
                     {"interior_floor", c.monitors.interior_floor},
                     {"exterior_ceiling", c.monitors.exterior_ceiling},
                     {"residual", c.monitors.residual},
                     {"residual_coeff", c.monitors.residual_coeff},
                     {"envelope", c.monitors.envelope},
                     {"envelope_k", c.monitors.envelope_k},
                     {"envelope_m", c.monitors.envelope_m},
                     {"persistence", c.monitors.persistence},
                     {"persistence_eta_rel", c.monitors.persistence_eta_rel},
                     {"persistence_burn_in", c.monitors.persistence_burn_in},
                     {"persistence_big_m", c.monitors.persistence_big_m},
                     {"persistence_floor", c.monitors.persistence_floor}};
    j["output"] = {{"snapshots", c.output.snapshots}, {"fronts", c.output.fronts}};
    return j;
}

void apply_env_overrides(ordered_json& j, const char* prefix) {
    const std::string pfx(prefix);
    for (char** env = environ; *env != nullptr; ++env) {
        const std::string entry(*env);
        if (entry.rfind(pfx, 0) != 0) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string keypath = entry.substr(pfx.size(), eq - pfx.size());
        const std::string value = entry.substr(eq + 1);
        // path components separated by "__"
        ordered_json* cur = &j;
        std::size_t pos = 0;
        while (true) {
            const auto sep = keypath.find("__", pos);
            const std::string key = keypath.substr(pos, sep - pos);
            if (sep == std::string::npos) {
                ordered_json parsed = ordered_json::parse(value, nullptr, false);
                (*cur)[key] = parsed.is_discarded() ? ordered_json(value) : parsed;
                break;
            }
            cur = &((*cur)[key]);
            pos = sep + 2;
        }
    }
}

ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config error: cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config error: " + path + ": " + e.what());
    }
}

RunConfig load_run_config(const std::string& path, bool with_env) {
    ordered_json j = read_json_file(path);
    if (with_env) apply_env_overrides(j);
    return parse_run_config(j);
}

}  // namespace chemfront
