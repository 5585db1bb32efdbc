#include "cachesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cachesim/errors.hpp"

namespace cachesim::cli {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_values(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty value list");
    return out;
}

// "lo:step:hi", inclusive of hi up to half a step
std::vector<double> parse_range(const std::string& key, const std::string& value) {
    double lo = 0, step = 0, hi = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(value);
    if (!(ss >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' || step <= 0.0)
        throw ConfigError("config key '" + key + "': expected lo:step:hi, got '" + value + "'");
    std::vector<double> out;
    for (double v = lo; v <= hi + 0.5 * step; v += step) out.push_back(std::min(v, hi));
    return out;
}

const std::vector<std::string> kSweepVariables = {
    "q", "sigma_m", "theta_db", "beta", "lambda_p_per_km2", "n_bar", "alpha", "n_f", "m"};

void check_sweep_variable(const std::string& key, const std::string& name) {
    if (std::find(kSweepVariables.begin(), kSweepVariables.end(), name) == kSweepVariables.end())
        throw ConfigError("config key '" + key + "': unrecognized sweep variable '" + name + "'");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_values(const std::vector<double>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt17(values[i]);
    }
    return out;
}

} // namespace

const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::analyze: return "analyze";
        case Mode::optimize: return "optimize";
        case Mode::simulate: return "simulate";
        case Mode::sweep: return "sweep";
    }
    return "analyze";
}

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::pc: return "pc";
        case Scheme::zipf: return "zipf";
        case Scheme::uniform: return "uniform";
    }
    return "pc";
}

void apply_key_value(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "network.lambda_p_per_km2") cfg.lambda_p_per_km2 = parse_double(key, value);
    else if (key == "network.n_bar") cfg.n_bar = parse_double(key, value);
    else if (key == "network.sigma_m") cfg.sigma_m = parse_double(key, value);
    else if (key == "network.alpha") cfg.alpha = parse_double(key, value);
    else if (key == "network.theta_db") cfg.theta_db = parse_double(key, value);
    else if (key == "network.p_d_w") cfg.p_d_w = parse_double(key, value);
    else if (key == "network.q") cfg.q = parse_double(key, value);
    else if (key == "library.n_f") cfg.n_f = static_cast<int>(parse_long(key, value));
    else if (key == "library.m") cfg.m = static_cast<int>(parse_long(key, value));
    else if (key == "library.beta") cfg.beta = parse_double(key, value);
    else if (key == "mode") {
        if (value == "analyze") cfg.mode = Mode::analyze;
        else if (value == "optimize") cfg.mode = Mode::optimize;
        else if (value == "simulate") cfg.mode = Mode::simulate;
        else if (value == "sweep") cfg.mode = Mode::sweep;
        else throw ConfigError("config key 'mode': unknown mode '" + value + "'");
    } else if (key == "scheme") {
        if (value == "pc") cfg.scheme = Scheme::pc;
        else if (value == "zipf") cfg.scheme = Scheme::zipf;
        else if (value == "uniform") cfg.scheme = Scheme::uniform;
        else throw ConfigError("config key 'scheme': unknown scheme '" + value + "'");
    } else if (key == "sweep.variable") {
        check_sweep_variable(key, value);
        if (!cfg.sweep) cfg.sweep.emplace();
        cfg.sweep->variable = value;
    } else if (key == "sweep.values") {
        if (!cfg.sweep) cfg.sweep.emplace();
        cfg.sweep->values = parse_values(key, value);
    } else if (key == "sweep.range") {
        if (!cfg.sweep) cfg.sweep.emplace();
        cfg.sweep->values = parse_range(key, value);
    } else if (key == "curve.variable") {
        check_sweep_variable(key, value);
        if (!cfg.curve) cfg.curve.emplace();
        cfg.curve->variable = value;
    } else if (key == "curve.values") {
        if (!cfg.curve) cfg.curve.emplace();
        cfg.curve->values = parse_values(key, value);
    } else if (key == "sim.trials") cfg.trials = parse_long(key, value);
    else if (key == "sim.window_radius_m") cfg.window_radius_m = parse_double(key, value);
    else if (key == "sim.seed") cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (key == "sim.fading_draws_per_trial") cfg.fading_draws_per_trial = static_cast<int>(parse_long(key, value));
    else if (key == "sim.caterer_in_interferer_pool") cfg.caterer_in_interferer_pool = parse_bool(key, value);
    else if (key == "sim.workers") cfg.workers = static_cast<int>(parse_long(key, value));
    else if (key == "run.search_tol") cfg.search_tol = parse_double(key, value);
    else if (key == "run.use_q_star") cfg.use_q_star = parse_bool(key, value);
    else if (key == "run.closed_form") cfg.closed_form = parse_bool(key, value);
    else if (key == "fig5.histogram") cfg.fig5_histogram = parse_bool(key, value);
    else if (key == "fig5.q_scale") cfg.fig5_q_scale = parse_double(key, value);
    else if (key == "output.path") cfg.output_path = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file '" + path + "' line " + std::to_string(lineno) +
                              ": expected key = value");
        apply_key_value(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

NetworkParams ExperimentConfig::network() const {
    NetworkParams p;
    p.lambda_p = units::per_km2_to_per_m2(lambda_p_per_km2);
    p.n_bar = n_bar;
    p.sigma = sigma_m;
    p.alpha = alpha;
    p.theta = units::db_to_linear(theta_db);
    p.p_d = p_d_w;
    p.q = q;
    return p;
}

ContentLibrary ExperimentConfig::library() const { return ContentLibrary::make(n_f, m, beta); }

sim::SimulationConfig ExperimentConfig::simulation() const {
    sim::SimulationConfig sc;
    sc.trials = trials;
    sc.window_radius = window_radius_m;
    sc.seed = seed;
    sc.fading_draws_per_trial = fading_draws_per_trial;
    sc.caterer_in_interferer_pool = caterer_in_interferer_pool;
    sc.workers = workers;
    return sc;
}

void ExperimentConfig::validate() const {
    try {
        network().validate();
        library().validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    if (mode == Mode::sweep && !sweep)
        throw ConfigError("mode=sweep requires sweep.variable and sweep.values");
    if (sweep && sweep->values.empty())
        throw ConfigError("config key 'sweep.values': no values given");
    if (sweep && sweep->variable.empty())
        throw ConfigError("config key 'sweep.variable': missing");
    if (curve && (curve->values.empty() || curve->variable.empty()))
        throw ConfigError("config key 'curve.*': needs both variable and values");
    if (trials < 0) throw ConfigError("config key 'sim.trials': must be >= 0");
    if (!(fig5_q_scale > 0.0 && fig5_q_scale <= 1.0))
        throw ConfigError("config key 'fig5.q_scale': must be in (0, 1]");
    if (!(search_tol > 0.0)) throw ConfigError("config key 'run.search_tol': must be > 0");
    if (output_path.empty()) throw ConfigError("config key 'output.path': must not be empty");
}

std::map<std::string, std::string> config_to_kv(const ExperimentConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["network.lambda_p_per_km2"] = fmt17(cfg.lambda_p_per_km2);
    kv["network.n_bar"] = fmt17(cfg.n_bar);
    kv["network.sigma_m"] = fmt17(cfg.sigma_m);
    kv["network.alpha"] = fmt17(cfg.alpha);
    kv["network.theta_db"] = fmt17(cfg.theta_db);
    kv["network.p_d_w"] = fmt17(cfg.p_d_w);
    kv["network.q"] = fmt17(cfg.q);
    kv["library.n_f"] = std::to_string(cfg.n_f);
    kv["library.m"] = std::to_string(cfg.m);
    kv["library.beta"] = fmt17(cfg.beta);
    kv["mode"] = mode_name(cfg.mode);
    kv["scheme"] = scheme_name(cfg.scheme);
    if (cfg.sweep) {
        kv["sweep.variable"] = cfg.sweep->variable;
        kv["sweep.values"] = join_values(cfg.sweep->values);
    }
    if (cfg.curve) {
        kv["curve.variable"] = cfg.curve->variable;
        kv["curve.values"] = join_values(cfg.curve->values);
    }
    kv["sim.trials"] = std::to_string(cfg.trials);
    kv["sim.window_radius_m"] = fmt17(cfg.window_radius_m);
    kv["sim.seed"] = std::to_string(cfg.seed);
    kv["sim.fading_draws_per_trial"] = std::to_string(cfg.fading_draws_per_trial);
    kv["sim.caterer_in_interferer_pool"] = cfg.caterer_in_interferer_pool ? "true" : "false";
    kv["sim.workers"] = std::to_string(cfg.workers);
    kv["run.search_tol"] = fmt17(cfg.search_tol);
    kv["run.use_q_star"] = cfg.use_q_star ? "true" : "false";
    kv["run.closed_form"] = cfg.closed_form ? "true" : "false";
    kv["fig5.histogram"] = cfg.fig5_histogram ? "true" : "false";
    kv["fig5.q_scale"] = fmt17(cfg.fig5_q_scale);
    kv["output.path"] = cfg.output_path;
    return kv;
}

ExperimentConfig config_from_csv_metadata(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot open CSV file '" + csv_path + "'");
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != '#') break;
        std::string body = trim(line.substr(1));
        const size_t eq = body.find('=');
        if (eq == std::string::npos) continue; // informational comment
        apply_key_value(cfg, body.substr(0, eq), body.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

} // namespace cachesim::cli
