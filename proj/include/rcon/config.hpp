#pragma once

#include <cmath>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rcon/common.hpp"
#include "rcon/engine.hpp"
#include "rcon/graph.hpp"
#include "rcon/maps.hpp"
#include "rcon/noise.hpp"

namespace rcon {

using json = nlohmann::json;

// Graph description as it appears in config files.
struct GraphSpec {
    std::string family;  // complete|star|ring|line|tree|cubic|k_regular_lattice|
                         // bipartite_complete|erdos_renyi|geometric|file
    int n = 0;
    int k = 0;
    int p_nodes = 0, q_nodes = 0;  // bipartite parts
    double p = 0.0;                // erdos_renyi edge probability
    double radius = 0.0;           // geometric radius
    std::uint64_t seed = 0;
    std::string path;  // family == "file"

    Graph build() const {
        if (family == "complete") return Graph::complete(n);
        if (family == "star") return Graph::star(n);
        if (family == "ring") return Graph::ring(n);
        if (family == "line") return Graph::line(n);
        if (family == "tree") return Graph::tree(n);
        if (family == "cubic") return Graph::cubic(n);
        if (family == "k_regular_lattice") return Graph::k_regular_lattice(n, k);
        if (family == "bipartite_complete") return Graph::bipartite_complete(p_nodes, q_nodes);
        if (family == "erdos_renyi") return Graph::erdos_renyi(n, p, seed);
        if (family == "geometric") return Graph::geometric(n, radius, seed);
        if (family == "file") return Graph::load_file(path);
        throw param_error("unknown graph family '" + family + "'");
    }

    std::string describe() const {
        if (family == "k_regular_lattice")
            return family + "(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ")";
        if (family == "bipartite_complete")
            return family + "(p=" + std::to_string(p_nodes) + ",q=" + std::to_string(q_nodes) +
                   ")";
        if (family == "erdos_renyi")
            return family + "(n=" + std::to_string(n) + ",p=" + fmt_double(p) +
                   ",seed=" + std::to_string(seed) + ")";
        if (family == "geometric")
            return family + "(n=" + std::to_string(n) + ",radius=" + fmt_double(radius) +
                   ",seed=" + std::to_string(seed) + ")";
        if (family == "file") return "file(" + path + ")";
        return family + "(n=" + std::to_string(n) + ")";
    }

    static GraphSpec from_json(const json& j);
    json to_json() const;
};

inline GraphSpec GraphSpec::from_json(const json& j) {
    GraphSpec s;
    s.family = j.at("family").get<std::string>();
    s.n = j.value("n", 0);
    s.k = j.value("k", 0);
    s.p_nodes = j.value("p_nodes", 0);
    s.q_nodes = j.value("q_nodes", 0);
    s.p = j.value("p", 0.0);
    s.radius = j.value("radius", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
    s.path = j.value("path", std::string{});
    return s;
}

inline json GraphSpec::to_json() const {
    json j;
    j["family"] = family;
    if (n) j["n"] = n;
    if (k) j["k"] = k;
    if (p_nodes) j["p_nodes"] = p_nodes;
    if (q_nodes) j["q_nodes"] = q_nodes;
    if (p != 0.0) j["p"] = p;
    if (radius != 0.0) j["radius"] = radius;
    if (family == "erdos_renyi" || family == "geometric") j["seed"] = seed;
    if (!path.empty()) j["path"] = path;
    return j;
}

// --- Noise / map specs as {kind, params} objects -------------------------

inline NoiseModel noise_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "none") return NoiseModel::none();
    if (kind == "gaussian") return NoiseModel::gaussian(j.at("sigma").get<double>());
    if (kind == "laplacian") return NoiseModel::laplacian(j.at("b").get<double>());
    if (kind == "cauchy") return NoiseModel::cauchy(j.at("gamma").get<double>());
    if (kind == "alpha_stable")
        return NoiseModel::alpha_stable(j.at("alpha").get<double>(), j.at("c").get<double>());
    throw param_error("unknown noise kind '" + kind + "'");
}

inline json noise_to_json(const NoiseModel& m) {
    json j;
    j["kind"] = to_string(m.kind());
    switch (m.kind()) {
        case NoiseKind::none: break;
        case NoiseKind::gaussian: j["sigma"] = m.p1(); break;
        case NoiseKind::laplacian: j["b"] = m.p1(); break;
        case NoiseKind::cauchy: j["gamma"] = m.p1(); break;
        case NoiseKind::alpha_stable:
            j["alpha"] = m.p1();
            j["c"] = m.p2();
            break;
    }
    return j;
}

// Transmit power may be given raw ("rho") or in decibels ("rho_db").
inline double resolve_rho(const json& j) {
    const bool has_raw = j.contains("rho"), has_db = j.contains("rho_db");
    if (has_raw == has_db)
        throw param_error("transmit map needs exactly one of 'rho' or 'rho_db'");
    return has_raw ? j.at("rho").get<double>()
                   : std::pow(10.0, j.at("rho_db").get<double>() / 10.0);
}

inline TransmitMap transmit_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return TransmitMap::identity();
    if (kind == "scaled_atan")
        return TransmitMap::scaled_atan(resolve_rho(j), j.at("s").get<double>());
    if (kind == "tanh_scaled")
        return TransmitMap::tanh_scaled(resolve_rho(j), j.at("s").get<double>());
    if (kind == "linear_clip") return TransmitMap::linear_clip(resolve_rho(j));
    throw param_error("unknown transmit map kind '" + kind + "'");
}

inline json transmit_to_json(const TransmitMap& m) {
    json j;
    j["kind"] = to_string(m.kind());
    if (m.kind() != TransmitKind::identity) j["rho"] = m.rho();
    if (m.kind() == TransmitKind::scaled_atan || m.kind() == TransmitKind::tanh_scaled)
        j["s"] = m.slope();
    return j;
}

inline ReceiveMap receive_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double scale = j.value("scale", 1.0);
    ReceiveMap m = [&] {
        if (kind == "identity") return ReceiveMap::identity();
        if (kind == "tanh_scaled") return ReceiveMap::tanh_scaled(j.at("s").get<double>());
        if (kind == "rational") return ReceiveMap::rational(j.at("s").get<double>());
        if (kind == "scaled_atan")
            return ReceiveMap::scaled_atan(j.at("amplitude").get<double>(),
                                           j.at("s").get<double>());
        throw param_error("unknown receive map kind '" + kind + "'");
    }();
    return scale == 1.0 ? m : m.scaled(scale);
}

inline json receive_to_json(const ReceiveMap& m) {
    json j;
    j["kind"] = to_string(m.kind());
    if (m.kind() != ReceiveKind::identity) j["s"] = m.slope();
    if (m.kind() == ReceiveKind::scaled_atan) {
        j["amplitude"] = m.amplitude();
    } else if (m.amplitude() != 1.0) {
        j["scale"] = m.amplitude();
    }
    return j;
}

// --- Experiment configuration --------------------------------------------

struct ExperimentConfig {
    std::string name = "experiment";
    GraphSpec graph;
    TransmitMap h = TransmitMap::identity();
    ReceiveMap f = ReceiveMap::identity();
    std::optional<NoiseModel> channel_noise;
    SensingConfig sensing;
    bool sensing_fixed_once = false;  // draw x(0) once and share across trials
    bool schedule_optimal = false;
    double a = 1.0;
    int trials = 1;
    int t_max = 100;
    std::vector<int> checkpoints;  // empty -> default dense/log plan
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    int threads = 0;

    void validate() const {
        if (trials < 1) throw param_error("trials must be >= 1");
        if (t_max < 1) throw param_error("t_max must be >= 1");
        for (int c : checkpoints)
            if (c < 1 || c > t_max) throw param_error("checkpoints must lie in [1, t_max]");
        if (!schedule_optimal && !(a > 0.0)) throw param_error("gain a must be positive");
    }

    std::vector<int> resolved_checkpoints() const {
        if (!checkpoints.empty()) return checkpoints;
        return default_checkpoints(t_max);
    }

    static ExperimentConfig from_json(const json& j);
    json to_json() const;

    // FNV-1a over the canonical serialized form; stamped into every output
    // header so files can be traced back to their configuration.
    std::uint64_t config_hash() const {
        const std::string s = to_json().dump();
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

inline ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.name = j.value("name", std::string{"experiment"});
    cfg.graph = GraphSpec::from_json(j.at("graph"));
    if (j.contains("h")) cfg.h = transmit_from_json(j.at("h"));
    if (j.contains("f")) cfg.f = receive_from_json(j.at("f"));
    if (j.contains("channel_noise")) {
        NoiseModel m = noise_from_json(j.at("channel_noise"));
        if (!m.is_none()) cfg.channel_noise = m;
    }
    if (j.contains("sensing")) {
        const json& s = j.at("sensing");
        cfg.sensing.theta = s.value("theta", 0.0);
        if (s.contains("noise")) {
            NoiseModel m = noise_from_json(s.at("noise"));
            if (!m.is_none()) cfg.sensing.noise = m;
        }
        if (s.contains("fixed_initials")) {
            const auto v = s.at("fixed_initials").get<std::vector<double>>();
            cfg.sensing.fixed_initials =
                Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
        }
        cfg.sensing_fixed_once = s.value("fixed_once", false);
    }
    if (j.contains("schedule")) {
        const json& s = j.at("schedule");
        if (s.contains("a") && s.at("a").is_string()) {
            if (s.at("a").get<std::string>() != "optimal")
                throw param_error("schedule.a must be a number or \"optimal\"");
            cfg.schedule_optimal = true;
        } else if (s.contains("a")) {
            cfg.a = s.at("a").get<double>();
        }
    }
    cfg.trials = j.value("trials", 1);
    cfg.t_max = j.value("t_max", 100);
    if (j.contains("checkpoints")) cfg.checkpoints = j.at("checkpoints").get<std::vector<int>>();
    cfg.master_seed = j.value("seed", std::uint64_t{1});
    cfg.out_dir = j.value("out", std::string{"out"});
    cfg.threads = j.value("threads", 0);
    cfg.validate();
    return cfg;
}

inline json ExperimentConfig::to_json() const {
    json j;
    j["name"] = name;
    j["graph"] = graph.to_json();
    j["h"] = transmit_to_json(h);
    j["f"] = receive_to_json(f);
    j["channel_noise"] =
        channel_noise ? noise_to_json(*channel_noise) : json{{"kind", "none"}};
    json s;
    s["theta"] = sensing.theta;
    if (sensing.noise) s["noise"] = noise_to_json(*sensing.noise);
    if (sensing.fixed_initials) {
        std::vector<double> v(sensing.fixed_initials->data(),
                              sensing.fixed_initials->data() + sensing.fixed_initials->size());
        s["fixed_initials"] = v;
    }
    if (sensing_fixed_once) s["fixed_once"] = true;
    j["sensing"] = s;
    j["schedule"] = schedule_optimal ? json{{"a", "optimal"}} : json{{"a", a}};
    j["trials"] = trials;
    j["t_max"] = t_max;
    if (!checkpoints.empty()) j["checkpoints"] = checkpoints;
    j["seed"] = master_seed;
    j["out"] = out_dir;
    return j;
}

}  // namespace rcon
