#include "simcon/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "simcon/errors.hpp"
#include "simcon/system_io.hpp"

namespace simcon {

namespace {

using nlohmann::ordered_json;

Vector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> parse_numbers(const std::string& tail, const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(tail);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("rate spec \"" + spec + "\": bad number \"" + item + "\"");
        }
    }
    return out;
}

} // namespace

ParametricSystem build_system(const SystemSpec& spec) {
    if (!spec.file.empty())
        return load_system(spec.file);
    if (spec.nparams < 1)
        throw ValidationError("system spec: nparams must be at least 1");

    if (spec.builder == "cart_pendulum") {
        const double lo = spec.param_min.value_or(0.1);
        const double hi = spec.param_max.value_or(1.0);
        return build_cart_pendulum(spec.mass, ParameterSet::uniform_grid(lo, hi, spec.nparams),
                                   spec.length);
    }
    if (spec.builder == "brunovsky") {
        const double lo = spec.param_min.value_or(1.0);
        const double hi = spec.param_max.value_or(6.0);
        return build_brunovsky(spec.dim, ParameterSet::uniform_grid(lo, hi, spec.nparams));
    }
    throw ValidationError("system spec: unknown builder \"" + spec.builder +
                          "\" (expected cart_pendulum, brunovsky, or a file path)");
}

ControlProblem make_problem(const RunConfig& cfg) {
    ParametricSystem sys = build_system(cfg.system);
    const int n = sys.state_dim();

    Vector x0, target;
    if (!cfg.x0.empty()) {
        x0 = to_vector(cfg.x0);
    } else if (sys.builder().name == "cart_pendulum") {
        x0 = Vector(4);
        x0 << -1.0, 1.0, 0.0, 0.0;
    } else if (sys.builder().name == "brunovsky") {
        x0 = Vector::Ones(n);
    } else {
        throw ValidationError("config: x0 is required for file-loaded systems");
    }
    if (!cfg.target.empty())
        target = to_vector(cfg.target);
    else if (sys.builder().name == "cart_pendulum" || sys.builder().name == "brunovsky")
        target = Vector::Zero(n);
    else
        throw ValidationError("config: target is required for file-loaded systems");

    return ControlProblem(std::move(sys), std::move(x0), std::move(target), cfg.beta,
                          TimeGrid(cfg.t_final, cfg.n_steps));
}

std::optional<LearningRate> parse_rate_spec(const std::string& spec) {
    if (spec.empty() || spec == "auto")
        return std::nullopt;
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
    const std::vector<double> args = parse_numbers(tail, spec);

    if (head == "constant") {
        if (args.size() != 1)
            throw ValidationError("rate spec: constant takes exactly one value");
        return LearningRate::constant(args[0]);
    }
    if (head == "robbins") {
        if (args.size() != 2)
            throw ValidationError("rate spec: robbins takes a,b");
        return LearningRate::robbins_monro(args[0], args[1]);
    }
    if (head == "adaptive") {
        if (args.empty() || args.size() > 3)
            throw ValidationError("rate spec: adaptive takes eta0[,shrink[,window]]");
        const double shrink = args.size() > 1 ? args[1] : 0.5;
        const int window = args.size() > 2 ? static_cast<int>(args[2]) : 10;
        return LearningRate::adaptive(args[0], shrink, window);
    }
    throw ValidationError("rate spec: unknown kind \"" + head +
                          "\" (expected auto, constant, robbins, adaptive)");
}

namespace {

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& origin, const std::string& where) {
    for (const auto& item : obj.items())
        if (!known.contains(item.key()))
            throw ValidationError("config " + origin + ": unknown field \"" + item.key() +
                                  "\" in " + where);
}

} // namespace

RunConfig run_config_from_json(const std::string& text, const std::string& origin) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config " + origin + ": JSON parse error: " + e.what());
    }
    if (!doc.is_object())
        throw ValidationError("config " + origin + ": top level must be an object");
    reject_unknown_keys(doc,
                        {"system", "algo", "beta", "tfinal", "nsteps", "tol", "max_iter", "seed",
                         "rate", "threads", "window", "x0", "target", "out", "traj_out"},
                        origin, "config");

    RunConfig cfg;
    if (doc.contains("system")) {
        const auto& sys = doc["system"];
        if (!sys.is_object())
            throw ValidationError("config " + origin + ": \"system\" must be an object");
        reject_unknown_keys(
            sys, {"builder", "file", "nparams", "dim", "mass", "length", "param_min", "param_max"},
            origin, "system");
        if (sys.contains("file")) {
            cfg.system.file = sys["file"].get<std::string>();
            cfg.system.builder.clear();
        }
        if (sys.contains("builder"))
            cfg.system.builder = sys["builder"].get<std::string>();
        if (sys.contains("nparams"))
            cfg.system.nparams = sys["nparams"].get<int>();
        if (sys.contains("dim"))
            cfg.system.dim = sys["dim"].get<int>();
        if (sys.contains("mass"))
            cfg.system.mass = sys["mass"].get<double>();
        if (sys.contains("length"))
            cfg.system.length = sys["length"].get<double>();
        if (sys.contains("param_min"))
            cfg.system.param_min = sys["param_min"].get<double>();
        if (sys.contains("param_max"))
            cfg.system.param_max = sys["param_max"].get<double>();
    }
    if (doc.contains("algo")) {
        const auto name = doc["algo"].get<std::string>();
        const auto algo = algorithm_from_name(name);
        if (!algo)
            throw ValidationError("config " + origin + ": unknown algorithm \"" + name + "\"");
        cfg.algo = *algo;
    }
    if (doc.contains("beta"))
        cfg.beta = doc["beta"].get<double>();
    if (doc.contains("tfinal"))
        cfg.t_final = doc["tfinal"].get<double>();
    if (doc.contains("nsteps"))
        cfg.n_steps = doc["nsteps"].get<int>();
    if (doc.contains("tol"))
        cfg.tol = doc["tol"].get<double>();
    if (doc.contains("max_iter"))
        cfg.max_iter = doc["max_iter"].get<int>();
    if (doc.contains("seed"))
        cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("rate"))
        cfg.rate = doc["rate"].get<std::string>();
    if (doc.contains("threads"))
        cfg.threads = doc["threads"].get<int>();
    if (doc.contains("window"))
        cfg.window = doc["window"].get<int>();
    if (doc.contains("x0"))
        cfg.x0 = doc["x0"].get<std::vector<double>>();
    if (doc.contains("target"))
        cfg.target = doc["target"].get<std::vector<double>>();
    if (doc.contains("out"))
        cfg.out = doc["out"].get<std::string>();
    if (doc.contains("traj_out"))
        cfg.traj_out = doc["traj_out"].get<std::string>();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config " + path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return run_config_from_json(ss.str(), path);
}

RunResult execute_run(const RunConfig& cfg) {
    const ControlProblem prob = make_problem(cfg);
    const ControlSignal u0 = ControlSignal::zero(prob.grid, prob.sys.input_dim());
    const std::optional<LearningRate> rate = parse_rate_spec(cfg.rate);

    switch (cfg.algo) {
    case Algorithm::GD:
        return run_gd(prob, u0, rate, StopRule::grad_norm_sq(cfg.tol, cfg.max_iter), cfg.threads);
    case Algorithm::CG:
        return run_cg(prob, u0, StopRule::grad_norm_sq(cfg.tol, cfg.max_iter), cfg.threads);
    case Algorithm::SGD:
        return run_sgd(prob, u0, rate, StopRule::update_window(cfg.tol, cfg.max_iter, cfg.window),
                       cfg.seed, cfg.threads);
    case Algorithm::CSG:
        return run_csg(prob, u0, rate, StopRule::update_window(cfg.tol, cfg.max_iter, cfg.window),
                       cfg.seed, cfg.threads);
    }
    throw ValidationError("execute_run: unreachable algorithm");
}

} // namespace simcon
