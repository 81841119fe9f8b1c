#include "simcon/system_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "simcon/errors.hpp"

namespace simcon {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw ValidationError("system file " + origin + ": " + what);
}

void reject_unknown(const ordered_json& obj, const std::set<std::string>& known,
                    const std::string& origin, const std::string& where) {
    for (const auto& item : obj.items())
        if (!known.contains(item.key()))
            fail(origin, "unknown field \"" + item.key() + "\" in " + where);
}

double require_number(const ordered_json& obj, const std::string& key,
                      const std::string& origin) {
    if (!obj.contains(key))
        fail(origin, "missing field \"" + key + "\"");
    if (!obj[key].is_number())
        fail(origin, "field \"" + key + "\" must be a number");
    return obj[key].get<double>();
}

int require_int(const ordered_json& obj, const std::string& key, const std::string& origin) {
    if (!obj.contains(key) || !obj[key].is_number_integer())
        fail(origin, "field \"" + key + "\" must be an integer");
    return obj[key].get<int>();
}

Matrix parse_row_major(const ordered_json& arr, Eigen::Index rows, Eigen::Index cols,
                       const std::string& origin, const std::string& what) {
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows * cols)
        fail(origin, what + " must be a flat row-major array of " + std::to_string(rows * cols) +
                         " numbers");
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& cell = arr[static_cast<std::size_t>(r * cols + c)];
            if (!cell.is_number())
                fail(origin, what + " contains a non-numeric entry");
            m(r, c) = cell.get<double>();
        }
    return m;
}

ordered_json row_major(const Matrix& m) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            arr.push_back(m(r, c));
    return arr;
}

} // namespace

ParametricSystem parse_system(const std::string& text, const std::string& origin) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(origin, std::string("JSON parse error: ") + e.what());
    }
    if (!doc.is_object())
        fail(origin, "top level must be an object");
    reject_unknown(doc, {"N", "M", "B", "params", "builder", "matrices"}, origin, "system");

    const int n = require_int(doc, "N", origin);
    const int m = require_int(doc, "M", origin);
    if (n < 1 || m < 1)
        fail(origin, "N and M must be positive");

    if (!doc.contains("params") || !doc["params"].is_array() || doc["params"].empty())
        fail(origin, "field \"params\" must be a non-empty array");
    std::vector<double> values, weights;
    for (const auto& entry : doc["params"]) {
        if (!entry.is_object())
            fail(origin, "params entries must be {value, weight} objects");
        reject_unknown(entry, {"value", "weight"}, origin, "params entry");
        values.push_back(require_number(entry, "value", origin));
        weights.push_back(require_number(entry, "weight", origin));
    }
    ParameterSet params = [&] {
        try {
            return ParameterSet(std::move(values), std::move(weights));
        } catch (const ValidationError& e) {
            fail(origin, e.what());
        }
    }();

    if (!doc.contains("B"))
        fail(origin, "missing field \"B\"");
    const Matrix b = parse_row_major(doc["B"], n, m, origin, "\"B\"");

    const bool has_builder = doc.contains("builder");
    const bool has_matrices = doc.contains("matrices");
    if (has_builder == has_matrices)
        fail(origin, "exactly one of \"builder\" or \"matrices\" is required");

    try {
        if (has_builder) {
            const auto& bld = doc["builder"];
            if (!bld.is_object() || !bld.contains("name") || !bld["name"].is_string())
                fail(origin, "\"builder\" must be an object with a \"name\"");
            const std::string name = bld["name"].get<std::string>();
            ParametricSystem sys = [&] {
                if (name == "cart_pendulum") {
                    reject_unknown(bld, {"name", "mass", "length"}, origin, "builder");
                    const double mass = require_number(bld, "mass", origin);
                    const double length =
                        bld.contains("length") ? require_number(bld, "length", origin) : 1.0;
                    return build_cart_pendulum(mass, params, length);
                }
                if (name == "brunovsky") {
                    reject_unknown(bld, {"name"}, origin, "builder");
                    return build_brunovsky(n, params);
                }
                fail(origin, "unknown builder \"" + name + "\"");
            }();
            if (sys.state_dim() != n || sys.input_dim() != m)
                fail(origin, "declared N/M do not match builder \"" + name + "\"");
            if ((sys.input_matrix().array() != b.array()).any())
                fail(origin, "declared B does not match builder \"" + name + "\"");
            return sys;
        }

        const auto& mats = doc["matrices"];
        if (!mats.is_array() || mats.size() != params.size())
            fail(origin, "\"matrices\" must hold one matrix per parameter");
        std::vector<Matrix> blocks;
        blocks.reserve(mats.size());
        for (const auto& mat : mats)
            blocks.push_back(parse_row_major(mat, n, n, origin, "matrix entry"));
        return ParametricSystem(n, m, b, std::move(params), std::move(blocks),
                                BuilderInfo{"explicit", 0.0, 0.0});
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        if (msg.rfind("system file", 0) == 0)
            throw;
        fail(origin, msg);
    }
}

ParametricSystem load_system(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("system file " + path.string() + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str(), path.string());
}

std::string system_to_json(const ParametricSystem& sys) {
    ordered_json doc;
    doc["N"] = sys.state_dim();
    doc["M"] = sys.input_dim();
    doc["B"] = row_major(sys.input_matrix());
    ordered_json params = ordered_json::array();
    for (std::size_t i = 0; i < sys.params().size(); ++i)
        params.push_back({{"value", sys.params().value(i)}, {"weight", sys.params().weight(i)}});
    doc["params"] = std::move(params);

    const BuilderInfo& info = sys.builder();
    if (info.name == "cart_pendulum") {
        doc["builder"] = {{"name", info.name},
                          {"mass", info.cart_mass},
                          {"length", info.pendulum_length}};
    } else if (info.name == "brunovsky") {
        doc["builder"] = {{"name", info.name}};
    } else {
        ordered_json mats = ordered_json::array();
        for (std::size_t i = 0; i < sys.family_size(); ++i)
            mats.push_back(row_major(sys.dynamics(i)));
        doc["matrices"] = std::move(mats);
    }
    return doc.dump(2) + "\n";
}

void save_system(const ParametricSystem& sys, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("system file " + path.string() + ": cannot open for writing");
    out << system_to_json(sys);
}

} // namespace simcon
