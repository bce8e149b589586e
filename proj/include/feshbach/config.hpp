#pragma once

#include "feshbach/contour.hpp"

#include "json.hpp"

#include <fstream>
#include <iomanip>
#include <optional>

namespace feshbach {

using json = nlohmann::json;

/// Error in the run configuration (exit code 4).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(where + ": expected a complex number [re, im]");
}

inline json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
        throw ConfigError(where + ": expected a non-empty list of rows");
    const auto rows = static_cast<Eigen::Index>(j.size()), cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
            throw ConfigError(where + ": ragged matrix rows");
        for (Eigen::Index k = 0; k < cols; ++k) {
            m(i, k) = complex_from_json(j[i][k], where);
            if (!std::isfinite(m(i, k).real()) || !std::isfinite(m(i, k).imag()))
                throw ConfigError(where + ": non-finite entry");
        }
    }
    return m;
}

struct ModelConfig {
    Interval interval{-1.0, 1.0};
    CMatrix a1;
    std::vector<CMatrix> coupling;  ///< coefficient k multiplies mu^k
};

struct ContourConfig {
    ContourKind kind = ContourKind::semicircle;
    std::vector<int> sides{1, -1};
    std::optional<double> depth;  ///< defaults to the half-length of the interval
    int nodes_per_unit = 200;
    ContourKind r0_kind = ContourKind::rectangle;
    std::optional<std::pair<double, double>> r0_depth_range;  ///< defaults to [0.02 L, L]
};

struct SolverConfig {
    double tol = 1e-12;
    int max_iter = 500;
    std::optional<double> tau_real;
};

struct VerifyConfig {
    int lens_points = 50;
    int factor_points = 30;
    int riccati_points = 50;
    int boundary_points = 50;
    int trial_vectors = 20;
    std::uint64_t seed = 20240611;
    double perturb_root = 0.0;  ///< test hook: adds this multiple of I to each Z before checking
};

struct OutputConfig {
    std::optional<std::string> report;
    std::optional<std::string> csv;
};

struct RunConfig {
    ModelConfig model;
    ContourConfig contour;
    SolverConfig solver;
    std::vector<double> t_grid;
    VerifyConfig verify;
    OutputConfig output;

    SpectralModel build() const {
        require(!model.coupling.empty(), "config: coupling needs at least one coefficient");
        return build_model(model.interval, model.a1,
                           MatrixPolynomial(model.coupling.front().rows(), model.coupling.front().cols(), model.coupling));
    }

    double depth() const { return contour.depth.value_or(0.5 * model.interval.length()); }
};

namespace detail {

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    try {
        return obj[key].get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

inline void check_finite(double v, const std::string& where) {
    if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    if (!j.contains("model")) throw ConfigError("config: missing 'model'");
    RunConfig c;
    const auto& m = j["model"];
    const auto iv = detail::get_or<std::vector<double>>(m, "interval", {-1.0, 1.0});
    if (iv.size() != 2) throw ConfigError("model.interval: expected [lo, hi]");
    detail::check_finite(iv[0], "model.interval");
    detail::check_finite(iv[1], "model.interval");
    c.model.interval = {iv[0], iv[1]};
    if (!m.contains("a1")) throw ConfigError("model: missing 'a1'");
    c.model.a1 = matrix_from_json(m["a1"], "model.a1");
    if (!m.contains("coupling") || !m["coupling"].is_array() || m["coupling"].empty())
        throw ConfigError("model: 'coupling' must be a non-empty list of matrices");
    for (std::size_t k = 0; k < m["coupling"].size(); ++k)
        c.model.coupling.push_back(matrix_from_json(m["coupling"][k], "model.coupling[" + std::to_string(k) + "]"));
    if (c.model.a1.rows() != c.model.a1.cols()) throw ConfigError("model.a1: must be square");
    for (const auto& b : c.model.coupling)
        if (b.cols() != c.model.a1.rows() || b.rows() != c.model.coupling.front().rows())
            throw ConfigError("model.coupling: coefficient shapes do not match a1");

    if (j.contains("contour")) {
        const auto& cj = j["contour"];
        try {
            c.contour.kind = parse_contour_kind(detail::get_or<std::string>(cj, "kind", "semicircle"));
            c.contour.r0_kind = parse_contour_kind(detail::get_or<std::string>(cj, "r0_kind", "rectangle"));
        } catch (const Error& e) {
            throw ConfigError(std::string("contour: ") + e.what());
        }
        c.contour.sides = detail::get_or<std::vector<int>>(cj, "sides", {1, -1});
        for (int s : c.contour.sides)
            if (s != 1 && s != -1) throw ConfigError("contour.sides: entries must be +1 or -1");
        if (cj.contains("depth") && !cj["depth"].is_null()) c.contour.depth = detail::get_or<double>(cj, "depth", 0.0);
        c.contour.nodes_per_unit = detail::get_or<int>(cj, "nodes_per_unit", 200);
        if (cj.contains("r0_depth_range") && !cj["r0_depth_range"].is_null()) {
            const auto r = detail::get_or<std::vector<double>>(cj, "r0_depth_range", {});
            if (r.size() != 2) throw ConfigError("contour.r0_depth_range: expected [lo, hi]");
            c.contour.r0_depth_range = std::pair{r[0], r[1]};
        }
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        c.solver.tol = detail::get_or<double>(s, "tol", 1e-12);
        c.solver.max_iter = detail::get_or<int>(s, "max_iter", 500);
        if (s.contains("tau_real") && !s["tau_real"].is_null()) c.solver.tau_real = detail::get_or<double>(s, "tau_real", 0.0);
    }
    if (j.contains("sweep")) c.t_grid = detail::get_or<std::vector<double>>(j["sweep"], "t_grid", {});
    if (j.contains("verify")) {
        const auto& v = j["verify"];
        c.verify.lens_points = detail::get_or<int>(v, "lens_points", 50);
        c.verify.factor_points = detail::get_or<int>(v, "factor_points", 30);
        c.verify.riccati_points = detail::get_or<int>(v, "riccati_points", 50);
        c.verify.boundary_points = detail::get_or<int>(v, "boundary_points", 50);
        c.verify.trial_vectors = detail::get_or<int>(v, "trial_vectors", 20);
        c.verify.seed = detail::get_or<std::uint64_t>(v, "seed", 20240611);
        c.verify.perturb_root = detail::get_or<double>(v, "perturb_root", 0.0);
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("report") && !o["report"].is_null()) c.output.report = o["report"].get<std::string>();
        if (o.contains("csv") && !o["csv"].is_null()) c.output.csv = o["csv"].get<std::string>();
    }
    for (double t : c.t_grid) detail::check_finite(t, "sweep.t_grid");
    for (double v : {c.solver.tol, c.verify.perturb_root}) detail::check_finite(v, "config");
    if (c.contour.depth) detail::check_finite(*c.contour.depth, "contour.depth");
    return c;
}

inline json to_json(const RunConfig& c) {
    json j;
    j["model"]["interval"] = {c.model.interval.lo, c.model.interval.hi};
    j["model"]["a1"] = matrix_to_json(c.model.a1);
    j["model"]["coupling"] = json::array();
    for (const auto& m : c.model.coupling) j["model"]["coupling"].push_back(matrix_to_json(m));
    j["contour"]["kind"] = to_string(c.contour.kind);
    j["contour"]["sides"] = c.contour.sides;
    j["contour"]["depth"] = c.contour.depth ? json(*c.contour.depth) : json(nullptr);
    j["contour"]["nodes_per_unit"] = c.contour.nodes_per_unit;
    j["contour"]["r0_kind"] = to_string(c.contour.r0_kind);
    j["contour"]["r0_depth_range"] = c.contour.r0_depth_range
                                         ? json::array({c.contour.r0_depth_range->first, c.contour.r0_depth_range->second})
                                         : json(nullptr);
    j["solver"]["tol"] = c.solver.tol;
    j["solver"]["max_iter"] = c.solver.max_iter;
    j["solver"]["tau_real"] = c.solver.tau_real ? json(*c.solver.tau_real) : json(nullptr);
    j["sweep"]["t_grid"] = c.t_grid;
    j["verify"]["lens_points"] = c.verify.lens_points;
    j["verify"]["factor_points"] = c.verify.factor_points;
    j["verify"]["riccati_points"] = c.verify.riccati_points;
    j["verify"]["boundary_points"] = c.verify.boundary_points;
    j["verify"]["trial_vectors"] = c.verify.trial_vectors;
    j["verify"]["seed"] = c.verify.seed;
    j["verify"]["perturb_root"] = c.verify.perturb_root;
    j["output"]["report"] = c.output.report ? json(*c.output.report) : json(nullptr);
    j["output"]["csv"] = c.output.csv ? json(*c.output.csv) : json(nullptr);
    return j;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

/// 64-bit FNV-1a of the canonical serialisation.
inline std::string config_hash(const RunConfig& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : to_json(c).dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace feshbach
