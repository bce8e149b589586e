#pragma once

#include "feshbach/config.hpp"
#include "feshbach/friedrichs.hpp"
#include "feshbach/riccati.hpp"

#include <chrono>
#include <filesystem>
#include <random>

namespace feshbach {

/// Process exit codes of the CLI.
enum ExitCode : int { exit_ok = 0, exit_inadmissible = 2, exit_numerical = 3, exit_config = 4 };

struct IdentityRow {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;
};

struct RiccatiSummary {
    double y_norm = 0.0;
    std::vector<double> gram_eigenvalues;
    OneInSpectrum one_in_spectrum;
};

struct SideReport {
    int side = 0;
    AdmissibilityReport admissibility;
    std::size_t nodes = 0;
    std::optional<RootSolution> solution;
    std::optional<SpectrumClassification> classification;
    std::optional<RiccatiSummary> riccati;
    std::optional<HomotopyPath> homotopy;
};

struct Report {
    std::string command;
    std::string status = "ok";  ///< ok | inadmissible | identity-failure
    std::string message;
    std::vector<SideReport> sides;
    std::optional<double> r0_upper_bound;
    std::vector<IdentityRow> identities;
    std::string config_hash;
    double wall_time_s = 0.0;

    int exit_code() const {
        if (status == "inadmissible") return exit_inadmissible;
        if (status != "ok") return exit_numerical;
        return exit_ok;
    }

    const IdentityRow* row(const std::string& name) const {
        for (const auto& r : identities)
            if (r.name == name) return &r;
        return nullptr;
    }
};

inline json to_json(const AdmissibilityReport& a) {
    json j;
    j["variation"] = a.variation;
    j["distance"] = a.distance;
    j["omega"] = a.omega;
    j["admissible"] = a.admissible;
    j["quarter_d_squared"] = 0.25 * a.distance * a.distance;
    j["r_min"] = a.r_min ? json(*a.r_min) : json(nullptr);
    j["r_max"] = a.r_max ? json(*a.r_max) : json(nullptr);
    return j;
}

inline json to_json(const SpectrumClassification& c) {
    json arr = json::array();
    for (const auto& e : c.entries) {
        json j;
        j["value"] = complex_to_json(e.eigenvalue);
        j["multiplicity"] = e.multiplicity;
        j["label"] = to_string(e.label);
        if (e.label == SpectralLabel::physical_complex) {
            j["m1_min_singular"] = e.m1_min_singular;
            j["verified"] = e.verified;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

inline json to_json(const Report& r) {
    json j;
    j["command"] = r.command;
    j["status"] = r.status;
    if (!r.message.empty()) j["message"] = r.message;
    j["sides"] = json::array();
    for (const auto& s : r.sides) {
        json sj;
        sj["side"] = s.side;
        sj["admissibility"] = to_json(s.admissibility);
        if (s.solution) {
            sj["root"]["x"] = matrix_to_json(s.solution->x);
            sj["root"]["z"] = matrix_to_json(s.solution->z_op);
            sj["root"]["x_norm"] = norm2(s.solution->x);
            sj["root"]["iterations"] = s.solution->iterations;
            sj["root"]["final_step_norm"] = s.solution->final_step_norm;
            sj["root"]["residual"] = s.solution->residual;
        }
        if (s.classification) sj["eigenvalues"] = to_json(*s.classification);
        if (s.riccati) {
            sj["riccati"]["y_norm"] = s.riccati->y_norm;
            sj["riccati"]["gram_eigenvalues"] = s.riccati->gram_eigenvalues;
            sj["riccati"]["one_in_spectrum"]["min_distance"] = s.riccati->one_in_spectrum.min_distance;
            sj["riccati"]["one_in_spectrum"]["present"] = s.riccati->one_in_spectrum.present;
            sj["riccati"]["one_in_spectrum"]["graph_subspaces_intersect"] =
                s.riccati->one_in_spectrum.subspaces_intersect;
        }
        if (s.homotopy) {
            sj["homotopy"]["continuous"] = s.homotopy->continuous;
            sj["homotopy"]["pairing_ambiguous"] = s.homotopy->pairing_ambiguous;
            sj["homotopy"]["crosses_real_band"] = s.homotopy->crosses_real_band;
            sj["homotopy"]["notes"] = s.homotopy->notes;
        }
        j["sides"].push_back(std::move(sj));
    }
    j["radii"]["r0_upper_bound"] = r.r0_upper_bound ? json(*r.r0_upper_bound) : json(nullptr);
    if (!r.sides.empty()) {
        j["radii"]["r_min"] = r.sides.front().admissibility.r_min ? json(*r.sides.front().admissibility.r_min) : json(nullptr);
        j["radii"]["r_max"] = r.sides.front().admissibility.r_max ? json(*r.sides.front().admissibility.r_max) : json(nullptr);
    }
    j["identities"] = json::array();
    for (const auto& row : r.identities) {
        json rj;
        rj["name"] = row.name;
        rj["residual"] = row.residual;
        rj["tolerance"] = row.tolerance;
        rj["pass"] = row.pass;
        rj["skipped"] = row.skipped;
        if (!row.note.empty()) rj["note"] = row.note;
        j["identities"].push_back(std::move(rj));
    }
    j["provenance"]["config_hash"] = r.config_hash;
    j["provenance"]["node_counts"] = json::array();
    for (const auto& s : r.sides) j["provenance"]["node_counts"].push_back(s.nodes);
    j["provenance"]["wall_time_s"] = r.wall_time_s;
    return j;
}

/// Writes via a temporary file in the same directory and renames it into place.
inline void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

namespace detail {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

inline IdentityRow row(std::string name, double residual, double tol, std::string note = {}) {
    return {std::move(name), residual, tol, residual <= tol, false, std::move(note)};
}

inline IdentityRow skipped_row(std::string name, std::string note) {
    return {std::move(name), 0.0, 0.0, true, true, std::move(note)};
}

inline std::string side_tag(int l) { return l > 0 ? "[+1]" : "[-1]"; }

/// Admissibility for every configured side; fills report sides. Returns false when any side fails.
inline bool check_sides(const RunConfig& cfg, const SpectralModel& model, Report& rep, std::vector<Contour>& contours) {
    bool ok = true;
    for (int l : cfg.contour.sides) {
        contours.push_back(make_contour(model, l, cfg.contour.kind, cfg.depth(), cfg.contour.nodes_per_unit));
        SideReport s;
        s.side = l;
        s.admissibility = admissibility(model, contours.back());
        s.nodes = contours.back().size();
        if (!s.admissibility.admissible) {
            ok = false;
            std::ostringstream msg;
            msg << "contour on side " << l << " violates V0 < d^2/4: V0 = " << s.admissibility.variation
                << ", d^2/4 = " << 0.25 * s.admissibility.distance * s.admissibility.distance;
            rep.message += (rep.message.empty() ? "" : "; ") + msg.str();
        }
        rep.sides.push_back(std::move(s));
    }
    if (!ok) rep.status = "inadmissible";
    return ok;
}

inline std::optional<double> r0_upper_bound(const RunConfig& cfg, const SpectralModel& model, int side,
                                            double fallback) {
    double best = fallback;
    const double len = model.delta0.length();
    ContourFamily fam;
    fam.kind = cfg.contour.r0_kind;
    fam.nodes_per_unit = cfg.contour.nodes_per_unit;
    const auto range = cfg.contour.r0_depth_range.value_or(std::pair{0.02 * len, len});
    fam.depth_lo = range.first;
    fam.depth_hi = range.second;
    try {
        best = std::min(best, optimize_r0(model, side, fam).r0);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::inadmissible) throw;
    }
    return best;
}

}  // namespace detail

/// Solves for the operator roots on every configured side and classifies their spectra.
inline Report cmd_solve(const RunConfig& cfg) {
    detail::Timer timer;
    Report rep;
    rep.command = "solve";
    rep.config_hash = config_hash(cfg);
    const auto model = cfg.build();
    std::vector<Contour> contours;
    if (!detail::check_sides(cfg, model, rep, contours)) {
        rep.wall_time_s = timer.seconds();
        return rep;
    }
    const SolverOptions opt{cfg.solver.tol, cfg.solver.max_iter};
    const double tau = cfg.solver.tau_real.value_or(default_tau_real(model));
    for (std::size_t i = 0; i < contours.size(); ++i) {
        auto& s = rep.sides[i];
        s.solution = solve_basic(model, contours[i], 1.0, opt);
        s.classification = classify(model, *s.solution, tau);
    }
    rep.r0_upper_bound = detail::r0_upper_bound(cfg, model, rep.sides.front().side, *rep.sides.front().admissibility.r_min);
    rep.wall_time_s = timer.seconds();
    return rep;
}

namespace detail {

inline cplx random_lens_point(const Contour& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(c.ends.lo, c.ends.hi);
    const double height = c.kind == ContourKind::semicircle ? 0.5 * c.ends.length() : c.depth;
    std::uniform_real_distribution<double> uy(0.0, height);
    const double margin = 0.05 * std::min(0.5 * c.ends.length(), height);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const cplx z{ux(rng), c.side * uy(rng)};
        if (c.in_lens(z) && c.distance_to_curve(z) >= margin && c.resolves(z)) return z;
    }
    fail(ErrorKind::numerical, "could not sample a lens point");
}

/// Random trial pair for the J-orthogonality check: x0 is a sum of simple
/// rational functions with poles off the real axis plus a linear term.
inline TrialPair random_trial(const SpectralModel& model, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const auto m = model.b.rows(), n = model.dim();
    const auto& d = model.delta0;
    std::uniform_real_distribution<double> ux(d.lo, d.hi);
    std::vector<cplx> poles;
    std::vector<CVector> coef;
    TrialPair t;
    for (int k = 0; k < 3; ++k) {
        const double im = (0.2 + 0.3 * std::abs(g(rng))) * d.length() * (k % 2 == 0 ? 1.0 : -1.0);
        poles.emplace_back(ux(rng), im);
        t.breaks.push_back(poles.back().real());
        CVector c(m);
        for (Eigen::Index i = 0; i < m; ++i) c(i) = {g(rng), g(rng)};
        coef.push_back(c);
    }
    CVector lin(m);
    for (Eigen::Index i = 0; i < m; ++i) lin(i) = {g(rng), g(rng)};
    t.x0 = [poles, coef, lin](double mu) {
        CVector v = lin * mu;
        for (std::size_t k = 0; k < poles.size(); ++k) v += coef[k] / (mu - poles[k]);
        return v;
    };
    t.x1 = CVector(n);
    for (Eigen::Index i = 0; i < n; ++i) t.x1(i) = {g(rng), g(rng)};
    return t;
}

inline double spectral_match(std::vector<cplx> a, std::vector<cplx> b) {
    // greedy pairing of two equally sized multisets
    double worst = 0.0;
    for (cplx x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

}  // namespace detail

/// Full identity table for both sides l = +1 and l = -1.
inline Report cmd_verify(const RunConfig& cfg_in) {
    detail::Timer timer;
    RunConfig cfg = cfg_in;
    cfg.contour.sides = {1, -1};
    Report rep;
    rep.command = "verify";
    rep.config_hash = config_hash(cfg_in);
    const auto model = cfg.build();
    std::vector<Contour> contours;
    if (!detail::check_sides(cfg, model, rep, contours)) {
        rep.wall_time_s = timer.seconds();
        return rep;
    }
    const SolverOptions opt{cfg.solver.tol, cfg.solver.max_iter};
    const double tau = cfg.solver.tau_real.value_or(default_tau_real(model));
    const double scale = model.scale();
    const auto n = model.dim();
    const CMatrix eye = CMatrix::Identity(n, n);
    std::mt19937_64 rng(cfg.verify.seed);
    auto& rows = rep.identities;

    std::vector<RootSolution> sols;
    for (std::size_t i = 0; i < 2; ++i) {
        auto sol = solve_basic(model, contours[i], 1.0, opt);
        if (cfg.verify.perturb_root != 0.0) {
            sol.z_op += cfg.verify.perturb_root * eye;
            sol.x += cfg.verify.perturb_root * eye;
        }
        rep.sides[i].solution = sol;
        rep.sides[i].classification = classify(model, sol, tau);
        sols.push_back(std::move(sol));
    }

    // Boundary values of W1 on the cut, checked against +-pi K'_B and an epsilon limit.
    {
        std::uniform_real_distribution<double> ul(model.delta0.lo, model.delta0.hi);
        double worst = 0.0, worst_eps = 0.0;
        for (int k = 0; k < cfg.verify.boundary_points; ++k) {
            double lam = ul(rng);
            if (!model.delta0.interior(lam)) continue;
            const CMatrix kp = model.kprime(lam);
            for (int a : {1, -1}) {
                const CMatrix w = w1_boundary(model, lam, a);
                worst = std::max(worst, norm2(imaginary_part(w) - a * pi * kp));
                worst_eps = std::max(worst_eps, norm2(w1_physical(model, cplx{lam, a * 1e-12}) - w));
            }
        }
        rows.push_back(detail::row("boundary_limits", worst / scale, 1e-10));
        rows.push_back(detail::row("boundary_epsilon_limit", worst_eps / scale, 1e-9));
    }
    // Herglotz property on the upper half-plane.
    {
        std::uniform_real_distribution<double> ux(model.delta0.lo - 1.0, model.delta0.hi + 1.0), uy(0.01, 2.0);
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const CMatrix w = w1_physical(model, {ux(rng), uy(rng)});
            worst = std::max(worst, -min_hermitian_eigenvalue(imaginary_part(w)));
        }
        rows.push_back(detail::row("herglotz", std::max(0.0, worst), 1e-10));
    }

    std::vector<OmegaOperator> omegas;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& c = contours[i];
        const auto& sol = sols[i];
        const auto& other = sols[1 - i];
        const int l = c.side;
        const std::string tag = detail::side_tag(l);
        const auto& adm = rep.sides[i].admissibility;
        const double d = adm.distance;

        // Two routes onto the unphysical sheet.
        double worst = 0.0;
        for (int k = 0; k < cfg.verify.lens_points; ++k) {
            const cplx z = detail::random_lens_point(c, rng);
            const CMatrix a = m1_continued(model, c, z);
            worst = std::max(worst, norm2(a - sheets_value(model, c, z)) / scale);
        }
        rows.push_back(detail::row("sheets" + tag, worst, 1e-9));

        // Continuity across the cut from the physical side.
        {
            std::uniform_real_distribution<double> ul(model.delta0.lo, model.delta0.hi);
            double w = 0.0;
            for (int k = 0; k < 20; ++k) {
                const double lam = model.delta0.lo + model.delta0.length() * (0.1 + 0.8 * (k + 0.5) / 20.0);
                const CMatrix a = m1_continued(model, c, cplx{lam, -l * 1e-6});
                const CMatrix b = model.a1 - lam * eye + w1_boundary(model, lam, -l);
                w = std::max(w, norm2(a - b));
            }
            rows.push_back(detail::row("boundary_consistency" + tag, w, 1e-5));
        }

        // Ball containment and spectral localisation.
        rows.push_back(detail::row("ball_containment" + tag, std::max(0.0, norm2(sol.x) - *adm.r_min), 1e-9));
        {
            double far = 0.0;
            for (cplx ev : sorted_eigenvalues(sol.z_op)) far = std::max(far, detail::dist_to_sigma1(model, ev));
            rows.push_back(detail::row("spectral_localization" + tag, std::max(0.0, far - *adm.r_min), 1e-9));
        }
        // Root property M1(lambda, Gamma) u = 0.
        {
            Eigen::ComplexEigenSolver<CMatrix> es(sol.z_op);
            double w = 0.0;
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                const CVector u = es.eigenvectors().col(k).normalized();
                w = std::max(w, (m1_continued(model, c, es.eigenvalues()(k)) * u).norm());
            }
            rows.push_back(detail::row("root_property" + tag, w / scale, 1e-7));
        }
        // Factorisation M1(z, Gamma) = F1(z, Gamma)(Z - z) on O_{d/2}(sigma1).
        {
            std::uniform_real_distribution<double> ur(0.0, 0.5 * d), ut(0.0, 2.0 * pi);
            std::uniform_int_distribution<Eigen::Index> ui(0, model.sigma1.size() - 1);
            double w = 0.0, cond = 0.0;
            for (int k = 0; k < cfg.verify.factor_points; ++k) {
                const cplx z = model.sigma1(ui(rng)) + std::polar(ur(rng), ut(rng));
                const auto f = factor_F1(model, c, sol, z);
                w = std::max(w, norm2(m1_continued(model, c, z) - f.f1 * (sol.z_op - z * eye)));
                cond = std::max(cond, f.condition);
            }
            rows.push_back(detail::row("factorization" + tag, w / scale, 1e-9));
            rows.push_back(detail::row("f1_condition" + tag, cond, 1e12, "largest cond(F1) on O_{d/2}(sigma1)"));
        }
        // Omega bound.
        auto om = compute_Omega(model, c, sol, other);
        rows.push_back({"omega_bound" + tag, om.norm, om.bound, om.bound_ok, false, "||Omega|| < V0/(d^2/4)"});
        omegas.push_back(om);

        // Contour reconstruction of (I - Omega)^{-1} and Z.
        try {
            const auto rec = reconstruct_from_contour(model, c, sol);
            const CMatrix inv = (eye - om.omega).inverse();
            rows.push_back(detail::row("omega_resolvent" + tag, norm2(rec.h0 - inv) / scale, 1e-8));
            rows.push_back(detail::row("hadj_contour" + tag, norm2(rec.h1 - sol.z_op * inv) / scale, 1e-8));
            rows.push_back(detail::row("hadj" + tag, norm2(inv * other.z_op.adjoint() - sol.z_op * inv) / scale, 1e-9));
            rows.push_back(detail::row("z_reconstruction" + tag, norm2(rec.z_reconstructed - sol.z_op) / scale, 1e-8));
            rows.push_back(detail::row(
                "similarity" + tag,
                detail::spectral_match(sorted_eigenvalues(other.z_op.adjoint()), sorted_eigenvalues(sol.z_op)) / scale,
                1e-8));
        } catch (const Error& e) {
            rows.push_back({"omega_resolvent" + tag, 0.0, 1e-8, false, false, e.what()});
        }

        // Riccati block: requires spec(Z) separated from delta0 and outside D^l.
        try {
            const auto ric = compute_Y(model, sol);
            const auto one = check_one_in_spectrum(ric);
            rep.sides[i].riccati = RiccatiSummary{
                ric.y_norm, std::vector<double>(ric.gram_eigenvalues.data(), ric.gram_eigenvalues.data() + n), one};
            rows.push_back(detail::row("zay" + tag, check_ZAY(model, sol, ric) / scale, 1e-8));
            std::vector<double> mus;
            for (int k = 0; k < cfg.verify.riccati_points; ++k)
                mus.push_back(model.delta0.lo + model.delta0.length() * (k + 0.5) / cfg.verify.riccati_points);
            rows.push_back(detail::row("riccati_Y" + tag, riccati_residual(model, ric, mus) / scale, 1e-8));
            rows.push_back(detail::row("riccati_X" + tag, adjoint_riccati_residual(model, ric, mus) / scale, 1e-8));
            std::vector<TrialPair> trials;
            for (int k = 0; k < cfg.verify.trial_vectors; ++k) trials.push_back(detail::random_trial(model, rng));
            rows.push_back(detail::row("j_orthogonality" + tag, j_orthogonality(ric, trials) / scale, 1e-10));
            const bool nonreal = rep.sides[i].classification->count(SpectralLabel::real) == 0;
            if (nonreal && !model.zero_coupling())
                rows.push_back(detail::row("norm_floor" + tag, std::max(0.0, 1.0 - ric.y_norm), 1e-8, "||Y|| >= 1"));
            else
                rows.push_back(detail::skipped_row("norm_floor" + tag, "spectrum of Z is not purely non-real"));
            rows.push_back(detail::row("norm_ceiling" + tag, std::max(0.0, ric.y_norm * ric.y_norm - ric.ysn_bound),
                                       1e-8, "||Y||^2 <= int ||K'|| ||(Z-mu)^-1||^2"));
            rows.push_back(detail::row("omega_two_path" + tag,
                                       norm2(compute_Omega_on_interval(model, sol, other) - om.omega) / scale, 1e-9));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::numerical) throw;
            for (const char* name : {"zay", "riccati_Y", "riccati_X", "j_orthogonality", "norm_floor", "norm_ceiling",
                                     "omega_two_path"})
                rows.push_back(detail::skipped_row(name + tag, e.what()));
        }
    }
    rows.push_back(detail::row("omega_adjoint", norm2(omegas[1].omega - omegas[0].omega.adjoint()) / scale, 1e-10));

    for (const auto& r : rows)
        if (!r.skipped && !r.pass) rep.status = "identity-failure";
    rep.r0_upper_bound = detail::r0_upper_bound(cfg, model, 1, *rep.sides.front().admissibility.r_min);
    rep.wall_time_s = timer.seconds();
    return rep;
}

struct SweepRow {
    double t = 0.0;
    std::string trajectory_id;
    cplx value;
    SpectralLabel label = SpectralLabel::real;
};

struct SweepResult {
    Report report;
    std::vector<SweepRow> rows;

    std::string csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "t,trajectory_id,re,im,label\n";
        for (const auto& r : rows)
            os << r.t << ',' << r.trajectory_id << ',' << r.value.real() << ',' << r.value.imag() << ','
               << to_string(r.label) << '\n';
        return os.str();
    }
};

/// Coupling homotopy t -> t B along the configured grid for every configured side.
inline SweepResult cmd_sweep(const RunConfig& cfg) {
    detail::Timer timer;
    SweepResult out;
    auto& rep = out.report;
    rep.command = "sweep";
    rep.config_hash = config_hash(cfg);
    if (cfg.t_grid.empty()) throw ConfigError("sweep: t_grid is empty");
    const auto model = cfg.build();
    std::vector<Contour> contours;
    for (int l : cfg.contour.sides) {
        contours.push_back(make_contour(model, l, cfg.contour.kind, cfg.depth(), cfg.contour.nodes_per_unit));
        SideReport s;
        s.side = l;
        s.admissibility = admissibility(model, contours.back(), cfg.t_grid.back());
        s.nodes = contours.back().size();
        if (!s.admissibility.admissible) {
            rep.status = "inadmissible";
            rep.message = "contour inadmissible at the largest t on side " + std::to_string(l);
        }
        rep.sides.push_back(std::move(s));
    }
    if (rep.status != "ok") {
        rep.wall_time_s = timer.seconds();
        return out;
    }
    const SolverOptions opt{cfg.solver.tol, cfg.solver.max_iter};
    const double tau = cfg.solver.tau_real.value_or(default_tau_real(model));
    for (std::size_t i = 0; i < contours.size(); ++i) {
        auto path = homotopy_path(model, contours[i], cfg.t_grid, opt);
        const int l = contours[i].side;
        for (const auto& p : path.points)
            for (std::size_t k = 0; k < p.eigenvalues.size(); ++k)
                out.rows.push_back({p.t, (l > 0 ? "+1/" : "-1/") + std::to_string(k), p.eigenvalues[k],
                                    label_for(p.eigenvalues[k], l, tau)});
        rep.sides[i].solution = path.points.back().solution;
        rep.sides[i].classification = path.points.back().classification;
        rep.sides[i].homotopy = std::move(path);
    }
    rep.wall_time_s = timer.seconds();
    return out;
}

/// Closed-form summary of the scalar model; a1 != 0 goes through the generic solver.
inline json cmd_friedrichs(const friedrichs::Params& p) {
    friedrichs::validate(p);
    json j;
    j["alpha"] = p.alpha;
    j["a1"] = p.a1;
    j["b"] = p.b;
    const auto model = friedrichs::to_model(p);
    j["admissible_semicircle"] =
        admissibility(model, make_contour(model, 1, ContourKind::semicircle, p.alpha)).admissible;
    if (p.a1 == 0.0 && p.b > 0.0) {
        const auto o = friedrichs::oracle_solution(p);
        j["y"] = o.y;
        j["z_plus"] = complex_to_json(o.z_plus);
        j["z_minus"] = complex_to_json(o.z_minus);
        j["y_norm"] = o.y_norm;
        j["m1y1_residual"] = o.m1y1_residual;
        j["closed_m1_residual"] =
            std::max(std::abs(friedrichs::closed_m1(p, o.z_plus)), std::abs(friedrichs::closed_m1(p, o.z_minus)));
        j["roots_in_upper_half_plane"] = friedrichs::winding_count(p, 1);
        j["roots_in_lower_half_plane"] = friedrichs::winding_count(p, -1);
        j["method"] = "closed-form";
        return j;
    }
    j["method"] = "fixed-point";
    for (int l : {1, -1}) {
        const auto c = make_contour(model, l, ContourKind::semicircle, p.alpha);
        const auto sol = solve_basic(model, c);
        const cplx z = sol.z_op(0, 0);
        j[l > 0 ? "z_plus" : "z_minus"] = complex_to_json(z);
    }
    return j;
}

}  // namespace feshbach
