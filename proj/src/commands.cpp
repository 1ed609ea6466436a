#include <algorithm>
#include <cmath>
#include <ostream>

#include "report.hpp"
#include "ruledlab/error.hpp"
#include "ruledlab/ruled.hpp"

namespace ruledlab::cli {

using detail::json;
using detail::Warnings;

namespace {

// Closed form and oracle count as agreeing below this relative difference.
constexpr double kAgreementRel = 1e-4;

const char* character_name(CausalCharacter c) {
    switch (c) {
        case CausalCharacter::Timelike: return "timelike";
        case CausalCharacter::Spacelike: return "spacelike";
        case CausalCharacter::Null: return "null";
    }
    return "?";
}

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

json classification_json(const ruled::SurfaceClassification& c, Warnings& w) {
    json j;
    j["ruling_character"] = c.ruling_character ? json(character_name(*c.ruling_character)) : json(nullptr);
    json type = nullptr;
    if (c.ruling_character == CausalCharacter::Timelike) type = "N-";
    if (c.ruling_character == CausalCharacter::Spacelike) type = "N+";
    j["type"] = type;
    j["developable"] = optional_bool(c.developable);
    j["skew"] = c.developable ? json(!*c.developable) : json(nullptr);
    j["conoid"] = optional_bool(c.conoid);
    j["cylindrical"] = optional_bool(c.cylindrical);
    j["max_abs_d"] = w.number(c.max_abs_d, "maximum |d|");
    j["notes"] = c.notes;
    return j;
}

json frame_json(const ruled::FrameSample& f, Warnings& w) {
    json j;
    j["s"] = w.number(f.s, "arc length");
    j["striction_point"] = w.vec(f.c, "striction point");
    j["q"] = w.vec(f.q, "q");
    j["h"] = w.vec(f.h, "h");
    j["a"] = w.vec(f.a, "a");
    j["k1"] = w.number(f.k1, "k1");
    j["k2"] = w.number(f.k2, "k2");
    j["theta"] = w.number(f.theta, "theta (striction curve not timelike)");
    j["epsilon"] = f.epsilon;
    j["striction_character"] = character_name(f.striction_character);
    return j;
}

json predicate_json(const ruled::PredicateResult& p) {
    return json{{"geometric_residual", detail::finite_or_null(p.geometric_residual)},
                {"curvature_residual", p.curvature_residual ? detail::finite_or_null(*p.curvature_residual)
                                                            : json(nullptr)},
                {"satisfiable", p.satisfiable},
                {"geometric_holds", p.geometric_holds},
                {"curvature_holds", p.curvature_holds},
                {"agree", p.agree}};
}

json predicates_json(const ruled::PredicateReport& r) {
    return json{{"samples", r.samples},
                {"asymptotic_line", predicate_json(r.asymptotic)},
                {"geodesic", predicate_json(r.geodesic)},
                {"line_of_curvature", predicate_json(r.line_of_curvature)}};
}

json tolerances_json(const Tolerances& t) {
    return json{{"causal_eps", t.causal_eps}, {"frame_eps", t.frame_eps}, {"general_eps", t.general_eps}};
}

// Indices of `wanted` evenly spaced samples out of `n`; the spacing must be a whole number of steps.
std::vector<std::size_t> subsample(std::size_t n, const std::optional<std::size_t>& wanted) {
    std::vector<std::size_t> idx;
    if (!wanted || *wanted == n) {
        for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
        return idx;
    }
    if (*wanted > n || (n - 1) % (*wanted - 1) != 0) {
        throw ConfigError("/output/s_samples: " + std::to_string(*wanted) +
                          " samples do not divide the " + std::to_string(n) + "-point integration grid evenly");
    }
    const std::size_t stride = (n - 1) / (*wanted - 1);
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
    return idx;
}

class Session {
public:
    Session(Command cmd, Config cfg, const RunOptions& opt) : cmd_(cmd), cfg_(std::move(cfg)), opt_(opt) {
        if (opt.tolerance) {
            if (!(*opt.tolerance > 0.0) || !std::isfinite(*opt.tolerance)) {
                throw ConfigError("--tolerance: must be a positive number");
            }
            cfg_.tolerances.general_eps = *opt.tolerance;
            cfg_.suite.tolerance = *opt.tolerance;
        }
        tol_ = cfg_.tolerances;
        const bool need_intrinsic = cmd == Command::Synthesize || cmd == Command::Transversal;
        const bool need_surface = cmd == Command::Analyze || cmd == Command::Mesh;
        if (need_intrinsic && cfg_.mode != Mode::Intrinsic) {
            throw ConfigError(std::string(to_string(cmd)) + " requires an intrinsic config (k1, k2, theta)");
        }
        if (need_surface && cfg_.mode == Mode::None) {
            throw ConfigError(std::string(to_string(cmd)) + " requires an explicit or intrinsic surface");
        }
        if (cmd == Command::Transversal && !cfg_.transversal) {
            throw ConfigError("transversal requires a 'transversal' section");
        }
        report_["tool"] = kToolName;
        report_["version"] = kVersion;
        report_["command"] = to_string(cmd);
        report_["mode"] = to_string(cfg_.mode);
        report_["config"] = cfg_.source;
        report_["tolerances"] = tolerances_json(tol_);
    }

    int execute(std::ostream& err) {
        int code = kExitOk;
        switch (cmd_) {
            case Command::Analyze: analyze(); break;
            case Command::Synthesize: synthesize(); break;
            case Command::Transversal: transversal_cmd(); break;
            case Command::Verify: code = verify_cmd(err); break;
            case Command::Mesh: mesh(); break;
        }
        json outputs;
        const auto report_path = resolve(cfg_.output.report_path.value_or(std::string(to_string(cmd_)) + "_report.json"));
        outputs["report"] = report_path.generic_string();
        outputs["mesh"] = mesh_written_ ? json(mesh_path_.generic_string()) : json(nullptr);
        report_["outputs"] = outputs;
        report_["warnings"] = warnings_.to_json();
        write_atomic(report_path, detail::dump(report_));
        return code;
    }

private:
    std::filesystem::path resolve(const std::string& p) const {
        std::filesystem::path path(p);
        if (opt_.output_dir && path.is_relative()) return *opt_.output_dir / path;
        return path;
    }

    ruled::ExplicitSurface explicit_surface() const {
        return ruled::ExplicitSurface::from_strings(cfg_.f, cfg_.q, cfg_.u0, cfg_.u1, cfg_.normalize_q);
    }

    synth::SampledSurface synthesized() const {
        if (cfg_.theta.empty()) throw ConfigError("/theta: required to synthesize the striction curve");
        if (cfg_.epsilon != -1) throw ConfigError("/epsilon: surface synthesis supports epsilon = -1 only");
        return synth::synthesize_surface(cfg_.intrinsic(), tol_);
    }

    void write_mesh(const std::vector<Vec3>& grid, std::size_t ns, std::size_t nv) {
        mesh_path_ = resolve(cfg_.output.mesh_path.value_or("mesh.obj"));
        export_obj(grid, ns, nv, mesh_path_);
        mesh_written_ = true;
        report_["mesh"] = json{{"path", mesh_path_.generic_string()},
                               {"s_samples", ns},
                               {"v_samples", nv},
                               {"vertices", ns * nv},
                               {"faces", (ns - 1) * (nv - 1)}};
    }

    // Grid c_i + v_j q_i over selected base samples.
    std::vector<Vec3> ruled_grid(const std::vector<Vec3>& base, const std::vector<Vec3>& ruling,
                                 const std::vector<std::size_t>& idx) const {
        const auto vs = synth::linspace(cfg_.output.v0, cfg_.output.v1, cfg_.output.v_samples);
        std::vector<Vec3> grid;
        grid.reserve(idx.size() * vs.size());
        for (std::size_t i : idx) {
            for (double v : vs) grid.push_back(base[i] + v * ruling[i]);
        }
        return grid;
    }

    void analyze() {
        if (cfg_.mode == Mode::Explicit) {
            analyze_explicit();
        } else {
            analyze_intrinsic();
        }
    }

    void analyze_explicit() {
        const auto n = explicit_surface();
        report_["classification"] = classification_json(ruled::classify(n, cfg_.samples, tol_), warnings_);
        json samples = json::array();
        bool timelike = true;
        for (double u : synth::linspace(cfg_.u0, cfg_.u1, cfg_.samples)) {
            json j;
            j["u"] = u;
            try {
                j["d"] = warnings_.number(ruled::distribution_parameter(n, u, tol_), "distribution parameter");
            } catch (const Error& e) {
                warnings_.add(e.what());
                j["d"] = nullptr;
            }
            try {
                const auto st = ruled::striction(n, u, tol_);
                j["v0"] = warnings_.number(st.v0, "strictional distance");
                j["striction_point"] = warnings_.vec(st.point, "striction point");
            } catch (const Error& e) {
                warnings_.add(e.what());
                j["v0"] = nullptr;
                j["striction_point"] = nullptr;
            }
            try {
                const auto f = ruled::frenet_frame_at(n, u, tol_);
                timelike &= f.striction_character == CausalCharacter::Timelike;
                j["frame"] = frame_json(f, warnings_);
            } catch (const Error& e) {
                warnings_.add(e.what());
                timelike = false;
                j["frame"] = nullptr;
            }
            samples.push_back(std::move(j));
        }
        report_["samples"] = std::move(samples);
        if (timelike) {
            const auto frames = ruled::sample_frames(n, cfg_.samples, tol_);
            report_["predicates"] = predicates_json(ruled::striction_predicates(frames, tol_));
        } else {
            warnings_.add("NonTimelikeStriction: striction curve is not timelike; theta and striction predicates "
                          "are undefined");
            report_["predicates"] = nullptr;
        }
    }

    void analyze_intrinsic() {
        const auto surf = synthesized();
        const auto sampled = surf.as_ruled();
        report_["classification"] = classification_json(ruled::classify(sampled, surf.frames(), tol_), warnings_);
        const auto idx = subsample(surf.size(), cfg_.output.s_samples);
        json samples = json::array();
        double eq8 = 0.0;
        for (std::size_t i = 0; i < surf.size(); ++i) {
            const auto& f = surf.frames()[i];
            std::optional<double> d;
            try {
                d = ruled::distribution_parameter(sampled, i, tol_);
                eq8 = std::max(eq8, std::abs(*d + std::sinh(*f.theta) / f.k1));
            } catch (const Error& e) {
                warnings_.add(e.what());
            }
            if (!std::binary_search(idx.begin(), idx.end(), i)) continue;
            json j = frame_json(f, warnings_);
            j["d"] = warnings_.number(d, "distribution parameter");
            j["d_expected"] = warnings_.number(-std::sinh(*f.theta) / f.k1, "-sinh(theta)/k1");
            samples.push_back(std::move(j));
        }
        report_["samples"] = std::move(samples);
        report_["max_abs_d_residual"] = warnings_.number(eq8, "maximum |d + sinh(theta)/k1|");
        report_["predicates"] = predicates_json(ruled::striction_predicates(surf.frames(), tol_));
    }

    void synthesize() {
        json frames = json::array();
        if (cfg_.theta.empty() || cfg_.epsilon != -1) {
            const auto states = synth::integrate_frame(cfg_.intrinsic(), tol_);
            const auto idx = subsample(states.size(), cfg_.output.s_samples);
            double worst = 0.0;
            for (const auto& st : states) {
                worst = std::max(worst, frame_check(st.q, st.h, st.a, cfg_.epsilon, tol_).max_residual);
            }
            for (std::size_t i : idx) {
                const auto& st = states[i];
                frames.push_back(json{{"s", st.s},
                                      {"q", warnings_.vec(st.q, "q")},
                                      {"h", warnings_.vec(st.h, "h")},
                                      {"a", warnings_.vec(st.a, "a")}});
            }
            warnings_.add("theta absent or epsilon = +1: only the frame was integrated");
            report_["frames"] = std::move(frames);
            report_["max_orthonormality_residual"] = warnings_.number(worst, "orthonormality residual");
            return;
        }
        const auto surf = synthesized();
        const auto idx = subsample(surf.size(), cfg_.output.s_samples);
        double worst = 0.0;
        for (const auto& f : surf.frames()) {
            worst = std::max(worst, frame_check(f.q, f.h, f.a, f.epsilon, tol_).max_residual);
        }
        for (std::size_t i : idx) frames.push_back(frame_json(surf.frames()[i], warnings_));
        report_["frames"] = std::move(frames);
        report_["max_orthonormality_residual"] = warnings_.number(worst, "orthonormality residual");
        if (cfg_.output.mesh_path) {
            const auto grid = ruled_grid(surf.striction(), surf.rulings(), idx);
            write_mesh(grid, idx.size(), cfg_.output.v_samples);
        }
    }

    void transversal_cmd() {
        const auto surf = synthesized();
        const auto spec = cfg_.transversal_spec();
        const double tol = tol_.general_eps;
        report_["transversal"] = json{{"kind", transversal::to_string(spec.kind)},
                                      {"angle", spec.angle.text},
                                      {"branch", transversal::to_string(spec.branch)}};
        const auto all = transversal::sample_transversal(surf, spec, tol_);
        const auto idx = subsample(all.size(), cfg_.output.s_samples);
        auto agree = [](const std::optional<double>& a, const std::optional<double>& b) -> json {
            if (!a || !b) return nullptr;
            return std::abs(*a - *b) / std::max({std::abs(*a), std::abs(*b), 1.0}) <= kAgreementRel;
        };
        bool v_agree = true, d_agree = true;
        for (const auto& t : all) {
            if (t.v_closed && t.v_oracle) v_agree &= agree(t.v_closed, t.v_oracle).get<bool>();
            if (t.d_closed && t.d_oracle) d_agree &= agree(t.d_closed, t.d_oracle).get<bool>();
            for (const auto& issue : t.issues) warnings_.add(issue);
        }
        json samples = json::array();
        for (std::size_t i : idx) {
            const auto& t = all[i];
            samples.push_back(json{{"s", t.s},
                                   {"q_t", warnings_.vec(t.q_t, "transversal ruling")},
                                   {"ell", t.ell},
                                   {"v_closed", warnings_.number(t.v_closed, "closed-form strictional distance")},
                                   {"v_oracle", warnings_.number(t.v_oracle, "oracle strictional distance")},
                                   {"v_agree", agree(t.v_closed, t.v_oracle)},
                                   {"d_closed", warnings_.number(t.d_closed, "closed-form distribution parameter")},
                                   {"d_oracle", warnings_.number(t.d_oracle, "oracle distribution parameter")},
                                   {"d_relation", warnings_.number(t.d_relation, "distribution parameter via d")},
                                   {"d_agree", agree(t.d_closed, t.d_oracle)}});
        }
        report_["samples"] = std::move(samples);
        report_["agreement"] = json{{"strictional_distance", v_agree}, {"distribution_parameter", d_agree}};

        auto condition = [&](const char* key, auto&& fn) {
            try {
                const auto rep = fn();
                for (const auto& d : rep.discrepancies) warnings_.add(std::string(key) + ": " + d);
                report_[key] = to_json(rep);
            } catch (const Error& e) {
                warnings_.add(std::string(key) + ": " + e.what());
                report_[key] = nullptr;
            }
        };
        condition("coincidence", [&] { return transversal::coincidence_condition(surf, spec, tol, tol_); });
        condition("developability", [&] { return transversal::developability_condition(surf, spec, tol, tol_); });
        condition("corollary", [&] { return transversal::corollary_checks(surf, spec, tol, tol_); });

        if (cfg_.output.mesh_path) {
            std::vector<Vec3> rulings;
            rulings.reserve(all.size());
            for (const auto& t : all) rulings.push_back(t.q_t);
            const auto grid = ruled_grid(surf.striction(), rulings, idx);
            write_mesh(grid, idx.size(), cfg_.output.v_samples);
        }
    }

    int verify_cmd(std::ostream& err) {
        const verify::SuiteReport rep = verify::run_all(cfg_.suite);
        report_["suite"] = to_json(cfg_.suite);
        json body = to_json(rep);
        report_["summary"] = body["summary"];
        report_["cases"] = body["cases"];
        for (const auto& c : rep.cases) {
            if (c.verdict == verify::Verdict::Discrepancy) warnings_.add("documented discrepancy in " + c.check + ": " + c.reason);
        }
        const auto s = rep.summary();
        if (s.failed > 0 || s.errored > 0) {
            err << kToolName << ": verify: " << s.failed << " failed and " << s.errored << " errored cases\n";
            return kExitFailure;
        }
        return kExitOk;
    }

    void mesh() {
        if (cfg_.mode == Mode::Explicit) {
            const auto n = explicit_surface();
            const std::size_t ns = cfg_.output.s_samples.value_or(cfg_.samples);
            const auto us = synth::linspace(cfg_.u0, cfg_.u1, ns);
            std::vector<Vec3> base, ruling;
            for (double u : us) {
                base.push_back(n.base(u));
                ruling.push_back(n.ruling(u));
            }
            std::vector<std::size_t> idx(ns);
            for (std::size_t i = 0; i < ns; ++i) idx[i] = i;
            write_mesh(ruled_grid(base, ruling, idx), ns, cfg_.output.v_samples);
            return;
        }
        const auto surf = synthesized();
        const auto idx = subsample(surf.size(), cfg_.output.s_samples);
        write_mesh(ruled_grid(surf.striction(), surf.rulings(), idx), idx.size(), cfg_.output.v_samples);
    }

    Command cmd_;
    Config cfg_;
    RunOptions opt_;
    Tolerances tol_;
    json report_;
    Warnings warnings_;
    std::filesystem::path mesh_path_;
    bool mesh_written_{false};
};

}  // namespace

int run(Command command, Config cfg, const RunOptions& options, std::ostream& err) {
    try {
        Session session(command, std::move(cfg), options);
        return session.execute(err);
    } catch (const ConfigError& e) {
        err << kToolName << ": config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const expr::ParseError& e) {
        err << kToolName << ": config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << kToolName << ": " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        err << kToolName << ": " << e.what() << '\n';
        return kExitFailure;
    }
}

int run_file(Command command, const std::filesystem::path& config_path, const RunOptions& options,
             std::ostream& err) {
    Config cfg;
    try {
        cfg = parse_config(config_path);
    } catch (const ConfigError& e) {
        err << kToolName << ": config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run(command, std::move(cfg), options, err);
}

}  // namespace ruledlab::cli
