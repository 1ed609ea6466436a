#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ruledlab/cli.hpp"
#include "ruledlab/error.hpp"

namespace ruledlab::cli {

using json = nlohmann::ordered_json;

const char* to_string(Mode m) {
    switch (m) {
        case Mode::None: return "none";
        case Mode::Explicit: return "explicit";
        case Mode::Intrinsic: return "intrinsic";
    }
    return "?";
}

const char* to_string(Command c) {
    switch (c) {
        case Command::Analyze: return "analyze";
        case Command::Synthesize: return "synthesize";
        case Command::Transversal: return "transversal";
        case Command::Verify: return "verify";
        case Command::Mesh: return "mesh";
    }
    return "?";
}

std::optional<Command> parse_command(const std::string& name) {
    for (Command c : {Command::Analyze, Command::Synthesize, Command::Transversal, Command::Verify, Command::Mesh}) {
        if (name == to_string(c)) return c;
    }
    return std::nullopt;
}

synth::IntrinsicData Config::intrinsic() const {
    synth::IntrinsicData d;
    d.k1 = expr::ScalarFunction(k1);
    d.k2 = expr::ScalarFunction(k2);
    if (!theta.empty()) d.theta = expr::ScalarFunction(theta);
    d.epsilon = epsilon;
    d.s0 = s0;
    d.s1 = s1;
    d.step = step;
    d.initial = initial ? *initial : synth::InitialFrame::canonical(epsilon);
    return d;
}

transversal::TransversalSpec Config::transversal_spec() const {
    if (!transversal) throw ConfigError("missing 'transversal' section");
    return {transversal->kind, expr::ScalarFunction(transversal->angle), transversal->branch};
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

// Reads one JSON object, remembering which keys were consumed.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail(path_.empty() ? "/" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json& at(const std::string& key) {
        seen_.insert(key);
        return obj_.at(key);
    }

    std::string where(const std::string& key) const { return path_ + "/" + key; }

    std::optional<double> number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = at(key);
        if (!v.is_number()) fail(where(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(where(key), "expected a finite number");
        return x;
    }

    std::optional<long long> integer(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = at(key);
        if (!v.is_number_integer()) fail(where(key), "expected an integer");
        return v.get<long long>();
    }

    std::optional<bool> boolean(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = at(key);
        if (!v.is_boolean()) fail(where(key), "expected true or false");
        return v.get<bool>();
    }

    std::optional<std::string> string(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = at(key);
        if (!v.is_string()) fail(where(key), "expected a string");
        return v.get<std::string>();
    }

    // Expression string, validated by parsing.
    std::optional<std::string> expression(const std::string& key) {
        auto s = string(key);
        if (s) check_expression(*s, where(key));
        return s;
    }

    std::optional<std::vector<double>> numbers(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = at(key);
        if (!v.is_array()) fail(where(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                fail(where(key) + "/" + std::to_string(i), "expected a finite number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::optional<std::pair<double, double>> range(const std::string& key) {
        auto v = numbers(key);
        if (!v) return std::nullopt;
        if (v->size() != 2) fail(where(key), "expected [start, end]");
        if (!((*v)[1] > (*v)[0])) fail(where(key), "range must be non-empty (end > start)");
        return std::pair{(*v)[0], (*v)[1]};
    }

    std::optional<std::array<std::string, 3>> expressions3(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const json& v = at(key);
        if (!v.is_array() || v.size() != 3) fail(where(key), "expected an array of three expression strings");
        std::array<std::string, 3> out;
        for (std::size_t i = 0; i < 3; ++i) {
            const std::string w = where(key) + "/" + std::to_string(i);
            if (!v[i].is_string()) fail(w, "expected a string");
            out[i] = v[i].get<std::string>();
            check_expression(out[i], w);
        }
        return out;
    }

    std::optional<Vec3> vec3(const std::string& key) {
        auto v = numbers(key);
        if (!v) return std::nullopt;
        if (v->size() != 3) fail(where(key), "expected three numbers");
        return Vec3{(*v)[0], (*v)[1], (*v)[2]};
    }

    std::optional<Section> section(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return Section(at(key), where(key));
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) fail(where(it.key()), "unknown key '" + it.key() + "'");
        }
    }

    static void check_expression(const std::string& text, const std::string& where) {
        try {
            (void)expr::parse(text);
        } catch (const expr::ParseError& e) {
            fail(where, e.what());
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

std::size_t count(Section& sec, const std::string& key, std::size_t fallback, std::size_t minimum) {
    auto v = sec.integer(key);
    if (!v) return fallback;
    if (*v < static_cast<long long>(minimum)) {
        fail(sec.where(key), "must be at least " + std::to_string(minimum));
    }
    return static_cast<std::size_t>(*v);
}

transversal::Family family_from(const std::string& s, const std::string& where) {
    if (s == "alpha") return transversal::Family::Alpha;
    if (s == "beta") return transversal::Family::Beta;
    if (s == "gamma") return transversal::Family::Gamma;
    fail(where, "expected one of alpha, beta, gamma");
}

transversal::Branch branch_from(const std::string& s, const std::string& where) {
    if (s == "timelike") return transversal::Branch::TimelikeRuling;
    if (s == "spacelike") return transversal::Branch::SpacelikeRuling;
    fail(where, "expected timelike or spacelike");
}

void read_tolerances(Section& sec, Tolerances& tol) {
    auto positive = [&](const char* key, double& out) {
        if (auto v = sec.number(key)) {
            if (!(*v > 0.0)) fail(sec.where(key), "must be positive");
            out = *v;
        }
    };
    positive("causal_eps", tol.causal_eps);
    positive("frame_eps", tol.frame_eps);
    positive("general_eps", tol.general_eps);
    sec.finish();
}

void read_suite(Section& sec, verify::SuiteConfig& s) {
    auto list = [&](const char* key, std::vector<double>& out) {
        if (auto v = sec.numbers(key)) {
            if (v->empty()) fail(sec.where(key), "must be non-empty");
            out = *v;
        }
    };
    list("k1_values", s.k1_values);
    list("k2_values", s.k2_values);
    list("theta_values", s.theta_values);
    list("angle_values", s.angle_values);
    if (sec.has("families")) {
        const json& v = sec.at("families");
        if (!v.is_array() || v.empty()) fail(sec.where("families"), "expected a non-empty array of family names");
        s.families.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string w = sec.where("families") + "/" + std::to_string(i);
            if (!v[i].is_string()) fail(w, "expected a string");
            s.families.push_back(family_from(v[i].get<std::string>(), w));
        }
    }
    if (auto b = sec.string("branch")) s.branch = branch_from(*b, sec.where("branch"));
    if (auto t = sec.boolean("tuned_theta")) s.tuned_theta = *t;
    if (auto v = sec.number("tolerance")) s.tolerance = *v;
    if (auto v = sec.number("coincidence_tolerance")) s.coincidence_tolerance = *v;
    if (auto v = sec.number("margin")) s.margin = *v;
    if (auto r = sec.range("s_range")) std::tie(s.s0, s.s1) = *r;
    if (auto v = sec.number("step")) s.step = *v;
    sec.finish();
    try {
        s.validate();
    } catch (const Error& e) {
        fail(sec.where(""), e.what());
    }
}

}  // namespace

Config parse_config_text(const std::string& text) {
    Config cfg;
    try {
        cfg.source = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    Section root(cfg.source, "");

    std::optional<std::string> mode = root.string("mode");
    const bool has_explicit = root.has("f") || root.has("q");
    const bool has_intrinsic = root.has("k1") || root.has("k2") || root.has("theta");
    if (mode) {
        if (*mode == "explicit") cfg.mode = Mode::Explicit;
        else if (*mode == "intrinsic") cfg.mode = Mode::Intrinsic;
        else fail("/mode", "expected explicit or intrinsic");
    } else if (has_explicit && has_intrinsic) {
        fail("/", "both explicit (f, q) and intrinsic (k1, k2, theta) fields given; set 'mode'");
    } else if (has_explicit) {
        cfg.mode = Mode::Explicit;
    } else if (has_intrinsic) {
        cfg.mode = Mode::Intrinsic;
    }

    if (cfg.mode == Mode::Explicit) {
        auto f = root.expressions3("f");
        auto q = root.expressions3("q");
        if (!f) fail("/f", "required in explicit mode");
        if (!q) fail("/q", "required in explicit mode");
        cfg.f = *f;
        cfg.q = *q;
        auto r = root.range("u_range");
        if (!r) fail("/u_range", "required in explicit mode");
        std::tie(cfg.u0, cfg.u1) = *r;
        cfg.samples = count(root, "samples", cfg.samples, 2);
        if (auto n = root.boolean("normalize_q")) cfg.normalize_q = *n;
    } else if (cfg.mode == Mode::Intrinsic) {
        auto k1 = root.expression("k1");
        auto k2 = root.expression("k2");
        if (!k1) fail("/k1", "required in intrinsic mode");
        if (!k2) fail("/k2", "required in intrinsic mode");
        cfg.k1 = *k1;
        cfg.k2 = *k2;
        if (auto t = root.expression("theta")) cfg.theta = *t;
        if (auto e = root.integer("epsilon")) {
            if (*e != 1 && *e != -1) fail("/epsilon", "must be -1 or 1");
            cfg.epsilon = static_cast<int>(*e);
        }
        auto r = root.range("s_range");
        if (!r) fail("/s_range", "required in intrinsic mode");
        std::tie(cfg.s0, cfg.s1) = *r;
        if (auto st = root.number("step")) {
            if (!(*st > 0.0)) fail("/step", "must be positive");
            cfg.step = *st;
        }
        if (auto sec = root.section("initial_frame")) {
            auto q = sec->vec3("q");
            auto h = sec->vec3("h");
            auto a = sec->vec3("a");
            if (!q || !h || !a) fail("/initial_frame", "needs q, h and a");
            sec->finish();
            cfg.initial = synth::InitialFrame{*q, *h, *a};
        }
    }

    if (auto sec = root.section("transversal")) {
        TransversalConfig t;
        auto kind = sec->string("kind");
        if (!kind) fail("/transversal/kind", "required");
        t.kind = family_from(*kind, "/transversal/kind");
        auto angle = sec->expression("angle");
        if (!angle) fail("/transversal/angle", "required");
        t.angle = *angle;
        if (auto b = sec->string("branch")) t.branch = branch_from(*b, "/transversal/branch");
        sec->finish();
        cfg.transversal = t;
    }

    if (auto sec = root.section("output")) {
        OutputConfig& o = cfg.output;
        o.report_path = sec->string("report_path");
        o.mesh_path = sec->string("mesh_path");
        if (auto r = sec->range("v_range")) std::tie(o.v0, o.v1) = *r;
        o.v_samples = count(*sec, "v_samples", o.v_samples, 2);
        if (sec->has("s_samples")) o.s_samples = count(*sec, "s_samples", 2, 2);
        sec->finish();
    }

    if (auto sec = root.section("tolerances")) read_tolerances(*sec, cfg.tolerances);
    if (auto sec = root.section("suite")) read_suite(*sec, cfg.suite);

    root.finish();
    return cfg;
}

Config parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace ruledlab::cli
