#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "ruledlab/cli.hpp"
#include "ruledlab/error.hpp"
#include "ruledlab/expr.hpp"
#include "ruledlab/lorentz.hpp"
#include "ruledlab/ruled.hpp"
#include "ruledlab/synthesis.hpp"
#include "ruledlab/transversal.hpp"
#include "ruledlab/verify.hpp"

namespace fs = std::filesystem;
using namespace ruledlab;
using transversal::Branch;
using transversal::Family;

namespace {

// Pinned tolerances and budgets.
constexpr int kAlgebraVectors = 10000;
constexpr double kAlgebraMagnitude = 1e3;
constexpr double kAlgebraRel = 1e-12;
constexpr double kAlgebraSeconds = 1.0;

constexpr double kFrameSpan = 5.0;
constexpr double kFrameStep = 1e-3;
constexpr double kFrameError = 1e-8;
constexpr double kOrderCoarseStep = 0.1;
constexpr double kOrderTarget = 4.0;
constexpr double kOrderBand = 0.3;
constexpr double kFrameSeconds = 5.0;

constexpr double kClosureTol = 1e-6;
constexpr double kOracleRel = 1e-5;
constexpr double kRelationRel = 1e-8;
constexpr double kCoincidenceMax = 1e-7;
constexpr double kViolatedMin = 1e-3;
constexpr double kViolationMargin = 0.1;
constexpr double kCorollaryTol = 1e-7;

constexpr double kFdRel = 1e-6;
constexpr int kFdPoints = 50;
constexpr std::size_t kMinCorpus = 20;
constexpr std::size_t kMinMalformed = 10;

constexpr double kHelicoidDrall = 1.0;
constexpr double kHelicoidTol = 1e-9;
constexpr double kVerifySeconds = 60.0;

struct Outcome {
    bool pass{false};
    std::string detail;
};

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return x < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

synth::SampledSurface base(const std::string& k1, const std::string& k2, const std::string& theta,
                           double step = 1e-3) {
    return synth::synthesize_surface(synth::IntrinsicData::from_strings(k1, k2, theta, 0.0, 1.0, step));
}

synth::SampledSurface base(double k1, double k2, double theta) { return base(num(k1), num(k2), num(theta)); }

transversal::TransversalSpec spec(Family f, const std::string& angle, Branch b = Branch::TimelikeRuling) {
    return {f, expr::ScalarFunction(angle), b};
}

// --- 1 ----------------------------------------------------------------------------------------

Outcome lorentz_algebra() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-kAlgebraMagnitude, kAlgebraMagnitude);
    std::uniform_real_distribution<double> c(-10, 10);
    auto draw = [&] { return Vec3{u(rng), u(rng), u(rng)}; };
    double orth = 0.0, bilin = 0.0;
    bool antisym = true;
    for (int i = 0; i < kAlgebraVectors; ++i) {
        const Vec3 x = draw(), y = draw(), z = draw();
        const Vec3 p = lorentz_cross(x, y);
        const double scale = euclid_norm(p);
        orth = std::max(orth, std::abs(lorentz_dot(p, x)) / (scale * euclid_norm(x)));
        orth = std::max(orth, std::abs(lorentz_dot(p, y)) / (scale * euclid_norm(y)));
        antisym = antisym && lorentz_cross(y, x) == -p;
        const double a = c(rng), b = c(rng);
        const double lhs = lorentz_dot(a * x + b * y, z);
        const double rhs = a * lorentz_dot(x, z) + b * lorentz_dot(y, z);
        bilin = std::max(bilin, std::abs(lhs - rhs) /
                                    ((std::abs(a) * euclid_norm(x) + std::abs(b) * euclid_norm(y)) * euclid_norm(z)));
    }
    const double t = seconds_since(t0);
    return {orth <= kAlgebraRel && bilin <= kAlgebraRel && antisym && t < kAlgebraSeconds,
            "orthogonality " + fmt(orth) + ", bilinearity " + fmt(bilin) + ", antisymmetry " +
                (antisym ? "exact" : "broken") + ", " + fmt(t) + " s"};
}

// --- 2 ----------------------------------------------------------------------------------------

struct ClosedFrame {
    Vec3 q, h, a;
};

ClosedFrame boost(double s) {
    return {{std::cosh(s), std::sinh(s), 0}, {std::sinh(s), std::cosh(s), 0}, {0, 0, -1}};
}

ClosedFrame rotation(double s) {
    const Vec3 h0{0, 1, 0}, a0{0, 0, -1};
    return {{1, 0, 0}, std::cos(s) * h0 + std::sin(s) * a0, std::cos(s) * a0 - std::sin(s) * h0};
}

double frame_error(const char* k1, const char* k2, ClosedFrame (*exact)(double), double step) {
    const auto frames = synth::integrate_frame(synth::IntrinsicData::from_strings(k1, k2, "0", 0.0, kFrameSpan, step));
    double worst = 0.0;
    for (const auto& f : frames) {
        const ClosedFrame c = exact(f.s);
        worst = std::max({worst, euclid_norm(f.q - c.q), euclid_norm(f.h - c.h), euclid_norm(f.a - c.a)});
    }
    return worst;
}

Outcome frame_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    const double e_boost = frame_error("1", "0", boost, kFrameStep);
    const double e_rot = frame_error("0", "1", rotation, kFrameStep);
    const double o_boost =
        std::log2(frame_error("1", "0", boost, kOrderCoarseStep) / frame_error("1", "0", boost, kOrderCoarseStep / 2));
    const double o_rot = std::log2(frame_error("0", "1", rotation, kOrderCoarseStep) /
                                   frame_error("0", "1", rotation, kOrderCoarseStep / 2));
    const double t = seconds_since(t0);
    const bool pass = e_boost <= kFrameError && e_rot <= kFrameError &&
                      std::abs(o_boost - kOrderTarget) <= kOrderBand && std::abs(o_rot - kOrderTarget) <= kOrderBand &&
                      t < kFrameSeconds;
    return {pass, "max error " + fmt(e_boost) + " / " + fmt(e_rot) + ", order " + fmt(o_boost) + " / " + fmt(o_rot) +
                      ", " + fmt(t) + " s"};
}

// --- 3 ----------------------------------------------------------------------------------------

Outcome drall_closure() {
    const std::vector<double> k1s{0.5, 0.75, 1.0, 1.5, 2.0};
    const std::vector<double> k2s{0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> ths{0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> v{-1.0, 0.0, 1.0};
    double worst = 0.0;
    std::size_t points = 0;
    for (double k1 : k1s) {
        for (double k2 : k2s) {
            for (double th : ths) {
                const auto surf = base(k1, k2, th);
                const auto grid = synth::to_explicit_grid(surf, v.front(), v.back(), v.size());
                const auto sampled = ruled::from_grid(grid, surf.size(), surf.s0(), surf.step(), v);
                const double expect = -std::sinh(th) / k1;
                for (std::size_t i = 0; i < sampled.size(); ++i) {
                    worst = std::max(worst, std::abs(ruled::distribution_parameter(sampled, i) - expect));
                    ++points;
                }
            }
        }
    }
    return {worst <= kClosureTol, std::to_string(points) + " samples on 125 surfaces, max deviation " + fmt(worst)};
}

// --- 4 ----------------------------------------------------------------------------------------

Outcome predicate_duality() {
    verify::SuiteConfig cfg;
    cfg.k1_values = {0.5, 0.75, 1.0, 1.5, 2.0};
    cfg.k2_values = {0.0, 0.5, 1.0, 1.5, 2.0};
    cfg.theta_values = {0.0, 0.25, 0.5, 0.75, 1.0};
    const auto rep = verify::run_striction_suite(cfg);
    const auto s = rep.summary();
    std::size_t both_pass = 0;
    for (const auto& c : rep.cases) {
        if (c.verdict == verify::Verdict::Pass) ++both_pass;
    }
    return {s.failed == 0 && s.errored == 0 && s.discrepancies == 0 && both_pass > 0,
            std::to_string(s.total) + " cases, " + std::to_string(s.passed) + " agree, " +
                std::to_string(s.skipped) + " unsatisfiable, " + std::to_string(s.failed) + " disagree, " +
                std::to_string(s.errored) + " errored"};
}

// --- 5 and 6 ----------------------------------------------------------------------------------

struct FamilyCase {
    Family family;
    Branch branch;
    const char* label;
};

const FamilyCase kFamilies[] = {
    {Family::Alpha, Branch::TimelikeRuling, "alpha"},   {Family::Alpha, Branch::SpacelikeRuling, "alpha/s"},
    {Family::Beta, Branch::TimelikeRuling, "beta"},     {Family::Gamma, Branch::TimelikeRuling, "gamma"},
    {Family::Gamma, Branch::SpacelikeRuling, "gamma/s"},
};

struct Sweep {
    double v_worst{0.0};
    double d_worst{0.0};
    double rel_worst{0.0};
    std::size_t compared{0};
    std::size_t degenerate{0};
};

// Constant k1, k2, theta; angle constant or with constant derivative.
template <typename Fn>
void for_each_instance(Fn&& fn) {
    for (double k1 : {0.5, 1.0, 2.0}) {
        for (double k2 : {0.0, 0.5, 1.0, 2.0}) {
            for (double th : {0.0, 0.5, 1.0}) {
                const auto surf = base(k1, k2, th);
                for (double a0 : {0.5, 1.0}) {
                    for (double slope : {0.0, 0.3}) {
                        const std::string angle = slope == 0.0 ? num(a0) : num(a0) + " + " + num(slope) + "*s";
                        fn(surf, angle);
                    }
                }
            }
        }
    }
}

Outcome closed_vs_oracle() {
    Sweep per[std::size(kFamilies)];
    for_each_instance([&](const synth::SampledSurface& surf, const std::string& angle) {
        for (std::size_t f = 0; f < std::size(kFamilies); ++f) {
            std::vector<transversal::TransversalSample> samples;
            try {
                samples = transversal::sample_transversal(surf, spec(kFamilies[f].family, angle, kFamilies[f].branch));
            } catch (const Error&) {
                ++per[f].degenerate;
                continue;
            }
            for (const auto& t : samples) {
                if (!t.v_closed || !t.d_closed || !t.v_oracle || !t.d_oracle) {
                    ++per[f].degenerate;
                    continue;
                }
                per[f].v_worst = std::max(per[f].v_worst, rel_diff(*t.v_closed, *t.v_oracle));
                per[f].d_worst = std::max(per[f].d_worst, rel_diff(*t.d_closed, *t.d_oracle));
                ++per[f].compared;
            }
        }
    });

    // Alpha: the restated developability condition is judged on an instance whose drall vanishes.
    const double k1 = 4.0, k2 = 1.0, a = 0.5;
    const double th = std::atanh(std::cosh(a) * std::cosh(a) * k2 / k1);
    const auto dev = transversal::developability_condition(base(k1, k2, th), spec(Family::Alpha, num(a), Branch::SpacelikeRuling),
                                                           kClosureTol);
    const bool alpha_flagged = !dev.discrepancies.empty() && dev.find("oracle_distribution")->holds;

    bool pass = alpha_flagged;
    std::string detail;
    for (std::size_t f = 0; f < std::size(kFamilies); ++f) {
        pass = pass && per[f].compared > 0 && per[f].v_worst <= kOracleRel && per[f].d_worst <= kOracleRel;
        detail += std::string(f ? "; " : "") + kFamilies[f].label + " v " + fmt(per[f].v_worst) + " d " +
                  fmt(per[f].d_worst);
    }
    detail += "; alpha restated condition " + std::string(alpha_flagged ? "flagged" : "not flagged");
    return {pass, detail};
}

Outcome relation_identities() {
    double worst = 0.0;
    std::size_t compared = 0;
    for_each_instance([&](const synth::SampledSurface& surf, const std::string& angle) {
        for (const auto& fc : kFamilies) {
            std::vector<transversal::TransversalSample> samples;
            try {
                samples = transversal::sample_transversal(surf, spec(fc.family, angle, fc.branch));
            } catch (const Error&) {
                continue;
            }
            for (const auto& t : samples) {
                if (!t.d_closed || !t.d_relation) continue;
                worst = std::max(worst, rel_diff(*t.d_closed, *t.d_relation));
                ++compared;
            }
        }
    });
    return {compared > 0 && worst <= kRelationRel, std::to_string(compared) + " samples, max " + fmt(worst)};
}

// --- 7 ----------------------------------------------------------------------------------------

struct CoincidenceCase {
    Family family;
    double k1, k2, theta;
    std::string angle;
    bool tuned;
};

std::vector<CoincidenceCase> coincidence_cases() {
    std::vector<CoincidenceCase> out;
    for (double k1 : {0.5, 1.0, 2.0}) {
        const double k2 = 2 * k1;
        const double th = std::atanh(0.5);
        for (double a0 : {0.5, 1.0}) {
            // alpha: tanh(theta) = (a' + k1)/k2 ; beta: tanh(theta) = k1/(b' + k2)
            out.push_back({Family::Alpha, k1, k2, th, num(a0), true});
            out.push_back({Family::Alpha, k1, k2, th + kViolationMargin, num(a0), false});
            out.push_back({Family::Beta, k1, k2, th, num(a0), true});
            out.push_back({Family::Beta, k1, k2, th + kViolationMargin, num(a0), false});
            // gamma: constant angle, or a drifting one that stays clear of theta (v ~ sinh(theta - gamma))
            out.push_back({Family::Gamma, k1, 0.5 * k1, 1.5, num(a0), true});
            out.push_back({Family::Gamma, k1, 0.5 * k1, 1.5, num(a0) + " + " + num(kViolationMargin) + "*s", false});
        }
        // parameter families with a non-constant angle: a' = x k2 - k1, k1 = y (b' + k2); violations scale with k1
        const double x = std::tanh(0.5), k2b = 3 * k1;
        out.push_back({Family::Alpha, k1, k2b, 0.5, "1 + " + num(x * k2b - k1) + "*s", true});
        out.push_back({Family::Alpha, k1, k2b, 0.5, "1 + " + num(x * k2b - k1 + kViolationMargin * k1) + "*s", false});
        out.push_back({Family::Beta, k1, k2b, 0.5, "1.2 + " + num(k1 / x - k2b) + "*s", true});
        out.push_back({Family::Beta, k1, k2b, 0.5, "1.2 + " + num(k1 / x - k2b + kViolationMargin * k1) + "*s", false});
    }
    return out;
}

Outcome coincidence_theorems() {
    double tuned_max = 0.0, violated_min = std::numeric_limits<double>::infinity();
    std::size_t tuned = 0, violated = 0, errors = 0;
    for (const auto& c : coincidence_cases()) {
        try {
            const auto rep = transversal::coincidence_condition(base(c.k1, c.k2, c.theta), spec(c.family, c.angle),
                                                                kCoincidenceMax);
            const auto* o = rep.find("oracle_strictional_distance");
            if (!o || !o->evaluated) {
                ++errors;
                continue;
            }
            if (c.tuned) {
                tuned_max = std::max(tuned_max, o->max_abs);
                ++tuned;
            } else {
                violated_min = std::min(violated_min, o->min_abs);
                ++violated;
            }
        } catch (const Error&) {
            ++errors;
        }
    }
    return {errors == 0 && tuned_max <= kCoincidenceMax && violated_min >= kViolatedMin,
            std::to_string(tuned) + " tuned max|v| " + fmt(tuned_max) + ", " + std::to_string(violated) +
                " violated min|v| " + fmt(violated_min) + ", " + std::to_string(errors) + " errors"};
}

// --- 8 ----------------------------------------------------------------------------------------

Outcome corollaries() {
    verify::SuiteConfig cfg;
    const auto rep = verify::run_developability_suite(cfg);
    std::size_t total = 0, passed = 0;
    for (const auto& c : rep.cases) {
        if (c.check.find("_developable_base_corollary") == std::string::npos) continue;
        ++total;
        if (c.verdict == verify::Verdict::Pass) ++passed;
    }

    // direct instances on theta = 0 bases
    std::size_t direct = 0, direct_ok = 0;
    auto check = [&](const synth::SampledSurface& surf, const transversal::TransversalSpec& sp, bool developable) {
        ++direct;
        try {
            const auto r = transversal::corollary_checks(surf, sp, kCorollaryTol);
            const auto* o = r.find("oracle_distribution");
            const auto* c = r.find("corollary_condition");
            if (o->holds == developable && c->holds == developable && r.consistent) ++direct_ok;
        } catch (const Error&) {
        }
    };
    check(base(1, 0, 0), spec(Family::Alpha, "0.7"), true);
    check(base(1, 0.5, 0), spec(Family::Alpha, "0.7"), false);
    check(base(1, 1, 0), spec(Family::Beta, "1.2 - s"), true);
    check(base(1, 1, 0), spec(Family::Beta, "0.7"), false);
    check(base("1", "1/tanh(0.5 + 0.3*s)", "0"), spec(Family::Gamma, "0.5 + 0.3*s"), true);
    check(base(1, 1, 0), spec(Family::Gamma, "0.5"), false);

    return {total > 0 && passed == total && direct_ok == direct,
            std::to_string(passed) + "/" + std::to_string(total) + " suite cases, " + std::to_string(direct_ok) + "/" +
                std::to_string(direct) + " direct instances"};
}

// --- 9 ----------------------------------------------------------------------------------------

Outcome symexpr_corpus() {
    double worst = 0.0;
    std::size_t evaluated = 0;
    for (const auto& item : test::kCorpus) {
        const auto e = expr::parse(item.text);
        const auto d = expr::differentiate(e);
        for (int i = 0; i < kFdPoints; ++i) {
            const double s = item.lo + (item.hi - item.lo) * (i + 0.5) / kFdPoints;
            const double fd = test::central_difference(e, s);
            worst = std::max(worst, std::abs(d.eval(s) - fd) / (1 + std::abs(fd)));
            ++evaluated;
        }
    }
    std::size_t exact = 0;
    for (const auto& m : test::kMalformed) {
        try {
            expr::parse(m.text);
        } catch (const expr::ParseError& e) {
            if (e.position() == m.offset) ++exact;
        }
    }
    const bool pass = test::kCorpus.size() >= kMinCorpus && test::kMalformed.size() >= kMinMalformed &&
                      worst <= kFdRel && exact == test::kMalformed.size();
    return {pass, std::to_string(test::kCorpus.size()) + " expressions x " + std::to_string(kFdPoints) +
                      " points, max " + fmt(worst) + "; offsets " + std::to_string(exact) + "/" +
                      std::to_string(test::kMalformed.size())};
}

// --- 10 ---------------------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind(prefix, 0) == 0) ++n;
    }
    return n;
}

Outcome cli_end_to_end() {
    const fs::path dir = fs::temp_directory_path() / "ruledlab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path configs = RULEDLAB_CONFIGS;
    cli::RunOptions opt;
    opt.output_dir = dir;
    std::ostringstream err;
    std::vector<std::string> problems;

    using nlohmann::json;
    if (cli::run_file(cli::Command::Analyze, configs / "hel1.json", opt, err) != cli::kExitOk) {
        problems.push_back("analyze exit");
    } else {
        const std::string first = slurp(dir / "hel1_report.json");
        const json r = json::parse(first);
        double dev = 0.0;
        for (const auto& s : r["samples"]) dev = std::max(dev, std::abs(s["d"].get<double>() - kHelicoidDrall));
        if (dev > kHelicoidTol) problems.push_back("helicoid drall off by " + fmt(dev));
        if (r["classification"]["type"] != "N-" || r["classification"]["skew"] != true) {
            problems.push_back("helicoid classification");
        }
        cli::run_file(cli::Command::Analyze, configs / "hel1.json", opt, err);
        if (slurp(dir / "hel1_report.json") != first) problems.push_back("analyze rerun differs");
    }

    std::size_t nv = 0, nf = 0;
    if (cli::run_file(cli::Command::Mesh, configs / "syn1.json", opt, err) != cli::kExitOk) {
        problems.push_back("mesh exit");
    } else {
        const std::string obj = slurp(dir / "syn1.obj");
        const std::string report = slurp(dir / "syn1_report.json");
        nv = count_prefix(obj, "v ");
        nf = count_prefix(obj, "f ");
        const json cfg = json::parse(slurp(configs / "syn1.json"));
        const std::size_t ns = cfg["output"]["s_samples"], nvs = cfg["output"]["v_samples"];
        if (nv != ns * nvs || nf != (ns - 1) * (nvs - 1)) problems.push_back("mesh counts");
        cli::run_file(cli::Command::Mesh, configs / "syn1.json", opt, err);
        if (slurp(dir / "syn1.obj") != obj || slurp(dir / "syn1_report.json") != report) {
            problems.push_back("mesh rerun differs");
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    const int verify_exit = cli::run_file(cli::Command::Verify, configs / "verify.json", opt, err);
    const double t = seconds_since(t0);
    if (verify_exit != cli::kExitOk) problems.push_back("verify exit " + std::to_string(verify_exit));
    if (t >= kVerifySeconds) problems.push_back("verify took " + fmt(t) + " s");

    std::string detail = "mesh " + std::to_string(nv) + " vertices " + std::to_string(nf) + " faces, verify " +
                         fmt(t) + " s";
    for (const auto& p : problems) detail += "; " + p;
    return {problems.empty(), detail};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const Criterion kCriteria[] = {
    {"lorentz algebra", lorentz_algebra},
    {"frame ode fidelity", frame_fidelity},
    {"drall closure on synthesized surfaces", drall_closure},
    {"striction predicate duality", predicate_duality},
    {"transversal closed forms against the oracle", closed_vs_oracle},
    {"drall relation identities", relation_identities},
    {"striction coincidence", coincidence_theorems},
    {"developable base corollaries", corollaries},
    {"expression derivatives and parse offsets", symexpr_corpus},
    {"cli end to end", cli_end_to_end},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty()) {
        for (int i = 1; i <= static_cast<int>(std::size(kCriteria)); ++i) selected.push_back(i);
    }
    bool all = true;
    for (int id : selected) {
        if (id < 1 || id > static_cast<int>(std::size(kCriteria))) {
            std::cerr << "unknown criterion " << id << "\n";
            return 2;
        }
        const Criterion& c = kCriteria[id - 1];
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail
                  << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
