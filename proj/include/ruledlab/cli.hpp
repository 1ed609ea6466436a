#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ruledlab/lorentz.hpp"
#include "ruledlab/synthesis.hpp"
#include "ruledlab/transversal.hpp"
#include "ruledlab/verify.hpp"

namespace ruledlab::cli {

inline constexpr const char* kToolName = "ruledlab";
inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { None, Explicit, Intrinsic };
enum class Command { Analyze, Synthesize, Transversal, Verify, Mesh };

const char* to_string(Mode m);
const char* to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

struct TransversalConfig {
    transversal::Family kind{transversal::Family::Alpha};
    std::string angle;
    transversal::Branch branch{transversal::Branch::TimelikeRuling};
};

struct OutputConfig {
    std::optional<std::string> report_path;
    std::optional<std::string> mesh_path;
    double v0{-1.0};
    double v1{1.0};
    std::size_t v_samples{21};
    std::optional<std::size_t> s_samples;  // base samples in reports and meshes
};

struct Config {
    nlohmann::ordered_json source;  // the document as read, echoed into reports
    Mode mode{Mode::None};

    std::array<std::string, 3> f;
    std::array<std::string, 3> q;
    double u0{0.0};
    double u1{1.0};
    std::size_t samples{201};
    bool normalize_q{false};

    std::string k1, k2, theta;
    int epsilon{-1};
    double s0{0.0};
    double s1{1.0};
    double step{1e-3};
    std::optional<synth::InitialFrame> initial;

    std::optional<TransversalConfig> transversal;
    OutputConfig output;
    Tolerances tolerances;
    verify::SuiteConfig suite;

    synth::IntrinsicData intrinsic() const;
    transversal::TransversalSpec transversal_spec() const;
};

/// Strict parse: unknown keys, wrong types and malformed expressions raise ConfigError.
Config parse_config_text(const std::string& text);
Config parse_config(const std::filesystem::path& path);

struct RunOptions {
    std::optional<std::filesystem::path> output_dir;
    std::optional<double> tolerance;
};

/// Runs one command; diagnostics go to `err`. Returns an ExitCode.
int run(Command command, Config cfg, const RunOptions& options, std::ostream& err);

/// Parses and runs; config errors map to kExitConfig.
int run_file(Command command, const std::filesystem::path& config_path, const RunOptions& options,
             std::ostream& err);

/// Wavefront OBJ for an s-major ns x nv grid. Throws InvalidArgument.
std::string obj_text(const std::vector<Vec3>& grid, std::size_t ns, std::size_t nv);
void export_obj(const std::vector<Vec3>& grid, std::size_t ns, std::size_t nv, const std::filesystem::path& path);

/// Write to a sibling temporary, then rename over `path`. Throws std::runtime_error.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Report serialization helpers.
nlohmann::ordered_json to_json(const verify::SuiteReport& report);
nlohmann::ordered_json to_json(const verify::SuiteConfig& cfg);
nlohmann::ordered_json to_json(const transversal::ConditionReport& report);

}  // namespace ruledlab::cli
