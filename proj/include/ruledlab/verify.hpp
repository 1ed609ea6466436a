#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ruledlab/transversal.hpp"

namespace ruledlab::verify {

struct SuiteConfig {
    std::vector<double> k1_values{0.5, 1.0, 2.0};
    std::vector<double> k2_values{0.0, 0.5, 1.0, 2.0};
    std::vector<double> theta_values{0.0, 0.5, 1.0};
    std::vector<double> angle_values{0.5, 1.0};
    std::vector<transversal::Family> families{transversal::Family::Alpha, transversal::Family::Beta,
                                              transversal::Family::Gamma};
    transversal::Branch branch{transversal::Branch::TimelikeRuling};
    bool tuned_theta{true};  // add artanh(k1/k2) and artanh(k2/k1) to the theta grid when defined
    double tolerance{1e-6};
    double coincidence_tolerance{1e-7};
    double margin{0.1};  // perturbation of the violated instance
    double s0{0.0};
    double s1{1.0};
    double step{1e-3};

    /// Throws InvalidArgument.
    void validate() const;
};

enum class Verdict { Pass, Fail, Skipped, Discrepancy, Errored };

const char* to_string(Verdict v);

struct CaseRecord {
    std::size_t index{0};
    std::string suite;
    std::string check;
    std::string family;  // empty for base-surface checks
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<std::pair<std::string, std::string>> expressions;
    std::optional<double> forward_residual;   // instance built to satisfy the condition
    std::optional<double> backward_residual;  // instance built to violate it
    std::vector<std::pair<std::string, double>> values;
    Verdict verdict{Verdict::Pass};
    std::string reason;
};

struct Summary {
    std::size_t total{0};
    std::size_t passed{0};
    std::size_t failed{0};
    std::size_t skipped{0};
    std::size_t discrepancies{0};
    std::size_t errored{0};
};

struct SuiteReport {
    std::vector<CaseRecord> cases;

    Summary summary() const;
    void append(SuiteReport other);
};

/// Theta grid for one (k1, k2) pair: the configured values plus the tuned ones.
std::vector<double> theta_grid(const SuiteConfig& cfg, double k1, double k2);

/// Asymptotic, geodesic and line-of-curvature predicates on every grid surface, each for a constant
/// and a drifting theta.
SuiteReport run_striction_suite(const SuiteConfig& cfg);

/// Coincidence of striction curves and its asymptotic, geodesic and line-of-curvature specializations.
SuiteReport run_coincidence_suite(const SuiteConfig& cfg);

/// Developability of the transversal surfaces and the corollaries on developable bases.
SuiteReport run_developability_suite(const SuiteConfig& cfg);

SuiteReport run_all(const SuiteConfig& cfg);

}  // namespace ruledlab::verify
