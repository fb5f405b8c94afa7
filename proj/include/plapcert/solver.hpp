#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plapcert/certificates.hpp"
#include "plapcert/operator.hpp"

namespace plapcert {

struct SolverConfig {
    double damping = 0.5;  ///< omega in (0, 1]
    std::size_t max_iterations = 5000;
    double tol = 1e-8;  ///< stop once ||x - T x|| < tol
    std::vector<std::pair<double, double>> amplitudes;
    double dedup_distance = 1e-4;
    double divergence_ceiling = 1e4;
    std::size_t threads = 0;  ///< 0: hardware concurrency

    void validate() const;
};

/// {0.03, 0.3, 1, 3, 8} x {0.03, 0.3, 1, 3, 8}.
std::vector<std::pair<double, double>> default_amplitudes();

struct SolutionRecord {
    explicit SolutionRecord(StatePair s) : state(std::move(s)) {}

    StatePair state;
    double sigma = 0;
    double residual = 0;
    double norm_u = 0, norm_v = 0, norm = 0;
    ConeReport cone_report;
    std::size_t iterations = 0;
    std::pair<double, double> start_used{0, 0};
    bool trivial = false;  ///< norm below 1e-6
};

struct NonConvergence : std::runtime_error {
    NonConvergence(const std::string& what, bool diverged, std::size_t iterations, double last_step,
                   std::vector<double> norms)
        : std::runtime_error(what),
          diverged(diverged),
          iterations(iterations),
          last_step(last_step),
          trajectory_norms(std::move(norms)) {}
    bool diverged;
    std::size_t iterations;
    double last_step;
    std::vector<double> trajectory_norms;
};

/// Damped Picard iteration x <- (1 - w) x + w T x from a cone member.
SolutionRecord picard_solve(const Operator& op, const StatePair& start, const SolverConfig& cfg);
SolutionRecord picard_solve(const ProblemSpec& spec, const NumericsSettings& numerics, const StatePair& start,
                            const SolverConfig& cfg);

struct StartFailure {
    std::pair<double, double> start;
    std::string message;
    bool diverged = false;
};

struct MultiStartReport {
    std::vector<SolutionRecord> records;  ///< deduplicated, sorted by norm
    std::vector<StartFailure> failures;
};

MultiStartReport multi_start_run(const ProblemSpec& spec, const NumericsSettings& numerics, const SolverConfig& cfg);
std::vector<SolutionRecord> multi_start_solve(const ProblemSpec& spec, const NumericsSettings& numerics,
                                              const SolverConfig& cfg);

struct LocalizedRecord {
    std::size_t record;
    std::optional<std::size_t> interval;  ///< index into cert.localization
    std::string label;                    ///< "(lo, hi]" or "outside certified intervals"
};

std::vector<LocalizedRecord> localize(const std::vector<SolutionRecord>& records, const Certificate& cert);

/// Re-polishes a solution on the grid with 2n intervals and returns the sup
/// distance moved, measured at the coarse nodes.
double refinement_shift(const ProblemSpec& spec, const NumericsSettings& numerics, const SolutionRecord& record,
                        const SolverConfig& cfg);

}  // namespace plapcert
