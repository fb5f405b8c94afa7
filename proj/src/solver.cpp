#include "plapcert/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace plapcert {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double cone_tol(const StatePair& state) { return std::max(1e-8 * state.norm(), 1e-12); }

StatePair combine(const StatePair& x, const OperatorOutput& Tx, double w) {
    auto mix = [w](const GridFunction& a, const GridFunction& b) {
        std::vector<double> out(a.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = (1.0 - w) * a[i] + w * b[i];
        }
        return GridFunction(a.grid(), std::move(out));
    };
    return StatePair(mix(x.u(), Tx.Tu), mix(x.v(), Tx.Tv));
}

}  // namespace

void SolverConfig::validate() const {
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw std::invalid_argument("damping must lie in (0, 1], got " + fmt(damping));
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tol must be positive, got " + fmt(tol));
    }
    if (max_iterations == 0) {
        throw std::invalid_argument("max_iterations must be positive");
    }
}

std::vector<std::pair<double, double>> default_amplitudes() {
    const double levels[] = {0.03, 0.3, 1.0, 3.0, 8.0};
    std::vector<std::pair<double, double>> out;
    for (double a1 : levels) {
        for (double a2 : levels) {
            out.emplace_back(a1, a2);
        }
    }
    return out;
}

SolutionRecord picard_solve(const Operator& op, const StatePair& start, const SolverConfig& cfg) {
    cfg.validate();
    if (!cone_membership(start, cone_tol(start)).pass()) {
        throw std::invalid_argument("picard_solve: start state is not in the cone");
    }
    StatePair x = start;
    std::vector<double> norms{x.norm()};
    double step = 0.0;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        const OperatorOutput Tx = op.apply(x);
        const double res = std::max(sup_distance(x.u(), Tx.Tu), sup_distance(x.v(), Tx.Tv));
        if (!std::isfinite(res)) {
            throw NonConvergence("iterate became non-finite", true, it, step, norms);
        }
        if (res < cfg.tol) {
            SolutionRecord rec{x};
            rec.sigma = Tx.sigma;
            rec.residual = op.residual(x);
            rec.norm_u = x.u().sup_norm();
            rec.norm_v = x.v().sup_norm();
            rec.norm = x.norm();
            rec.cone_report = cone_membership(x, cone_tol(x), cone_window(op.spec()));
            rec.iterations = it;
            rec.trivial = rec.norm < 1e-6;
            return rec;
        }
        step = cfg.damping * res;
        x = combine(x, Tx, cfg.damping);
        const double nrm = x.norm();
        norms.push_back(nrm);
        if (!std::isfinite(nrm) || nrm > cfg.divergence_ceiling) {
            throw NonConvergence("diverged: norm " + fmt(nrm) + " exceeds ceiling " + fmt(cfg.divergence_ceiling),
                                 true, it + 1, step, norms);
        }
    }
    throw NonConvergence("no convergence after " + std::to_string(cfg.max_iterations) + " iterations (last step " +
                             fmt(step) + ")",
                         false, cfg.max_iterations, step, norms);
}

SolutionRecord picard_solve(const ProblemSpec& spec, const NumericsSettings& numerics, const StatePair& start,
                            const SolverConfig& cfg) {
    return picard_solve(Operator(spec, numerics), start, cfg);
}

MultiStartReport multi_start_run(const ProblemSpec& spec, const NumericsSettings& numerics, const SolverConfig& cfg) {
    cfg.validate();
    if (cfg.amplitudes.empty()) {
        throw std::invalid_argument("multi_start_solve: no start amplitudes");
    }
    const Operator op(spec, numerics);
    const Grid grid(numerics.n);
    const std::size_t count = cfg.amplitudes.size();

    struct Slot {
        std::optional<SolutionRecord> record;
        std::optional<StartFailure> failure;
    };
    std::vector<Slot> slots(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            const auto [a1, a2] = cfg.amplitudes[k];
            try {
                SolutionRecord rec = picard_solve(op, StatePair::cone_profile(grid, a1, a2), cfg);
                rec.start_used = {a1, a2};
                slots[k].record = std::move(rec);
            } catch (const NonConvergence& err) {
                slots[k].failure = StartFailure{{a1, a2}, err.what(), err.diverged};
            } catch (const std::exception& err) {
                slots[k].failure = StartFailure{{a1, a2}, err.what(), false};
            }
        }
    };
    std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    MultiStartReport report;
    for (auto& slot : slots) {
        if (slot.failure) {
            report.failures.push_back(*slot.failure);
            continue;
        }
        const bool duplicate = std::any_of(report.records.begin(), report.records.end(), [&](const SolutionRecord& r) {
            return distance(r.state, slot.record->state) < cfg.dedup_distance;
        });
        if (!duplicate) {
            report.records.push_back(std::move(*slot.record));
        }
    }
    std::stable_sort(report.records.begin(), report.records.end(),
                     [](const SolutionRecord& a, const SolutionRecord& b) { return a.norm < b.norm; });
    return report;
}

std::vector<SolutionRecord> multi_start_solve(const ProblemSpec& spec, const NumericsSettings& numerics,
                                              const SolverConfig& cfg) {
    return multi_start_run(spec, numerics, cfg).records;
}

std::vector<LocalizedRecord> localize(const std::vector<SolutionRecord>& records, const Certificate& cert) {
    if (!cert.conclusive()) {
        throw std::invalid_argument("localize: certificate is not conclusive");
    }
    std::vector<LocalizedRecord> out;
    for (std::size_t k = 0; k < records.size(); ++k) {
        LocalizedRecord tagged{k, std::nullopt, "outside certified intervals"};
        for (std::size_t j = 0; j < cert.localization.size(); ++j) {
            const NormInterval& iv = cert.localization[j].display;
            if (records[k].norm > iv.lo && records[k].norm <= iv.hi) {
                tagged.interval = j;
                tagged.label = "(" + fmt(iv.lo) + ", " + fmt(iv.hi) + "]";
                break;
            }
        }
        out.push_back(tagged);
    }
    return out;
}

double refinement_shift(const ProblemSpec& spec, const NumericsSettings& numerics, const SolutionRecord& record,
                        const SolverConfig& cfg) {
    NumericsSettings fine = numerics;
    fine.n = 2 * record.state.grid().n_intervals();
    const Grid fine_grid(fine.n);
    const SolutionRecord polished = picard_solve(spec, fine, record.state.resampled(fine_grid), cfg);
    return distance(polished.state.resampled(record.state.grid()), record.state);
}

}  // namespace plapcert
