#include "plapcert/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace plapcert {

namespace {

namespace fs = std::filesystem;

double parse_real(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return x;
    } catch (const std::exception&) {
        throw InputError("malformed " + what + ": '" + text + "'");
    }
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw InputError("malformed " + what + " '" + text + "': expected two comma-separated numbers");
    }
    return {parse_real(text.substr(0, comma), what), parse_real(text.substr(comma + 1), what)};
}

struct Loaded {
    std::string source;
    std::string text;
    ProblemConfig config;
};

Loaded load(const CliOptions& options) {
    std::string text;
    std::string source;
    if (options.paper_example) {
        text = builtin_example_config();
        source = "paper-example";
    } else {
        if (!options.config_path) {
            throw InputError("no config file given (pass a path or --paper-example)");
        }
        std::ifstream in(*options.config_path);
        if (!in) {
            throw InputError("cannot read config file " + *options.config_path);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        source = *options.config_path;
    }
    ProblemConfig config = parse_config(text);
    if (options.n) {
        if (*options.n < 2) {
            throw InputError("--n must be at least 2");
        }
        config.numerics.n = *options.n;
    }
    if (options.resolution) {
        if (*options.resolution < 2) {
            throw InputError("--resolution must be at least 2");
        }
        config.numerics.growth_resolution = *options.resolution;
    }
    return {source, text, std::move(config)};
}

Json base_report(const CliOptions& options, const Loaded& loaded) {
    return {{"schema_version", kSchemaVersion},
            {"tool", "plapcert"},
            {"version", kToolVersion},
            {"command", options.command},
            {"config", {{"source", loaded.source}, {"text", loaded.text}}},
            {"spec", json_of(loaded.config.spec)},
            {"numerics", json_of(loaded.config.numerics)}};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << content;
}

std::string interval_text(double lo, double hi) { return "(" + format_number(lo) + ", " + format_number(hi) + "]"; }

/// Runs body and maps input problems to exit code 1; finalises the report.
CommandResult guarded(const CliOptions& options, const std::function<void(CommandResult&)>& body) {
    CommandResult result;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(result);
    } catch (const ConfigError& e) {
        result = {kExitInputError, {}, std::string("config error: ") + e.what(), {}, {}};
    } catch (const ParseError& e) {
        result = {kExitInputError, {}, std::string("parse error: ") + e.what(), {}, {}};
    } catch (const InputError& e) {
        result = {kExitInputError, {}, std::string("input error: ") + e.what(), {}, {}};
    } catch (const EvalError& e) {
        result = {kExitInputError, {}, std::string("evaluation error: ") + e.what(), {}, {}};
    } catch (const std::invalid_argument& e) {
        result = {kExitInputError, {}, std::string("input error: ") + e.what(), {}, {}};
    }
    if (result.exit_code == kExitInputError) {
        result.report = {{"schema_version", kSchemaVersion},
                         {"tool", "plapcert"},
                         {"version", kToolVersion},
                         {"command", options.command},
                         {"error", result.text}};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.report["timing"] = {{"seconds", seconds}};
    result.report["warnings"] = result.warnings;
    result.report["exit_code"] = result.exit_code;
    result.report = rounded(result.report);
    if (options.out) {
        write_file(*options.out, result.report.dump(2) + "\n");
    }
    return result;
}

/// Validation gate shared by every command; returns false on failure.
bool validated(const Loaded& loaded, CommandResult& result, std::ostringstream& text) {
    const ValidationReport report = validate_spec(loaded.config.spec, loaded.config.numerics);
    result.report["validation"] = json_of(report);
    for (const auto& c : report.conditions) {
        text << c.name << ": " << to_string(c.verdict);
        if (!c.detail.empty()) text << " (" << c.detail << ")";
        text << '\n';
    }
    if (!report.ok()) {
        result.exit_code = kExitValidationFailed;
        text << "validation failed\n";
        return false;
    }
    return true;
}

void print_constants(const ConeConstants& k, std::ostringstream& text) {
    text << "c1 = " << format_number(k.c1) << "  c2 = " << format_number(k.c2) << '\n'
         << "m1 = " << format_number(k.m1) << "  m2 = " << format_number(k.m2) << '\n'
         << "M1 = " << format_number(k.M1) << "  M2 = " << format_number(k.M2)
         << "  (nu* = " << format_number(k.nu_star) << ")\n"
         << "Mt1 = " << format_number(k.Mt1) << "  Mt2 = " << format_number(k.Mt2) << '\n';
}

std::vector<std::pair<double, double>> amplitudes_from(const CliOptions& options) {
    if (options.amplitudes.empty()) {
        return default_amplitudes();
    }
    std::vector<std::pair<double, double>> out;
    for (const auto& token : options.amplitudes) {
        const auto pair = parse_pair(token, "amplitude");
        if (!(pair.first >= 0.0) || !(pair.second >= 0.0)) {
            throw InputError("amplitudes must be nonnegative: '" + token + "'");
        }
        out.push_back(pair);
    }
    return out;
}

}  // namespace

LadderRung parse_rung(const std::string& token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
        throw InputError("malformed ladder entry '" + token + "': expected rho1,rho2:TAG");
    }
    const auto [r1, r2] = parse_pair(token.substr(0, colon), "ladder radius");
    if (!(r1 > 0.0) || !(r2 > 0.0)) {
        throw InputError("ladder radii must be positive: '" + token + "'");
    }
    const std::string tag = token.substr(colon + 1);
    ConditionTag t;
    if (tag == "I1") {
        t = ConditionTag::I1;
    } else if (tag == "I0") {
        t = ConditionTag::I0;
    } else if (tag == "I0star") {
        t = ConditionTag::I0star;
    } else {
        throw InputError("unknown ladder tag '" + tag + "' (expected I1, I0 or I0star)");
    }
    return {{r1, r2}, t};
}

std::vector<LadderRung> parse_ladder(const std::vector<std::string>& tokens) {
    std::vector<LadderRung> ladder;
    for (const auto& token : tokens) {
        // allow a single space-separated argument as well as repeated flags
        std::istringstream words(token);
        std::string word;
        while (words >> word) {
            ladder.push_back(parse_rung(word));
        }
    }
    return ladder;
}

CommandResult cmd_validate(const CliOptions& options) {
    return guarded(options, [&](CommandResult& result) {
        const Loaded loaded = load(options);
        result.report = base_report(options, loaded);
        std::ostringstream text;
        if (validated(loaded, result, text)) {
            text << "all conditions hold on the sampled set\n";
        }
        result.text = text.str();
    });
}

CommandResult cmd_constants(const CliOptions& options) {
    return guarded(options, [&](CommandResult& result) {
        const Loaded loaded = load(options);
        result.report = base_report(options, loaded);
        std::ostringstream text;
        if (validated(loaded, result, text)) {
            const ConeConstants k = compute_constants(loaded.config.spec, loaded.config.numerics);
            result.report["constants"] = json_of(k);
            print_constants(k, text);
        }
        result.text = text.str();
    });
}

CommandResult cmd_certify(const CliOptions& options) {
    return guarded(options, [&](CommandResult& result) {
        const Loaded loaded = load(options);
        const std::vector<LadderRung> ladder = parse_ladder(options.ladder);
        result.report = base_report(options, loaded);
        std::ostringstream text;
        if (!validated(loaded, result, text)) {
            result.text = text.str();
            return;
        }
        const ProblemSpec& spec = loaded.config.spec;
        const NumericsSettings& numerics = loaded.config.numerics;
        const std::size_t resolution = numerics.growth_resolution;
        const ConeConstants k = compute_constants(spec, numerics);
        result.report["constants"] = json_of(k);
        print_constants(k, text);

        Json table = Json::array();
        for (const auto& rung : ladder) {
            table.push_back(json_of(check_index_conditions(spec, k, rung.box, resolution)));
        }
        result.report["conditions"] = table;

        const Certificate cert = certify(spec, k, ladder, resolution);
        result.report["certificate"] = json_of(cert);
        for (std::size_t j = 0; j < ladder.size(); ++j) {
            text << "(" << to_string(ladder[j].tag) << ") at (" << format_number(ladder[j].box.rho1) << ", "
                 << format_number(ladder[j].box.rho2) << "): " << to_string(cert.rung_results[j].status) << '\n';
            for (const auto& c : cert.rung_results[j].comparisons) {
                text << "  " << to_string(c.estimate.kind) << ": f = " << format_number(c.estimate.raw_value)
                     << (is_sup(c.estimate.kind) ? " < " : " > ") << format_number(c.raw_threshold) << "  ["
                     << to_string(c.status) << ", scaled margin " << format_number(c.margin) << "]\n";
            }
        }

        const double cap = options.cap.value_or(numerics.sample_radius);
        if (!(cap > 0.0)) {
            throw InputError("--cap must be positive");
        }
        const NonexistenceVerdict none = check_nonexistence(spec, k, cap, resolution);
        result.report["nonexistence"] = json_of(none);

        if (cert.conclusive()) {
            text << "conclusion: " << solutions_phrase(cert.solutions) << " (" << cert.pattern << ")\n";
            for (const auto& loc : cert.localization) {
                text << "  norm in " << interval_text(loc.display.lo, loc.display.hi) << "  [closure("
                     << loc.outer_set << ") minus " << loc.inner_set << "]\n";
            }
            result.exit_code = kExitOk;
        } else if (ladder.empty() && none.established) {
            result.exit_code = kExitOk;
        } else {
            text << "conclusion: inconclusive\n";
            for (const auto& reason : cert.reasons) {
                text << "  " << reason << '\n';
            }
            result.exit_code = kExitInconclusive;
        }
        text << "nonexistence: " << none.summary << '\n';
        result.text = text.str();
    });
}

CommandResult cmd_solve(const CliOptions& options) {
    return guarded(options, [&](CommandResult& result) {
        const Loaded loaded = load(options);
        const std::vector<LadderRung> ladder = parse_ladder(options.ladder);
        result.report = base_report(options, loaded);
        std::ostringstream text;
        if (!validated(loaded, result, text)) {
            result.text = text.str();
            return;
        }
        const ProblemSpec& spec = loaded.config.spec;
        const NumericsSettings& numerics = loaded.config.numerics;

        SolverConfig cfg;
        cfg.amplitudes = amplitudes_from(options);
        if (options.tol) cfg.tol = *options.tol;
        if (options.damping) cfg.damping = *options.damping;
        if (options.max_iterations) cfg.max_iterations = *options.max_iterations;

        std::optional<Certificate> cert;
        if (!ladder.empty()) {
            const ConeConstants k = compute_constants(spec, numerics);
            cert = certify(spec, k, ladder, numerics.growth_resolution);
            result.report["certificate"] = json_of(*cert);
            double largest = 0.0;
            for (const auto& rung : ladder) {
                largest = std::max({largest, rung.box.rho1, rung.box.rho2});
            }
            cfg.divergence_ceiling = 1e3 * largest;
        }
        cfg.validate();
        result.report["solver"] = {{"damping", cfg.damping},
                                   {"max_iterations", cfg.max_iterations},
                                   {"tol", cfg.tol},
                                   {"dedup_distance", cfg.dedup_distance},
                                   {"divergence_ceiling", cfg.divergence_ceiling},
                                   {"starts", cfg.amplitudes.size()}};

        const MultiStartReport run = multi_start_run(spec, numerics, cfg);
        std::vector<SolutionRecord> found;
        std::size_t trivial = 0;
        for (const auto& r : run.records) {
            if (r.trivial) {
                ++trivial;
            } else {
                found.push_back(r);
            }
        }

        std::vector<std::optional<std::string>> labels(found.size());
        if (cert && cert->conclusive()) {
            for (const auto& tagged : localize(found, *cert)) {
                labels[tagged.record] = tagged.label;
            }
        }

        std::vector<std::optional<double>> shifts(found.size());
        if (numerics.n < 256) {
            result.warnings.push_back("grid-convergence: n = " + std::to_string(numerics.n) +
                                      " is below 256; solutions are not resolution-checked");
        } else {
            for (std::size_t k = 0; k < found.size(); ++k) {
                try {
                    shifts[k] = refinement_shift(spec, numerics, found[k], cfg);
                    if (*shifts[k] > 5e-4) {
                        result.warnings.push_back("grid-convergence: solution " + std::to_string(k + 1) +
                                                  " moves by " + format_number(*shifts[k]) + " at n = " +
                                                  std::to_string(2 * numerics.n));
                    }
                } catch (const NonConvergence& e) {
                    result.warnings.push_back("grid-convergence: re-polish of solution " + std::to_string(k + 1) +
                                              " failed: " + e.what());
                }
            }
        }

        Json solutions = Json::array();
        for (std::size_t k = 0; k < found.size(); ++k) {
            Json j = json_of(found[k], labels[k]);
            j["refinement_shift"] = shifts[k] ? Json(*shifts[k]) : Json(nullptr);
            solutions.push_back(j);
        }
        result.report["solutions"] = solutions;
        result.report["trivial_states"] = trivial;
        Json failures = Json::array();
        for (const auto& f : run.failures) {
            failures.push_back({{"start", Json::array({f.start.first, f.start.second})},
                                {"diverged", f.diverged},
                                {"message", f.message}});
        }
        result.report["failures"] = failures;

        if (!found.empty()) {
            fs::path dir = fs::current_path();
            std::string stem = "plapcert";
            if (options.out) {
                const fs::path out(*options.out);
                dir = out.has_parent_path() ? out.parent_path() : fs::current_path();
                stem = out.stem().string();
            }
            for (std::size_t k = 0; k < found.size(); ++k) {
                const std::string path = (dir / (stem + "_solution_" + std::to_string(k + 1) + ".csv")).string();
                write_file(path, solution_csv(found[k]));
                result.files.push_back(path);
            }
            const std::string path = (dir / (stem + "_summary.csv")).string();
            write_file(path, summary_csv(found));
            result.files.push_back(path);
        }
        result.report["files"] = result.files;

        text << found.size() << " nontrivial solution(s) from " << cfg.amplitudes.size() << " starts";
        text << " (" << run.failures.size() << " starts failed)\n";
        for (std::size_t k = 0; k < found.size(); ++k) {
            text << "  " << k + 1 << ": norm " << format_number(found[k].norm) << ", residual "
                 << format_number(found[k].residual) << ", sigma " << format_number(found[k].sigma);
            if (labels[k]) text << ", " << *labels[k];
            text << '\n';
        }
        if (found.empty()) {
            text << (trivial > 0 ? "only the zero state was found\n" : "no solution found\n");
            result.exit_code = kExitNoSolution;
        }
        for (const auto& w : result.warnings) {
            text << "warning: " << w << '\n';
        }
        result.text = text.str();
    });
}

int run_command(const CliOptions& options, std::ostream& out, std::ostream& err) {
    CommandResult result;
    try {
        if (options.command == "validate") {
            result = cmd_validate(options);
        } else if (options.command == "constants") {
            result = cmd_constants(options);
        } else if (options.command == "certify") {
            result = cmd_certify(options);
        } else if (options.command == "solve") {
            result = cmd_solve(options);
        } else {
            err << "unknown command '" << options.command << "'\n";
            return kExitInputError;
        }
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    }
    if (result.exit_code == kExitInputError) {
        err << result.text << '\n';
    }
    if (options.json) {
        out << result.report.dump(2) << '\n';
    } else if (result.exit_code != kExitInputError) {
        out << result.text;
    }
    return result.exit_code;
}

}  // namespace plapcert
