#ifndef HARDYLAB_EXPERIMENT_HPP
#define HARDYLAB_EXPERIMENT_HPP

#include <map>
#include <string>
#include <vector>

namespace hardylab {

// Flat key=value configuration ('#' starts a comment, blank lines ignored).
// The key list is closed: unknown keys are a validation error, so typos never
// silently fall back to defaults.  Numeric lists accept either a comma list
// (0.1,0.3,0.9) or a linear range lo:hi:count.
struct ExperimentConfig {
    std::map<std::string, std::string> kv;

    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_text(const std::string& text);

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string raw(const std::string& key) const;

    double number(const std::string& key, double fallback) const;
    long long integer(const std::string& key, long long fallback) const;
    std::vector<double> numbers(const std::string& key,
                                const std::vector<double>& fallback) const;
    std::vector<long long> integers(const std::string& key,
                                    const std::vector<long long>& fallback) const;
};

// One scenario run: a CSV table plus a summary with one PASS/FAIL line per
// checked invariant (informational lines use `name = value`).
struct ScenarioOutput {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> summary;
    bool all_pass = true;
};

// The experiment scenarios, one per acceptance theme:
//   rayleigh       boundary-weighted quotient sweep vs the closed formulas
//   epsilon0       variational threshold with convergence trace
//   shoot          ODE-shooting threshold and the limit curve l(epsilon)
//   mazya          one-dimensional criterion cases (closed, divergent, coupled)
//   best-constant  Sobolev-quotient minimization with refinement trace
//   heat-bound     diagonal kernel vs its envelope, with stability checks
//   identity-suite ground-transform / sector / derivative identities
std::vector<std::string> scenario_names();

ScenarioOutput run_scenario_pure(const std::string& scenario, const ExperimentConfig& cfg);

// Runs the scenario and writes `<scenario>.csv` and `summary.txt` under
// out_dir (both atomically: temp file + rename).  Numbers are printed with
// %.15g so a rerun of the same config reproduces the bytes.  Returns the
// process exit code: 0 ok, 1 validation error, 2 solver fault, 3 when a
// summary check failed.
int run_scenario(const std::string& scenario, const std::string& config_path,
                 const std::string& out_dir);

// %.15g formatting used for all CSV output.
std::string format_g(double x);

} // namespace hardylab

#endif
