#include <string>

#include <CLI11.hpp>

#include "hardylab/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "hardylab - radial variational and heat-kernel experiments for critical\n"
        "inverse-square Schrodinger operators.\n\n"
        "Scenarios:\n"
        "  rayleigh        boundary-term Rayleigh quotients on ball/exterior vs closed forms\n"
        "  epsilon0        variational threshold coupling for a decaying tail density\n"
        "  shoot           threshold coupling via the radial ODE shooting method\n"
        "  mazya           weighted-norm inequality criterion (closed cases + ground-state weights)\n"
        "  best-constant   minimization of a critical-exponent quotient\n"
        "  heat-bound      heat-kernel envelope ratios with refinement/cutoff stability\n"
        "  identity-suite  ground-transform, sector-decomposition and derivative identities\n\n"
        "Config files are key=value lines; '#' starts a comment. Allowed keys:\n"
        "  N domain R Rinf rmin grid_sizes alpha lambda epsilon k mu sigma Kbound\n"
        "  tail tmin tmax t_points sectors tol seed\n\n"
        "Outputs <scenario>.csv and summary.txt under --out. Exit codes: 0 ok,\n"
        "1 validation error, 2 solver fault, 3 summary check failed."};

    std::string scenario, config_path, out_dir = ".";
    app.add_option("scenario", scenario, "one of the scenarios listed above")
        ->required()
        ->check(CLI::IsMember(hardylab::scenario_names()));
    app.add_option("--config", config_path, "path to a key=value config file")->required();
    app.add_option("--out", out_dir, "output directory (default: current directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    return hardylab::run_scenario(scenario, config_path, out_dir);
}
