#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "csrr/runner.hpp"

using namespace csrr;

int main(int argc, char** argv) {
    CLI::App app{"Exact verification engine for Chern-Simons classes of "
                 "logarithmic connections on the projective line"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string problem_path;
    RunOptions opts;
    std::string grid_spec;
    std::uint64_t seed_flag = 0;
    double tol_flag = 0.0;
    bool have_seed = false, have_tol = false;

    app.add_option("--seed", seed_flag, "random seed for sampled checks")
        ->each([&](const std::string&) { have_seed = true; });
    app.add_option("--tol", tol_flag, "numeric comparison tolerance")
        ->each([&](const std::string&) { have_tol = true; });
    app.add_option("--grid", grid_spec,
                   "grid maxima as N,delta,n (runs sampled instances)");

    auto add_problem = [&](CLI::App* cmd, bool required) {
        auto* o = cmd->add_option("problem", problem_path, "problem JSON file");
        if (required) o->required();
    };

    auto* cmd_basic = app.add_subcommand("check-basic", "basic-curvature test");
    add_problem(cmd_basic, true);

    auto* cmd_cs = app.add_subcommand("cs", "Newton and Chern class representatives");
    add_problem(cmd_cs, true);
    cmd_cs->add_option("--n", opts.n, "maximal class degree");

    auto* cmd_gm = app.add_subcommand("gm", "Gauss-Manin connection data");
    add_problem(cmd_gm, true);

    auto* cmd_rr = app.add_subcommand("verify-rr", "Riemann-Roch identity");
    add_problem(cmd_rr, false);
    bool flag_symbolic = false, flag_numeric = false;
    cmd_rr->add_option("--n", opts.n, "class degree");
    cmd_rr->add_flag("--symbolic", flag_symbolic, "exact literal-form check");
    cmd_rr->add_flag("--numeric", flag_numeric, "root-evaluation check");
    cmd_rr->add_option("--seeds", opts.grid_seeds, "seeds per grid cell");

    auto* cmd_ids = app.add_subcommand("verify-identities",
                                       "trace-word, dlog and root-sum identities");
    add_problem(cmd_ids, false);
    cmd_ids->add_option("--lemma", opts.lemma, "which family: 4.3, 4.5, 4.6");
    cmd_ids->add_option("--len", opts.word_length, "trace-word length bound");
    cmd_ids->add_option("--r", opts.resolvent_vars, "dlog identity variable bound");

    auto* cmd_push = app.add_subcommand("pushforward", "finite pushforward checks");
    add_problem(cmd_push, true);

    auto* cmd_search = app.add_subcommand(
        "search-basic", "randomized search for basic-curvature families");
    add_problem(cmd_search, false);
    cmd_search->add_option("--trials", opts.trials, "number of sampled families");

    auto* cmd_self = app.add_subcommand("selftest", "built-in invariant suite");
    add_problem(cmd_self, false);

    CLI11_PARSE(app, argc, argv);

    try {
        ProblemFile problem;
        if (!problem_path.empty()) {
            std::ifstream in(problem_path);
            if (!in) {
                std::cerr << "cannot open " << problem_path << "\n";
                return 2;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            problem = parse_problem(buf.str());
        }
        if (have_seed) opts.seed = seed_flag;
        if (have_tol) opts.tol = tol_flag;
        if (!grid_spec.empty()) {
            std::array<int, 3> g{};
            if (std::sscanf(grid_spec.c_str(), "%d,%d,%d", &g[0], &g[1], &g[2]) != 3 ||
                g[0] < 1 || g[1] < 1 || g[2] < 1) {
                std::cerr << "bad --grid; expected N,delta,n\n";
                return 2;
            }
            opts.grid = g;
        }
        std::string command = app.get_subcommands().front()->get_name();
        if (command == "verify-rr") {
            opts.symbolic = flag_symbolic || !flag_numeric;
            opts.numeric = flag_numeric;
        }
        RunResult result = run_command(command, problem, opts);
        std::cout << reports_to_json(result.reports).dump(2) << "\n";
        return result.exit_code;
    } catch (const InputError& e) {
        for (const auto& issue : e.issues) std::cerr << "input error: " << issue << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
