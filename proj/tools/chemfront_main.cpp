// Command-line front end: run / sweep / theory / verify.
//
//   chemfront run    --config cfg.json --out outdir [--seed 7]
//   chemfront sweep  --config sweep.json --out outdir [--jobs 4] [--seed 7]
//   chemfront theory --a 1 --eps 0.5 [--eta 0.1] [--big-m 10] [--out report.json]
//   chemfront verify --out outdir
//
// Any config key can be overridden from the environment with the CHEMFRONT_
// prefix, path components joined by "__" (CHEMFRONT_params__a=2.5).

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "chemfront/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"chemotaxis front laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int jobs = 1;

    auto* run = app.add_subcommand("run", "execute one configured run");
    run->add_option("--config", config_path, "config file (json)")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "seed recorded in the run record");

    auto* sweep = app.add_subcommand("sweep", "run a parameter lattice");
    sweep->add_option("--config", config_path, "sweep file (json)")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--jobs", jobs, "worker threads");
    sweep->add_option("--seed", seed, "seed recorded per run");

    chemfront::harness::TheoryRequest treq;
    std::string theory_out;
    auto* theory = app.add_subcommand("theory", "evaluate the closed-form constants");
    theory->add_option("--a", treq.params.a, "growth rate");
    theory->add_option("--b", treq.params.b, "logistic damping");
    theory->add_option("--chi", treq.params.chi, "chemotaxis sensitivity");
    theory->add_option("--lambda", treq.params.lambda, "chemical decay");
    theory->add_option("--mu", treq.params.mu, "chemical production");
    theory->add_option("--dim", treq.params.dim, "spatial dimension");
    theory->add_option("--eps", treq.eps, "speed margin");
    theory->add_option("--eta", treq.eta, "persistence level");
    theory->add_option("--big-m", treq.big_m, "a-priori bound");
    theory->add_option("--out", theory_out, "also write the report here");

    auto* verify = app.add_subcommand("verify", "recheck run artifacts offline");
    verify->add_option("--out", out_dir, "run directory to verify")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return chemfront::harness::cmd_run(config_path, out_dir, seed, std::cout);
        if (sweep->parsed())
            return chemfront::harness::cmd_sweep(config_path, out_dir, jobs, seed, std::cout);
        if (theory->parsed())
            return chemfront::harness::cmd_theory(treq, theory_out, std::cout);
        if (verify->parsed()) return chemfront::harness::cmd_verify(out_dir, std::cout);
    } catch (const chemfront::config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
