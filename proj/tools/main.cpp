// roughlab: command-line front end for the experiment runners.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numeric failure.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rough/config.hpp"
#include "rough/errors.hpp"
#include "rough/experiments.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    int threads = 1;
    bool json = false;
};

void add_common(CLI::App* sub, Options& opt, bool runs_experiment) {
    sub->add_option("-c,--config", opt.config_path, "configuration file")
        ->required();
    if (runs_experiment) {
        sub->add_option("-o,--out", opt.out_path,
                        "output CSV path (overrides the [output] section)");
        sub->add_option("-t,--threads", opt.threads, "worker thread count")
            ->check(CLI::PositiveNumber);
        sub->add_flag("-j,--json", opt.json, "also write a JSON mirror next to the CSV");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic rough-path experiments"};
    app.require_subcommand(1);
    Options opt;

    const std::vector<std::pair<std::string, std::string>> kinds = {
        {"converge", "p-variation distance between consecutive dyadic interpolations"},
        {"l2rates", "second-moment decay of interpolation differences"},
        {"ldp1d", "one-dimensional capacity sandwich and its eps^2 log limit"},
        {"tailrates", "analytic tail-bound slopes plus the Monte Carlo exceedance trend"},
        {"expgood", "Monte Carlo exceedance trend only"},
        {"rde-wz", "ODE solutions along dyadic drivers and their convergence"},
    };
    for (const auto& [name, desc] : kinds) add_common(app.add_subcommand(name, desc), opt, true);
    add_common(app.add_subcommand("validate", "parse and validate a configuration"), opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string selected = app.get_subcommands().front()->get_name();

    try {
        rough::ExperimentConfig cfg = rough::load_config(opt.config_path);
        if (selected == "validate") {
            std::cout << "ok kind=" << cfg.kind << " hash=" << cfg.hash_hex() << "\n";
            return 0;
        }
        if (cfg.kind != selected)
            throw rough::ConfigError("config kind '" + cfg.kind +
                                     "' does not match subcommand '" + selected + "'");
        if (!opt.out_path.empty()) cfg.out_path = opt.out_path;
        if (cfg.out_path.empty())
            throw rough::ConfigError("no output path: set [output] path or pass --out");
        if (opt.json) cfg.json_mirror = true;

        const rough::CsvTable table = rough::run_experiment(cfg, opt.threads);
        table.write_csv(cfg.out_path);
        std::cout << "wrote " << table.row_count() << " rows to " << cfg.out_path << "\n";
        if (cfg.json_mirror) {
            const std::string jpath = rough::json_mirror_path(cfg.out_path);
            table.write_json(jpath);
            std::cout << "wrote JSON mirror to " << jpath << "\n";
        }
        return 0;
    } catch (const rough::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rough::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
