// fr3sim command-line front end: simulate, compare, beams.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fr3sim/fr3sim.hpp"

namespace {

fr3sim::ScenarioConfig resolve_scenario(const std::string& arg) {
    if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") return fr3sim::load_config(arg);
    return fr3sim::expand_scenario(arg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-layer 4G/5G/6G downlink system-level simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::uint64_t seed = 1;
    int drops = -1;
    std::string mode;
    bool no_reselection = false;
    std::string out_dir;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto* sim = app.add_subcommand("simulate", "Run Monte-Carlo drops of one scenario");
    sim->add_option("--scenario", scenario, "Scenario name or JSON config path")->required();
    auto* seed_opt = sim->add_option("--seed", seed, "Master seed");
    sim->add_option("--drops", drops, "Number of drops")->check(CLI::PositiveNumber);
    sim->add_option("--mode", mode, "Scheduling mode")->check(CLI::IsMember({"paper-literal", "orthogonal", "mu-mimo"}));
    sim->add_flag("--no-reselection", no_reselection, "Associate to the strongest beam only");
    sim->add_option("--out", out_dir, "Output directory");
    sim->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> dirs;
    auto* cmp = app.add_subcommand("compare", "Tabulate rates and power of finished runs");
    cmp->add_option("dirs", dirs, "Output directories; the first is the baseline")->required()->expected(2, -1);

    std::string radio;
    std::string beams_out;
    auto* beams = app.add_subcommand("beams", "Write SSB and CSI-RS beam pattern cuts of a radio type");
    beams->add_option("--radio", radio, "Radio type name")->required();
    beams->add_option("--out", beams_out, "CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            auto cfg = resolve_scenario(scenario);
            if (*seed_opt) cfg.seed = seed;
            if (drops > 0) cfg.n_drops = drops;
            if (!mode.empty()) cfg.mode = fr3sim::scheduling_mode_from_string(mode);
            if (no_reselection) cfg.reselection.enabled = false;
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            const auto rs = fr3sim::run(cfg, threads);
            fr3sim::emit(rs, cfg.output_dir);
            std::cout << cfg.name << ": median " << rs.rate_mbps.p50 << " Mbps, p95 " << rs.rate_mbps.p95
                      << " Mbps, power " << rs.power.total_w << " W (" << rs.meta.wall_clock_s << " s)\n";
        } else if (*cmp) {
            std::vector<fr3sim::RunSummary> runs;
            for (const auto& d : dirs) runs.push_back(fr3sim::load_summary(d));
            fr3sim::write_comparison(std::cout, fr3sim::compare(runs));
        } else if (*beams) {
            const auto& type = fr3sim::RadioCatalog::standard().lookup(radio);
            std::ofstream out(beams_out);
            if (!out) throw fr3sim::FilesystemError("cannot write '" + beams_out + "'");
            out << "codebook,beam,cut,azimuth_deg,elevation_deg,gain_dbi\n";
            for (const auto& c : type.carriers) {
                const auto tech = fr3sim::to_string(c.technology);
                fr3sim::write_beam_diagram(out, fr3sim::ssb_codebook(c), tech + " SSB");
                fr3sim::write_beam_diagram(out, fr3sim::csirs_codebook(c), tech + " CSI-RS");
            }
        }
    } catch (const fr3sim::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
