// rdlab: runs verification suites from a YAML config and writes reports.
//
// Exit codes: 0 all gated checks pass, 1 a check failed, 2 config or usage
// error, 3 numerical blow-up (witness in report.json).

#include "rdlab/experiments.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace rdlab;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;
constexpr int exit_blow_up = 3;

struct Options {
    std::string config;
    std::string out = "rdlab_out";
    std::optional<std::uint64_t> seed;
    unsigned threads = default_threads();
    bool quiet = false;
};

void write_outputs(const RunOutcome& run, const fs::path& out) {
    write_file(out / "report.json", run.report_text());
    write_file(out / "timings.json", run.timings.dump(2) + "\n");
    for (const auto& s : run.suites) {
        for (const auto& [name, table] : s.tables)
            table.write(out / name);
        for (const auto& [name, bytes] : s.files)
            write_file(out / name, bytes);
    }
}

void print_summary(const RunOutcome& run) {
    for (const auto& s : run.suites)
        for (const auto& c : s.checks) {
            const char* verdict = !c.gated ? "INFO" : c.pass ? "PASS" : "FAIL";
            std::printf("%-4s %s/%s value=%s", verdict, s.suite.c_str(), c.name.c_str(),
                        format_double(c.value).c_str());
            if (c.relation == "in")
                std::printf(" in [%s, %s]", format_double(c.threshold).c_str(),
                            format_double(c.threshold_upper).c_str());
            else if (c.relation != "finite" && c.relation != "true")
                std::printf(" %s %s", c.relation.c_str(), format_double(c.threshold).c_str());
            std::printf("\n");
        }
    if (run.blow_up)
        std::printf("BLOW-UP %s\n", run.blow_up->what());
    std::printf("%s\n", run.pass() ? "PASS" : "FAIL");
}

int run_command(const std::string& name, const Options& opt) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(opt.config);
    } catch (const ConfigError& e) {
        std::cerr << opt.config << ": " << e.what() << "\n";
        return exit_config;
    }
    if (opt.seed)
        cfg.seed = *opt.seed;
    RunContext ctx;
    ctx.threads = std::max(1u, opt.threads);
    if (!opt.quiet)
        ctx.log = [](const std::string& msg) { std::cerr << "[rdlab] " << msg << "\n"; };
    RunOutcome run;
    try {
        run = run_experiment(name, cfg, ctx);
    } catch (const ConfigError& e) {
        std::cerr << opt.config << ": " << e.what() << "\n";
        return exit_config;
    } catch (const ParameterError& e) {
        std::cerr << opt.config << ": invalid parameter: " << e.what() << "\n";
        return exit_config;
    }
    write_outputs(run, opt.out);
    if (!opt.quiet)
        print_summary(run);
    if (run.blow_up) {
        std::cerr << "blow-up: " << run.blow_up->what() << "\n";
        return exit_blow_up;
    }
    return run.pass() ? exit_pass : exit_fail;
}

// ---------------------------------------------------------------------------
// plot: two-column data files from a report

void write_columns(const fs::path& path, const std::string& x, const std::string& y, const std::vector<double>& xs,
                   const std::vector<double>& ys, bool log_x, bool log_y) {
    CsvTable t({x, y});
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if ((log_x && !(xs[i] > 0.0)) || (log_y && !(ys[i] > 0.0)))
            continue;
        t.add_row({log_x ? std::log(xs[i]) : xs[i], log_y ? std::log(ys[i]) : ys[i]});
    }
    t.write(path);
}

std::vector<double> numbers(const json& j) {
    std::vector<double> out;
    for (const auto& v : j)
        out.push_back(v.is_null() ? NAN : v.get<double>());
    return out;
}

std::vector<std::string> emit_plots(const json& report, const fs::path& out) {
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& x, const std::string& y, const json& xs,
                    const json& ys, bool log_x, bool log_y) {
        write_columns(out / name, x, y, numbers(xs), numbers(ys), log_x, log_y);
        written.push_back(name);
    };
    for (const auto& s : report.at("suites")) {
        const std::string suite = s.at("suite").get<std::string>();
        const json& d = s.at("details");
        if (suite == "smoothing") {
            for (const auto& g : d.at("gammas")) {
                std::vector<double> sq;
                for (double n : numbers(g.at("norm_u0")))
                    sq.push_back(n * n);
                const std::string tag = format_double(g.at("gamma").get<double>());
                emit("smoothing_gamma" + tag + ".csv", "log_norm_u0_sq", "log_norm_gamma" + tag, sq, g.at("result"),
                     true, true);
            }
        } else if (suite == "h1-smoothing") {
            emit("h1_smoothing.csv", "log_norm_u0", "log_norm_grad", d.at("norm_u0"), d.at("gradient"), true, true);
        } else if (suite == "dimension") {
            for (const auto& e : d.at("synthetic"))
                emit("correlation_" + e.at("cloud").get<std::string>() + "_" + e.at("tag").get<std::string>() + ".csv",
                     "log_eps", "log_C", e.at("scales"), e.at("correlation"), true, true);
            for (const auto& e : d.at("cloud_estimates"))
                emit("correlation_attractor_" + e.at("tag").get<std::string>() + ".csv", "log_eps", "log_C",
                     e.at("scales"), e.at("correlation"), true, true);
        } else if (suite == "attractor") {
            for (const char* tag : {"L2", "L6"}) {
                const json& series = d.at(std::string("distance_") + tag);
                emit(std::string("distance_") + tag + ".csv", "t", "log_dist", series.at("t"), series.at("dist"),
                     false, true);
            }
        }
    }
    return written;
}

int plot_command(const std::string& report_path, std::string out, bool quiet) {
    json report;
    try {
        report = json::parse(read_file(report_path));
        if (out.empty())
            out = fs::path(report_path).parent_path().string();
        if (out.empty())
            out = ".";
        const auto written = emit_plots(report, out);
        if (!quiet)
            for (const auto& w : written)
                std::printf("%s\n", (fs::path(out) / w).string().c_str());
    } catch (const json::exception& e) {
        std::cerr << report_path << ": malformed report: " << e.what() << "\n";
        return exit_config;
    } catch (const StateError& e) {
        std::cerr << e.what() << "\n";
        return exit_config;
    }
    return exit_pass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reaction-diffusion verification suites"};
    app.require_subcommand(1);
    Options opt;
    int status = exit_pass;

    auto add_run = [&](const std::string& name, const std::string& summary) {
        CLI::App* sub = app.add_subcommand(name, summary);
        sub->add_option("--config", opt.config, "YAML experiment config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory")->capture_default_str();
        sub->add_option("--seed", opt.seed, "override the config seed");
        sub->add_option("--threads", opt.threads, "worker threads")->capture_default_str();
        sub->add_flag("--quiet", opt.quiet, "no progress or summary output");
        sub->callback([&, name] { status = run_command(name, opt); });
    };
    for (const auto& s : suite_registry())
        add_run(s.name, s.summary);
    add_run("all", "every suite with a block in the config");

    std::string report_path, plot_out;
    CLI::App* plot = app.add_subcommand("plot", "two-column plot data from a report.json");
    plot->add_option("--report", report_path, "report.json")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", plot_out, "output directory (default: next to the report)");
    plot->add_flag("--quiet", opt.quiet, "do not list written files");
    plot->callback([&] { status = plot_command(report_path, plot_out, opt.quiet); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_config;
    }
    return status;
}
