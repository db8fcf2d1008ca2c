#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "slicing4meta/error.hpp"
#include "slicing4meta/experiment.hpp"
#include "slicing4meta/simkernel.hpp"

namespace fs = std::filesystem;
using namespace slicing4meta;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

enum class Level { Quiet, Error, Warn, Info, Debug };

Level log_level()
{
    const char* env = std::getenv("SLICING4META_LOG");
    const std::string v = env ? env : "warn";
    if (v == "quiet" || v == "off") return Level::Quiet;
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
}

template <typename... Args>
void log(Level level, fmt::format_string<Args...> format, Args&&... args)
{
    static const Level threshold = log_level();
    if (level > threshold) return;
    static constexpr const char* names[] = {"", "error", "warn", "info", "debug"};
    std::cerr << "slicing4meta: " << names[static_cast<int>(level)] << ": "
              << fmt::format(format, std::forward<Args>(args)...) << '\n';
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error(Errc::IoError, "failed writing " + path.string());
    log(Level::Info, "wrote {}", path.string());
}

fs::path sibling(const fs::path& out, const std::string& suffix)
{
    fs::path p = out;
    p.replace_filename(out.stem().string() + suffix);
    return p;
}

bool is_validation_error(Errc code)
{
    switch (code) {
    case Errc::ScenarioInvalid:
    case Errc::ConfigInvalid:
    case Errc::InvalidParams:
    case Errc::InvalidModel:
    case Errc::DuplicateId:
    case Errc::UnknownChild:
    case Errc::KindMismatch:
    case Errc::CycleDetected:
    case Errc::UnknownModel:
    case Errc::UnknownServiceKind:
    case Errc::MissingBundle:
    case Errc::DomainError:
        return true;
    default:
        return false;
    }
}

struct Options {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool trace = false;
    std::optional<std::string> policy;
    std::vector<double> rates;
    std::vector<int> n_users;
    std::optional<double> total_rendering;
    std::string dump_pool;
};

int cmd_validate(const Options& o)
{
    const Scenario s = load_scenario(o.scenario);
    std::cout << fmt::format("{}: valid ({} catalog entries, {} requests)\n", o.scenario, s.catalog.size(),
                             s.requests.size());
    return kExitOk;
}

int cmd_run(const Options& o)
{
    Scenario s = load_scenario(o.scenario);
    if (o.seed) s.seed = *o.seed;
    if (o.policy) s.controllers.policy = allocation_policy_from_string(*o.policy);
    log(Level::Info, "running {} with seed {}", o.scenario, s.seed);

    const MetricsReport report = run(s);
    const fs::path out = o.out.empty() ? fs::path("run.csv") : fs::path(o.out);
    write_file(out, report.users_csv());
    write_file(sibling(out, ".ledger.csv"), report.ledger_csv());
    if (o.trace) write_file(sibling(out, ".trace.jsonl"), report.trace.to_jsonl());
    if (!o.dump_pool.empty()) write_file(o.dump_pool, report.final_pool.dump(2) + "\n");

    const auto summary = report.summary();
    std::cout << fmt::format("users: {}\nadmitted: {}\nrejected: {}\nmsis_created: {}\nmsis_reused: {}\n"
                             "msis_modified: {}\nmean_mi: {:.6f}\nevents: {}\n",
                             summary["users"].get<std::size_t>(), summary["admitted"].get<std::size_t>(),
                             summary["rejected"].get<std::size_t>(), summary["msis_created"].get<std::size_t>(),
                             summary["msis_reused"].get<std::size_t>(), summary["msis_modified"].get<std::size_t>(),
                             report.mean_mi(), summary["events"].get<std::size_t>());
    return kExitOk;
}

int cmd_fig5(const Options& o)
{
    SweepConfig config;
    if (!o.scenario.empty()) {
        const Scenario s = load_scenario(o.scenario);
        config.qoe = s.qoe;
        config.objects_min = s.objects_min;
        config.objects_max = s.objects_max;
        config.seed = s.seed;
    }
    if (o.seed) config.seed = *o.seed;
    if (o.policy) config.policy = allocation_policy_from_string(*o.policy);
    if (!o.rates.empty()) config.rates = o.rates;
    if (!o.n_users.empty()) config.n_users = o.n_users;
    if (o.total_rendering) config.total_rendering = *o.total_rendering;

    const std::string csv = sweep_csv(run_sweep(config));
    if (o.out.empty())
        std::cout << csv;
    else
        write_file(o.out, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Metaverse service slicing simulator"};
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "Check a scenario file against the schema");
    validate->add_option("--scenario", o.scenario, "Scenario JSON file")->required();

    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write metrics");
    run_cmd->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    run_cmd->add_option("--seed", o.seed, "Override the scenario seed");
    run_cmd->add_option("--out", o.out, "Per-user metrics CSV (default run.csv)");
    run_cmd->add_flag("--trace", o.trace, "Also write <out>.trace.jsonl");
    run_cmd->add_option("--policy", o.policy, "Rendering allocation policy")->check(CLI::IsMember({"even", "mimax"}));
    run_cmd->add_option("--dump-pool", o.dump_pool, "Write the final resource pool as JSON");

    auto* fig5 = app.add_subcommand("fig5", "Sweep mean MI over user counts and data rates");
    fig5->add_option("--scenario", o.scenario, "Take QoE parameters, object range and seed from a scenario");
    fig5->add_option("--seed", o.seed, "Population seed");
    fig5->add_option("--out", o.out, "CSV destination (default stdout)");
    fig5->add_option("--policy", o.policy, "Rendering allocation policy")->check(CLI::IsMember({"even", "mimax"}));
    fig5->add_option("--rates", o.rates, "Comma-separated data rates in Mb/s")->delimiter(',');
    fig5->add_option("--n-users", o.n_users, "Comma-separated user counts")->delimiter(',');
    fig5->add_option("--total-rendering", o.total_rendering, "Rendering budget in K");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*validate) return cmd_validate(o);
        if (*run_cmd) return cmd_run(o);
        return cmd_fig5(o);
    } catch (const Error& e) {
        log(Level::Error, "{}", e.what());
        return is_validation_error(e.code()) ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        log(Level::Error, "{}", e.what());
        return kExitRuntime;
    }
}
