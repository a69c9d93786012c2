// Command-line front end: screen a CSV, run simulation experiments, tune the
// threshold constant, and compare methods by split-sample prediction error.
//
// Exit codes: 0 success, 2 I/O or parse error, 3 contract error (bad link,
// response or parameter), 4 simulation replication failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <dfscreen/dfscreen.hpp>
#include <dfscreen/io/csv.hpp>
#include <dfscreen/io/report.hpp>

namespace {

using namespace dfscreen;
using nlohmann::json;

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level()
{
    const char* env = std::getenv("SCREEN_LOG");
    if (!env) return LogLevel::Error;
    const std::string v(env);
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    return LogLevel::Error;
}

void log(LogLevel level, const std::string& msg)
{
    static const LogLevel threshold = log_level();
    if (level > threshold) return;
    static const char* tags[] = {"error", "info", "debug"};
    std::cerr << "[" << tags[static_cast<int>(level)] << "] " << msg << '\n';
}

bool parse_on_off(const std::string& s)
{
    if (s == "on") return true;
    if (s == "off") return false;
    throw ParameterError("--standardize expects on|off, got '" + s + "'");
}

/// Writes to `path`, or stdout for "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn)
{
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    fn(out);
    if (!out) throw IoError("write to '" + path + "' failed");
}

struct CommonArgs
{
    std::string input;
    std::string response = "y";
    std::string link = "identity";
    std::optional<double> lambda;
    std::optional<double> c;
    std::string standardize = "on";
    std::uint64_t seed = 0;
    int folds = 10;
    std::string out = "-";
};

void add_data_flags(CLI::App* cmd, CommonArgs& a)
{
    cmd->add_option("--input", a.input, "CSV file with a header row")->required();
    cmd->add_option("--response", a.response, "Name of the response column");
    cmd->add_option("--link", a.link, "identity|logit|log|power:1/3|power:1/5");
    cmd->add_option("--lambda", a.lambda, "Decorrelation ridge (default 4 (log p / n)^{1/4})");
    cmd->add_option("--standardize", a.standardize, "on|off");
    cmd->add_option("--seed", a.seed, "Seed for fold and split shuffles");
    cmd->add_option("--folds", a.folds, "Cross-validation folds for c");
}

ScreenOptions screen_options(const CommonArgs& a)
{
    ScreenOptions o;
    o.lambda = a.lambda;
    o.c = a.c;
    o.standardize = parse_on_off(a.standardize);
    o.seed = a.seed;
    o.folds = a.folds;
    return o;
}

int run_screen(const CommonArgs& a)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto data = io::read_csv_dataset(a.input, a.response);
    const LinkSpec link = LinkSpec::parse(a.link);
    log(LogLevel::Info, "screen: n=" + std::to_string(data.x.rows()) + " p=" + std::to_string(data.x.cols()));

    io::ScreenReport report;
    report.response = a.response;
    report.link = link;
    report.n = data.x.rows();
    report.p = data.x.cols();
    report.standardize = parse_on_off(a.standardize);
    report.seed = a.seed;
    report.feature_names = data.feature_cols;
    report.outcome = screen(data.x, data.y, link, screen_options(a));
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    log(LogLevel::Info, "screen: selected " + std::to_string(report.outcome.selection.selected.size())
                            + " columns with c=" + std::to_string(report.outcome.c));
    with_output(a.out, [&](std::ostream& os) { os << std::setw(2) << io::to_json(report) << '\n'; });
    return 0;
}

int run_tune(const CommonArgs& a)
{
    const auto data = io::read_csv_dataset(a.input, a.response);
    const LinkSpec link = LinkSpec::parse(a.link);
    const Matrix x = parse_on_off(a.standardize) ? standardize_columns(data.x) : data.x;
    CvOptions cv;
    cv.lambda = a.lambda;
    cv.folds = a.folds;
    cv.seed = a.seed;
    const CvReport report = cv_select_c(x, data.y, link, cv);
    with_output(a.out, [&](std::ostream& os) { os << std::setw(2) << io::to_json(report) << '\n'; });
    return 0;
}

struct SimulateArgs
{
    std::string config;
    std::string out = "-";
    std::string dump;
    std::optional<unsigned> threads;
};

int run_simulate(const SimulateArgs& a)
{
    std::ifstream in(a.config);
    if (!in) throw IoError("cannot open '" + a.config + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("config '" + a.config + "': " + e.what());
    }
    io::ExperimentSpec spec = io::experiment_from_json(j);
    if (a.threads) spec.options.threads = *a.threads;

    if (!a.dump.empty()) {
        const Matrix loading = spec.scenario.scenario == Scenario::FactorToy
                                   ? ar1_sqrt(spec.scenario.p, spec.scenario.rho)
                                   : Matrix();
        const Dataset d = generate(spec.scenario, derive_seed(spec.scenario.seed, 0), &loading);
        with_output(a.dump, [&](std::ostream& os) { io::write_csv_dataset(os, d.x, d.y); });
        log(LogLevel::Info, "simulate: wrote replication 0 to " + a.dump);
    }

    log(LogLevel::Info, "simulate: " + std::to_string(spec.scenario.replications) + " replications");
    const auto results = run_experiment(spec.scenario, spec.methods, spec.options);
    with_output(a.out, [&](std::ostream& os) { io::write_metrics_csv(os, results); });
    if (a.out != "-" && !a.out.empty()) io::write_metrics_table(std::cout, results);
    return 0;
}

struct SplitArgs
{
    CommonArgs data;
    std::string method = "tdf";
    int repeats = 100;
    unsigned threads = 1;
};

int run_predict_split(const SplitArgs& a)
{
    const auto data = io::read_csv_dataset(a.data.input, a.data.response);
    const LinkSpec link = LinkSpec::parse(a.data.link);
    SplitOptions opt;
    opt.method = parse_method(a.method);
    opt.repeats = a.repeats;
    opt.seed = a.data.seed;
    opt.threads = a.threads;
    opt.method_options.tdf = screen_options(a.data);
    const SplitSummary s = predict_split(data.x, data.y, link, opt);

    with_output(a.data.out, [&](std::ostream& os) {
        os << "metric,value\n" << std::setprecision(10);
        os << "method," << method_name(opt.method) << '\n';
        os << "repeats," << a.repeats << '\n';
        os << "mean," << s.mean << '\n';
        os << "sd," << s.sd << '\n';
        os << "q25," << s.q25 << '\n';
        os << "median," << s.median << '\n';
        os << "q75," << s.q75 << '\n';
        os << "null_mean," << s.null_mean << '\n';
        for (const auto& [size, count] : s.size_counts) os << "size_" << size << ',' << count << '\n';
    });
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decorrelated forward variable screening"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 1;
    app.add_option("--threads", threads, "Worker threads for replications and repeats");

    CommonArgs screen_args;
    auto* screen_cmd = app.add_subcommand("screen", "Run T-DF screening on a CSV and write a JSON report");
    add_data_flags(screen_cmd, screen_args);
    screen_cmd->add_option("--c", screen_args.c, "Threshold constant (cross-validated when absent)");
    screen_cmd->add_option("--out", screen_args.out, "JSON report path ('-' for stdout)");

    CommonArgs tune_args;
    auto* tune_cmd = app.add_subcommand("tune", "Cross-validate the threshold constant c");
    add_data_flags(tune_cmd, tune_args);
    tune_cmd->add_option("--out", tune_args.out, "JSON output path ('-' for stdout)");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte-Carlo experiment from a JSON config");
    sim_cmd->add_option("--config", sim_args.config, "Experiment config (JSON)")->required();
    sim_cmd->add_option("--out", sim_args.out, "Metrics CSV path ('-' for stdout)");
    sim_cmd->add_option("--dump", sim_args.dump, "Also write replication 0's data as CSV");

    SplitArgs split_args;
    auto* split_cmd = app.add_subcommand("predict-split", "Split-sample prediction error of a method");
    add_data_flags(split_cmd, split_args.data);
    split_cmd->add_option("--c", split_args.data.c, "Threshold constant for tdf");
    split_cmd->add_option("--method", split_args.method, "tdf|fbic|holp|sis|wrh");
    split_cmd->add_option("--repeats", split_args.repeats, "Number of random splits");
    split_cmd->add_option("--out", split_args.data.out, "Summary CSV path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*screen_cmd) return run_screen(screen_args);
        if (*tune_cmd) return run_tune(tune_args);
        if (*sim_cmd) {
            if (app.count("--threads")) sim_args.threads = threads;
            return run_simulate(sim_args);
        }
        if (*split_cmd) {
            split_args.threads = threads;
            return run_predict_split(split_args);
        }
    } catch (const IoError& e) {
        log(LogLevel::Error, e.what());
        return 2;
    } catch (const ReplicationError& e) {
        log(LogLevel::Error, e.what());
        return 4;
    } catch (const Error& e) {
        log(LogLevel::Error, e.what());
        return 3;
    } catch (const std::exception& e) {
        log(LogLevel::Error, e.what());
        return 1;
    }
    return 0;
}
