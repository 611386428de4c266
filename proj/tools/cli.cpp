#include "cli.hpp"

#include "gbdeer/config.hpp"
#include "gbdeer/engine.hpp"
#include "gbdeer/metrics.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <mutex>
#include <set>
#include <spdlog/spdlog.h>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace gbdeer::cli
{

namespace
{

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Output writes go through a sibling temp file and a rename, and every
// finished path is remembered so an interrupted command can take its
// partial results back out.
class OutputSet
{
public:
    void write(const fs::path& path, const std::string& content)
    {
        const fs::path tmp = path.string() + ".tmp";
        {
            std::lock_guard lock(mu_);
            pending_.push_back(tmp);
        }
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f)
            {
                throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
            }
            f << content;
            if (!f.flush())
            {
                throw std::runtime_error(fmt::format("write failed: {}", tmp.string()));
            }
        }
        fs::rename(tmp, path);
        std::lock_guard lock(mu_);
        std::erase(pending_, tmp);
        written_.push_back(path);
    }

    void make_dir(const fs::path& dir)
    {
        if (fs::create_directories(dir))
        {
            std::lock_guard lock(mu_);
            dirs_.push_back(dir);
        }
    }

    void roll_back()
    {
        std::lock_guard lock(mu_);
        std::error_code ec;
        for (const auto& p : pending_)
        {
            fs::remove(p, ec);
        }
        for (const auto& p : written_)
        {
            fs::remove(p, ec);
        }
        for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it)
        {
            fs::remove(*it, ec);  // only succeeds when empty
        }
        pending_.clear();
        written_.clear();
        dirs_.clear();
    }

private:
    std::mutex mu_;
    std::vector<fs::path> pending_;
    std::vector<fs::path> written_;
    std::vector<fs::path> dirs_;
};

Protocol protocol_or_throw(const std::string& name)
{
    if (const auto p = parse_protocol(name))
    {
        return *p;
    }
    throw UsageError(fmt::format("unknown protocol '{}' (valid: {})", name, kProtocolNames));
}

// The directory may only hold entries this command would produce itself,
// unless the caller asked to overwrite.
void prepare_out_dir(const fs::path& dir, const std::set<std::string>& own, bool overwrite, OutputSet& outputs)
{
    if (dir.empty())
    {
        throw UsageError("--out must name a directory");
    }
    if (fs::exists(dir) && !fs::is_directory(dir))
    {
        throw UsageError(fmt::format("output path {} exists and is not a directory", dir.string()));
    }
    if (fs::exists(dir) && !overwrite)
    {
        for (const auto& entry : fs::directory_iterator(dir))
        {
            if (!own.contains(entry.path().filename().string()))
            {
                throw UsageError(fmt::format("output directory {} is not empty (pass --overwrite)", dir.string()));
            }
        }
    }
    outputs.make_dir(dir);
}

std::string trace_csv(const Trace& trace)
{
    std::ostringstream s;
    trace.write_csv(s);
    return s.str();
}

// Duration 0 is a legal "do nothing" run; run() still checks the rest.
ScenarioConfig checked(const ScenarioConfig& cfg) { return cfg.duration == 0.0 ? cfg : validate_config(cfg); }

RunResult simulate(const ScenarioConfig& cfg, const std::atomic<bool>* cancel)
{
    if (cfg.duration == 0.0)
    {
        return run(cfg);
    }
    Simulator sim(cfg);
    sim.set_cancel_flag(cancel);
    return sim.run();
}

template <typename F>
int guarded(std::ostream& err, OutputSet& outputs, F&& body)
{
    try
    {
        return body();
    }
    catch (const ConfigError& e)
    {
        outputs.roll_back();
        err << "config error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const UsageError& e)
    {
        outputs.roll_back();
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const RunCancelled&)
    {
        outputs.roll_back();
        err << "interrupted; partial outputs removed\n";
        return kRuntime;
    }
    catch (const std::exception& e)
    {
        outputs.roll_back();
        err << "runtime error: " << e.what() << '\n';
        return kRuntime;
    }
}

}  // namespace

std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_seed_range(const std::string& text)
{
    auto number = [](std::string_view s) -> std::optional<std::uint64_t> {
        std::uint64_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
        {
            return std::nullopt;
        }
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos)
    {
        if (const auto v = number(text))
        {
            return std::pair{*v, *v};
        }
        return std::nullopt;
    }
    const auto lo = number(std::string_view(text).substr(0, dots));
    const auto hi = number(std::string_view(text).substr(dots + 2));
    if (!lo || !hi || *lo > *hi)
    {
        return std::nullopt;
    }
    return std::pair{*lo, *hi};
}

int cmd_validate(const fs::path& config, std::ostream& out, std::ostream& err)
{
    OutputSet none;
    return guarded(err, none, [&] {
        const auto cfg = validate_config(load_config(config));
        out << dump_config(cfg);
        return kOk;
    });
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err, const std::atomic<bool>* cancel)
{
    OutputSet outputs;
    return guarded(err, outputs, [&] {
        auto cfg = load_config(opt.config);
        if (opt.seed)
        {
            cfg.seed = *opt.seed;
        }
        if (opt.protocol)
        {
            cfg.protocol = protocol_or_throw(*opt.protocol);
        }
        cfg = checked(cfg);
        prepare_out_dir(opt.out, {"metrics.txt", "trace.csv"}, opt.overwrite, outputs);

        spdlog::info("running {} seed {} for {} s", to_string(cfg.protocol), cfg.seed, cfg.duration);
        const auto result = simulate(cfg, cancel);
        if (cancel && cancel->load())
        {
            throw RunCancelled();
        }
        outputs.write(opt.out / "metrics.txt", to_text(result.metrics));
        if (opt.trace)
        {
            outputs.write(opt.out / "trace.csv", trace_csv(result.trace));
        }
        else
        {
            std::error_code ec;
            fs::remove(opt.out / "trace.csv", ec);  // a stale trace from an earlier run would mislead
        }
        out << to_text(result.metrics);
        return kOk;
    });
}

int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err, const std::atomic<bool>* cancel)
{
    OutputSet outputs;
    return guarded(err, outputs, [&] {
        if (opt.seed_first > opt.seed_last)
        {
            throw UsageError("--seeds: first seed is larger than the last");
        }
        if (opt.protocols.empty())
        {
            throw UsageError("--protocols: at least one protocol is required");
        }
        std::vector<Protocol> protocols;
        for (const auto& name : opt.protocols)
        {
            protocols.push_back(protocol_or_throw(name));
        }
        const auto base = checked(load_config(opt.config));

        struct Job
        {
            Protocol protocol;
            std::uint64_t seed;
            std::string dir;
        };
        std::vector<Job> jobs;
        std::set<std::string> own{"comparison.csv", "manifest.json"};
        for (Protocol p : protocols)
        {
            for (std::uint64_t s = opt.seed_first;; ++s)
            {
                jobs.push_back({p, s, fmt::format("{}-seed{}", to_string(p), s)});
                own.insert(jobs.back().dir);
                if (s == opt.seed_last)
                {
                    break;
                }
            }
        }
        prepare_out_dir(opt.out, own, opt.overwrite, outputs);

        nlohmann::json manifest;
        manifest["config"] = opt.config.string();
        manifest["seeds"] = nlohmann::json::array();
        for (std::uint64_t s = opt.seed_first;; ++s)
        {
            manifest["seeds"].push_back(s);
            if (s == opt.seed_last)
            {
                break;
            }
        }
        manifest["output_dir"] = opt.out.string();
        manifest["protocols"] = nlohmann::json::array();
        for (Protocol p : protocols)
        {
            manifest["protocols"].push_back(std::string(to_string(p)));
        }

        std::vector<std::optional<Metrics>> results(jobs.size());
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::mutex err_mu;
        std::exception_ptr first_error;

        auto worker = [&] {
            while (!failed.load())
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size())
                {
                    return;
                }
                try
                {
                    auto cfg = base;
                    cfg.protocol = jobs[i].protocol;
                    cfg.seed = jobs[i].seed;
                    spdlog::info("compare: {} seed {}", to_string(cfg.protocol), cfg.seed);
                    const auto result = simulate(cfg, cancel);
                    const fs::path dir = opt.out / jobs[i].dir;
                    outputs.make_dir(dir);
                    outputs.write(dir / "metrics.txt", to_text(result.metrics));
                    if (opt.trace)
                    {
                        outputs.write(dir / "trace.csv", trace_csv(result.trace));
                    }
                    results[i] = result.metrics;
                }
                catch (...)
                {
                    std::lock_guard lock(err_mu);
                    if (!first_error)
                    {
                        first_error = std::current_exception();
                    }
                    failed = true;
                }
            }
        };

        const unsigned n_threads = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(jobs.size())));
        std::vector<std::thread> pool;
        for (unsigned k = 1; k < n_threads; ++k)
        {
            pool.emplace_back(worker);
        }
        worker();
        for (auto& t : pool)
        {
            t.join();
        }
        if (first_error)
        {
            std::rethrow_exception(first_error);
        }
        if (cancel && cancel->load())
        {
            throw RunCancelled();
        }

        std::string csv = comparison_csv_header() + "\n";
        for (std::size_t i = 0; i < jobs.size(); ++i)
        {
            csv += comparison_csv_row(to_string(jobs[i].protocol), jobs[i].seed, *results[i]) + "\n";
        }
        outputs.write(opt.out / "manifest.json", manifest.dump(2) + "\n");
        outputs.write(opt.out / "comparison.csv", csv);
        out << csv;
        return kOk;
    });
}

int main_entry(int argc, char** argv, const std::atomic<bool>* cancel)
{
    CLI::App app{"Grid-based energy-efficient routing simulator"};
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config file and print it normalized");
    validate->add_option("--config", validate_path, "Scenario config (JSON)")->required();

    RunOptions run_opt;
    std::string run_trace = "on";
    std::uint64_t run_seed = 0;
    std::string run_protocol;
    auto* run_cmd = app.add_subcommand("run", "Run one simulation");
    run_cmd->add_option("--config", run_opt.config, "Scenario config (JSON)")->required();
    auto* seed_opt = run_cmd->add_option("--seed", run_seed, "Seed (defaults to the config's)");
    auto* proto_opt = run_cmd->add_option("--protocol", run_protocol, "gbdeer, gaf-fixed or minhop");
    run_cmd->add_option("--out", run_opt.out, "Output directory")->required();
    run_cmd->add_option("--trace", run_trace, "Write trace.csv (on|off)")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    run_cmd->add_flag("--overwrite", run_opt.overwrite, "Allow a non-empty output directory");

    CompareOptions cmp_opt;
    std::string cmp_seeds;
    std::string cmp_protocols = "gbdeer,gaf-fixed,minhop";
    std::string cmp_trace = "off";
    cmp_opt.jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* compare = app.add_subcommand("compare", "Run a protocol x seed sweep");
    compare->add_option("--config", cmp_opt.config, "Scenario config (JSON)")->required();
    compare->add_option("--seeds", cmp_seeds, "Seed range N..M (inclusive)")->required();
    compare->add_option("--protocols", cmp_protocols, "Comma-separated protocol list")->capture_default_str();
    compare->add_option("--out", cmp_opt.out, "Output directory")->required();
    compare->add_option("--trace", cmp_trace, "Write per-run trace.csv (on|off)")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    compare->add_option("--jobs", cmp_opt.jobs, "Parallel runs")->check(CLI::PositiveNumber);
    compare->add_flag("--overwrite", cmp_opt.overwrite, "Allow a non-empty output directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (validate->parsed())
    {
        return cmd_validate(validate_path, std::cout, std::cerr);
    }
    if (run_cmd->parsed())
    {
        run_opt.trace = run_trace == "on";
        if (seed_opt->count() > 0)
        {
            run_opt.seed = run_seed;
        }
        if (proto_opt->count() > 0)
        {
            run_opt.protocol = run_protocol;
        }
        return cmd_run(run_opt, std::cout, std::cerr, cancel);
    }

    const auto seeds = parse_seed_range(cmp_seeds);
    if (!seeds)
    {
        std::cerr << "error: --seeds expects N..M with N <= M\n";
        return kUsage;
    }
    cmp_opt.seed_first = seeds->first;
    cmp_opt.seed_last = seeds->second;
    cmp_opt.trace = cmp_trace == "on";
    std::stringstream list(cmp_protocols);
    for (std::string item; std::getline(list, item, ',');)
    {
        if (!item.empty())
        {
            cmp_opt.protocols.push_back(item);
        }
    }
    return cmd_compare(cmp_opt, std::cout, std::cerr, cancel);
}

}  // namespace gbdeer::cli
