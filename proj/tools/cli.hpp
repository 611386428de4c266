#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace gbdeer::cli
{

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

struct RunOptions
{
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;     // overrides the config's seed
    std::optional<std::string> protocol;   // overrides the config's protocol
    std::filesystem::path out;
    bool trace = true;
    bool overwrite = false;
};

struct CompareOptions
{
    std::filesystem::path config;
    std::uint64_t seed_first = 0;
    std::uint64_t seed_last = 0;
    std::vector<std::string> protocols;
    std::filesystem::path out;
    bool trace = false;
    unsigned jobs = 1;
    bool overwrite = false;
};

/// "N..M" (inclusive, N <= M) or a single "N".
std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_seed_range(const std::string& text);

int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err, const std::atomic<bool>* cancel = nullptr);
int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err,
                const std::atomic<bool>* cancel = nullptr);

/// Parses argv and dispatches; returns the process exit code.
int main_entry(int argc, char** argv, const std::atomic<bool>* cancel = nullptr);

}  // namespace gbdeer::cli
