#include "cli.hpp"

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>
#include <string_view>

namespace
{

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

void setup_logging()
{
    auto logger = spdlog::stderr_logger_st("gbdeer");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);

    spdlog::set_level(spdlog::level::err);
    if (const char* env = std::getenv("GBDEER_LOG"))
    {
        const std::string_view v = env;
        if (v == "info")
        {
            spdlog::set_level(spdlog::level::info);
        }
        else if (v == "debug")
        {
            spdlog::set_level(spdlog::level::debug);
        }
    }
}

}  // namespace

int main(int argc, char** argv)
{
    setup_logging();
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    return gbdeer::cli::main_entry(argc, argv, &g_interrupted);
}
