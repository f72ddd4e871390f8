#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace landau {

// Exit contract shared by all subcommands.
inline constexpr int kExitOk = 0;            // all enabled checks pass
inline constexpr int kExitCheckFailure = 2;  // a named check failed
inline constexpr int kExitInputError = 3;    // config / snapshot / option errors
inline constexpr int kExitNumericalAbort = 4;  // CFL breach or non-finite state

struct SimulateOptions {
    std::filesystem::path config;
    std::optional<std::string> out_dir;  // overrides output.dir from the config
};

struct AnalyzeOptions {
    std::filesystem::path snapshot;
    std::optional<double> gamma;  // overrides the snapshot header value
    bool pairwise = false;        // pairwise dissipation functionals (n <= 24)
    bool brute_force = false;     // compare against the reference pair loop
    bool coercivity = false;      // coercivity scan + inequality margins
};

struct Gamma2Options {
    int max_degree = 6;
    int seeds = 20;
    int steps = 60;
    std::uint64_t seed = 12345;
    int n_theta = 24;   // descent-probe resolution
    int n_phi = 48;
    int lin_n_theta = 48;  // eigenfunction linearization resolution
    int lin_n_phi = 96;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out);
int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out);
int cmd_gamma2(const Gamma2Options& opt, std::ostream& out);
int cmd_selftest(std::ostream& out);

// Parses argv, dispatches, and maps exceptions onto the exit contract.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace landau
