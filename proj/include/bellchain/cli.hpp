#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "bellchain/qstate.hpp"

namespace bellchain {

struct CommandConfig {
    std::string subcommand; // ground-state | classify | teleport | sweep | qudit-demo | cluster-check
    std::string model = "heisenberg";  // heisenberg | ising | aklt
    int sites = 4;
    double beta = 0.0;
    double alpha = 1.0 / 3.0;
    std::string boundary = "periodic"; // periodic | open | half-spin-ends
    std::string channel_file;          // state file used as the channel / classify input
    std::string target_spec = "0,0";
    std::string subspace = "auto";     // ++ | +- | -+ | -- | auto
    int channels = 100;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string sampler = "biased";    // haar | biased
    int local_dim = 3;
    std::string out_path;
};

// `theta,phi` Bloch angles in radians, or two complex amplitudes
// `re+imi,re+imi` (normalized). Malformed specs raise UsageError.
PureState parse_target(const std::string& spec);

// Executes a parsed config. Returns 0 on success, 1 on usage errors, 2 on
// validation/numeric errors; error text goes to `err`.
int run(const CommandConfig& config, std::ostream& out, std::ostream& err);

// argv front end: parses flags into a CommandConfig and dispatches to run().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bellchain
