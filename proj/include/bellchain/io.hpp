#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bellchain/qstate.hpp"
#include "bellchain/teleport.hpp"

namespace bellchain {

// JSON state file: {"sites": …, "local_dim": …, "amplitudes": [[re, im], …]}
// with amplitudes in basis order and 16 significant digits.
void write_state_file(const std::string& path, const PureState& state);
PureState read_state_file(const std::string& path);

// Header: channel_id,O,Sx,Sy,Sz,w_mm,w_mp,w_pm,w_pp,F_min,F_mean,bound
// One row per record in channel_id order, 12 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

} // namespace bellchain
