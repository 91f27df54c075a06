#include "bellchain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bellchain/errors.hpp"

namespace bellchain {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

} // namespace

void write_state_file(const std::string& path, const PureState& state) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open state file for writing: " + path);
    out << "{\n";
    out << "  \"sites\": " << state.sites << ",\n";
    out << "  \"local_dim\": " << state.local_dim << ",\n";
    out << "  \"amplitudes\": [\n";
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        out << "    [" << fmt("%.16e", state.amplitudes[i].real()) << ", "
            << fmt("%.16e", state.amplitudes[i].imag()) << "]";
        if (i + 1 < state.amplitudes.size()) out << ",";
        out << "\n";
    }
    out << "  ]\n";
    out << "}\n";
    if (!out) throw ValidationError("failed while writing state file: " + path);
}

PureState read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open state file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed state file " + path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("sites") || !j.contains("local_dim") || !j.contains("amplitudes"))
        throw ValidationError("state file " + path + " must contain sites, local_dim, amplitudes");

    PureState state;
    try {
        state.sites = j.at("sites").get<int>();
        state.local_dim = j.at("local_dim").get<int>();
        const auto& amps = j.at("amplitudes");
        if (!amps.is_array())
            throw ValidationError("state file amplitudes must be an array of [re, im] pairs");
        state.amplitudes = CVec<double>::Zero(static_cast<Eigen::Index>(amps.size()));
        Eigen::Index i = 0;
        for (const auto& pair : amps) {
            if (!pair.is_array() || pair.size() != 2)
                throw ValidationError("state file amplitudes must be an array of [re, im] pairs");
            state.amplitudes[i++] = {pair.at(0).get<double>(), pair.at(1).get<double>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed state file " + path + ": " + e.what());
    }

    if (state.local_dim < 2) throw ValidationError("state file local_dim must be at least 2");
    if (state.sites < 1) throw ValidationError("state file sites must be positive");
    Eigen::Index expect = 1;
    for (int s = 0; s < state.sites; ++s) {
        expect *= state.local_dim;
        if (expect > (Eigen::Index{1} << 26))
            throw ValidationError("state file dimension is too large");
    }
    if (state.amplitudes.size() != expect)
        throw ValidationError("state file amplitude count does not match local_dim^sites");
    const double n2 = state.amplitudes.squaredNorm();
    if (!(n2 > 1e-12) || !std::isfinite(n2))
        throw ValidationError("state file amplitudes have (near-)zero norm");
    return state;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "channel_id,O,Sx,Sy,Sz,w_mm,w_mp,w_pm,w_pp,F_min,F_mean,bound\n";
    for (const auto& r : records) {
        out << r.channel_id;
        const double cols[] = {r.o.value, r.o.x, r.o.y, r.o.z,
                               r.weights.w[0], r.weights.w[1], r.weights.w[2], r.weights.w[3],
                               r.fidelity_min, r.fidelity_mean, r.bound};
        for (double v : cols) out << "," << fmt("%.12e", v);
        out << "\n";
    }
}

} // namespace bellchain
