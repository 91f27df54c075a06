#include "bellchain/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellchain/bell.hpp"
#include "bellchain/channels.hpp"
#include "bellchain/eigensolver.hpp"
#include "bellchain/errors.hpp"
#include "bellchain/io.hpp"
#include "bellchain/qudit.hpp"
#include "bellchain/rng.hpp"
#include "bellchain/teleport.hpp"

namespace bellchain {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string e12(double v) { return fmt("%.12e", v); }

double parse_double(const std::string& tok) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw UsageError("trailing characters in number: " + tok);
        return v;
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("cannot parse number: " + tok);
    }
}

std::complex<double> parse_complex(const std::string& tok) {
    static const std::regex re(R"(^([+-]?[0-9][0-9.]*(?:[eE][+-]?[0-9]+)?)([+-][0-9][0-9.]*(?:[eE][+-]?[0-9]+)?)i$)");
    std::smatch m;
    if (!std::regex_match(tok, m, re))
        throw UsageError("cannot parse complex amplitude (expected re+imi): " + tok);
    return {parse_double(m[1].str()), parse_double(m[2].str())};
}

SpinChainModel model_from_config(const CommandConfig& cfg) {
    SpinChainModel model;
    if (cfg.model == "heisenberg" || cfg.model == "heisenberg_nnn")
        model.kind = ModelKind::heisenberg_nnn;
    else if (cfg.model == "ising" || cfg.model == "ising_af")
        model.kind = ModelKind::ising_af;
    else if (cfg.model == "aklt")
        model.kind = ModelKind::aklt;
    else
        throw UsageError("unknown model '" + cfg.model + "' (expected heisenberg, ising, or aklt)");
    model.sites = cfg.sites;
    model.beta = cfg.beta;
    model.alpha = cfg.alpha;
    if (cfg.boundary == "periodic")
        model.boundary = Boundary::periodic;
    else if (cfg.boundary == "open")
        model.boundary = Boundary::open;
    else if (cfg.boundary == "half-spin-ends" || cfg.boundary == "open_with_half_spin_ends")
        model.boundary = Boundary::open_with_half_spin_ends;
    else
        throw UsageError("unknown boundary '" + cfg.boundary + "' (expected periodic, open, or half-spin-ends)");
    return model;
}

PureState load_channel(const CommandConfig& cfg, std::ostream& out) {
    if (!cfg.channel_file.empty()) {
        out << "channel: file " << cfg.channel_file << "\n";
        return read_state_file(cfg.channel_file);
    }
    const SpinChainModel model = model_from_config(cfg);
    out << "channel: ground state of model=" << cfg.model << " sites=" << cfg.sites
        << " beta=" << cfg.beta << " boundary=" << cfg.boundary << "\n";
    EigenSet set = lowest_eigenpair(build_hamiltonian(model));
    out << "channel energy = " << e12(set.energy) << " (degeneracy " << set.states.size() << ")\n";
    return set.states.front();
}

BellLabel resolve_subspace(const CommandConfig& cfg, const PureState& channel, std::ostream& out) {
    if (cfg.subspace == "auto") {
        const SubspaceWeights weights = classify(channel);
        const BellLabel label = weights.max_label();
        out << "assumed subspace (auto) = " << to_string(label) << "\n";
        return label;
    }
    const auto parsed = parse_bell_label(cfg.subspace);
    if (!parsed)
        throw UsageError("unknown subspace '" + cfg.subspace + "' (expected ++, +-, -+, --, or auto)");
    out << "assumed subspace = " << to_string(*parsed) << "\n";
    return *parsed;
}

void print_weights(const SubspaceWeights& w, std::ostream& out) {
    static const char* keys[] = {"--", "-+", "+-", "++"};
    for (int i = 0; i < 4; ++i) out << "w[" << keys[i] << "] = " << e12(w.w[static_cast<std::size_t>(i)]) << "\n";
}

std::string outcome_string(const LabelVector& outcomes) {
    std::string s;
    for (const auto& l : outcomes) s += to_string(l);
    return s;
}

int run_ground_state(const CommandConfig& cfg, std::ostream& out) {
    if (cfg.out_path.empty()) throw UsageError("ground-state requires --out for the state file");
    const SpinChainModel model = model_from_config(cfg);
    const EigenSet set = lowest_eigenpair(build_hamiltonian(model));
    out << "model = " << cfg.model << ", sites = " << cfg.sites << ", beta = " << cfg.beta
        << ", alpha = " << cfg.alpha << ", boundary = " << cfg.boundary << "\n";
    out << "energy = " << e12(set.energy) << "\n";
    out << "degeneracy = " << set.states.size() << "\n";
    out << "max_residual = " << e12(set.max_residual) << "\n";
    write_state_file(cfg.out_path, set.states.front());
    out << "state file written: " << cfg.out_path << "\n";
    return 0;
}

int run_classify(const CommandConfig& cfg, std::ostream& out) {
    if (cfg.channel_file.empty()) throw UsageError("classify requires --channel with a state file");
    const PureState state = read_state_file(cfg.channel_file);
    out << "sites = " << state.sites << ", local_dim = " << state.local_dim << "\n";
    const SubspaceWeights weights = classify(state);
    print_weights(weights, out);
    const OParameter o = o_parameter(state);
    out << "Sx = " << e12(o.x) << "\n";
    out << "Sy = " << e12(o.y) << "\n";
    out << "Sz = " << e12(o.z) << "\n";
    out << "O = " << e12(o.value) << "\n";
    out << "fidelity bound (O-1)/2 = " << e12(fidelity_bound(o)) << "\n";
    return 0;
}

int run_teleport(const CommandConfig& cfg, std::ostream& out) {
    const PureState channel = load_channel(cfg, out);
    const PureState target = parse_target(cfg.target_spec);
    out << "target spec = " << cfg.target_spec << "\n";
    const SubspaceWeights weights = classify(channel);
    print_weights(weights, out);
    const OParameter o = o_parameter(channel);
    out << "O = " << e12(o.value) << ", bound = " << e12(fidelity_bound(o)) << "\n";
    const BellLabel assumed = resolve_subspace(cfg, channel, out);

    const int pairs = channel.sites / 2;
    if (pairs <= 3) {
        const int n_branches = 1 << (2 * pairs);
        out << "branch table (" << n_branches << " branches):\n";
        out << "outcomes  probability      correction  fidelity\n";
        double total_p = 0.0;
        for (int code = 0; code < n_branches; ++code) {
            LabelVector outcomes(static_cast<std::size_t>(pairs));
            int rem = code;
            for (int k = 0; k < pairs; ++k) {
                outcomes[static_cast<std::size_t>(k)] = bell_label_from_index(rem % 4);
                rem /= 4;
            }
            const TeleportOutcome rec = teleport_branch(channel, target, outcomes, assumed);
            total_p += rec.probability;
            out << outcome_string(rec.outcomes) << "  " << e12(rec.probability) << "  "
                << to_string(rec.applied_correction) << "         "
                << (rec.fidelity_defined ? e12(rec.fidelity) : std::string("undefined (p ~ 0)")) << "\n";
        }
        out << "sum of branch probabilities = " << e12(total_p) << "\n";
    } else {
        out << "sampled outcomes (" << cfg.trials << " trials):\n";
        RngStream rng(cfg.seed);
        for (int t = 0; t < cfg.trials; ++t) {
            const TeleportOutcome rec = teleport_sample(channel, target, assumed, rng);
            out << outcome_string(rec.outcomes) << "  p = " << e12(rec.probability) << "  "
                << to_string(rec.applied_correction) << "  F = "
                << (rec.fidelity_defined ? e12(rec.fidelity) : std::string("undefined")) << "\n";
        }
    }
    return 0;
}

int run_sweep(const CommandConfig& cfg, std::ostream& out) {
    if (cfg.out_path.empty()) throw UsageError("sweep requires --out for the CSV file");
    if (cfg.channels < 0) throw UsageError("--channels must be non-negative");
    const std::vector<SweepRecord> records =
        sweep_experiment(cfg.channels, cfg.sites, cfg.seed,
                         cfg.sampler == "haar" ? SamplerKind::haar : SamplerKind::biased);
    std::ofstream csv(cfg.out_path);
    if (!csv) throw ValidationError("cannot open CSV file for writing: " + cfg.out_path);
    write_sweep_csv(csv, records);
    int violations = 0;
    for (const auto& r : records)
        if (r.fidelity_min < r.bound - 1e-9) ++violations;
    out << "channels = " << cfg.channels << ", sites = " << cfg.sites << ", sampler = " << cfg.sampler << "\n";
    out << "bound violations (F_min < (O-1)/2 - 1e-9): " << violations << "\n";
    out << "csv written: " << cfg.out_path << "\n";
    return 0;
}

int run_qudit_demo(const CommandConfig& cfg, std::ostream& out) {
    const int N = cfg.local_dim;
    if (N < 2) throw UsageError("--local-dim must be at least 2");
    RngStream rng(cfg.seed);
    const PureState target = random_haar_state(N, rng, N, 1);
    out << "local_dim = " << N << ", random target from seed\n";
    out << "branch fidelity table: rows = channel (A,B), columns = outcome (A',B')\n";
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            const PureState channel = nbell_state(N, {a, b});
            out << "(" << a << "," << b << ")";
            double total_p = 0.0;
            for (int ap = 0; ap < N; ++ap)
                for (int bp = 0; bp < N; ++bp) {
                    const QuditTeleportOutcome rec =
                        qudit_teleport_branch(channel, target, {{ap, bp}}, {a, b});
                    total_p += rec.probability;
                    out << "  " << fmt("%.6f", rec.fidelity);
                }
            out << "  (sum p = " << fmt("%.6f", total_p) << ")\n";
        }
    return 0;
}

int run_cluster_check(const CommandConfig& cfg, std::ostream& out) {
    const PureState cluster = cluster_state(cfg.sites);
    out << "cluster state, L = " << cfg.sites << "\n";
    out << "weights before mapping:\n";
    print_weights(classify(cluster), out);
    const ClusterMapping mapping = cluster_to_bell_subspace(cfg.sites);
    out << "weights after per-site unitary mapping:\n";
    print_weights(classify(mapping.mapped), out);
    return 0;
}

} // namespace

PureState parse_target(const std::string& spec) {
    const std::size_t comma = spec.find(',');
    if (comma == std::string::npos || spec.find(',', comma + 1) != std::string::npos)
        throw UsageError("target spec must be 'theta,phi' or 're+imi,re+imi': " + spec);
    const std::string first = spec.substr(0, comma);
    const std::string second = spec.substr(comma + 1);
    if (first.empty() || second.empty())
        throw UsageError("target spec must be 'theta,phi' or 're+imi,re+imi': " + spec);

    PureState target;
    target.local_dim = 2;
    target.sites = 1;
    target.amplitudes = CVec<double>::Zero(2);
    if (spec.find('i') != std::string::npos) {
        target.amplitudes[0] = parse_complex(first);
        target.amplitudes[1] = parse_complex(second);
        if (target.amplitudes.norm() < 1e-12)
            throw UsageError("target amplitudes are (near-)zero: " + spec);
        target.amplitudes.normalize();
    } else {
        const double theta = parse_double(first);
        const double phi = parse_double(second);
        target.amplitudes[0] = std::cos(theta / 2.0);
        target.amplitudes[1] = std::polar(std::sin(theta / 2.0), phi);
    }
    return target;
}

int run(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        out << "# bellchain " << cfg.subcommand << " (seed = " << cfg.seed << ")\n";
        if (cfg.subcommand == "ground-state") return run_ground_state(cfg, out);
        if (cfg.subcommand == "classify") return run_classify(cfg, out);
        if (cfg.subcommand == "teleport") return run_teleport(cfg, out);
        if (cfg.subcommand == "sweep") return run_sweep(cfg, out);
        if (cfg.subcommand == "qudit-demo") return run_qudit_demo(cfg, out);
        if (cfg.subcommand == "cluster-check") return run_cluster_check(cfg, out);
        throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bell-subspace classification and teleportation on spin chains"};
    app.require_subcommand(1);
    CommandConfig cfg;

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"ground-state", "diagonalize a spin-chain model and write its ground state"},
        {"classify", "print Bell-subspace weights and string expectations of a state file"},
        {"teleport", "run teleportation through a channel and print the branch table"},
        {"sweep", "generate the random-channel fidelity/O dataset as CSV"},
        {"qudit-demo", "print the qudit branch fidelity table for all N-Bell channels"},
        {"cluster-check", "classify a cluster state before and after local-unitary mapping"},
    };
    for (const auto& [name, desc] : subs) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--model", cfg.model, "heisenberg | ising | aklt");
        sub->add_option("--sites", cfg.sites, "number of chain sites");
        sub->add_option("--beta", cfg.beta, "next-nearest-neighbour coupling");
        sub->add_option("--alpha", cfg.alpha, "biquadratic coupling");
        sub->add_option("--boundary", cfg.boundary, "periodic | open | half-spin-ends");
        sub->add_option("--channel", cfg.channel_file, "state file to use as channel/input");
        sub->add_option("--target", cfg.target_spec, "'theta,phi' or 're+imi,re+imi'");
        sub->add_option("--subspace", cfg.subspace, "++ | +- | -+ | -- | auto");
        sub->add_option("--channels", cfg.channels, "number of sweep channels");
        sub->add_option("--trials", cfg.trials, "number of sampled teleport trials");
        sub->add_option("--seed", cfg.seed, "RNG seed (printed in output headers)");
        sub->add_option("--sampler", cfg.sampler, "haar | biased");
        sub->add_option("--local-dim", cfg.local_dim, "qudit dimension N");
        sub->add_option("--out", cfg.out_path, "output file path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.sampler != "haar" && cfg.sampler != "biased") {
        err << "usage error: unknown sampler '" << cfg.sampler << "' (expected haar or biased)\n";
        return 1;
    }
    return run(cfg, out, err);
}

} // namespace bellchain
