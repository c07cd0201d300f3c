#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aqs/chained_cipher.hpp"
#include "aqs/forgery.hpp"
#include "aqs/protocol.hpp"
#include "aqs/serialize.hpp"
#include "aqs/state_vector.hpp"

namespace {

constexpr int kExitAccepted = 0;
constexpr int kExitRejected = 2;
constexpr int kExitForgeryAccepted = 3;
constexpr int kExitUsage = 4;

struct CommonOptions {
    int n = 0;
    std::uint64_t seed = 0;
    std::string mode = "exact";
    int reps = 20;
    std::string out;
};

aqs::Comparator comparator_of(const CommonOptions& opts) {
    return aqs::Comparator{aqs::comparator_mode_from_string(opts.mode), opts.reps};
}

/// Without --out the document goes to stdout; with it, the document goes to
/// the file and stdout gets a one-line summary.
void emit(const aqs::OrderedJson& doc, const std::string& out, const std::string& summary) {
    if (out.empty()) {
        aqs::write_document(doc, "-");
        return;
    }
    aqs::write_document(doc, out);
    std::cout << summary << '\n' << "wrote " << out << '\n';
}

int handle_honest(const CommonOptions& opts, const std::string& message_text, bool n_given) {
    int n = opts.n;
    std::optional<aqs::MessageSpec> message;
    if (message_text != "random") {
        message = aqs::MessageSpec::parse(message_text);
        if (!n_given) {
            n = message->size();
        }
    }
    const aqs::ProtocolTranscript t = aqs::run_honest(n, message, comparator_of(opts), opts.seed);

    std::string summary = "honest-run n=" + std::to_string(t.n) + " seed=" +
                          std::to_string(t.seed) + " mode=" + opts.mode + ": " +
                          (t.verdict.accepted ? "accepted" : "rejected") +
                          " (v=" + std::to_string(t.verdict.v_bit) +
                          ", reason=" + std::string(aqs::to_string(t.verdict.reason));
    if (t.final_fidelity >= 0.0) {
        summary += ", final_fidelity=" + aqs::format_g17(t.final_fidelity);
    }
    summary += ")";

    emit(aqs::json_of(t), opts.out, summary);
    return t.verdict.accepted ? kExitAccepted : kExitRejected;
}

int handle_forge(const CommonOptions& opts, std::size_t trials, bool exhaustive) {
    const aqs::Comparator cmp = comparator_of(opts);
    const aqs::AttackReport report = exhaustive
                                         ? aqs::run_forgery_exhaustive(opts.n, cmp, opts.seed)
                                         : aqs::run_forgery(opts.n, trials, cmp, opts.seed);

    const std::string summary =
        "forge n=" + std::to_string(report.n) + " trials=" + std::to_string(report.trials) +
        " accepted=" + std::to_string(report.accepted) +
        " rate=" + aqs::format_g17(report.acceptance_rate()) + ": " +
        (report.attack_demonstrated() ? "attack demonstrated" : "attack incomplete");

    emit(aqs::json_of(report), opts.out, summary);
    return report.attack_demonstrated() ? kExitForgeryAccepted : kExitRejected;
}

int handle_cipher_check(const CommonOptions& opts, std::size_t trials, bool exhaustive) {
    const int n = opts.n;
    aqs::Rng rng(opts.seed);

    double max_infidelity = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const aqs::PermutationKey key = aqs::PermutationKey::random(n, rng);
        const aqs::StateVector state = aqs::MessageSpec::random(n, rng).to_state();
        const double fid = aqs::fidelity(aqs::decrypt(aqs::encrypt(state, key), key), state);
        max_infidelity = std::max(max_infidelity, 1.0 - fid);
    }
    const bool roundtrip_pass = max_infidelity <= 1e-10;

    const int oracle_keys = 20;
    const std::size_t basis_count = std::size_t{1} << n;
    std::size_t mismatches = 0;
    for (int k = 0; k < oracle_keys; ++k) {
        const aqs::PermutationKey key = aqs::PermutationKey::random(n, rng);
        const aqs::Gf2Matrix m = aqs::gf2_matrix(key);
        for (std::size_t x = 0; x < basis_count; ++x) {
            aqs::Bits bits(static_cast<std::size_t>(n), 0);
            for (int q = 1; q <= n; ++q) {
                bits[static_cast<std::size_t>(q - 1)] = static_cast<int>((x >> (n - q)) & 1u);
            }
            const aqs::StateVector actual = aqs::encrypt(aqs::basis_state(n, bits), key);
            const aqs::StateVector expected = aqs::basis_state(n, aqs::gf2_apply(m, bits));
            // CNOT only permutes amplitudes, so basis states must map exactly.
            if (aqs::fidelity(actual, expected) != 1.0) {
                ++mismatches;
            }
        }
    }
    const bool oracle_pass = mismatches == 0;

    const aqs::FixedPointCensus census =
        exhaustive ? aqs::census_all_keys(n)
                   : aqs::explain_fixed_points(
                         n, static_cast<int>(std::min<std::size_t>(trials, 20)), rng);
    const aqs::StateVector zeros(n);
    double max_amp_error = 0.0;
    for (const aqs::KeyCensusEntry& entry : census.entries) {
        const aqs::StateVector image = aqs::encrypt(zeros, entry.key);
        for (std::size_t i = 0; i < image.dim(); ++i) {
            const aqs::Complex want = i == 0 ? aqs::Complex(1.0, 0.0) : aqs::Complex(0.0, 0.0);
            max_amp_error = std::max(max_amp_error, std::abs(image.amplitude(i) - want));
        }
    }
    const bool fixed_pass = max_amp_error < 1e-12 && census.all_zeros_universal;

    const bool all_pass = roundtrip_pass && oracle_pass && fixed_pass;

    aqs::OrderedJson checks = aqs::OrderedJson::array();
    checks.push_back({{"name", "roundtrip"},
                      {"trials", trials},
                      {"max_infidelity", max_infidelity},
                      {"pass", roundtrip_pass}});
    checks.push_back({{"name", "gf2-oracle"},
                      {"keys", oracle_keys},
                      {"basis_states", basis_count},
                      {"mismatches", mismatches},
                      {"pass", oracle_pass}});
    checks.push_back({{"name", "fixed-point"},
                      {"keys", census.entries.size()},
                      {"exhaustive", census.exhaustive},
                      {"max_amplitude_error", max_amp_error},
                      {"all_zeros_universal", census.all_zeros_universal},
                      {"pass", fixed_pass}});

    const aqs::OrderedJson doc{{"schema_version", 1},
                               {"kind", "cipher-check"},
                               {"n", n},
                               {"seed", opts.seed},
                               {"mode", opts.mode},
                               {"trials", trials},
                               {"checks", std::move(checks)},
                               {"census", aqs::json_of(census)},
                               {"verdict", all_pass ? "pass" : "fail"}};

    const std::string summary =
        "cipher-check n=" + std::to_string(n) + " keys=" + std::to_string(census.entries.size()) +
        (census.exhaustive ? " (exhaustive)" : "") + ": " + (all_pass ? "pass" : "fail");

    emit(doc, opts.out, summary);
    return all_pass ? kExitAccepted : kExitRejected;
}

int handle_arbitrate(const CommonOptions& opts, const std::string& claim_path) {
    std::ifstream in(claim_path);
    if (!in) {
        throw aqs::IoError("cannot open claim file '" + claim_path + "'");
    }
    const nlohmann::json claim = nlohmann::json::parse(in);

    const int n = claim.at("n").get<int>();
    const aqs::PermutationKey k_a = aqs::key_from_json(claim.at("k_a"));
    const aqs::PermutationKey k_r = aqs::key_from_json(claim.at("k_r"));
    const aqs::StateVector s_claim = aqs::state_from_json(claim.at("s_claim"));
    const aqs::StateVector p_claim = aqs::state_from_json(claim.at("p_claim"));
    if (k_a.size() != n) {
        throw aqs::KeyError("claim field k_a does not match n");
    }

    // Arbitration only touches K_A; the Bob-side material is inert filler.
    const aqs::PartyKeys keys(k_a, aqs::PermutationKey::identity(2 * n + 1),
                              aqs::Bits(static_cast<std::size_t>(2 * n), 0));
    aqs::Rng rng(opts.seed);
    const aqs::ArbitrationRecord rec =
        aqs::trent_arbitrate(s_claim, k_r, p_claim, keys, comparator_of(opts), rng);

    const aqs::OrderedJson doc{{"schema_version", 1},
                               {"kind", "arbitration"},
                               {"n", n},
                               {"seed", opts.seed},
                               {"mode", opts.mode},
                               {"swap_reps", opts.reps},
                               {"fidelity_st_sclaim", rec.fidelity_st_sclaim},
                               {"verdict", std::string(aqs::to_string(rec.result))}};

    const std::string summary = "arbitrate n=" + std::to_string(n) + " mode=" + opts.mode +
                                ": " + std::string(aqs::to_string(rec.result)) +
                                " (fidelity=" + aqs::format_g17(rec.fidelity_st_sclaim) + ")";

    emit(doc, opts.out, summary);
    return rec.result == aqs::ArbitrationResult::Valid ? kExitAccepted : kExitRejected;
}

void add_mode_options(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--seed", opts.seed, "64-bit RNG seed")->capture_default_str();
    cmd->add_option("--mode", opts.mode, "state comparator")
        ->check(CLI::IsMember({"exact", "swap"}))
        ->capture_default_str();
    cmd->add_option("--reps", opts.reps, "swap-test repetitions per comparison")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", opts.out,
                    "write the JSON document to this path (stdout gets a summary)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chained-CNOT arbitrated quantum signature simulator"};
    app.require_subcommand(1);

    CommonOptions honest_opts;
    honest_opts.n = 3;
    std::string message_text = "random";
    CLI::App* honest =
        app.add_subcommand("honest-run", "run the full signing and verification pipeline");
    CLI::Option* honest_n = honest->add_option("--n", honest_opts.n, "message size in qubits")
                                ->check(CLI::Range(1, 8))
                                ->capture_default_str();
    add_mode_options(honest, honest_opts);
    honest->add_option("--message", message_text,
                       "product message \"a_re,a_im,b_re,b_im;...\" or \"random\"")
        ->capture_default_str();

    CommonOptions forge_opts;
    forge_opts.n = 4;
    std::size_t forge_trials = 100;
    bool forge_exhaustive = false;
    CLI::App* forge =
        app.add_subcommand("forge", "submit all-zeros forged claims to the arbiter");
    forge->add_option("--n", forge_opts.n, "message size in qubits")
        ->check(CLI::Range(1, 24))
        ->capture_default_str();
    add_mode_options(forge, forge_opts);
    forge->add_option("--trials", forge_trials, "independent forgery attempts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    forge->add_flag("--exhaustive-keys", forge_exhaustive,
                    "try every (K_A, K_R) permutation pair instead of sampling (n <= 6)");

    CommonOptions cipher_opts;
    cipher_opts.n = 4;
    std::size_t cipher_trials = 100;
    bool cipher_exhaustive = false;
    CLI::App* cipher =
        app.add_subcommand("cipher-check", "roundtrip, GF(2) oracle and fixed-point self-tests");
    cipher->add_option("--n", cipher_opts.n, "cipher width in qubits")
        ->check(CLI::Range(1, 12))
        ->capture_default_str();
    add_mode_options(cipher, cipher_opts);
    cipher->add_option("--trials", cipher_trials, "random roundtrip trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cipher->add_flag("--exhaustive-keys", cipher_exhaustive,
                     "survey every key in the fixed-point check (n <= 6)");

    CommonOptions arb_opts;
    std::string claim_path;
    CLI::App* arbitrate =
        app.add_subcommand("arbitrate", "run Trent's dispute resolution on a serialized claim");
    arbitrate->add_option("claim", claim_path, "claim JSON file with n, k_a, k_r, s_claim, p_claim")
        ->required();
    add_mode_options(arbitrate, arb_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (honest->parsed()) {
            return handle_honest(honest_opts, message_text, honest_n->count() > 0);
        }
        if (forge->parsed()) {
            return handle_forge(forge_opts, forge_trials, forge_exhaustive);
        }
        if (cipher->parsed()) {
            return handle_cipher_check(cipher_opts, cipher_trials, cipher_exhaustive);
        }
        if (arbitrate->parsed()) {
            return handle_arbitrate(arb_opts, claim_path);
        }
    } catch (const aqs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
