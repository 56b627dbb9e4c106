// Command line front end: run a scenario, verify a ledger dump, replay a
// complaint audit, or recompute metrics from a dump.
//
// Exit codes: 0 ok, 2 configuration error, 3 integrity failure.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "telechain/harness.hpp"

namespace fs = std::filesystem;
using namespace telechain;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kIntegrityFailure = 3;

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir) {
    ScenarioConfig sc = load_scenario(scenario_path);
    if (seed) sc.seed = *seed;
    RunArtifacts artifacts = run_scenario(sc, out_dir);
    std::cout << "scenario " << sc.name << ": " << artifacts.blocks.size() << " blocks, "
              << artifacts.trace.size() << " trace rows, " << artifacts.verdicts.size()
              << " complaints audited\n";
    if (!artifacts.rejections.empty())
        std::cout << artifacts.rejections.size() << " proposals rejected (see run log)\n";
    std::cout << "artifacts written to " << out_dir << "\n";
    return kOk;
}

int cmd_verify(const std::string& out_dir) {
    auto blocks = read_ledger_file(fs::path(out_dir) / "ledger.bin");
    if (auto bad = verify_chain(blocks)) {
        std::cout << "chain integrity FAILED at height " << *bad << "\n";
        return kIntegrityFailure;
    }
    std::cout << "chain ok: " << blocks.size() << " blocks\n";
    return kOk;
}

int cmd_replay(const std::string& out_dir, const std::string& complaint_id,
               const std::string& scenario_path) {
    NetworkConfig config;
    if (!scenario_path.empty()) config = load_scenario(scenario_path).network;

    fs::path dir(out_dir);
    auto blocks = read_ledger_file(dir / "ledger.bin");
    if (auto bad = verify_chain(blocks)) {
        std::cout << "chain integrity FAILED at height " << *bad << "\n";
        return kIntegrityFailure;
    }
    auto genesis = load_genesis(dir / "genesis.txt");
    auto trace = read_trace_csv(dir / "trace.csv");

    WorldState tip = reconstruct_state(genesis, blocks,
                                       blocks.empty() ? 0 : blocks.back().height);
    auto raw = tip.get(keys::complaint(complaint_id));
    if (!raw) {
        std::cerr << "complaint not found: " << complaint_id << "\n";
        return kConfigError;
    }
    ComplaintRecord complaint = ComplaintRecord::decode(raw->value);

    try {
        AuditResult r = replay_audit(config, genesis, blocks, trace, complaint);
        const char* verdict = "pending";
        switch (r.verdict) {
            case Verdict::Violation: verdict = "violation"; break;
            case Verdict::Compliant: verdict = "compliant"; break;
            case Verdict::UnregisteredSender: verdict = "unregistered_sender"; break;
            case Verdict::Pending: break;
        }
        std::cout << complaint_id << ": " << verdict;
        if (!r.matched_campaign.empty()) std::cout << " campaign=" << r.matched_campaign;
        if (!r.culprit_operator.empty()) std::cout << " operator=" << r.culprit_operator;
        if (!r.notes.empty()) std::cout << " (" << r.notes << ")";
        std::cout << "\n";
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InsufficientEvidence) {
            std::cout << complaint_id << ": insufficient evidence\n";
            return kOk;
        }
        throw;
    }
    return kOk;
}

int cmd_metrics(const std::string& out_dir, const std::string& scenario_path) {
    NetworkConfig config;
    if (!scenario_path.empty()) config = load_scenario(scenario_path).network;

    fs::path dir(out_dir);
    auto blocks = read_ledger_file(dir / "ledger.bin");
    if (auto bad = verify_chain(blocks)) {
        std::cout << "chain integrity FAILED at height " << *bad << "\n";
        return kIntegrityFailure;
    }
    std::vector<TraceRow> trace;
    if (fs::exists(dir / "trace.csv")) trace = read_trace_csv(dir / "trace.csv");
    std::map<std::uint64_t, std::uint64_t> volumes;
    if (fs::exists(dir / "volumes.csv")) volumes = read_volumes_csv(dir / "volumes.csv");

    MetricsReport report;
    report.scrub_rates = compute_scrub_success_rate(blocks, trace);
    report.complaint_rates = compute_complaints_per_million(config, blocks, volumes);
    report.preference_latency = compute_preference_latency(blocks);
    report.registrations = compute_registrations(blocks);
    emit_reports(report, dir);
    std::cout << "metrics recomputed into " << out_dir << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"consortium ledger simulator for commercial SMS compliance"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string complaint_id;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "run a scenario end to end");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "verify chain integrity of a ledger dump");
    verify->add_option("--out", out_dir, "directory holding ledger.bin");

    auto* replay = app.add_subcommand("replay", "replay-audit a committed complaint");
    replay->add_option("--out", out_dir, "directory holding run artifacts");
    replay->add_option("--complaint", complaint_id, "complaint id")->required();
    replay->add_option("--scenario", scenario_path, "scenario JSON (for network parameters)");

    auto* metrics = app.add_subcommand("metrics", "recompute metric CSVs from a dump");
    metrics->add_option("--out", out_dir, "directory holding run artifacts");
    metrics->add_option("--scenario", scenario_path, "scenario JSON (for network parameters)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, seed, out_dir);
        if (verify->parsed()) return cmd_verify(out_dir);
        if (replay->parsed()) return cmd_replay(out_dir, complaint_id, scenario_path);
        if (metrics->parsed()) return cmd_metrics(out_dir, scenario_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::ConfigInvalid:
            case ErrorCode::IoFailure:
                return kConfigError;
            default:
                return kIntegrityFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
