#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <telechain/audit.hpp>
#include <telechain/campaign.hpp>
#include <telechain/metrics.hpp>

#include "testnet.hpp"

using namespace telechain;
using namespace telechain::test;

namespace {

std::vector<std::string> make_numbers(std::size_t n, const std::string& prefix = "98") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::string tail = std::to_string(i);
        out.push_back(prefix + std::string(8 - tail.size(), '0') + tail);
    }
    return out;
}

TemplateRecord make_template(const std::string& header, const std::string& text) {
    TemplateRecord t;
    t.header = header;
    t.text = text;
    t.template_id = TemplateRecord::compute_id(header, text);
    return t;
}

}  // namespace

// ---- campaign leg execution -------------------------------------------

TEST_CASE("campaign leg rejects a message that does not fit its template") {
    NetworkConfig config;
    crypto::DetRng rng(1);
    auto tmpl = make_template("STABAN", "Loan offer <%x%> today.");
    auto keys = test_sign_keys("op-a");
    CHECK_THROWS_WITH(
        execute_campaign_leg(config, "op-a", "camp-1", tmpl, "Something else entirely",
                             {"9800000001"}, 10, 1.0, rng, keys),
        Catch::Matchers::ContainsSubstring("TemplateMismatch"));
    CHECK_NOTHROW(execute_campaign_leg(config, "op-a", "camp-1", tmpl,
                                       "Loan offer ends today.", {"9800000001"}, 10, 1.0,
                                       rng, keys));
}

TEST_CASE("campaign leg only runs inside the delivery window") {
    NetworkConfig config;  // window [9, 21) of a 24-tick day
    crypto::DetRng rng(1);
    auto tmpl = make_template("STABAN", "Loan offer <%x%> today.");
    auto keys = test_sign_keys("op-a");
    auto run = [&](std::uint64_t tick) {
        return execute_campaign_leg(config, "op-a", "camp-1", tmpl,
                                    "Loan offer ends today.", {"9800000001"}, tick, 1.0,
                                    rng, keys);
    };
    CHECK_THROWS_WITH(run(8), Catch::Matchers::ContainsSubstring("OutsideWindow"));
    CHECK_NOTHROW(run(9));
    CHECK_NOTHROW(run(20));
    CHECK_THROWS_WITH(run(21), Catch::Matchers::ContainsSubstring("OutsideWindow"));
    CHECK_THROWS_WITH(run(24 + 3), Catch::Matchers::ContainsSubstring("OutsideWindow"));
    CHECK_NOTHROW(run(24 + 12));
}

TEST_CASE("campaign leg delivery counts follow the seeded coin flips") {
    NetworkConfig config;
    auto tmpl = make_template("STABAN", "Loan offer <%x%> today.");
    auto keys = test_sign_keys("op-a");
    auto numbers = make_numbers(200);

    // oracle: replay the same rng stream by hand
    crypto::DetRng oracle(42);
    std::vector<bool> expected;
    for (std::size_t i = 0; i < numbers.size(); ++i)
        expected.push_back(oracle.unit() < 0.7);

    crypto::DetRng rng(42);
    auto exec = execute_campaign_leg(config, "op-a", "camp-1", tmpl,
                                     "Loan offer ends today.", numbers, 10, 0.7, rng, keys);
    REQUIRE(exec.trace.size() == numbers.size());
    std::uint64_t delivered = 0;
    for (std::size_t i = 0; i < numbers.size(); ++i) {
        CHECK(exec.trace[i].delivered == expected[i]);
        CHECK(exec.trace[i].subscriber ==
              hash_subscriber(numbers[i], config.consortium_key));
        CHECK(exec.trace[i].tick == 10);
        if (expected[i]) ++delivered;
    }
    CHECK(exec.report.attempted == numbers.size());
    CHECK(exec.report.delivered == delivered);
    CHECK(exec.status_args.attempted == exec.report.attempted);
    CHECK(exec.status_args.delivered == exec.report.delivered);
    CHECK(exec.status_args.campaign_id == "camp-1");
    CHECK(exec.status_args.operator_id == "op-a");

    // same seed, same everything
    crypto::DetRng rng2(42);
    auto exec2 = execute_campaign_leg(config, "op-a", "camp-1", tmpl,
                                      "Loan offer ends today.", numbers, 10, 0.7, rng2, keys);
    CHECK(exec2.report.delivered == exec.report.delivered);

    // edge probabilities
    crypto::DetRng rng3(42);
    auto all = execute_campaign_leg(config, "op-a", "camp-1", tmpl,
                                    "Loan offer ends today.", numbers, 10, 1.0, rng3, keys);
    CHECK(all.report.delivered == numbers.size());
    crypto::DetRng rng4(42);
    auto none = execute_campaign_leg(config, "op-a", "camp-1", tmpl,
                                     "Loan offer ends today.", numbers, 10, 0.0, rng4, keys);
    CHECK(none.report.delivered == 0);
}

TEST_CASE("delivery report signature binds the counts") {
    NetworkConfig config;
    crypto::DetRng rng(5);
    auto tmpl = make_template("STABAN", "Loan offer <%x%> today.");
    auto keys = test_sign_keys("op-a");
    auto exec = execute_campaign_leg(config, "op-a", "camp-1", tmpl,
                                     "Loan offer ends today.", make_numbers(10), 10, 1.0,
                                     rng, keys);
    CHECK(crypto::ed25519_verify(keys.public_key, exec.report.signed_message(),
                                 exec.report.signature));
    DeliveryReport forged = exec.report;
    forged.delivered += 1;
    CHECK_FALSE(crypto::ed25519_verify(keys.public_key, forged.signed_message(),
                                       forged.signature));
}

// ---- watch-list escalation --------------------------------------------

TEST_CASE("watch action is a non-decreasing step function of complaints") {
    NetworkConfig config;  // thresholds 10 / 25 / 50
    CHECK(watch_action_for(config, 0) == WatchAction::None);
    CHECK(watch_action_for(config, 9) == WatchAction::None);
    CHECK(watch_action_for(config, 10) == WatchAction::Throttled);
    CHECK(watch_action_for(config, 24) == WatchAction::Throttled);
    CHECK(watch_action_for(config, 25) == WatchAction::Degraded);
    CHECK(watch_action_for(config, 49) == WatchAction::Degraded);
    CHECK(watch_action_for(config, 50) == WatchAction::Terminated);
    CHECK(watch_action_for(config, 5000) == WatchAction::Terminated);

    auto prev = WatchAction::None;
    for (std::uint64_t c = 0; c <= 60; ++c) {
        auto cur = watch_action_for(config, c);
        CHECK(static_cast<int>(cur) >= static_cast<int>(prev));
        prev = cur;
    }
}

TEST_CASE("watchlist updates only on escalation") {
    NetworkConfig config;
    Hash256 line = crypto::sha256(Bytes{'l', 'i', 'n', 'e'});

    auto up = update_watchlist(config, line, 12, WatchAction::None);
    REQUIRE(up);
    CHECK(up->action == WatchAction::Throttled);
    CHECK(up->complaint_count == 12);
    CHECK(up->subscriber == line);

    CHECK_FALSE(update_watchlist(config, line, 12, WatchAction::Throttled));
    CHECK_FALSE(update_watchlist(config, line, 12, WatchAction::Degraded));

    auto skip = update_watchlist(config, line, 55, WatchAction::None);
    REQUIRE(skip);
    CHECK(skip->action == WatchAction::Terminated);

    // terminated is terminal
    CHECK_FALSE(update_watchlist(config, line, 5000, WatchAction::Terminated));
}

TEST_CASE("p2p rate detector flags lines above the daily cap") {
    NetworkConfig config;  // cap 200/day, 24 ticks/day
    std::vector<std::pair<std::string, std::uint64_t>> sends;
    for (int i = 0; i < 200; ++i) sends.emplace_back("9811111111", 5);
    CHECK(detect_utm_rate_violations(config, sends).empty());

    sends.emplace_back("9811111111", 20);  // same day -> 201
    auto v = detect_utm_rate_violations(config, sends);
    REQUIRE(v.size() == 1);
    CHECK(v[0].line == "9811111111");
    CHECK(v[0].day == 0);
    CHECK(v[0].sends == 201);

    // split across two days stays under the cap
    sends.clear();
    for (int i = 0; i < 150; ++i) sends.emplace_back("9822222222", 3);
    for (int i = 0; i < 150; ++i) sends.emplace_back("9822222222", 30);
    CHECK(detect_utm_rate_violations(config, sends).empty());

    // two hot lines, one cold
    sends.clear();
    for (int i = 0; i < 201; ++i) sends.emplace_back("A", 1);
    for (int i = 0; i < 300; ++i) sends.emplace_back("B", 26);
    for (int i = 0; i < 10; ++i) sends.emplace_back("C", 1);
    v = detect_utm_rate_violations(config, sends);
    REQUIRE(v.size() == 2);
}

// ---- end-to-end campaign chain and complaint replay -------------------

namespace {

// A committed chain with one scrubbed and executed campaign on STABAN:
// 100 op-a numbers (92-prefix routing 9198), a handful opted out.
struct CampaignFixture {
    TestNet net;
    Hash256 template_id{};
    std::unique_ptr<Scrubber> scrubber;
    crypto::DetRng rng{321};
    ScrubOutput scrub_out;
    std::vector<std::string> numbers;
    std::vector<std::string> blocked;  // fully-blocked subset
    std::vector<TraceRow> trace;
    std::uint64_t campaign_tick = 0;
    std::string instance = "Loan offer ends today.";

    CampaignFixture() : net(make_basic_net()) {
        net.config.prefix_operators["9198"] = "op-a";
        template_id = register_header_chain(net, "STABAN", "Loan offer <%x%> today.");
        scrubber = std::make_unique<Scrubber>("scrub-1", test_sign_keys("scrub-1"),
                                              net.config);
        numbers = make_numbers(120);
        blocked = {numbers[3], numbers[17], numbers[55]};
        for (const auto& n : blocked) {
            UpdatePreferenceArgs p;
            p.subscriber = net.sub(n);
            p.operator_id = "op-a";
            p.mode = PreferenceMode::FullyBlocked;
            REQUIRE(net.commit("op-a", TxType::UpdatePreference, p.encode()));
        }
        sync();

        ScrubRequest req;
        req.tm_id = "TM-1";
        req.header = "STABAN";
        req.template_id = template_id;
        req.category = "Banking";
        req.numbers = numbers;
        scrub_out = scrubber->scrub(req, net.ref().state(),
                                    roster_from_state(net.ref().state()), rng);
        REQUIRE(net.commit("scrub-1", TxType::ScrubResult, scrub_out.tx_args));

        CampaignInitArgs init;
        init.campaign_id = "camp-1";
        init.token_id = scrub_out.token.token_id;
        init.header = "STABAN";
        init.template_id = template_id;
        REQUIRE(net.commit("TM-1", TxType::CampaignInit, init.encode()));

        auto valid = verify_scrub_token("op-a", scrub_out.token, scrub_out.encrypted_files,
                                        test_enc_keys("op-a").seed, net.ref().state());
        REQUIRE(valid.size() == numbers.size() - blocked.size());

        // run the leg in-window and commit the delivery counts
        while (!net.config.in_delivery_window(net.tick)) net.step();
        auto tmpl = make_template("STABAN", "Loan offer <%x%> today.");
        crypto::DetRng leg_rng(net.tick * 1000 + 7);
        auto exec = execute_campaign_leg(net.config, "op-a", "camp-1", tmpl, instance,
                                         valid, net.tick, 1.0, leg_rng,
                                         test_sign_keys("op-a"));
        trace = exec.trace;
        campaign_tick = net.tick;
        REQUIRE(net.commit("op-a", TxType::CampaignStatus, exec.status_args.encode()));
    }

    void sync() { scrubber->mirror() = MirrorIndex::rescan(net.ref().state()); }

    ComplaintRecord complaint(const std::string& number, const std::string& sender,
                              ComplaintClass cls) const {
        ComplaintRecord c;
        c.complaint_id = "cmpl-x";
        c.subscriber = net.sub(number);
        c.sender = sender;
        c.message_text = instance;
        c.received_tick = campaign_tick;
        c.cls = cls;
        return c;
    }

    AuditResult audit(const ComplaintRecord& c) {
        return replay_audit(net.config, net.genesis, net.ref().ledger(), trace, c);
    }
};

}  // namespace

TEST_CASE_METHOD(CampaignFixture, "a delivery the scrub allowed replays as compliant") {
    auto r = audit(complaint(numbers[0], "VM-STABAN", ComplaintClass::Rtm));
    CHECK(r.verdict == Verdict::Compliant);
    CHECK(r.matched_campaign == "camp-1");
}

TEST_CASE_METHOD(CampaignFixture, "a blocked number with no delivery replays as compliant") {
    auto r = audit(complaint(blocked[0], "VM-STABAN", ComplaintClass::Rtm));
    CHECK(r.verdict == Verdict::Compliant);
    CHECK_THAT(r.notes, Catch::Matchers::ContainsSubstring("scrub excluded"));
}

TEST_CASE_METHOD(CampaignFixture, "a delivery to an opted-out number replays as violation") {
    // forge a delivery trace row for a number the scrub excluded
    TraceRow row;
    row.campaign_id = "camp-1";
    row.operator_id = "op-a";
    row.subscriber = net.sub(blocked[1]);
    row.tick = net.tick;
    row.delivered = true;
    trace.push_back(row);

    auto r = audit(complaint(blocked[1], "VM-STABAN", ComplaintClass::Rtm));
    CHECK(r.verdict == Verdict::Violation);
    CHECK(r.matched_campaign == "camp-1");
    CHECK(r.culprit_operator == "op-a");
    CHECK_THAT(r.notes, Catch::Matchers::ContainsSubstring("not deliverable"));
}

TEST_CASE_METHOD(CampaignFixture,
                 "a delivery outside any candidate campaign replays as violation") {
    TraceRow row;
    row.campaign_id = "ghost-campaign";
    row.operator_id = "op-b";
    row.subscriber = net.sub("9811112222");
    row.tick = net.tick;
    row.delivered = true;
    trace.push_back(row);

    auto r = audit(complaint("9811112222", "VM-STABAN", ComplaintClass::Rtm));
    CHECK(r.verdict == Verdict::Violation);
    CHECK(r.culprit_operator == "op-b");
    CHECK_THAT(r.notes, Catch::Matchers::ContainsSubstring("no candidate campaign"));
}

TEST_CASE_METHOD(CampaignFixture, "utm and unknown-header complaints are routed aside") {
    auto utm = audit(complaint(numbers[0], "9822223333", ComplaintClass::Utm));
    CHECK(utm.verdict == Verdict::UnregisteredSender);

    auto ghost = audit(complaint(numbers[0], "VM-GHOSTX", ComplaintClass::Rtm));
    CHECK(ghost.verdict == Verdict::UnregisteredSender);
    CHECK_THAT(ghost.notes, Catch::Matchers::ContainsSubstring("header not registered"));
}

TEST_CASE_METHOD(CampaignFixture,
                 "replay without deliveries or nearby campaigns refuses a verdict") {
    // push the chain several blocks past the campaign so it falls outside
    // the candidate window around a late complaint
    for (int i = 0; i < 5; ++i) {
        UpdatePreferenceArgs p;
        p.subscriber = net.sub("97000000" + std::to_string(10 + i));
        p.operator_id = "op-a";
        p.mode = PreferenceMode::FullyBlocked;
        REQUIRE(net.commit("op-a", TxType::UpdatePreference, p.encode()));
    }
    auto c = complaint("9833334444", "VM-STABAN", ComplaintClass::Rtm);
    c.received_tick = net.tick + 100;  // reference height lands at the tip
    CHECK_THROWS_WITH(audit(c),
                      Catch::Matchers::ContainsSubstring("InsufficientEvidence"));
}

TEST_CASE_METHOD(CampaignFixture,
                 "deliveries from a different header's campaign do not count") {
    // second campaign on EDUCRS delivering to a subscriber STABAN excluded
    auto edu_tmpl_id = register_header_chain(net, "EDUCRS", "Course <%x%> enrolling.");
    sync();
    auto edu_numbers = make_numbers(110, "97");
    net.config.prefix_operators["9197"] = "op-b";
    std::string shared = blocked[2];
    edu_numbers.push_back(shared);  // also scrub the STABAN-blocked number
    ScrubRequest req;
    req.tm_id = "TM-1";
    req.header = "EDUCRS";
    req.template_id = edu_tmpl_id;
    req.category = "Education";
    req.numbers = edu_numbers;
    sync();
    auto out2 = scrubber->scrub(req, net.ref().state(),
                                roster_from_state(net.ref().state()), rng);
    REQUIRE(net.commit("scrub-1", TxType::ScrubResult, out2.tx_args));
    CampaignInitArgs init;
    init.campaign_id = "camp-2";
    init.token_id = out2.token.token_id;
    init.header = "EDUCRS";
    init.template_id = edu_tmpl_id;
    REQUIRE(net.commit("TM-1", TxType::CampaignInit, init.encode()));

    TraceRow row;  // EDUCRS delivery to the shared subscriber
    row.campaign_id = "camp-2";
    row.operator_id = "op-a";
    row.subscriber = net.sub(shared);
    row.tick = net.tick;
    row.delivered = true;
    trace.push_back(row);

    // the STABAN complaint must ignore the EDUCRS delivery
    auto r = audit(complaint(shared, "VM-STABAN", ComplaintClass::Rtm));
    CHECK(r.verdict == Verdict::Compliant);
    CHECK_THAT(r.notes, Catch::Matchers::ContainsSubstring("scrub excluded"));
}

// ---- metrics -----------------------------------------------------------

TEST_CASE_METHOD(CampaignFixture, "scrub success rate reflects submitted versus delivered") {
    auto rows = compute_scrub_success_rate(net.ref().ledger(), trace);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].campaign_id == "camp-1");
    CHECK(rows[0].submitted == numbers.size());
    std::uint64_t delivered = 0;
    for (const auto& t : trace)
        if (t.delivered) ++delivered;
    CHECK(rows[0].delivered == delivered);
    REQUIRE(rows[0].rate_pct);
    CHECK(*rows[0].rate_pct ==
          Catch::Approx(100.0 * static_cast<double>(delivered) /
                        static_cast<double>(numbers.size())));
    CHECK(*rows[0].rolling_pct == Catch::Approx(*rows[0].rate_pct));
}

namespace {

Transaction synthetic_tx(TxType type, Bytes args, std::uint64_t timestamp,
                         std::vector<WriteEntry> writes = {}) {
    Transaction tx;
    tx.payload.tx_type = type;
    tx.payload.args = std::move(args);
    tx.payload.timestamp = timestamp;
    tx.rwset.writes = std::move(writes);
    return tx;
}

Transaction synthetic_complaint(const std::string& id, ComplaintClass cls,
                                std::uint64_t received_tick) {
    ComplaintFiledArgs args;
    args.complaint_id = id;
    args.received_tick = received_tick;
    ComplaintRecord rec;
    rec.complaint_id = id;
    rec.cls = cls;
    rec.received_tick = received_tick;
    WriteEntry w;
    w.key = "complaint/" + id;
    w.value = rec.encode();
    return synthetic_tx(TxType::ComplaintFiled, args.encode(), received_tick, {w});
}

}  // namespace

TEST_CASE("complaints per million divides window complaints by window traffic") {
    NetworkConfig config;
    std::vector<Block> blocks;
    Block b;
    b.height = 1;

    // 100 million messages in day 0
    CampaignStatusArgs status;
    status.campaign_id = "camp-1";
    status.operator_id = "op-a";
    status.attempted = 100'000'000;
    status.delivered = 100'000'000;
    b.tx_list.push_back(synthetic_tx(TxType::CampaignStatus, status.encode(), 5));

    // 113 registered-sender complaints and 13 unregistered in day 0
    for (int i = 0; i < 113; ++i)
        b.tx_list.push_back(synthetic_complaint("rtm-" + std::to_string(i),
                                                ComplaintClass::Rtm, 6));
    for (int i = 0; i < 13; ++i)
        b.tx_list.push_back(synthetic_complaint("utm-" + std::to_string(i),
                                                ComplaintClass::Utm, 6));
    blocks.push_back(b);

    auto rows = compute_complaints_per_million(config, blocks, {});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].window == 0);
    CHECK(rows[0].messages == 100'000'000);
    CHECK(rows[0].rtm_complaints == 113);
    CHECK(rows[0].utm_complaints == 13);
    CHECK(rows[0].rtm_per_million == Catch::Approx(1.13).epsilon(1e-9));
    CHECK(rows[0].utm_per_million == Catch::Approx(0.13).epsilon(1e-9));
}

TEST_CASE("complaints per million honors off-chain traffic and empty windows") {
    NetworkConfig config;
    std::vector<Block> blocks;
    Block b;
    b.height = 1;
    b.tx_list.push_back(synthetic_complaint("c-1", ComplaintClass::Rtm, 30));  // day 1
    blocks.push_back(b);

    // no messages anywhere in day 1 -> undefined rate
    CHECK_THROWS_WITH(compute_complaints_per_million(config, blocks, {}),
                      Catch::Matchers::ContainsSubstring("DivisionWindowEmpty"));

    // the harness supplies the p2p denominator per day window
    auto rows = compute_complaints_per_million(config, blocks, {{1, 2'000'000}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].window == 1);
    CHECK(rows[0].rtm_per_million == Catch::Approx(0.5).epsilon(1e-9));

    // a window with traffic but no complaints still appears, rate zero
    rows = compute_complaints_per_million(config, blocks, {{1, 2'000'000}, {2, 500}});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].window == 2);
    CHECK(rows[1].rtm_per_million == 0.0);
}

TEST_CASE("complaint metrics skip transactions flagged invalid") {
    NetworkConfig config;
    std::vector<Block> blocks;
    Block b;
    b.height = 1;
    CampaignStatusArgs status;
    status.delivered = 1'000'000;
    b.tx_list.push_back(synthetic_tx(TxType::CampaignStatus, status.encode(), 5));
    b.tx_list.push_back(synthetic_complaint("c-1", ComplaintClass::Rtm, 6));
    b.tx_list.push_back(synthetic_complaint("c-2", ComplaintClass::Rtm, 6));
    b.validity_flags = {1, 1, 0};  // second complaint never committed
    blocks.push_back(b);

    auto rows = compute_complaints_per_million(config, blocks, {});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rtm_complaints == 1);
}

TEST_CASE("preference latency pairs each preference with the first scrub seeing it") {
    std::vector<Block> blocks;

    UpdatePreferenceArgs p;
    p.subscriber = crypto::sha256(Bytes{'s'});
    Block b2;
    b2.height = 2;
    b2.tx_list.push_back(synthetic_tx(TxType::UpdatePreference, p.encode(), 2));
    blocks.push_back(b2);

    // a scrub decided before the preference committed does not count
    ScrubTokenRecord early;
    early.token_id = Bytes{1};
    early.decision_height = 1;
    Block b3;
    b3.height = 3;
    b3.tx_list.push_back(synthetic_tx(TxType::ScrubResult, early.encode(), 3));
    blocks.push_back(b3);

    ScrubTokenRecord late;
    late.token_id = Bytes{2};
    late.decision_height = 5;
    Block b6;
    b6.height = 6;
    b6.tx_list.push_back(synthetic_tx(TxType::ScrubResult, late.encode(), 6));
    blocks.push_back(b6);

    auto rows = compute_preference_latency(blocks);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].subscriber_hex == to_hex(p.subscriber));
    CHECK(rows[0].committed_height == 2);
    CHECK(rows[0].first_effective_scrub_height == 5);
    CHECK(rows[0].blocks_latency == 3);
}

TEST_CASE_METHOD(CampaignFixture, "registration counts accumulate over the chain") {
    auto rows = compute_registrations(net.ref().ledger());
    REQUIRE_FALSE(rows.empty());
    const auto& last = rows.back();
    CHECK(last.telemarketers == 1);
    CHECK(last.principal_entities == 1);
    CHECK(last.headers == 1);
    CHECK(last.templates == 1);
    // monotone in every column
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].telemarketers >= rows[i - 1].telemarketers);
        CHECK(rows[i].headers >= rows[i - 1].headers);
        CHECK(rows[i].templates >= rows[i - 1].templates);
        CHECK(rows[i].height > rows[i - 1].height);
    }
}

TEST_CASE_METHOD(CampaignFixture, "metric reports survive a CSV round trip") {
    MetricsReport report;
    report.scrub_rates = compute_scrub_success_rate(net.ref().ledger(), trace);
    report.complaint_rates =
        compute_complaints_per_million(net.config, net.ref().ledger(), {{0, 1000}});
    report.preference_latency = compute_preference_latency(net.ref().ledger());
    report.registrations = compute_registrations(net.ref().ledger());

    auto dir = std::filesystem::temp_directory_path() / "tlch_metrics_rt";
    std::filesystem::remove_all(dir);
    emit_reports(report, dir);
    auto loaded = load_reports(dir);
    CHECK(report == loaded);

    // atomic overwrite on rerun
    emit_reports(report, dir);
    CHECK(load_reports(dir) == report);
    std::filesystem::remove_all(dir);
}

TEST_CASE_METHOD(CampaignFixture, "delivery trace survives a CSV round trip") {
    auto path = std::filesystem::temp_directory_path() / "tlch_trace_rt.csv";
    write_trace_csv(path, trace);
    auto loaded = read_trace_csv(path);
    REQUIRE(loaded.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(loaded[i].campaign_id == trace[i].campaign_id);
        CHECK(loaded[i].operator_id == trace[i].operator_id);
        CHECK(loaded[i].subscriber == trace[i].subscriber);
        CHECK(loaded[i].tick == trace[i].tick);
        CHECK(loaded[i].delivered == trace[i].delivered);
    }
    std::filesystem::remove(path);
}
