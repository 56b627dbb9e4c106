#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "telechain/audit.hpp"
#include "telechain/campaign.hpp"
#include "telechain/config.hpp"
#include "telechain/crypto.hpp"
#include "telechain/ledger.hpp"
#include "telechain/metrics.hpp"
#include "telechain/node.hpp"
#include "telechain/scenario.hpp"
#include "telechain/scrubbing.hpp"
#include "telechain/validators.hpp"

namespace telechain {

// Discrete-tick, in-process simulation of the whole network. Every node is a
// Node instance; the scheduler steps them sequentially in id order, so a
// (seed, scenario) pair determines every emitted byte.

struct VerdictRow {
    std::string complaint_id;
    ComplaintClass cls = ComplaintClass::Utm;
    std::string verdict;
    std::string campaign;
    std::string culprit;
    std::string notes;
};

struct RunArtifacts {
    std::vector<Block> blocks;
    std::vector<TraceRow> trace;
    MetricsReport metrics;
    std::map<std::uint64_t, std::uint64_t> extra_volume;  // window -> off-chain messages
    std::vector<VerdictRow> verdicts;
    std::vector<MemberRecord> genesis_members;
    std::vector<std::string> rejections;  // proposals that never reached the chain
};

class SimHarness {
public:
    explicit SimHarness(ScenarioConfig sc)
        : sc_(std::move(sc)),
          orderer_(sc_.network),
          rng_(crypto::DetRng::seeded(sc_.seed)),
          rng_scrub_(rng_.derive("scrub")),
          rng_deliver_(rng_.derive("deliver")),
          rng_otp_(rng_.derive("otp")),
          rng_complaints_(rng_.derive("complaints")) {
        regulator_.receipts = sc_.regulator_receipts;
        bootstrap_genesis();
    }

    const NetworkConfig& config() const { return sc_.network; }
    const ScenarioConfig& scenario() const { return sc_; }
    Node& node(const std::string& id) { return *nodes_.at(id); }
    const Node& reference() const { return *nodes_.begin()->second; }
    const Scrubber& scrubber() const { return *scrubber_; }
    const std::vector<MemberRecord>& genesis_members() const { return genesis_members_; }

    RunArtifacts run() {
        std::size_t next_event = 0;
        for (std::uint64_t tick = 0; tick <= sc_.ticks; ++tick) {
            regulator_.outage = outage_active(tick);
            flush_queued_proposals(tick);
            while (next_event < sc_.workload.size() && sc_.workload[next_event].tick <= tick) {
                process_event(sc_.workload[next_event], tick);
                ++next_event;
            }
            step_campaigns(tick);
            cut_and_commit(tick);
        }

        RunArtifacts out;
        out.blocks = reference().ledger();
        out.trace = trace_;
        out.extra_volume = extra_volume_;
        out.genesis_members = genesis_members_;
        out.rejections = rejections_;
        out.metrics.scrub_rates = compute_scrub_success_rate(out.blocks, out.trace);
        out.metrics.complaint_rates =
            compute_complaints_per_million(sc_.network, out.blocks, extra_volume_);
        out.metrics.preference_latency = compute_preference_latency(out.blocks);
        out.metrics.registrations = compute_registrations(out.blocks);
        out.verdicts = audit_all_complaints(out.blocks, out.trace);
        return out;
    }

    // Submits one fully endorsed transaction, or records why it could not be.
    bool submit_proposal(const std::string& proposer_id, TxType type, Bytes args,
                         std::uint64_t tick, int attempts = 0) {
        Node& proposer = *nodes_.at(proposer_id);
        Bytes args_copy = args;
        TransactionPayload payload;
        try {
            payload = proposer.propose(type, std::move(args), tick);
        } catch (const Error& e) {
            rejections_.push_back(std::string(tx_type_name(type)) + " by " + proposer_id +
                                  ": " + e.what());
            return false;
        }
        if (!reference().nonce_fresh(proposer_id, payload.nonce))
            throw Error(ErrorCode::StaleNonce, proposer_id);

        std::vector<Endorsement> endorsements;
        std::optional<ReadWriteSet> rwset;
        std::string first_error;
        for (const auto& [id, node] : nodes_) {
            try {
                auto [e, rw] = node->endorse(payload);
                if (rwset && !(rw.digest() == rwset->digest()))
                    throw Error(ErrorCode::MismatchedReadWriteSets, id);
                if (!rwset) rwset = std::move(rw);
                endorsements.push_back(std::move(e));
            } catch (const ValidatorRejected& e) {
                if (first_error.empty()) first_error = e.what();
            }
        }
        Roster roster = roster_from_state(reference().state());
        if (!rwset ||
            !evaluate_policy(reference().policies().rule_for(type), endorsements, roster)) {
            rejections_.push_back(std::string(tx_type_name(type)) + " by " + proposer_id + ": " +
                                  (first_error.empty() ? "policy unsatisfied" : first_error));
            return false;
        }

        Transaction tx;
        tx.payload = payload;
        tx.proposer_signature = proposer.sign(payload.serialize());
        tx.rwset = std::move(*rwset);
        tx.endorsements = std::move(endorsements);
        orderer_.submit(std::move(tx), tick);
        in_flight_[to_hex(payload.digest())] =
            QueuedProposal{proposer_id, type, std::move(args_copy), attempts};
        return true;
    }

    std::string subscriber_num(std::uint64_t index) const {
        return subscriber_number(index, sc_.operators.size());
    }

    Hash256 subscriber_hash(std::uint64_t index) const {
        return hash_subscriber(subscriber_num(index), sc_.network.consortium_key);
    }

private:
    enum class Stage { Scrub, AwaitToken, AwaitInit, AwaitDelivery, Done };

    struct CampaignRun {
        WorkloadEvent ev;
        std::vector<std::string> numbers;
        Stage stage = Stage::Scrub;
        ScrubTokenRecord token;
    };

    struct RawSend {  // pre-enforcement campaign: straight to the pipes
        WorkloadEvent ev;
        std::vector<std::string> numbers;
        bool done = false;
    };

    struct QueuedProposal {
        std::string proposer;
        TxType type;
        Bytes args;
        int attempts = 0;
    };

    void bootstrap_genesis() {
        auto make_member = [&](const std::string& id, Role role, const std::string& region) {
            sign_keys_[id] = crypto::ed25519_keypair(crypto::derive_seed(sc_.seed, "sign/" + id));
            enc_keys_[id] = crypto::x25519_keypair(crypto::derive_seed(sc_.seed, "enc/" + id));
            MemberRecord m;
            m.id = id;
            m.role = role;
            m.public_key = sign_keys_[id].public_key;
            m.enc_public_key = enc_keys_[id].public_key;
            m.region = region;
            genesis_members_.push_back(m);
        };
        for (const auto& op : sc_.operators) make_member(op.id, Role::Operator, op.region);
        make_member(sc_.scrubber_id, Role::Scrubber, "");
        make_member(sc_.observer_id, Role::Observer, "");

        for (const auto& m : genesis_members_) {
            auto node = std::make_unique<Node>(m.id, m.role, sign_keys_[m.id], enc_keys_[m.id],
                                               sc_.network, regulator_);
            for (const auto& gm : genesis_members_) node->seed_genesis_member(gm);
            nodes_[m.id] = std::move(node);
        }
        scrubber_ = std::make_unique<Scrubber>(sc_.scrubber_id, sign_keys_[sc_.scrubber_id],
                                               sc_.network);
        for (const auto& op : sc_.operators) regions_[op.id] = op.region;
    }

    bool outage_active(std::uint64_t tick) const {
        for (const auto& f : sc_.faults)
            if (f.kind == FaultKind::RegulatorDbOutage && f.active(tick)) return true;
        return false;
    }

    bool bypass_active(const std::string& op, std::uint64_t tick) const {
        for (const auto& f : sc_.faults)
            if (f.kind == FaultKind::BypassTokenVerification && f.node == op && f.active(tick))
                return true;
        return false;
    }

    std::string route_operator(const std::string& number) const {
        std::string op = sc_.network.operator_for_number(normalize_phone(number));
        return op.empty() ? sc_.operators.front().id : op;
    }

    void process_event(const WorkloadEvent& ev, std::uint64_t tick) {
        switch (ev.type) {
            case EventType::RegisterTm: {
                auto sign = crypto::ed25519_keypair(crypto::derive_seed(sc_.seed, "sign/" + ev.id));
                auto enc = crypto::x25519_keypair(crypto::derive_seed(sc_.seed, "enc/" + ev.id));
                sign_keys_[ev.id] = sign;
                enc_keys_[ev.id] = enc;
                RegisterTelemarketerArgs args;
                args.tm_id = ev.id;
                args.payment_receipt = ev.receipt;
                args.public_key = sign.public_key;
                args.enc_public_key = enc.public_key;
                args.self_signature = crypto::ed25519_sign(sign.seed, sign.public_key);
                std::string sponsor =
                    ev.proposer.empty() ? sc_.operators.front().id : ev.proposer;
                submit_proposal(sponsor, TxType::RegisterTelemarketer, args.encode(), tick);
                break;
            }
            case EventType::RegisterPe: {
                RegisterPrincipalEntityArgs args;
                args.pe_id = ev.pe_id;
                args.documents_ref = "docs/" + ev.pe_id;
                submit_proposal(ev.proposer, TxType::RegisterPrincipalEntity, args.encode(), tick);
                break;
            }
            case EventType::RegisterHeader: {
                RegisterHeaderArgs args;
                args.pe_id = ev.pe_id;
                args.header = ev.header;
                submit_proposal(ev.proposer, TxType::RegisterHeader, args.encode(), tick);
                break;
            }
            case EventType::DelegateHeader: {
                DelegateHeaderArgs args;
                args.pe_id = ev.pe_id;
                args.header = ev.header;
                args.tm_id = ev.tm_id;
                submit_proposal(ev.proposer, TxType::DelegateHeader, args.encode(), tick);
                break;
            }
            case EventType::RegisterTemplate: {
                RegisterTemplateArgs args;
                args.header = ev.header;
                args.text = ev.text;
                args.kind = ev.kind;
                submit_proposal(ev.proposer,
                                ev.kind == TemplateKind::Consent ? TxType::RegisterConsentTemplate
                                                                 : TxType::RegisterTemplate,
                                args.encode(), tick);
                break;
            }
            case EventType::UpdatePreference:
                propose_preference(ev, ev.subscriber, tick);
                break;
            case EventType::UpdatePreferenceRange:
                for (std::uint64_t i = ev.from; i < ev.to; ++i) propose_preference(ev, i, tick);
                break;
            case EventType::RequestConsent: {
                RequestConsentArgs args;
                args.header = ev.header;
                args.subscriber = subscriber_hash(ev.subscriber);
                args.consent_template_id =
                    TemplateRecord::compute_id(ev.header, ev.template_text);
                Bytes secret = rng_otp_.bytes(16);
                otp_secrets_[to_hex(args.subscriber) + "/" + ev.header] = secret;
                args.otp_hash = crypto::sha256(secret);
                args.otp_expiry = tick + sc_.network.otp_ttl_ticks;
                args.channel = ConsentChannel::Otp;
                submit_proposal(ev.proposer, TxType::RequestConsent, args.encode(), tick);
                break;
            }
            case EventType::GrantConsent: {
                GrantConsentArgs args;
                args.subscriber = subscriber_hash(ev.subscriber);
                args.header = ev.header;
                auto it = otp_secrets_.find(to_hex(args.subscriber) + "/" + ev.header);
                if (it != otp_secrets_.end()) args.token_hash = crypto::sha256(it->second);
                std::string op = ev.operator_id.empty()
                                     ? route_operator(subscriber_num(ev.subscriber))
                                     : ev.operator_id;
                submit_proposal(op, TxType::GrantConsent, args.encode(), tick);
                break;
            }
            case EventType::RevokeConsent: {
                RevokeConsentArgs args;
                args.subscriber = subscriber_hash(ev.subscriber);
                args.header = ev.header;
                std::string op = ev.operator_id.empty()
                                     ? route_operator(subscriber_num(ev.subscriber))
                                     : ev.operator_id;
                submit_proposal(op, TxType::RevokeConsent, args.encode(), tick);
                break;
            }
            case EventType::Campaign: {
                std::vector<std::string> numbers;
                for (std::uint64_t i = ev.from; i < ev.to; ++i) numbers.push_back(subscriber_num(i));
                if (sc_.enforcement_tick && tick < *sc_.enforcement_tick)
                    raw_sends_.push_back(RawSend{ev, std::move(numbers), false});
                else
                    campaigns_.push_back(CampaignRun{ev, std::move(numbers), Stage::Scrub, {}});
                break;
            }
            case EventType::Complaint: {
                ComplaintFiledArgs args;
                args.complaint_id = ev.id;
                args.subscriber = subscriber_hash(ev.subscriber);
                args.sender = ev.sender;
                args.message_text = ev.text;
                args.received_tick = ev.count;  // receipt tick carried in count
                submit_proposal(sc_.observer_id, TxType::ComplaintFiled, args.encode(), tick);
                break;
            }
            case EventType::P2pBurst: {
                extra_volume_[tick / sc_.network.ticks_per_day] += ev.count;
                p2p_sends_.emplace_back(ev.sender, tick);
                for (std::uint64_t k = 0; k < ev.complaints; ++k) {
                    ComplaintFiledArgs args;
                    args.complaint_id =
                        "utm-" + ev.sender + "-" + std::to_string(tick) + "-" + std::to_string(k);
                    args.subscriber = subscriber_hash(k % std::max<std::uint64_t>(sc_.subscribers, 1));
                    args.sender = ev.sender;
                    args.message_text = "unsolicited message";
                    args.received_tick = tick;
                    submit_proposal(sc_.observer_id, TxType::ComplaintFiled, args.encode(), tick);
                }
                break;
            }
            case EventType::MessageVolume:
                extra_volume_[tick / sc_.network.ticks_per_day] += ev.count;
                break;
        }
    }

    void propose_preference(const WorkloadEvent& ev, std::uint64_t index, std::uint64_t tick) {
        std::string number = subscriber_num(index);
        std::string op = ev.operator_id.empty() ? route_operator(number) : ev.operator_id;
        UpdatePreferenceArgs args;
        args.subscriber = subscriber_hash(index);
        args.operator_id = op;
        args.mode = ev.mode;
        args.blocked_categories = ev.blocked;
        submit_proposal(op, TxType::UpdatePreference, args.encode(), tick);
    }

    void step_campaigns(std::uint64_t tick) {
        for (auto& rs : raw_sends_) {
            if (rs.done || !sc_.network.in_delivery_window(tick)) continue;
            run_raw_send(rs, tick);
            rs.done = true;
        }
        for (auto& c : campaigns_) {
            switch (c.stage) {
                case Stage::Scrub: {
                    ScrubRequest req;
                    req.tm_id = c.ev.proposer;
                    req.header = c.ev.header;
                    req.template_id = TemplateRecord::compute_id(c.ev.header, c.ev.template_text);
                    req.category = c.ev.category;
                    req.numbers = c.numbers;
                    req.requested_at = tick;
                    const Node& sn = *nodes_.at(sc_.scrubber_id);
                    Roster roster = roster_from_state(sn.state());
                    try {
                        ScrubOutput out = scrubber_->scrub(req, sn.state(), roster, rng_scrub_);
                        c.token = out.token;
                        if (submit_proposal(sc_.scrubber_id, TxType::ScrubResult, out.tx_args,
                                            tick))
                            c.stage = Stage::AwaitToken;
                        else
                            c.stage = Stage::Done;
                    } catch (const Error& e) {
                        rejections_.push_back("scrub for " + c.ev.id + ": " + e.what());
                        c.stage = Stage::Done;
                    }
                    break;
                }
                case Stage::AwaitToken: {
                    if (!reference().state().get(keys::scrub_token(c.token.token_id))) break;
                    CampaignInitArgs args;
                    args.campaign_id = c.ev.id;
                    args.token_id = c.token.token_id;
                    args.header = c.ev.header;
                    args.template_id = c.token.template_id;
                    if (submit_proposal(c.ev.proposer, TxType::CampaignInit, args.encode(), tick))
                        c.stage = Stage::AwaitInit;
                    else
                        c.stage = Stage::Done;
                    break;
                }
                case Stage::AwaitInit:
                    if (reference().state().get(keys::campaign(c.ev.id)))
                        c.stage = Stage::AwaitDelivery;
                    break;
                case Stage::AwaitDelivery:
                    if (sc_.network.in_delivery_window(tick)) {
                        deliver_campaign(c, tick);
                        c.stage = Stage::Done;
                    }
                    break;
                case Stage::Done:
                    break;
            }
        }
    }

    void run_raw_send(RawSend& rs, std::uint64_t tick) {
        // pre-mandate delivery: no scrub, preferences ignored on purpose
        crypto::DetRng rng = rng_deliver_.derive("raw/" + rs.ev.id);
        MirrorIndex mirror = MirrorIndex::rescan(reference().state());
        std::uint64_t delivered_count = 0;
        for (const auto& number : rs.numbers) {
            std::string op = route_operator(number);
            bool delivered = rng.unit() < rs.ev.delivery_prob;
            Hash256 h = hash_subscriber(number, sc_.network.consortium_key);
            trace_.push_back(TraceRow{rs.ev.id, op, h, tick, delivered});
            if (!delivered) continue;
            ++delivered_count;
            maybe_auto_complain(h, op, rs.ev.header, rs.ev.category, rs.ev.text, mirror, tick);
        }
        extra_volume_[tick / sc_.network.ticks_per_day] += delivered_count;
    }

    void deliver_campaign(CampaignRun& c, std::uint64_t tick) {
        auto traw = reference().state().get(keys::content_template(c.token.template_id));
        if (!traw) {
            rejections_.push_back("campaign " + c.ev.id + ": template missing at delivery");
            return;
        }
        TemplateRecord tmpl = TemplateRecord::decode(traw->value);
        MirrorIndex mirror = MirrorIndex::rescan(reference().state());

        // a bypassing operator delivers even when the scrub left it no file
        std::set<std::string> leg_operators;
        for (const auto& po : c.token.per_operator) leg_operators.insert(po.operator_id);
        for (const auto& spec : sc_.operators)
            if (bypass_active(spec.id, tick)) leg_operators.insert(spec.id);

        for (const auto& op : leg_operators) {
            auto nit = nodes_.find(op);
            if (nit == nodes_.end()) continue;
            std::vector<std::string> numbers;
            if (bypass_active(op, tick)) {
                // injected fault: this operator skips token verification and
                // pushes the telemarketer's raw list for its subscribers
                for (const auto& n : c.numbers)
                    if (route_operator(n) == op) numbers.push_back(normalize_phone(n));
            } else {
                try {
                    numbers = verify_scrub_token(op, c.token, scrubber_->file_store(),
                                                 enc_keys_.at(op).seed, nit->second->state());
                } catch (const Error& e) {
                    rejections_.push_back("token verify by " + op + ": " + e.what());
                    continue;
                }
            }
            crypto::DetRng rng = rng_deliver_.derive(c.ev.id + "/" + op);
            CampaignExecution exec;
            try {
                exec = execute_campaign_leg(sc_.network, op, c.ev.id, tmpl, c.ev.text, numbers,
                                            tick, c.ev.delivery_prob, rng, sign_keys_.at(op));
            } catch (const Error& e) {
                rejections_.push_back("delivery " + c.ev.id + "/" + op + ": " + e.what());
                continue;
            }
            trace_.insert(trace_.end(), exec.trace.begin(), exec.trace.end());
            submit_proposal(op, TxType::CampaignStatus, exec.status_args.encode(), tick);

            for (std::size_t i = 0; i < exec.trace.size(); ++i) {
                if (!exec.trace[i].delivered) continue;
                maybe_auto_complain(exec.trace[i].subscriber, op, c.ev.header, c.ev.category,
                                    c.ev.text, mirror, tick);
            }
        }
    }

    // Subscribers whose committed preference blocks the campaign's category
    // complain with probability complaint_prob when a message gets through.
    void maybe_auto_complain(const Hash256& subscriber, const std::string& op,
                             const std::string& header, const std::string& category,
                             const std::string& message, const MirrorIndex& mirror,
                             std::uint64_t tick) {
        if (sc_.complaint_prob <= 0.0) return;
        if (mirror.is_deliverable(subscriber, header, category,
                                  sc_.network.consent_overrides_fully_blocked))
            return;
        if (rng_complaints_.unit() >= sc_.complaint_prob) return;
        ComplaintFiledArgs args;
        args.complaint_id = "auto-" + std::to_string(auto_complaint_seq_++);
        args.subscriber = subscriber;
        args.sender = display_header(regions_.at(op), header);
        args.message_text = message;
        args.received_tick = tick;
        queued_.push_back(QueuedProposal{sc_.observer_id, TxType::ComplaintFiled, args.encode()});
    }

    void flush_queued_proposals(std::uint64_t tick) {
        std::deque<QueuedProposal> batch;
        batch.swap(queued_);
        for (auto& q : batch)
            submit_proposal(q.proposer, q.type, std::move(q.args), tick, q.attempts);
    }

    void cut_and_commit(std::uint64_t tick) {
        while (true) {
            Node& ref = *nodes_.begin()->second;
            auto block = orderer_.maybe_cut(tick, ref.next_height(), ref.tip_hash());
            if (!block) break;
            CommitResult ref_result;
            bool first = true;
            for (auto& [id, node] : nodes_) {
                CommitResult r = node->validate_and_commit(*block);
                if (first) {
                    ref_result = std::move(r);
                    first = false;
                }
            }
            // Conflict-dropped txs are re-proposed next tick against fresh state,
            // the same way a ledger client retries an invalidated transaction.
            for (const auto& d : ref_result.dropped) {
                auto it = in_flight_.find(d);
                if (it == in_flight_.end()) continue;
                QueuedProposal q = std::move(it->second);
                in_flight_.erase(it);
                if (++q.attempts <= kMaxRetries) {
                    queued_.push_back(std::move(q));
                } else {
                    rejections_.push_back(std::string(tx_type_name(q.type)) + " by " +
                                          q.proposer + ": dropped after repeated conflicts");
                }
            }
            for (std::size_t i = 0; i < block->tx_list.size(); ++i)
                if (i >= ref_result.validity_flags.size() || ref_result.validity_flags[i])
                    in_flight_.erase(to_hex(block->tx_list[i].payload.digest()));
            scrubber_->mirror().apply(ref_result.event);
            post_commit(ref_result, tick);
        }
    }

    void post_commit(const CommitResult& result, std::uint64_t tick) {
        for (const auto& w : result.event.writes) {
            if (w.is_delete) continue;
            if (w.key.rfind("member/", 0) == 0) {
                MemberRecord m = MemberRecord::decode(w.value);
                if (m.role == Role::Telemarketer && !nodes_.count(m.id)) admit_node(m);
            } else if (w.key.rfind("complaint/", 0) == 0) {
                ComplaintRecord c = ComplaintRecord::decode(w.value);
                if (c.cls == ComplaintClass::Utm && is_p2p_number(c.sender))
                    escalate_watchlist(c.sender);
            }
        }
        (void)tick;
    }

    void admit_node(const MemberRecord& m) {
        auto node = std::make_unique<Node>(m.id, m.role, sign_keys_.at(m.id), enc_keys_.at(m.id),
                                           sc_.network, regulator_);
        for (const auto& gm : genesis_members_) node->seed_genesis_member(gm);
        node->replay(reference().ledger());  // state sync from peers
        nodes_[m.id] = std::move(node);
    }

    void escalate_watchlist(const std::string& line) {
        Hash256 h = hash_subscriber(line, sc_.network.consortium_key);
        std::uint64_t count = ++utm_counts_[to_hex(h)];
        WatchAction current = WatchAction::None;
        if (auto raw = reference().state().get(keys::watch(h)))
            current = WatchListEntry::decode(raw->value).action;
        if (auto args = update_watchlist(sc_.network, h, count, current))
            queued_.push_back(QueuedProposal{sc_.observer_id, TxType::DegradedService,
                                             args->encode()});
    }

    std::vector<VerdictRow> audit_all_complaints(const std::vector<Block>& blocks,
                                                 const std::vector<TraceRow>& trace) {
        std::vector<VerdictRow> out;
        for (const auto& [key, entry] : reference().state().entries()) {
            if (key.rfind("complaint/", 0) != 0) continue;
            ComplaintRecord c = ComplaintRecord::decode(entry.value);
            VerdictRow row;
            row.complaint_id = c.complaint_id;
            row.cls = c.cls;
            try {
                AuditResult r = replay_audit(sc_.network, genesis_members_, blocks, trace, c);
                switch (r.verdict) {
                    case Verdict::Pending: row.verdict = "pending"; break;
                    case Verdict::Violation: row.verdict = "violation"; break;
                    case Verdict::Compliant: row.verdict = "compliant"; break;
                    case Verdict::UnregisteredSender: row.verdict = "unregistered_sender"; break;
                }
                row.campaign = r.matched_campaign;
                row.culprit = r.culprit_operator;
                row.notes = r.notes;
            } catch (const Error& e) {
                row.verdict = "insufficient_evidence";
                row.notes = e.what();
            }
            out.push_back(std::move(row));
        }
        return out;
    }

    ScenarioConfig sc_;
    RegulatorDb regulator_;
    Orderer orderer_;
    crypto::DetRng rng_;
    crypto::DetRng rng_scrub_;
    crypto::DetRng rng_deliver_;
    crypto::DetRng rng_otp_;
    crypto::DetRng rng_complaints_;

    std::map<std::string, std::unique_ptr<Node>> nodes_;
    std::map<std::string, crypto::KeyPair> sign_keys_;
    std::map<std::string, crypto::KeyPair> enc_keys_;
    std::map<std::string, std::string> regions_;
    std::vector<MemberRecord> genesis_members_;
    std::unique_ptr<Scrubber> scrubber_;

    std::vector<CampaignRun> campaigns_;
    std::vector<RawSend> raw_sends_;
    static constexpr int kMaxRetries = 16;
    std::deque<QueuedProposal> queued_;
    std::map<std::string, QueuedProposal> in_flight_;
    std::vector<TraceRow> trace_;
    std::map<std::uint64_t, std::uint64_t> extra_volume_;
    std::map<std::string, Bytes> otp_secrets_;
    std::map<std::string, std::uint64_t> utm_counts_;
    std::vector<std::pair<std::string, std::uint64_t>> p2p_sends_;
    std::vector<std::string> rejections_;
    std::uint64_t auto_complaint_seq_ = 0;
};

// ---- artifact files -----------------------------------------------------

inline void write_volumes_csv(const std::filesystem::path& path,
                              const std::map<std::uint64_t, std::uint64_t>& volumes) {
    std::string s = "window,messages\n";
    for (const auto& [w, n] : volumes) s += std::to_string(w) + "," + std::to_string(n) + "\n";
    csv_detail::write_atomic(path, s);
}

inline std::map<std::uint64_t, std::uint64_t> read_volumes_csv(
    const std::filesystem::path& path) {
    std::map<std::uint64_t, std::uint64_t> out;
    auto rows = csv_detail::read_rows(path);
    for (std::size_t i = 1; i < rows.size(); ++i)
        out[std::stoull(rows[i][0])] = std::stoull(rows[i][1]);
    return out;
}

inline void write_verdicts_csv(const std::filesystem::path& path,
                               const std::vector<VerdictRow>& verdicts) {
    std::string s = "complaint_id,class,verdict,campaign,culprit,notes\n";
    for (const auto& v : verdicts) {
        s += v.complaint_id + "," + (v.cls == ComplaintClass::Rtm ? "rtm" : "utm") + "," +
             v.verdict + "," + v.campaign + "," + v.culprit + "," + v.notes + "\n";
    }
    csv_detail::write_atomic(path, s);
}

// End-to-end run: simulate, then write the ledger dump, the delivery trace,
// the genesis and regulator fixtures, and every metric CSV into out_dir.
inline RunArtifacts run_scenario(const ScenarioConfig& sc, const std::filesystem::path& out_dir) {
    SimHarness harness(sc);
    RunArtifacts artifacts = harness.run();
    std::filesystem::create_directories(out_dir);
    write_ledger_file(out_dir / "ledger.bin", artifacts.blocks);
    write_trace_csv(out_dir / "trace.csv", artifacts.trace);
    csv_detail::write_atomic(out_dir / "genesis.txt", render_genesis(artifacts.genesis_members));
    csv_detail::write_atomic(out_dir / "regulator.csv",
                             render_regulator_csv(sc.regulator_receipts));
    write_volumes_csv(out_dir / "volumes.csv", artifacts.extra_volume);
    write_verdicts_csv(out_dir / "verdicts.csv", artifacts.verdicts);
    if (!artifacts.rejections.empty()) {
        std::string log;
        for (auto& r : artifacts.rejections) log += r + "\n";
        csv_detail::write_atomic(out_dir / "run_log.txt", log);
    }
    emit_reports(artifacts.metrics, out_dir);
    return artifacts;
}

}  // namespace telechain
