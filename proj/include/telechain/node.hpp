#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "telechain/config.hpp"
#include "telechain/crypto.hpp"
#include "telechain/ledger.hpp"
#include "telechain/policy.hpp"
#include "telechain/records.hpp"
#include "telechain/validators.hpp"
#include "telechain/worldstate.hpp"

namespace telechain {

// One valid write batch, emitted per committed block; the scrubbing mirror
// consumes these.
struct CommitEvent {
    std::uint64_t height = 0;
    std::vector<WriteEntry> writes;  // writes of valid transactions, in order
};

struct CommitResult {
    std::vector<std::uint8_t> validity_flags;
    CommitEvent event;
    std::vector<std::string> dropped;  // tx digests of invalid (conflicting) txs, logged
};

inline Roster roster_from_state(const WorldState& state) {
    Roster roster;
    auto it = state.entries().lower_bound("member/");
    for (; it != state.entries().end() && it->first.rfind("member/", 0) == 0; ++it) {
        MemberRecord m = MemberRecord::decode(it->second.value);
        if (!m.tombstoned) roster[m.id] = RosterEntry{m.role, m.public_key};
    }
    return roster;
}

// A participant node: a single-threaded state machine holding its own copy
// of the ledger and world state. Endorsement simulates execution without
// side effects; commit re-verifies everything independently.
class Node {
public:
    Node(std::string id, Role role, crypto::KeyPair sign_keys, crypto::KeyPair enc_keys,
         const NetworkConfig& config, const RegulatorDb& regulator)
        : id_(std::move(id)),
          role_(role),
          sign_keys_(std::move(sign_keys)),
          enc_keys_(std::move(enc_keys)),
          config_(&config),
          regulator_(&regulator) {}

    const std::string& id() const { return id_; }
    Role role() const { return role_; }
    const crypto::KeyPair& sign_keys() const { return sign_keys_; }
    const crypto::KeyPair& enc_keys() const { return enc_keys_; }
    const WorldState& state() const { return state_; }
    WorldState& mutable_state() { return state_; }
    const std::vector<Block>& ledger() const { return ledger_; }
    const PolicyTable& policies() const { return policies_; }

    Hash256 tip_hash() const {
        return ledger_.empty() ? zero_hash() : ledger_.back().block_hash;
    }

    std::uint64_t next_height() const { return ledger_.size(); }

    // Genesis bootstrap: identities written directly at height 0 before any
    // block commits; every node seeds the identical set.
    void seed_genesis_member(const MemberRecord& m) {
        state_.put(keys::member(m.id), m.encode(), Version{0, 0});
    }

    Bytes sign(const Bytes& msg) const { return crypto::ed25519_sign(sign_keys_.seed, msg); }

    // Client-side proposal checks: admitted identity, fresh nonce.
    TransactionPayload propose(TxType type, Bytes args, std::uint64_t tick) {
        auto member = state_.get(keys::member(id_));
        if (!member || MemberRecord::decode(member->value).tombstoned)
            throw Error(ErrorCode::UnknownIdentity, id_);
        TransactionPayload p;
        p.tx_type = type;
        p.args = std::move(args);
        p.proposer = id_;
        p.nonce = next_nonce_++;
        p.timestamp = tick;
        return p;
    }

    // Simulated execution per the endorsement policy: returns the signed
    // endorsement plus the read-write set; committed state is untouched.
    std::pair<Endorsement, ReadWriteSet> endorse(const TransactionPayload& payload) const {
        ValidatorContext ctx{*config_, *regulator_};
        ReadWriteSet rwset = execute_validator(ctx, state_, payload);
        Endorsement e;
        e.endorser = id_;
        e.rwset_digest = rwset.digest();
        e.signature = crypto::ed25519_sign(
            sign_keys_.seed, endorsement_message(payload.digest(), e.rwset_digest));
        return {std::move(e), std::move(rwset)};
    }

    // Full commit validation: chain link, endorsement signatures and policy,
    // nonce freshness, and the MVCC read-version rule. Invalid transactions
    // are marked and dropped; valid writes are applied in order.
    CommitResult validate_and_commit(const Block& block) {
        if (!(block.prev_hash == tip_hash()))
            throw Error(ErrorCode::BrokenChain,
                        "prev_hash mismatch at height " + std::to_string(block.height));
        if (block.height != next_height())
            throw Error(ErrorCode::BrokenChain,
                        "unexpected height " + std::to_string(block.height));
        if (!(block.compute_hash() == block.block_hash))
            throw Error(ErrorCode::BrokenChain, "block hash mismatch");

        Roster roster = roster_from_state(state_);
        CommitResult result;
        result.event.height = block.height;

        Block committed = block;
        committed.validity_flags.assign(block.tx_list.size(), 0);

        for (std::uint32_t i = 0; i < block.tx_list.size(); ++i) {
            const Transaction& tx = block.tx_list[i];
            if (tx_valid_for_commit(tx, roster)) {
                committed.validity_flags[i] = 1;
                for (const auto& w : tx.rwset.writes) {
                    if (w.is_delete) state_.erase(w.key);
                    else state_.put(w.key, w.value, Version{block.height, i});
                    result.event.writes.push_back(w);
                }
                committed_nonces_[tx.payload.proposer] = tx.payload.nonce;
                // membership changes inside this block take effect for
                // subsequent transactions
                if (tx.payload.tx_type == TxType::RegisterTelemarketer)
                    roster = roster_from_state(state_);
            } else {
                result.dropped.push_back(to_hex(tx.payload.digest()));
            }
        }
        state_.set_height(block.height);
        ledger_.push_back(committed);
        result.validity_flags = committed.validity_flags;
        return result;
    }

    // Rebuilds world state by replaying a peer's ledger (state sync for a
    // freshly admitted node). Genesis members must be seeded first.
    void replay(const std::vector<Block>& blocks) {
        for (const auto& b : blocks) validate_and_commit(b);
    }

    std::uint64_t last_committed_nonce(const std::string& proposer) const {
        auto it = committed_nonces_.find(proposer);
        return it == committed_nonces_.end() ? 0 : it->second;
    }

    bool nonce_fresh(const std::string& proposer, std::uint64_t nonce) const {
        auto it = committed_nonces_.find(proposer);
        return it == committed_nonces_.end() || nonce > it->second;
    }

private:
    bool tx_valid_for_commit(const Transaction& tx, const Roster& roster) const {
        // proposer admitted with a live key
        auto pit = roster.find(tx.payload.proposer);
        if (pit == roster.end()) return false;
        Bytes payload_bytes = tx.payload.serialize();
        if (!crypto::ed25519_verify(pit->second.public_key, payload_bytes,
                                    tx.proposer_signature))
            return false;
        // replay protection: nonce strictly increases per proposer
        auto nit = committed_nonces_.find(tx.payload.proposer);
        if (nit != committed_nonces_.end() && tx.payload.nonce <= nit->second) return false;

        // endorsement signatures, digest agreement, policy
        Hash256 payload_digest = tx.payload.digest();
        Hash256 rwset_digest = tx.rwset.digest();
        std::vector<Endorsement> verified;
        for (const auto& e : tx.endorsements) {
            if (!(e.rwset_digest == rwset_digest)) return false;
            auto eit = roster.find(e.endorser);
            if (eit == roster.end()) continue;
            if (crypto::ed25519_verify(eit->second.public_key,
                                       endorsement_message(payload_digest, rwset_digest),
                                       e.signature))
                verified.push_back(e);
        }
        try {
            if (!evaluate_policy(policies_.rule_for(tx.payload.tx_type), verified, roster))
                return false;
        } catch (const Error&) {
            return false;
        }

        // MVCC write-conflict rule: every read version must still hold
        for (const auto& r : tx.rwset.reads) {
            auto entry = state_.get(r.key);
            if (r.exists != entry.has_value()) return false;
            if (entry && !(entry->version == r.version)) return false;
        }
        return true;
    }

    std::string id_;
    Role role_;
    crypto::KeyPair sign_keys_;
    crypto::KeyPair enc_keys_;
    const NetworkConfig* config_;
    const RegulatorDb* regulator_;
    PolicyTable policies_;
    WorldState state_;
    std::vector<Block> ledger_;
    std::map<std::string, std::uint64_t> committed_nonces_;
    std::uint64_t next_nonce_ = 1;
};

// Single logical ordering service: totally orders endorsed transactions by
// (arrival tick, proposer id, nonce) and cuts blocks at max_batch_size or on
// batch timeout. The interface is small enough that a replicated orderer
// could slot in behind it.
class Orderer {
public:
    explicit Orderer(const NetworkConfig& config) : config_(&config) {}

    void submit(Transaction tx, std::uint64_t arrival_tick) {
        pending_.push_back(Pending{std::move(tx), arrival_tick});
        if (pending_.size() == 1) first_arrival_ = arrival_tick;
    }

    bool has_pending() const { return !pending_.empty(); }

    // Cuts at most one block per call; returns nullopt when no cut is due.
    std::optional<Block> maybe_cut(std::uint64_t now_tick, std::uint64_t next_height,
                                   const Hash256& prev_hash) {
        if (pending_.empty()) return std::nullopt;
        bool timeout = now_tick >= first_arrival_ + config_->batch_timeout_ticks;
        if (pending_.size() < config_->max_batch_size && !timeout) return std::nullopt;
        return cut(next_height, prev_hash);
    }

    Block cut(std::uint64_t next_height, const Hash256& prev_hash) {
        std::stable_sort(pending_.begin(), pending_.end(), [](const Pending& a, const Pending& b) {
            if (a.arrival != b.arrival) return a.arrival < b.arrival;
            if (a.tx.payload.proposer != b.tx.payload.proposer)
                return a.tx.payload.proposer < b.tx.payload.proposer;
            return a.tx.payload.nonce < b.tx.payload.nonce;
        });
        std::size_t take = std::min(pending_.size(), config_->max_batch_size);
        Block b;
        b.height = next_height;
        b.prev_hash = prev_hash;
        for (std::size_t i = 0; i < take; ++i) b.tx_list.push_back(std::move(pending_[i].tx));
        pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(take));
        if (!pending_.empty()) first_arrival_ = pending_.front().arrival;
        b.block_hash = b.compute_hash();
        return b;
    }

private:
    struct Pending {
        Transaction tx;
        std::uint64_t arrival;
    };
    const NetworkConfig* config_;
    std::vector<Pending> pending_;
    std::uint64_t first_arrival_ = 0;
};

}  // namespace telechain
