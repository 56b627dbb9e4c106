#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "telechain/config.hpp"
#include "telechain/crypto.hpp"
#include "telechain/domain.hpp"
#include "telechain/node.hpp"
#include "telechain/records.hpp"
#include "telechain/txargs.hpp"

namespace telechain {

// Commit-event-driven mirror of the preference and consent registries,
// kept by scrubbing nodes for fast set-difference decisions.
class MirrorIndex {
public:
    struct PrefEntry {
        PreferenceMode mode = PreferenceMode::FullyOpen;
        std::vector<std::string> blocked;
        std::string operator_id;
    };

    std::uint64_t height() const { return height_; }

    // Applies one block's valid writes. Idempotent per block; a skipped
    // block raises GapDetected (the mirror must resync).
    void apply(const CommitEvent& event) {
        if (event.height == 0) {  // genesis block carries no registry writes
            for (const auto& w : event.writes) apply_write(w);
            return;
        }
        if (event.height <= height_) return;  // re-delivery, idempotent per block
        if (event.height != height_ + 1)
            throw Error(ErrorCode::GapDetected,
                        "mirror at " + std::to_string(height_) + ", got block " +
                            std::to_string(event.height));
        for (const auto& w : event.writes) apply_write(w);
        height_ = event.height;
    }

    // From-scratch rescan of a world state; the oracle the event-driven path
    // is checked against.
    static MirrorIndex rescan(const WorldState& state) {
        MirrorIndex idx;
        for (const auto& [key, entry] : state.entries())
            idx.apply_write(WriteEntry{key, false, entry.value});
        idx.height_ = state.height();
        return idx;
    }

    const std::map<std::string, PrefEntry>& preferences() const { return pref_; }
    const std::map<std::string, ConsentStatus>& consents() const { return consent_; }

    bool operator==(const MirrorIndex& other) const {
        auto pref_eq = [](const std::map<std::string, PrefEntry>& a,
                          const std::map<std::string, PrefEntry>& b) {
            if (a.size() != b.size()) return false;
            for (auto ai = a.begin(), bi = b.begin(); ai != a.end(); ++ai, ++bi) {
                if (ai->first != bi->first || ai->second.mode != bi->second.mode ||
                    ai->second.blocked != bi->second.blocked ||
                    ai->second.operator_id != bi->second.operator_id)
                    return false;
            }
            return true;
        };
        return pref_eq(pref_, other.pref_) && consent_ == other.consent_;
    }

    // Deliverability: consent granted for the header wins over category
    // blocks; otherwise the mode and blocked set (with prefix-path
    // semantics) decide. No record at all means default opt-in.
    bool is_deliverable(const Hash256& subscriber, const std::string& header,
                        const std::string& category,
                        bool consent_overrides_fully_blocked = false) const {
        auto cit = consent_.find(consent_key(subscriber, header));
        bool consented = cit != consent_.end() && cit->second == ConsentStatus::Granted;

        auto pit = pref_.find(to_hex(subscriber));
        if (pit == pref_.end()) return true;  // default opt-in
        const PrefEntry& p = pit->second;

        if (p.mode == PreferenceMode::FullyBlocked)
            return consented && consent_overrides_fully_blocked;
        if (consented) return true;
        if (p.mode == PreferenceMode::FullyOpen) return true;
        for (const auto& blocked : p.blocked)
            if (category_blocks(blocked, category)) return false;
        return true;
    }

    std::string operator_of(const Hash256& subscriber) const {
        auto pit = pref_.find(to_hex(subscriber));
        return pit == pref_.end() ? std::string{} : pit->second.operator_id;
    }

private:
    static std::string consent_key(const Hash256& subscriber, const std::string& header) {
        return to_hex(subscriber) + "/" + header;
    }

    void apply_write(const WriteEntry& w) {
        if (w.key.rfind("pref/", 0) == 0) {
            if (w.is_delete) {
                pref_.erase(w.key.substr(5));
                return;
            }
            PreferenceRecord rec = PreferenceRecord::decode(w.value);
            pref_[to_hex(rec.subscriber)] =
                PrefEntry{rec.mode, rec.blocked_categories, rec.operator_id};
        } else if (w.key.rfind("consent/", 0) == 0) {
            if (w.is_delete) {
                consent_.erase(w.key.substr(8));
                return;
            }
            ConsentRecord rec = ConsentRecord::decode(w.value);
            consent_[consent_key(rec.subscriber, rec.header)] = rec.status;
        }
    }

    std::map<std::string, PrefEntry> pref_;
    std::map<std::string, ConsentStatus> consent_;
    std::uint64_t height_ = 0;
};

struct ScrubRequest {
    std::string tm_id;
    std::string header;
    Hash256 template_id{};
    std::string category;
    std::vector<std::string> numbers;  // plaintext, telemarketer-supplied
    std::uint64_t requested_at = 0;
};

// Plaintext per-operator file (pre-encryption): newline-delimited normalized
// numbers, sorted ascending, so digests are order-independent.
inline Bytes render_operator_file(std::vector<std::string> numbers) {
    std::sort(numbers.begin(), numbers.end());
    std::string out;
    for (const auto& n : numbers) {
        out += n;
        out += '\n';
    }
    return to_bytes(out);
}

inline std::vector<std::string> parse_operator_file(const Bytes& plaintext) {
    std::vector<std::string> numbers;
    std::istringstream in(telechain::to_string(plaintext));
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) numbers.push_back(line);
    return numbers;
}

struct ScrubOutput {
    ScrubTokenRecord token;
    Bytes tx_args;  // encoded token, ready for a ScrubResult proposal
    // locator -> ciphertext, kept in the scrubber's content-addressed store
    std::map<std::string, Bytes> encrypted_files;
    // locator -> ciphertext for invalid files (scrubber/observer access only)
    std::map<std::string, Bytes> invalid_files;
};

// The scrubbing service proper. Holds the mirror, the file store, and the
// per-telemarketer request meter.
class Scrubber {
public:
    Scrubber(std::string id, crypto::KeyPair sign_keys, const NetworkConfig& config)
        : id_(std::move(id)), sign_keys_(std::move(sign_keys)), config_(&config) {}

    MirrorIndex& mirror() { return mirror_; }
    const MirrorIndex& mirror() const { return mirror_; }
    const std::map<std::string, std::uint64_t>& request_meter() const { return meter_; }
    const std::map<std::string, Bytes>& file_store() const { return store_; }

    // S = L - C, extended by header-scoped consent: partitions the valid set
    // by operator, encrypts each file to that operator, and anchors the
    // decision to the global state hash at the mirror's height.
    ScrubOutput scrub(const ScrubRequest& request, const WorldState& state,
                      const Roster& roster, crypto::DetRng& rng) {
        if (request.numbers.size() < config_->min_batch_size)
            throw Error(ErrorCode::BatchTooSmall,
                        std::to_string(request.numbers.size()) + " < " +
                            std::to_string(config_->min_batch_size));
        if (mirror_.height() != state.height())
            throw Error(ErrorCode::StaleIndex,
                        "mirror at " + std::to_string(mirror_.height()) + ", state at " +
                            std::to_string(state.height()));

        auto hraw = state.get(keys::header(request.header));
        if (!hraw) throw Error(ErrorCode::UnknownHeader, request.header);
        HeaderRecord hdr = HeaderRecord::decode(hraw->value);
        if (!hdr.delegated_to(request.tm_id))
            throw Error(ErrorCode::NotDelegated, request.tm_id);
        auto traw = state.get(keys::content_template(request.template_id));
        if (!traw) throw Error(ErrorCode::UnregisteredTemplate);
        TemplateRecord tmpl = TemplateRecord::decode(traw->value);
        if (tmpl.header != request.header)
            throw Error(ErrorCode::TokenHeaderMismatch, "template registered under " + tmpl.header);
        if (tmpl.kind == TemplateKind::Consent)
            throw Error(ErrorCode::UnregisteredTemplate, "consent templates cannot run campaigns");

        ++meter_[request.tm_id];

        std::map<std::string, std::vector<std::string>> valid_by_operator;
        std::vector<std::string> invalid;
        for (const auto& raw : request.numbers) {
            std::string normalized = normalize_phone(raw);
            Hash256 h = hash_subscriber(normalized, config_->consortium_key);
            if (mirror_.is_deliverable(h, request.header, request.category,
                                       config_->consent_overrides_fully_blocked)) {
                std::string op = mirror_.operator_of(h);
                if (op.empty()) op = config_->operator_for_number(normalized);
                if (op.empty()) op = "unknown";
                valid_by_operator[op].push_back(normalized);
            } else {
                invalid.push_back(normalized);
            }
        }

        ScrubOutput out;
        ScrubTokenRecord& token = out.token;
        token.token_id = rng.bytes(16);
        token.state_hash = state.state_hash();
        token.decision_height = state.height();
        token.scrubber_id = id_;
        token.tm_id = request.tm_id;
        token.header = request.header;
        token.template_id = request.template_id;
        token.category = request.category;
        token.input_count = request.numbers.size();
        token.invalid_count = invalid.size();

        for (const auto& [op, numbers] : valid_by_operator) {
            token.valid_count += numbers.size();
            Bytes plaintext = render_operator_file(numbers);
            Hash256 digest = crypto::sha256(plaintext);
            std::string locator = "scrubstore/" + to_hex(digest);

            auto rit = roster.find(op);
            Bytes recipient_key;
            if (rit != roster.end()) {
                auto mraw = state.get(keys::member(op));
                recipient_key = MemberRecord::decode(mraw->value).enc_public_key;
            }
            Bytes ciphertext;
            if (!recipient_key.empty())
                ciphertext = crypto::hybrid_encrypt(rng.bytes(32), recipient_key, plaintext);
            else
                ciphertext = plaintext;  // no registered key (test-only path)

            PerOperatorDigest po;
            po.operator_id = op;
            po.locator = locator;
            po.file_digest = digest;
            po.scrubber_signature = crypto::ed25519_sign(
                sign_keys_.seed, Bytes(digest.begin(), digest.end()));
            token.per_operator.push_back(std::move(po));

            out.encrypted_files[locator] = ciphertext;
            store_[locator] = ciphertext;
        }

        // Invalid numbers are retained in a file readable by the scrubber
        // and observer only; never referenced from the token.
        if (!invalid.empty()) {
            Bytes plaintext = render_operator_file(invalid);
            std::string locator = "scrubstore/invalid/" + to_hex(crypto::sha256(plaintext));
            out.invalid_files[locator] = plaintext;
            invalid_store_[locator] = plaintext;
        }

        out.tx_args = token.encode();
        return out;
    }

private:
    std::string id_;
    crypto::KeyPair sign_keys_;
    const NetworkConfig* config_;
    MirrorIndex mirror_;
    std::map<std::string, Bytes> store_;
    std::map<std::string, Bytes> invalid_store_;
    std::map<std::string, std::uint64_t> meter_;
};

// Operator-side token verification: decrypt the operator's own file,
// recompute its digest, check the scrubber's signature, and confirm the
// token is anchored on chain. Returns the plaintext valid list.
inline std::vector<std::string> verify_scrub_token(
    const std::string& operator_id, const ScrubTokenRecord& token,
    const std::map<std::string, Bytes>& file_store, const Bytes& operator_enc_seed,
    const WorldState& committed_state) {
    auto on_chain = committed_state.get(keys::scrub_token(token.token_id));
    if (!on_chain) throw Error(ErrorCode::TokenNotOnChain, to_hex(token.token_id));
    ScrubTokenRecord committed = ScrubTokenRecord::decode(on_chain->value);

    const PerOperatorDigest* mine = nullptr;
    for (const auto& po : committed.per_operator)
        if (po.operator_id == operator_id) mine = &po;
    if (!mine) throw Error(ErrorCode::TokenHeaderMismatch, "no file for " + operator_id);

    auto fit = file_store.find(mine->locator);
    if (fit == file_store.end()) throw Error(ErrorCode::IoFailure, mine->locator);

    auto sraw = committed_state.get(keys::member(committed.scrubber_id));
    if (!sraw) throw Error(ErrorCode::UnknownIdentity, committed.scrubber_id);
    MemberRecord scrubber = MemberRecord::decode(sraw->value);
    if (!crypto::ed25519_verify(scrubber.public_key,
                                Bytes(mine->file_digest.begin(), mine->file_digest.end()),
                                mine->scrubber_signature))
        throw Error(ErrorCode::BadSignature, "scrubber signature invalid");

    Bytes plaintext = crypto::hybrid_decrypt(operator_enc_seed, fit->second);
    if (!(crypto::sha256(plaintext) == mine->file_digest))
        throw Error(ErrorCode::DigestMismatch, mine->locator);
    return parse_operator_file(plaintext);
}

}  // namespace telechain
