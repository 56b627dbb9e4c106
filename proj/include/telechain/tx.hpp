#pragma once

#include <optional>
#include <string>
#include <vector>

#include "telechain/bytes.hpp"
#include "telechain/crypto.hpp"
#include "telechain/errors.hpp"

namespace telechain {

enum class TxType : std::uint8_t {
    RegisterTelemarketer = 0,
    RegisterPrincipalEntity = 1,
    RegisterHeader = 2,
    DelegateHeader = 3,
    RegisterTemplate = 4,
    RegisterConsentTemplate = 5,
    UpdatePreference = 6,
    RequestConsent = 7,
    GrantConsent = 8,
    RevokeConsent = 9,
    ScrubResult = 10,
    CampaignInit = 11,
    CampaignStatus = 12,
    ComplaintFiled = 13,
    DegradedService = 14,
};

inline const char* tx_type_name(TxType t) {
    switch (t) {
        case TxType::RegisterTelemarketer: return "RegisterTelemarketer";
        case TxType::RegisterPrincipalEntity: return "RegisterPrincipalEntity";
        case TxType::RegisterHeader: return "RegisterHeader";
        case TxType::DelegateHeader: return "DelegateHeader";
        case TxType::RegisterTemplate: return "RegisterTemplate";
        case TxType::RegisterConsentTemplate: return "RegisterConsentTemplate";
        case TxType::UpdatePreference: return "UpdatePreference";
        case TxType::RequestConsent: return "RequestConsent";
        case TxType::GrantConsent: return "GrantConsent";
        case TxType::RevokeConsent: return "RevokeConsent";
        case TxType::ScrubResult: return "ScrubResult";
        case TxType::CampaignInit: return "CampaignInit";
        case TxType::CampaignStatus: return "CampaignStatus";
        case TxType::ComplaintFiled: return "ComplaintFiled";
        case TxType::DegradedService: return "DegradedService";
    }
    return "Unknown";
}

constexpr int kTxTypeCount = 15;

// MVCC version of a committed value: the block and in-block position that
// last wrote it.
struct Version {
    std::uint64_t height = 0;
    std::uint32_t tx_index = 0;

    bool operator==(const Version&) const = default;
};

struct TransactionPayload {
    TxType tx_type = TxType::RegisterTelemarketer;
    Bytes args;            // canonical byte-serialized argument list
    std::string proposer;  // identity id
    std::uint64_t nonce = 0;
    std::uint64_t timestamp = 0;  // logical tick

    Bytes serialize() const {
        Writer w;
        w.put_u8(static_cast<std::uint8_t>(tx_type));
        w.put_bytes(args);
        w.put_str(proposer);
        w.put_u64(nonce);
        w.put_u64(timestamp);
        return w.take();
    }

    static TransactionPayload deserialize(Reader& r) {
        TransactionPayload p;
        p.tx_type = static_cast<TxType>(r.get_u8());
        p.args = r.get_bytes();
        p.proposer = r.get_str();
        p.nonce = r.get_u64();
        p.timestamp = r.get_u64();
        return p;
    }

    Hash256 digest() const { return crypto::sha256(serialize()); }
};

struct ReadEntry {
    std::string key;
    bool exists = false;  // key was absent at endorsement time when false
    Version version;      // meaningful only when exists

    bool operator==(const ReadEntry&) const = default;
};

struct WriteEntry {
    std::string key;
    bool is_delete = false;
    Bytes value;

    bool operator==(const WriteEntry&) const = default;
};

struct ReadWriteSet {
    std::vector<ReadEntry> reads;
    std::vector<WriteEntry> writes;

    Bytes serialize() const {
        Writer w;
        w.put_u32(static_cast<std::uint32_t>(reads.size()));
        for (const auto& r : reads) {
            w.put_str(r.key);
            w.put_u8(r.exists ? 1 : 0);
            w.put_u64(r.version.height);
            w.put_u32(r.version.tx_index);
        }
        w.put_u32(static_cast<std::uint32_t>(writes.size()));
        for (const auto& e : writes) {
            w.put_str(e.key);
            w.put_u8(e.is_delete ? 1 : 0);
            w.put_bytes(e.value);
        }
        return w.take();
    }

    static ReadWriteSet deserialize(Reader& r) {
        ReadWriteSet s;
        std::uint32_t nr = r.get_u32();
        for (std::uint32_t i = 0; i < nr; ++i) {
            ReadEntry e;
            e.key = r.get_str();
            e.exists = r.get_u8() != 0;
            e.version.height = r.get_u64();
            e.version.tx_index = r.get_u32();
            s.reads.push_back(std::move(e));
        }
        std::uint32_t nw = r.get_u32();
        for (std::uint32_t i = 0; i < nw; ++i) {
            WriteEntry e;
            e.key = r.get_str();
            e.is_delete = r.get_u8() != 0;
            e.value = r.get_bytes();
            s.writes.push_back(std::move(e));
        }
        return s;
    }

    Hash256 digest() const { return crypto::sha256(serialize()); }

    bool operator==(const ReadWriteSet&) const = default;
};

struct Endorsement {
    std::string endorser;
    Hash256 rwset_digest{};
    Bytes signature;  // over (payload digest || rwset digest)

    Bytes serialize() const {
        Writer w;
        w.put_str(endorser);
        w.put_hash(rwset_digest);
        w.put_bytes(signature);
        return w.take();
    }

    static Endorsement deserialize(Reader& r) {
        Endorsement e;
        e.endorser = r.get_str();
        e.rwset_digest = r.get_hash();
        e.signature = r.get_bytes();
        return e;
    }
};

inline Bytes endorsement_message(const Hash256& payload_digest, const Hash256& rwset_digest) {
    Writer w;
    w.put_hash(payload_digest);
    w.put_hash(rwset_digest);
    return w.take();
}

// A fully endorsed transaction as it appears inside a block.
struct Transaction {
    TransactionPayload payload;
    Bytes proposer_signature;  // over payload bytes
    ReadWriteSet rwset;
    std::vector<Endorsement> endorsements;

    Bytes serialize() const {
        Writer w;
        w.put_bytes(payload.serialize());
        w.put_bytes(proposer_signature);
        w.put_bytes(rwset.serialize());
        w.put_u32(static_cast<std::uint32_t>(endorsements.size()));
        for (const auto& e : endorsements) w.put_bytes(e.serialize());
        return w.take();
    }

    static Transaction deserialize(Reader& r) {
        Transaction t;
        Bytes pb = r.get_bytes();
        Reader pr(pb);
        t.payload = TransactionPayload::deserialize(pr);
        t.proposer_signature = r.get_bytes();
        Bytes rb = r.get_bytes();
        Reader rr(rb);
        t.rwset = ReadWriteSet::deserialize(rr);
        std::uint32_t ne = r.get_u32();
        for (std::uint32_t i = 0; i < ne; ++i) {
            Bytes eb = r.get_bytes();
            Reader er(eb);
            t.endorsements.push_back(Endorsement::deserialize(er));
        }
        return t;
    }
};

struct Block {
    std::uint64_t height = 0;
    Hash256 prev_hash{};
    std::vector<Transaction> tx_list;
    Hash256 block_hash{};
    std::vector<std::uint8_t> validity_flags;  // set at commit, not hashed

    Bytes tx_list_bytes() const {
        Writer w;
        w.put_u32(static_cast<std::uint32_t>(tx_list.size()));
        for (const auto& t : tx_list) w.put_bytes(t.serialize());
        return w.take();
    }

    Hash256 compute_hash() const {
        Writer w;
        w.put_u64(height);
        w.put_hash(prev_hash);
        w.put_bytes(tx_list_bytes());
        return crypto::sha256(w.bytes());
    }

    Bytes serialize() const {
        Writer w;
        w.put_u64(height);
        w.put_hash(prev_hash);
        w.put_bytes(tx_list_bytes());
        w.put_hash(block_hash);
        w.put_u32(static_cast<std::uint32_t>(validity_flags.size()));
        for (auto f : validity_flags) w.put_u8(f);
        return w.take();
    }

    static Block deserialize(Reader& r) {
        Block b;
        b.height = r.get_u64();
        b.prev_hash = r.get_hash();
        Bytes txb = r.get_bytes();
        Reader tr(txb);
        std::uint32_t n = tr.get_u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            Bytes tb = tr.get_bytes();
            Reader ttr(tb);
            b.tx_list.push_back(Transaction::deserialize(ttr));
        }
        b.block_hash = r.get_hash();
        std::uint32_t nf = r.get_u32();
        for (std::uint32_t i = 0; i < nf; ++i) b.validity_flags.push_back(r.get_u8());
        return b;
    }
};

inline constexpr Hash256 zero_hash() { return Hash256{}; }

}  // namespace telechain
