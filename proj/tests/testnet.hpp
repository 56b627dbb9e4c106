#pragma once

// Small in-process consortium used by the unit tests: a handful of nodes,
// one orderer, and helpers that run the full propose / endorse / order /
// commit pipeline synchronously.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <telechain/audit.hpp>
#include <telechain/harness.hpp>
#include <telechain/node.hpp>
#include <telechain/scrubbing.hpp>

namespace telechain::test {

inline crypto::KeyPair test_sign_keys(const std::string& id) {
    return crypto::ed25519_keypair(crypto::derive_seed(777, "sign/" + id));
}

inline crypto::KeyPair test_enc_keys(const std::string& id) {
    return crypto::x25519_keypair(crypto::derive_seed(777, "enc/" + id));
}

struct TestNet {
    NetworkConfig config;
    RegulatorDb regulator;
    std::vector<MemberRecord> genesis;
    std::map<std::string, std::unique_ptr<Node>> nodes;
    std::unique_ptr<Orderer> orderer;
    std::uint64_t tick = 0;
    std::string last_error;

    TestNet() { orderer = std::make_unique<Orderer>(config); }

    void add_genesis(const std::string& id, Role role, const std::string& region = "") {
        MemberRecord m;
        m.id = id;
        m.role = role;
        m.public_key = test_sign_keys(id).public_key;
        m.enc_public_key = test_enc_keys(id).public_key;
        m.region = region;
        genesis.push_back(m);
    }

    void start() {
        for (const auto& m : genesis) {
            auto node = std::make_unique<Node>(m.id, m.role, test_sign_keys(m.id),
                                               test_enc_keys(m.id), config, regulator);
            nodes[m.id] = std::move(node);
        }
        for (auto& [id, node] : nodes)
            for (const auto& m : genesis) node->seed_genesis_member(m);
    }

    Node& node(const std::string& id) { return *nodes.at(id); }
    Node& ref() { return *nodes.begin()->second; }

    bool submit(const std::string& proposer_id, TxType type, Bytes args) {
        last_error.clear();
        Node& proposer = node(proposer_id);
        TransactionPayload payload;
        try {
            payload = proposer.propose(type, std::move(args), tick);
        } catch (const Error& e) {
            last_error = e.what();
            return false;
        }
        std::vector<Endorsement> endorsements;
        std::optional<ReadWriteSet> rwset;
        for (const auto& [id, n] : nodes) {
            try {
                auto [e, rw] = n->endorse(payload);
                if (!rwset) rwset = std::move(rw);
                endorsements.push_back(std::move(e));
            } catch (const ValidatorRejected& e) {
                if (last_error.empty()) last_error = e.what();
            }
        }
        Roster roster = roster_from_state(ref().state());
        if (!rwset || !evaluate_policy(ref().policies().rule_for(type), endorsements, roster)) {
            if (last_error.empty()) last_error = "policy unsatisfied";
            return false;
        }
        Transaction tx;
        tx.payload = payload;
        tx.proposer_signature = proposer.sign(payload.serialize());
        tx.rwset = std::move(*rwset);
        tx.endorsements = std::move(endorsements);
        orderer->submit(std::move(tx), tick);
        return true;
    }

    // Advances one tick and commits every block that is due.
    std::vector<CommitResult> step() {
        ++tick;
        std::vector<CommitResult> out;
        while (true) {
            auto block = orderer->maybe_cut(tick, ref().next_height(), ref().tip_hash());
            if (!block) break;
            CommitResult r;
            bool first = true;
            for (auto& [id, n] : nodes) {
                auto res = n->validate_and_commit(*block);
                if (first) {
                    r = std::move(res);
                    first = false;
                }
            }
            out.push_back(std::move(r));
        }
        return out;
    }

    bool commit(const std::string& proposer, TxType type, Bytes args) {
        if (!submit(proposer, type, std::move(args))) return false;
        auto results = step();
        if (results.empty()) return false;
        return results.back().dropped.empty();
    }

    Hash256 sub(const std::string& phone) const {
        return hash_subscriber(normalize_phone(phone), config.consortium_key);
    }
};

// A network with the usual cast: two operators, one scrubber, one observer,
// and TM-1 admitted through the registration flow.
inline TestNet make_basic_net(bool admit_tm = true) {
    TestNet net;
    net.regulator.receipts["TM-1"] = "RCPT-1";
    net.add_genesis("op-a", Role::Operator, "VM");
    net.add_genesis("op-b", Role::Operator, "AD");
    net.add_genesis("scrub-1", Role::Scrubber);
    net.add_genesis("obs-1", Role::Observer);
    net.start();
    if (admit_tm) {
        RegisterTelemarketerArgs args;
        args.tm_id = "TM-1";
        args.payment_receipt = "RCPT-1";
        auto keys = test_sign_keys("TM-1");
        args.public_key = keys.public_key;
        args.enc_public_key = test_enc_keys("TM-1").public_key;
        args.self_signature = crypto::ed25519_sign(keys.seed, keys.public_key);
        if (!net.commit("op-a", TxType::RegisterTelemarketer, args.encode()))
            throw std::runtime_error("TM admission failed: " + net.last_error);
        auto m = MemberRecord::decode(net.ref().state().get(keys::member("TM-1"))->value);
        auto node = std::make_unique<Node>("TM-1", Role::Telemarketer, test_sign_keys("TM-1"),
                                           test_enc_keys("TM-1"), net.config, net.regulator);
        for (const auto& g : net.genesis) node->seed_genesis_member(g);
        node->replay(net.ref().ledger());
        net.nodes["TM-1"] = std::move(node);
    }
    return net;
}

// Registers PE-1 / header / a promotional template under TM-1 and returns
// the template id. Commits each step in its own block.
inline Hash256 register_header_chain(TestNet& net, const std::string& header,
                                     const std::string& tmpl_text) {
    RegisterPrincipalEntityArgs pe;
    pe.pe_id = "PE-1";
    if (!net.ref().state().get(keys::principal_entity("PE-1")))
        if (!net.commit("TM-1", TxType::RegisterPrincipalEntity, pe.encode()))
            throw std::runtime_error("PE registration failed: " + net.last_error);
    RegisterHeaderArgs h;
    h.pe_id = "PE-1";
    h.header = header;
    if (!net.commit("TM-1", TxType::RegisterHeader, h.encode()))
        throw std::runtime_error("header registration failed: " + net.last_error);
    DelegateHeaderArgs d;
    d.pe_id = "PE-1";
    d.header = header;
    d.tm_id = "TM-1";
    if (!net.commit("TM-1", TxType::DelegateHeader, d.encode()))
        throw std::runtime_error("delegation failed: " + net.last_error);
    RegisterTemplateArgs t;
    t.header = header;
    t.text = tmpl_text;
    if (!net.commit("TM-1", TxType::RegisterTemplate, t.encode()))
        throw std::runtime_error("template registration failed: " + net.last_error);
    return TemplateRecord::compute_id(header, tmpl_text);
}

}  // namespace telechain::test
