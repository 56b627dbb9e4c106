#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "telechain/domain.hpp"
#include "telechain/errors.hpp"
#include "telechain/tx.hpp"

namespace telechain {

// Endorsement policies: a boolean combinator tree over role/identity
// predicates, evaluated against the set of endorser identities. Evaluation
// is a pure function of the endorsement set and the membership roster.

struct RosterEntry {
    Role role;
    Bytes public_key;
};

using Roster = std::map<std::string, RosterEntry>;

class PolicyRule;
using PolicyRulePtr = std::shared_ptr<const PolicyRule>;

class PolicyRule {
public:
    enum class Kind { Majority, AllOfRole, AtLeast, HasId, And, Or };

    Kind kind = Kind::Majority;
    Role role = Role::Operator;   // AllOfRole / AtLeast
    std::size_t count = 0;        // AtLeast
    std::string id;               // HasId
    std::vector<PolicyRulePtr> children;  // And / Or

    static PolicyRulePtr majority() {
        auto r = std::make_shared<PolicyRule>();
        r->kind = Kind::Majority;
        return r;
    }
    static PolicyRulePtr all_of_role(Role role) {
        auto r = std::make_shared<PolicyRule>();
        r->kind = Kind::AllOfRole;
        r->role = role;
        return r;
    }
    static PolicyRulePtr at_least(std::size_t n, Role role) {
        auto r = std::make_shared<PolicyRule>();
        r->kind = Kind::AtLeast;
        r->count = n;
        r->role = role;
        return r;
    }
    static PolicyRulePtr has_id(std::string id) {
        auto r = std::make_shared<PolicyRule>();
        r->kind = Kind::HasId;
        r->id = std::move(id);
        return r;
    }
    static PolicyRulePtr all_of(std::vector<PolicyRulePtr> children) {
        auto r = std::make_shared<PolicyRule>();
        r->kind = Kind::And;
        r->children = std::move(children);
        return r;
    }
    static PolicyRulePtr any_of(std::vector<PolicyRulePtr> children) {
        auto r = std::make_shared<PolicyRule>();
        r->kind = Kind::Or;
        r->children = std::move(children);
        return r;
    }

    bool evaluate(const std::set<std::string>& endorsers, const Roster& roster) const {
        switch (kind) {
            case Kind::Majority: {
                std::size_t present = 0;
                for (const auto& [id_, _] : roster)
                    if (endorsers.count(id_)) ++present;
                return present * 2 > roster.size();
            }
            case Kind::AllOfRole: {
                for (const auto& [id_, entry] : roster)
                    if (entry.role == role && !endorsers.count(id_)) return false;
                return true;
            }
            case Kind::AtLeast: {
                std::size_t present = 0;
                for (const auto& id_ : endorsers) {
                    auto it = roster.find(id_);
                    if (it != roster.end() && it->second.role == role) ++present;
                }
                return present >= count;
            }
            case Kind::HasId:
                return endorsers.count(id) > 0 && roster.count(id) > 0;
            case Kind::And:
                for (const auto& c : children)
                    if (!c->evaluate(endorsers, roster)) return false;
                return true;
            case Kind::Or:
                for (const auto& c : children)
                    if (c->evaluate(endorsers, roster)) return true;
                return false;
        }
        return false;
    }

    // Identities whose endorsement could contribute to satisfying the rule;
    // proposals are circulated to this set.
    std::set<std::string> candidate_endorsers(const Roster& roster) const {
        std::set<std::string> out;
        switch (kind) {
            case Kind::Majority:
                for (const auto& [id_, _] : roster) out.insert(id_);
                break;
            case Kind::AllOfRole:
            case Kind::AtLeast:
                for (const auto& [id_, entry] : roster)
                    if (entry.role == role) out.insert(id_);
                break;
            case Kind::HasId:
                if (roster.count(id)) out.insert(id);
                break;
            case Kind::And:
            case Kind::Or:
                for (const auto& c : children) {
                    auto sub = c->candidate_endorsers(roster);
                    out.insert(sub.begin(), sub.end());
                }
                break;
        }
        return out;
    }
};

// Per-tx-type policy table. Default everywhere: majority of all
// participants. Header-affecting registrations use the stricter rule: all
// telemarketer nodes, the observer, and at least one operator.
class PolicyTable {
public:
    PolicyTable() {
        for (int i = 0; i < kTxTypeCount; ++i) rules_[static_cast<TxType>(i)] = PolicyRule::majority();
        auto strict = PolicyRule::all_of({
            PolicyRule::all_of_role(Role::Telemarketer),
            PolicyRule::at_least(1, Role::Observer),
            PolicyRule::at_least(1, Role::Operator),
        });
        rules_[TxType::RegisterPrincipalEntity] = strict;
        rules_[TxType::RegisterHeader] = strict;
    }

    const PolicyRulePtr& rule_for(TxType t) const { return rules_.at(t); }
    void set_rule(TxType t, PolicyRulePtr rule) { rules_[t] = std::move(rule); }

private:
    std::map<TxType, PolicyRulePtr> rules_;
};

// Pure accept/reject over a set of verified endorsements. All endorsement
// digests must agree; a mismatch signals nondeterministic execution or
// divergent endorser state.
inline bool evaluate_policy(const PolicyRulePtr& rule,
                            const std::vector<Endorsement>& endorsements,
                            const Roster& roster) {
    std::set<std::string> endorsers;
    for (const auto& e : endorsements) {
        if (!endorsements.empty() && !(e.rwset_digest == endorsements.front().rwset_digest))
            throw Error(ErrorCode::MismatchedReadWriteSets,
                        "endorsement digests diverge");
        endorsers.insert(e.endorser);
    }
    return rule->evaluate(endorsers, roster);
}

}  // namespace telechain
