#include <catch2/catch_amalgamated.hpp>

#include <regex>

#include <telechain/header_rules.hpp>
#include <telechain/templates.hpp>

#include "testnet.hpp"

using namespace telechain;
using namespace telechain::test;

TEST_CASE("header format: exactly six uppercase alphanumerics") {
    CHECK(valid_header_format("STABAN"));
    CHECK(valid_header_format("AB12CD"));
    CHECK_FALSE(valid_header_format("staban"));
    CHECK_FALSE(valid_header_format("STABA"));
    CHECK_FALSE(valid_header_format("STABANX"));
    CHECK_FALSE(valid_header_format("STA-AN"));
    CHECK_FALSE(valid_header_format(""));
}

TEST_CASE("confusable folding maps digit lookalikes onto letters") {
    CHECK(fold_confusables("5TABAN") == "STABAN");
    CHECK(fold_confusables("STA8AN") == "STABAN");
    CHECK(fold_confusables("0L1I5T") == "OIIIST");
    CHECK(fold_confusables("staban") == "STABAN");
}

TEST_CASE("levenshtein distance matches known values") {
    CHECK(levenshtein("", "") == 0);
    CHECK(levenshtein("abc", "abc") == 0);
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("flaw", "lawn") == 2);
    CHECK(levenshtein("abc", "") == 3);
}

TEST_CASE("the canonical spoofing pair is a lookalike") {
    // one transposition plus one substitution: distance 2
    CHECK(lookalike_distance("STABAN", "SBIBAN") <= 2);
    CHECK(is_lookalike("STABAN", "SBIBAN"));
    CHECK(is_lookalike("STABAN", "5TABAN"));   // pure confusable, distance 0
    CHECK(is_lookalike("STABAN", "STA8AN"));
    CHECK_FALSE(is_lookalike("STABAN", "EDUCRS"));
}

TEST_CASE("generated confusable variants always collide; random headers do not") {
    crypto::DetRng rng(11);
    const std::string alphabet = "ABCDEFGHIJKMNPQRTUVWXYZ234679";  // no confusable chars
    auto random_header = [&]() {
        std::string h;
        for (int i = 0; i < 6; ++i) h.push_back(alphabet[rng.below(alphabet.size())]);
        return h;
    };
    const std::map<char, char> to_digit{{'O', '0'}, {'I', '1'}, {'S', '5'}, {'B', '8'}};

    for (int t = 0; t < 50; ++t) {
        std::string base = "SOBIAN";  // every char has a confusable twin
        std::string variant = base;
        std::size_t pos = 1 + rng.below(4);
        variant[pos] = to_digit.count(variant[pos]) ? to_digit.at(variant[pos]) : 'X';
        INFO(base << " vs " << variant);
        CHECK(is_lookalike(base, variant));
    }

    int false_hits = 0;
    for (int t = 0; t < 50; ++t) {
        std::string a = random_header(), b = random_header();
        if (lookalike_distance(a, b) > 2) continue;  // genuinely close, skip
        ++false_hits;
    }
    CHECK(false_hits <= 2);  // random 6-char headers almost never collide
}

TEST_CASE("lookalike registration is rejected on chain") {
    TestNet net = make_basic_net();
    register_header_chain(net, "STABAN", "Loan offer <%x%>.");

    RegisterHeaderArgs spoof{"PE-1", "SBIBAN"};
    CHECK_FALSE(net.submit("TM-1", TxType::RegisterHeader, spoof.encode()));
    CHECK(net.last_error.find("collides") != std::string::npos);

    RegisterHeaderArgs confusable{"PE-1", "5TABAN"};
    CHECK_FALSE(net.submit("TM-1", TxType::RegisterHeader, confusable.encode()));

    RegisterHeaderArgs dup{"PE-1", "STABAN"};
    CHECK_FALSE(net.submit("TM-1", TxType::RegisterHeader, dup.encode()));

    RegisterHeaderArgs bad{"PE-1", "st@ban"};
    CHECK_FALSE(net.submit("TM-1", TxType::RegisterHeader, bad.encode()));

    RegisterHeaderArgs distinct{"PE-1", "EDUCRS"};
    CHECK(net.commit("TM-1", TxType::RegisterHeader, distinct.encode()));
}

TEST_CASE("display header round-trip and p2p classification") {
    CHECK(display_header("VM", "STABAN") == "VM-STABAN");
    std::string prefix, header;
    REQUIRE(split_display_header("VM-STABAN", prefix, header));
    CHECK(prefix == "VM");
    CHECK(header == "STABAN");
    CHECK_FALSE(split_display_header("STABAN", prefix, header));
    CHECK_FALSE(split_display_header("VMX-STABAN", prefix, header));
    CHECK_FALSE(split_display_header("VM-staban", prefix, header));

    CHECK(is_p2p_number("9812345678"));
    CHECK_FALSE(is_p2p_number("98123456"));
    CHECK_FALSE(is_p2p_number("98123456AB"));
}

TEST_CASE("template grammar rejects malformed placeholders") {
    CHECK(well_formed_template("plain text"));
    CHECK(well_formed_template("Hi <%name%>, bye"));
    CHECK(well_formed_template("<%a%><%b%>"));
    CHECK_FALSE(well_formed_template("unclosed <%name"));
    CHECK_FALSE(well_formed_template("nested <%a<%b%>%>"));
    CHECK_FALSE(well_formed_template("stray %> here"));
}

TEST_CASE("template matching basics") {
    CHECK(match_template("Hi <%name%>!", "Hi Ravi!"));
    CHECK_FALSE(match_template("Hi <%name%>!", "Hi !"));       // empty fill
    CHECK_FALSE(match_template("Hi <%name%>!", "Hello Ravi!"));
    CHECK(match_template("no slots", "no slots"));
    CHECK_FALSE(match_template("no slots", "no slots "));
    CHECK(match_template("<%a%>-<%b%>", "x-y"));
    CHECK(match_template("<%a%>-<%b%>", "x-y-z"));  // first slot absorbs "x-y" or dash binds later
    // a fill may not contain a slot opener
    CHECK_FALSE(match_template("a<%x%>b", "a<%b"));
}

TEST_CASE("matcher agrees with a regex oracle on random inputs") {
    crypto::DetRng rng(1234);
    const std::string lit_chars = "abc d";
    const std::string fill_chars = "xyz w";
    auto random_string = [&](const std::string& chars, std::size_t min_len,
                             std::size_t max_len) {
        std::size_t n = min_len + rng.below(max_len - min_len + 1);
        std::string s;
        for (std::size_t i = 0; i < n; ++i) s.push_back(chars[rng.below(chars.size())]);
        return s;
    };

    for (int t = 0; t < 300; ++t) {
        // random template: alternating-ish literals and slots
        std::string tmpl;
        std::string regex_str = "^";
        std::size_t parts = 1 + rng.below(5);
        for (std::size_t p = 0; p < parts; ++p) {
            if (rng.below(2) == 0) {
                std::string lit = random_string(lit_chars, 1, 5);
                tmpl += lit;
                for (char c : lit) {
                    if (c == ' ') regex_str += ' ';
                    else regex_str += c;
                }
            } else {
                tmpl += "<%s%>";
                regex_str += "(.+?)";
            }
        }
        regex_str += "$";

        // candidate messages: one built from the template, one random
        std::string filled;
        for (const auto& seg : parse_template(tmpl)) {
            if (seg.is_slot) filled += random_string(fill_chars, 1, 4);
            else filled += seg.literal;
        }
        std::string random_msg = random_string(lit_chars + fill_chars, 1, 12);

        std::regex oracle(regex_str);
        for (const std::string& msg : {filled, random_msg}) {
            bool expect = std::regex_match(msg, oracle);
            INFO("template [" << tmpl << "] message [" << msg << "]");
            CHECK(match_template(tmpl, msg) == expect);
        }
    }
}

TEST_CASE("consent template wording rules") {
    CHECK(valid_consent_template(
        "You may receive up to 4 sms/month from STABAN. Your consent OTP: <%otp%>"));
    CHECK(valid_consent_template("Up to 2 sms/week. Confirm via <%link%>"));
    // missing frequency
    CHECK_FALSE(valid_consent_template("Reply with OTP <%otp%> to consent"));
    // missing otp / link
    CHECK_FALSE(valid_consent_template("Up to 4 sms/month from <%hdr%>"));
    // no slot at all
    CHECK_FALSE(valid_consent_template("Up to 4 sms/month, reply with your OTP"));
    // malformed
    CHECK_FALSE(valid_consent_template("4 sms/month OTP <%otp"));
}

TEST_CASE("literal overlap scores shared fragments") {
    CHECK(literal_overlap("Hello <%a%> world", "Hello big world") ==
          std::string("Hello ").size() + std::string(" world").size());
    CHECK(literal_overlap("abc<%x%>", "zzz") == 0);
}

TEST_CASE("promotional template registration validates shape and delegation") {
    TestNet net = make_basic_net();
    register_header_chain(net, "ACMEPL", "Offer <%x%> now.");

    RegisterTemplateArgs bad;
    bad.header = "ACMEPL";
    bad.text = "broken <%slot";
    CHECK_FALSE(net.submit("TM-1", TxType::RegisterTemplate, bad.encode()));

    RegisterTemplateArgs unknown;
    unknown.header = "NOHEAD";
    unknown.text = "fine text";
    CHECK_FALSE(net.submit("TM-1", TxType::RegisterTemplate, unknown.encode()));

    auto raw = net.ref().state().get(
        keys::content_template(TemplateRecord::compute_id("ACMEPL", "Offer <%x%> now.")));
    REQUIRE(raw.has_value());
    TemplateRecord t = TemplateRecord::decode(raw->value);
    CHECK(t.kind == TemplateKind::Promotional);
    CHECK(t.header == "ACMEPL");
}

TEST_CASE("consent lifecycle: request, wrong otp, expiry, grant, revoke") {
    TestNet net = make_basic_net();
    register_header_chain(net, "STABAN", "Loan offer <%x%>.");

    const std::string consent_text =
        "You may receive up to 4 sms/month from STABAN. Your consent OTP: <%otp%>";
    RegisterTemplateArgs ct;
    ct.header = "STABAN";
    ct.text = consent_text;
    REQUIRE(net.commit("TM-1", TxType::RegisterConsentTemplate, ct.encode()));

    // a promotional template cannot masquerade as consent wording
    RegisterTemplateArgs not_consent;
    not_consent.header = "STABAN";
    not_consent.text = "Just buy stuff <%x%>";
    CHECK_FALSE(net.submit("TM-1", TxType::RegisterConsentTemplate, not_consent.encode()));

    Hash256 subscriber = net.sub("9876543210");
    Hash256 otp_hash = crypto::sha256("otp-4711");

    RequestConsentArgs req;
    req.header = "STABAN";
    req.subscriber = subscriber;
    req.consent_template_id = TemplateRecord::compute_id("STABAN", consent_text);
    req.otp_hash = otp_hash;
    req.otp_expiry = net.tick + net.config.otp_ttl_ticks;
    REQUIRE(net.commit("TM-1", TxType::RequestConsent, req.encode()));

    GrantConsentArgs wrong;
    wrong.subscriber = subscriber;
    wrong.header = "STABAN";
    wrong.token_hash = crypto::sha256("otp-9999");
    CHECK_FALSE(net.submit("op-a", TxType::GrantConsent, wrong.encode()));
    CHECK(net.last_error.find("OtpMismatch") != std::string::npos);

    GrantConsentArgs grant;
    grant.subscriber = subscriber;
    grant.header = "STABAN";
    grant.token_hash = otp_hash;
    REQUIRE(net.commit("op-a", TxType::GrantConsent, grant.encode()));

    auto raw = net.ref().state().get(keys::consent(subscriber, "STABAN"));
    REQUIRE(raw.has_value());
    ConsentRecord rec = ConsentRecord::decode(raw->value);
    CHECK(rec.status == ConsentStatus::Granted);
    REQUIRE(rec.history.size() == 2);
    CHECK(rec.history[0].first == ConsentStatus::Requested);
    CHECK(rec.history[1].first == ConsentStatus::Granted);

    // double grant has no pending request to act on
    CHECK_FALSE(net.submit("op-a", TxType::GrantConsent, grant.encode()));

    RevokeConsentArgs rev;
    rev.subscriber = subscriber;
    rev.header = "STABAN";
    REQUIRE(net.commit("op-a", TxType::RevokeConsent, rev.encode()));
    rec = ConsentRecord::decode(net.ref().state().get(keys::consent(subscriber, "STABAN"))->value);
    CHECK(rec.status == ConsentStatus::Revoked);
    CHECK(rec.history.size() == 3);
}

TEST_CASE("expired otp cannot grant consent") {
    TestNet net = make_basic_net();
    register_header_chain(net, "STABAN", "Loan offer <%x%>.");
    const std::string consent_text =
        "You may receive up to 4 sms/month from STABAN. Your consent OTP: <%otp%>";
    RegisterTemplateArgs ct;
    ct.header = "STABAN";
    ct.text = consent_text;
    REQUIRE(net.commit("TM-1", TxType::RegisterConsentTemplate, ct.encode()));

    RequestConsentArgs req;
    req.header = "STABAN";
    req.subscriber = net.sub("9876543210");
    req.consent_template_id = TemplateRecord::compute_id("STABAN", consent_text);
    req.otp_hash = crypto::sha256("otp-1");
    req.otp_expiry = net.tick + 2;  // expires almost immediately
    REQUIRE(net.commit("TM-1", TxType::RequestConsent, req.encode()));

    for (int i = 0; i < 5; ++i) net.step();

    GrantConsentArgs grant;
    grant.subscriber = req.subscriber;
    grant.header = "STABAN";
    grant.token_hash = req.otp_hash;
    CHECK_FALSE(net.submit("op-a", TxType::GrantConsent, grant.encode()));
    CHECK(net.last_error.find("OtpExpired") != std::string::npos);
}

TEST_CASE("consent request requires a registered consent-kind template") {
    TestNet net = make_basic_net();
    register_header_chain(net, "STABAN", "Loan offer <%x%>.");

    RequestConsentArgs req;
    req.header = "STABAN";
    req.subscriber = net.sub("9876543210");
    // promotional template id, not consent kind
    req.consent_template_id = TemplateRecord::compute_id("STABAN", "Loan offer <%x%>.");
    req.otp_hash = crypto::sha256("otp");
    req.otp_expiry = 100;
    CHECK_FALSE(net.submit("TM-1", TxType::RequestConsent, req.encode()));
}
