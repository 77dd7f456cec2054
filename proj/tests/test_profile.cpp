#include <random>

#include <gtest/gtest.h>

#include "droidprof/error.hpp"
#include "droidprof/profile.hpp"

using namespace droidprof;

namespace {

std::string fixture(const std::string& name) { return std::string(DROIDPROF_FIXTURES) + "/" + name; }

}  // namespace

TEST(Profile, GinMasterFixture) {
  const auto p = build_profile(parse_log_file(fixture("ginmaster.log")), default_rules());
  EXPECT_EQ(p.sample_id(), "ginmaster-0001");
  EXPECT_EQ(p.target_names(Factor::SendingSensitiveInfo),
            (std::set<std::string>{"IMEI", "IMSI", "Phone number", "SIM number", "UID", "Wifi information"}));
  EXPECT_EQ(p.attribute(Factor::ConvertingData, "Cipher algorithm"), "Blowfish");
  EXPECT_EQ(p.attribute(Factor::ConvertingData, "Destination URL"), "client.mustmobile.net");
  EXPECT_FALSE(p.has(Factor::SendingSMS));
  EXPECT_EQ(p.entry_count(), 10u);
}

TEST(Profile, BenignFixtureIsEmpty) {
  EXPECT_TRUE(build_profile(parse_log_file(fixture("benign.log")), default_rules()).empty());
}

TEST(Profile, SmallestAttributeWins) {
  IntegratedSystemLog log("x", {},
                          {SandboxEvent{Channel::MAP, {{"imei", "9"}}}, SandboxEvent{Channel::MAP, {{"imei", "1"}}}});
  EXPECT_EQ(build_profile(log, default_rules()).attribute(Factor::SendingSensitiveInfo, "IMEI"), "1");
}

TEST(Profile, IndependentOfRuleOrder) {
  const auto log = parse_log_file(fixture("airpush_sms.log"));
  auto rules = default_rules().rules();
  const auto reference = build_profile(log, default_rules());
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(rules.begin(), rules.end(), rng);
    EXPECT_EQ(build_profile(log, RuleSet(rules, "shuffled")), reference);
  }
}

TEST(Profile, CanonicalTextRoundTrip) {
  const auto p = build_profile(parse_log_file(fixture("airpush_sms.log")), default_rules());
  const auto text = canonical_text(p);
  EXPECT_EQ(text.substr(0, 17), "@id airpush-0001\n");
  EXPECT_NE(text.find("Telephony/SendingSMS/Premium-rate SMS=10661234"), std::string::npos);
  EXPECT_EQ(parse_canonical_text(text), p);
  EXPECT_EQ(decode_profile(encode_profile(p)), p);
  BehaviorProfile anonymous;
  anonymous.add(Factor::Calling, "Premium-rate number", "a=b/c");
  EXPECT_EQ(decode_profile(encode_profile(anonymous)), anonymous);
  EXPECT_EQ(decode_profile(encode_profile(BehaviorProfile{})), BehaviorProfile{});
}

TEST(Profile, CorruptText) {
  for (std::string bad : {"Network/SendingSMS/T=1", "Phone/Calling", "Network/SIS/T=1", "Network/ConvertingData/=x",
                          "Network/ConvertingData/T=1\nNetwork/ConvertingData/T=2"}) {
    try {
      parse_canonical_text(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::CorruptProfile) << bad;
    }
  }
  EXPECT_THROW(decode_profile("%%%"), Error);
}

TEST(Profile, AddRemove) {
  BehaviorProfile p("s");
  EXPECT_TRUE(p.add(Factor::SendingSensitiveInfo, "IMEI", "1"));
  EXPECT_FALSE(p.add(Factor::SendingSensitiveInfo, "IMEI", "2"));
  EXPECT_EQ(p.attribute(Factor::SendingSensitiveInfo, "IMEI"), "1");
  EXPECT_THROW(p.add(Factor::SendingSensitiveInfo, "a/b", "1"), std::invalid_argument);
  p.remove(Factor::SendingSensitiveInfo, "IMEI");
  EXPECT_TRUE(p.empty());
  EXPECT_FALSE(p.has(Factor::SendingSensitiveInfo));
}

TEST(Profile, PrettyText) {
  BehaviorProfile p;
  p.add(Factor::SendingSMS, "Premium-rate SMS", "1066");
  EXPECT_EQ(pretty_text(p), "Telephony:\n  SendingSMS:\n    Premium-rate SMS: 1066\n");
}
