#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace droidprof {

// The four malicious behavior factors. Declaration order is the canonical
// order used for rendering and enumeration.
enum class Factor { SendingSMS, Calling, SendingSensitiveInfo, ConvertingData };

inline constexpr std::array<Factor, 4> kAllFactors = {
    Factor::SendingSMS, Factor::Calling, Factor::SendingSensitiveInfo, Factor::ConvertingData};

enum class ObjectType { Telephony, Phone, Network };

// Operation name as it appears in profiles, e.g. "SendingSensitiveInfo".
std::string_view operation_name(Factor f);
// Short tag: SS, CS, SIS, CDS.
std::string_view short_name(Factor f);
std::string_view to_string(ObjectType o);

// Accepts either the operation name or the short tag.
std::optional<Factor> parse_factor(std::string_view s);
std::optional<ObjectType> parse_object(std::string_view s);

// Fixed object assignment: SMS is telephony, calling is the phone, and the
// remaining two are network behavior.
constexpr ObjectType object_of(Factor f) {
  switch (f) {
    case Factor::SendingSMS: return ObjectType::Telephony;
    case Factor::Calling: return ObjectType::Phone;
    case Factor::SendingSensitiveInfo:
    case Factor::ConvertingData: return ObjectType::Network;
  }
  return ObjectType::Network;
}

}  // namespace droidprof
