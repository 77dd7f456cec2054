#include "droidprof/behavior.hpp"

namespace droidprof {

std::string_view operation_name(Factor f) {
  switch (f) {
    case Factor::SendingSMS: return "SendingSMS";
    case Factor::Calling: return "Calling";
    case Factor::SendingSensitiveInfo: return "SendingSensitiveInfo";
    case Factor::ConvertingData: return "ConvertingData";
  }
  return "?";
}

std::string_view short_name(Factor f) {
  switch (f) {
    case Factor::SendingSMS: return "SS";
    case Factor::Calling: return "CS";
    case Factor::SendingSensitiveInfo: return "SIS";
    case Factor::ConvertingData: return "CDS";
  }
  return "?";
}

std::string_view to_string(ObjectType o) {
  switch (o) {
    case ObjectType::Telephony: return "Telephony";
    case ObjectType::Phone: return "Phone";
    case ObjectType::Network: return "Network";
  }
  return "?";
}

std::optional<Factor> parse_factor(std::string_view s) {
  for (auto f : kAllFactors) {
    if (s == operation_name(f) || s == short_name(f)) return f;
  }
  return std::nullopt;
}

std::optional<ObjectType> parse_object(std::string_view s) {
  for (auto o : {ObjectType::Telephony, ObjectType::Phone, ObjectType::Network}) {
    if (s == to_string(o)) return o;
  }
  return std::nullopt;
}

}  // namespace droidprof
