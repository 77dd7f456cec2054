#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace droidprof {

struct SyscallRecord {
  std::string name;
  std::vector<std::string> args;
  // Original line text. Parsed records keep the input line; records built in
  // code get the canonical `S|name|arg...` rendering.
  std::string raw;

  static SyscallRecord make(std::string name, std::vector<std::string> args);

  friend bool operator==(const SyscallRecord& a, const SyscallRecord& b) {
    return a.name == b.name && a.args == b.args;
  }
  friend auto operator<=>(const SyscallRecord& a, const SyscallRecord& b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    return a.args <=> b.args;
  }
};

enum class Channel { SMS, CALL, NET_OPEN, NET_SEND, DATA_LEAK, MAP };

const char* to_string(Channel c);
std::optional<Channel> parse_channel(std::string_view s);

struct SandboxEvent {
  Channel channel = Channel::MAP;
  std::map<std::string, std::string> payload;

  friend bool operator==(const SandboxEvent&, const SandboxEvent&) = default;
  friend auto operator<=>(const SandboxEvent&, const SandboxEvent&) = default;
};

// One sample's integrated system log. The collection is a multiset: records
// and events are kept in a canonical sorted order so that iteration is
// stable and no consumer can observe the capture order.
class IntegratedSystemLog {
 public:
  IntegratedSystemLog(std::string sample_id, std::vector<SyscallRecord> records,
                      std::vector<SandboxEvent> events);

  const std::string& sample_id() const { return sample_id_; }
  const std::vector<SyscallRecord>& records() const { return records_; }
  const std::vector<SandboxEvent>& events() const { return events_; }
  std::size_t size() const { return records_.size() + events_.size(); }

  friend bool operator==(const IntegratedSystemLog&, const IntegratedSystemLog&) = default;

 private:
  std::string sample_id_;
  std::vector<SyscallRecord> records_;
  std::vector<SandboxEvent> events_;
};

// Parses the line-oriented log format:
//   S|<name>|<arg1>|<arg2>|...
//   E|<CHANNEL>|k1=v1;k2=v2;...
//   @id <sample_id>
//   # comment
// Blank lines are ignored. Without an `@id` header the sample id is the
// SHA-256 hex digest of the input bytes.
//
// Throws LineError(MalformedLine) on a bad line and Error(EmptyLog) when no
// records remain.
IntegratedSystemLog parse_log(std::string_view bytes);

// Reads the file and parses it. Throws std::system_error if unreadable.
IntegratedSystemLog parse_log_file(const std::string& path);

// Canonical text rendering, always with an `@id` header.
std::string serialize_log(const IntegratedSystemLog& log);

// Multiset union. Throws Error(SampleIdMismatch) unless the ids agree.
IntegratedSystemLog merge_logs(const IntegratedSystemLog& a, const IntegratedSystemLog& b);

}  // namespace droidprof
