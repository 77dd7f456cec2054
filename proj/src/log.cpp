#include "droidprof/log.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "droidprof/codec.hpp"
#include "droidprof/error.hpp"
#include "text.hpp"

namespace droidprof {

namespace {

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::string render_syscall(const std::string& name, const std::vector<std::string>& args) {
  std::string out = "S|" + name;
  for (const auto& a : args) {
    out += '|';
    out += a;
  }
  return out;
}

std::string render_event(const SandboxEvent& e) {
  std::string out = fmt::format("E|{}|", to_string(e.channel));
  bool first = true;
  for (const auto& [k, v] : e.payload) {
    if (!first) out += ';';
    first = false;
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

SyscallRecord parse_syscall_line(std::size_t line_no, std::string_view line) {
  auto fields = text::split(line, '|');
  // fields[0] is "S"
  if (fields.size() < 2 || !is_identifier(fields[1])) {
    throw LineError(ErrorKind::MalformedLine, line_no, "syscall name must be an identifier");
  }
  SyscallRecord rec;
  rec.name = std::string(fields[1]);
  for (std::size_t i = 2; i < fields.size(); ++i) rec.args.emplace_back(fields[i]);
  rec.raw = std::string(line);
  return rec;
}

SandboxEvent parse_event_line(std::size_t line_no, std::string_view line) {
  const auto bar = line.find('|', 2);
  const auto channel_text = line.substr(2, bar == std::string_view::npos ? line.npos : bar - 2);
  const auto channel = parse_channel(channel_text);
  if (!channel) {
    throw LineError(ErrorKind::MalformedLine, line_no,
                    fmt::format("unknown event channel '{}'", channel_text));
  }
  SandboxEvent ev;
  ev.channel = *channel;
  if (bar == std::string_view::npos) return ev;
  const auto payload = line.substr(bar + 1);
  if (payload.empty()) return ev;
  for (auto item : text::split(payload, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw LineError(ErrorKind::MalformedLine, line_no,
                      fmt::format("payload item '{}' is not key=value", item));
    }
    auto [it, inserted] =
        ev.payload.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (!inserted) {
      throw LineError(ErrorKind::MalformedLine, line_no,
                      fmt::format("duplicate payload key '{}'", it->first));
    }
  }
  return ev;
}

}  // namespace

SyscallRecord SyscallRecord::make(std::string name, std::vector<std::string> args) {
  SyscallRecord rec;
  rec.raw = render_syscall(name, args);
  rec.name = std::move(name);
  rec.args = std::move(args);
  return rec;
}

const char* to_string(Channel c) {
  switch (c) {
    case Channel::SMS: return "SMS";
    case Channel::CALL: return "CALL";
    case Channel::NET_OPEN: return "NET_OPEN";
    case Channel::NET_SEND: return "NET_SEND";
    case Channel::DATA_LEAK: return "DATA_LEAK";
    case Channel::MAP: return "MAP";
  }
  return "?";
}

std::optional<Channel> parse_channel(std::string_view s) {
  for (auto c : {Channel::SMS, Channel::CALL, Channel::NET_OPEN, Channel::NET_SEND,
                 Channel::DATA_LEAK, Channel::MAP}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

IntegratedSystemLog::IntegratedSystemLog(std::string sample_id, std::vector<SyscallRecord> records,
                                         std::vector<SandboxEvent> events)
    : sample_id_(std::move(sample_id)), records_(std::move(records)), events_(std::move(events)) {
  std::stable_sort(records_.begin(), records_.end());
  std::sort(events_.begin(), events_.end());
}

IntegratedSystemLog parse_log(std::string_view bytes) {
  std::vector<SyscallRecord> records;
  std::vector<SandboxEvent> events;
  std::optional<std::string> sample_id;

  text::for_each_line(bytes, [&](std::size_t line_no, std::string_view line) {
    if (text::trim(line).empty() || line.front() == '#') return;
    if (line.starts_with("@id")) {
      const auto id = text::trim(line.substr(3));
      if (line.size() > 3 && line[3] != ' ' && line[3] != '\t') {
        throw LineError(ErrorKind::MalformedLine, line_no, "unknown header");
      }
      if (id.empty()) throw LineError(ErrorKind::MalformedLine, line_no, "empty sample id");
      if (sample_id) throw LineError(ErrorKind::MalformedLine, line_no, "duplicate @id header");
      sample_id = std::string(id);
      return;
    }
    if (line.size() < 2 || line[1] != '|') {
      throw LineError(ErrorKind::MalformedLine, line_no, "expected 'S|' or 'E|' prefix");
    }
    switch (line.front()) {
      case 'S': records.push_back(parse_syscall_line(line_no, line)); break;
      case 'E': events.push_back(parse_event_line(line_no, line)); break;
      default:
        throw LineError(ErrorKind::MalformedLine, line_no,
                        fmt::format("unknown record kind '{}'", line.front()));
    }
  });

  if (records.empty() && events.empty()) throw Error(ErrorKind::EmptyLog, "log has no records");
  return IntegratedSystemLog(sample_id ? *sample_id : sha256_hex(bytes), std::move(records),
                             std::move(events));
}

IntegratedSystemLog parse_log_file(const std::string& path) { return parse_log(read_file(path)); }

std::string serialize_log(const IntegratedSystemLog& log) {
  std::string out = fmt::format("@id {}\n", log.sample_id());
  for (const auto& r : log.records()) {
    out += render_syscall(r.name, r.args);
    out += '\n';
  }
  for (const auto& e : log.events()) {
    out += render_event(e);
    out += '\n';
  }
  return out;
}

IntegratedSystemLog merge_logs(const IntegratedSystemLog& a, const IntegratedSystemLog& b) {
  if (a.sample_id() != b.sample_id()) {
    throw Error(ErrorKind::SampleIdMismatch,
                fmt::format("cannot merge '{}' with '{}'", a.sample_id(), b.sample_id()));
  }
  auto records = a.records();
  records.insert(records.end(), b.records().begin(), b.records().end());
  auto events = a.events();
  events.insert(events.end(), b.events().begin(), b.events().end());
  return IntegratedSystemLog(a.sample_id(), std::move(records), std::move(events));
}

}  // namespace droidprof
