#include "droidprof/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "droidprof/codec.hpp"
#include "droidprof/error.hpp"
#include "droidprof/parallel.hpp"
#include "random.hpp"

namespace droidprof {

namespace {

using namespace rnd;

std::string digits(Rng& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += static_cast<char>('0' + below(rng, 10));
  return s;
}

// ---------------------------------------------------------------------------
// Filler

const std::vector<std::string> kSizes = {"64", "512", "1024", "4096", "8192", "16384"};
const std::vector<std::string> kOpenFlags = {"O_RDONLY", "O_RDWR", "O_WRONLY"};
const std::vector<std::string> kSystemFiles = {
    "/system/lib/libc.so",         "/system/lib/libsqlite.so",       "/system/lib/libandroid_runtime.so",
    "/system/framework/core.jar",  "/system/framework/framework.jar", "/dev/urandom",
    "/system/usr/share/zoneinfo/tzdata"};
constexpr int kMinFd = 3;
constexpr int kMaxFd = 63;
constexpr int kCacheFiles = 16;

std::vector<std::string> app_files(const std::string& pkg) {
  std::vector<std::string> out;
  for (int k = 0; k < kCacheFiles; ++k) out.push_back(fmt::format("/data/data/{}/files/cache{}.dat", pkg, k));
  out.push_back(fmt::format("/data/data/{}/shared_prefs/settings.xml", pkg));
  out.push_back(fmt::format("/data/data/{}/databases/app.db", pkg));
  return out;
}

std::vector<std::string> filler_paths(const std::string& pkg) {
  auto out = app_files(pkg);
  out.insert(out.end(), kSystemFiles.begin(), kSystemFiles.end());
  return out;
}

SyscallRecord filler_record(Rng& rng, const std::string& name, const std::string& pkg) {
  const auto fd = std::to_string(between(rng, kMinFd, kMaxFd));
  if (name == "read" || name == "write" || name == "recvmsg" || name == "sendmsg") {
    return SyscallRecord::make(name, {fd, pick(rng, kSizes)});
  }
  if (name == "open") return SyscallRecord::make(name, {pick(rng, filler_paths(pkg)), pick(rng, kOpenFlags)});
  if (name == "stat64") return SyscallRecord::make(name, {pick(rng, filler_paths(pkg))});
  if (name == "access") return SyscallRecord::make(name, {pick(rng, kSystemFiles), "R_OK"});
  return SyscallRecord::make(name, {fd});
}

// ---------------------------------------------------------------------------
// Behavior emitters

struct Emission {
  std::vector<SyscallRecord> records;
  std::vector<SandboxEvent> events;
};

// MAP payload keys accepted by the default rules for each target.
const std::map<std::string, std::vector<std::string>>& map_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"MCC", {"NET_OP", "mcc", "networkOperator", "sim_operator"}},
      {"MNC", {"mnc"}},
      {"Device ID", {"affid", "did", "device_id", "andide"}},
      {"OS version", {"osversion", "device_type"}},
      {"Device", {"manufacturer", "phoneModel", "device_name", "model"}},
      {"Wifi information", {"network", "wifi"}},
      {"Carrier", {"carrier", "device_carrier"}},
      {"IMEI", {"imei"}},
      {"IMSI", {"imsi"}},
      {"Location", {"longitude", "latitude"}},
      {"Country code", {"location", "country_code", "locale"}},
      {"Language", {"language"}},
      {"UID", {"uid"}},
      {"SIM number", {"sim_serial", "iccid"}},
      {"Phone number", {"phone_number", "line1_number"}},
  };
  return keys;
}

std::string map_value(Rng& rng, const std::string& target) {
  if (target == "MCC") return "460" + digits(rng, 2);
  if (target == "MNC") return digits(rng, 2);
  if (target == "Device ID") return digits(rng, 16);
  if (target == "OS version") return fmt::format("2.3.{}", below(rng, 8));
  if (target == "Device") return pick(rng, std::vector<std::string>{"GT-I9100", "Nexus-S", "HTC-Desire", "MB525"});
  if (target == "Wifi information") return pick(rng, std::vector<std::string>{"wifi", "WIFI", "connected"});
  if (target == "Carrier") return pick(rng, std::vector<std::string>{"ChinaMobile", "ChinaUnicom", "T-Mobile"});
  if (target == "IMEI") return "35" + digits(rng, 13);
  if (target == "IMSI") return "46000" + digits(rng, 10);
  if (target == "Location") return fmt::format("{}.{}", 20 + below(rng, 100), digits(rng, 6));
  if (target == "Country code") return pick(rng, std::vector<std::string>{"cn", "us", "kr", "ru"});
  if (target == "Language") return pick(rng, std::vector<std::string>{"zh", "en", "ko", "ru"});
  if (target == "UID") return std::to_string(10000 + below(rng, 200));
  if (target == "SIM number") return "8986" + digits(rng, 16);
  return "+86" + digits(rng, 11);
}

// Targets produced through syscall signatures rather than MAP events.
const std::map<std::string, std::function<SyscallRecord(Rng&, const std::string&)>>& syscall_targets() {
  static const std::map<std::string, std::function<SyscallRecord(Rng&, const std::string&)>> t = {
      {"CPU Spec.", [](Rng&, const std::string&) { return SyscallRecord::make("open", {"/proc/cpuinfo", "O_RDONLY"}); }},
      {"Storage access",
       [](Rng& rng, const std::string& pkg) {
         return SyscallRecord::make("open", {fmt::format("/sdcard/{}/data{}.bin", pkg, below(rng, 4)), "O_RDWR"});
       }},
      {"Media file",
       [](Rng&, const std::string&) { return SyscallRecord::make("stat64", {"/system/app/MediaProvider.apk"}); }},
      {"Contact information",
       [](Rng&, const std::string&) {
         return SyscallRecord::make("open", {"/system/app/Contacts.apk", "O_RDONLY"});
       }},
  };
  return t;
}

void emit_sis(Rng& rng, const std::set<std::string>& targets, const std::string& pkg, Emission& out) {
  std::vector<std::string> via_map;
  for (const auto& t : targets) {
    if (auto it = syscall_targets().find(t); it != syscall_targets().end()) {
      out.records.push_back(it->second(rng, pkg));
    } else {
      via_map.push_back(t);
    }
  }
  if (via_map.empty()) return;
  shuffle(rng, via_map);
  const std::size_t groups = std::min<std::size_t>(via_map.size(), 1 + below(rng, 3));
  std::vector<SandboxEvent> events(groups, SandboxEvent{Channel::MAP, {}});
  for (std::size_t i = 0; i < via_map.size(); ++i) {
    const auto& t = via_map[i];
    events[i % groups].payload.emplace(pick(rng, map_keys().at(t)), map_value(rng, t));
  }
  for (auto& e : events) out.events.push_back(std::move(e));
}

void emit_cds(Rng& rng, const CdsProfile& cds, Emission& out) {
  const auto& host = pick(rng, cds.hosts);
  SandboxEvent open{Channel::NET_OPEN, {{"desthost", host}}};
  if (!cds.port.empty()) open.payload.emplace("destport", cds.port);
  SandboxEvent send = open;
  std::string data = fmt::format("POST /api/v{} HTTP/1.1", 1 + below(rng, 3));
  if (!cds.encoding.empty()) data += " Content-Encoding: " + cds.encoding;
  if (!cds.cipher.empty()) data += " CryptoUsage: " + cds.cipher;
  send.payload.emplace("data", std::move(data));
  out.events.push_back(std::move(open));
  out.events.push_back(std::move(send));
}

void emit_ss(Rng& rng, Emission& out) {
  out.records.push_back(SyscallRecord::make(
      "writev", {"3", "Intent act=android.provider.Telephony.SMS_RECEIVED cmp=com.android.mms.transaction.SmsReceiverService"}));
  out.events.push_back({Channel::SMS, {{"number", "1066" + digits(rng, 4)}, {"text", "TD"}}});
}

void emit_cs(Rng& rng, Emission& out) {
  out.records.push_back(SyscallRecord::make("access", {"/system/app/Phone.apk", "R_OK"}));
  out.events.push_back({Channel::CALL, {{"number", "1590" + digits(rng, 7)}}});
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct Job {
  const FamilyTemplate* tmpl;
  const BehaviorVariant* variant;
  std::size_t template_index;
  std::size_t index;
};

GeneratedSample generate_one(const Job& job, std::uint64_t seed) {
  Rng rng = substream(seed, job.template_index, job.index);
  const auto pkg = fmt::format("com.{}.app{}", to_lower(job.tmpl->name), job.index);

  Emission em;
  std::map<std::string, int> counts;
  for (const auto& r : job.tmpl->noise.ranges) counts[r.syscall] += between(rng, r.lo, r.hi);
  for (const auto& r : job.tmpl->noise.extra) counts[r.syscall] += between(rng, r.lo, r.hi);
  for (const auto& [name, n] : counts) {
    for (int i = 0; i < n; ++i) em.records.push_back(filler_record(rng, name, pkg));
  }

  const auto& v = *job.variant;
  if (v.factors.contains(Factor::SendingSMS)) emit_ss(rng, em);
  if (v.factors.contains(Factor::Calling)) emit_cs(rng, em);
  if (v.factors.contains(Factor::SendingSensitiveInfo)) emit_sis(rng, v.sis_targets, pkg, em);
  if (v.factors.contains(Factor::ConvertingData)) emit_cds(rng, *v.cds, em);

  IntegratedSystemLog unnamed("", em.records, em.events);
  const auto id = sha256_hex(serialize_log(unnamed));
  GeneratedSample out{
      {IntegratedSystemLog(id, std::move(em.records), std::move(em.events)), job.tmpl->name},
      v.factors,
      v.sis_targets,
      v.name};
  return out;
}

// Largest-remainder apportionment of `n` over the variant probabilities.
std::vector<std::size_t> apportion(const std::vector<BehaviorVariant>& variants, std::size_t n) {
  std::vector<std::size_t> counts(variants.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const double exact = variants[i].probability * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % remainders.size()].second];
  return counts;
}

void validate_template(const FamilyTemplate& t, bool benign) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::InvalidSpec, fmt::format("template '{}': {}", t.name, what));
  };
  if (t.name.empty() || t.name.find_first_of("|\n") != std::string::npos) fail("bad name");
  if (t.variants.empty()) fail("no variants");
  double total = 0;
  for (const auto& v : t.variants) {
    if (!(v.probability >= 0.0)) fail("negative probability");
    total += v.probability;
    const bool sis = v.factors.contains(Factor::SendingSensitiveInfo);
    const bool cds = v.factors.contains(Factor::ConvertingData);
    if (sis == v.sis_targets.empty()) fail(fmt::format("variant '{}': SIS targets disagree with factors", v.name));
    if (cds != v.cds.has_value()) fail(fmt::format("variant '{}': CDS profile disagrees with factors", v.name));
    if (cds && v.cds->hosts.empty()) fail(fmt::format("variant '{}': CDS needs at least one host", v.name));
    if (cds && v.cds->encoding.empty() && v.cds->cipher.empty()) {
      fail(fmt::format("variant '{}': CDS needs a cipher or an encoding", v.name));
    }
    for (const auto& target : v.sis_targets) {
      if (!synthesizable_targets().contains(target)) fail(fmt::format("unknown SIS target '{}'", target));
    }
    if (cds) {
      for (const auto& h : v.cds->hosts) {
        if (h.empty() || h.find_first_of(";|=\n") != std::string::npos) fail(fmt::format("bad host '{}'", h));
      }
      if (!v.cds->cipher.empty() && v.cds->cipher != "DES" && v.cds->cipher != "AES" && v.cds->cipher != "Blowfish") {
        fail(fmt::format("unsupported cipher '{}'", v.cds->cipher));
      }
      if (!v.cds->encoding.empty() && v.cds->encoding != "gzip") {
        fail(fmt::format("unsupported encoding '{}'", v.cds->encoding));
      }
    }
    if (benign && !(v.factors == FactorSet{} || v.factors == FactorSet{Factor::ConvertingData})) {
      fail(fmt::format("benign variant '{}' must be plain or CDS-only", v.name));
    }
    if (!benign && v.factors.empty()) fail(fmt::format("variant '{}' has no factors", v.name));
  }
  if (std::abs(total - 1.0) > 1e-9) fail("variant probabilities must sum to 1");
  for (const auto* set : {&t.noise.ranges, &t.noise.extra}) {
    for (const auto& r : *set) {
      if (r.lo < 0 || r.hi < r.lo) fail(fmt::format("bad noise range for '{}'", r.syscall));
    }
  }
}

}  // namespace

NoiseModel default_noise() {
  return {{{"read", 30, 70},
           {"write", 15, 35},
           {"close", 10, 30},
           {"open", 8, 24},
           {"recvmsg", 4, 16},
           {"stat64", 0, 6},
           {"access", 0, 4}},
          {}};
}

const std::set<std::string>& synthesizable_targets() {
  static const std::set<std::string> targets = [] {
    std::set<std::string> s;
    for (const auto& [k, _] : map_keys()) s.insert(k);
    for (const auto& [k, _] : syscall_targets()) s.insert(k);
    return s;
  }();
  return targets;
}

void CorpusSpec::validate() const {
  std::set<std::string> names;
  for (const auto& [t, count] : templates) {
    validate_template(t, false);
    if (count == 0) throw Error(ErrorKind::InvalidSpec, fmt::format("template '{}' has count 0", t.name));
    if (t.name == kBenignLabel || !names.insert(t.name).second) {
      throw Error(ErrorKind::InvalidSpec, fmt::format("duplicate template name '{}'", t.name));
    }
  }
  if (benign_count > 0) validate_template(benign, true);
  if (templates.empty() && benign_count == 0) throw Error(ErrorKind::InvalidSpec, "empty corpus spec");
}

std::vector<GeneratedSample> generate_samples(const CorpusSpec& spec, unsigned jobs) {
  spec.validate();
  FamilyTemplate benign = spec.benign;
  benign.name = std::string(kBenignLabel);

  std::vector<Job> plan;
  auto add = [&](const FamilyTemplate& t, std::size_t template_index, std::size_t count) {
    const auto counts = apportion(t.variants, count);
    std::vector<const BehaviorVariant*> order;
    for (std::size_t v = 0; v < counts.size(); ++v) order.insert(order.end(), counts[v], &t.variants[v]);
    Rng rng = substream(spec.seed, template_index, ~std::uint64_t{0});
    shuffle(rng, order);
    for (std::size_t i = 0; i < order.size(); ++i) plan.push_back({&t, order[i], template_index, i});
  };
  for (std::size_t i = 0; i < spec.templates.size(); ++i) add(spec.templates[i].first, i, spec.templates[i].second);
  if (spec.benign_count > 0) add(benign, spec.templates.size(), spec.benign_count);

  std::vector<std::optional<GeneratedSample>> slots(plan.size());
  parallel_for(plan.size(), jobs, [&](std::size_t i) { slots[i] = generate_one(plan[i], spec.seed); });
  std::vector<GeneratedSample> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

LabeledCorpus generate_corpus(const CorpusSpec& spec, unsigned jobs) {
  std::vector<LabeledSample> samples;
  for (auto& g : generate_samples(spec, jobs)) samples.push_back(std::move(g.sample));
  return LabeledCorpus(std::move(samples));
}

CorpusSpec default_paper_spec(bool boxer_connection_error) {
  using enum Factor;
  CorpusSpec spec;

  FamilyTemplate adwo{"AdWo",
                      {{"sis",
                        {SendingSensitiveInfo, ConvertingData},
                        {"IMEI", "Device ID", "MCC", "MNC", "Device"},
                        CdsProfile{{"ads1.adwo.com", "ads2.adwo.com", "ads3.adwo.com"}, "80", "AES", "gzip"},
                        1.0}}};

  const CdsProfile airpush_cds{{"api.airpush.com", "apportal.airpush.com"}, "80", "DES", "gzip"};
  const std::set<std::string> airpush_sis = {"IMEI", "OS version", "Location", "Carrier"};
  FamilyTemplate airpush{"AirPush",
                         {{"sms+sis", {SendingSMS, SendingSensitiveInfo, ConvertingData}, airpush_sis, airpush_cds, 0.5},
                          {"sis", {SendingSensitiveInfo, ConvertingData}, airpush_sis, airpush_cds, 0.5}}};

  FamilyTemplate fakebatt{"FakeBattScar",
                          {{"sis", {SendingSensitiveInfo}, {"IMEI", "IMSI", "Phone number", "Storage access"}, {}, 1.0}}};
  fakebatt.noise.extra = {{"open", 110, 150}, {"close", 110, 150}};

  FactorSet boxer_factors{SendingSMS, SendingSensitiveInfo};
  if (boxer_connection_error) boxer_factors = FactorSet{SendingSensitiveInfo};
  FamilyTemplate boxer{"Boxer",
                       {{boxer_connection_error ? "sis" : "sms+sis",
                         boxer_factors,
                         {"MCC", "MNC", "Country code", "Language"},
                         {},
                         1.0}}};

  FamilyTemplate ginmaster{
      "GinMaster",
      {{"sis",
        {SendingSensitiveInfo, ConvertingData},
        {"IMEI", "IMSI", "UID", "SIM number", "Phone number", "Wifi information"},
        CdsProfile{{"client.mustmobile.net", "client.mustmobile.com", "client.mustmobile.org"}, "8080", "Blowfish", "gzip"},
        1.0}}};

  spec.templates = {{adwo, 50}, {airpush, 8}, {fakebatt, 6}, {boxer, 5}, {ginmaster, 12}};
  spec.benign = FamilyTemplate{
      std::string(kBenignLabel),
      {{"plain", {}, {}, {}, 0.95},
       {"cds",
        {ConvertingData},
        {},
        CdsProfile{{"cdn.appdata.net", "api.weatherfeed.io", "img.newsreader.com", "sync.notepad.org"}, "443", "", "gzip"},
        0.05}}};
  spec.benign_count = 1100;
  spec.seed = 7;
  return spec;
}

std::vector<SyscallRecord> filler_vocabulary(const NoiseModel& noise) {
  std::set<std::string> names;
  for (const auto* set : {&noise.ranges, &noise.extra}) {
    for (const auto& r : *set) names.insert(r.syscall);
  }
  const std::string pkg = "com.example.app0";
  std::vector<SyscallRecord> out;
  for (const auto& name : names) {
    for (int fd = kMinFd; fd <= kMaxFd; ++fd) {
      const auto f = std::to_string(fd);
      if (name == "read" || name == "write" || name == "recvmsg" || name == "sendmsg") {
        for (const auto& sz : kSizes) out.push_back(SyscallRecord::make(name, {f, sz}));
      } else if (name != "open" && name != "stat64" && name != "access") {
        out.push_back(SyscallRecord::make(name, {f}));
      }
    }
    if (name == "open") {
      for (const auto& p : filler_paths(pkg)) {
        for (const auto& fl : kOpenFlags) out.push_back(SyscallRecord::make(name, {p, fl}));
      }
    } else if (name == "stat64") {
      for (const auto& p : filler_paths(pkg)) out.push_back(SyscallRecord::make(name, {p}));
    } else if (name == "access") {
      for (const auto& p : kSystemFiles) out.push_back(SyscallRecord::make(name, {p, "R_OK"}));
    }
  }
  return out;
}

void write_corpus_dir(const LabeledCorpus& corpus, const std::string& dir) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  std::string labels;
  for (const auto& s : corpus.samples()) {
    write_file((root / (s.log.sample_id() + ".log")).string(), serialize_log(s.log));
    labels += fmt::format("{}|{}\n", s.log.sample_id(), s.truth);
  }
  write_file((root / "labels.txt").string(), labels);
}

}  // namespace droidprof
