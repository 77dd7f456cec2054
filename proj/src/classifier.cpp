#include "droidprof/classifier.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "droidprof/error.hpp"
#include "text.hpp"

namespace droidprof {

namespace {

constexpr std::string_view kClusterPrefix = "cluster-";

std::optional<std::size_t> cluster_number(std::string_view label) {
  if (!label.starts_with(kClusterPrefix)) return std::nullopt;
  label.remove_prefix(kClusterPrefix.size());
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), n);
  if (ec != std::errc{} || ptr != label.data() + label.size()) return std::nullopt;
  return n;
}

// Journal scores are kept at the precision they are written with, so a saved
// store reloads to an identical value.
double journal_score(double s) { return std::round(s * 1e6) / 1e6; }

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(UpdateMethod m) {
  return m == UpdateMethod::Intersection ? "intersection" : "union";
}

std::optional<UpdateMethod> parse_update_method(std::string_view s) {
  if (s == "intersection" || s == "1") return UpdateMethod::Intersection;
  if (s == "union" || s == "2") return UpdateMethod::Union;
  return std::nullopt;
}

void ClassifierConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidWeights, fmt::format("threshold {} outside (0,1]", threshold));
  }
}

std::string JournalEntry::to_line() const {
  return fmt::format("{}|{}|{:.6f}", sample_id, decision, score);
}

const FamilyRepresentative* ProfileStore::find(const std::string& label) const {
  auto it = reps_.find(label);
  return it == reps_.end() ? nullptr : &it->second;
}

FamilyRepresentative* ProfileStore::find(const std::string& label) {
  auto it = reps_.find(label);
  return it == reps_.end() ? nullptr : &it->second;
}

FamilyRepresentative& ProfileStore::create(const BehaviorProfile& p) {
  std::string label;
  do {
    label = fmt::format("{}{:04}", kClusterPrefix, next_cluster_++);
  } while (reps_.contains(label));
  FamilyRepresentative rep{label, p, categorize(p), 1};
  rep.representative.set_sample_id(label);
  return reps_.emplace(label, std::move(rep)).first->second;
}

void ProfileStore::insert(FamilyRepresentative rep) {
  if (auto n = cluster_number(rep.label)) next_cluster_ = std::max(next_cluster_, *n + 1);
  const auto label = rep.label;
  if (!reps_.emplace(label, std::move(rep)).second) {
    throw Error(ErrorKind::CorruptStore, fmt::format("duplicate label '{}'", label));
  }
}

double relative_score(const SimilarityBreakdown& b, FactorSet category, const SimilarityWeights& w) {
  const double mass = w.mass(category);
  if (mass <= 0.0) return 0.0;
  return std::min(1.0, b.total / mass);
}

std::vector<Candidate> score_candidates(const BehaviorProfile& p, const ProfileStore& store,
                                        const ClassifierConfig& cfg) {
  std::vector<Candidate> out;
  const auto category = categorize(p);
  if (category.is_benign) return out;
  for (const auto& [label, rep] : store.representatives()) {
    if (rep.category.factors != category.factors) continue;
    Candidate c;
    c.label = label;
    c.breakdown = total_similarity(p, rep.representative, cfg.weights);
    c.score = relative_score(c.breakdown, category.factors, cfg.weights);
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<Candidate> best_match(const BehaviorProfile& p, const ProfileStore& store,
                                    const ClassifierConfig& cfg) {
  std::optional<Candidate> best;
  // Candidates arrive in label order; a strict comparison keeps the smallest
  // label among equal scores.
  for (auto& c : score_candidates(p, store, cfg)) {
    if (!best || c.score > best->score) best = std::move(c);
  }
  return best;
}

Decision classify(const BehaviorProfile& p, ProfileStore& store, const ClassifierConfig& cfg) {
  cfg.validate();
  Decision d;
  if (categorize(p).is_benign) {
    d.kind = Decision::Kind::Benign;
    store.append({p.sample_id(), "BENIGN", 0.0});
    return d;
  }

  auto best = best_match(p, store, cfg);
  if (best && best->score >= cfg.threshold) {
    auto* rep = store.find(best->label);
    if (rep == nullptr) throw Error(ErrorKind::CorruptStore, "candidate vanished from store");
    d.kind = Decision::Kind::Assigned;
    d.label = best->label;
    d.breakdown = best->breakdown;
    d.score = best->score;
    auto updated = cfg.update_method == UpdateMethod::Intersection
                       ? update_intersection(rep->representative, p)
                       : update_union(rep->representative, p);
    d.representative_emptied = updated.empty() && !rep->representative.empty();
    rep->representative = std::move(updated);
    ++rep->member_count;
    store.append({p.sample_id(),
                  fmt::format("ASSIGNED:{}{}", d.label, d.representative_emptied ? "+EMPTY" : ""),
                  journal_score(d.score)});
    return d;
  }

  d.kind = Decision::Kind::NewCluster;
  d.score = best ? best->score : 0.0;
  d.label = store.create(p).label;
  store.append({p.sample_id(), fmt::format("NEW:{}", d.label), journal_score(d.score)});
  return d;
}

BehaviorProfile update_intersection(const BehaviorProfile& rep, const BehaviorProfile& p) {
  BehaviorProfile out(rep.sample_id());
  for (const auto& [factor, targets] : rep.operations()) {
    const auto& other = p.targets(factor);
    for (const auto& [target, attr] : targets) {
      if (other.contains(target)) out.add(factor, target, attr);
    }
  }
  return out;
}

BehaviorProfile update_union(const BehaviorProfile& rep, const BehaviorProfile& p) {
  BehaviorProfile out = rep;
  for (const auto& [factor, targets] : p.operations()) {
    for (const auto& [target, attr] : targets) out.add(factor, target, attr);
  }
  return out;
}

std::string save_store(const ProfileStore& store) {
  std::string out = "# droidprof store v1\n[representatives]\n";
  for (const auto& [label, rep] : store.representatives()) {
    out += fmt::format("{}|{}|{}|{}\n", label, render_factors(rep.category.factors),
                       rep.member_count, encode_profile(rep.representative));
  }
  out += "[journal]\n";
  for (const auto& e : store.journal()) {
    out += e.to_line();
    out += '\n';
  }
  out += fmt::format("@end {} {}\n", store.representatives().size(), store.journal().size());
  return out;
}

ProfileStore load_store(std::string_view bytes) {
  enum class Section { None, Reps, Journal, Done } section = Section::None;
  ProfileStore store;
  std::size_t rep_count = 0, journal_count = 0;

  text::for_each_line(bytes, [&](std::size_t line_no, std::string_view line) {
    auto corrupt = [&](std::string_view why) {
      return Error(ErrorKind::CorruptStore, fmt::format("line {}: {}", line_no, why));
    };
    if (section == Section::Done) {
      if (!text::trim(line).empty()) throw corrupt("content after @end");
      return;
    }
    if (line.empty() || line.front() == '#') return;
    if (line == "[representatives]") {
      if (section != Section::None) throw corrupt("misplaced [representatives]");
      section = Section::Reps;
      return;
    }
    if (line == "[journal]") {
      if (section != Section::Reps) throw corrupt("misplaced [journal]");
      section = Section::Journal;
      return;
    }
    if (line.starts_with("@end ")) {
      auto parts = text::split(line.substr(5), ' ');
      if (section != Section::Journal || parts.size() != 2) throw corrupt("bad @end trailer");
      auto r = parse_number<std::size_t>(parts[0]);
      auto j = parse_number<std::size_t>(parts[1]);
      if (!r || !j || *r != rep_count || *j != journal_count) throw corrupt("record count mismatch");
      section = Section::Done;
      return;
    }

    if (section == Section::Reps) {
      auto f = text::split(line, '|');
      if (f.size() != 4) throw corrupt("representative line needs 4 fields");
      auto factors = parse_factors(f[1]);
      auto count = parse_number<std::size_t>(f[2]);
      if (f[0].empty() || !factors || !count || *count == 0) throw corrupt("bad representative");
      FamilyRepresentative rep;
      rep.label = std::string(f[0]);
      rep.category = BehaviorCategory::of(*factors);
      rep.member_count = *count;
      try {
        rep.representative = decode_profile(f[3]);
      } catch (const Error& e) {
        throw corrupt(e.what());
      }
      store.insert(std::move(rep));
      ++rep_count;
    } else if (section == Section::Journal) {
      const auto last = line.rfind('|');
      const auto mid = last == line.npos || last == 0 ? line.npos : line.rfind('|', last - 1);
      if (mid == line.npos) throw corrupt("journal line needs 3 fields");
      auto score = parse_number<double>(line.substr(last + 1));
      if (!score) throw corrupt("bad journal score");
      store.append({std::string(line.substr(0, mid)), std::string(line.substr(mid + 1, last - mid - 1)),
                    *score});
      ++journal_count;
    } else {
      throw corrupt("record outside a section");
    }
  });

  if (section != Section::Done) throw Error(ErrorKind::CorruptStore, "store is truncated (no @end)");
  return store;
}

}  // namespace droidprof
