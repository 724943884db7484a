#include "anchoreval/verdicts.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace anchoreval {

namespace {

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

void JudgmentSet::Builder::declare_roster(const std::vector<std::string>& names) {
  if (names.size() >= 0xffff) fail(Errc::malformed_record, "roster exceeds 65535 models");
  for (const auto& n : names) {
    if (model_index_.count(n)) fail(Errc::malformed_record, "roster repeats model " + n);
    model_index_.emplace(n, static_cast<int>(models_.size()));
    models_.push_back(n);
  }
  roster_declared_ = true;
}

int JudgmentSet::Builder::intern_model(const std::string& name, long line_no) {
  auto it = model_index_.find(name);
  if (it != model_index_.end()) return it->second;
  if (roster_declared_)
    fail(Errc::unknown_model, "model " + name + " not in declared roster" +
                                  (line_no >= 0 ? " (line " + std::to_string(line_no) + ")" : ""));
  if (models_.size() >= 0xffff) fail(Errc::malformed_record, "roster exceeds 65535 models");
  int idx = static_cast<int>(models_.size());
  model_index_.emplace(name, idx);
  models_.push_back(name);
  return idx;
}

int JudgmentSet::Builder::intern_instruction(const std::string& name) {
  auto it = instruction_index_.find(name);
  if (it != instruction_index_.end()) return it->second;
  if (instructions_.size() >= 0xffffffffull)
    fail(Errc::malformed_record, "instruction roster exceeds the 32-bit index space");
  int idx = static_cast<int>(instructions_.size());
  instruction_index_.emplace(name, idx);
  instructions_.push_back(name);
  return idx;
}

void JudgmentSet::Builder::add(const VerdictRecord& rec, long line_no) {
  const std::string at = line_no >= 0 ? " (line " + std::to_string(line_no) + ")" : "";
  if (rec.subject_model == rec.reference_model)
    fail(Errc::malformed_record, "subject and reference model are both " + rec.subject_model + at);
  if (!judge_set_) {
    judge_ = rec.judge_id;
    judge_set_ = true;
  } else if (rec.judge_id != judge_) {
    fail(Errc::mixed_judges,
         "stream mixes judges '" + judge_ + "' and '" + rec.judge_id + "'" + at +
             "; split files per judge");
  }
  int a = intern_model(rec.subject_model, line_no);
  int b = intern_model(rec.reference_model, line_no);
  int i = intern_instruction(rec.instruction_id);

  bool a_first = rec.subject_model < rec.reference_model;
  int lo = a_first ? a : b;
  int hi = a_first ? b : a;
  int8_t canon_v = static_cast<int8_t>(a_first ? rec.verdict.value() : -rec.verdict.value());
  uint8_t orient_bit = a_first ? 1 : 2;
  uint64_t key = (static_cast<uint64_t>(i) << 32) | (static_cast<uint64_t>(lo) << 16) |
                 static_cast<uint64_t>(hi);

  auto it = cells_.find(key);
  if (it == cells_.end()) {
    cells_.emplace(key, std::make_pair(canon_v, orient_bit));
    return;
  }
  if (it->second.second & orient_bit)
    fail(Errc::duplicate_key, "repeated (" + rec.instruction_id + ", " + rec.subject_model +
                                  ", " + rec.reference_model + ")" + at);
  if (it->second.first != canon_v)
    fail(Errc::orientation_conflict,
         "(" + rec.instruction_id + ", " + rec.subject_model + ", " + rec.reference_model +
             ") disagrees with the reverse orientation" + at);
  it->second.second |= orient_bit;
}

JudgmentSet JudgmentSet::Builder::build() && {
  if (cells_.empty()) fail(Errc::malformed_record, "no records in stream");
  JudgmentSet js;
  js.models_ = std::move(models_);
  js.model_index_ = std::move(model_index_);
  js.instructions_ = std::move(instructions_);
  js.instruction_index_ = std::move(instruction_index_);
  js.judge_ = std::move(judge_);
  js.cells_.reserve(cells_.size());
  for (const auto& [key, v] : cells_) js.cells_.emplace(key, v.first);
  return js;
}

JudgmentSet JudgmentSet::ingest(std::istream& stream, const std::vector<std::string>* roster) {
  Builder b;
  if (roster) b.declare_roster(*roster);
  std::string line;
  long line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;  // '#' lines carry provenance
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::malformed_record, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("instruction_id") || !j.contains("model_a") ||
        !j.contains("model_b") || !j.contains("judge") || !j.contains("verdict") ||
        !j["instruction_id"].is_string() || !j["model_a"].is_string() ||
        !j["model_b"].is_string() || !j["judge"].is_string())
      fail(Errc::malformed_record, "line " + std::to_string(line_no) + ": missing or mistyped field");
    if (!j["verdict"].is_number_integer())
      fail(Errc::unknown_verdict_level, "line " + std::to_string(line_no) + ": verdict must be an integer");
    long v = j["verdict"].get<long>();
    if (v < -2 || v > 2)
      fail(Errc::unknown_verdict_level,
           "line " + std::to_string(line_no) + ": verdict " + std::to_string(v));
    VerdictRecord rec{j["instruction_id"].get<std::string>(), j["model_a"].get<std::string>(),
                      j["model_b"].get<std::string>(), j["judge"].get<std::string>(),
                      Verdict::from_int(static_cast<int>(v))};
    b.add(rec, line_no);
  }
  return std::move(b).build();
}

JudgmentSet JudgmentSet::ingest_file(const std::string& path,
                                     const std::vector<std::string>* roster) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  return ingest(in, roster);
}

int JudgmentSet::model_index(const std::string& name) const {
  auto it = model_index_.find(name);
  if (it == model_index_.end()) fail(Errc::unknown_model, name);
  return it->second;
}

std::optional<int> JudgmentSet::find_model(const std::string& name) const {
  auto it = model_index_.find(name);
  if (it == model_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Verdict> JudgmentSet::verdict(int instruction, int model_a, int model_b) const {
  auto [lo, hi] = canonical(model_a, model_b);
  auto it = cells_.find(cell_key(instruction, lo, hi));
  if (it == cells_.end()) return std::nullopt;
  Verdict v = Verdict::from_int(it->second);
  return model_a == lo ? v : v.negated();
}

std::optional<Verdict> JudgmentSet::verdict(const std::string& instruction_id,
                                            const std::string& model_a,
                                            const std::string& model_b) const {
  auto ii = instruction_index_.find(instruction_id);
  if (ii == instruction_index_.end()) return std::nullopt;
  return verdict(ii->second, model_index(model_a), model_index(model_b));
}

bool JudgmentSet::is_anchor_complete(int anchor) const {
  if (anchor < 0 || anchor >= model_count()) fail(Errc::unknown_model, "anchor index");
  const long n = instruction_count();
  for (long i = 0; i < n; ++i)
    for (int j = 0; j < model_count(); ++j) {
      if (j == anchor) continue;
      auto [lo, hi] = canonical(j, anchor);
      if (!cells_.count(cell_key(static_cast<int>(i), lo, hi))) return false;
    }
  return true;
}

bool JudgmentSet::is_anchor_complete(const std::string& anchor) const {
  return is_anchor_complete(model_index(anchor));
}

bool JudgmentSet::is_quadratic_complete() const {
  const long n = instruction_count();
  const int m = model_count();
  if (cells_.size() != static_cast<size_t>(n) * (static_cast<size_t>(m) * (m - 1) / 2))
    return false;
  for (long i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        auto [lo, hi] = canonical(a, b);
        if (!cells_.count(cell_key(static_cast<int>(i), lo, hi))) return false;
      }
  return true;
}

void JudgmentSet::for_each_record(const std::function<void(const VerdictRecord&)>& fn) const {
  struct Row {
    const std::string* instr;
    const std::string* a;
    const std::string* b;
    int8_t v;
  };
  std::vector<Row> rows;
  rows.reserve(cells_.size());
  for (const auto& [key, v] : cells_) {
    int i = static_cast<int>(key >> 32);
    int lo = static_cast<int>((key >> 16) & 0xffff);
    int hi = static_cast<int>(key & 0xffff);
    rows.push_back(Row{&instructions_[static_cast<size_t>(i)], &models_[static_cast<size_t>(lo)],
                       &models_[static_cast<size_t>(hi)], v});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (*x.instr != *y.instr) return *x.instr < *y.instr;
    if (*x.a != *y.a) return *x.a < *y.a;
    return *x.b < *y.b;
  });
  for (const Row& r : rows)
    fn(VerdictRecord{*r.instr, *r.a, *r.b, judge_, Verdict::from_int(r.v)});
}

void JudgmentSet::serialize(std::ostream& out) const {
  for_each_record([&](const VerdictRecord& rec) {
    nlohmann::json j;
    j["instruction_id"] = rec.instruction_id;
    j["judge"] = rec.judge_id;
    j["model_a"] = rec.subject_model;
    j["model_b"] = rec.reference_model;
    j["verdict"] = rec.verdict.value();
    out << j.dump() << '\n';
  });
}

std::string JudgmentSet::serialize_to_string() const {
  std::ostringstream os;
  serialize(os);
  return os.str();
}

uint64_t JudgmentSet::content_digest() const { return fnv1a64(serialize_to_string()); }

std::string JudgmentSet::content_digest_hex() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(content_digest()));
  return buf;
}

JudgmentSet JudgmentSet::anchor_slice(const std::string& anchor) const {
  int a = model_index(anchor);
  JudgmentSet js;
  js.models_ = models_;
  js.model_index_ = model_index_;
  js.instructions_ = instructions_;
  js.instruction_index_ = instruction_index_;
  js.judge_ = judge_;
  for (const auto& [key, v] : cells_) {
    int lo = static_cast<int>((key >> 16) & 0xffff);
    int hi = static_cast<int>(key & 0xffff);
    if (lo == a || hi == a) js.cells_.emplace(key, v);
  }
  return js;
}

JudgmentSet JudgmentSet::subset_instructions(const std::vector<int>& instruction_indices) const {
  JudgmentSet js;
  js.models_ = models_;
  js.model_index_ = model_index_;
  js.judge_ = judge_;
  std::vector<int> remap(instructions_.size(), -1);
  for (size_t k = 0; k < instruction_indices.size(); ++k) {
    int i = instruction_indices[k];
    if (i < 0 || static_cast<size_t>(i) >= instructions_.size())
      fail(Errc::subset_too_small, "instruction index out of range");
    if (remap[static_cast<size_t>(i)] != -1)
      fail(Errc::subset_too_small, "repeated instruction index");
    remap[static_cast<size_t>(i)] = static_cast<int>(k);
    js.instruction_index_.emplace(instructions_[static_cast<size_t>(i)], static_cast<int>(k));
    js.instructions_.push_back(instructions_[static_cast<size_t>(i)]);
  }
  for (const auto& [key, v] : cells_) {
    int i = static_cast<int>(key >> 32);
    int ni = remap[static_cast<size_t>(i)];
    if (ni < 0) continue;
    js.cells_.emplace((static_cast<uint64_t>(ni) << 32) | (key & 0xffffffffull), v);
  }
  return js;
}

bool JudgmentSet::operator==(const JudgmentSet& other) const {
  if (judge_ != other.judge_ || cells_.size() != other.cells_.size()) return false;
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(models_) != sorted(other.models_)) return false;
  if (sorted(instructions_) != sorted(other.instructions_)) return false;
  // Same record set under canonical naming; roster order is presentation.
  bool equal = true;
  for_each_record([&](const VerdictRecord& rec) {
    if (!equal) return;
    auto v = other.verdict(rec.instruction_id, rec.subject_model, rec.reference_model);
    if (!v || v->value() != rec.verdict.value()) equal = false;
  });
  return equal;
}

bool is_anchor_complete(const JudgmentSet& js, const std::string& anchor) {
  return js.is_anchor_complete(anchor);
}

bool is_quadratic_complete(const JudgmentSet& js) { return js.is_quadratic_complete(); }

std::vector<std::string> read_roster_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    names.push_back(line);
  }
  return names;
}

}  // namespace anchoreval
