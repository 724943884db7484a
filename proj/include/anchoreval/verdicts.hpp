#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "anchoreval/error.hpp"

namespace anchoreval {

// Five-level judge preference. Positive values favour the subject (first)
// model: +2 clear win, +1 slight win, 0 tie, -1/-2 slight/clear loss.
class Verdict {
 public:
  static Verdict from_int(int v) {
    if (v < -2 || v > 2) fail(Errc::unknown_verdict_level, "verdict " + std::to_string(v));
    return Verdict(static_cast<int8_t>(v));
  }
  int value() const { return value_; }
  Verdict negated() const { return Verdict(static_cast<int8_t>(-value_)); }
  bool operator==(const Verdict&) const = default;

 private:
  explicit Verdict(int8_t v) : value_(v) {}
  int8_t value_;
};

struct VerdictRecord {
  std::string instruction_id;
  std::string subject_model;
  std::string reference_model;
  std::string judge_id;
  Verdict verdict;  // positive = subject wins
};

// Immutable collection of canonicalized verdicts for a single judge.
//
// Orientation is canonicalized to the lexicographically smaller model name
// first; querying the opposite orientation returns the negated verdict.
// Missing cells stay missing -- they are never imputed as ties.
class JudgmentSet {
 public:
  class Builder {
   public:
    // Optional pre-declared roster (sidecar file); records referencing names
    // outside it are rejected.
    void declare_roster(const std::vector<std::string>& names);
    void add(const VerdictRecord& rec, long line_no = -1);
    JudgmentSet build() &&;

   private:
    friend class JudgmentSet;
    std::vector<std::string> models_;
    std::unordered_map<std::string, int> model_index_;
    std::vector<std::string> instructions_;
    std::unordered_map<std::string, int> instruction_index_;
    std::unordered_map<uint64_t, std::pair<int8_t, uint8_t>> cells_;  // verdict, seen-orientation mask
    std::string judge_;
    bool judge_set_ = false;
    bool roster_declared_ = false;
    int intern_model(const std::string& name, long line_no);
    int intern_instruction(const std::string& name);
  };

  // Line-delimited records, one JSON object per line with fields
  // instruction_id, model_a, model_b, judge, verdict.
  static JudgmentSet ingest(std::istream& stream,
                            const std::vector<std::string>* roster = nullptr);
  static JudgmentSet ingest_file(const std::string& path,
                                 const std::vector<std::string>* roster = nullptr);

  const std::vector<std::string>& models() const { return models_; }
  const std::vector<std::string>& instructions() const { return instructions_; }
  const std::string& judge_id() const { return judge_; }
  int model_count() const { return static_cast<int>(models_.size()); }
  long instruction_count() const { return static_cast<long>(instructions_.size()); }
  long record_count() const { return static_cast<long>(cells_.size()); }

  int model_index(const std::string& name) const;          // throws UnknownModel
  std::optional<int> find_model(const std::string& name) const;

  // Verdict of model a vs model b on instruction i, from a's perspective.
  std::optional<Verdict> verdict(int instruction, int model_a, int model_b) const;
  std::optional<Verdict> verdict(const std::string& instruction_id,
                                 const std::string& model_a,
                                 const std::string& model_b) const;

  bool is_anchor_complete(int anchor) const;
  bool is_anchor_complete(const std::string& anchor) const;
  bool is_quadratic_complete() const;

  // Visits every stored record in canonical orientation and deterministic
  // order (instruction_id, model_a, model_b ascending).
  void for_each_record(const std::function<void(const VerdictRecord&)>& fn) const;

  // Unordered fast path: fn(instruction_index, model_lo, model_hi, verdict
  // from model_lo's perspective). Iteration order is unspecified.
  template <class F>
  void for_each_cell(F&& fn) const {
    for (const auto& [key, v] : cells_)
      fn(static_cast<int>(key >> 32), static_cast<int>((key >> 16) & 0xffff),
         static_cast<int>(key & 0xffff), Verdict::from_int(v));
  }

  // Canonical line-delimited serialization; ingest(serialize(x)) == x and the
  // bytes are identical for equal sets regardless of construction order.
  void serialize(std::ostream& out) const;
  std::string serialize_to_string() const;
  uint64_t content_digest() const;  // FNV-1a over the canonical serialization
  std::string content_digest_hex() const;

  // Same roster; only records touching `anchor` retained.
  JudgmentSet anchor_slice(const std::string& anchor) const;
  // Same roster; instruction roster restricted to the given indices (kept in
  // the order given).
  JudgmentSet subset_instructions(const std::vector<int>& instruction_indices) const;

  bool operator==(const JudgmentSet& other) const;

 private:
  friend class Builder;
  JudgmentSet() = default;
  uint64_t cell_key(int instruction, int lo, int hi) const {
    return (static_cast<uint64_t>(instruction) << 32) |
           (static_cast<uint64_t>(lo) << 16) | static_cast<uint64_t>(hi);
  }
  // Canonical (name-ordered) index pair.
  std::pair<int, int> canonical(int a, int b) const {
    return models_[static_cast<size_t>(a)] < models_[static_cast<size_t>(b)]
               ? std::make_pair(a, b)
               : std::make_pair(b, a);
  }

  std::vector<std::string> models_;
  std::unordered_map<std::string, int> model_index_;
  std::vector<std::string> instructions_;
  std::unordered_map<std::string, int> instruction_index_;
  std::unordered_map<uint64_t, int8_t> cells_;
  std::string judge_;
};

bool is_anchor_complete(const JudgmentSet& js, const std::string& anchor);
bool is_quadratic_complete(const JudgmentSet& js);

std::vector<std::string> read_roster_file(const std::string& path);

}  // namespace anchoreval
