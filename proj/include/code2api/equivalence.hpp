// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "code2api/code_model.hpp"

// The three pairwise equivalence relations between a ground-truth API and a
// generated one, and the corpus metrics built on them.
namespace code2api::equivalence {

enum class Verdict { kEquivalent, kNotEquivalent, kNeedsManual };

std::string_view to_string(Verdict v);
/// "Equivalent", "NotEquivalent" or "NeedsManual". Throws std::invalid_argument.
Verdict parse_verdict(std::string_view text);

/// Equivalent when both lists are empty, or when the parameters pair up by
/// canonical type and every pair refers to the same thing: same name, or the
/// only candidate of its type, or the same first-use context in the bodies.
/// NeedsManual when types only match after boxing (int vs Integer) or when
/// the referent check cannot decide. Symmetric.
Verdict params_equivalent(const code_model::ApiSignature& left,
                          const code_model::ApiSignature& right);

/// True when both sides are void-like, or when the canonical return types
/// match and the return statements are identical after whitespace
/// normalization. An unannotated Python return type matches any type.
bool returns_equivalent(const code_model::ApiSignature& left, const code_model::ApiSignature& right);

/// Decides whether two implementations do the same thing. Returning nullopt
/// means the oracle has no opinion.
using FunctionalityOracle = std::function<std::optional<bool>(
    std::int64_t answer_id, const code_model::ApiSignature&, const code_model::ApiSignature&)>;

struct EquivalencePair {
  std::int64_t answer_id = 0;
  code_model::ApiSignature left;   // ground truth
  code_model::ApiSignature right;  // tool output
  Verdict param_verdict = Verdict::kNotEquivalent;
  bool return_verdict = false;
  Verdict impl_verdict = Verdict::kNotEquivalent;
  std::string manual_notes;
};

/// NotEquivalent when either sub-verdict fails. Otherwise the oracle decides;
/// without an oracle (or without an opinion) the result is NeedsManual.
Verdict impl_equivalent(Verdict param_verdict, bool return_verdict, std::int64_t answer_id,
                        const code_model::ApiSignature& left,
                        const code_model::ApiSignature& right,
                        const FunctionalityOracle& oracle = {});

EquivalencePair evaluate_pair(std::int64_t answer_id, code_model::ApiSignature left,
                              code_model::ApiSignature right,
                              const FunctionalityOracle& oracle = {});

struct ManualResolution {
  std::int64_t answer_id = 0;
  std::string field;  // "params" or "impl"
  Verdict verdict = Verdict::kNotEquivalent;
  std::string note;
};

using ManualMap = std::map<std::pair<std::int64_t, std::string>, ManualResolution>;

struct MetricsSummary {
  std::size_t total = 0;
  std::size_t p_count = 0;
  std::size_t r_count = 0;
  std::size_t m_count = 0;
  std::size_t pr_count = 0;
  double p_acc = 0;
  double r_acc = 0;
  double m_acc = 0;
  double pr_acc = 0;
  std::vector<std::string> warnings;

  friend bool operator==(const MetricsSummary&, const MetricsSummary&) = default;
};

enum class AggregateMode { kLenient, kStrict };

class UnresolvedManual : public std::runtime_error {
 public:
  explicit UnresolvedManual(std::vector<std::int64_t> ids);
  const std::vector<std::int64_t>& answer_ids() const noexcept { return ids_; }

 private:
  std::vector<std::int64_t> ids_;
};

/// Applies manual resolutions, then counts. An implementation only counts
/// when its parameters and returns count too. Lenient mode treats unresolved
/// NeedsManual as NotEquivalent and records a warning; strict mode throws
/// UnresolvedManual. Ratios are 0 when there are no pairs.
MetricsSummary aggregate(const std::vector<EquivalencePair>& pairs, const ManualMap& manual = {},
                         AggregateMode mode = AggregateMode::kLenient);

struct PairSpec {
  std::int64_t answer_id = 0;
  std::filesystem::path left_source_path;
  std::filesystem::path right_source_path;
  Language language = Language::kJava;
};

/// One JSON object per line. Relative paths resolve against the file's
/// directory. Throws std::runtime_error naming the line on bad records.
std::vector<PairSpec> load_pairs(const std::filesystem::path& path);
ManualMap load_manual(const std::filesystem::path& path);
void store_manual(const ManualMap& manual, const std::filesystem::path& path);

/// Parses both sources of every spec and evaluates the pair.
std::vector<EquivalencePair> evaluate_specs(const std::vector<PairSpec>& specs,
                                            const FunctionalityOracle& oracle = {});

}  // namespace code2api::equivalence
