// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/equivalence.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "code2api/lexer.hpp"
#include "code2api/text.hpp"
#include "json.hpp"

namespace code2api::equivalence {

namespace {

using code_model::ApiSignature;
using code_model::kUnannotated;
using code_model::Param;

constexpr std::pair<std::string_view, std::string_view> kBoxes[] = {
    {"Integer", "int"},   {"Long", "long"},   {"Double", "double"},       {"Float", "float"},
    {"Boolean", "boolean"}, {"Short", "short"}, {"Character", "char"}, {"Byte", "byte"},
};

std::string canon(const std::string& type, Language lang) {
  return code_model::normalize_type(type, lang);
}

// Wrapper class names replaced by their primitives, word by word.
std::string unboxed(const std::string& type) {
  std::string out;
  std::string word;
  auto flush = [&] {
    std::string_view w = word;
    for (const auto& [box, prim] : kBoxes) {
      if (w == box) w = prim;
    }
    out += w;
    word.clear();
  };
  for (const char c : type) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      word += c;
    } else {
      flush();
      out += c;
    }
  }
  flush();
  return out;
}

std::pair<std::string_view, std::string_view> split_stars(std::string_view t) {
  std::size_t n = 0;
  while (n < t.size() && t[n] == '*') ++n;
  return {t.substr(0, n), t.substr(n)};
}

bool types_compatible(const std::string& a, const std::string& b, Language lang, bool ignore_boxing) {
  if (a == b) return true;
  if (lang == Language::kPython) {
    const auto [sa, ta] = split_stars(a);
    const auto [sb, tb] = split_stars(b);
    if (sa == sb && (ta == kUnannotated || tb == kUnannotated)) return true;
  }
  return ignore_boxing && unboxed(a) == unboxed(b);
}

// Kuhn's augmenting paths; lists are short.
bool perfect_matching(const std::vector<std::string>& l, const std::vector<std::string>& r,
                      Language lang, bool ignore_boxing) {
  if (l.size() != r.size()) return false;
  std::vector<int> match_r(r.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i,
                                                                     std::vector<bool>& seen) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (seen[j] || !types_compatible(l[i], r[j], lang, ignore_boxing)) continue;
      seen[j] = true;
      if (match_r[j] < 0 || augment(static_cast<std::size_t>(match_r[j]), seen)) {
        match_r[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < l.size(); ++i) {
    std::vector<bool> seen(r.size(), false);
    if (!augment(i, seen)) return false;
  }
  return true;
}

// Tokens around the first use of a parameter in the body, with the other
// parameters masked so renamed neighbours still compare equal.
std::string first_use(const ApiSignature& sig, const std::string& name) {
  const auto tokens = lexer::tokenize(sig.body, sig.language);
  std::set<std::string_view> params;
  for (const auto& p : sig.params) params.insert(p.name);
  auto show = [&](std::size_t k) -> std::string {
    const auto& t = tokens[k];
    if (t.kind == lexer::TokenKind::kIdent && params.count(t.text)) return "$p";
    return std::string(t.text);
  };
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (!lexer::is_ident(tokens[k], name)) continue;
    if (k > 0 && lexer::is_punct(tokens[k - 1], ".")) continue;  // a member, not the parameter
    const std::string before = k > 0 ? show(k - 1) : "^";
    const std::string after = k + 1 < tokens.size() ? show(k + 1) : "$";
    return before + " _ " + after;
  }
  return "unused";
}

// One direction of the referent check. Both lists are known to pair up by type.
Verdict referents(const ApiSignature& l, const std::vector<std::string>& lt, const ApiSignature& r,
                  const std::vector<std::string>& rt) {
  const std::size_t n = l.params.size();
  std::vector<bool> l_done(n, false);
  std::vector<bool> r_done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!r_done[j] && l.params[i].name == r.params[j].name &&
          types_compatible(lt[i], rt[j], l.language, false)) {
        l_done[i] = r_done[j] = true;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (l_done[i]) continue;
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < n; ++j) {
      if (!r_done[j] && types_compatible(lt[i], rt[j], l.language, false)) candidates.push_back(j);
    }
    const std::string use = first_use(l, l.params[i].name);
    std::vector<std::size_t> same_use;
    for (const std::size_t j : candidates) {
      if (first_use(r, r.params[j].name) == use) same_use.push_back(j);
    }
    if (same_use.size() != 1) return Verdict::kNeedsManual;
    l_done[i] = r_done[same_use.front()] = true;
  }
  return Verdict::kEquivalent;
}

bool void_like(const ApiSignature& s) {
  if (s.language == Language::kJava) return s.return_type == "void";
  if (s.return_type == "None") return true;
  if (s.return_type != kUnannotated) return false;
  return std::all_of(s.return_statements.begin(), s.return_statements.end(),
                     [](const std::string& r) { return r == "return" || r == "return None"; });
}

std::string statement_tokens(const std::string& stmt, Language lang) {
  std::string out;
  for (const auto& t : lexer::tokenize(stmt, lang)) {
    if (lexer::is_punct(t, ";")) continue;
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

template <typename T>
T field(const nlohmann::json& j, const char* key, std::size_t line) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error("line " + std::to_string(line) + ": missing or invalid '" + key + "'");
  }
}

template <typename F>
void for_each_record(const std::filesystem::path& path, F&& f) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw std::runtime_error(path.string() + " line " + std::to_string(n) + ": not a JSON object");
    }
    f(j, n);
  }
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kEquivalent: return "Equivalent";
    case Verdict::kNotEquivalent: return "NotEquivalent";
    case Verdict::kNeedsManual: return "NeedsManual";
  }
  return "NotEquivalent";
}

Verdict parse_verdict(std::string_view text) {
  if (text == "Equivalent") return Verdict::kEquivalent;
  if (text == "NotEquivalent") return Verdict::kNotEquivalent;
  if (text == "NeedsManual") return Verdict::kNeedsManual;
  throw std::invalid_argument("unknown verdict: " + std::string(text));
}

Verdict params_equivalent(const ApiSignature& left, const ApiSignature& right) {
  if (left.params.empty() && right.params.empty()) return Verdict::kEquivalent;
  if (left.params.size() != right.params.size()) return Verdict::kNotEquivalent;
  const Language lang = left.language;
  std::vector<std::string> lt;
  std::vector<std::string> rt;
  for (const auto& p : left.params) lt.push_back(canon(p.type_text, lang));
  for (const auto& p : right.params) rt.push_back(canon(p.type_text, lang));
  if (!perfect_matching(lt, rt, lang, false)) {
    return perfect_matching(lt, rt, lang, true) ? Verdict::kNeedsManual : Verdict::kNotEquivalent;
  }
  const Verdict forward = referents(left, lt, right, rt);
  const Verdict backward = referents(right, rt, left, lt);
  return forward == Verdict::kEquivalent && backward == Verdict::kEquivalent
             ? Verdict::kEquivalent
             : Verdict::kNeedsManual;
}

bool returns_equivalent(const ApiSignature& left, const ApiSignature& right) {
  const bool lv = void_like(left);
  const bool rv = void_like(right);
  if (lv || rv) return lv && rv;
  const Language lang = left.language;
  if (!types_compatible(canon(left.return_type, lang), canon(right.return_type, lang), lang, false)) {
    return false;
  }
  if (left.return_statements.size() != right.return_statements.size()) return false;
  for (std::size_t i = 0; i < left.return_statements.size(); ++i) {
    if (statement_tokens(left.return_statements[i], lang) !=
        statement_tokens(right.return_statements[i], lang)) {
      return false;
    }
  }
  return true;
}

Verdict impl_equivalent(Verdict param_verdict, bool return_verdict, std::int64_t answer_id,
                        const ApiSignature& left, const ApiSignature& right,
                        const FunctionalityOracle& oracle) {
  if (param_verdict == Verdict::kNotEquivalent || !return_verdict) return Verdict::kNotEquivalent;
  if (param_verdict == Verdict::kNeedsManual) return Verdict::kNeedsManual;
  if (!oracle) return Verdict::kNeedsManual;
  const auto said = oracle(answer_id, left, right);
  if (!said) return Verdict::kNeedsManual;
  return *said ? Verdict::kEquivalent : Verdict::kNotEquivalent;
}

EquivalencePair evaluate_pair(std::int64_t answer_id, ApiSignature left, ApiSignature right,
                              const FunctionalityOracle& oracle) {
  EquivalencePair p;
  p.answer_id = answer_id;
  p.param_verdict = params_equivalent(left, right);
  p.return_verdict = returns_equivalent(left, right);
  p.impl_verdict = impl_equivalent(p.param_verdict, p.return_verdict, answer_id, left, right, oracle);
  if (p.param_verdict == Verdict::kNeedsManual) {
    p.manual_notes = "params: types only match after boxing or referents are ambiguous";
  }
  p.left = std::move(left);
  p.right = std::move(right);
  return p;
}

UnresolvedManual::UnresolvedManual(std::vector<std::int64_t> ids)
    : std::runtime_error([&] {
        std::string msg = "unresolved NeedsManual verdicts for answers:";
        for (const auto id : ids) msg += " " + std::to_string(id);
        return msg;
      }()),
      ids_(std::move(ids)) {}

MetricsSummary aggregate(const std::vector<EquivalencePair>& pairs, const ManualMap& manual,
                         AggregateMode mode) {
  MetricsSummary m;
  m.total = pairs.size();
  std::vector<std::int64_t> unresolved;
  auto resolve = [&](const EquivalencePair& p, const char* name, Verdict v) {
    if (v != Verdict::kNeedsManual) return v;
    const auto it = manual.find({p.answer_id, name});
    if (it != manual.end() && it->second.verdict != Verdict::kNeedsManual) return it->second.verdict;
    if (unresolved.empty() || unresolved.back() != p.answer_id) unresolved.push_back(p.answer_id);
    m.warnings.push_back("answer " + std::to_string(p.answer_id) + ": " + name +
                         " needs manual review; counted as NotEquivalent");
    return Verdict::kNotEquivalent;
  };
  for (const auto& p : pairs) {
    const bool param = resolve(p, "params", p.param_verdict) == Verdict::kEquivalent;
    const bool ret = p.return_verdict;
    bool impl = false;
    if (param && ret) impl = resolve(p, "impl", p.impl_verdict) == Verdict::kEquivalent;
    m.p_count += param;
    m.r_count += ret;
    m.m_count += impl;
    m.pr_count += param || ret;
  }
  if (mode == AggregateMode::kStrict && !unresolved.empty()) throw UnresolvedManual(unresolved);
  if (m.total > 0) {
    const double t = static_cast<double>(m.total);
    m.p_acc = static_cast<double>(m.p_count) / t;
    m.r_acc = static_cast<double>(m.r_count) / t;
    m.m_acc = static_cast<double>(m.m_count) / t;
    m.pr_acc = static_cast<double>(m.pr_count) / t;
  }
  return m;
}

std::vector<PairSpec> load_pairs(const std::filesystem::path& path) {
  std::vector<PairSpec> out;
  const auto base = path.parent_path();
  for_each_record(path, [&](const nlohmann::json& j, std::size_t line) {
    PairSpec s;
    s.answer_id = field<std::int64_t>(j, "answer_id", line);
    s.left_source_path = field<std::string>(j, "left_source_path", line);
    s.right_source_path = field<std::string>(j, "right_source_path", line);
    try {
      s.language = parse_language(field<std::string>(j, "language", line));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("line " + std::to_string(line) + ": " + e.what());
    }
    if (s.left_source_path.is_relative()) s.left_source_path = base / s.left_source_path;
    if (s.right_source_path.is_relative()) s.right_source_path = base / s.right_source_path;
    out.push_back(std::move(s));
  });
  return out;
}

ManualMap load_manual(const std::filesystem::path& path) {
  ManualMap out;
  for_each_record(path, [&](const nlohmann::json& j, std::size_t line) {
    ManualResolution r;
    r.answer_id = field<std::int64_t>(j, "answer_id", line);
    r.field = field<std::string>(j, "field", line);
    if (r.field != "params" && r.field != "impl") {
      throw std::runtime_error("line " + std::to_string(line) + ": field must be params or impl");
    }
    try {
      r.verdict = parse_verdict(field<std::string>(j, "verdict", line));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("line " + std::to_string(line) + ": " + e.what());
    }
    r.note = j.value("note", "");
    out[{r.answer_id, r.field}] = std::move(r);
  });
  return out;
}

void store_manual(const ManualMap& manual, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [key, r] : manual) {
    out << nlohmann::json{{"answer_id", r.answer_id},
                          {"field", r.field},
                          {"verdict", std::string(to_string(r.verdict))},
                          {"note", r.note}}
               .dump()
        << '\n';
  }
}

std::vector<EquivalencePair> evaluate_specs(const std::vector<PairSpec>& specs,
                                            const FunctionalityOracle& oracle) {
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::vector<EquivalencePair> out;
  for (const auto& s : specs) {
    try {
      auto left = code_model::parse_method_signature(read(s.left_source_path), s.language);
      auto right = code_model::parse_method_signature(read(s.right_source_path), s.language);
      out.push_back(evaluate_pair(s.answer_id, std::move(left), std::move(right), oracle));
    } catch (const code_model::ParseError& e) {
      throw std::runtime_error("answer " + std::to_string(s.answer_id) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace code2api::equivalence
