// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/json_io.hpp"

namespace code2api {

using nlohmann::json;

namespace {

// std::map<int, T> serializes as an object keyed by the decimal index.
json int_map_to_json(const std::map<int, std::string>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

std::map<int, std::string> int_map_from_json(const json& j) {
  std::map<int, std::string> m;
  for (const auto& [k, v] : j.items()) m.emplace(std::stoi(k), v.get<std::string>());
  return m;
}

}  // namespace

void to_json(json& j, Language language) { j = std::string(to_string(language)); }

void from_json(const json& j, Language& language) {
  language = parse_language(j.get<std::string>());
}

namespace code_model {

void to_json(json& j, const Param& p) { j = json{{"type", p.type_text}, {"name", p.name}}; }

void from_json(const json& j, Param& p) {
  j.at("type").get_to(p.type_text);
  j.at("name").get_to(p.name);
}

}  // namespace code_model

namespace corpus {

void to_json(json& j, const SnippetContext& c) {
  j = json{{"question_id", c.question_id},   {"answer_id", c.answer_id},
           {"question_title", c.question_title}, {"question_body", c.question_body},
           {"answer_body", c.answer_body},   {"code_snippet", c.code_snippet},
           {"language", c.language},         {"answer_score", c.answer_score},
           {"view_count", c.view_count},     {"tags", c.tags},
           {"is_accepted", c.is_accepted}};
}

void from_json(const json& j, SnippetContext& c) {
  j.at("question_id").get_to(c.question_id);
  j.at("answer_id").get_to(c.answer_id);
  j.at("question_title").get_to(c.question_title);
  j.at("question_body").get_to(c.question_body);
  j.at("answer_body").get_to(c.answer_body);
  j.at("code_snippet").get_to(c.code_snippet);
  j.at("language").get_to(c.language);
  j.at("answer_score").get_to(c.answer_score);
  j.at("view_count").get_to(c.view_count);
  j.at("tags").get_to(c.tags);
  j.at("is_accepted").get_to(c.is_accepted);
}

}  // namespace corpus

namespace extract {

void to_json(json& j, const GeneratedApi& api) {
  j = json{{"answer_id", api.answer_id},
           {"language", api.language},
           {"imports", api.imports},
           {"wrapper_class", api.wrapper_class ? json(*api.wrapper_class) : json(nullptr)},
           {"modifiers", api.modifiers},
           {"method_name", api.method_name},
           {"parameters", api.parameters},
           {"return_type", api.return_type},
           {"return_statements", api.return_statements},
           {"throws", api.throws},
           {"method_body", api.method_body},
           {"complete_source", api.complete_source},
           {"steps_raw", int_map_to_json(api.steps_raw)},
           {"diagnostics", api.diagnostics}};
}

void from_json(const json& j, GeneratedApi& api) {
  j.at("answer_id").get_to(api.answer_id);
  j.at("language").get_to(api.language);
  j.at("imports").get_to(api.imports);
  const auto& wc = j.at("wrapper_class");
  api.wrapper_class = wc.is_null() ? std::nullopt : std::optional<std::string>(wc.get<std::string>());
  j.at("modifiers").get_to(api.modifiers);
  j.at("method_name").get_to(api.method_name);
  j.at("parameters").get_to(api.parameters);
  j.at("return_type").get_to(api.return_type);
  j.at("return_statements").get_to(api.return_statements);
  j.at("throws").get_to(api.throws);
  j.at("method_body").get_to(api.method_body);
  j.at("complete_source").get_to(api.complete_source);
  api.steps_raw = int_map_from_json(j.at("steps_raw"));
  j.at("diagnostics").get_to(api.diagnostics);
}

}  // namespace extract

namespace prompt {

void to_json(json& j, const FewShotExample& ex) {
  j = json(ex.context);
  j["worked_steps"] = ex.worked_steps;
  j["complete_code"] = ex.complete_code;
}

void from_json(const json& j, FewShotExample& ex) {
  j.get_to(ex.context);
  j.at("worked_steps").get_to(ex.worked_steps);
  j.at("complete_code").get_to(ex.complete_code);
}

}  // namespace prompt

}  // namespace code2api
