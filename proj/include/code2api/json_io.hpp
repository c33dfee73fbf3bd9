// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

// JSON mappings for every record that is written to disk or sent over HTTP.
// Field names match the struct members.

#include "code2api/api_extractor.hpp"
#include "code2api/code_model.hpp"
#include "code2api/corpus.hpp"
#include "code2api/language.hpp"
#include "code2api/prompt_builder.hpp"
#include "json.hpp"

namespace code2api {

void to_json(nlohmann::json& j, Language language);
void from_json(const nlohmann::json& j, Language& language);

namespace code_model {
void to_json(nlohmann::json& j, const Param& p);
void from_json(const nlohmann::json& j, Param& p);
}  // namespace code_model

namespace corpus {
void to_json(nlohmann::json& j, const SnippetContext& ctx);
void from_json(const nlohmann::json& j, SnippetContext& ctx);
}  // namespace corpus

namespace extract {
void to_json(nlohmann::json& j, const GeneratedApi& api);
void from_json(const nlohmann::json& j, GeneratedApi& api);
}  // namespace extract

namespace prompt {
/// The corpus record fields plus worked_steps and complete_code.
void to_json(nlohmann::json& j, const FewShotExample& ex);
void from_json(const nlohmann::json& j, FewShotExample& ex);
}  // namespace prompt

}  // namespace code2api
