// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include <algorithm>

#include "code2api/api_extractor.hpp"
#include "code2api/json_io.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace code2api;
using extract::ExtractError;
using testing::read_data;

namespace {

bool has_diag(const extract::GeneratedApi& api, std::string_view prefix) {
  return std::any_of(api.diagnostics.begin(), api.diagnostics.end(),
                     [&](const std::string& d) { return d.starts_with(prefix); });
}

}  // namespace

TEST_CASE("int-list response fields") {
  const auto fields = extract::extract_fields(read_data("int_list/response.txt"));
  CHECK_FALSE(fields.degraded);
  REQUIRE(fields.steps_raw.size() == 7);
  CHECK(fields.steps_raw.at(4) == "convertIntArrayToList");
  CHECK(fields.steps_raw.at(5) == "(int[] arr)");
  CHECK(fields.steps_raw.at(7) == "// None");
  auto expected = read_data("int_list/complete_code.java");
  expected.pop_back();  // trailing newline
  CHECK(fields.complete_code == expected);
  CHECK(std::count(fields.complete_code.begin(), fields.complete_code.end(), '\n') + 1 == 11);
}

TEST_CASE("int-list end to end") {
  const auto api = extract::extract_api(read_data("int_list/response.txt"), Language::kJava, 1);
  CHECK(api.method_name == "convertIntArrayToList");
  REQUIRE(api.parameters.size() == 1);
  CHECK(api.parameters[0].type_text == "int[]");
  CHECK(api.parameters[0].name == "arr");
  CHECK(api.return_type == "List<Integer>");
  CHECK(api.return_statements == std::vector<std::string>{"return intList"});
  CHECK(api.imports == std::vector<std::string>{"java.util.ArrayList", "java.util.List"});
  CHECK(api.throws.empty());
  CHECK(api.wrapper_class == "Chatgpt");
  CHECK(api.modifiers == "public static");
  CHECK(api.diagnostics.empty());
  CHECK(extract::artifact_file_name(api.answer_id, api.language) == "Code2API1.java");
}

TEST_CASE("remove-item human API") {
  const auto api = extract::parse_generated(read_data("remove_item/human_api.java"), Language::kJava, 2);
  CHECK(api.method_name == "removeItemFromStringArray");
  REQUIRE(api.parameters.size() == 2);
  CHECK(api.parameters[0].name == "str_array");
  CHECK(api.parameters[1].name == "item");
  CHECK(api.return_statements == std::vector<std::string>{"return str_array"});
}

TEST_CASE("missing complete code marker") {
  try {
    extract::extract_fields("Specific steps:\nStep 1: None\n");
    FAIL("expected ExtractError");
  } catch (const ExtractError& e) {
    CHECK(e.kind() == ExtractError::Kind::kMissingCompleteCode);
  }
  CHECK_THROWS_AS(extract::extract_fields("Complete code:\n\n   \n"), ExtractError);
}

TEST_CASE("fenced code equals its unfenced twin") {
  const auto code = read_data("int_list/complete_code.java");
  const std::string plain = "Here you go.\n\nComplete code:\n" + code;
  const std::string fenced =
      "Here you go.\n\n**Complete code:**\n```java\n" + code + "```\nHope this helps!\n";
  const auto a = extract::extract_fields(plain);
  const auto b = extract::extract_fields(fenced);
  CHECK(a.complete_code == b.complete_code);
  CHECK(b.complete_code.find("```") == std::string::npos);
  CHECK(b.complete_code.find("Hope") == std::string::npos);
  CHECK(a.degraded);
}

TEST_CASE("step capture variants") {
  const auto fields = extract::extract_fields(
      "Sure! Let me think.\n"
      "**Step 1** - import java.io.File;\n"
      "- step 2: public class Chatgpt {}\n"
      "STEP 4:\n"
      "`deleteFile`\n"
      "\n"
      "Step 4: ignored duplicate\n"
      "Complete code: public class A { public void deleteFile() {} }\n");
  CHECK(fields.steps_raw.at(1) == "import java.io.File;");
  CHECK(fields.steps_raw.at(2) == "public class Chatgpt {}");
  CHECK(fields.steps_raw.at(4) == "`deleteFile`");
  CHECK(fields.complete_code == "public class A { public void deleteFile() {} }");
}

TEST_CASE("multiple complete code blocks: last wins") {
  const auto fields = extract::extract_fields(
      "Complete code:\nclass A { void f() {} }\nActually, better:\nComplete code:\nclass B { void g() {} }\n");
  CHECK(fields.complete_code == "class B { void g() {} }");
  REQUIRE(fields.diagnostics.size() == 2);
  CHECK(fields.diagnostics[0].starts_with("MultipleCompleteCode"));
  CHECK(fields.diagnostics[1].starts_with("MissingSteps"));
}

TEST_CASE("extraction is stable under re-rendering") {
  for (const char* name : {"int_list/response.txt", "int_list/response_as_printed.txt"}) {
    const auto once = extract::extract_fields(read_data(name));
    const auto twice =
        extract::extract_fields(extract::render_response(once.steps_raw, once.complete_code));
    CHECK(once.steps_raw == twice.steps_raw);
    CHECK(once.complete_code == twice.complete_code);
  }
}

TEST_CASE("source primacy: withholding steps changes nothing but steps and diagnostics") {
  const auto fields = extract::extract_fields(read_data("int_list/response.txt"));
  auto with = extract::parse_generated(fields.complete_code, Language::kJava, 1, fields.steps_raw);
  auto without = extract::parse_generated(fields.complete_code, Language::kJava, 1);
  with.steps_raw.clear();
  CHECK(with == without);
}

TEST_CASE("disagreements favour the source") {
  std::map<int, std::string> steps{{4, "toList"}, {5, "(int[] values)"}, {7, "throws IOException"}};
  const auto api = extract::parse_generated(read_data("int_list/complete_code.java"),
                                            Language::kJava, 1, steps);
  CHECK(api.method_name == "convertIntArrayToList");
  CHECK(has_diag(api, "Disagreement: step 4"));
  CHECK(has_diag(api, "Disagreement: step 5"));
  CHECK(has_diag(api, "Disagreement: step 7"));
  CHECK_FALSE(has_diag(api, "Disagreement: step 6"));
}

TEST_CASE("none answers") {
  CHECK(extract::is_none_answer("// None"));
  CHECK(extract::is_none_answer("None."));
  CHECK(extract::is_none_answer("`# none`"));
  CHECK(extract::is_none_answer(""));
  CHECK_FALSE(extract::is_none_answer("return None"));
}

TEST_CASE("unparseable code") {
  try {
    extract::parse_generated("int x = 1;\nSystem.out.println(x);", Language::kJava, 3);
    FAIL("expected ExtractError");
  } catch (const ExtractError& e) {
    CHECK(e.kind() == ExtractError::Kind::kUnparseable);
  }
  CHECK_THROWS_AS(extract::parse_generated("   ", Language::kJava, 3), ExtractError);
  CHECK_THROWS_AS(
      extract::parse_generated("class A { static void f(int a, int a) {} }", Language::kJava, 3),
      ExtractError);
}

TEST_CASE("bare Java method is wrapped") {
  const auto api = extract::parse_generated(
      "import java.util.List;\npublic static int size(List<String> xs) {\n    return xs.size();\n}",
      Language::kJava, 4);
  CHECK(api.wrapper_class == "Chatgpt");
  CHECK(has_diag(api, "WrappedInClass"));
  CHECK(api.complete_source.starts_with("import java.util.List;\npublic class Chatgpt {\n"));
  CHECK(api.imports == std::vector<std::string>{"java.util.List"});
}

TEST_CASE("python response") {
  const std::string response =
      "Specific steps:\n"
      "Step 1: import os\n"
      "Step 2: def\n"
      "Step 3: list_python_files\n"
      "Step 4: (directory)\n"
      "Step 5: return files\n"
      "Step 6: # None\n"
      "Complete code:\n"
      "```python\n"
      "import os\n"
      "\n"
      "def list_python_files(directory):\n"
      "    files = [f for f in os.listdir(directory) if f.endswith('.py')]\n"
      "    return files\n"
      "```\n";
  const auto api = extract::extract_api(response, Language::kPython, 7);
  CHECK(api.method_name == "list_python_files");
  CHECK_FALSE(api.wrapper_class.has_value());
  CHECK(api.return_type == "unannotated");
  CHECK(api.imports == std::vector<std::string>{"os"});
  CHECK(api.diagnostics.empty());
  CHECK(extract::artifact_file_name(7, Language::kPython) == "code2api_7.py");
}

TEST_CASE("write_artifact round trip") {
  testing::TempDir dir;
  const auto api = extract::extract_api(read_data("int_list/response.txt"), Language::kJava, 1234);
  const auto path = extract::write_artifact(api, dir.path() / "out");
  CHECK(path.filename() == "Code2API1234.java");
  CHECK(testing::read_file(path) == api.complete_source);
  const auto meta = nlohmann::json::parse(testing::read_file(path.string() + ".meta.json"));
  CHECK(meta.get<extract::GeneratedApi>() == api);
}
