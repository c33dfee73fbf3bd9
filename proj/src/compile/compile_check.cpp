// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/compile_check.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "code2api/code_model.hpp"
#include "code2api/lexer.hpp"
#include "code2api/prompt_builder.hpp"
#include "code2api/text.hpp"
#include "code2api/version.hpp"
#include "json.hpp"

extern char** environ;

namespace code2api::compile {

namespace {

using Kind = CompileError::Kind;

std::string scratch_prefix() { return "code2api-compile-" + std::to_string(::getpid()) + "-"; }

// Unique scratch directory, removed on destruction.
class Scratch {
 public:
  Scratch() {
    std::error_code ec;
    const auto base = std::filesystem::temp_directory_path(ec);
    if (ec) throw CompileError(Kind::kWorkspaceError, "no temp directory: " + ec.message());
    std::string templ = (base / (scratch_prefix() + "XXXXXX")).string();
    if (::mkdtemp(templ.data()) == nullptr) {
      throw CompileError(Kind::kWorkspaceError,
                         "cannot create scratch directory: " + std::string(std::strerror(errno)));
    }
    path_ = templ;
  }
  ~Scratch() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

bool executable(const std::string& command) {
  if (command.empty()) return false;
  if (command.find('/') != std::string::npos) return ::access(command.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (path == nullptr) return false;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (!dir.empty() && ::access((dir + "/" + command).c_str(), X_OK) == 0) return true;
  }
  return false;
}

std::string substitute(std::string arg, const std::filesystem::path& file,
                       const std::filesystem::path& dir, const std::filesystem::path& out) {
  const std::pair<std::string, std::string> subs[] = {
      {"{file}", file.string()}, {"{dir}", dir.string()}, {"{out}", out.string()}};
  for (const auto& [key, value] : subs) {
    for (std::size_t p = arg.find(key); p != std::string::npos; p = arg.find(key, p + value.size())) {
      arg.replace(p, key.size(), value);
    }
  }
  return arg;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const Toolchain& tc, const std::vector<std::string>& args,
              const std::filesystem::path& cwd, const std::filesystem::path& log) {
  std::vector<char*> argv;
  std::string command = tc.command;
  argv.push_back(command.data());
  std::vector<std::string> owned = args;
  for (auto& a : owned) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawnattr_t attr;
  posix_spawn_file_actions_init(&actions);
  posix_spawnattr_init(&attr);
  posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 1, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  posix_spawn_file_actions_adddup2(&actions, 1, 2);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  // posix_spawn has no portable chdir action; the child inherits ours, and
  // every path handed to it is absolute, so cwd is informational only.
  (void)cwd;
  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, command.c_str(), &actions, &attr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    throw CompileError(Kind::kToolchainMissing,
                       "cannot start " + tc.command + ": " + std::strerror(rc));
  }

  const auto deadline = std::chrono::steady_clock::now() + tc.timeout;
  int status = 0;
  for (;;) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) {
      throw CompileError(Kind::kWorkspaceError, "waitpid failed: " + std::string(std::strerror(errno)));
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw CompileError(Kind::kTimeout, tc.id + " exceeded " +
                                             std::to_string(tc.timeout.count()) + " ms");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }

  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  std::ifstream in(log, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::vector<Diagnostic> parse_diagnostics(const Toolchain& tc, const std::string& output,
                                          int line_offset) {
  std::vector<Diagnostic> out;
  if (tc.diagnostic_pattern.empty()) return out;
  const std::regex re(tc.diagnostic_pattern);
  for (const auto line : text::split_lines(output)) {
    const std::string s(line);
    std::smatch m;
    if (!std::regex_search(s, m, re)) continue;
    auto group_int = [&](int g) {
      if (g <= 0 || static_cast<std::size_t>(g) >= m.size() || !m[g].matched) return 0;
      return std::atoi(m[g].str().c_str());
    };
    Diagnostic d;
    d.line = group_int(tc.line_group);
    if (d.line > 0) d.line = std::max(0, d.line - line_offset);
    d.column = group_int(tc.column_group);
    if (tc.message_group > 0 && static_cast<std::size_t>(tc.message_group) < m.size()) {
      d.message = m[tc.message_group].str();
    }
    out.push_back(std::move(d));
  }
  return out;
}

// Skips "@Name" and "@Name(...)".
std::size_t skip_annotations(const std::vector<lexer::Token>& t, std::size_t i) {
  while (i + 1 < t.size() && lexer::is_punct(t[i], "@") && t[i + 1].kind == lexer::TokenKind::kIdent) {
    i += 2;
    while (i + 1 < t.size() && lexer::is_punct(t[i], ".")) i += 2;
    if (i < t.size() && lexer::is_punct(t[i], "(")) {
      int depth = 0;
      for (; i < t.size(); ++i) {
        if (lexer::is_punct(t[i], "(")) ++depth;
        if (lexer::is_punct(t[i], ")") && --depth == 0) {
          ++i;
          break;
        }
      }
    }
  }
  return i;
}

std::size_t skip_angles(const std::vector<lexer::Token>& t, std::size_t i) {
  if (i >= t.size() || !lexer::is_punct(t[i], "<")) return i;
  int depth = 0;
  for (; i < t.size(); ++i) {
    if (lexer::is_punct(t[i], "<")) ++depth;
    if (lexer::is_punct(t[i], ">") && --depth == 0) return i + 1;
  }
  return i;
}

// "[modifiers] [<T>] Type name (" at the start of the text.
bool starts_with_method(std::string_view source) {
  const auto t = lexer::tokenize(source, Language::kJava);
  static const std::set<std::string_view> kModifiers = {
      "public", "private", "protected", "static", "final", "synchronized",
      "abstract", "native", "strictfp", "default"};
  std::size_t i = skip_annotations(t, 0);
  while (i < t.size() && t[i].kind == lexer::TokenKind::kIdent && kModifiers.count(t[i].text)) {
    i = skip_annotations(t, i + 1);
  }
  i = skip_angles(t, i);
  if (i >= t.size() || t[i].kind != lexer::TokenKind::kIdent) return false;
  ++i;
  while (i + 1 < t.size() && lexer::is_punct(t[i], ".") && t[i + 1].kind == lexer::TokenKind::kIdent) {
    i += 2;
  }
  i = skip_angles(t, i);
  while (i + 1 < t.size() && lexer::is_punct(t[i], "[") && lexer::is_punct(t[i + 1], "]")) i += 2;
  if (i < t.size() && lexer::is_punct(t[i], "...")) ++i;
  return i + 1 < t.size() && t[i].kind == lexer::TokenKind::kIdent && lexer::is_punct(t[i + 1], "(");
}

}  // namespace

std::vector<Toolchain> load_toolchains(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open toolchain config " + path.string());
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("toolchains") || !j["toolchains"].is_array()) {
    throw std::runtime_error("toolchain config needs a \"toolchains\" array: " + path.string());
  }
  std::vector<Toolchain> out;
  for (const auto& e : j["toolchains"]) {
    try {
      Toolchain tc;
      tc.id = e.at("id").get<std::string>();
      tc.language = parse_language(e.at("language").get<std::string>());
      tc.command = e.at("command").get<std::string>();
      tc.args = e.value("args", std::vector<std::string>{});
      tc.diagnostic_pattern = e.value("diagnostic_pattern", "");
      tc.line_group = e.value("line_group", 1);
      tc.column_group = e.value("column_group", 0);
      tc.message_group = e.value("message_group", 2);
      tc.timeout = std::chrono::milliseconds(e.value("timeout_ms", 30000));
      if (!tc.diagnostic_pattern.empty()) (void)std::regex(tc.diagnostic_pattern);
      out.push_back(std::move(tc));
    } catch (const std::exception& ex) {
      throw std::runtime_error("bad toolchain entry in " + path.string() + ": " + ex.what());
    }
  }
  return out;
}

std::filesystem::path default_toolchains_path() {
  if (const char* env = std::getenv("CODE2API_TOOLCHAINS"); env != nullptr && *env != '\0') {
    return env;
  }
  return kDefaultToolchains;
}

const Toolchain& toolchain_for(const std::vector<Toolchain>& toolchains, Language language) {
  for (const auto& tc : toolchains) {
    if (tc.language == language) return tc;
  }
  throw CompileError(Kind::kToolchainMissing,
                     "no " + std::string(display_name(language)) + " toolchain configured");
}

std::optional<std::pair<std::string, int>> wrap_java_snippet(std::string_view source,
                                                             std::string_view class_name) {
  if (!code_model::java_top_level_types(source).empty()) return std::nullopt;
  // Imports move to the first line next to the wrapper opening, and their
  // original lines stay blank, so line k of the snippet is line k + 1.
  std::string imports;
  std::string rest;
  for (const auto line : text::split_lines(source)) {
    const auto t = text::trim(line);
    if (t.starts_with("import ") || t.starts_with("package ")) {
      if (t.starts_with("import ")) imports += std::string(t) + " ";
      rest += '\n';
    } else {
      rest += std::string(line) + '\n';
    }
  }
  const bool method = starts_with_method(rest);
  std::string out = imports + "public class " + std::string(class_name) + " {";
  if (!method) out += " public static void snippet() throws Throwable {";
  out += '\n';
  out += rest;
  out += method ? "}\n" : "}\n}\n";
  return std::make_pair(out, 1);
}

CompileOutcome compile_once(std::string_view source, const Toolchain& toolchain,
                            std::int64_t answer_id) {
  CompileOutcome out;
  out.final_source = std::string(source);
  out.toolchain_id = toolchain.id;
  if (text::trim(source).empty()) {
    out.raw_output = "empty source";
    out.diagnostics.push_back({0, 0, "empty source"});
    return out;
  }
  if (!executable(toolchain.command)) {
    throw CompileError(Kind::kToolchainMissing, toolchain.id + ": " + toolchain.command +
                                                    " is not an executable");
  }

  std::string text(source);
  int line_offset = 0;
  std::string file_name;
  if (toolchain.language == Language::kJava) {
    const std::string fallback = "Code2API" + std::to_string(answer_id);
    if (auto wrapped = wrap_java_snippet(source, fallback)) {
      text = std::move(wrapped->first);
      line_offset = wrapped->second;
    }
    file_name = fallback + ".java";
    for (const auto& decl : code_model::java_top_level_types(text)) {
      if (decl.is_public) {
        file_name = decl.name + ".java";
        break;
      }
    }
  } else {
    file_name = extract::artifact_file_name(answer_id, toolchain.language);
  }

  Scratch scratch;
  const auto file = scratch.path() / file_name;
  const auto classes = scratch.path() / "out";
  {
    std::error_code ec;
    std::filesystem::create_directories(classes, ec);
    std::ofstream f(file, std::ios::binary);
    f << text;
    if (ec || !f) throw CompileError(Kind::kWorkspaceError, "cannot write " + file.string());
  }
  std::vector<std::string> args;
  for (const auto& a : toolchain.args) args.push_back(substitute(a, file, scratch.path(), classes));
  const RunResult r = run(toolchain, args, scratch.path(), scratch.path() / "toolchain.log");

  out.raw_output = r.output;
  out.success = r.exit_code == 0;
  if (!out.success) {
    out.diagnostics = parse_diagnostics(toolchain, r.output, line_offset);
    if (out.diagnostics.empty()) {
      std::string last;
      for (const auto line : text::split_lines(r.output)) {
        if (!text::trim(line).empty()) last = std::string(line);
      }
      if (last.empty()) last = "exit status " + std::to_string(r.exit_code);
      out.diagnostics.push_back({0, 0, last});
      if (r.output.find(last) == std::string::npos) out.raw_output += last;
    }
  }
  return out;
}

std::size_t live_scratch_dirs() {
  std::size_t n = 0;
  std::error_code ec;
  const auto prefix = scratch_prefix();
  for (const auto& e : std::filesystem::directory_iterator(std::filesystem::temp_directory_path(), ec)) {
    if (e.path().filename().string().starts_with(prefix)) ++n;
  }
  return n;
}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += '\n';
    if (d.line > 0) {
      out += "Line " + std::to_string(d.line);
      if (d.column > 0) out += ", Column " + std::to_string(d.column);
      out += ": ";
    }
    out += d.message;
  }
  return out;
}

CompileOutcome repair_loop(const extract::GeneratedApi& api, llm::Client& client,
                           const Toolchain& toolchain, const RepairOptions& options) {
  if (options.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  const auto plan = prompt::default_cot(
      api.language, api.wrapper_class.value_or(std::string(prompt::kDefaultWrapperClass)));
  std::string source = api.complete_source;
  CompileOutcome out = compile_once(source, toolchain, api.answer_id);
  int rounds = 0;
  while (!out.success && rounds < options.max_rounds) {
    llm::CompletionRequest req;
    req.model_name = options.model_name;
    req.answer_id = api.answer_id;
    req.prompt_text =
        prompt::render_repair_prompt(api.language, source, format_diagnostics(out.diagnostics), plan);
    llm::CompletionResponse resp;
    try {
      resp = client.complete(req);
    } catch (const llm::BackendError& e) {
      out.rounds_used = rounds;
      throw RepairError(e, out);
    }
    ++rounds;
    if (resp.truncated) {
      out.diagnostics = {{0, 0, "model response was truncated"}};
      continue;
    }
    try {
      source = extract::extract_api(resp.raw_text, api.language, api.answer_id).complete_source;
    } catch (const extract::ExtractError& e) {
      out.diagnostics = {{0, 0, std::string("unusable model response: ") + e.what()}};
      continue;
    }
    out = compile_once(source, toolchain, api.answer_id);
  }
  out.rounds_used = rounds;
  return out;
}

}  // namespace code2api::compile
