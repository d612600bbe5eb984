#pragma once

// Runs snpsim golden cases: <name>.cmd holds one line of arguments and
// <name>.out holds "exit: <code>" followed by the expected stdout.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace golden {

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// "exit: <code>\n<stdout>"; stderr is discarded.
inline std::string invoke(const std::string& exe, const std::string& args) {
  const std::string cmd = exe + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "popen failed";
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = pclose(pipe);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return "exit: " + std::to_string(code) + "\n" + out;
}

struct Case {
  std::string name;
  std::string args;
  std::filesystem::path expected;
};

inline std::vector<Case> cases(const std::filesystem::path& dir) {
  std::vector<Case> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".cmd") continue;
    std::string args = slurp(e.path());
    while (!args.empty() && (args.back() == '\n' || args.back() == '\r')) args.pop_back();
    auto expected = e.path();
    expected.replace_extension(".out");
    out.push_back({e.path().stem().string(), args, expected});
  }
  std::sort(out.begin(), out.end(), [](const Case& a, const Case& b) { return a.name < b.name; });
  return out;
}

}  // namespace golden
