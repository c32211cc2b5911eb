#include "polygrow/report.hpp"

#include <cstdint>
#include <cstdio>

namespace polygrow {

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Report::Report(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

void Report::add_input(const std::string& name, const std::string& content) {
  inputs_[name] = {{"bytes", content.size()}, {"fnv1a", fnv1a_hex(content)}};
}

nlohmann::json Report::to_json(bool with_timing) const {
  nlohmann::json j;
  j["tool"] = "polygrow";
  j["version"] = kVersion;
  j["command"] = command_;
  j["inputs"] = inputs_;
  j["parameters"] = parameters_;
  j["results"] = results_;
  if (!notes_.empty()) j["notes"] = notes_;
  if (with_timing)
    j["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return j;
}

}  // namespace polygrow
