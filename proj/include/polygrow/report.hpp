#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "json.hpp"

namespace polygrow {

inline constexpr const char* kVersion = "0.1.0";

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Machine-readable result of one command. Keys serialize sorted, so two runs
/// on the same inputs differ only in "seconds".
class Report {
 public:
  explicit Report(std::string command);

  void add_input(const std::string& name, const std::string& content);
  nlohmann::json& parameters() { return parameters_; }
  nlohmann::json& results() { return results_; }
  void add_note(const std::string& note) { notes_.push_back(note); }

  nlohmann::json to_json(bool with_timing = true) const;
  std::string dump(bool with_timing = true) const { return to_json(with_timing).dump(2); }

 private:
  std::string command_;
  nlohmann::json inputs_ = nlohmann::json::object();
  nlohmann::json parameters_ = nlohmann::json::object();
  nlohmann::json results_ = nlohmann::json::object();
  nlohmann::json notes_ = nlohmann::json::array();
  std::chrono::steady_clock::time_point start_;
};

}  // namespace polygrow
