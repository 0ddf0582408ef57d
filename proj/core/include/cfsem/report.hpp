#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cfsem/rational.hpp"

namespace cfsem {

/// Accumulates a human-readable report and a machine-readable block of
/// `key = value` lines, rendered after the human text inside a ``` fence.
/// Every numeric is emitted both as an exact fraction and, under
/// "<key>_decimal", at the requested precision (round half to even).
class Report {
 public:
  explicit Report(unsigned digits = 6) : digits_(digits) {}

  unsigned digits() const { return digits_; }

  void line(std::string text) { human_.push_back(std::move(text)); }
  void blank() { human_.emplace_back(); }
  void kv(std::string key, std::string value);
  void kv_flag(std::string key, bool value);
  /// Emits `key = <fraction>` and `key_decimal = <decimal>`.
  void kv_number(const std::string& key, const Rational& r);

  /// Human-facing "0.640800 (801/1250)" rendering.
  std::string number(const Rational& r) const;

  std::string render() const;

 private:
  unsigned digits_;
  std::vector<std::string> human_;
  std::vector<std::pair<std::string, std::string>> machine_;
};

}  // namespace cfsem
