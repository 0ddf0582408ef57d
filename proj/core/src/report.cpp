#include "cfsem/report.hpp"

#include <sstream>

namespace cfsem {

void Report::kv(std::string key, std::string value) {
  machine_.emplace_back(std::move(key), std::move(value));
}

void Report::kv_flag(std::string key, bool value) {
  kv(std::move(key), value ? "true" : "false");
}

void Report::kv_number(const std::string& key, const Rational& r) {
  kv(key, format_fraction(r));
  kv(key + "_decimal", format_decimal(r, digits_));
}

std::string Report::number(const Rational& r) const {
  return format_decimal(r, digits_) + " (" + format_fraction(r) + ")";
}

std::string Report::render() const {
  std::ostringstream out;
  for (const auto& line : human_) out << line << "\n";
  out << "```\n";
  for (const auto& [key, value] : machine_) out << key << " = " << value << "\n";
  out << "```\n";
  return out.str();
}

}  // namespace cfsem
