#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "malab/rational.hpp"

namespace malab {

/// Flat "key = value" text document. Lines starting with '#' are comments;
/// keys are unique and case-sensitive. Serialization sorts keys, so equal
/// documents render byte-identically.
class KeyValueDoc {
 public:
  static KeyValueDoc parse(const std::string& text);
  static KeyValueDoc load(const std::string& path);

  std::string to_text() const;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, bool value);

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  Rational get_rational(const std::string& key) const;
  /// Comma- or whitespace-separated list of doubles.
  std::vector<double> get_doubles(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  const std::string& require(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

}  // namespace malab
