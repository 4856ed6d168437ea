#include "malab/keyvalue.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "malab/csv.hpp"
#include "malab/errors.hpp"

namespace malab {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueDoc KeyValueDoc::parse(const std::string& text) {
  KeyValueDoc doc;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw InvalidArgument("line " + std::to_string(line_no) + ": empty key");
    if (doc.values_.count(key))
      throw InvalidArgument("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    doc.values_.emplace(std::move(key), std::move(value));
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string KeyValueDoc::to_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << '\n';
  return os.str();
}

void KeyValueDoc::set(const std::string& key, double value) { values_[key] = format_double(value); }
void KeyValueDoc::set(const std::string& key, long long value) {
  values_[key] = std::to_string(value);
}
void KeyValueDoc::set(const std::string& key, bool value) { values_[key] = value ? "true" : "false"; }

const std::string& KeyValueDoc::require(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("missing key '" + key + "'");
  return it->second;
}

std::string KeyValueDoc::get_string(const std::string& key) const { return require(key); }

double KeyValueDoc::get_double(const std::string& key) const {
  const std::string& v = require(key);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw InvalidArgument("key '" + key + "': not a number: '" + v + "'");
  }
}

long long KeyValueDoc::get_int(const std::string& key) const {
  const std::string& v = require(key);
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::logic_error&) {
    throw InvalidArgument("key '" + key + "': not an integer: '" + v + "'");
  }
}

bool KeyValueDoc::get_bool(const std::string& key) const {
  std::string v = require(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("key '" + key + "': not a boolean: '" + v + "'");
}

Rational KeyValueDoc::get_rational(const std::string& key) const {
  return Rational::parse(require(key));
}

std::vector<double> KeyValueDoc::get_doubles(const std::string& key) const {
  std::string v = require(key);
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::logic_error&) {
      throw InvalidArgument("key '" + key + "': bad list entry '" + tok + "'");
    }
  }
  return out;
}

std::string KeyValueDoc::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}
double KeyValueDoc::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}
long long KeyValueDoc::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}
bool KeyValueDoc::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

}  // namespace malab
