#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace ewa {

// Flat key = value text, '#' starts a comment. Later assignments win.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig from_file(const std::filesystem::path& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace ewa
