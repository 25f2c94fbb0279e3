#pragma once

// Verification records and their line-oriented serialization.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace superwarp {

inline constexpr const char* kVersion = "0.3.0";

struct CheckRecord {
  std::string check_id;  // e.g. "3.5(2)"
  std::string anchor;    // short human label of the identity
  std::string tuple;     // argument tuple, e.g. "(d_y1,d_t,d_t)"
  std::string residual;  // canonical residual; "0" iff the check passed
  bool pass = false;
};

struct VerificationReport {
  std::string version = kVersion;
  std::string spec_checksum;
  std::vector<CheckRecord> records;
  std::vector<std::string> notes;

  void add(CheckRecord r) { records.push_back(std::move(r)); }
  void append(const VerificationReport& other);
  int passed() const;
  int failed() const { return static_cast<int>(records.size()) - passed(); }
  bool all_pass() const { return failed() == 0; }

  /// Machine-readable records, then a short human summary. Byte-identical
  /// for identical inputs.
  std::string serialize() const;
};

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace superwarp
