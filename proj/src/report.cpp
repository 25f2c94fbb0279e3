#include "superwarp/report.hpp"

#include <cstdio>
#include <sstream>

namespace superwarp {

void VerificationReport::append(const VerificationReport& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

int VerificationReport::passed() const {
  int n = 0;
  for (const auto& r : records) n += r.pass;
  return n;
}

namespace {

// Records are tab separated, so tabs and newlines inside fields are escaped.
std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\t') out += "\\t";
    else if (c == '\n') out += "\\n";
    else if (c == '\\') out += "\\\\";
    else out += c;
  }
  return out;
}

}  // namespace

std::string VerificationReport::serialize() const {
  std::ostringstream os;
  os << "# superwarp verification report\n";
  os << "version\t" << version << "\n";
  os << "spec_checksum\t" << (spec_checksum.empty() ? "-" : spec_checksum) << "\n";
  os << "[records]\n";
  os << "check_id\tanchor\ttuple\tpass\tresidual\n";
  for (const auto& r : records)
    os << escape(r.check_id) << '\t' << escape(r.anchor) << '\t' << escape(r.tuple) << '\t'
       << (r.pass ? "pass" : "FAIL") << '\t' << escape(r.residual) << '\n';
  os << "[notes]\n";
  for (const auto& n : notes) os << "- " << escape(n) << '\n';
  os << "[summary]\n";
  os << "total\t" << records.size() << "\n";
  os << "passed\t" << passed() << "\n";
  os << "failed\t" << failed() << "\n";
  return os.str();
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace superwarp
