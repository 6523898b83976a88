#pragma once
// Verification reports: an ordered JSON document that is byte-stable for a
// fixed command line and seed (no timestamps, fixed key order), and a CSV
// writer for profile dumps.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cbu {

struct CheckResult {
    std::string name;
    bool pass = false;
    /** Margin for inequalities, residual for identities. */
    double value = 0;
    /** Witness or failure note; empty when passing. */
    std::string detail;
};

class ReportDocument {
  public:
    using Datum = std::variant<bool, std::int64_t, double, std::string,
                               std::vector<std::int64_t>>;

    ReportDocument(std::string command, std::uint64_t seed, double tolerance);

    void add(const std::string& name, bool pass, double value, const std::string& detail = "");
    void add(CheckResult check);

    /** Command-specific payload under the "data" key, in insertion order.
        Omitted from the JSON when nothing was put. */
    void put(const std::string& key, Datum value);

    bool all_pass() const;
    const std::vector<CheckResult>& checks() const { return checks_; }

    /** Deterministic serialization, two-space indent, trailing newline. */
    std::string to_json() const;

  private:
    std::string command_;
    std::uint64_t seed_;
    double tolerance_;
    std::vector<std::pair<std::string, Datum>> data_;
    std::vector<CheckResult> checks_;
};

/** Header plus numeric rows, 17 significant digits, LF line endings. */
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cbu
