#include "cbu/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cbu {

ReportDocument::ReportDocument(std::string command, std::uint64_t seed, double tolerance)
    : command_(std::move(command)), seed_(seed), tolerance_(tolerance) {}

void ReportDocument::add(const std::string& name, bool pass, double value,
                         const std::string& detail) {
    checks_.push_back(CheckResult{name, pass, value, detail});
}

void ReportDocument::add(CheckResult check) { checks_.push_back(std::move(check)); }

void ReportDocument::put(const std::string& key, Datum value) {
    data_.emplace_back(key, std::move(value));
}

bool ReportDocument::all_pass() const {
    for (const CheckResult& c : checks_) {
        if (!c.pass) return false;
    }
    return true;
}

std::string ReportDocument::to_json() const {
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["command"] = command_;
    doc["seed"] = seed_;
    doc["tolerance"] = tolerance_;
    if (!data_.empty()) {
        nlohmann::ordered_json data;
        for (const auto& [key, value] : data_) {
            std::visit([&](const auto& v) { data[key] = v; }, value);
        }
        doc["data"] = std::move(data);
    }
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckResult& c : checks_) {
        nlohmann::ordered_json entry;
        entry["name"] = c.name;
        entry["pass"] = c.pass;
        entry["value"] = c.value;
        entry["detail"] = c.detail;
        checks.push_back(std::move(entry));
    }
    doc["checks"] = std::move(checks);
    doc["all_pass"] = all_pass();
    return doc.dump(2) + "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    char buf[64];
    for (const std::vector<double>& row : rows) {
        if (row.size() != header.size()) throw std::logic_error("csv row width mismatch");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << buf;
        }
        out << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

}  // namespace cbu
