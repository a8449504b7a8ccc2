#pragma once

// Structured outcome of a verification task. Reports are plain values; the
// CLI renders them as text or as JSON (see docs/report-schema.md).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qeta {

enum class Status { pass, fail, error };

std::string to_string(Status s);

struct Violation {
    std::size_t index = 0;
    std::string value;
};

struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct VerificationReport {
    std::string task;
    Status status = Status::pass;
    std::size_t checked = 0;
    std::optional<Violation> first_violation;
    std::vector<ReportTable> tables;
    std::vector<std::string> notes;

    [[nodiscard]] bool passed() const noexcept { return status == Status::pass; }

    /// Marks the report failed at `index` unless a violation is already recorded.
    void record_violation(std::size_t index, std::string value);
    /// Marks the report as an error with a note.
    void record_error(std::string message);
};

/// Multi-line human-readable rendering.
std::string render_text(const VerificationReport& report);

} // namespace qeta
