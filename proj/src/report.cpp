#include "qeta/report.hpp"

#include <algorithm>
#include <sstream>

namespace qeta {

std::string to_string(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::error:
        return "error";
    }
    return "error";
}

void VerificationReport::record_violation(std::size_t index, std::string value)
{
    if (!first_violation) {
        first_violation = Violation{index, std::move(value)};
    }
    if (status == Status::pass) {
        status = Status::fail;
    }
}

void VerificationReport::record_error(std::string message)
{
    status = Status::error;
    notes.push_back(std::move(message));
}

namespace {

void render_table(std::ostringstream& os, const ReportTable& table)
{
    std::vector<std::size_t> width(table.columns.size(), 0);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        width[c] = table.columns[c].size();
    }
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    auto line = [&](const std::vector<std::string>& cells) {
        os << "    ";
        for (std::size_t c = 0; c < cells.size() && c < width.size(); ++c) {
            os << cells[c] << std::string(width[c] - cells[c].size() + 2, ' ');
        }
        os << "\n";
    };
    os << "  [" << table.name << "]\n";
    line(table.columns);
    for (const auto& row : table.rows) {
        line(row);
    }
}

} // namespace

std::string render_text(const VerificationReport& report)
{
    std::ostringstream os;
    std::string tag = to_string(report.status);
    std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    os << tag << "  " << report.task << "  (checked " << report.checked << ")";
    if (report.first_violation) {
        os << "  first violation at index " << report.first_violation->index << ": " << report.first_violation->value;
    }
    os << "\n";
    for (const auto& note : report.notes) {
        os << "  note: " << note << "\n";
    }
    for (const auto& table : report.tables) {
        render_table(os, table);
    }
    return os.str();
}

} // namespace qeta
