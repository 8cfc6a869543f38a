#include "coopnorm/records.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "coopnorm/errors.hpp"

namespace coopnorm {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t k = 0; k < columns_.size(); ++k) {
        if (columns_[k] == name) return k;
    }
    throw UsageError("no column named '" + name + "'");
}

bool Table::has_column(const std::string& name) const {
    for (const auto& c : columns_) {
        if (c == name) return true;
    }
    return false;
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw UsageError("row has " + std::to_string(row.size()) + " cells, table has " +
                         std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row));
}

void Table::append(const Table& other) {
    if (rows_.empty() && columns_.empty()) columns_ = other.columns_;
    if (other.columns_ != columns_) throw UsageError("cannot append tables with different columns");
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

const Cell& Table::at(std::size_t row, const std::string& name) const { return rows_.at(row).at(column(name)); }

std::optional<double> Table::number(std::size_t row, const std::string& name) const {
    const Cell& c = at(row, name);
    if (const double* d = std::get_if<double>(&c)) return *d;
    return std::nullopt;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // folds -0 into 0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round_to_serialized(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

std::string format_cell(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return format_number(*d);
    if (const std::string* s = std::get_if<std::string>(&c)) return *s;
    return "";
}

namespace {

void check_text(const std::string& s) {
    if (s.find_first_of(",\"\n\r") != std::string::npos) {
        throw UsageError("text cell '" + s + "' contains a CSV delimiter");
    }
}

Cell parse_cell(const std::string& s) {
    if (s.empty()) return std::monostate{};
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size() && errno == 0) return v;
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
    for (std::size_t k = 0; k < t.columns().size(); ++k) {
        check_text(t.columns()[k]);
        out << (k ? "," : "") << t.columns()[k];
    }
    out << '\n';
    for (const auto& row : t.rows()) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (const std::string* s = std::get_if<std::string>(&row[k])) check_text(*s);
            out << (k ? "," : "") << format_cell(row[k]);
        }
        out << '\n';
    }
}

std::string to_csv(const Table& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

Table read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("CSV input has no header line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Table t(split_line(line));
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto parts = split_line(line);
        if (parts.size() != t.columns().size()) {
            throw DomainError("CSV row has " + std::to_string(parts.size()) + " fields, expected " +
                              std::to_string(t.columns().size()));
        }
        std::vector<Cell> row;
        row.reserve(parts.size());
        for (const auto& p : parts) row.push_back(parse_cell(p));
        t.add_row(std::move(row));
    }
    return t;
}

Table parse_csv(const std::string& text) {
    std::istringstream is(text);
    return read_csv(is);
}

nlohmann::ordered_json to_json(const Table& t) {
    nlohmann::ordered_json doc;
    doc["columns"] = t.columns();
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows()) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t k = 0; k < row.size(); ++k) {
            const Cell& c = row[k];
            if (const double* d = std::get_if<double>(&c)) {
                if (std::isfinite(*d)) {
                    obj[t.columns()[k]] = round_to_serialized(*d);
                } else {
                    obj[t.columns()[k]] = format_number(*d);
                }
            } else if (const std::string* s = std::get_if<std::string>(&c)) {
                obj[t.columns()[k]] = *s;
            } else {
                obj[t.columns()[k]] = nullptr;
            }
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

std::string to_json_text(const Table& t) { return to_json(t).dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace coopnorm
