#pragma once

// Run-off triangles of incremental payments: CSV parsing (long and wide
// layouts), validation, and observed/future cell enumeration.

#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "runoff/errors.hpp"

namespace runoff {

struct Cell {
    int i = 0; // origin year, 1-based
    int j = 0; // development year, 1-based
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default; // row-major order
};

using CellSet = std::vector<Cell>;

// k x k incremental-payment triangle; only the observed upper-left half
// (i + j <= k + 1) is stored. Immutable after construction.
class RunOffTriangle {
  public:
    // Validates shape and amounts: every observed position present, nothing
    // outside the triangle, all amounts strictly positive (the spread LP takes
    // logarithms of the amounts).
    static RunOffTriangle from_cells(int k, std::map<Cell, double> cells) {
        if (k < 1) throw RaggedLayout("triangle size must be >= 1, got " + std::to_string(k));
        for (const auto& [cell, amount] : cells) {
            if (cell.i < 1 || cell.i > k || cell.j < 1 || cell.j > k || cell.i + cell.j > k + 1)
                throw RaggedLayout("cell (" + std::to_string(cell.i) + "," + std::to_string(cell.j) +
                                   ") lies outside the observed triangle for k=" + std::to_string(k));
            if (!(amount > 0.0))
                throw NonPositiveAmount("amount at cell (" + std::to_string(cell.i) + "," +
                                        std::to_string(cell.j) + ") must be strictly positive, got " +
                                        std::to_string(amount));
        }
        for (int i = 1; i <= k; ++i)
            for (int j = 1; i + j <= k + 1; ++j)
                if (!cells.contains(Cell{i, j}))
                    throw MissingCell("observed cell (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") is missing");
        RunOffTriangle t;
        t.k_ = k;
        t.cells_ = std::move(cells);
        return t;
    }

    int k() const { return k_; }

    double amount(int i, int j) const {
        auto it = cells_.find(Cell{i, j});
        if (it == cells_.end())
            throw MissingCell("cell (" + std::to_string(i) + "," + std::to_string(j) +
                              ") is not an observed cell");
        return it->second;
    }

    const std::map<Cell, double>& cells() const { return cells_; }

  private:
    int k_ = 0;
    std::map<Cell, double> cells_;
};

// All observed positions (i + j <= k + 1), row-major; k(k+1)/2 of them.
inline CellSet observed_cells(int k) {
    CellSet out;
    out.reserve(static_cast<std::size_t>(k) * (k + 1) / 2);
    for (int i = 1; i <= k; ++i)
        for (int j = 1; i + j <= k + 1; ++j) out.push_back(Cell{i, j});
    return out;
}

inline CellSet observed_cells(const RunOffTriangle& t) { return observed_cells(t.k()); }

// All future positions (i + j >= k + 2), row-major; k(k-1)/2 of them.
inline CellSet future_cells(int k) {
    CellSet out;
    out.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
    for (int i = 1; i <= k; ++i)
        for (int j = k - i + 2; j <= k; ++j) out.push_back(Cell{i, j});
    return out;
}

inline CellSet future_cells(const RunOffTriangle& t) { return future_cells(t.k()); }

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline double parse_amount(const std::string& s, int lineno) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw RaggedLayout("line " + std::to_string(lineno) + ": cannot parse amount '" + s + "'");
    }
    if (pos != s.size())
        throw RaggedLayout("line " + std::to_string(lineno) + ": trailing junk in amount '" + s + "'");
    return v;
}

inline int parse_index(const std::string& s, int lineno) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw RaggedLayout("line " + std::to_string(lineno) + ": cannot parse index '" + s + "'");
    }
    if (pos != s.size())
        throw RaggedLayout("line " + std::to_string(lineno) + ": trailing junk in index '" + s + "'");
    return v;
}

} // namespace detail

// Parses either CSV layout (auto-detected by header presence):
//  - long:  header "i,j,amount", one observed cell per row;
//  - wide:  k header-less rows, row i holding the k-i+1 observed amounts
//           (trailing blank fields from a square layout are accepted).
inline RunOffTriangle parse_triangle(const std::string& text) {
    std::vector<std::pair<int, std::string>> lines; // (lineno, content)
    {
        std::stringstream ss(text);
        std::string line;
        int n = 0;
        while (std::getline(ss, line)) {
            ++n;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!detail::trim(line).empty()) lines.emplace_back(n, line);
        }
    }
    if (lines.empty()) throw RaggedLayout("empty input: no data lines found");

    const auto header = detail::split_fields(lines.front().second);
    const bool long_format = header.size() == 3 && detail::trim(header[0]) == "i" &&
                             detail::trim(header[1]) == "j" &&
                             [&] {
                                 std::string a = detail::trim(header[2]);
                                 for (auto& ch : a) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
                                 return a == "amount";
                             }();

    std::map<Cell, double> cells;
    int k = 0;
    if (long_format) {
        if (lines.size() == 1) throw RaggedLayout("long-format input has a header but no data rows");
        for (std::size_t r = 1; r < lines.size(); ++r) {
            const auto [lineno, line] = lines[r];
            auto fields = detail::split_fields(line);
            while (!fields.empty() && fields.back().empty()) fields.pop_back();
            if (fields.size() != 3)
                throw RaggedLayout("line " + std::to_string(lineno) +
                                   ": expected 3 fields i,j,amount, got " + std::to_string(fields.size()));
            const Cell cell{detail::parse_index(fields[0], lineno), detail::parse_index(fields[1], lineno)};
            const double amount = detail::parse_amount(fields[2], lineno);
            if (cells.contains(cell))
                throw DuplicateCell("line " + std::to_string(lineno) + ": duplicate cell (" +
                                    std::to_string(cell.i) + "," + std::to_string(cell.j) + ")");
            cells[cell] = amount;
            k = std::max({k, cell.i, cell.j});
        }
    } else {
        k = static_cast<int>(lines.size());
        for (int i = 1; i <= k; ++i) {
            const auto [lineno, line] = lines[static_cast<std::size_t>(i - 1)];
            auto fields = detail::split_fields(line);
            while (!fields.empty() && fields.back().empty()) fields.pop_back();
            const int expected = k - i + 1;
            if (static_cast<int>(fields.size()) != expected)
                throw RaggedLayout("line " + std::to_string(lineno) + ": row " + std::to_string(i) +
                                   " must hold " + std::to_string(expected) + " amounts, got " +
                                   std::to_string(fields.size()));
            for (int j = 1; j <= expected; ++j)
                cells[Cell{i, j}] = detail::parse_amount(fields[static_cast<std::size_t>(j - 1)], lineno);
        }
    }
    return RunOffTriangle::from_cells(k, std::move(cells));
}

// Long-format serialization with round-trip precision.
inline std::string serialize_triangle(const RunOffTriangle& t) {
    std::string out = "i,j,amount\n";
    char buf[64];
    for (const auto& [cell, amount] : t.cells()) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", cell.i, cell.j, amount);
        out += buf;
    }
    return out;
}

} // namespace runoff
