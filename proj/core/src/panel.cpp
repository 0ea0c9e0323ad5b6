#include "alphalab/panel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alphalab/csv.hpp"
#include "alphalab/error.hpp"

namespace alphalab {

namespace {

std::optional<std::size_t> find_date(const std::vector<Date>& dates, Date d) {
    auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates.begin());
}

void check_shape(const std::vector<Date>& dates, const std::vector<std::string>& assets,
                 const Matrix& values, const char* what) {
    if (values.rows() != dates.size() || values.cols() != assets.size()) {
        throw PreconditionError(std::string(what) + ": matrix shape does not match dates x assets");
    }
    if (!std::is_sorted(dates.begin(), dates.end()) ||
        std::adjacent_find(dates.begin(), dates.end()) != dates.end()) {
        throw PreconditionError(std::string(what) + ": dates must be strictly increasing");
    }
}

struct DatedTable {
    std::vector<Date> dates;
    std::vector<std::string> columns;
    Matrix values;
};

DatedTable read_dated_table(const std::string& path) {
    std::istringstream in(csv::read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw PreconditionError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = csv::split(line);
    if (header.empty() || header[0] != "date") throw PreconditionError(path + ": first column must be 'date'");
    DatedTable t;
    for (std::size_t i = 1; i < header.size(); ++i) t.columns.emplace_back(header[i]);
    std::vector<double> flat;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        auto fields = csv::split(line);
        if (fields.size() != header.size()) {
            throw PreconditionError(path + ": row " + std::to_string(row) + " has wrong column count");
        }
        t.dates.push_back(Date::parse(fields[0]));
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double v = 0;
            if (!csv::parse_double(fields[i], v)) {
                throw PreconditionError(path + ": row " + std::to_string(row) + " has a bad number");
            }
            flat.push_back(v);
        }
    }
    t.values = Matrix(t.dates.size(), t.columns.size());
    std::copy(flat.begin(), flat.end(), t.values.flat().begin());
    return t;
}

std::string dated_table_to_csv(const std::vector<Date>& dates, const std::vector<std::string>& columns,
                               const Matrix& values) {
    std::string out = "date";
    for (const auto& c : columns) out += "," + c;
    out += "\n";
    for (std::size_t r = 0; r < dates.size(); ++r) {
        out += dates[r].to_string();
        for (double v : values.row(r)) out += "," + csv::format(v);
        out += "\n";
    }
    return out;
}

}  // namespace

std::size_t lower_bound_index(const std::vector<Date>& dates, Date d) {
    return static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), d) - dates.begin());
}

std::optional<std::size_t> ReturnsPanel::index_of(Date d) const { return find_date(dates, d); }

void ReturnsPanel::validate() const {
    check_shape(dates, assets, values, "ReturnsPanel");
    for (double v : values.flat()) {
        if (!std::isfinite(v) || v <= -1.0) throw PreconditionError("ReturnsPanel: return must be finite and > -1");
    }
}

std::optional<std::size_t> PositionsMatrix::index_of(Date d) const { return find_date(dates, d); }

void PositionsMatrix::validate() const {
    check_shape(dates, assets, values, "PositionsMatrix");
    for (double v : values.flat()) {
        if (!std::isfinite(v)) throw PreconditionError("PositionsMatrix: non-finite position");
    }
}

ReturnsPanel read_panel_csv(const std::string& path) {
    auto t = read_dated_table(path);
    ReturnsPanel p{std::move(t.dates), std::move(t.columns), std::move(t.values)};
    p.validate();
    return p;
}

void write_panel_csv(const ReturnsPanel& panel, const std::string& path) {
    csv::write_file(path, dated_table_to_csv(panel.dates, panel.assets, panel.values));
}

PositionsMatrix read_positions_csv(const std::string& path) {
    auto t = read_dated_table(path);
    PositionsMatrix p{std::move(t.dates), std::move(t.columns), std::move(t.values)};
    p.validate();
    return p;
}

std::string positions_to_csv(const PositionsMatrix& positions) {
    return dated_table_to_csv(positions.dates, positions.assets, positions.values);
}

void write_positions_csv(const PositionsMatrix& positions, const std::string& path) {
    csv::write_file(path, positions_to_csv(positions));
}

}  // namespace alphalab
