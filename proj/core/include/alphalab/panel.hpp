#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alphalab/date.hpp"
#include "alphalab/matrix.hpp"

namespace alphalab {

// dates x assets matrix of simple daily returns. Row d holds the return
// realized over day d (close of d relative to close of the previous row).
struct ReturnsPanel {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    Matrix values;

    std::optional<std::size_t> index_of(Date d) const;
    // Throws PreconditionError when shapes disagree or any return <= -1.
    void validate() const;
};

// dates x assets matrix of portfolio weights. Row d is the position decided
// with information up to and including day d; under the backtest's one-day
// lag it earns the return of the following panel row.
struct PositionsMatrix {
    std::vector<Date> dates;
    std::vector<std::string> assets;
    Matrix values;

    std::optional<std::size_t> index_of(Date d) const;
    void validate() const;
};

// First row index whose date is >= d (dates.size() when none).
std::size_t lower_bound_index(const std::vector<Date>& dates, Date d);

ReturnsPanel read_panel_csv(const std::string& path);
void write_panel_csv(const ReturnsPanel& panel, const std::string& path);

// "date,<asset>..." then one row per date.
PositionsMatrix read_positions_csv(const std::string& path);
std::string positions_to_csv(const PositionsMatrix& positions);
void write_positions_csv(const PositionsMatrix& positions, const std::string& path);

}  // namespace alphalab
