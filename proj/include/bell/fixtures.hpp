#pragma once

#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bell/io.hpp"

namespace bell {

/// Reference rows for the tilted-inequality measurements.
struct Table2Row {
    double tau, s_chsh, minus_e1_e2, s_tau, ds_tau, local_bound, theta_deg;
};

/// Reference rows for the chained-inequality measurements (n = 2..45).
struct Table3Row {
    int n;
    double i_n, nu_n, delta_n, ddelta_n;
};

/// Reference states and measurement angles for the M inequalities; missing
/// angles are NaN.
struct Table4Row {
    std::string inequality;
    double theta_deg;
    double a[4];
    double b[3];
};

struct Fixtures {
    std::vector<Table2Row> table2;  ///< 22 rows
    std::vector<Table3Row> table3;  ///< 44 rows
    std::vector<Table4Row> table4;  ///< 2 rows
    json headline;
};

/// Directory holding the committed reference tables. Resolution order:
/// explicit argument, $BELL_DATA_DIR, compile-time default.
inline std::string data_dir(const std::string& override_dir = "") {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("BELL_DATA_DIR")) return env;
#ifdef BELL_DATA_DIR
    return BELL_DATA_DIR;
#else
    return "data";
#endif
}

namespace detail {

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

inline std::string checked_fixture(const std::string& dir, const std::string& name) {
    const std::string bytes = read_file(dir + "/" + name);
    const json sums = json::parse(read_file(dir + "/checksums.json"));
    const std::string want = sums.at(name).get<std::string>();
    const std::string got = fnv1a64_hex(bytes);
    if (got != want)
        throw IoError("fixture " + name + " fails its transcription checksum (" + got +
                      " != " + want + ")");
    return bytes;
}

inline double cell_value(const std::string& s) {
    if (s == "NA") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

}  // namespace detail

inline Fixtures load_fixtures(const std::string& dir_override = "") {
    const std::string dir = data_dir(dir_override);
    Fixtures fx;

    for (const auto& cells : detail::parse_csv(detail::checked_fixture(dir, "table2.csv"))) {
        if (cells[0] == "tau") continue;
        fx.table2.push_back(Table2Row{std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2]),
                                      std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5]),
                                      std::stod(cells[6])});
    }
    for (const auto& cells : detail::parse_csv(detail::checked_fixture(dir, "table3.csv"))) {
        if (cells[0] == "n") continue;
        fx.table3.push_back(Table3Row{std::stoi(cells[0]), std::stod(cells[1]), std::stod(cells[2]),
                                      std::stod(cells[3]), std::stod(cells[4])});
    }
    for (const auto& cells : detail::parse_csv(detail::checked_fixture(dir, "table4.csv"))) {
        if (cells[0] == "inequality") continue;
        Table4Row row;
        row.inequality = cells[0];
        row.theta_deg = std::stod(cells[1]);
        for (int i = 0; i < 4; ++i) row.a[i] = detail::cell_value(cells[2 + i]);
        for (int i = 0; i < 3; ++i) row.b[i] = detail::cell_value(cells[6 + i]);
        fx.table4.push_back(row);
    }
    fx.headline = json::parse(detail::checked_fixture(dir, "headline.json"));

    if (fx.table2.size() != 22) throw IoError("table2 must hold 22 rows");
    if (fx.table3.size() != 44) throw IoError("table3 must hold 44 rows (n = 2..45)");
    if (fx.table4.size() != 2) throw IoError("table4 must hold 2 rows");
    return fx;
}

}  // namespace bell
