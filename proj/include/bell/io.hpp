#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bell/analysis.hpp"
#include "bell/counts.hpp"
#include "bell/functionals.hpp"
#include "bell/quantum.hpp"
#include "bell/simulate.hpp"

namespace bell {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Behavior <-> JSON
//
// Schema: { "nA": int, "nB": int, "p": [a][b][x][y] } with outcome indices
// 0 -> +1 and 1 -> -1 and 1-based settings flattened to 0-based array
// positions. Doubles round-trip losslessly.
// ---------------------------------------------------------------------------

inline json to_json(const Behavior& b) {
    json p = json::array();
    for (int ai = 0; ai < 2; ++ai) {
        json pa = json::array();
        for (int bi = 0; bi < 2; ++bi) {
            json pb = json::array();
            for (int x = 0; x < b.scenario.nA; ++x) {
                json px = json::array();
                for (int y = 0; y < b.scenario.nB; ++y) px.push_back(b.at(ai, bi, x, y));
                pb.push_back(std::move(px));
            }
            pa.push_back(std::move(pb));
        }
        p.push_back(std::move(pa));
    }
    return json{{"nA", b.scenario.nA}, {"nB", b.scenario.nB}, {"p", std::move(p)}};
}

inline Behavior behavior_from_json(const json& j) {
    Scenario s{j.at("nA").get<int>(), j.at("nB").get<int>()};
    validate(s);
    std::vector<double> table(4u * s.nA * s.nB, 0.0);
    const json& p = j.at("p");
    Behavior b{s, std::move(table)};
    for (int ai = 0; ai < 2; ++ai)
        for (int bi = 0; bi < 2; ++bi)
            for (int x = 0; x < s.nA; ++x)
                for (int y = 0; y < s.nB; ++y)
                    b.at(ai, bi, x, y) = p.at(ai).at(bi).at(x).at(y).get<double>();
    return behavior_from_table(s, b.p);
}

// ---------------------------------------------------------------------------
// BellFunctional <-> JSON
// ---------------------------------------------------------------------------

inline json to_json(const BellFunctional& f) {
    return json{{"name", f.name},
                {"nA", f.scenario.nA},
                {"nB", f.scenario.nB},
                {"c", f.c},
                {"mA", f.mA},
                {"mB", f.mB},
                {"offset", f.offset},
                {"direction", f.direction == Direction::Maximize ? "maximize" : "minimize"}};
}

inline BellFunctional functional_from_json(const json& j) {
    BellFunctional f;
    f.scenario = Scenario{j.at("nA").get<int>(), j.at("nB").get<int>()};
    f.name = j.value("name", "custom");
    f.c = j.at("c").get<std::vector<std::vector<double>>>();
    f.mA = j.at("mA").get<std::vector<double>>();
    f.mB = j.at("mB").get<std::vector<double>>();
    f.offset = j.value("offset", 0.0);
    std::string dir = j.value("direction", "maximize");
    if (dir != "maximize" && dir != "minimize") throw IoError("direction must be maximize|minimize");
    f.direction = dir == "maximize" ? Direction::Maximize : Direction::Minimize;
    validate(f);
    return f;
}

// ---------------------------------------------------------------------------
// Strategy <-> JSON: { "theta" | "rho": re/im interleaved row-major, "A":
// [[x,y,z],...], "B": [[x,y,z],...] }
// ---------------------------------------------------------------------------

inline json to_json(const Strategy& st) {
    json j;
    if (st.state.is_pure_angle()) {
        j["theta"] = st.state.angle();
    } else {
        Eigen::Matrix4cd rho = st.state.density();
        json flat = json::array();
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                flat.push_back(rho(r, c).real());
                flat.push_back(rho(r, c).imag());
            }
        j["rho"] = std::move(flat);
    }
    auto settings = [](const std::vector<BlochSetting>& v) {
        json arr = json::array();
        for (const auto& s : v) arr.push_back({s.axis.x(), s.axis.y(), s.axis.z()});
        return arr;
    };
    j["A"] = settings(st.a);
    j["B"] = settings(st.b);
    return j;
}

inline Strategy strategy_from_json(const json& j) {
    Strategy st;
    if (j.contains("theta")) {
        st.state = TwoQubitState::pure_angle(j.at("theta").get<double>());
    } else {
        const json& flat = j.at("rho");
        if (flat.size() != 32) throw IoError("rho must hold 16 re/im interleaved entries");
        Eigen::Matrix4cd rho;
        int k = 0;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                double re = flat.at(k).get<double>(), im = flat.at(k + 1).get<double>();
                rho(r, c) = std::complex<double>(re, im);
                k += 2;
            }
        st.state = TwoQubitState::from_density(rho);
    }
    for (const auto& v : j.at("A"))
        st.a.push_back(BlochSetting{Eigen::Vector3d(v.at(0).get<double>(), v.at(1).get<double>(),
                                                    v.at(2).get<double>())});
    for (const auto& v : j.at("B"))
        st.b.push_back(BlochSetting{Eigen::Vector3d(v.at(0).get<double>(), v.at(1).get<double>(),
                                                    v.at(2).get<double>())});
    validate(st);
    return st;
}

inline json to_json(const NoiseModel& nm) {
    return json{{"visibility", nm.visibility},
                {"white_fraction", nm.white_fraction},
                {"angle_jitter", nm.angle_jitter}};
}

inline NoiseModel noise_from_json(const json& j) {
    NoiseModel nm{j.value("visibility", 1.0), j.value("white_fraction", 0.0),
                  j.value("angle_jitter", 0.0)};
    validate(nm);
    return nm;
}

/// Decomposition witness included so third parties can verify the
/// reconstruction (1-q) p_L + q p_NS.
inline json to_json(const Epr2Result& r) {
    json weights = json::array();
    for (std::size_t i = 0; i < r.weights.size(); ++i) {
        if (r.weights[i] <= 0.0) continue;
        DeterministicStrategy d = vertex_strategy(r.remainder.scenario, i);
        weights.push_back(json{{"vertex", i}, {"a", d.a}, {"b", d.b}, {"weight", r.weights[i]}});
    }
    return json{{"q_min", r.q_min},
                {"lp_optimal", r.lp_optimal},
                {"local_weights", std::move(weights)},
                {"remainder", to_json(r.remainder)}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
}

inline json load_json(const std::string& path) {
    return json::parse(read_file(path));
}

/// CountRecord persistence: a CSV of the raw counts plus a JSON sidecar
/// carrying the plan and seed.
inline void write_counts_csv(const CountRecord& rec, const std::string& csv_path) {
    std::ostringstream out;
    out << "x,y,n_pp,n_pm,n_mp,n_mm,duration_s\n";
    for (int x = 0; x < rec.scenario.nA; ++x)
        for (int y = 0; y < rec.scenario.nB; ++y) {
            const PairCounts& pc = rec.at(x, y);
            out << (x + 1) << ',' << (y + 1) << ',' << pc.n_pp << ',' << pc.n_pm << ',' << pc.n_mp
                << ',' << pc.n_mm << ',';
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", pc.duration_s);
            out << buf << '\n';
        }
    write_file(csv_path, out.str());
}

inline json sidecar_json(const CountRecord& rec) {
    return json{{"seed", rec.seed},
                {"rate", rec.plan.rate},
                {"duration", rec.plan.duration},
                {"randomize_order", rec.plan.randomize_order},
                {"noise", to_json(rec.plan.noise)},
                {"strategy", to_json(rec.plan.strategy)},
                {"acquisition_order", rec.acquisition_order}};
}

inline void write_count_record(const CountRecord& rec, const std::string& csv_path) {
    write_counts_csv(rec, csv_path);
    std::filesystem::path side(csv_path);
    side.replace_extension(".json");
    write_file(side.string(), sidecar_json(rec).dump(2) + "\n");
}

inline CountRecord read_count_record(const std::string& csv_path) {
    std::filesystem::path side(csv_path);
    side.replace_extension(".json");
    json j = load_json(side.string());

    CountRecord rec;
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.plan.strategy = strategy_from_json(j.at("strategy"));
    rec.plan.noise = noise_from_json(j.at("noise"));
    rec.plan.rate = j.at("rate").get<double>();
    rec.plan.duration = j.at("duration").get<double>();
    rec.plan.randomize_order = j.at("randomize_order").get<bool>();
    rec.plan.seed = rec.seed;
    rec.acquisition_order = j.at("acquisition_order").get<std::vector<int>>();
    rec.scenario = rec.plan.strategy.scenario();
    rec.pairs.assign(static_cast<std::size_t>(rec.scenario.nA) * rec.scenario.nB, PairCounts{});

    std::istringstream in(read_file(csv_path));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw IoError("malformed counts CSV row: " + line);
        int x = std::stoi(cells[0]) - 1, y = std::stoi(cells[1]) - 1;
        PairCounts& pc = rec.at(x, y);
        pc.n_pp = std::stoll(cells[2]);
        pc.n_pm = std::stoll(cells[3]);
        pc.n_mp = std::stoll(cells[4]);
        pc.n_mm = std::stoll(cells[5]);
        pc.duration_s = std::stod(cells[6]);
    }
    return rec;
}

inline std::string to_csv(const ResultTable& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << table.columns[i] << (i + 1 < table.columns.size() ? ',' : '\n');
    char buf[64];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << buf << (i + 1 < row.size() ? ',' : '\n');
        }
    }
    return out.str();
}

inline void write_result_table(const ResultTable& table, const std::string& path) {
    write_file(path, to_csv(table));
}

/// FNV-1a 64-bit checksum, used to pin committed fixture transcriptions.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

}  // namespace bell
