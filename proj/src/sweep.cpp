#include "cranesim/sweep.hpp"

#include <fstream>
#include <sstream>

namespace cranesim {

std::size_t SweepGrid::cell_count() const {
    std::size_t n = 1;
    for (const auto& axis : axes) n *= axis.values.size();
    return n;
}

SweepGrid parse_grid_text(const std::string& text) {
    SweepGrid grid;
    std::istringstream is(text);
    std::string line;
    bool in_axis = false;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) return std::string{};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        if (line == "[axis]") {
            grid.axes.push_back({});
            in_axis = true;
            continue;
        }
        if (line.front() == '[')
            throw ConfigError("grid line " + std::to_string(line_no) + ": unknown section");
        if (!in_axis)
            throw ConfigError("grid line " + std::to_string(line_no) + ": key outside [axis]");
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("grid line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key == "key") {
            grid.axes.back().key = value;
        } else if (key == "values") {
            std::istringstream vs(value);
            std::string tok;
            while (vs >> tok) grid.axes.back().values.push_back(tok);
        } else {
            throw ConfigError("grid line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
    }
    for (const auto& axis : grid.axes) {
        if (axis.key.empty() || axis.values.empty())
            throw ConfigError("every grid axis needs a key and at least one value");
    }
    if (grid.axes.empty()) throw ConfigError("grid has no axes");
    return grid;
}

SweepGrid load_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_grid_text(ss.str());
}

std::vector<SweepCell> sweep(const ScenarioConfig& base, const SweepGrid& grid) {
    const std::size_t n_cells = grid.cell_count();
    std::vector<SweepCell> cells(n_cells);

    for (std::size_t idx = 0; idx < n_cells; ++idx) {
        SweepCell& cell = cells[idx];
        std::size_t rem = idx;
        for (const auto& axis : grid.axes) {
            const std::size_t pick = rem % axis.values.size();
            rem /= axis.values.size();
            cell.overrides.emplace_back(axis.key, axis.values[pick]);
        }
        try {
            ScenarioConfig cfg = base;
            std::string suffix;
            for (const auto& [key, value] : cell.overrides) {
                apply_override(cfg, key, value);
                suffix += "_" + value;
            }
            cfg.id += suffix;
            const RunResult run = run_scenario(cfg);
            cell.aborted = run.aborted;
            if (run.aborted) {
                cell.error = run.abort_reason;
            }
            if (!run.trace.empty()) cell.metrics = evaluate_metrics(run);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    }
    return cells;
}

void write_sweep_report_csv(const std::vector<SweepCell>& cells, std::ostream& os) {
    os << "# schema=1 sweep report\n";
    os << "cell,overrides,length_convergence_time_s,final_length_error_pct,zeta_fit,"
          "tip_settling_time_s,tip_steady_state_error_m,angle_rms_deg,error\n";
    int i = 0;
    for (const auto& cell : cells) {
        std::string ov;
        for (const auto& [key, value] : cell.overrides) {
            if (!ov.empty()) ov += ";";
            ov += key + "=" + value;
        }
        os << i++ << "," << ov << ",";
        if (cell.metrics) {
            const auto& m = *cell.metrics;
            if (m.length_convergence_time)
                os << *m.length_convergence_time;
            else
                os << "NotConverged";
            os << "," << m.final_length_error_pct << ",";
            if (m.zeta_fit)
                os << *m.zeta_fit;
            else
                os << "n/a";
            os << ",";
            if (m.tip_settling_time)
                os << *m.tip_settling_time;
            else
                os << "NotConverged";
            os << "," << m.tip_steady_state_error << "," << m.angle_rms_deg;
        } else {
            os << ",,,,,";
        }
        os << "," << cell.error << "\n";
    }
}

}  // namespace cranesim
