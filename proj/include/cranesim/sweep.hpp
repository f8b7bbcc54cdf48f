#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cranesim/metrics.hpp"
#include "cranesim/scenario.hpp"

namespace cranesim {

struct SweepAxis {
    std::string key;                  // dotted scenario key, e.g. initial.phi_x_deg
    std::vector<std::string> values;  // raw value strings, applied via the config setters
};

struct SweepGrid {
    std::vector<SweepAxis> axes;
    std::size_t cell_count() const;
};

// Grid file format: one [axis] section per swept parameter with "key = ..."
// and "values = v1 v2 ...".
SweepGrid parse_grid_text(const std::string& text);
SweepGrid load_grid_file(const std::string& path);

struct SweepCell {
    std::vector<std::pair<std::string, std::string>> overrides;  // key, value per axis
    std::optional<MetricsReport> metrics;  // empty when the cell failed
    std::string error;                     // diagnostic for a failed cell
    bool aborted = false;
};

// Runs the cross product of the grid over the template config. Cells run
// independently; a failing cell is captured, not propagated.
std::vector<SweepCell> sweep(const ScenarioConfig& base, const SweepGrid& grid);

void write_sweep_report_csv(const std::vector<SweepCell>& cells, std::ostream& os);

}  // namespace cranesim
