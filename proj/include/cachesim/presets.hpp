#pragma once

#include <string>
#include <vector>

#include "cachesim/config.hpp"

namespace cachesim::cli {

// Canned experiment setups fig1..fig6. Values not stated by the source
// experiment descriptions (fig6 curve densities, the fig5 sub-optimal access
// point) are recorded in the emitted metadata as part of the resolved config.
ExperimentConfig preset(const std::string& figure_id);

std::vector<std::string> preset_names();

} // namespace cachesim::cli
