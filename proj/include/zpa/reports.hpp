#pragma once

#include <json.hpp>

#include "zpa/plot.hpp"
#include "zpa/transitivity.hpp"

namespace zpa {

// JSON report shapes shared by the CLI and the test suite; all witnesses are
// included verbatim so external tools can revalidate them.

nlohmann::json to_json(const TransitivityReport& report);
nlohmann::json to_json(const WitnessResult& witness);
nlohmann::json to_json(const CompleteCheck& check);
nlohmann::json to_json(const AbsoluteCheck& check);
nlohmann::json to_json(const SufficiencyCertificate& cert);
nlohmann::json to_json(const TrendSeries& series);
nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const MirrorReport& report);
nlohmann::json grid_stats(const PlotGrid& grid);

} // namespace zpa
