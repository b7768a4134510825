#pragma once

// JSON encodings for reports and resumable model state. Doubles are written
// in shortest round-trip form, so snapshots restore bit-identically; empty
// optionals become null.

#include <nlohmann/json.hpp>

#include "seqrank/backtest.hpp"
#include "seqrank/ranker.hpp"
#include "seqrank/regression.hpp"
#include "seqrank/stats.hpp"

namespace seqrank {

nlohmann::json to_json(const RankerSnapshot& s);
RankerSnapshot ranker_snapshot_from_json(const nlohmann::json& j);

// Matrices are stored row-major with explicit shapes.
nlohmann::json to_json(const CwSnapshot& s);
CwSnapshot cw_snapshot_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AdfResult& r);
nlohmann::json to_json(const TTestResult& r);
nlohmann::json to_json(const LeveneResult& r);
nlohmann::json to_json(const StationarityReport& r);

nlohmann::json to_json(const BacktestConfig& c);
nlohmann::json to_json(const MetricsBlock& m);
nlohmann::json to_json(const BacktestReport& r);

}  // namespace seqrank
