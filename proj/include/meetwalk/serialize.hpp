#ifndef MEETWALK_SERIALIZE_HPP
#define MEETWALK_SERIALIZE_HPP

#include <optional>

#include "json.hpp"
#include "meetwalk/chain_analysis.hpp"
#include "meetwalk/mc_oracle.hpp"
#include "meetwalk/meeting_result.hpp"
#include "meetwalk/product_space.hpp"

namespace meetwalk {

// JSON views of results. Node labels are 1-based; infinite values are the
// string "inf".

nlohmann::json to_json(const ChainDecomposition& decomposition);
nlohmann::json to_json(const PairClassification& classification);
nlohmann::json to_json(const FinitenessCertificate& certificate);
nlohmann::json to_json(const SimulationEstimate& estimate);

/// {"L","M","n","time_unit","values","max","mean","residual",...}; values are
/// keyed by comma-joined start tuples. `only` restricts the value table.
nlohmann::json to_json(const MeetingTimeResult& result, std::optional<double> mean,
                       std::optional<std::size_t> only = std::nullopt);

/// "1,2,3" for 0-based labels {0,1,2}.
std::string tuple_key(std::span<const int> labels);

}  // namespace meetwalk

#endif  // MEETWALK_SERIALIZE_HPP
