#include "meetwalk/serialize.hpp"

#include <string>

namespace meetwalk {
namespace {

using nlohmann::json;

json one_based(std::span<const int> labels) {
  json out = json::array();
  for (int v : labels) out.push_back(v + 1);
  return out;
}

json number_or_inf(const std::optional<double>& v) { return v ? json(*v) : json("inf"); }

}  // namespace

std::string tuple_key(std::span<const int> labels) {
  std::string key;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (k > 0) key += ',';
    key += std::to_string(labels[k] + 1);
  }
  return key;
}

json to_json(const ChainDecomposition& decomposition) {
  json classes = json::array();
  for (const CommunicatingClass& c : decomposition.classes) {
    classes.push_back({{"nodes", one_based(c.nodes)},
                       {"kind", c.kind == ClassKind::absorbing ? "absorbing" : "transient"},
                       {"period", c.period}});
  }
  return {{"n", decomposition.node_count},
          {"classes", classes},
          {"single_absorbing", decomposition.is_single_absorbing()},
          {"irreducible", decomposition.is_irreducible()},
          {"ergodic", decomposition.is_ergodic()}};
}

json to_json(const PairClassification& c) {
  json out = {{"one_ergodic", c.one_ergodic},
              {"sa_overlap", c.sa_overlap},
              {"all_overlap", c.all_overlap},
              {"finite", c.finite}};
  if (c.witness) out["witness"] = one_based(*c.witness);
  return out;
}

json to_json(const FinitenessCertificate& certificate) {
  json states = json::array();
  for (const auto& s : certificate.infinite_states) states.push_back(one_based(s));
  return {{"all_finite", certificate.all_finite},
          {"infinite_count", certificate.infinite_count},
          {"infinite_states", states}};
}

json to_json(const SimulationEstimate& e) {
  return {{"mean", e.mean ? json(*e.mean) : json(nullptr)},
          {"std_error", e.std_error},
          {"trials", e.trials},
          {"censored", e.censored},
          {"horizon", e.horizon},
          {"lower_bound_only", e.lower_bound_only()}};
}

json to_json(const MeetingTimeResult& result, std::optional<double> mean, std::optional<std::size_t> only) {
  const ProductIndex& index = result.index();
  json values = json::object();
  std::vector<int> labels(static_cast<std::size_t>(index.agents()));
  auto add = [&](std::size_t s) {
    index.unflatten(s, labels);
    values[tuple_key(labels)] = number_or_inf(result.value(s));
  };
  if (only) {
    add(*only);
  } else {
    for (std::size_t s = 0; s < index.state_count(); ++s) add(s);
  }
  return {{"L", index.pursuers()},
          {"M", index.evaders()},
          {"n", index.node_count()},
          {"time_unit", result.time_model() == TimeModel::discrete ? "discrete" : "continuous"},
          {"values", values},
          {"max", number_or_inf(result.max())},
          {"mean", mean ? json(*mean) : json(nullptr)},
          {"residual", result.residual()},
          {"method", result.method()},
          {"iterations", result.iterations()},
          {"certificate", to_json(result.certificate())}};
}

}  // namespace meetwalk
