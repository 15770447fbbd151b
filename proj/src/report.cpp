#include "tbsc/report.hpp"

#include "tbsc/errors.hpp"

namespace tbsc {

std::string tool_version() { return TBSC_VERSION; }

Json to_json(const BinMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 1; r <= m.rows(); ++r) rows.push_back(bits_to_string(m.row(r)));
  return rows;
}

BinMatrix matrix_from_json(const Json& j) {
  std::vector<std::string> rows = j.get<std::vector<std::string>>();
  std::vector<std::string_view> views(rows.begin(), rows.end());
  return BinMatrix::from_rows(std::span<const std::string_view>(views));
}

Json to_json(const DelayProfile& p) { return p.delays; }

DelayProfile profile_from_json(const Json& j) { return {j.get<std::vector<int>>()}; }

Json to_json(const ErasureSchedule& s) { return s.erased; }

Json to_json(const StreamCodeSpec& spec) {
  Json parity = Json::array();
  for (int i : spec.nonzero_parity_indices()) {
    parity.push_back({{"index", i}, {"matrix", to_json(spec.parity(i))}});
  }
  return {{"b", spec.b()},
          {"horizon", spec.horizon()},
          {"k", spec.k()},
          {"w", spec.w()},
          {"rate", format_rational(spec.rate())},
          {"parity", std::move(parity)}};
}

StreamCodeSpec stream_code_from_json(const Json& j) {
  const int b = j.at("b").get<int>();
  const int horizon = j.at("horizon").get<int>();
  const int k = j.at("k").get<int>();
  const int w = j.at("w").get<int>();
  if (horizon < 0 || k < 1 || w < 1) throw InvalidParameters("bad code dimensions in manifest");
  std::vector<BinMatrix> family(static_cast<std::size_t>(horizon) + 1,
                                BinMatrix(static_cast<std::size_t>(k),
                                          static_cast<std::size_t>(w)));
  for (const auto& entry : j.at("parity")) {
    const int i = entry.at("index").get<int>();
    if (i < 0 || i > horizon) throw InvalidParameters("parity index outside [0, horizon]");
    family[static_cast<std::size_t>(i)] = matrix_from_json(entry.at("matrix"));
  }
  return {b, horizon, k, w, std::move(family)};
}

Json envelope(const std::string& kind, Json body) {
  Json out = {{"schema_version", kSchemaVersion}, {"tool_version", tool_version()},
              {"kind", kind}};
  for (auto& [key, value] : body.items()) out[key] = std::move(value);
  return out;
}

Json manifest(const RelayNetworkSpec& spec) {
  return envelope("spec", {{"b1", spec.b1()},
                           {"b2", spec.b2()},
                           {"T", spec.T()},
                           {"k", spec.k()},
                           {"rate", format_rational(spec.sr().rate())},
                           {"sr", to_json(spec.sr())},
                           {"rd", to_json(spec.rd())},
                           {"d_sr", to_json(spec.d_sr())},
                           {"d_rd", to_json(spec.d_rd())}});
}

RelayNetworkSpec spec_from_manifest(const Json& j) {
  if (j.value("kind", "") != "spec") throw std::invalid_argument("document is not a spec manifest");
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw std::invalid_argument("unsupported manifest schema version");
  }
  return {j.at("b1").get<int>(),
          j.at("b2").get<int>(),
          j.at("T").get<int>(),
          stream_code_from_json(j.at("sr")),
          stream_code_from_json(j.at("rd")),
          profile_from_json(j.at("d_sr")),
          profile_from_json(j.at("d_rd"))};
}

Json to_json(const FeasibilityReport& rep) {
  return {{"b1", rep.b1},
          {"b2", rep.b2},
          {"T", rep.T},
          {"feasible", rep.feasible},
          {"sufficient", rep.sufficient},
          {"prior_work", rep.prior_work},
          {"optimal_rate", format_rational(rep.optimal_rate)},
          {"path", to_string(rep.path)},
          {"constraint", rep.constraint()}};
}

Json to_json(const SimulationReport& rep) {
  // Destination delays of accounted source times, [time][coord-1].
  Json delays = Json::array();
  for (Time s = 0; s < rep.accounted; ++s) {
    Json row = Json::array();
    for (const auto& when : rep.destination_recovery[static_cast<std::size_t>(s)]) {
      row.push_back(when ? Json(*when - s) : Json(nullptr));
    }
    delays.push_back(std::move(row));
  }
  Json out = {{"horizon", rep.horizon},
              {"accounted", rep.accounted},
              {"sr_schedule", to_json(rep.sr_schedule)},
              {"rd_schedule", to_json(rep.rd_schedule)},
              {"max_delay", to_json(rep.max_delay)},
              {"destination_delays", std::move(delays)},
              {"pass", rep.success}};
  if (!rep.success) out["failure"] = rep.failure;
  if (!rep.trace.empty()) out["trace"] = rep.trace;
  return out;
}

Json to_json(const VerificationReport& rep) {
  Json out = {{"b1", rep.b1},
              {"b2", rep.b2},
              {"T", rep.T},
              {"mode", to_string(rep.mode)},
              {"horizon", rep.horizon},
              {"seed", rep.seed},
              {"budget", rep.budget},
              {"pairs_checked", rep.pairs_checked},
              {"max_delay", to_json(rep.max_delay)},
              {"pass", rep.pass}};
  if (rep.failure) {
    out["failure"] = {{"sr_schedule", to_json(rep.failure->sr)},
                      {"rd_schedule", to_json(rep.failure->rd)},
                      {"reason", rep.failure->reason}};
  }
  return out;
}

}  // namespace tbsc
