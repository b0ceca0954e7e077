#include "bertrand/certificate.hpp"

#include "bertrand/errors.hpp"

namespace bertrand {

std::string to_string(Status s) {
  switch (s) {
    case Status::verified:
      return "verified";
    case Status::failed:
      return "failed";
    case Status::partial:
      return "partial";
  }
  return "partial";
}

Status parse_status(std::string_view text) {
  if (text == "verified") return Status::verified;
  if (text == "failed") return Status::failed;
  if (text == "partial") return Status::partial;
  throw DomainError("unknown certificate status '" + std::string(text) + "'");
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j;
  j["theorem_id"] = c.theorem_id;
  j["params"] = c.params;
  j["convention"] = c.convention;
  j["range"] = {c.lo, c.hi};
  j["status"] = to_string(c.status);
  j["failures"] = c.failures;
  auto& w = j["witnesses"] = nlohmann::json::array();
  for (const auto& x : c.witnesses) {
    nlohmann::json e{{"n", x.n}, {"prime", x.prime}};
    if (x.count) e["count"] = *x.count;
    w.push_back(std::move(e));
  }
  j["witnesses_complete"] = c.witnesses_complete;
  if (!c.details.empty()) j["details"] = c.details;
  if (!c.parts.empty()) {
    auto& parts = j["parts"] = nlohmann::json::array();
    for (const auto& p : c.parts) parts.push_back(to_json(p));
  }
  j["version"] = c.version;
  j["elapsed_ms"] = c.elapsed_ms;
  if (c.cursor) j["cursor"] = *c.cursor;
  return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    Certificate c;
    c.theorem_id = j.at("theorem_id").get<std::string>();
    c.params = j.at("params");
    c.convention = j.at("convention").get<std::string>();
    c.lo = j.at("range").at(0).get<std::int64_t>();
    c.hi = j.at("range").at(1).get<std::int64_t>();
    c.status = parse_status(j.at("status").get<std::string>());
    c.failures = j.at("failures").get<std::vector<std::int64_t>>();
    for (const auto& e : j.at("witnesses")) {
      Witness w;
      w.n = e.at("n").get<std::int64_t>();
      w.prime = e.at("prime").get<std::uint64_t>();
      if (e.contains("count")) w.count = e["count"].get<std::uint64_t>();
      c.witnesses.push_back(w);
    }
    c.witnesses_complete = j.value("witnesses_complete", false);
    if (j.contains("details")) c.details = j["details"];
    if (j.contains("parts"))
      for (const auto& p : j["parts"]) c.parts.push_back(certificate_from_json(p));
    c.version = j.at("version").get<std::string>();
    c.elapsed_ms = j.value("elapsed_ms", std::int64_t{0});
    if (j.contains("cursor")) c.cursor = j["cursor"].get<std::int64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed certificate: ") + e.what());
  }
}

namespace {
void strip_time(nlohmann::json& j) {
  j.erase("elapsed_ms");
  if (j.contains("parts"))
    for (auto& p : j["parts"]) strip_time(p);
}
}  // namespace

std::string canonical_dump(const Certificate& c) {
  nlohmann::json j = to_json(c);
  strip_time(j);
  return j.dump();
}

}  // namespace bertrand
