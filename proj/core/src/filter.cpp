#include "vfc/filter.hpp"

#include <algorithm>

#include "vfc/error.hpp"
#include "vfc/text.hpp"

namespace vfc::corpus {

namespace {

template <class T>
bool intersects(const std::set<T>& a, const std::set<T>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return true;
  }
  return false;
}

const std::set<std::string> kCFamily = {"c", "c++", "cpp"};

}  // namespace

bool FilterCriteria::empty() const {
  return !languages && !label_sources && !sources && !time_from && !time_to && !has_cve;
}

bool FilterCriteria::matches(const CommitRecord& r) const {
  if (languages && !intersects(*languages, r.languages)) return false;
  if (label_sources && !intersects(*label_sources, r.label_source)) return false;
  if (sources && !intersects(*sources, r.sources)) return false;
  if (time_from || time_to) {
    if (!r.timestamp) return false;
    if (time_from && *r.timestamp < *time_from) return false;
    if (time_to && *r.timestamp > *time_to) return false;
  }
  if (has_cve && r.cve_ids.empty() == *has_cve) return false;
  return true;
}

nlohmann::json FilterCriteria::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  if (languages) j["languages"] = *languages;
  if (label_sources) {
    auto& a = j["label_sources"] = nlohmann::json::array();
    for (auto s : *label_sources) a.push_back(to_string(s));
  }
  if (sources) j["sources"] = *sources;
  if (time_from) j["time_from"] = *time_from;
  if (time_to) j["time_to"] = *time_to;
  if (has_cve) j["has_cve"] = *has_cve;
  return j;
}

FilterCriteria filter_preset(std::string_view name) {
  const std::string n = to_lower(name);
  FilterCriteria c;
  if (n == "ds4") return c;
  c.languages = kCFamily;
  if (n == "ds1") c.label_sources = std::set{LabelSource::Manual};
  else if (n == "ds2") c.label_sources = std::set{LabelSource::Manual, LabelSource::Advisory};
  else if (n != "ds3") throw ConfigError("unknown filter preset '" + std::string(name) + "' (expected ds1..ds4)");
  return c;
}

std::vector<CommitRecord> filter(const std::vector<CommitRecord>& records, const FilterCriteria& criteria) {
  std::vector<CommitRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const CommitRecord& r) { return criteria.matches(r); });
  return out;
}

}  // namespace vfc::corpus
