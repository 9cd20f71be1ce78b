#include "glcmsample/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "glcmsample/error.hpp"

namespace glcmsample {

using ordered_json = nlohmann::ordered_json;

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::glcm: return "glcm";
    case Strategy::center: return "center";
    case Strategy::uniform: return "uniform";
  }
  return "glcm";
}

std::string to_string(QuantileMode mode) { return mode == QuantileMode::midpoint ? "midpoint" : "seeded"; }
std::string to_string(MaskSource source) { return source == MaskSource::external ? "external" : "fallback"; }
std::string to_string(RangeMode mode) { return mode == RangeMode::global ? "global" : "per_slice"; }

Strategy parse_strategy(const std::string& text) {
  if (text == "glcm") return Strategy::glcm;
  if (text == "center") return Strategy::center;
  if (text == "uniform") return Strategy::uniform;
  throw Error("unknown strategy '" + text + "' (expected glcm|center|uniform)");
}

QuantileMode parse_quantile_mode(const std::string& text) {
  if (text == "midpoint") return QuantileMode::midpoint;
  if (text == "seeded") return QuantileMode::seeded;
  throw Error("unknown quantile mode '" + text + "' (expected midpoint|seeded)");
}

RangeMode parse_range_mode(const std::string& text) {
  if (text == "global") return RangeMode::global;
  if (text == "per_slice") return RangeMode::per_slice;
  throw Error("unknown range mode '" + text + "' (expected global|per_slice)");
}

std::string to_json(const CurationManifest& manifest) {
  ordered_json j;
  j["volume_id"] = manifest.volume_id;
  j["threshold_fraction"] = manifest.threshold_fraction;
  j["kept"] = manifest.kept_count();
  j["total"] = manifest.entries.size();
  ordered_json entries = ordered_json::array();
  for (const CurationEntry& e : manifest.entries) {
    ordered_json row;
    row["slice_index"] = e.slice_index;
    row["lung_fraction"] = e.lung_fraction;
    row["kept"] = e.kept;
    row["mask_source"] = to_string(e.mask_source);
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

CurationManifest manifest_from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    CurationManifest m;
    m.volume_id = j.at("volume_id").get<std::string>();
    m.threshold_fraction = j.at("threshold_fraction").get<double>();
    for (const auto& row : j.at("entries")) {
      CurationEntry e;
      e.slice_index = row.at("slice_index").get<int>();
      e.lung_fraction = row.at("lung_fraction").get<double>();
      e.kept = row.at("kept").get<bool>();
      const std::string src = row.at("mask_source").get<std::string>();
      if (src != "external" && src != "fallback") throw Error("unknown mask_source '" + src + "'");
      e.mask_source = src == "external" ? MaskSource::external : MaskSource::fallback;
      if (static_cast<std::size_t>(e.slice_index) != m.entries.size())
        throw Error("manifest entries must cover slices 0..n-1 in order");
      m.entries.push_back(e);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
}

std::string to_json(const SamplingPlan& plan) {
  ordered_json j;
  j["volume_id"] = plan.volume_id;
  j["strategy"] = to_string(plan.config.strategy);
  ordered_json config;
  config["n"] = plan.config.n_samples;
  config["sg_window"] = plan.config.sg.window;
  config["sg_order"] = plan.config.sg.order;
  config["quantile_mode"] = to_string(plan.config.quantile_mode);
  config["seed"] = plan.config.seed;
  config["allow_duplicates"] = plan.config.allow_duplicates;
  j["config"] = std::move(config);
  j["degenerate"] = plan.degenerate;
  j["selected"] = plan.selected;
  j["weights"] = plan.weights;
  j["weight_slices"] = plan.weight_slices;
  j["cdf"] = plan.cdf;
  return j.dump(2) + "\n";
}

SamplingPlan plan_from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    SamplingPlan p;
    p.volume_id = j.at("volume_id").get<std::string>();
    p.config.strategy = parse_strategy(j.at("strategy").get<std::string>());
    const auto& c = j.at("config");
    p.config.n_samples = c.at("n").get<int>();
    p.config.sg.window = c.at("sg_window").get<int>();
    p.config.sg.order = c.at("sg_order").get<int>();
    p.config.quantile_mode = parse_quantile_mode(c.at("quantile_mode").get<std::string>());
    p.config.seed = c.at("seed").get<std::uint64_t>();
    p.config.allow_duplicates = c.at("allow_duplicates").get<bool>();
    p.degenerate = j.at("degenerate").get<bool>();
    p.selected = j.at("selected").get<std::vector<int>>();
    p.weights = j.at("weights").get<std::vector<double>>();
    p.weight_slices = j.at("weight_slices").get<std::vector<int>>();
    p.cdf = j.at("cdf").get<std::vector<double>>();
    if (p.weights.size() != p.weight_slices.size()) throw Error("malformed plan: weights/weight_slices differ in length");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed plan: ") + e.what());
  }
}

std::string to_csv(const ProfileTable& table) {
  std::string out = table.smoothed ? "slice_index,entropy_nats,smoothed_nats\n" : "slice_index,entropy_nats\n";
  for (std::size_t i = 0; i < table.entropy.size(); ++i) {
    out += std::to_string(table.slice_indices[i]);
    out += ',';
    out += format_real(table.entropy[i]);
    if (table.smoothed) {
      out += ',';
      out += format_real((*table.smoothed)[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("malformed profile: line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

}  // namespace

ProfileTable profile_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("malformed profile: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ProfileTable t;
  std::size_t columns = 0;
  if (line == "slice_index,entropy_nats") {
    columns = 2;
  } else if (line == "slice_index,entropy_nats,smoothed_nats") {
    columns = 3;
    t.smoothed.emplace();
  } else {
    throw Error("malformed profile: unexpected header '" + line + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) f.push_back(cell);
    if (f.size() != columns) throw Error("malformed profile: line " + std::to_string(lineno) + ": wrong column count");
    const double idx = parse_double(f[0], lineno);
    if (idx < 0 || idx != static_cast<double>(static_cast<int>(idx)))
      throw Error("malformed profile: line " + std::to_string(lineno) + ": bad slice index");
    if (!t.slice_indices.empty() && static_cast<int>(idx) <= t.slice_indices.back())
      throw Error("malformed profile: slice indices must be strictly ascending");
    t.slice_indices.push_back(static_cast<int>(idx));
    t.entropy.push_back(parse_double(f[1], lineno));
    if (t.smoothed) t.smoothed->push_back(parse_double(f[2], lineno));
  }
  if (t.entropy.empty()) throw Error("malformed profile: no rows");
  return t;
}

ProfileTable to_table(const EntropyProfile& profile) {
  return {profile.slice_indices, profile.values, std::nullopt};
}

EntropyProfile to_profile(const ProfileTable& table, const std::string& volume_id) {
  EntropyProfile p;
  p.volume_id = volume_id;
  p.values = table.entropy;
  p.slice_indices = table.slice_indices;
  return p;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace glcmsample
