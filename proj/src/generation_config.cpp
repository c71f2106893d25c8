// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/generation_config.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include <json.hpp>

#include "signforge/errors.hpp"

namespace signforge {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("generation config: " + message);
}

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

Range parse_range(const json& v, const std::string& key) {
  require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
          "\"" + key + "\" must be a [lo, hi] pair of numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

double parse_number(const json& v, const std::string& key) {
  require(v.is_number(), "\"" + key + "\" must be a number");
  return v.get<double>();
}

std::uint64_t parse_count(const json& v, const std::string& key) {
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
          "\"" + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

}  // namespace

void GenerationConfig::validate() const {
  require(gain_range.lo > 0.0 && gain_range.lo <= gain_range.hi, "gain_range must be positive with lo <= hi");
  require(offset_range.lo <= offset_range.hi, "offset_range needs lo <= hi");
  require(rotation_range.lo <= rotation_range.hi, "rotation_range needs lo <= hi");
  require(!count_support.empty(), "count_support is empty");
  for (int c : count_support) require(c >= 1 && c <= 5, "count_support values must lie in 1..5");
  require(probability(stack_p1) && probability(stack_p2), "stacking probabilities must lie in [0, 1]");
  require(size_range.has_value(), "size_range [min_size, max_size] is required (camera operating range)");
  require(size_range->lo >= 8.0, "size_range min must be at least 8 px");
  require(size_range->lo <= size_range->hi, "size_range needs min <= max");
  require(size_range->hi <= 1500.0, "size_range max must not exceed 1500 px");
  require(perspective_p >= 0.0 && perspective_p < 0.5, "perspective_p must lie in [0, 0.5)");
  require(jitter_amplitude >= 0.0, "jitter_amplitude must be non-negative");
  require(fade_frac >= 0.0 && fade_frac < 0.5, "fade_frac must lie in [0, 0.5)");
  require(brightness_constant >= 0.0 && brightness_constant <= 255.0, "brightness_constant must lie in [0, 255]");
  require(blur_max_coeff >= 0.0, "blur_max_coeff must be non-negative");
  if (blur_sigma_range)
    require(blur_sigma_range->lo >= 0.0 && blur_sigma_range->lo <= blur_sigma_range->hi,
            "blur_sigma_range must be non-negative with lo <= hi");
  require(!run_id.empty() && run_id.find_first_of("/\\") == std::string::npos, "run_id must be a plain name");
}

GenerationConfig GenerationConfig::preset_named(std::string_view name) {
  GenerationConfig c;
  if (name == "default") return c;
  if (name == "baseline") {
    c.preset = "baseline";
    c.offset_range = {-40.0, 40.0};
    c.blur_sigma_range = Range{0.0, 2.0};
    return c;
  }
  throw ConfigError("generation config: unknown preset \"" + std::string(name) + "\"");
}

GenerationConfig GenerationConfig::from_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("generation config: ") + e.what(), e.byte);
  }
  require(doc.is_object(), "top level must be an object");

  GenerationConfig c;
  if (const auto it = doc.find("preset"); it != doc.end()) {
    require(it->is_string(), "\"preset\" must be a string");
    c = preset_named(it->get<std::string>());
  }

  using Setter = std::function<void(GenerationConfig&, const json&, const std::string&)>;
  static const std::map<std::string, Setter> kFields = {
      {"preset", [](GenerationConfig&, const json&, const std::string&) {}},
      {"run_id", [](GenerationConfig& g, const json& v, const std::string& k) {
         require(v.is_string(), "\"" + k + "\" must be a string");
         g.run_id = v.get<std::string>();
       }},
      {"n_samples", [](GenerationConfig& g, const json& v, const std::string& k) { g.n_samples = parse_count(v, k); }},
      {"master_seed", [](GenerationConfig& g, const json& v, const std::string& k) { g.master_seed = parse_count(v, k); }},
      {"gain_range", [](GenerationConfig& g, const json& v, const std::string& k) { g.gain_range = parse_range(v, k); }},
      {"offset_range", [](GenerationConfig& g, const json& v, const std::string& k) { g.offset_range = parse_range(v, k); }},
      {"rotation_range", [](GenerationConfig& g, const json& v, const std::string& k) { g.rotation_range = parse_range(v, k); }},
      {"size_range", [](GenerationConfig& g, const json& v, const std::string& k) {
         if (v.is_null()) g.size_range.reset();
         else g.size_range = parse_range(v, k);
       }},
      {"blur_sigma_range", [](GenerationConfig& g, const json& v, const std::string& k) {
         if (v.is_null()) g.blur_sigma_range.reset();
         else g.blur_sigma_range = parse_range(v, k);
       }},
      {"count_support", [](GenerationConfig& g, const json& v, const std::string& k) {
         require(v.is_array(), "\"" + k + "\" must be an array of integers");
         g.count_support.clear();
         for (const auto& e : v) {
           require(e.is_number_integer(), "\"" + k + "\" must be an array of integers");
           g.count_support.push_back(e.get<int>());
         }
       }},
      {"stack_p1", [](GenerationConfig& g, const json& v, const std::string& k) { g.stack_p1 = parse_number(v, k); }},
      {"stack_p2", [](GenerationConfig& g, const json& v, const std::string& k) { g.stack_p2 = parse_number(v, k); }},
      {"perspective_p", [](GenerationConfig& g, const json& v, const std::string& k) { g.perspective_p = parse_number(v, k); }},
      {"jitter_amplitude", [](GenerationConfig& g, const json& v, const std::string& k) { g.jitter_amplitude = parse_number(v, k); }},
      {"fade_frac", [](GenerationConfig& g, const json& v, const std::string& k) { g.fade_frac = parse_number(v, k); }},
      {"brightness_constant", [](GenerationConfig& g, const json& v, const std::string& k) { g.brightness_constant = parse_number(v, k); }},
      {"blur_max_coeff", [](GenerationConfig& g, const json& v, const std::string& k) { g.blur_max_coeff = parse_number(v, k); }},
  };

  for (const auto& [key, value] : doc.items()) {
    const auto it = kFields.find(key);
    require(it != kFields.end(), "unknown key \"" + key + "\"");
    it->second(c, value, key);
  }
  c.validate();
  return c;
}

std::string GenerationConfig::to_json() const {
  json j = {
      {"preset", preset},
      {"run_id", run_id},
      {"n_samples", n_samples},
      {"master_seed", master_seed},
      {"gain_range", range_json(gain_range)},
      {"offset_range", range_json(offset_range)},
      {"count_support", count_support},
      {"stack_p1", stack_p1},
      {"stack_p2", stack_p2},
      {"rotation_range", range_json(rotation_range)},
      {"size_range", size_range ? range_json(*size_range) : json(nullptr)},
      {"perspective_p", perspective_p},
      {"jitter_amplitude", jitter_amplitude},
      {"fade_frac", fade_frac},
      {"brightness_constant", brightness_constant},
      {"blur_max_coeff", blur_max_coeff},
      {"blur_sigma_range", blur_sigma_range ? range_json(*blur_sigma_range) : json(nullptr)},
  };
  return j.dump(2);
}

}  // namespace signforge
