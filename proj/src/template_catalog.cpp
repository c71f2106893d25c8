// Copyright (C) 2026 signforge contributors
// SPDX-License-Identifier: Apache-2.0

#include "signforge/template_catalog.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "signforge/codec.hpp"
#include "signforge/errors.hpp"

namespace signforge {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

KeyColor parse_key_color(const std::string& text, std::size_t line_no) {
  std::string hex = text;
  if (!hex.empty() && hex[0] == '#') hex.erase(0, 1);
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
  if (hex.size() != 6 || ec != std::errc() || ptr != hex.data() + hex.size())
    throw ConfigError("template manifest line " + std::to_string(line_no) + ": bad key colour \"" + text + "\"");
  return {std::uint8_t(value >> 16), std::uint8_t(value >> 8), std::uint8_t(value)};
}

}  // namespace

Catalog Catalog::from_templates(std::vector<Template> templates) {
  const int m = int(templates.size());
  std::vector<Template> slots(m);
  std::vector<bool> seen(m, false);
  for (auto& t : templates) {
    if (t.class_id < 1 || t.class_id > m) {
      throw ConfigError("class ids must be contiguous 1.." + std::to_string(m) + "; got " +
                        std::to_string(t.class_id));
    }
    if (seen[t.class_id - 1]) throw ConfigError("duplicate class_id " + std::to_string(t.class_id));
    if (t.image.width() == 0 || opaque_bounds(t.image.alpha).empty())
      throw ValidationError("template for class " + std::to_string(t.class_id) + " is fully transparent");
    seen[t.class_id - 1] = true;
    slots[t.class_id - 1] = std::move(t);
  }
  Catalog catalog;
  catalog.templates_ = std::move(slots);
  return catalog;
}

const Template& Catalog::at(int class_id) const {
  if (class_id < 1 || class_id > class_count()) throw std::out_of_range("Catalog: unknown class " + std::to_string(class_id));
  return templates_[class_id - 1];
}

int Catalog::sample_class(Rng& rng) const {
  if (templates_.empty()) throw std::logic_error("Catalog: empty");
  return int(rng.uniform_int(1, class_count()));
}

std::vector<TemplateManifestEntry> parse_template_manifest(std::string_view csv,
                                                           const std::filesystem::path& base_dir) {
  std::vector<TemplateManifestEntry> entries;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto cols = split_csv(line);
    if (entries.empty() && cols[0] == "path") continue;
    if (cols.size() < 2 || cols.size() > 3)
      throw ConfigError("template manifest line " + std::to_string(line_no) + ": expected path,class_id[,key_color]");
    TemplateManifestEntry e;
    e.path = cols[0];
    if (e.path.is_relative()) e.path = base_dir / e.path;
    const auto [ptr, ec] = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), e.class_id);
    if (ec != std::errc() || ptr != cols[1].data() + cols[1].size())
      throw ConfigError("template manifest line " + std::to_string(line_no) + ": bad class_id \"" + cols[1] + "\"");
    if (cols.size() == 3 && !cols[2].empty()) e.key_color = parse_key_color(cols[2], line_no);
    entries.push_back(std::move(e));
  }
  return entries;
}

Rgba template_from_decoded(Image rgb, std::optional<PlaneF> alpha, const std::optional<KeyColor>& key,
                           const std::string& label) {
  if (alpha) return Rgba(std::move(rgb), std::move(*alpha));
  if (!key) throw ValidationError("template " + label + " has no alpha channel and no key colour");
  PlaneF mask(rgb.width(), rgb.height());
  for (int y = 0; y < rgb.height(); ++y)
    for (int x = 0; x < rgb.width(); ++x) {
      const bool keyed = rgb.at(x, y, 0) == (*key)[0] && rgb.at(x, y, 1) == (*key)[1] && rgb.at(x, y, 2) == (*key)[2];
      mask.at(x, y) = keyed ? 0.0f : 1.0f;
    }
  return Rgba(std::move(rgb), std::move(mask));
}

Catalog load_catalog(std::span<const TemplateManifestEntry> manifest) {
  std::vector<Template> templates;
  templates.reserve(manifest.size());
  for (const auto& entry : manifest) {
    for (const auto& t : templates)
      if (t.class_id == entry.class_id) throw ConfigError("duplicate class_id " + std::to_string(entry.class_id));
    DecodedImage decoded = read_image(entry.path);
    Template t;
    t.class_id = entry.class_id;
    t.name = entry.path.stem().string();
    t.image = template_from_decoded(std::move(decoded.rgb), std::move(decoded.alpha), entry.key_color,
                                    entry.path.string());
    if (opaque_bounds(t.image.alpha).empty())
      throw ValidationError("template " + entry.path.string() + " is fully transparent");
    templates.push_back(std::move(t));
  }
  return Catalog::from_templates(std::move(templates));
}

Catalog load_catalog_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw IoError("cannot read template manifest " + manifest_path.string());
  std::ostringstream text;
  text << in.rdbuf();
  const auto entries = parse_template_manifest(text.str(), manifest_path.parent_path());
  return load_catalog(entries);
}

}  // namespace signforge
