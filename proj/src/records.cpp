#include "teamscope/records.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "teamscope/error.hpp"

namespace teamscope {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (v == 0.0) return "0";
  return fmt::format("{}", v);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(line);
    } catch (const json::exception& e) {
      throw FormatError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
    } catch (const FormatError& e) {
      throw FormatError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
    }
  }
}

json parse_object(std::string_view line) {
  json j = json::parse(line);
  if (!j.is_object()) throw FormatError("expected a JSON object");
  return j;
}

}  // namespace

std::string profile_to_json(const ActivityProfile& p) {
  ordered_json j;
  j["paper_id"] = p.paper_id;
  j["author_id"] = p.author_id;
  j["position"] = p.position;
  j["team_size"] = p.team_size;
  j["corresponding"] = p.corresponding;
  auto acts = ordered_json::array();
  for (Activity a : p.activities.items()) acts.push_back(std::string(activity_name(a)));
  j["activities"] = acts;
  j["unmatched_verbs"] = p.unmatched_verbs;
  return j.dump();
}

namespace {

ActivityProfile profile_from_json_impl(std::string_view line) {
  const json j = parse_object(line);
  ActivityProfile p;
  p.paper_id = j.at("paper_id").get<std::string>();
  p.author_id = j.at("author_id").get<std::string>();
  p.position = j.at("position").get<std::size_t>();
  p.team_size = j.at("team_size").get<std::size_t>();
  p.corresponding = j.value("corresponding", false);
  for (const auto& a : j.at("activities")) {
    const auto act = activity_from_name(a.get<std::string>());
    if (!act) throw FormatError("unknown activity '" + a.get<std::string>() + "'");
    p.activities.insert(*act);
  }
  if (j.contains("unmatched_verbs")) p.unmatched_verbs = j.at("unmatched_verbs").get<std::vector<std::string>>();
  return p;
}

}  // namespace

ActivityProfile profile_from_json(std::string_view line) {
  try {
    return profile_from_json_impl(line);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  }
}

void write_profiles(const std::filesystem::path& path, std::span<const ActivityProfile> profiles) {
  std::string out;
  for (const auto& p : profiles) {
    out += profile_to_json(p);
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<ActivityProfile> read_profiles(const std::filesystem::path& path) {
  std::vector<ActivityProfile> out;
  for_each_line(path, [&](const std::string& line) { out.push_back(profile_from_json(line)); });
  return out;
}

std::string coverage_to_json(const CoverageReport& r) {
  ordered_json j;
  j["papers_parsed"] = r.papers_parsed;
  j["verb_tokens"] = r.verb_tokens;
  j["matched_tokens"] = r.matched_tokens;
  j["coverage"] = r.coverage() ? ordered_json(*r.coverage()) : ordered_json(nullptr);
  j["mean_unique_activities"] =
      r.mean_unique_activities() ? ordered_json(*r.mean_unique_activities()) : ordered_json(nullptr);
  j["unattributed"] = r.unattributed;
  j["unmatched_mentions"] = r.unmatched_mentions;
  j["ambiguous_mentions"] = r.ambiguous_mentions;
  auto papers = ordered_json::array();
  for (const auto& p : r.papers) {
    ordered_json e;
    e["paper_id"] = p.paper_id;
    e["verb_tokens"] = p.verb_tokens;
    e["matched_tokens"] = p.matched_tokens;
    e["match_fraction"] = p.match_fraction() ? ordered_json(*p.match_fraction()) : ordered_json(nullptr);
    papers.push_back(e);
  }
  j["papers"] = papers;
  return j.dump(2) + "\n";
}

std::string partition_to_json(const PartitionArtifact& a) {
  ordered_json j;
  j["q"] = a.partition.q ? ordered_json(*a.partition.q) : ordered_json(nullptr);
  j["clusters"] = a.partition.cluster_count();
  j["agreement"] = a.agreement ? ordered_json(*a.agreement) : ordered_json(nullptr);
  j["reference_q"] = a.reference_q ? ordered_json(*a.reference_q) : ordered_json(nullptr);
  j["seed"] = a.seed;
  j["resolution"] = a.resolution;
  j["unit"] = a.unit;
  j["assignment"] = a.assignment;
  ordered_json labels, roles, reference;
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    const std::string name(activity_name(activity_at(i)));
    if (i < a.partition.labels.size()) labels[name] = a.partition.labels[i];
    roles[name] = std::string(cluster_name(a.roles[i]));
    reference[name] = std::string(cluster_name(reference_cluster(activity_at(i))));
  }
  j["labels"] = labels;
  j["reference"] = reference;
  j["roles"] = roles;
  return j.dump(2) + "\n";
}

void write_partition(const std::filesystem::path& path, const PartitionArtifact& a) {
  write_text_file(path, partition_to_json(a));
}

RoleMap read_partition_roles(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    const json j = json::parse(text);
    const auto& roles = j.at("roles");
    RoleMap m{};
    for (std::size_t i = 0; i < kActivityCount; ++i) {
      const std::string name(activity_name(activity_at(i)));
      const auto cl = cluster_from_name(roles.at(name).get<std::string>());
      if (!cl) throw FormatError("unknown cluster for activity '" + name + "'");
      m[i] = *cl;
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string role_to_json(const RoleAssignment& r) {
  ordered_json j;
  j["paper_id"] = r.paper_id;
  j["author_id"] = r.author_id;
  j["position"] = r.position;
  j["team_size"] = r.team_size;
  j["corresponding"] = r.corresponding;
  j["role"] = std::string(role_name(r.role));
  j["source"] = std::string(source_name(r.source));
  if (r.promoted) j["promoted"] = true;
  return j.dump();
}

namespace {

RoleAssignment role_from_json_impl(std::string_view line) {
  const json j = parse_object(line);
  RoleAssignment r;
  r.paper_id = j.at("paper_id").get<std::string>();
  r.author_id = j.at("author_id").get<std::string>();
  r.position = j.at("position").get<std::size_t>();
  r.team_size = j.at("team_size").get<std::size_t>();
  r.corresponding = j.value("corresponding", false);
  const auto role = role_from_name(j.at("role").get<std::string>());
  if (!role) throw FormatError("unknown role '" + j.at("role").get<std::string>() + "'");
  r.role = *role;
  const auto src = source_from_name(j.value("source", std::string("parsed")));
  if (!src) throw FormatError("unknown role source");
  r.source = *src;
  r.promoted = j.value("promoted", false);
  return r;
}

}  // namespace

RoleAssignment role_from_json(std::string_view line) {
  try {
    return role_from_json_impl(line);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  }
}

void write_roles(const std::filesystem::path& path, std::span<const RoleAssignment> roles) {
  std::string out;
  for (const auto& r : roles) {
    out += role_to_json(r);
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<RoleAssignment> read_roles(const std::filesystem::path& path) {
  std::vector<RoleAssignment> out;
  for_each_line(path, [&](const std::string& line) { out.push_back(role_from_json(line)); });
  return out;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

void write_lratio_csv(const std::filesystem::path& path, std::span<const LRatio> lratios) {
  std::string out = "paper_id,n,n_lead,lratio,tall,source\n";
  for (const auto& l : lratios) {
    if (!l.defined()) continue;
    const std::vector<std::string> row = {l.paper_id, std::to_string(l.n), std::to_string(l.n_lead),
                                          format_number(l.value), l.tall ? "1" : "0",
                                          std::string(source_name(l.source))};
    out += csv_row(row);
  }
  write_text_file(path, out);
}

std::vector<LRatio> read_lratio_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const auto c_id = t.column("paper_id"), c_n = t.column("n"), c_lead = t.column("n_lead"),
             c_l = t.column("lratio"), c_tall = t.column("tall"), c_src = t.column("source");
  std::vector<LRatio> out;
  for (const auto& row : t.rows) {
    LRatio l;
    l.paper_id = row[c_id];
    const auto n = parse_cell(row[c_n], "n");
    const auto lead = parse_cell(row[c_lead], "n_lead");
    const auto v = parse_cell(row[c_l], "lratio");
    if (!n || !lead || !v) throw FormatError(path.string() + ": missing value for paper " + l.paper_id);
    l.n = static_cast<std::size_t>(*n);
    l.n_lead = static_cast<std::size_t>(*lead);
    l.value = *v;
    l.tall = row[c_tall] == "1" || row[c_tall] == "true";
    const auto src = source_from_name(row[c_src]);
    if (!src) throw FormatError(path.string() + ": unknown source '" + row[c_src] + "'");
    l.source = *src;
    out.push_back(std::move(l));
  }
  return out;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError("missing column '" + std::string(name) + "'");
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        records.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw FormatError(source + ": unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  CsvTable t;
  if (records.empty()) throw FormatError(source + ": empty CSV");
  t.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size()) {
      throw FormatError(fmt::format("{}: row {} has {} fields, header has {}", source, r + 1, records[r].size(),
                                    t.header.size()));
    }
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text_file(path), path.string()); }

std::optional<double> parse_cell(std::string_view cell, std::string_view column) {
  if (cell.empty() || cell == "NA") return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw FormatError("column '" + std::string(column) + "': '" + std::string(cell) + "' is not a number");
  }
  return v;
}

}  // namespace teamscope
