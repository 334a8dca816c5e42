#include "speedid_cli/policy_file.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "speedid/error.hpp"
#include "speedid/units.hpp"

namespace speedid::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse(std::string_view field, std::size_t line) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("bad value '" + std::string(field) + "'", line);
  }
  return value;
}

std::vector<double> parse_list(std::string_view text, std::size_t line) {
  std::vector<double> out;
  for (auto f : split(text, ',')) out.push_back(parse<double>(f, line));
  return out;
}

void write_grid(std::ostream& out, const char* key, const Grid& g) {
  out << key << " = " << g.lo() << ',' << g.hi() << ',' << g.size() << '\n';
}

Grid read_grid(const std::map<std::string, std::pair<std::string, std::size_t>>& header,
               const std::string& key) {
  auto it = header.find(key);
  if (it == header.end()) throw ValidationError("policy file missing '" + key + "'");
  const auto values = parse_list(it->second.first, it->second.second);
  if (values.size() != 3) throw ParseError(key + " needs lo,hi,count", it->second.second);
  return Grid(values[0], values[1], static_cast<std::size_t>(values[2]));
}

}  // namespace

void write_policy_file(std::ostream& out, const PolicyArtifact& a) {
  const auto prec = out.precision(17);
  const Policy& p = a.policy;
  out << kPolicyMagic << '\n';
  out << "version = " << kPolicyVersion << '\n';
  out << "segments = " << p.segments() << '\n';
  out << "segment_length_m = " << a.segment_length << '\n';
  out << "t_max_s = " << a.t_max << '\n';
  write_grid(out, "speed_grid_kmh", p.grids().speed_kmh);
  write_grid(out, "accel_grid_ms2", p.grids().accel_ms2);
  write_grid(out, "control_grid_pct", p.grids().control_pct);
  out << "vehicle = " << a.vehicle.a_t_max << ',' << a.vehicle.a_t_min << ',' << a.vehicle.c_v << ','
      << a.vehicle.a_n_max << '\n';
  out << "radius_m = ";
  for (std::size_t i = 0; i < a.radius.size(); ++i) out << (i ? "," : "") << a.radius[i];
  out << '\n' << "rows\n";
  for (std::size_t i = 0; i < p.segments(); ++i) {
    for (std::size_t v = 0; v < p.speeds(); ++v) {
      const PolicyRow& r = p.at(i, v);
      out << i << ',' << v << ',' << r.u_index;
      if (!r.deterministic()) out << ',' << r.u_alt << ',' << r.weight;
      out << '\n';
    }
  }
  out.precision(prec);
}

PolicyArtifact read_policy_file(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  if (!std::getline(in, raw) || trim(raw) != kPolicyMagic) {
    throw ParseError("not a speedid policy file", 1);
  }
  ++line;
  std::map<std::string, std::pair<std::string, std::size_t>> header;
  bool rows_started = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (text == "rows") {
      rows_started = true;
      break;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line);
    header[std::string(trim(text.substr(0, eq)))] = {std::string(trim(text.substr(eq + 1))), line};
  }
  if (!rows_started) throw ParseError("missing 'rows' section", line);

  auto value_of = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    auto it = header.find(key);
    if (it == header.end()) throw ValidationError("policy file missing '" + key + "'");
    return it->second;
  };
  {
    const auto& [text, at] = value_of("version");
    const int version = parse<int>(text, at);
    if (version != kPolicyVersion) {
      throw ValidationError("policy file version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kPolicyVersion) + ")");
    }
  }
  const auto segments = parse<std::size_t>(value_of("segments").first, value_of("segments").second);
  Grids grids{read_grid(header, "speed_grid_kmh"), read_grid(header, "accel_grid_ms2"),
              read_grid(header, "control_grid_pct")};
  const auto vehicle_values = parse_list(value_of("vehicle").first, value_of("vehicle").second);
  if (vehicle_values.size() != 4) throw ParseError("vehicle needs 4 values", value_of("vehicle").second);
  VehicleParams vehicle{vehicle_values[0], vehicle_values[1], vehicle_values[2], vehicle_values[3]};
  std::vector<double> radius = parse_list(value_of("radius_m").first, value_of("radius_m").second);
  if (radius.size() != segments + 1) throw ValidationError("radius_m needs segments + 1 values");

  const std::size_t nv = grids.speed_kmh.size();
  const std::size_t nu = grids.control_pct.size();
  std::vector<PolicyRow> rows(segments * nv);
  std::vector<bool> seen(rows.size(), false);
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    if (fields.size() != 3 && fields.size() != 5) throw ParseError("expected 3 or 5 fields", line);
    const auto i = parse<std::size_t>(fields[0], line);
    const auto v = parse<std::size_t>(fields[1], line);
    const auto u = parse<std::uint32_t>(fields[2], line);
    if (i >= segments || v >= nv || u >= nu) throw ValidationError("row index out of range", line);
    PolicyRow row = deterministic_row(u);
    if (fields.size() == 5) {
      row.u_alt = parse<std::uint32_t>(fields[3], line);
      row.weight = parse<double>(fields[4], line);
      if (row.u_alt >= nu || !(row.weight >= 0.0 && row.weight <= 1.0)) {
        throw ValidationError("bad mixed policy row", line);
      }
    }
    rows[i * nv + v] = row;
    seen[i * nv + v] = true;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      throw ValidationError("policy incomplete: no row for segment " + std::to_string(k / nv) +
                            ", speed index " + std::to_string(k % nv));
    }
  }
  const double s = parse<double>(value_of("segment_length_m").first, value_of("segment_length_m").second);
  const double t_max = parse<double>(value_of("t_max_s").first, value_of("t_max_s").second);
  return PolicyArtifact{Policy(std::move(grids), segments, std::move(rows)), vehicle, s, t_max,
                        std::move(radius)};
}

void write_profile_csv(std::ostream& out, const RolloutResult& r, double segment_length) {
  const auto prec = out.precision(10);
  out << "i,position_m,speed_kmh,control_pct,segment_time_s,cum_time_s\n";
  double cum = 0.0;
  for (std::size_t i = 0; i < r.v_hat.size(); ++i) {
    const double dt = i == 0 ? 0.0 : r.t[i - 1];
    cum += dt;
    out << i << ',' << static_cast<double>(i) * segment_length << ',' << ms_to_kmh(r.v_hat[i]) << ',';
    if (i < r.u_hat.size()) out << fraction_to_pct(r.u_hat[i]);
    out << ',' << dt << ',' << cum << '\n';
  }
  out.precision(prec);
}

}  // namespace speedid::cli
