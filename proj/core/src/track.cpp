#include "speedid/track.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

#include "speedid/error.hpp"

namespace speedid {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError("not a number: '" + std::string(field) + "'", line);
  }
  return value;
}

}  // namespace

double RadiusProfile::radius_at(double position) const {
  if (samples.empty()) throw ValidationError("empty radius profile");
  if (position <= samples.front().position) return samples.front().radius;
  if (position >= samples.back().position) return samples.back().radius;
  auto hi = std::upper_bound(samples.begin(), samples.end(), position,
                             [](double x, const RadiusSample& s) { return x < s.position; });
  auto lo = hi - 1;
  if (position == lo->position) return lo->radius;
  const double t = (position - lo->position) / (hi->position - lo->position);
  return lo->radius + t * (hi->radius - lo->radius);
}

Track::Track(double segment_length, std::vector<double> radius, const VehicleParams& params)
    : segment_length_(segment_length), radius_(std::move(radius)) {
  if (!(segment_length_ > 0.0)) throw ValidationError("segment length must be positive");
  if (radius_.size() < 2) throw ValidationError("a track needs at least one segment");
  params.validate();
  v_cap_.reserve(radius_.size());
  for (double r : radius_) {
    if (!(r > 0.0)) throw ValidationError("radius must be positive");
    v_cap_.push_back(max_corner_speed(r, params));
  }
}

RadiusProfile load_radius_profile(std::istream& in) {
  RadiusProfile profile;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = trim(raw);
    if (line == 1 && text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
      text.remove_prefix(3);
    }
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "position_m,radius_m") {
        throw ParseError("expected header 'position_m,radius_m'", line);
      }
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected two comma-separated fields", line);
    }
    const double position = parse_number(text.substr(0, comma), line);
    const double radius = parse_number(text.substr(comma + 1), line);
    if (!std::isfinite(position) || !std::isfinite(radius)) {
      throw ValidationError("non-finite value", line);
    }
    if (!(radius > 0.0)) throw ValidationError("radius must be positive", line);
    if (profile.samples.empty()) {
      if (position != 0.0) throw ValidationError("first position must be 0", line);
    } else if (!(position > profile.samples.back().position)) {
      throw ValidationError("positions must strictly increase", line);
    }
    profile.samples.push_back({position, std::min(radius, kStraightRadius)});
  }
  if (!header_seen) throw ParseError("missing header", line == 0 ? 1 : line);
  return profile;
}

void write_radius_profile(std::ostream& out, const Track& track) {
  const auto prec = out.precision(17);
  out << "position_m,radius_m\n";
  for (std::size_t i = 0; i < track.points(); ++i) {
    out << static_cast<double>(i) * track.segment_length() << ',' << track.radius()[i] << '\n';
  }
  out.precision(prec);
}

Track resample(const RadiusProfile& profile, double s, double total_length,
               const VehicleParams& params) {
  if (profile.samples.empty()) throw ValidationError("empty radius profile");
  if (!(s > 0.0)) throw ValidationError("segment length must be positive");
  if (!(total_length >= s)) throw ValidationError("total length shorter than one segment");
  const auto n = static_cast<std::size_t>(std::llround(total_length / s));
  std::vector<double> radius(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    radius[i] = profile.radius_at(static_cast<double>(i) * s);
  }
  return Track(s, std::move(radius), params);
}

Track synth_track(const SynthSpec& spec, const VehicleParams& params) {
  if (spec.segments < 1) throw ValidationError("synthetic track needs at least one segment");
  std::vector<double> radius(spec.segments + 1, kStraightRadius);
  switch (spec.kind) {
    case SynthKind::straight:
      break;
    case SynthKind::circle:
      std::fill(radius.begin(), radius.end(), spec.corner_radius);
      break;
    case SynthKind::chicane: {
      if (spec.block < 1) throw ValidationError("chicane block must be at least 1");
      for (std::size_t i = 0; i < radius.size(); ++i) {
        if ((i / spec.block) % 2 == 1) radius[i] = spec.corner_radius;
      }
      break;
    }
  }
  return Track(spec.segment_length, std::move(radius), params);
}

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "straight") return SynthKind::straight;
  if (name == "circle") return SynthKind::circle;
  if (name == "chicane") return SynthKind::chicane;
  throw ValidationError("unknown synthetic track kind '" + name + "'");
}

}  // namespace speedid
