#include "spp/ingest.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <stdexcept>
#include <string_view>

#include "json.hpp"
#include "spp/rng.h"

namespace spp {

namespace {

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool split_tabs(std::string_view line, std::array<std::string_view, 5>& out) {
  size_t field = 0;
  size_t start = 0;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '\t') {
      if (field == out.size()) return false;
      out[field++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  return field == out.size();
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

nlohmann::json box_json(const BoundingBox& b) {
  return {{"x_min", b.x_min}, {"y_min", b.y_min},
          {"x_max", b.x_max}, {"y_max", b.y_max}};
}

BoundingBox box_from_json(const nlohmann::json& j) {
  return {j.at("x_min").get<double>(), j.at("y_min").get<double>(),
          j.at("x_max").get<double>(), j.at("y_max").get<double>()};
}

}  // namespace

std::optional<std::int64_t> parse_utc_timestamp(std::string_view text) {
  if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
  if (text.size() != 19 || text[4] != '-' || text[7] != '-' ||
      text[10] != 'T' || text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  int y, mo, d, h, mi, s;
  if (!parse_number(text.substr(0, 4), y) ||
      !parse_number(text.substr(5, 2), mo) ||
      !parse_number(text.substr(8, 2), d) ||
      !parse_number(text.substr(11, 2), h) ||
      !parse_number(text.substr(14, 2), mi) ||
      !parse_number(text.substr(17, 2), s)) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + s;
}

ParsedCheckins parse_checkins(std::istream& in) {
  if (!in) throw std::runtime_error("check-in stream is not readable");
  ParsedCheckins out;
  std::string line;
  std::array<std::string_view, 5> f;
  while (std::getline(in, line)) {
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.find_first_not_of(" \t") == std::string_view::npos) continue;

    CheckinRecord rec;
    std::optional<std::int64_t> ts;
    if (!split_tabs(view, f) || !parse_number(f[0], rec.user_id) ||
        !(ts = parse_utc_timestamp(f[1])) ||
        !parse_number(f[2], rec.position.lat) ||
        !parse_number(f[3], rec.position.lon) ||
        !parse_number(f[4], rec.location_id) || !rec.position.valid()) {
      ++out.malformed;
      continue;
    }
    rec.timestamp = *ts;
    out.records.push_back(rec);
  }
  if (in.bad()) throw std::runtime_error("error while reading check-ins");
  return out;
}

BoundingBox snap_extent(const BoundingBox& box, double resolution) {
  const auto snap = [resolution](double v) {
    return std::round(v / resolution) * resolution;
  };
  return {snap(box.x_min), snap(box.y_min), snap(box.x_max), snap(box.y_max)};
}

Dataset filter_and_sample(std::span<const CheckinRecord> records,
                          const LatLongBox& box, std::uint64_t seed,
                          double earth_radius) {
  std::map<std::int64_t, std::vector<const CheckinRecord*>> by_user;
  for (const auto& r : records) {
    if (box.contains(r.position)) by_user[r.user_id].push_back(&r);
  }

  Dataset ds;
  ds.latlong_box = box;
  ds.seed = seed;
  const LatLong ref = box.midpoint();
  const GeoPoint sw = latlong_to_local(box.sw, ref, earth_radius);
  const GeoPoint ne = latlong_to_local(box.ne, ref, earth_radius);
  ds.bbox_local = {sw.x, sw.y, ne.x, ne.y};
  ds.grid_extent = snap_extent(ds.bbox_local, kGridExtentRounding);

  ds.users.reserve(by_user.size());
  for (const auto& [id, recs] : by_user) {
    Rng rng = make_stream({seed, static_cast<std::uint64_t>(id)});
    std::uniform_int_distribution<size_t> pick(0, recs.size() - 1);
    const CheckinRecord& chosen = *recs[pick(rng)];
    ds.users.push_back(
        {id, latlong_to_local(chosen.position, ref, earth_radius)});
  }
  return ds;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

void write_snapshot(const Dataset& ds, const std::filesystem::path& csv) {
  if (csv.has_parent_path()) {
    std::filesystem::create_directories(csv.parent_path());
  }
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv.string());
    out << "user_id,x,y\n";
    for (const auto& u : ds.users) {
      out << u.id << ',' << fixed6(u.location.x) << ','
          << fixed6(u.location.y) << '\n';
    }
  }
  nlohmann::ordered_json side;
  side["source"] = ds.source;
  side["bbox"] = {{"sw_lat", ds.latlong_box.sw.lat},
                  {"sw_long", ds.latlong_box.sw.lon},
                  {"ne_lat", ds.latlong_box.ne.lat},
                  {"ne_long", ds.latlong_box.ne.lon}};
  side["seed"] = ds.seed;
  side["count"] = ds.users.size();
  side["malformed"] = ds.malformed;
  side["bbox_local"] = box_json(ds.bbox_local);
  side["grid_extent"] = box_json(ds.grid_extent);
  std::ofstream out(sidecar_path(csv), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write sidecar for " + csv.string());
  out << side.dump(2) << '\n';
}

Dataset read_snapshot(const std::filesystem::path& csv) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read dataset " + csv.string());
  std::string line;
  if (!std::getline(in, line) || line != "user_id,x,y") {
    throw std::runtime_error("dataset header must be user_id,x,y");
  }
  Dataset ds;
  ds.source = csv.string();
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::string_view v(line);
    const size_t c1 = v.find(',');
    const size_t c2 = c1 == v.npos ? v.npos : v.find(',', c1 + 1);
    LocatedId u{};
    if (c2 == v.npos || !parse_number(v.substr(0, c1), u.id) ||
        !parse_number(v.substr(c1 + 1, c2 - c1 - 1), u.location.x) ||
        !parse_number(v.substr(c2 + 1), u.location.y)) {
      throw std::runtime_error("malformed dataset row " + std::to_string(row));
    }
    ds.users.push_back(u);
  }
  std::sort(ds.users.begin(), ds.users.end(),
            [](const LocatedId& a, const LocatedId& b) { return a.id < b.id; });

  const auto side = sidecar_path(csv);
  if (std::filesystem::exists(side)) {
    std::ifstream sj(side);
    const auto j = nlohmann::json::parse(sj);
    ds.source = j.value("source", ds.source);
    ds.seed = j.value("seed", std::uint64_t{0});
    ds.malformed = j.value("malformed", size_t{0});
    if (j.contains("bbox")) {
      const auto& b = j["bbox"];
      ds.latlong_box = {{b.at("sw_lat"), b.at("sw_long")},
                        {b.at("ne_lat"), b.at("ne_long")}};
    }
    if (j.contains("bbox_local")) ds.bbox_local = box_from_json(j["bbox_local"]);
    if (j.contains("grid_extent")) {
      ds.grid_extent = box_from_json(j["grid_extent"]);
      return ds;
    }
  }
  if (!ds.users.empty()) {
    BoundingBox b{ds.users[0].location.x, ds.users[0].location.y,
                  ds.users[0].location.x, ds.users[0].location.y};
    for (const auto& u : ds.users) {
      b.x_min = std::min(b.x_min, u.location.x);
      b.y_min = std::min(b.y_min, u.location.y);
      b.x_max = std::max(b.x_max, u.location.x);
      b.y_max = std::max(b.y_max, u.location.y);
    }
    if (!ds.bbox_local.valid()) ds.bbox_local = b;
    ds.grid_extent = ds.bbox_local;
  }
  return ds;
}

}  // namespace spp
