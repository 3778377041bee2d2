#include "mmwcarry/csv_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace mmw {

namespace {

constexpr const char* kCameraHeader = "frame,u,v,w,l,confidence";
constexpr const char* kTruthHeader = "frame,subject,x,y,laptop,phone,knife";
constexpr const char* kTrackletHeader = "frame,id,status,u,v,w,l";
constexpr const char* kRadarHeader = "frame,range_m,azimuth_deg,magnitude";
constexpr const char* kPredictionHeader = "frame,subject,p_laptop,p_phone,p_knife";
constexpr const char* kLocalizationHeader = "frame,subject,x,y,range_m,azimuth_deg";
constexpr const char* kFusedHeader = "frame,subject,class,p_t,p_hat,g,c_g,s,c_s,t_f,decision";
constexpr const char* kLabelHeader = "frame,subject,gt_subject,laptop,phone,knife";
constexpr const char* kTrackInstanceHeader = "frame,id,x,y";
constexpr const char* kMetricsHeader = "scope,class,metric,value";

struct Field {
  const std::filesystem::path* path;
  std::size_t line;
};

double to_real(const std::string& s, const Field& f) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error(fmt::format("{}:{}: bad number '{}'", f.path->string(), f.line, s));
  return v;
}

int to_int(const std::string& s, const Field& f) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(fmt::format("{}:{}: bad integer '{}'", f.path->string(), f.line, s));
  return v;
}

int class_index(const std::string& s, const Field& f) {
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    if (kClassNames[k] == s) return static_cast<int>(k);
  }
  throw std::runtime_error(fmt::format("{}:{}: unknown class '{}'", f.path->string(), f.line, s));
}

std::ofstream open_out(const std::filesystem::path& p, const char* header) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << header << '\n';
  return out;
}

template <typename Row, typename Parse>
std::vector<Row> read_rows(const std::filesystem::path& p, const char* header, std::size_t ncols, Parse parse) {
  const auto table = read_csv(p, header);
  std::vector<Row> out;
  out.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Field f{&p, i + 2};
    if (table[i].size() != ncols)
      throw std::runtime_error(fmt::format("{}:{}: expected {} fields", p.string(), f.line, ncols));
    out.push_back(parse(table[i], f));
  }
  return out;
}

}  // namespace

std::string fmt_real(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, const std::string& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error(fmt::format("{}: expected header '{}'", path.string(), header));
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) fields.push_back(cell);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

void write_camera_detections(const std::filesystem::path& p, const std::vector<CameraDetectionRow>& rows) {
  auto out = open_out(p, kCameraHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{},{}\n", r.frame, fmt_real(r.det.u), fmt_real(r.det.v), fmt_real(r.det.w),
                       fmt_real(r.det.l), fmt_real(r.det.confidence));
}

std::vector<CameraDetectionRow> read_camera_detections(const std::filesystem::path& p) {
  return read_rows<CameraDetectionRow>(p, kCameraHeader, 6, [](const auto& c, const Field& f) {
    CameraDetectionRow r;
    r.frame = to_int(c[0], f);
    r.det.u = to_real(c[1], f);
    r.det.v = to_real(c[2], f);
    r.det.w = to_real(c[3], f);
    r.det.l = to_real(c[4], f);
    r.det.confidence = to_real(c[5], f);
    return r;
  });
}

void write_ground_truth(const std::filesystem::path& p, const std::vector<GroundTruthRow>& rows) {
  auto out = open_out(p, kTruthHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{:d},{:d},{:d}\n", r.frame, r.entry.subject_id, fmt_real(r.entry.position.x),
                       fmt_real(r.entry.position.y), int(r.entry.carried[0]), int(r.entry.carried[1]),
                       int(r.entry.carried[2]));
}

std::vector<GroundTruthRow> read_ground_truth(const std::filesystem::path& p) {
  return read_rows<GroundTruthRow>(p, kTruthHeader, 7, [](const auto& c, const Field& f) {
    GroundTruthRow r;
    r.frame = to_int(c[0], f);
    r.entry.subject_id = to_int(c[1], f);
    r.entry.position = {to_real(c[2], f), to_real(c[3], f)};
    for (std::size_t k = 0; k < kNumClasses; ++k) r.entry.carried[k] = to_int(c[4 + k], f) != 0;
    return r;
  });
}

void write_tracklet_log(const std::filesystem::path& p, const std::vector<TrackletLogRow>& rows) {
  auto out = open_out(p, kTrackletHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{},{},{}\n", r.frame, r.id, r.status, fmt_real(r.u), fmt_real(r.v), fmt_real(r.w),
                       fmt_real(r.l));
}

std::vector<TrackletLogRow> read_tracklet_log(const std::filesystem::path& p) {
  return read_rows<TrackletLogRow>(p, kTrackletHeader, 7, [](const auto& c, const Field& f) {
    return TrackletLogRow{to_int(c[0], f), to_int(c[1], f), c[2], to_real(c[3], f), to_real(c[4], f),
                          to_real(c[5], f), to_real(c[6], f)};
  });
}

void write_radar_detections(const std::filesystem::path& p, const std::vector<RadarDetectionRow>& rows) {
  auto out = open_out(p, kRadarHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{}\n", r.frame, fmt_real(r.range_m), fmt_real(r.azimuth_deg), fmt_real(r.magnitude));
}

std::vector<RadarDetectionRow> read_radar_detections(const std::filesystem::path& p) {
  return read_rows<RadarDetectionRow>(p, kRadarHeader, 4, [](const auto& c, const Field& f) {
    return RadarDetectionRow{to_int(c[0], f), to_real(c[1], f), to_real(c[2], f), to_real(c[3], f)};
  });
}

void write_predictions(const std::filesystem::path& p, const std::vector<PredictionRow>& rows) {
  auto out = open_out(p, kPredictionHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{}\n", r.frame, r.subject, fmt_real(r.p[0]), fmt_real(r.p[1]), fmt_real(r.p[2]));
}

std::vector<PredictionRow> read_predictions(const std::filesystem::path& p) {
  return read_rows<PredictionRow>(p, kPredictionHeader, 5, [](const auto& c, const Field& f) {
    PredictionRow r;
    r.frame = to_int(c[0], f);
    r.subject = to_int(c[1], f);
    for (std::size_t k = 0; k < kNumClasses; ++k) r.p[k] = to_real(c[2 + k], f);
    return r;
  });
}

void write_localization(const std::filesystem::path& p, const std::vector<LocalizationRow>& rows) {
  auto out = open_out(p, kLocalizationHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{},{}\n", r.frame, r.subject, fmt_real(r.x), fmt_real(r.y), fmt_real(r.range_m),
                       fmt_real(r.azimuth_deg));
}

std::vector<LocalizationRow> read_localization(const std::filesystem::path& p) {
  return read_rows<LocalizationRow>(p, kLocalizationHeader, 6, [](const auto& c, const Field& f) {
    return LocalizationRow{to_int(c[0], f),  to_int(c[1], f),  to_real(c[2], f),
                           to_real(c[3], f), to_real(c[4], f), to_real(c[5], f)};
  });
}

void write_fused_log(const std::filesystem::path& p, const std::vector<FusedRow>& rows) {
  auto out = open_out(p, kFusedHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{},{},{},{},{},{:d},{:d}\n", r.frame, r.subject, kClassNames[r.cls],
                       fmt_real(r.p), fmt_real(r.p_hat), fmt_real(r.g), fmt_real(r.c_g), fmt_real(r.s),
                       fmt_real(r.c_s), int(r.transferred), int(r.decision));
}

std::vector<FusedRow> read_fused_log(const std::filesystem::path& p) {
  return read_rows<FusedRow>(p, kFusedHeader, 11, [](const auto& c, const Field& f) {
    FusedRow r;
    r.frame = to_int(c[0], f);
    r.subject = to_int(c[1], f);
    r.cls = class_index(c[2], f);
    r.p = to_real(c[3], f);
    r.p_hat = to_real(c[4], f);
    r.g = to_real(c[5], f);
    r.c_g = to_real(c[6], f);
    r.s = to_real(c[7], f);
    r.c_s = to_real(c[8], f);
    r.transferred = to_int(c[9], f) != 0;
    r.decision = to_int(c[10], f) != 0;
    return r;
  });
}

void write_labels(const std::filesystem::path& p, const std::vector<LabelRow>& rows) {
  auto out = open_out(p, kLabelHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{:d},{:d},{:d}\n", r.frame, r.subject, r.gt_subject, int(r.classes[0]),
                       int(r.classes[1]), int(r.classes[2]));
}

std::vector<LabelRow> read_labels(const std::filesystem::path& p) {
  return read_rows<LabelRow>(p, kLabelHeader, 6, [](const auto& c, const Field& f) {
    LabelRow r;
    r.frame = to_int(c[0], f);
    r.subject = to_int(c[1], f);
    r.gt_subject = to_int(c[2], f);
    for (std::size_t k = 0; k < kNumClasses; ++k) r.classes[k] = to_int(c[3 + k], f) != 0;
    return r;
  });
}

void write_track_instances(const std::filesystem::path& p, const std::vector<TrackInstance>& rows) {
  auto out = open_out(p, kTrackInstanceHeader);
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{}\n", r.frame, r.track_id, fmt_real(r.position.x), fmt_real(r.position.y));
}

std::vector<TrackInstance> read_track_instances(const std::filesystem::path& p) {
  return read_rows<TrackInstance>(p, kTrackInstanceHeader, 4, [](const auto& c, const Field& f) {
    return TrackInstance{to_int(c[0], f), to_int(c[1], f), {to_real(c[2], f), to_real(c[3], f)}};
  });
}

void write_metrics(const std::filesystem::path& p, const std::vector<MetricRow>& rows) {
  auto out = open_out(p, kMetricsHeader);
  for (const auto& r : rows) out << fmt::format("{},{},{},{}\n", r.scope, r.cls, r.metric, r.value);
}

std::vector<MetricRow> read_metrics(const std::filesystem::path& p) {
  return read_rows<MetricRow>(p, kMetricsHeader, 4,
                              [](const auto& c, const Field&) { return MetricRow{c[0], c[1], c[2], c[3]}; });
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace mmw
