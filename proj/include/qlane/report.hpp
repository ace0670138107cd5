#pragma once

// JSON form of a DetectionResult:
//
//   {
//     "source": "frame_0001.png",
//     "width": 640, "height": 360,
//     "segments": [{"x0":..,"y0":..,"x1":..,"y1":..,"rho":..,"theta":..,"votes":..}, ...],
//     "left":  {segment} | null,
//     "right": {segment} | null,
//     "timings": {"decode": ms, "encode": ms, ...}
//   }
//
// Timings are wall-clock and therefore the only non-deterministic field;
// ReportOptions::timings drops them for reproducible output.

#include <json.hpp>

#include <string>

#include "qlane/pipeline.hpp"

namespace qlane {

struct ReportOptions {
    bool timings = true;
    int indent = 2;
};

inline nlohmann::ordered_json segment_to_json(const LineSegment& s) {
    return {{"x0", s.p0.x}, {"y0", s.p0.y}, {"x1", s.p1.x}, {"y1", s.p1.y},
            {"rho", s.rho}, {"theta", s.theta}, {"votes", s.votes}};
}

inline LineSegment segment_from_json(const nlohmann::json& j) {
    LineSegment s;
    s.p0 = {j.at("x0").get<double>(), j.at("y0").get<double>()};
    s.p1 = {j.at("x1").get<double>(), j.at("y1").get<double>()};
    s.rho = j.value("rho", 0.0);
    s.theta = j.value("theta", 0.0);
    s.votes = j.value("votes", 0);
    return s;
}

inline nlohmann::ordered_json result_to_json(const DetectionResult& r, const ReportOptions& opt = {}) {
    nlohmann::ordered_json j;
    j["source"] = r.source;
    j["width"] = r.width;
    j["height"] = r.height;
    auto segs = nlohmann::ordered_json::array();
    for (const auto& s : r.all_segments) segs.push_back(segment_to_json(s));
    j["segments"] = std::move(segs);
    j["left"] = r.left ? segment_to_json(*r.left) : nlohmann::ordered_json(nullptr);
    j["right"] = r.right ? segment_to_json(*r.right) : nlohmann::ordered_json(nullptr);
    if (opt.timings) {
        auto t = nlohmann::ordered_json::object();
        for (const auto& st : r.timings) t[st.stage] = st.ms;
        j["timings"] = std::move(t);
    }
    return j;
}

inline std::string to_json(const DetectionResult& r, const ReportOptions& opt = {}) {
    return result_to_json(r, opt).dump(opt.indent) + "\n";
}

/// Parses a result document produced by to_json. Missing optional fields
/// default to empty.
inline DetectionResult result_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    DetectionResult r;
    r.source = j.at("source").get<std::string>();
    r.width = j.value("width", std::size_t{0});
    r.height = j.value("height", std::size_t{0});
    if (j.contains("segments")) {
        for (const auto& s : j.at("segments")) r.all_segments.push_back(segment_from_json(s));
    }
    if (j.contains("left") && !j.at("left").is_null()) r.left = segment_from_json(j.at("left"));
    if (j.contains("right") && !j.at("right").is_null()) r.right = segment_from_json(j.at("right"));
    if (j.contains("timings")) {
        for (const auto& [k, v] : j.at("timings").items()) r.timings.push_back({k, v.get<double>()});
    }
    return r;
}

}  // namespace qlane
