#pragma once

/**
 * @file evaluation.hpp
 * @brief Ground truth and detection rate.
 *
 * Ground truth is JSON Lines, one document per image:
 *
 *   {"source": "frame_0001.png", "lanes": [{"x0": 52, "y0": 255, "x1": 118, "y1": 120}, ...]}
 *
 * Frames are matched to results by the file name of "source" (directories
 * are ignored). A frame is correct when every ground-truth lane is matched
 * by one of the reported lanes (left or right). A reported lane matches a
 * truth lane when their directions differ by at most angle_deg and the
 * truth lane's midpoint lies within dist_px of the reported lane's line.
 *
 *   DR = correct / total * 100
 */

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlane/pipeline.hpp"

namespace qlane {

struct TruthLine {
    Point2 p0, p1;
};

struct FrameTruth {
    std::string source;
    std::vector<TruthLine> lanes;
};

/// Keyed by file name.
using GroundTruth = std::map<std::string, FrameTruth>;

struct MatchTolerance {
    double angle_deg = 5.0;
    double dist_px = 10.0;
};

inline std::string frame_key(const std::string& source) {
    return std::filesystem::path(source).filename().string();
}

inline GroundTruth parse_truth_jsonl(const std::string& text) {
    GroundTruth gt;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("truth line " + std::to_string(lineno) + ": " + e.what());
        }
        FrameTruth ft;
        ft.source = j.at("source").get<std::string>();
        for (const auto& l : j.value("lanes", nlohmann::json::array())) {
            ft.lanes.push_back({{l.at("x0").get<double>(), l.at("y0").get<double>()},
                                {l.at("x1").get<double>(), l.at("y1").get<double>()}});
        }
        gt[frame_key(ft.source)] = std::move(ft);
    }
    return gt;
}

inline std::string truth_to_jsonl(const std::vector<FrameTruth>& frames) {
    std::string out;
    for (const auto& f : frames) {
        nlohmann::ordered_json j;
        j["source"] = f.source;
        auto lanes = nlohmann::ordered_json::array();
        for (const auto& l : f.lanes) {
            lanes.push_back({{"x0", l.p0.x}, {"y0", l.p0.y}, {"x1", l.p1.x}, {"y1", l.p1.y}});
        }
        j["lanes"] = std::move(lanes);
        out += j.dump() + "\n";
    }
    return out;
}

/// Undirected angle between two directions, degrees in [0, 90].
inline double direction_difference_deg(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    const double ta = std::atan2(a1.y - a0.y, a1.x - a0.x);
    const double tb = std::atan2(b1.y - b0.y, b1.x - b0.x);
    double d = std::fmod(std::abs(ta - tb), std::numbers::pi);
    if (d > std::numbers::pi / 2) d = std::numbers::pi - d;
    return d * 180.0 / std::numbers::pi;
}

inline double point_line_distance(Point2 p, Point2 a, Point2 b) {
    const double len = distance(a, b);
    if (len == 0.0) return distance(p, a);
    return std::abs((b.x - a.x) * (a.y - p.y) - (a.x - p.x) * (b.y - a.y)) / len;
}

inline bool lane_matches(const LineSegment& det, const TruthLine& truth, const MatchTolerance& tol) {
    if (det.length() == 0.0) return false;
    if (direction_difference_deg(det.p0, det.p1, truth.p0, truth.p1) > tol.angle_deg) return false;
    const Point2 mid{0.5 * (truth.p0.x + truth.p1.x), 0.5 * (truth.p0.y + truth.p1.y)};
    return point_line_distance(mid, det.p0, det.p1) <= tol.dist_px;
}

inline bool frame_correct(const DetectionResult& r, const FrameTruth& truth, const MatchTolerance& tol) {
    for (const auto& lane : truth.lanes) {
        const bool hit = (r.left && lane_matches(*r.left, lane, tol)) ||
                         (r.right && lane_matches(*r.right, lane, tol));
        if (!hit) return false;
    }
    return true;
}

struct RateSummary {
    std::size_t correct = 0;
    std::size_t total = 0;
    double rate = 0.0;  ///< percent
};

inline double detection_rate(std::size_t correct, std::size_t total) {
    if (total == 0) return 0.0;
    return static_cast<double>(correct) / static_cast<double>(total) * 100.0;
}

inline RateSummary evaluate(std::span<const DetectionResult> results, const GroundTruth& truth,
                            const MatchTolerance& tol = {}) {
    RateSummary s;
    for (const auto& r : results) {
        const auto it = truth.find(frame_key(r.source));
        if (it == truth.end()) {
            throw std::invalid_argument("no ground truth for '" + r.source + "'");
        }
        ++s.total;
        if (frame_correct(r, it->second, tol)) ++s.correct;
    }
    s.rate = detection_rate(s.correct, s.total);
    return s;
}

inline double detection_rate(std::span<const DetectionResult> results, const GroundTruth& truth,
                             const MatchTolerance& tol = {}) {
    return evaluate(results, truth, tol).rate;
}

}  // namespace qlane
