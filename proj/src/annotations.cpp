#include "slcd/annotations.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "slcd/fsio.hpp"

namespace slcd {

namespace {

using nlohmann::json;

constexpr double kBoundaryTolPx = 0.5;
constexpr size_t kMaxLinesPerRecord = 32;

bool on_boundary(double x, double y, int w, int h) {
    if (x < -kBoundaryTolPx || x > w + kBoundaryTolPx) return false;
    if (y < -kBoundaryTolPx || y > h + kBoundaryTolPx) return false;
    const double dx = std::min(std::abs(x), std::abs(x - w));
    const double dy = std::min(std::abs(y), std::abs(y - h));
    return std::min(dx, dy) <= kBoundaryTolPx;
}

AnnotationRecord record_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("annotation: record is not an object");
    AnnotationRecord rec;
    try {
        rec.image_id = j.at("image_id").get<std::string>();
        rec.width_px = j.at("width_px").get<int>();
        rec.height_px = j.at("height_px").get<int>();
        for (const json& q : j.at("lines")) {
            if (!q.is_array() || q.size() != 4) {
                throw ParseError("annotation: line entries must be"
                                 " [x1, y1, x2, y2]");
            }
            rec.lines.push_back({q[0].get<double>(), q[1].get<double>(),
                                 q[2].get<double>(), q[3].get<double>()});
        }
        if (j.contains("composition_class")) {
            rec.composition_class =
                j.at("composition_class").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("annotation: ") + e.what());
    }
    return rec;
}

json record_to_json(const AnnotationRecord& rec) {
    json j;
    j["image_id"] = rec.image_id;
    j["width_px"] = rec.width_px;
    j["height_px"] = rec.height_px;
    j["lines"] = json::array();
    for (const auto& q : rec.lines) {
        j["lines"].push_back({q[0], q[1], q[2], q[3]});
    }
    if (rec.composition_class) {
        j["composition_class"] = *rec.composition_class;
    }
    return j;
}

}  // namespace

const std::vector<std::string>& composition_classes() {
    static const std::vector<std::string> names = {
        "Horizontal", "Vertical", "Diagonal", "Triangle",
        "Symmetric",  "Low",      "Front"};
    return names;
}

void validate_record(const AnnotationRecord& rec) {
    auto fail = [&](const std::string& why) {
        throw InvariantViolation("annotation record '" + rec.image_id +
                                 "': " + why);
    };
    if (rec.width_px < 2 || rec.height_px < 2) {
        fail("width_px and height_px must be >= 2");
    }
    if (rec.lines.size() > kMaxLinesPerRecord) fail("more than 32 lines");
    for (size_t i = 0; i < rec.lines.size(); ++i) {
        const auto& q = rec.lines[i];
        for (double v : q) {
            if (!std::isfinite(v)) fail("non-finite endpoint coordinate");
        }
        if (!on_boundary(q[0], q[1], rec.width_px, rec.height_px) ||
            !on_boundary(q[2], q[3], rec.width_px, rec.height_px)) {
            fail("line " + std::to_string(i) +
                 " endpoint off the image boundary");
        }
        if (std::abs(q[0] - q[2]) < 1e-9 && std::abs(q[1] - q[3]) < 1e-9) {
            fail("line " + std::to_string(i) + " endpoints coincide");
        }
    }
    if (rec.composition_class) {
        const auto& classes = composition_classes();
        if (std::find(classes.begin(), classes.end(),
                      *rec.composition_class) == classes.end()) {
            fail("unknown composition_class '" + *rec.composition_class + "'");
        }
    }
}

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }

    std::vector<AnnotationRecord> records;
    if (doc.is_array()) {
        for (const json& j : doc) records.push_back(record_from_json(j));
    } else {
        records.push_back(record_from_json(doc));
    }
    for (const AnnotationRecord& rec : records) validate_record(rec);
    return records;
}

void save_annotations(const std::vector<AnnotationRecord>& records,
                      const std::string& path) {
    for (const AnnotationRecord& rec : records) validate_record(rec);
    json doc;
    if (records.size() == 1) {
        doc = record_to_json(records[0]);
    } else {
        doc = json::array();
        for (const AnnotationRecord& rec : records) {
            doc.push_back(record_to_json(rec));
        }
    }
    write_file_atomic(path, doc.dump(2) + "\n");
}

std::vector<Line> record_to_lines(const AnnotationRecord& rec) {
    const double cx = 0.5 * rec.width_px;
    const double cy = 0.5 * rec.height_px;
    std::vector<Line> lines;
    lines.reserve(rec.lines.size());
    for (const auto& q : rec.lines) {
        lines.push_back(segment_to_polar({q[0] - cx, q[1] - cy},
                                         {q[2] - cx, q[3] - cy}));
    }
    return lines;
}

AnnotationRecord lines_to_record(const std::string& image_id,
                                 const std::vector<Line>& lines,
                                 const Frame& frame) {
    AnnotationRecord rec;
    rec.image_id = image_id;
    rec.width_px = frame.width_px;
    rec.height_px = frame.height_px;
    const double cx = frame.half_width();
    const double cy = frame.half_height();
    for (const Line& line : lines) {
        const Segment seg = polar_to_segment(line, frame);
        rec.lines.push_back({seg.p0.x + cx, seg.p0.y + cy, seg.p1.x + cx,
                             seg.p1.y + cy});
    }
    return rec;
}

}  // namespace slcd
