#pragma once

/**
 * @file annotations.hpp
 * @brief Line annotation records and their JSON file format.
 *
 * An annotation file holds one record (a JSON object) or a list of records
 * (a JSON array). Endpoints are given in top-left pixel coordinates
 * (x right, y down, origin at the top-left image corner) and must lie on
 * the image boundary within 0.5 px:
 *
 *   {
 *     "image_id": "scene_0001",
 *     "width_px": 480,
 *     "height_px": 480,
 *     "lines": [[x1, y1, x2, y2], ...],
 *     "composition_class": "Horizontal"   // optional
 *   }
 */

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "slcd/geometry.hpp"

namespace slcd {

struct AnnotationRecord {
    std::string image_id;
    int width_px{};
    int height_px{};
    std::vector<std::array<double, 4>> lines;  // x1, y1, x2, y2
    std::optional<std::string> composition_class;

    Frame frame() const { return Frame(width_px, height_px); }
};

/// The seven composition class names accepted in annotation records.
const std::vector<std::string>& composition_classes();

/// Validates one record against the format invariants; throws
/// InvariantViolation naming the record on failure.
void validate_record(const AnnotationRecord& record);

/// Loads and validates all records of a file. Throws ParseError for
/// malformed input and InvariantViolation for well-formed records that
/// break an invariant.
std::vector<AnnotationRecord> load_annotations(const std::string& path);

/// Saves records (single object for one record, array otherwise);
/// write is atomic.
void save_annotations(const std::vector<AnnotationRecord>& records,
                      const std::string& path);

/// Endpoint quadruples of a record converted to canonical centered polar
/// lines.
std::vector<Line> record_to_lines(const AnnotationRecord& record);

/// Annotation record for a set of lines: each line is converted to its
/// boundary chord in top-left pixel coordinates.
AnnotationRecord lines_to_record(const std::string& image_id,
                                 const std::vector<Line>& lines,
                                 const Frame& frame);

}  // namespace slcd
