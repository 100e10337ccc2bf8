// Copyright 2026 The Detfair Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Ground truth, detections, and attribute slicing.
//
// Canonical ground-truth JSON:
//
//   {"images": [{"id", "width", "height", "time_of_day"}],
//    "instances": [{"id", "image_id", "bbox": [x_min, y_min, x_max, y_max],
//                   "class", "group"?: "LS"|"DS"|"U"|"N", "occluded",
//                   "ignore"?}]}
//
// Detection JSON: [{"image_id", "bbox": [...], "class", "score"}].
//
// Unknown fields are ignored. Filters never delete ground truth: they set
// the ignore flag, so detections that land on a filtered box are neither
// rewarded nor penalized downstream.

#ifndef DETFAIR_DATASET_H_
#define DETFAIR_DATASET_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "detfair/geometry.h"

namespace detfair {

inline constexpr char kPersonClass[] = "person";
inline constexpr double kDefaultMinArea = 10000.0;

enum class GroupLabel { kLS, kDS, kUnknown, kNotPerson };

// Single-letter codes used in vote files and histogram patterns.
char GroupLabelCode(GroupLabel label);
// Accepts "L"/"LS", "D"/"DS", "U", "N".
GroupLabel ParseGroupLabel(std::string_view text);
// "LS", "DS", "U", "N".
std::string GroupLabelName(GroupLabel label);

enum class TimeOfDay { kDay, kNight, kOther };

std::string TimeOfDayName(TimeOfDay value);
TimeOfDay ParseTimeOfDay(std::string_view text);

struct ImageRecord {
  std::string id;
  double width = 0.0;
  double height = 0.0;
  TimeOfDay time_of_day = TimeOfDay::kOther;
};

struct GroundTruthInstance {
  std::string id;
  std::string image_id;
  BBox bbox;
  std::string class_name;
  std::optional<GroupLabel> group;
  bool occluded = false;
  bool ignore = false;

  bool is_person() const { return class_name == kPersonClass; }
};

struct Detection {
  std::string image_id;
  BBox bbox;
  std::string class_name;
  double score = 0.0;
};

struct Dataset {
  std::vector<ImageRecord> images;
  std::vector<GroundTruthInstance> instances;

  // Throws ValidationError naming the first offending record.
  void Validate() const;

  const ImageRecord* FindImage(std::string_view image_id) const;
};

Dataset ParseGroundTruth(std::string_view json_text);
Dataset LoadGroundTruth(const std::string& path);
std::string GroundTruthToJson(const Dataset& dataset);

std::vector<Detection> ParseDetections(std::string_view json_text);
std::vector<Detection> LoadDetections(const std::string& path);
std::string DetectionsToJson(const std::vector<Detection>& detections);

// Adapter for BDD100K label files (a JSON array of frames with "name",
// "attributes.timeofday" and "labels[].box2d"). Skin-tone groups are not part
// of BDD100K, so instances come out unlabeled.
Dataset ParseBdd100kLabels(std::string_view json_text, double image_width,
                           double image_height);

// Person instances with area < threshold get ignore = true. The comparison
// is strict, so a box of exactly `threshold` pixels stays in.
Dataset ApplyMinAreaFilter(Dataset dataset, double threshold);

// Attribute slices:
//   "occlusion"   = "unoccluded"          occluded persons become ignore
//   "time_of_day" = "day"|"night"|"other" drops the other images
//   "group"       = "LS"|"DS"             persons outside the group become
//                                         ignore (the per-group evaluation
//                                         scope lives in GroupEvaluate)
Dataset Slice(Dataset dataset, std::string_view attribute,
              std::string_view value);

// Count of person instances per group label (ignoring the ignore flag).
std::map<GroupLabel, std::size_t> CountPersonGroups(const Dataset& dataset);

}  // namespace detfair

#endif  // DETFAIR_DATASET_H_
