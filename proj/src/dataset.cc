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

#include "detfair/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "detfair/error.h"
#include "json.hpp"
#include "json_util.h"

namespace detfair {

using nlohmann::json;

char GroupLabelCode(GroupLabel label) {
  switch (label) {
    case GroupLabel::kLS:
      return 'L';
    case GroupLabel::kDS:
      return 'D';
    case GroupLabel::kUnknown:
      return 'U';
    case GroupLabel::kNotPerson:
      return 'N';
  }
  return '?';
}

GroupLabel ParseGroupLabel(std::string_view text) {
  if (text == "L" || text == "LS") return GroupLabel::kLS;
  if (text == "D" || text == "DS") return GroupLabel::kDS;
  if (text == "U") return GroupLabel::kUnknown;
  if (text == "N") return GroupLabel::kNotPerson;
  throw ValidationError("unknown group label '" + std::string(text) +
                        "' (expected LS, DS, U or N)");
}

std::string GroupLabelName(GroupLabel label) {
  switch (label) {
    case GroupLabel::kLS:
      return "LS";
    case GroupLabel::kDS:
      return "DS";
    case GroupLabel::kUnknown:
      return "U";
    case GroupLabel::kNotPerson:
      return "N";
  }
  return "?";
}

std::string TimeOfDayName(TimeOfDay value) {
  switch (value) {
    case TimeOfDay::kDay:
      return "day";
    case TimeOfDay::kNight:
      return "night";
    case TimeOfDay::kOther:
      return "other";
  }
  return "other";
}

TimeOfDay ParseTimeOfDay(std::string_view text) {
  if (text == "day" || text == "daytime") return TimeOfDay::kDay;
  if (text == "night") return TimeOfDay::kNight;
  if (text == "other" || text == "dawn/dusk" || text == "undefined") {
    return TimeOfDay::kOther;
  }
  throw ValidationError("unknown time_of_day '" + std::string(text) + "'");
}

void Dataset::Validate() const {
  std::unordered_set<std::string> image_ids;
  for (const ImageRecord& image : images) {
    if (!(image.width > 0.0) || !(image.height > 0.0)) {
      throw ValidationError("image '" + image.id +
                            "': width and height must be positive");
    }
    if (!image_ids.insert(image.id).second) {
      throw ValidationError("duplicate image id '" + image.id + "'");
    }
  }
  std::unordered_set<std::string> instance_ids;
  for (const GroundTruthInstance& instance : instances) {
    if (!instance_ids.insert(instance.id).second) {
      throw ValidationError("duplicate instance id '" + instance.id + "'");
    }
    if (!image_ids.contains(instance.image_id)) {
      throw ValidationError("instance '" + instance.id +
                            "' references unknown image '" +
                            instance.image_id + "'");
    }
    if (instance.group.has_value() && !instance.is_person()) {
      throw ValidationError("instance '" + instance.id + "' has class '" +
                            instance.class_name +
                            "' but carries a group label; groups apply to "
                            "persons only");
    }
  }
}

const ImageRecord* Dataset::FindImage(std::string_view image_id) const {
  for (const ImageRecord& image : images) {
    if (image.id == image_id) return &image;
  }
  return nullptr;
}

namespace {

BBox BoxFromJson(const json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 4) {
    throw ValidationError(context + ": bbox must be [x_min, y_min, x_max, "
                                    "y_max]");
  }
  std::array<double, 4> corners{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!value[i].is_number()) {
      throw ValidationError(context + ": bbox entries must be numbers");
    }
    corners[i] = value[i].get<double>();
  }
  try {
    return BBox::FromArray(corners);
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what());
  }
}

json BoxToJson(const BBox& box) {
  return json::array({box.x_min(), box.y_min(), box.x_max(), box.y_max()});
}

}  // namespace

Dataset ParseGroundTruth(std::string_view json_text) {
  const json root = ParseJsonText(json_text, "ground truth");
  if (!root.is_object()) {
    throw ValidationError("ground truth: top level must be an object");
  }
  Dataset dataset;
  for (const json& item : RequireArray(root, "images", "ground truth")) {
    const std::string id = RequireString(item, "id", "image");
    const std::string context = "image '" + id + "'";
    ImageRecord image;
    image.id = id;
    image.width = RequireNumber(item, "width", context);
    image.height = RequireNumber(item, "height", context);
    if (item.contains("time_of_day")) {
      image.time_of_day =
          ParseTimeOfDay(RequireString(item, "time_of_day", context));
    }
    dataset.images.push_back(std::move(image));
  }
  for (const json& item : RequireArray(root, "instances", "ground truth")) {
    const std::string id = RequireString(item, "id", "instance");
    const std::string context = "instance '" + id + "'";
    std::optional<GroupLabel> group;
    if (item.contains("group") && !item["group"].is_null()) {
      try {
        group = ParseGroupLabel(RequireString(item, "group", context));
      } catch (const ValidationError& e) {
        throw ValidationError(context + ": " + e.what());
      }
    }
    dataset.instances.push_back(GroundTruthInstance{
        .id = id,
        .image_id = RequireString(item, "image_id", context),
        .bbox = BoxFromJson(item.contains("bbox") ? item["bbox"] : json(),
                            context),
        .class_name = RequireString(item, "class", context),
        .group = group,
        .occluded = OptionalBool(item, "occluded", false, context),
        .ignore = OptionalBool(item, "ignore", false, context),
    });
  }
  dataset.Validate();
  return dataset;
}

Dataset LoadGroundTruth(const std::string& path) {
  return ParseGroundTruth(ReadTextFile(path));
}

std::string GroundTruthToJson(const Dataset& dataset) {
  json images = json::array();
  for (const ImageRecord& image : dataset.images) {
    images.push_back({{"id", image.id},
                      {"width", image.width},
                      {"height", image.height},
                      {"time_of_day", TimeOfDayName(image.time_of_day)}});
  }
  json instances = json::array();
  for (const GroundTruthInstance& instance : dataset.instances) {
    json item = {{"id", instance.id},
                 {"image_id", instance.image_id},
                 {"bbox", BoxToJson(instance.bbox)},
                 {"class", instance.class_name},
                 {"occluded", instance.occluded}};
    if (instance.group) item["group"] = GroupLabelName(*instance.group);
    if (instance.ignore) item["ignore"] = true;
    instances.push_back(std::move(item));
  }
  return json{{"images", images}, {"instances", instances}}.dump(2);
}

std::vector<Detection> ParseDetections(std::string_view json_text) {
  const json root = ParseJsonText(json_text, "detections");
  if (!root.is_array()) {
    throw ValidationError("detections: top level must be an array");
  }
  std::vector<Detection> detections;
  detections.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& item = root[i];
    const std::string context = "detection #" + std::to_string(i);
    const double score = RequireNumber(item, "score", context);
    if (!(score >= 0.0 && score <= 1.0)) {
      std::ostringstream msg;
      msg << context << ": score " << score << " outside [0, 1]";
      throw ValidationError(msg.str());
    }
    detections.push_back(Detection{
        .image_id = RequireString(item, "image_id", context),
        .bbox = BoxFromJson(item.contains("bbox") ? item["bbox"] : json(),
                            context),
        .class_name = RequireString(item, "class", context),
        .score = score,
    });
  }
  return detections;
}

std::vector<Detection> LoadDetections(const std::string& path) {
  return ParseDetections(ReadTextFile(path));
}

std::string DetectionsToJson(const std::vector<Detection>& detections) {
  json out = json::array();
  for (const Detection& det : detections) {
    out.push_back({{"image_id", det.image_id},
                   {"bbox", BoxToJson(det.bbox)},
                   {"class", det.class_name},
                   {"score", det.score}});
  }
  return out.dump(2);
}

Dataset ParseBdd100kLabels(std::string_view json_text, double image_width,
                           double image_height) {
  const json root = ParseJsonText(json_text, "BDD100K labels");
  if (!root.is_array()) {
    throw ValidationError("BDD100K labels: top level must be an array");
  }
  Dataset dataset;
  for (const json& frame : root) {
    const std::string name = RequireString(frame, "name", "frame");
    ImageRecord image{.id = name,
                      .width = image_width,
                      .height = image_height,
                      .time_of_day = TimeOfDay::kOther};
    if (frame.contains("attributes") &&
        frame["attributes"].contains("timeofday")) {
      image.time_of_day =
          ParseTimeOfDay(frame["attributes"]["timeofday"].get<std::string>());
    }
    dataset.images.push_back(image);
    if (!frame.contains("labels") || !frame["labels"].is_array()) continue;
    std::size_t ordinal = 0;
    for (const json& label : frame["labels"]) {
      ++ordinal;
      if (!label.contains("box2d")) continue;
      const json& box = label["box2d"];
      std::string id = name + "#" + std::to_string(ordinal);
      if (label.contains("id")) {
        id = label["id"].is_string() ? label["id"].get<std::string>()
                                     : label["id"].dump();
      }
      const std::string context = "label '" + id + "'";
      bool occluded = false;
      if (label.contains("attributes") &&
          label["attributes"].contains("occluded")) {
        occluded = label["attributes"]["occluded"].get<bool>();
      }
      // Newer label releases call persons "pedestrian".
      std::string category = RequireString(label, "category", context);
      if (category == "pedestrian") category = kPersonClass;
      dataset.instances.push_back(GroundTruthInstance{
          .id = id,
          .image_id = name,
          .bbox = BBox(RequireNumber(box, "x1", context),
                       RequireNumber(box, "y1", context),
                       RequireNumber(box, "x2", context),
                       RequireNumber(box, "y2", context)),
          .class_name = category,
          .group = std::nullopt,
          .occluded = occluded,
          .ignore = false,
      });
    }
  }
  dataset.Validate();
  return dataset;
}

Dataset ApplyMinAreaFilter(Dataset dataset, double threshold) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw ValidationError("min-area threshold must be a finite value >= 0");
  }
  for (GroundTruthInstance& instance : dataset.instances) {
    if (instance.is_person() && Area(instance.bbox) < threshold) {
      instance.ignore = true;
    }
  }
  return dataset;
}

Dataset Slice(Dataset dataset, std::string_view attribute,
              std::string_view value) {
  if (attribute == "occlusion") {
    if (value != "unoccluded") {
      throw ValidationError("occlusion slice accepts only 'unoccluded'");
    }
    for (GroundTruthInstance& instance : dataset.instances) {
      if (instance.is_person() && instance.occluded) instance.ignore = true;
    }
    return dataset;
  }
  if (attribute == "time_of_day") {
    const TimeOfDay keep = ParseTimeOfDay(value);
    std::set<std::string, std::less<>> kept_images;
    std::erase_if(dataset.images, [&](const ImageRecord& image) {
      if (image.time_of_day != keep) return true;
      kept_images.insert(image.id);
      return false;
    });
    std::erase_if(dataset.instances, [&](const GroundTruthInstance& inst) {
      return !kept_images.contains(inst.image_id);
    });
    return dataset;
  }
  if (attribute == "group") {
    const GroupLabel target = ParseGroupLabel(value);
    if (target != GroupLabel::kLS && target != GroupLabel::kDS) {
      throw ValidationError("group slice accepts only LS or DS");
    }
    for (GroundTruthInstance& instance : dataset.instances) {
      if (instance.is_person() && instance.group != target) {
        instance.ignore = true;
      }
    }
    return dataset;
  }
  throw ValidationError("unknown slice attribute '" + std::string(attribute) +
                        "' (expected occlusion, time_of_day or group)");
}

std::map<GroupLabel, std::size_t> CountPersonGroups(const Dataset& dataset) {
  std::map<GroupLabel, std::size_t> counts;
  for (const GroundTruthInstance& instance : dataset.instances) {
    if (instance.is_person() && instance.group) ++counts[*instance.group];
  }
  return counts;
}

}  // namespace detfair
