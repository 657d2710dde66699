// Copyright 2026 The seldqa Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELDQA_INSTANCES_HPP_
#define SELDQA_INSTANCES_HPP_

#include <span>
#include <vector>

#include "seldqa/scene_model.hpp"

namespace seldqa {

/// Largest (max - min) spread for which a dimension still counts as static.
struct StaticTolerances {
  double azimuth_deg = 5.0;
  double elevation_deg = 5.0;
  double distance_cm = 10.0;

  /// Throws RangeError if any tolerance is negative.
  void Validate() const;
};

struct TrajectorySummary {
  TrajectoryStat azimuth;
  TrajectoryStat elevation;
  TrajectoryStat distance;
  bool is_moving = false;
};

/// Summarizes one instance's frames. `frames` must be non-empty, sorted by
/// frame and contiguous. Extremum timestamps use the first frame that
/// attains the extremum.
TrajectorySummary SummarizeTrajectory(std::span<const FrameAnnotation> frames,
                                      const StaticTolerances& tol);

/// Groups a clip's frames by source, then class, and splits each group into
/// maximal runs of consecutive frames. Output is sorted by
/// (source_id, class_idx, onset); instance_idx counts runs of the same
/// (source, class) in onset order. Input frame order does not matter.
std::vector<EventInstance> ExtractInstances(const Clip& clip,
                                            const StaticTolerances& tol);

}  // namespace seldqa

#endif  // SELDQA_INSTANCES_HPP_
