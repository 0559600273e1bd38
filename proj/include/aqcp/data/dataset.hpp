// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace aqcp::data {

struct LabelledPoint {
  double x = 0.0;
  double y = 0.0;
};

struct DatasetSplit {
  std::vector<LabelledPoint> train;
  std::vector<LabelledPoint> calibration;
  std::vector<LabelledPoint> test;
  std::uint64_t seed = 0;
};

}  // namespace aqcp::data
