// Copyright 2026 The featcodec Authors
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

#pragma once

// End-to-end glue: truncate -> quantize -> pack on the way in, unpack ->
// dequantize on the way out.

#include "featcodec/feature_io.hpp"
#include "featcodec/packing.hpp"
#include "featcodec/preprocess.hpp"

namespace featcodec {

struct PreprocessOptions {
  bool truncate = true;  // false: quantization only, over the empirical range
  int bits = 10;
};

inline QuantizedTensor preprocess_feature(const FeatureTensor& t, const TruncationTable& table,
                                          const PreprocessOptions& opt = {}) {
  const auto regions = opt.truncate ? regions_for(t, table) : empirical_regions(t);
  return quantize_uniform(truncate(t, regions), regions, opt.bits);
}

inline PackedPlane to_plane(const FeatureTensor& t, const TruncationTable& table, const PreprocessOptions& opt = {}) {
  return pack(preprocess_feature(t, table, opt));
}

inline FeatureTensor from_plane(const PackedPlane& p) { return dequantize(unpack(p)); }

}  // namespace featcodec
