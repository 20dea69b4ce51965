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

// Encodes one synthetic feature over the QP ladder and prints the
// rate-distortion points.

#include <cstdio>

#include "featcodec.hpp"

int main() {
  using namespace featcodec;
  const auto feature = synth_feature(TaskKind::Seg, SynthModel::Smooth, 0, 8);
  const auto table = TruncationTable::vtm();
  const auto plane = to_plane(feature, table);
  std::printf("seg %s -> plane %ux%u\n", shape_to_string(feature.shape).c_str(), plane.width, plane.height);
  std::printf("qp,bpfp,mse\n");
  for (int qp : kQpLadder) {
    CodecConfig cfg;
    cfg.qp = qp;
    const auto bs = encode(plane, cfg);
    const auto rec = from_plane(decode(bs));
    std::printf("%d,%.4f,%.6f\n", qp, bpfp(bs.total_bits(), feature.shape), feature_mse(feature, rec));
  }
}
