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

#include "featcodec/analysis.hpp"
#include "featcodec/config.hpp"
#include "featcodec/dct.hpp"
#include "featcodec/errors.hpp"
#include "featcodec/external_codec.hpp"
#include "featcodec/feature_io.hpp"
#include "featcodec/intra_codec.hpp"
#include "featcodec/metrics.hpp"
#include "featcodec/packing.hpp"
#include "featcodec/pipeline.hpp"
#include "featcodec/preprocess.hpp"
#include "featcodec/range_coder.hpp"
#include "featcodec/synth.hpp"
#include "featcodec/types.hpp"
