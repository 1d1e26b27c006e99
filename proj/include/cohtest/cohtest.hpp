// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header: the full library.

#pragma once

#include "cohtest/analysis.hpp"
#include "cohtest/bench.hpp"
#include "cohtest/coherence.hpp"
#include "cohtest/config.hpp"
#include "cohtest/csv.hpp"
#include "cohtest/dbt.hpp"
#include "cohtest/driver.hpp"
#include "cohtest/errors.hpp"
#include "cohtest/fft.hpp"
#include "cohtest/glm.hpp"
#include "cohtest/parallel.hpp"
#include "cohtest/rng.hpp"
#include "cohtest/stats.hpp"
#include "cohtest/surrogate.hpp"
#include "cohtest/sweep.hpp"
#include "cohtest/types.hpp"
