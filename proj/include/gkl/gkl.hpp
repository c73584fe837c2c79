// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gkl/compensated.hpp"
#include "gkl/error.hpp"
#include "gkl/funcspace.hpp"
#include "gkl/gauss_map.hpp"
#include "gkl/hurwitz.hpp"
#include "gkl/kuzmin.hpp"
#include "gkl/measure.hpp"
#include "gkl/rng.hpp"
#include "gkl/transfer.hpp"
