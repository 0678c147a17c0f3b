#pragma once

// Umbrella header for the gZK pseudospectral laboratory.

#include "gzk/config.hpp"
#include "gzk/dynamics.hpp"
#include "gzk/estimates.hpp"
#include "gzk/fft.hpp"
#include "gzk/grid.hpp"
#include "gzk/growth.hpp"
#include "gzk/imethod.hpp"
#include "gzk/invariants.hpp"
#include "gzk/io.hpp"
#include "gzk/rational.hpp"
#include "gzk/spectral_ops.hpp"
#include "gzk/thresholds.hpp"
