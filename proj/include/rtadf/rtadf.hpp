#pragma once

// Right-tail ADF bubble detection toolkit: recursive explosive-root tests
// (ADF, RADF, SADF, GSADF/BSADF), Monte Carlo critical values, bubble
// date-stamping, and synthetic bubble-process generators.

#include "rtadf/adf.hpp"
#include "rtadf/cache.hpp"
#include "rtadf/dates.hpp"
#include "rtadf/datestamp.hpp"
#include "rtadf/error.hpp"
#include "rtadf/mc.hpp"
#include "rtadf/ols.hpp"
#include "rtadf/parallel.hpp"
#include "rtadf/recursive.hpp"
#include "rtadf/rng.hpp"
#include "rtadf/series.hpp"
#include "rtadf/synth.hpp"
#include "rtadf/version.hpp"
#include "rtadf/window.hpp"
