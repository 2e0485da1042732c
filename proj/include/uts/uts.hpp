#pragma once

// Umbrella header for the uncertain time series toolkit.

#include "uts/fixtures.hpp"
#include "uts/normal_uncertainty.hpp"
#include "uts/plots.hpp"
#include "uts/report.hpp"
#include "uts/series_csv.hpp"
#include "uts/time_series.hpp"
#include "uts/uar.hpp"
#include "uts/validation.hpp"
