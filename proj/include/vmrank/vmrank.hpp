#pragma once

// Umbrella header: benchmark-driven performance and performance-cost
// ranking of cloud VM types.

#include "vmrank/catalog.hpp"
#include "vmrank/error.hpp"
#include "vmrank/groups.hpp"
#include "vmrank/measurements.hpp"
#include "vmrank/ranking.hpp"
#include "vmrank/report.hpp"
#include "vmrank/scoring.hpp"
#include "vmrank/validation.hpp"
#include "vmrank/weightspace.hpp"
