#pragma once

#include "chsurf/analysis.hpp"
#include "chsurf/assembly.hpp"
#include "chsurf/basis.hpp"
#include "chsurf/config.hpp"
#include "chsurf/csv.hpp"
#include "chsurf/models.hpp"
#include "chsurf/scenarios.hpp"
#include "chsurf/stepper.hpp"
