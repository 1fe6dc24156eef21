#pragma once

#include "levypop/analysis.hpp"
#include "levypop/errors.hpp"
#include "levypop/fpe.hpp"
#include "levypop/grid.hpp"
#include "levypop/models.hpp"
#include "levypop/pbif.hpp"
#include "levypop/rng.hpp"
#include "levypop/simulator.hpp"
#include "levypop/stable.hpp"
