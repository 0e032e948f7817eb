#pragma once

#include "pdm/classical.hpp"
#include "pdm/coord.hpp"
#include "pdm/dual.hpp"
#include "pdm/errors.hpp"
#include "pdm/expr.hpp"
#include "pdm/grid.hpp"
#include "pdm/interval.hpp"
#include "pdm/operators.hpp"
#include "pdm/profiles.hpp"
#include "pdm/spectra.hpp"
#include "pdm/verify.hpp"
