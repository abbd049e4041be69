#pragma once

// Umbrella header for the q-boson verification toolkit.

#include "qboson/errors.hpp"
#include "qboson/fock.hpp"
#include "qboson/residual.hpp"
#include "qboson/phase.hpp"
#include "qboson/densities.hpp"
#include "qboson/deformed.hpp"
#include "qboson/recipe.hpp"
#include "qboson/multimode.hpp"
#include "qboson/dump.hpp"
#include "qboson/suite.hpp"
