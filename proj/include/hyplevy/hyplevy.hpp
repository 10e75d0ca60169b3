#pragma once

#include "hyplevy/errors.hpp"
#include "hyplevy/special_functions.hpp"
#include "hyplevy/params.hpp"
#include "hyplevy/exponent.hpp"
#include "hyplevy/lattice.hpp"
#include "hyplevy/wiener_hopf.hpp"
#include "hyplevy/levy_measure.hpp"
#include "hyplevy/ladder.hpp"
