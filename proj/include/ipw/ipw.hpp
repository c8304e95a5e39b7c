#pragma once

// Umbrella header.

#include "ipw/calibration.hpp"
#include "ipw/cli.hpp"
#include "ipw/credal.hpp"
#include "ipw/defaults.hpp"
#include "ipw/errors.hpp"
#include "ipw/kb.hpp"
#include "ipw/logic.hpp"
#include "ipw/parse.hpp"
#include "ipw/policy.hpp"
#include "ipw/rational.hpp"
#include "ipw/simplex.hpp"
#include "ipw/simulate.hpp"
