#pragma once

#include "paoi/aoi_analytic.hpp"
#include "paoi/commands.hpp"
#include "paoi/config.hpp"
#include "paoi/constants.hpp"
#include "paoi/empirical.hpp"
#include "paoi/error.hpp"
#include "paoi/quadrature.hpp"
#include "paoi/queue_sim.hpp"
#include "paoi/report.hpp"
#include "paoi/scenario.hpp"
#include "paoi/thz_link.hpp"
#include "paoi/validation.hpp"
