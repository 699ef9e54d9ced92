#pragma once

#include "geoent/campaign.hpp"
#include "geoent/canonicalize.hpp"
#include "geoent/closed_form.hpp"
#include "geoent/invariants.hpp"
#include "geoent/overlap.hpp"
#include "geoent/random.hpp"
#include "geoent/state.hpp"
#include "geoent/state_io.hpp"
