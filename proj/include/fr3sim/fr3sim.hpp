#pragma once

#include "fr3sim/association.hpp"
#include "fr3sim/beamforming.hpp"
#include "fr3sim/channel.hpp"
#include "fr3sim/engine.hpp"
#include "fr3sim/errors.hpp"
#include "fr3sim/geometry.hpp"
#include "fr3sim/link.hpp"
#include "fr3sim/output.hpp"
#include "fr3sim/parallel.hpp"
#include "fr3sim/power.hpp"
#include "fr3sim/radio_catalog.hpp"
#include "fr3sim/rng.hpp"
#include "fr3sim/scenario.hpp"
#include "fr3sim/units.hpp"
