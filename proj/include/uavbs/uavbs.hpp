#pragma once

#include "uavbs/algorithms.hpp"
#include "uavbs/channel.hpp"
#include "uavbs/errors.hpp"
#include "uavbs/model_export.hpp"
#include "uavbs/placement.hpp"
#include "uavbs/radius.hpp"
#include "uavbs/sim.hpp"
