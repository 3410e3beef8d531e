#pragma once

#include "robloc/bounds.hpp"
#include "robloc/breakdown.hpp"
#include "robloc/conditions.hpp"
#include "robloc/depth.hpp"
#include "robloc/errors.hpp"
#include "robloc/estimate_set.hpp"
#include "robloc/estimators.hpp"
#include "robloc/geometry.hpp"
#include "robloc/io.hpp"
#include "robloc/metric.hpp"
