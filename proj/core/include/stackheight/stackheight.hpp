#pragma once

#include "stackheight/counting.hpp"
#include "stackheight/exact.hpp"
#include "stackheight/geometry_cones.hpp"
#include "stackheight/polyhedral.hpp"
#include "stackheight/predict.hpp"
#include "stackheight/primes.hpp"
#include "stackheight/raised_heights.hpp"
#include "stackheight/sparse_poly.hpp"
#include "stackheight/stacky_fan.hpp"
#include "stackheight/zeta_local.hpp"
