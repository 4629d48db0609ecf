#pragma once

#include "errors.hpp"
#include "special_functions.hpp"
#include "jet.hpp"
#include "polynomial.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "parallel.hpp"
#include "fitting.hpp"
#include "elastic_core.hpp"
#include "probe.hpp"
#include "scene.hpp"
#include "ball_transform.hpp"
#include "volume_potential.hpp"
#include "corner_indicator.hpp"
#include "dimension_reduction.hpp"
#include "nonradiating.hpp"
#include "io.hpp"
#include "verify.hpp"
