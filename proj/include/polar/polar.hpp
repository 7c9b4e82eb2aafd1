#pragma once

#include "polar/config.hpp"
#include "polar/distance.hpp"
#include "polar/error.hpp"
#include "polar/experiments.hpp"
#include "polar/field_io.hpp"
#include "polar/initdata.hpp"
#include "polar/report.hpp"
#include "polar/selftest.hpp"
#include "polar/solver.hpp"
#include "polar/spectral.hpp"
#include "polar/torus_grid.hpp"
#include "polar/variational.hpp"
