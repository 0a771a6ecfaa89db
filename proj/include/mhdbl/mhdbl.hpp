#pragma once

// Umbrella header for the mhdbl library.

#include "mhdbl/coefficients.hpp"
#include "mhdbl/config.hpp"
#include "mhdbl/cutoff.hpp"
#include "mhdbl/energy.hpp"
#include "mhdbl/errors.hpp"
#include "mhdbl/experiments.hpp"
#include "mhdbl/fd.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/interp.hpp"
#include "mhdbl/io.hpp"
#include "mhdbl/manufactured.hpp"
#include "mhdbl/mat3.hpp"
#include "mhdbl/matrices.hpp"
#include "mhdbl/outflow.hpp"
#include "mhdbl/params.hpp"
#include "mhdbl/physics.hpp"
#include "mhdbl/report_io.hpp"
#include "mhdbl/residuals.hpp"
#include "mhdbl/run.hpp"
#include "mhdbl/solver.hpp"
#include "mhdbl/state.hpp"
#include "mhdbl/transform.hpp"
#include "mhdbl/tridiag.hpp"
